"""Aerial-RIS Markov decision process: a UAV-mounted RIS over a two-cell
CoMP-NOMA network with obstacles.

Discrete time steps: the agent moves the UAV on a horizontal grid, sets the
RIS phases and the per-BS power-allocation factors; channels are redrawn
i.i.d. every slot; the reward is the QoS-scaled sum rate minus a safety
penalty. Moves that would leave the area or enter a forbidden zone are
canceled (the position holds) and flagged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import RicianParams, sample_rician_vector, substream
from .ris import wrap_phase
from .scenarios import AerialScenario

_STREAM_ENV = 501

MOVES = ((-1.0, 0.0), (1.0, 0.0), (0.0, -1.0), (0.0, 1.0), (0.0, 0.0))
MOVE_NAMES = ("left", "right", "down", "up", "hover")


@dataclass(frozen=True)
class MdpState:
    """UAV position, per-obstacle distances, allocation factors, last rates."""

    uav_xy: np.ndarray
    obstacle_dists: np.ndarray
    alloc_factors: np.ndarray
    rates: np.ndarray

    def vector(self) -> np.ndarray:
        return np.concatenate(
            [self.uav_xy, self.obstacle_dists, self.alloc_factors, self.rates]
        )


@dataclass(frozen=True)
class MdpAction:
    """Hybrid action: one discrete move, K phase shifts, I allocation factors."""

    move: int
    phases: np.ndarray
    alloc_factors: np.ndarray

    def __post_init__(self):
        if not 0 <= self.move < len(MOVES):
            raise ValueError("move index out of range")
        object.__setattr__(self, "phases", wrap_phase(self.phases))
        alloc = np.asarray(self.alloc_factors, dtype=float)
        if np.any(alloc <= 0.5) or np.any(alloc >= 1.0):
            raise ValueError("allocation factors must lie in (0.5, 1)")
        object.__setattr__(self, "alloc_factors", alloc)


class ArisEnv:
    """Single-agent environment; one instance is single-threaded."""

    def __init__(self, scenario: AerialScenario, seed: int = 0,
                 pin_position: tuple[float, float] | None = None):
        self.scn = scenario
        self.seed = seed
        self.pin_position = pin_position
        self._users = [np.asarray(p, dtype=float) for p in scenario.center_positions]
        self._users.append(np.asarray(scenario.edge_position, dtype=float))
        self._bs = [np.asarray(p, dtype=float) for p in scenario.bs_positions]
        self._obstacles = [np.asarray(p[:2], dtype=float) for p in scenario.obstacle_positions]
        self._rng = None
        self._t = 0
        self._pos = None
        self._alloc = None
        self._episode = -1
        self.last_violation = False
        self.last_qos = None

    # Geometry ------------------------------------------------------------
    def _uav_point(self):
        return np.array([self._pos[0], self._pos[1], self.scn.ris_altitude])

    def _obstacle_dists(self) -> np.ndarray:
        return np.array([float(np.linalg.norm(self._pos - o)) for o in self._obstacles])

    def _inside(self, xy) -> bool:
        half = self.scn.half_extent
        return abs(xy[0]) <= half and abs(xy[1]) <= half

    def _safe(self, xy) -> bool:
        return self._inside(xy) and all(
            np.linalg.norm(xy - o) >= self.scn.d_min for o in self._obstacles
        )

    # Channels ------------------------------------------------------------
    def _rician_vec(self, endpoint: np.ndarray) -> np.ndarray:
        """RIS-side channel vector toward endpoint, with azimuth steering."""
        uav = self._uav_point()
        d = float(np.linalg.norm(uav - endpoint))
        aoa = float(wrap_phase(math.atan2(endpoint[1] - uav[1], endpoint[0] - uav[0])))
        gain = self.scn.rho_o / d**self.scn.alpha_ris
        vec = sample_rician_vector(
            self.scn.k_elements, RicianParams(self.scn.kappa, aoa), self._rng
        )
        return math.sqrt(gain) * vec

    def _rayleigh(self, p: np.ndarray, q: np.ndarray, alpha: float) -> complex:
        d = float(np.linalg.norm(p - q))
        gain = self.scn.rho_o / d**alpha
        v = (self._rng.standard_normal() + 1j * self._rng.standard_normal()) * math.sqrt(0.5)
        return math.sqrt(gain) * v

    def _draw_channels(self) -> dict:
        scn = self.scn
        ch = {
            "bs_ris": [self._rician_vec(bs) for bs in self._bs],
            "ris_user": [self._rician_vec(u) for u in self._users],
            "direct": np.zeros((scn.n_bs, len(self._users)), dtype=complex),
        }
        for i, bs in enumerate(self._bs):
            for u, pu in enumerate(self._users[:-1]):
                alpha = scn.alpha_direct if u == i else scn.alpha_ici
                ch["direct"][i, u] = self._rayleigh(bs, pu, alpha)
            # Direct BS-edge links are blocked by obstacles.
        return ch

    def _rates(self, ch: dict, phases: np.ndarray, alloc: np.ndarray) -> np.ndarray:
        scn = self.scn
        rho = scn.rho
        phasor = np.exp(1j * phases)
        n_users = len(self._users)
        eff = np.empty((scn.n_bs, n_users), dtype=complex)
        for i in range(scn.n_bs):
            for u in range(n_users):
                cascade = np.conj(ch["ris_user"][u]) * phasor * ch["bs_ris"][i]
                eff[i, u] = ch["direct"][i, u] + np.sum(cascade)
        g = np.abs(eff) ** 2
        edge = n_users - 1
        rates = np.empty(n_users)
        if scn.oma:
            # Equal-time TDMA: centers in slot 1 (mutual full-power
            # interference), cooperative JT toward the edge in slot 2.
            for i in range(scn.n_bs):
                ici = sum(g[j, i] for j in range(scn.n_bs) if j != i)
                rates[i] = 0.5 * math.log2(1.0 + rho * g[i, i] / (rho * ici + 1.0))
            rates[edge] = 0.5 * math.log2(1.0 + rho * float(np.sum(g[:, edge])))
            return rates
        num_f = sum(alloc[i] * rho * g[i, edge] for i in range(scn.n_bs))
        den_f = sum((1.0 - alloc[i]) * rho * g[i, edge] for i in range(scn.n_bs)) + 1.0
        rates[edge] = math.log2(1.0 + num_f / den_f)
        for i in range(scn.n_bs):
            other = 1 - i
            ici = rho * g[other, i]
            rates[i] = math.log2(1.0 + (1.0 - alloc[i]) * rho * g[i, i] / (ici + 1.0))
        return rates

    # MDP interface ---------------------------------------------------------
    def reset(self) -> MdpState:
        self._episode += 1
        self._rng = substream(self.seed, _STREAM_ENV, self._episode)
        start = self.pin_position if self.pin_position is not None else self.scn.uav_start
        self._pos = np.asarray(start, dtype=float).copy()
        if not self._safe(self._pos):
            raise ValueError("start position violates the safety constraints")
        self._t = 0
        self._alloc = np.full(self.scn.n_bs, self.scn.default_alloc)
        ch = self._draw_channels()
        rates = self._rates(ch, np.zeros(self.scn.k_elements), self._alloc)
        return MdpState(self._pos.copy(), self._obstacle_dists(), self._alloc.copy(), rates)

    def qos_indicators(self, rates: np.ndarray) -> np.ndarray:
        """1 when the rate is at or below its target (violation uses <=)."""
        scn = self.scn
        mins = np.array([scn.r_center_min] * scn.n_bs + [scn.r_edge_min])
        return (rates <= mins).astype(float)

    def reward(self, rates: np.ndarray, qos: np.ndarray, safety_flag: bool) -> float:
        r_sum = float(np.sum(rates))
        penalty = self.scn.k_viol if safety_flag else 0.0
        return r_sum * (1.0 - float(np.mean(qos))) - penalty

    def step(self, action: MdpAction) -> tuple[MdpState, float, bool]:
        if self._pos is None:
            raise RuntimeError("call reset() before step()")
        if action.phases.size != self.scn.k_elements:
            raise ValueError("phase action length must equal k_elements")
        if action.alloc_factors.size != self.scn.n_bs:
            raise ValueError("one allocation factor per BS required")
        move = np.asarray(MOVES[action.move])
        if self.pin_position is not None:
            move = np.zeros(2)
        candidate = self._pos + self.scn.step_length * move
        violated = not self._safe(candidate)
        if not violated:
            self._pos = candidate
        self._alloc = action.alloc_factors.copy()
        ch = self._draw_channels()
        rates = self._rates(ch, action.phases, self._alloc)
        qos = self.qos_indicators(rates)
        reward = self.reward(rates, qos, violated)
        self._t += 1
        done = self._t >= self.scn.t_slots
        self.last_violation = violated
        self.last_qos = qos
        state = MdpState(self._pos.copy(), self._obstacle_dists(), self._alloc.copy(), rates)
        return state, reward, done
