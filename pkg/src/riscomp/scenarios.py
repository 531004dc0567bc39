"""Scenario definitions: geometry, channel parameters, powers, thresholds.

One dataclass per network family, with table defaults. All dB/dBm fields are
converted to linear scale here, once, and downstream code sees only linear
quantities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import NakagamiParams
from .units import db_to_linear, dbm_to_watts, noise_power_watts


def _dist(p: tuple, q: tuple) -> float:
    return float(np.linalg.norm(np.asarray(p, dtype=float) - np.asarray(q, dtype=float)))


@dataclass(frozen=True)
class CoordinatedScenario:
    """Two-cell STAR-RIS coordinated NOMA cluster.

    Two BSs each serve a center user; the shared edge user is served by both.
    The STAR-RIS sits between the cells: the edge user lies in its
    transmission region (amplitude share beta_t), center users in the
    reflection region (beta_r).
    """

    p_t_dbm: float = -10.0
    rho_o_db: float = -30.0
    bandwidth_hz: float = 1e6
    noise_figure_db: float = 12.0
    zeta_center: float = 0.3
    zeta_edge: float = 0.7
    k_elements: int = 34
    beta_t: float = 0.5
    beta_r: float = 0.5
    assignment: tuple[int, int] = (17, 17)
    # Nakagami shapes: direct/interfering BS-user links, BS-RIS, RIS-user.
    m_direct: float = 1.0
    m_bs_ris: float = 2.0
    m_ris_user: float = 2.0
    # Path-loss exponents per link class.
    alpha_center: float = 3.0
    alpha_edge: float = 3.5
    alpha_bs_ris: float = 3.0
    alpha_ris_center: float = 2.7
    alpha_ris_edge: float = 2.3
    alpha_ici: float = 4.0
    # Rician factors (dB) for the RIS-side links of the complex-channel model.
    kappa_ris_center_db: float = 3.0
    kappa_ris_edge_db: float = 4.0
    # Geometry (meters).
    bs1: tuple = (-50.0, 0.0, 25.0)
    bs2: tuple = (50.0, 0.0, 25.0)
    ris: tuple = (0.0, 25.0, 5.0)
    center1: tuple = (-40.0, 18.0, 1.0)
    center2: tuple = (30.0, 22.0, 1.0)
    edge: tuple = (0.0, 35.0, 1.0)
    thresholds_db: tuple[float, float] = (0.0, 0.0)  # (center, edge) SINR thresholds

    def __post_init__(self):
        if abs(self.beta_t + self.beta_r - 1.0) > 1e-12:
            raise ValueError("beta_t + beta_r must equal 1")
        if sum(self.assignment) != self.k_elements:
            raise ValueError("assignment must sum to k_elements")
        if not 0.0 < self.zeta_center < 0.5 < self.zeta_edge < 1.0:
            raise ValueError("allocation factors violate the decoding order")
        if abs(self.zeta_center + self.zeta_edge - 1.0) > 1e-12:
            raise ValueError("allocation factors must sum to 1")

    # Linear-scale deriveds ------------------------------------------------
    @property
    def rho_o(self) -> float:
        return db_to_linear(self.rho_o_db)

    @property
    def tx_power_w(self) -> float:
        return dbm_to_watts(self.p_t_dbm)

    @property
    def noise_w(self) -> float:
        return noise_power_watts(self.bandwidth_hz, self.noise_figure_db)

    @property
    def rho(self) -> float:
        """Transmit SNR rho = P_t / sigma^2."""
        return self.tx_power_w / self.noise_w

    @property
    def threshold_center(self) -> float:
        return db_to_linear(self.thresholds_db[0])

    @property
    def threshold_edge(self) -> float:
        return db_to_linear(self.thresholds_db[1])

    def omega(self, p: tuple, q: tuple, alpha: float) -> float:
        return self.rho_o / _dist(p, q) ** alpha

    def _bs(self, i: int) -> tuple:
        return (self.bs1, self.bs2)[i - 1]

    def _center(self, i: int) -> tuple:
        return (self.center1, self.center2)[i - 1]

    def center_links(self, i: int) -> dict[str, NakagamiParams]:
        """Nakagami parameters of every link feeding center user i's SINRs."""
        other = 2 if i == 1 else 1
        return {
            "direct": NakagamiParams(
                self.m_direct, self.omega(self._bs(i), self._center(i), self.alpha_center)
            ),
            "bs_ris": NakagamiParams(
                self.m_bs_ris, self.omega(self._bs(i), self.ris, self.alpha_bs_ris)
            ),
            "ris_user": NakagamiParams(
                self.m_ris_user, self.omega(self.ris, self._center(i), self.alpha_ris_center)
            ),
            "ici": NakagamiParams(
                self.m_direct, self.omega(self._bs(other), self._center(i), self.alpha_ici)
            ),
        }

    def edge_links(self, i: int) -> dict[str, NakagamiParams]:
        return {
            "direct": NakagamiParams(
                self.m_direct, self.omega(self._bs(i), self.edge, self.alpha_edge)
            ),
            "bs_ris": NakagamiParams(
                self.m_bs_ris, self.omega(self._bs(i), self.ris, self.alpha_bs_ris)
            ),
            "ris_user": NakagamiParams(
                self.m_ris_user, self.omega(self.ris, self.edge, self.alpha_ris_edge)
            ),
        }

    def cascade_amp_center(self) -> float:
        """Co-phased cascade multiplier K*sqrt(beta_r) for the reflection region."""
        return self.k_elements * math.sqrt(self.beta_r)

    def cascade_amp_edge(self) -> float:
        return self.k_elements * math.sqrt(self.beta_t)

    def with_overrides(self, **kw) -> "CoordinatedScenario":
        return replace(self, **kw)


@dataclass(frozen=True)
class MultiCellScenario:
    """Symmetric I-cell CoMP-NOMA network with one RIS per cell edge.

    All geometry is specified through the distance table; cells are
    statistically identical. The first n_coop cells form the cooperative set.
    """

    n_cells: int = 6
    n_coop: int = 4
    k_elements: int = 70
    p_t_dbm: float = 0.0
    rho_o_db: float = -30.0
    bandwidth_hz: float = 1e7
    noise_figure_db: float = 0.0
    zeta_edge: float = 0.7
    kappa_db: float = 3.0
    d_center: float = 50.0
    d_edge: float = 150.0
    d_ici: float = 200.0
    d_bs_ris: float = 75.0
    d_ris_edge: float = 75.0
    alpha_center: float = 3.0
    alpha_edge: float = 3.5
    alpha_ris: float = 2.7
    alpha_ici: float = 4.0
    r_center_min: float = 1.0
    r_edge_min: float = 0.5
    amp_efficiency: float = 0.4
    static_power_dbm: float = 30.0
    element_power_dbm: float = 5.0
    n_trials: int = 10000

    def __post_init__(self):
        if not 1 <= self.n_coop <= self.n_cells:
            raise ValueError("cooperative set must satisfy 1 <= J <= I")
        if not 0.5 < self.zeta_edge < 1.0:
            raise ValueError("edge allocation factor must lie in (0.5, 1)")

    @property
    def rho_o(self) -> float:
        return db_to_linear(self.rho_o_db)

    @property
    def tx_power_w(self) -> float:
        return dbm_to_watts(self.p_t_dbm)

    @property
    def noise_w(self) -> float:
        return noise_power_watts(self.bandwidth_hz, self.noise_figure_db)

    @property
    def kappa(self) -> float:
        return db_to_linear(self.kappa_db)

    @property
    def static_power_w(self) -> float:
        return dbm_to_watts(self.static_power_dbm)

    @property
    def element_power_w(self) -> float:
        return dbm_to_watts(self.element_power_dbm)

    def gain(self, d: float, alpha: float) -> float:
        return self.rho_o / d**alpha

    def with_overrides(self, **kw) -> "MultiCellScenario":
        return replace(self, **kw)


@dataclass(frozen=True)
class AerialScenario:
    """Two-cell CoMP-NOMA network served by one UAV-mounted RIS.

    The UAV moves on a horizontal grid inside the square area; obstacles
    carry circular forbidden zones evaluated in the horizontal plane.
    Direct BS-edge links are blocked.
    """

    half_extent: float = 75.0
    bs_positions: tuple = ((-35.0, -35.0, 25.0), (35.0, 35.0, 25.0))
    center_positions: tuple = ((-25.0, -45.0, 0.0), (45.0, 25.0, 0.0))
    edge_position: tuple = (0.0, 35.0, 0.0)
    obstacle_positions: tuple = ((-20.0, 10.0), (30.0, -25.0))
    ris_altitude: float = 50.0
    uav_start: tuple = (0.0, 35.0)
    d_min: float = 10.0
    step_length: float = 5.0
    k_elements: int = 120
    t_slots: int = 250
    p_t_dbm: float = 20.0
    rho_o_db: float = -30.0
    bandwidth_hz: float = 1e7
    noise_figure_db: float = 0.0
    kappa_db: float = 3.0
    alpha_direct: float = 3.0
    alpha_ris: float = 2.2
    alpha_ici: float = 3.5
    r_center_min: float = 0.5
    r_edge_min: float = 0.2
    k_viol: float = 7.0
    default_alloc: float = 0.75
    oma: bool = False

    def __post_init__(self):
        half = self.half_extent
        for p in (*self.bs_positions, *self.center_positions, self.edge_position):
            if abs(p[0]) > half or abs(p[1]) > half:
                raise ValueError("entity outside the operating area")
        for p in self.obstacle_positions:
            if abs(p[0]) > half or abs(p[1]) > half:
                raise ValueError("obstacle outside the operating area")
        if not (abs(self.uav_start[0]) <= half and abs(self.uav_start[1]) <= half):
            raise ValueError("UAV start outside the operating area")
        if self.d_min <= 0:
            raise ValueError("d_min must be positive")
        if self.t_slots < 1:
            raise ValueError("episode length must be >= 1")
        if not 0.5 < self.default_alloc < 1.0:
            raise ValueError("default allocation factor must lie in (0.5, 1)")

    @property
    def n_bs(self) -> int:
        return len(self.bs_positions)

    @property
    def n_obstacles(self) -> int:
        return len(self.obstacle_positions)

    @property
    def n_users(self) -> int:
        return len(self.center_positions) + 1

    @property
    def state_dim(self) -> int:
        # uav xy + obstacle distances + allocation factors + per-user rates
        return 2 + self.n_obstacles + self.n_bs + self.n_users

    @property
    def action_dim_continuous(self) -> int:
        return self.k_elements + self.n_bs

    @property
    def rho_o(self) -> float:
        return db_to_linear(self.rho_o_db)

    @property
    def tx_power_w(self) -> float:
        return dbm_to_watts(self.p_t_dbm)

    @property
    def noise_w(self) -> float:
        return noise_power_watts(self.bandwidth_hz, self.noise_figure_db)

    @property
    def rho(self) -> float:
        return self.tx_power_w / self.noise_w

    @property
    def kappa(self) -> float:
        return db_to_linear(self.kappa_db)

    def with_overrides(self, **kw) -> "AerialScenario":
        return replace(self, **kw)


def tiny_aerial_scenario(k_elements: int = 4, t_slots: int = 40, **kw) -> AerialScenario:
    """Desk-scale instance for training sanity checks and grid baselines.

    The UAV starts in a far corner so trajectory learning is visible in the
    reward curve: flying toward the user cluster strengthens every cascade.
    """
    base = dict(
        half_extent=50.0,
        bs_positions=((-20.0, -20.0, 25.0), (20.0, 20.0, 25.0)),
        center_positions=((-15.0, -25.0, 0.0), (25.0, 15.0, 0.0)),
        edge_position=(0.0, 20.0, 0.0),
        obstacle_positions=((-15.0, 10.0),),
        uav_start=(-40.0, -40.0),
        ris_altitude=30.0,
        k_elements=k_elements,
        t_slots=t_slots,
        p_t_dbm=20.0,
    )
    base.update(kw)
    return AerialScenario(**base)


def coordinated_default() -> CoordinatedScenario:
    return CoordinatedScenario()


def multicell_default() -> MultiCellScenario:
    return MultiCellScenario()


def aerial_default() -> AerialScenario:
    return AerialScenario()
