"""Closed-form SINR statistics via moment matching.

Effective channel powers Z = (|h| + K sqrt(beta) |h_iR||h_Ru|)^2 are fitted
to Gamma laws from their first two raw moments; weighted interference sums
get Gamma fits the same way; SINRs, as ratios of (approximately) independent
Gamma variables, follow Beta-prime laws. Ergodic rates come from adaptive
quadrature of the defining integral, outage probabilities from regularized
incomplete beta evaluations of the Beta-prime CDF.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import NakagamiParams
from .quadrature import integrate
from .special import betainc_reg, betaln, gammainc_lower_reg

_LN2 = math.log(2.0)


class FitError(ValueError):
    """Raised when moment matching degenerates (non-positive variance)."""


@dataclass(frozen=True)
class MomentPair:
    """First and second raw moments of a nonnegative variable."""

    m1: float
    m2: float

    def __post_init__(self):
        if self.m1 < 0 or self.m2 < 0:
            raise ValueError("raw moments must be nonnegative")
        if self.m2 < self.m1**2 * (1.0 - 1e-12):
            raise ValueError("second moment below squared mean")

    @property
    def variance(self) -> float:
        return self.m2 - self.m1**2

    def scaled(self, a: float) -> "MomentPair":
        return MomentPair(a * self.m1, a * a * self.m2)

    def shifted(self, c: float = 1.0) -> "MomentPair":
        """Moments of X + c."""
        return MomentPair(self.m1 + c, self.m2 + 2.0 * c * self.m1 + c * c)


@dataclass(frozen=True)
class GammaParams:
    """Shape/scale parameterization; mean k*theta, variance k*theta^2."""

    k: float
    theta: float

    def __post_init__(self):
        if self.k <= 0 or self.theta <= 0:
            raise ValueError("Gamma shape and scale must be positive")

    @property
    def mean(self) -> float:
        return self.k * self.theta

    @property
    def variance(self) -> float:
        return self.k * self.theta**2

    def moments(self) -> MomentPair:
        return MomentPair(self.mean, self.k * (self.k + 1.0) * self.theta**2)

    def cdf(self, x: float) -> float:
        if x <= 0:
            return 0.0
        return gammainc_lower_reg(self.k, x / self.theta)


@dataclass(frozen=True)
class BetaPrimeParams:
    """Scaled Beta-prime: X/scale ~ BetaPrime(a, b)."""

    a: float
    b: float
    scale: float

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ValueError("Beta-prime shapes must be positive")
        if self.scale <= 0:
            raise ValueError("Beta-prime scale must be positive")

    @property
    def mean(self) -> float:
        if self.b <= 1:
            raise FitError("Beta-prime mean undefined for b <= 1")
        return self.scale * self.a / (self.b - 1.0)

    def pdf(self, x: float) -> float:
        if x <= 0:
            return 0.0
        y = x / self.scale
        ln = (self.a - 1.0) * math.log(y) - (self.a + self.b) * math.log1p(y)
        return math.exp(ln - betaln(self.a, self.b)) / self.scale

    def cdf(self, x: float) -> float:
        if x <= 0:
            return 0.0
        if math.isinf(x):
            return 1.0
        return betainc_reg(self.a, self.b, x / (x + self.scale))


def gamma_from_moments(m: MomentPair) -> GammaParams:
    """Moment-matched Gamma fit k = m1^2/var, theta = var/m1."""
    var = m.variance
    if var <= 0 or m.m1 <= 0:
        raise FitError(f"degenerate moments for Gamma fit (m1={m.m1}, var={var})")
    return GammaParams(m.m1**2 / var, var / m.m1)


def nakagami_moment(p: NakagamiParams, order: int) -> float:
    """p-th raw moment of a Nakagami(m, omega) magnitude."""
    if order not in (1, 2, 3, 4):
        raise ValueError("supported moment orders are 1..4")
    half = 0.5 * order
    ln = math.lgamma(p.m + half) - math.lgamma(p.m)
    return math.exp(ln) * (p.omega / p.m) ** half


def cascade_moment(
    k_elements: int,
    beta: float,
    i_r: NakagamiParams,
    r_u: NakagamiParams,
    order: int,
) -> float:
    """p-th raw moment of the co-phased cascade K sqrt(beta) |h_iR||h_Ru|."""
    if order not in (1, 2, 3, 4):
        raise ValueError("supported moment orders are 1..4")
    if k_elements < 0 or not 0.0 <= beta <= 1.0:
        raise ValueError("require k_elements >= 0 and beta in [0, 1]")
    if k_elements == 0 or beta == 0.0:
        return 0.0
    half = 0.5 * order
    ln = (
        math.lgamma(r_u.m + half)
        + math.lgamma(i_r.m + half)
        - math.lgamma(i_r.m)
        - math.lgamma(r_u.m)
    )
    scale = (k_elements * math.sqrt(beta)) ** order
    return (
        scale
        * (i_r.omega * r_u.omega) ** half
        * math.exp(ln)
        / (r_u.m * i_r.m) ** half
    )


def effective_power_moments(
    direct: NakagamiParams | None,
    k_elements: int,
    beta: float,
    i_r: NakagamiParams,
    r_u: NakagamiParams,
) -> MomentPair:
    """Raw moments of Z = (|h| + cascade)^2 via the binomial expansion.

    direct=None models a blocked direct link (|h| = 0).
    """
    if direct is None:
        mh = [1.0, 0.0, 0.0, 0.0, 0.0]
    else:
        mh = [1.0] + [nakagami_moment(direct, p) for p in (1, 2, 3, 4)]
    if k_elements == 0 or beta == 0.0:
        mg = [1.0, 0.0, 0.0, 0.0, 0.0]
    else:
        mg = [1.0] + [cascade_moment(k_elements, beta, i_r, r_u, p) for p in (1, 2, 3, 4)]
    m1 = mh[2] + 2.0 * mh[1] * mg[1] + mg[2]
    m2 = (
        mh[4]
        + 4.0 * mh[3] * mg[1]
        + 6.0 * mh[2] * mg[2]
        + 4.0 * mh[1] * mg[3]
        + mg[4]
    )
    return MomentPair(m1, m2)


def weighted_sum_moments(
    a: float, z: MomentPair, b: float, interferer: NakagamiParams
) -> MomentPair:
    """Moments of a*Z + b*|h'|^2 for an independent Nakagami interferer."""
    if a < 0 or b < 0:
        raise ValueError("weights must be nonnegative")
    if a == 0 and b == 0:
        raise FitError("a = b = 0 gives a degenerate sum")
    omega = interferer.omega
    m1 = a * z.m1 + b * omega
    m2 = (
        a * a * z.m2
        + 2.0 * a * b * z.m1 * omega
        + b * b * omega * omega * (1.0 + 1.0 / interferer.m)
    )
    return MomentPair(m1, m2)


def weighted_sum_gamma(
    a: float, z: GammaParams, b: float, interferer: NakagamiParams
) -> GammaParams:
    return gamma_from_moments(weighted_sum_moments(a, z.moments(), b, interferer))


def sinr_dist_center_decode_edge(
    z: MomentPair,
    interferer: NakagamiParams,
    rho: float,
    zeta_center: float,
    zeta_edge: float,
) -> BetaPrimeParams:
    """Law of gamma_{c->f} = rho zeta_f Z / (rho zeta_c Z + rho X + 1)."""
    zg = gamma_from_moments(z)
    w = gamma_from_moments(
        weighted_sum_moments(rho * zeta_center, z, rho, interferer).shifted(1.0)
    )
    return BetaPrimeParams(zg.k, w.k, rho * zeta_edge * zg.theta / w.theta)


def sinr_dist_center_own(
    z: MomentPair,
    interferer: NakagamiParams,
    rho: float,
    zeta_center: float,
) -> BetaPrimeParams:
    """Law of gamma_c = rho zeta_c Z / (rho X + 1); the decode-edge form with
    the intra-cluster weight dropped."""
    zg = gamma_from_moments(z)
    w = gamma_from_moments(
        weighted_sum_moments(0.0, z, rho, interferer).shifted(1.0)
    )
    return BetaPrimeParams(zg.k, w.k, rho * zeta_center * zg.theta / w.theta)


def edge_ratio_moments(
    z1: MomentPair,
    z2: MomentPair,
    zeta_c1: float,
    zeta_c2: float,
    zeta_f1: float,
    zeta_f2: float,
    rho: float,
) -> tuple[MomentPair, MomentPair]:
    """Moments of V = rho(zf1 Z1 + zf2 Z2) and W = rho(zc1 Z1 + zc2 Z2) + 1
    for independent Z1, Z2."""
    v1 = rho * (zeta_f1 * z1.m1 + zeta_f2 * z2.m1)
    v2 = rho * rho * (
        zeta_f1**2 * z1.m2
        + 2.0 * zeta_f1 * zeta_f2 * z1.m1 * z2.m1
        + zeta_f2**2 * z2.m2
    )
    w = MomentPair(
        rho * (zeta_c1 * z1.m1 + zeta_c2 * z2.m1),
        rho
        * rho
        * (
            zeta_c1**2 * z1.m2
            + 2.0 * zeta_c1 * zeta_c2 * z1.m1 * z2.m1
            + zeta_c2**2 * z2.m2
        ),
    ).shifted(1.0)
    return MomentPair(v1, v2), w


def sinr_dist_edge(
    z1: MomentPair,
    z2: MomentPair,
    zeta_c1: float,
    zeta_c2: float,
    zeta_f1: float,
    zeta_f2: float,
    rho: float,
) -> BetaPrimeParams:
    """Law of the non-coherent JT-CoMP edge SINR gamma_f = V / W."""
    mv, mw = edge_ratio_moments(z1, z2, zeta_c1, zeta_c2, zeta_f1, zeta_f2, rho)
    v = gamma_from_moments(mv)
    w = gamma_from_moments(mw)
    return BetaPrimeParams(v.k, w.k, v.theta / w.theta)


def sinr_dist_edge_high_snr(
    z1: MomentPair,
    z2: MomentPair,
    zeta_c1: float,
    zeta_c2: float,
    zeta_f1: float,
    zeta_f2: float,
    rho: float,
) -> BetaPrimeParams:
    """High-SNR edge law: the +1 noise term of W is dropped, leaving the
    interference-limited ratio V / V~ (rho cancels from the scale)."""
    mv, _ = edge_ratio_moments(z1, z2, zeta_c1, zeta_c2, zeta_f1, zeta_f2, rho)
    vt1 = rho * (zeta_c1 * z1.m1 + zeta_c2 * z2.m1)
    vt2 = rho * rho * (
        zeta_c1**2 * z1.m2
        + 2.0 * zeta_c1 * zeta_c2 * z1.m1 * z2.m1
        + zeta_c2**2 * z2.m2
    )
    v = gamma_from_moments(mv)
    vt = gamma_from_moments(MomentPair(vt1, vt2))
    return BetaPrimeParams(v.k, vt.k, v.theta / vt.theta)


def beta_prime_cdf(p: BetaPrimeParams, x: float) -> float:
    return p.cdf(x)


def _er_breakpoints(a: float, b: float) -> list[float]:
    """Support landmarks (in Beta u-space) seeding the adaptive subdivision;
    critical for near-degenerate fits whose density is a narrow spike."""
    mu = a / (a + b)
    sd = math.sqrt(a * b / ((a + b) ** 2 * (a + b + 1.0)))
    pts = []
    for c in (-20.0, -5.0, -1.0, 1.0, 5.0, 20.0):
        u = mu + c * sd
        if 0.0 < u < 1.0:
            pts.append(u)
    pts.append(mu)
    return pts


def ergodic_rate(p: BetaPrimeParams, rtol: float = 1e-8) -> float:
    """E[log2(1 + X)] for X ~ scaled Beta-prime, by adaptive quadrature.

    Substituting x = scale * u/(1-u) maps the half line onto (0, 1) with a
    Beta(a, b) weight, so the integrand is smooth away from the endpoints.
    """
    a, b, q = p.a, p.b, p.scale
    lnB = betaln(a, b)

    def integrand(u: float) -> float:
        if u <= 0.0 or u >= 1.0:
            return 0.0
        x = q * u / (1.0 - u)
        if x <= 0.0 or math.isinf(x):
            return 0.0
        w = math.exp((a - 1.0) * math.log(u) + (b - 1.0) * math.log1p(-u) - lnB)
        return w * math.log1p(x) / _LN2

    return integrate(
        integrand, 0.0, 1.0, rtol=rtol, atol=1e-12, breakpoints=_er_breakpoints(a, b)
    )


def ergodic_rate_high_snr(p_high: BetaPrimeParams, rtol: float = 1e-8) -> float:
    """Ergodic rate of the interference-limited (noise-free) edge law."""
    return ergodic_rate(p_high, rtol=rtol)


def outage_edge_closed(p: BetaPrimeParams, threshold: float) -> float:
    """Pr(gamma_f < threshold); shares the Beta-prime CDF code path."""
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    return beta_prime_cdf(p, threshold)


def outage_center_closed(
    dist_cf: BetaPrimeParams,
    dist_c: BetaPrimeParams,
    z: GammaParams,
    rho: float,
    zeta_center: float,
    threshold_edge: float,
    threshold_center: float,
) -> float:
    """Two-stage center outage: SIC failure plus (SIC success and own-message
    failure), floored by the interference-free noise-only outage."""
    if threshold_edge < 0 or threshold_center < 0:
        raise ValueError("thresholds must be >= 0")
    p1 = beta_prime_cdf(dist_cf, threshold_edge)
    if threshold_edge == 0.0:
        p_pass = 1.0
    else:
        # I_{psi}(b, a) with psi = scale/(scale+thr) equals Pr(gamma_cf > thr).
        psi_pass = dist_cf.scale / (dist_cf.scale + threshold_edge)
        p_pass = betainc_reg(dist_cf.b, dist_cf.a, psi_pass)
    p2 = p_pass * beta_prime_cdf(dist_c, threshold_center)
    floor = z.cdf(threshold_center / (rho * zeta_center)) if threshold_center > 0 else 0.0
    return max(p1 + p2, floor)
