"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

Backend selection: numba is used when importable unless the environment
variable RISCOMP_NUMBA is set to "0" (force numpy) -- "1" forces numba and
raises if it is unavailable.

Both backends are bit-identical by construction: kernels receive pre-drawn
variates and perform only +, -, *, /, sqrt with the same accumulation order
(sequential over elements / cells), and every transcendental (log2, phases,
gamma draws) happens in shared numpy code outside the kernels.
"""

from __future__ import annotations

import os

import numpy as np

_ENV = os.environ.get("RISCOMP_NUMBA", "").strip()

if _ENV == "0":
    _HAVE_NUMBA = False
else:
    try:
        import numba

        _HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - exercised via env flag instead
        if _ENV == "1":
            raise
        _HAVE_NUMBA = False


def backend() -> str:
    return "numba" if _HAVE_NUMBA else "numpy"


# Row roles for the coordinated two-cell SINR kernel. Each Z row holds the
# (h^2, a^2, b^2) power draws of one effective-channel block; fitted-mode
# sampling fills every role independently, physical mode repeats shared draws.
Z_CF1_S, Z_CF1_I, Z_C1_S = 0, 1, 2
Z_CF2_S, Z_CF2_I, Z_C2_S = 3, 4, 5
Z_F1_V, Z_F2_V, Z_F1_W, Z_F2_W = 6, 7, 8, 9
Z_NC1_V, Z_NC1_W, Z_NC2_W = 10, 11, 12
N_Z_ROWS = 13

X_CF1, X_C1, X_CF2, X_C2 = 0, 1, 2, 3
N_X_ROWS = 4

# Output rows: SIC-stage and own-message SINR per center, CoMP edge SINR,
# and the no-CoMP edge SINR.
OUT_CF1, OUT_C1, OUT_CF2, OUT_C2, OUT_F, OUT_F_NC = 0, 1, 2, 3, 4, 5
N_OUT_ROWS = 6


def _coordinated_sinr_np(z_pow, x_pow, amp, zeta_c1, zeta_c2, zeta_f, rho):
    n = z_pow.shape[2]
    z = np.empty((N_Z_ROWS, n))
    for r in range(N_Z_ROWS):
        h = np.sqrt(z_pow[r, 0])
        a = np.sqrt(z_pow[r, 1])
        b = np.sqrt(z_pow[r, 2])
        s = h + amp[r] * a * b
        z[r] = s * s
    out = np.empty((N_OUT_ROWS, n))
    out[OUT_CF1] = (rho * zeta_f * z[Z_CF1_S]) / (
        rho * zeta_c1 * z[Z_CF1_I] + rho * x_pow[X_CF1] + 1.0
    )
    out[OUT_C1] = (rho * zeta_c1 * z[Z_C1_S]) / (rho * x_pow[X_C1] + 1.0)
    out[OUT_CF2] = (rho * zeta_f * z[Z_CF2_S]) / (
        rho * zeta_c2 * z[Z_CF2_I] + rho * x_pow[X_CF2] + 1.0
    )
    out[OUT_C2] = (rho * zeta_c2 * z[Z_C2_S]) / (rho * x_pow[X_C2] + 1.0)
    out[OUT_F] = (rho * zeta_f * z[Z_F1_V] + rho * zeta_f * z[Z_F2_V]) / (
        rho * zeta_c1 * z[Z_F1_W] + rho * zeta_c2 * z[Z_F2_W] + 1.0
    )
    out[OUT_F_NC] = (rho * zeta_f * z[Z_NC1_V]) / (
        rho * zeta_c1 * z[Z_NC1_W] + rho * z[Z_NC2_W] + 1.0
    )
    return out


def _multicell_edge_np(ed_re, ed_im, casc_re, casc_im, rnd_re, rnd_im, cg,
                       coop, mode, zeta_f, p_w, sigma2):
    n, n_cells, k = casc_re.shape
    g_edge = np.empty((n, n_cells))
    for i in range(n_cells):
        if mode[i] == 0:
            g_edge[:, i] = ed_re[:, i] * ed_re[:, i] + ed_im[:, i] * ed_im[:, i]
        elif mode[i] == 1:
            hre = ed_re[:, i].copy()
            him = ed_im[:, i].copy()
            for q in range(k):
                hre += rnd_re[:, i, q] * casc_re[:, i, q] - rnd_im[:, i, q] * casc_im[:, i, q]
                him += rnd_re[:, i, q] * casc_im[:, i, q] + rnd_im[:, i, q] * casc_re[:, i, q]
            g_edge[:, i] = hre * hre + him * him
        else:
            amp = np.sqrt(ed_re[:, i] * ed_re[:, i] + ed_im[:, i] * ed_im[:, i])
            s = np.zeros(n)
            for q in range(k):
                s += np.sqrt(
                    casc_re[:, i, q] * casc_re[:, i, q]
                    + casc_im[:, i, q] * casc_im[:, i, q]
                )
            d = amp + s if mode[i] == 2 else amp - s
            g_edge[:, i] = d * d
    sig_e = np.zeros(n)
    intra_e = np.zeros(n)
    ici_e = np.zeros(n)
    for i in range(n_cells):
        if coop[i]:
            sig_e += zeta_f * p_w * g_edge[:, i]
            intra_e += (1.0 - zeta_f) * p_w * g_edge[:, i]
        else:
            ici_e += p_w * g_edge[:, i]
    edge = sig_e / (intra_e + ici_e + sigma2)
    edge_oma = (sig_e + intra_e) / (ici_e + sigma2)

    c_own = np.empty((n, n_cells))
    c_cf = np.empty((n, n_cells))
    c_oma = np.empty((n, n_cells))
    for i in range(n_cells):
        coop_g = np.zeros(n)
        ici_g = np.zeros(n)
        oma_ici = np.zeros(n)
        for j in range(n_cells):
            if j != i:
                oma_ici += p_w * cg[:, j, i]
            if coop[j]:
                if j != i:
                    coop_g += (1.0 - zeta_f) * p_w * cg[:, j, i]
            else:
                if j != i:
                    ici_g += p_w * cg[:, j, i]
        own_sig = cg[:, i, i] * p_w
        if coop[i]:
            c_own[:, i] = (1.0 - zeta_f) * own_sig / (coop_g + ici_g + sigma2)
            num_cf = np.zeros(n)
            den_cf = np.zeros(n)
            for j in range(n_cells):
                if coop[j]:
                    num_cf += zeta_f * p_w * cg[:, j, i]
                    den_cf += (1.0 - zeta_f) * p_w * cg[:, j, i]
            c_cf[:, i] = num_cf / (den_cf + ici_g + sigma2)
        else:
            # Non-cooperative cells still run their own NOMA pair; only the
            # own-cell edge component is SIC-removable, every other cell
            # interferes at full power.
            den = oma_ici + sigma2
            c_own[:, i] = (1.0 - zeta_f) * own_sig / den
            c_cf[:, i] = zeta_f * own_sig / ((1.0 - zeta_f) * own_sig + den)
        c_oma[:, i] = own_sig / (oma_ici + sigma2)
    return edge, edge_oma, c_own, c_cf, c_oma


if _HAVE_NUMBA:

    @numba.njit(cache=True)
    def _coordinated_sinr_nb(z_pow, x_pow, amp, zeta_c1, zeta_c2, zeta_f, rho):  # pragma: no cover
        n = z_pow.shape[2]
        z = np.empty((N_Z_ROWS, n))
        for r in range(N_Z_ROWS):
            for t in range(n):
                h = np.sqrt(z_pow[r, 0, t])
                a = np.sqrt(z_pow[r, 1, t])
                b = np.sqrt(z_pow[r, 2, t])
                s = h + amp[r] * a * b
                z[r, t] = s * s
        out = np.empty((N_OUT_ROWS, n))
        for t in range(n):
            out[OUT_CF1, t] = (rho * zeta_f * z[Z_CF1_S, t]) / (
                rho * zeta_c1 * z[Z_CF1_I, t] + rho * x_pow[X_CF1, t] + 1.0
            )
            out[OUT_C1, t] = (rho * zeta_c1 * z[Z_C1_S, t]) / (
                rho * x_pow[X_C1, t] + 1.0
            )
            out[OUT_CF2, t] = (rho * zeta_f * z[Z_CF2_S, t]) / (
                rho * zeta_c2 * z[Z_CF2_I, t] + rho * x_pow[X_CF2, t] + 1.0
            )
            out[OUT_C2, t] = (rho * zeta_c2 * z[Z_C2_S, t]) / (
                rho * x_pow[X_C2, t] + 1.0
            )
            out[OUT_F, t] = (
                rho * zeta_f * z[Z_F1_V, t] + rho * zeta_f * z[Z_F2_V, t]
            ) / (rho * zeta_c1 * z[Z_F1_W, t] + rho * zeta_c2 * z[Z_F2_W, t] + 1.0)
            out[OUT_F_NC, t] = (rho * zeta_f * z[Z_NC1_V, t]) / (
                rho * zeta_c1 * z[Z_NC1_W, t] + rho * z[Z_NC2_W, t] + 1.0
            )
        return out

    @numba.njit(cache=True)
    def _multicell_edge_nb(ed_re, ed_im, casc_re, casc_im, rnd_re, rnd_im, cg,
                           coop, mode, zeta_f, p_w, sigma2):  # pragma: no cover
        n, n_cells, k = casc_re.shape
        g_edge = np.empty((n, n_cells))
        for i in range(n_cells):
            if mode[i] == 0:
                for t in range(n):
                    g_edge[t, i] = ed_re[t, i] * ed_re[t, i] + ed_im[t, i] * ed_im[t, i]
            elif mode[i] == 1:
                for t in range(n):
                    hre = ed_re[t, i]
                    him = ed_im[t, i]
                    for q in range(k):
                        hre += rnd_re[t, i, q] * casc_re[t, i, q] - rnd_im[t, i, q] * casc_im[t, i, q]
                        him += rnd_re[t, i, q] * casc_im[t, i, q] + rnd_im[t, i, q] * casc_re[t, i, q]
                    g_edge[t, i] = hre * hre + him * him
            else:
                for t in range(n):
                    amp = np.sqrt(ed_re[t, i] * ed_re[t, i] + ed_im[t, i] * ed_im[t, i])
                    s = 0.0
                    for q in range(k):
                        s += np.sqrt(
                            casc_re[t, i, q] * casc_re[t, i, q]
                            + casc_im[t, i, q] * casc_im[t, i, q]
                        )
                    d = amp + s if mode[i] == 2 else amp - s
                    g_edge[t, i] = d * d
        edge = np.empty(n)
        edge_oma = np.empty(n)
        c_own = np.empty((n, n_cells))
        c_cf = np.empty((n, n_cells))
        c_oma = np.empty((n, n_cells))
        for t in range(n):
            sig_e = 0.0
            intra_e = 0.0
            ici_e = 0.0
            for i in range(n_cells):
                if coop[i]:
                    sig_e += zeta_f * p_w * g_edge[t, i]
                    intra_e += (1.0 - zeta_f) * p_w * g_edge[t, i]
                else:
                    ici_e += p_w * g_edge[t, i]
            edge[t] = sig_e / (intra_e + ici_e + sigma2)
            edge_oma[t] = (sig_e + intra_e) / (ici_e + sigma2)
            for i in range(n_cells):
                coop_g = 0.0
                ici_g = 0.0
                oma_ici = 0.0
                for j in range(n_cells):
                    if j != i:
                        oma_ici += p_w * cg[t, j, i]
                    if coop[j]:
                        if j != i:
                            coop_g += (1.0 - zeta_f) * p_w * cg[t, j, i]
                    else:
                        if j != i:
                            ici_g += p_w * cg[t, j, i]
                own_sig = cg[t, i, i] * p_w
                if coop[i]:
                    c_own[t, i] = (1.0 - zeta_f) * own_sig / (coop_g + ici_g + sigma2)
                    num_cf = 0.0
                    den_cf = 0.0
                    for j in range(n_cells):
                        if coop[j]:
                            num_cf += zeta_f * p_w * cg[t, j, i]
                            den_cf += (1.0 - zeta_f) * p_w * cg[t, j, i]
                    c_cf[t, i] = num_cf / (den_cf + ici_g + sigma2)
                else:
                    den = oma_ici + sigma2
                    c_own[t, i] = (1.0 - zeta_f) * own_sig / den
                    c_cf[t, i] = zeta_f * own_sig / ((1.0 - zeta_f) * own_sig + den)
                c_oma[t, i] = own_sig / (oma_ici + sigma2)
        return edge, edge_oma, c_own, c_cf, c_oma


def coordinated_sinr(z_pow, x_pow, amp, zeta_c1, zeta_c2, zeta_f, rho):
    """Two-cell coordinated-cluster SINRs from pre-drawn power variates.

    z_pow: (N_Z_ROWS, 3, n) gamma power draws (h^2, a^2, b^2) per block,
    x_pow: (N_X_ROWS, n) interference power draws, amp: per-row cascade
    multiplier K*sqrt(beta). Returns (N_OUT_ROWS, n) SINRs.
    """
    z_pow = np.ascontiguousarray(z_pow, dtype=np.float64)
    x_pow = np.ascontiguousarray(x_pow, dtype=np.float64)
    amp = np.ascontiguousarray(amp, dtype=np.float64)
    args = (z_pow, x_pow, amp, float(zeta_c1), float(zeta_c2), float(zeta_f), float(rho))
    if _HAVE_NUMBA:
        return _coordinated_sinr_nb(*args)
    return _coordinated_sinr_np(*args)


def multicell_edge_sinr(ed_re, ed_im, casc_re, casc_im, rnd_re, rnd_im, cg,
                        coop, mode, zeta_f, p_w, sigma2):
    """Multi-cell CoMP-NOMA SINRs for one RIS phase-assignment mode.

    mode codes per cell: 0 no-RIS, 1 random phases, 2 enhancement (co-phased),
    3 cancellation (anti-phased). Returns (edge, edge_oma, c_own, c_cf, c_oma);
    c_cf is +inf for non-cooperative cells (no SIC stage).
    """
    coop = np.ascontiguousarray(coop, dtype=np.uint8)
    mode = np.ascontiguousarray(mode, dtype=np.uint8)
    args = (
        np.ascontiguousarray(ed_re, dtype=np.float64),
        np.ascontiguousarray(ed_im, dtype=np.float64),
        np.ascontiguousarray(casc_re, dtype=np.float64),
        np.ascontiguousarray(casc_im, dtype=np.float64),
        np.ascontiguousarray(rnd_re, dtype=np.float64),
        np.ascontiguousarray(rnd_im, dtype=np.float64),
        np.ascontiguousarray(cg, dtype=np.float64),
        coop,
        mode,
        float(zeta_f),
        float(p_w),
        float(sigma2),
    )
    if _HAVE_NUMBA:
        return _multicell_edge_nb(*args)
    return _multicell_edge_np(*args)
