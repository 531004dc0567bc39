"""Kernel correctness and numba/numpy backend equivalence.

The numpy fallback runs in a subprocess with RISCOMP_NUMBA=0 and its outputs
must be bit-identical to the in-process backend (the kernels perform only
order-fixed arithmetic on pre-drawn variates).
"""

import os
import pickle
import subprocess
import sys

import numpy as np
import pytest

from riscomp import kernels
from riscomp.channel import substream

_CHILD = r"""
import pickle, sys
import numpy as np
from riscomp import kernels
assert kernels.backend() == "numpy", kernels.backend()
with open(sys.argv[1], "rb") as fh:
    case = pickle.load(fh)
out1 = kernels.coordinated_sinr(*case["coordinated"])
out2 = kernels.multicell_edge_sinr(*case["multicell"])
with open(sys.argv[2], "wb") as fh:
    pickle.dump({"coordinated": out1, "multicell": out2}, fh)
"""


def _coordinated_case(n=257):
    rng = substream(99, 0)
    z = rng.gamma(1.5, 1.0, (kernels.N_Z_ROWS, 3, n))
    x = rng.gamma(1.0, 1.0, (kernels.N_X_ROWS, n))
    amp = rng.uniform(0.0, 30.0, kernels.N_Z_ROWS)
    return (z, x, amp, 0.3, 0.3, 0.7, 123.4)


def _multicell_case(n=101, cells=4, k=7):
    rng = substream(98, 0)
    ed = rng.standard_normal((2, n, cells))
    casc = rng.standard_normal((2, n, cells, k)) * 0.1
    phi = rng.uniform(-np.pi, np.pi, (n, cells, k))
    cg = rng.gamma(1.0, 1.0, (n, cells, cells))
    coop = np.array([1, 1, 0, 0], dtype=np.uint8)
    mode = np.array([2, 2, 3, 1], dtype=np.uint8)
    return (ed[0], ed[1], casc[0], casc[1], np.cos(phi), np.sin(phi), cg,
            coop, mode, 0.7, 1e-3, 4e-14)


def test_coordinated_matches_direct_formula():
    z, x, amp, zc1, zc2, zf, rho = _coordinated_case(64)
    out = kernels.coordinated_sinr(z, x, amp, zc1, zc2, zf, rho)
    zz = (np.sqrt(z[:, 0]) + amp[:, None] * np.sqrt(z[:, 1]) * np.sqrt(z[:, 2])) ** 2
    expect = (rho * zf * zz[kernels.Z_CF1_S]) / (
        rho * zc1 * zz[kernels.Z_CF1_I] + rho * x[kernels.X_CF1] + 1.0
    )
    assert np.allclose(out[kernels.OUT_CF1], expect, rtol=1e-14)
    expect_f = (rho * zf * (zz[kernels.Z_F1_V] + zz[kernels.Z_F2_V])) / (
        rho * zc1 * zz[kernels.Z_F1_W] + rho * zc2 * zz[kernels.Z_F2_W] + 1.0
    )
    assert np.allclose(out[kernels.OUT_F], expect_f, rtol=1e-14)


def test_multicell_matches_reference():
    args = _multicell_case(16, 3, 4)
    ed_re, ed_im, c_re, c_im, r_re, r_im, cg, coop, mode, zf, p, s2 = args
    mode = np.array([2, 3, 1], dtype=np.uint8)
    coop = np.array([1, 0, 0], dtype=np.uint8)
    edge, edge_oma, c_own, c_cf, c_oma = kernels.multicell_edge_sinr(
        ed_re, ed_im, c_re, c_im, r_re, r_im, cg, coop, mode, zf, p, s2
    )
    n, cells, k = c_re.shape
    for t in range(n):
        g = np.empty(cells)
        for i in range(cells):
            if mode[i] == 1:
                h = ed_re[t, i] + 1j * ed_im[t, i]
                h += np.sum((r_re[t, i] + 1j * r_im[t, i]) * (c_re[t, i] + 1j * c_im[t, i]))
                g[i] = abs(h) ** 2
            else:
                amp = abs(ed_re[t, i] + 1j * ed_im[t, i])
                s = np.sum(np.hypot(c_re[t, i], c_im[t, i]))
                d = amp + s if mode[i] == 2 else amp - s
                g[i] = d * d
        sig = zf * p * g[0]
        intra = (1 - zf) * p * g[0]
        ici = p * (g[1] + g[2])
        assert edge[t] == pytest.approx(sig / (intra + ici + s2), rel=1e-12)
        assert edge_oma[t] == pytest.approx((sig + intra) / (ici + s2), rel=1e-12)
        # Cooperative center (cell 0): SIC removes every cooperative edge term.
        ici_c = p * (cg[t, 1, 0] + cg[t, 2, 0])
        own = (1 - zf) * p * cg[t, 0, 0] / (ici_c + s2)
        assert c_own[t, 0] == pytest.approx(own, rel=1e-12)
        cf = zf * p * cg[t, 0, 0] / ((1 - zf) * p * cg[t, 0, 0] + ici_c + s2)
        assert c_cf[t, 0] == pytest.approx(cf, rel=1e-12)
        # Non-cooperative center (cell 1): full-power interference from all.
        den = p * (cg[t, 0, 1] + cg[t, 2, 1]) + s2
        assert c_own[t, 1] == pytest.approx((1 - zf) * p * cg[t, 1, 1] / den, rel=1e-12)
        assert c_oma[t, 1] == pytest.approx(p * cg[t, 1, 1] / den, rel=1e-12)


@pytest.mark.skipif(kernels.backend() != "numba", reason="numba backend unavailable")
def test_backends_bit_identical(tmp_path):
    case = {"coordinated": _coordinated_case(), "multicell": _multicell_case()}
    out_native = {
        "coordinated": kernels.coordinated_sinr(*case["coordinated"]),
        "multicell": kernels.multicell_edge_sinr(*case["multicell"]),
    }
    case_file = tmp_path / "case.pkl"
    result_file = tmp_path / "result.pkl"
    script = tmp_path / "child.py"
    script.write_text(_CHILD)
    with open(case_file, "wb") as fh:
        pickle.dump(case, fh)
    env = dict(os.environ, RISCOMP_NUMBA="0")
    subprocess.run(
        [sys.executable, str(script), str(case_file), str(result_file)],
        check=True, env=env,
    )
    with open(result_file, "rb") as fh:
        out_numpy = pickle.load(fh)
    assert np.array_equal(out_native["coordinated"], out_numpy["coordinated"])
    for a, b in zip(out_native["multicell"], out_numpy["multicell"]):
        assert np.array_equal(a, b)


def test_env_flag_reporting():
    assert kernels.backend() in ("numba", "numpy")
