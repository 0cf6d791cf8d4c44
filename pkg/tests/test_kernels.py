import os
import subprocess
import sys

import numpy as np
import pytest

from fracsob._kernels import HAVE_COMPILED, _fallback

if HAVE_COMPILED:
    from fracsob._kernels import _core
else:
    _core = None

needs_compiled = pytest.mark.skipif(not HAVE_COMPILED,
                                    reason="compiled extension not built")


@needs_compiled
def test_pair_sum_matches_fallback():
    rng = np.random.default_rng(123)
    n = 32
    values = rng.normal(size=(n, n))
    weights = rng.uniform(0.1, 1.0, size=(n, n))
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    in_i = ii.ravel().astype(np.int64)
    in_j = jj.ravel().astype(np.int64)
    out_i = in_i[:: 7].copy()
    out_j = in_j[:: 7].copy()
    for p in (1.5, 2.0, 3.0):
        a = _core.pair_sum_power(values, weights, out_i, out_j, in_i, in_j, p)
        b = _fallback.pair_sum_power(values, weights, out_i, out_j, in_i, in_j, p)
        assert a == pytest.approx(b, rel=1e-12)


@needs_compiled
def test_interval_sup_matches_fallback():
    rng = np.random.default_rng(7)
    pts = np.cumsum(rng.normal(size=(512, 2)) * 0.01, axis=0)
    starts = np.arange(0, 448, 64).astype(np.intp)
    lengths = np.full(len(starts), 64, dtype=np.intp)
    a = _core.interval_sup_ratios(pts, 1 / 512, 0.4, 2.0, starts, lengths)
    b = _fallback.interval_sup_ratios(pts, 1 / 512, 0.4, 2.0, starts, lengths)
    assert np.allclose(a, b, rtol=1e-12)


def test_env_var_forces_fallback():
    code = ("import fracsob._kernels as k; "
            "print(k.HAVE_COMPILED)")
    env = dict(os.environ, FRACSOB_NO_EXTENSION="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"


def test_seminorm_backend_agreement():
    # the public estimator must not depend on which backend ran it
    code = (
        "import numpy as np\n"
        "from fracsob.field import Grid2D, ScalarField, FracIndex\n"
        "from fracsob.sobolev import gagliardo_seminorm\n"
        "g = Grid2D(32, 32, 1.0)\n"
        "X1, X2 = g.mesh()\n"
        "f = ScalarField(g, np.sin(2*np.pi*X1)*np.cos(4*np.pi*X2))\n"
        "print(repr(gagliardo_seminorm(f, FracIndex(2/3, 3.0))))\n"
    )
    vals = []
    for force in (None, "1"):
        env = dict(os.environ)
        env.pop("FRACSOB_NO_EXTENSION", None)
        if force:
            env["FRACSOB_NO_EXTENSION"] = force
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        vals.append(float(out.stdout.strip()))
    assert vals[0] == pytest.approx(vals[1], rel=1e-10)
