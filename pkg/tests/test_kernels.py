import os
import subprocess
import sys

import numpy as np
import pytest

from addfrob import _kernels as K

from conftest import F2, F3, F4, F9


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba backend disabled")


@needs_numba
@pytest.mark.parametrize("spec", [F2, F3, F4, F9])
def test_backends_agree(spec):
    rng = np.random.default_rng(spec.order)
    t = spec.tables
    q = spec.order
    for _ in range(50):
        a = rng.integers(0, q, rng.integers(0, 12)).astype(np.int64)
        b = rng.integers(0, q, rng.integers(1, 8)).astype(np.int64)
        b[-1] = rng.integers(1, q)
        assert _same(K.nb_poly_mul(a, b, t.add, t.mul), K.np_poly_mul(a, b, t.add, t.mul))
        assert _same(K.nb_poly_divmod(a, b, t.add, t.mul, t.neg, t.inv),
                     K.np_poly_divmod(a, b, t.add, t.mul, t.neg, t.inv))
        assert _same(K.nb_poly_gcd(a, b, t.add, t.mul, t.neg, t.inv),
                     K.np_poly_gcd(a, b, t.add, t.mul, t.neg, t.inv))
        m = rng.integers(0, q, (5, 7)).astype(np.int64)
        m1, m2 = m.copy(), m.copy()
        assert _same(K.nb_rref(m1, t.add, t.mul, t.neg, t.inv), K.np_rref(m2, t.add, t.mul, t.neg, t.inv))
        assert _same(m1, m2)
        t1 = rng.integers(0, q, (6, 9)).astype(np.int64)
        t2 = rng.integers(0, q, (4, 9)).astype(np.int64)
        assert _same(K.nb_pair_extent(t1, t2, t.add), K.np_pair_extent(t1, t2, t.add))


def test_env_flag_selects_numpy():
    code = "from addfrob import _kernels as K; print(K.backend())"
    env = dict(os.environ, ADDFROB_NUMBA="0")
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, timeout=120)
    assert res.stdout.strip() == "numpy"


def test_numpy_backend_end_to_end():
    code = ("from addfrob.suites import suite_hasse, suite_reduction;"
            "import sys; ok = suite_hasse(n=20).passed and suite_reduction(n=5).passed; sys.exit(0 if ok else 1)")
    env = dict(os.environ, ADDFROB_NUMBA="0")
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, timeout=300)
    assert res.returncode == 0, res.stderr
