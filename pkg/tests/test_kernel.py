"""Term-dict kernel: compiled and pure implementations must be twins."""

import os
import random
import subprocess
import sys

import pytest

from qhomfly import kernel
from qhomfly import _kernel_py

try:
    from qhomfly import _ckernel
except ImportError:
    _ckernel = None

needs_c = pytest.mark.skipif(_ckernel is None, reason="compiled kernel not built")


def rand_terms(rng, count, spread=10, qspread=40):
    out = {}
    for _ in range(count):
        key = (
            rng.randrange(-spread, spread + 1),
            rng.randrange(-qspread, qspread + 1),
            rng.randrange(-spread, spread + 1),
        )
        out[key] = rng.randrange(-99, 100) or 7
    return out


def test_selected_backend_reports():
    assert kernel.BACKEND in ("c", "python")
    if os.environ.get("QHOMFLY_PURE") == "1":
        assert kernel.BACKEND == "python"


def test_pure_mul_basics():
    f = {(0, 0, 0): 1, (0, 1, 0): 1}
    g = {(0, 0, 0): 1, (0, -1, 0): -1}
    # (1 + q)(1 - q^-1) = q - q^-1
    assert _kernel_py.mul(f, g) == {(0, 1, 0): 1, (0, -1, 0): -1}
    assert _kernel_py.mul(f, {}) == {}


def test_pure_accum_matches_mul():
    rng = random.Random(71)
    for _ in range(30):
        f, g = rand_terms(rng, 12), rand_terms(rng, 9)
        acc = _kernel_py.Accum()
        acc.add_mul(f, g, 2, -1, 3, -5)
        direct = _kernel_py.mul(f, g)
        want = {}
        for (ea, eq, es), c in direct.items():
            k = (ea + 2, eq - 1, es + 3)
            v = want.get(k, 0) - 5 * c
            if v:
                want[k] = v
            else:
                want.pop(k, None)
        assert acc.to_terms() == want


def test_pure_qdiv_round_trip_and_rejection():
    rng = random.Random(73)
    for _ in range(40):
        f = rand_terms(rng, 8)
        l = rng.randrange(1, 6)
        bracket = {(0, l, 0): 1, (0, -l, 0): -1}
        prod = _kernel_py.mul(f, bracket)
        assert _kernel_py.qdiv(prod, l) == f
    assert _kernel_py.qdiv({(0, 0, 0): 1}, 2) is None


@needs_c
def test_backends_agree_randomized():
    rng = random.Random(79)
    for _ in range(200):
        f = rand_terms(rng, rng.randrange(1, 25))
        g = rand_terms(rng, rng.randrange(1, 25))
        assert _kernel_py.mul(f, g) == _ckernel.mul(f, g)
        a_py, a_c = _kernel_py.Accum(), _ckernel.Accum()
        da, dq, ds = rng.randrange(-5, 6), rng.randrange(-9, 10), rng.randrange(-5, 6)
        coeff = rng.randrange(-9, 10) or 3
        for acc in (a_py, a_c):
            acc.add_poly(f, da, dq, ds, coeff)
            acc.add_mul(f, g, da, dq, ds, coeff)
        assert a_py.to_terms() == a_c.to_terms()
        l = rng.randrange(1, 5)
        prod = _kernel_py.mul(f, {(0, l, 0): 1, (0, -l, 0): -1})
        assert _ckernel.qdiv(prod, l) == f
        assert _ckernel.qdiv({(0, 1, 0): 3}, l) is None


@needs_c
def test_compiled_bounds_raise():
    ok = {(4095, 0, 0): 1}
    assert _ckernel.mul(ok, {(0, 0, 0): 1}) == ok
    for key in ((4096, 0, 0), (0, 1 << 33, 0), (0, 0, -4096)):
        with pytest.raises(OverflowError):
            _ckernel.mul({key: 1}, {(0, 0, 0): 1})


def test_pure_env_forces_python_backend():
    env = dict(os.environ, QHOMFLY_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "from qhomfly import kernel; print(kernel.BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"
