import random

import pytest

from iwrank import _kernels_pure as pure
from iwrank import kernels

try:
    from iwrank import _kernels as compiled
except ImportError:
    compiled = None


def _reduction_rows(modulus, extra):
    # modulus is monic; rows[k] = x^(deg+k) mod modulus
    deg = len(modulus) - 1
    rows = []
    cur = [-c for c in modulus[:deg]]
    rows.append(list(cur))
    for _ in range(extra - 1):
        cur = [0] + cur
        lead = cur.pop()
        if lead:
            for t in range(deg):
                cur[t] += lead * rows[0][t]
        rows.append(list(cur))
    return rows


def test_convolve_known_values():
    assert pure.convolve([1, 1], [1, -1]) == [1, 0, -1]
    assert pure.convolve([2, 0, 3], [5]) == [10, 0, 15]
    assert pure.convolve([], [1, 2]) == []
    assert pure.convolve([7], []) == []


def test_fold_tail_cyclotomic():
    # reduce x^2 + x + 1 worth of tail: modulus x^2 + x + 1 over Z
    rows = _reduction_rows([1, 1, 1], 4)
    assert rows[0] == [-1, -1]          # x^2 = -x - 1
    assert rows[1] == [1, 0]            # x^3 = 1
    assert pure.fold_tail([0, 0, 1], rows, 2) == [-1, -1]
    assert pure.fold_tail([5, 2, 0, 1], rows, 2) == [6, 2]


def test_convolve_reduce_agrees_with_direct():
    rows = _reduction_rows([2, 0, 1], 6)   # x^2 = -2, a Gaussian-like ring
    a, b = [3, 4], [1, -2]
    prod = pure.convolve(a, b)
    assert pure.convolve_reduce(a, b, rows, 2) == pure.fold_tail(prod, rows, 2)
    # (3+4x)(1-2x) with x^2=-2: 3 - 2x - 8x^2 = 19 - 2x
    assert pure.convolve_reduce(a, b, rows, 2) == [19, -2]


def test_selected_backend_exports():
    assert kernels.convolve([1, 2], [3]) == [3, 6]
    assert isinstance(kernels.COMPILED, bool)
    if kernels.COMPILED:
        assert compiled is not None


@pytest.mark.skipif(compiled is None, reason="compiled kernels unavailable")
def test_compiled_matches_pure_random():
    rng = random.Random(20240817)
    modulus = [rng.randrange(-9, 10) for _ in range(5)] + [1]
    deg = 5
    rows = _reduction_rows(modulus, 12)
    for _ in range(50):
        la = rng.randrange(0, 7)
        lb = rng.randrange(0, 7)
        a = [rng.randrange(-10**6, 10**6) for _ in range(la)]
        b = [rng.randrange(-10**6, 10**6) for _ in range(lb)]
        assert compiled.convolve(a, b) == pure.convolve(a, b)
        vec = [rng.randrange(-10**9, 10**9) for _ in range(rng.randrange(deg, deg + 12))]
        assert compiled.fold_tail(vec, rows, deg) == pure.fold_tail(vec, rows, deg)
        if la and lb and la + lb - 1 >= deg:
            assert compiled.convolve_reduce(a, b, rows, deg) == \
                pure.convolve_reduce(a, b, rows, deg)


@pytest.mark.skipif(compiled is None, reason="compiled kernels unavailable")
def test_compiled_big_integers():
    # coefficients far beyond machine words must not overflow
    a = [10**40 + 1, -(10**39)]
    b = [3, 10**41]
    assert compiled.convolve(a, b) == pure.convolve(a, b)
