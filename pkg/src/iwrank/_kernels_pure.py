"""Pure-Python arithmetic kernels.

Same contract as the compiled module iwrank._kernels; see iwrank.kernels
for the selection logic.  All inputs are lists of Python ints: arithmetic
must stay arbitrary-precision.
"""


def convolve(a, b):
    """Product of two integer polynomials given as coefficient lists."""
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return []
    out = [0] * (la + lb - 1)
    for i in range(la):
        ai = a[i]
        if not ai:
            continue
        for j in range(lb):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def fold_tail(vec, red, deg):
    """Reduce a coefficient vector modulo a monic degree-`deg` polynomial.

    `red[k]` must hold the length-`deg` coefficient vector of x^(deg+k)
    reduced modulo that polynomial.  Entries of `vec` beyond index deg-1
    are folded back using those rows.
    """
    out = list(vec[:deg])
    while len(out) < deg:
        out.append(0)
    for k in range(deg, len(vec)):
        c = vec[k]
        if not c:
            continue
        row = red[k - deg]
        for t in range(deg):
            rt = row[t]
            if rt:
                out[t] += c * rt
    return out


def convolve_reduce(a, b, red, deg):
    """convolve then fold_tail, the hot path of quotient-ring products."""
    return fold_tail(convolve(a, b), red, deg)
