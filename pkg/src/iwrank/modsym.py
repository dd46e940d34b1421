"""Weight-2 modular symbols on Gamma0(N).

Manin-symbol presentation over P^1(Z/N), star involution, Hecke operators by
Merel matrices, eigen-functional extraction over an exact coefficient field,
evaluation at rationals along continued-fraction (unimodular) paths, and
Birch-sum character twisting.

A symbol functional is a linear map on the relation quotient; its value on
the path {oo -> r} is what the p-adic layer integrates against.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from math import gcd, lcm

from .cyclotomic import CyclotomicNumber
from .linalg import right_kernel, rref, solve_right

FORMAT_VERSION = 1


class EigenspaceError(RuntimeError):
    pass


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def p1_normalize(N: int, u: int, v: int) -> tuple[int, int]:
    """Canonical representative of (u:v) in P^1(Z/N): first entry a divisor
    g of N, second minimal over the stabilizing unit orbit."""
    if N == 1:
        return 0, 0
    u %= N
    v %= N
    if u == 0:
        if gcd(v, N) != 1:
            raise ValueError(f"({u}:{v}) is not a point of P1(Z/{N})")
        return 0, 1
    g, s, _ = _xgcd(u, N)
    if gcd(g, v) != 1:
        raise ValueError(f"({u}:{v}) is not a point of P1(Z/{N})")
    s %= N
    ng = N // g
    while gcd(s, N) != 1:
        s = (s + ng) % N
    v = (s * v) % N
    if g > 1:
        best = v
        for k in range(1, g):
            t = 1 + k * ng
            if gcd(t, N) == 1:
                w = (t * v) % N
                if w < best:
                    best = w
        v = best
    return g, v


class P1List:
    def __init__(self, N: int):
        self.N = N
        if N == 1:
            self.pairs = [(0, 0)]
        else:
            acc = set()
            for u in range(N):
                gu = gcd(u, N)
                for v in range(N):
                    if gcd(gu, gcd(v, N)) != 1:
                        continue
                    acc.add(p1_normalize(N, u, v))
            self.pairs = sorted(acc)
        self._index = {pair: i for i, pair in enumerate(self.pairs)}

    def __len__(self):
        return len(self.pairs)

    def __getitem__(self, i):
        return self.pairs[i]

    def index(self, u: int, v: int) -> int:
        if self.N == 1:
            return 0
        return self._index[p1_normalize(self.N, u, v)]


def lift_to_sl2(u: int, v: int, N: int) -> tuple[int, int, int, int]:
    """[a,b;c,d] in SL2(Z) with (c,d) congruent to (u,v) mod N."""
    if N == 1:
        return 1, 0, 0, 1
    u %= N
    v %= N
    if u == 0:
        if gcd(v, N) != 1:
            raise ValueError(f"({u}:{v}) mod {N} not liftable")
        c, d = N, v
    else:
        c, d = u, v
        tries = 0
        while gcd(c, d) != 1:
            d += N
            tries += 1
            if tries > N + 2:
                raise ValueError(f"({u}:{v}) mod {N} not liftable")
    _, x, y = _xgcd(c, d)
    return y, -x, c, d


# genus bookkeeping for Gamma0(N) ------------------------------------


def gamma0_index(N: int) -> int:
    idx = N
    for p in _prime_divisors(N):
        idx = idx // p * (p + 1)
    return idx


def _prime_divisors(N):
    out = []
    n, p = N, 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _euler_phi(n):
    r = n
    for p in _prime_divisors(n):
        r = r // p * (p - 1)
    return r


def num_cusps(N: int) -> int:
    return sum(_euler_phi(gcd(d, N // d)) for d in range(1, N + 1) if N % d == 0)


def genus_gamma0(N: int) -> int:
    if N % 4 == 0:
        nu2 = 0
    else:
        nu2 = 1
        for p in _prime_divisors(N):
            if p == 2:
                continue
            nu2 *= 1 + (1 if p % 4 == 1 else -1)
    if N % 9 == 0:
        nu3 = 0
    else:
        nu3 = 1
        for p in _prime_divisors(N):
            if p == 3:
                continue
            nu3 *= 1 + (1 if p % 3 == 1 else -1)
    g = Fraction(gamma0_index(N), 12) - Fraction(nu2, 4) - Fraction(nu3, 3) \
        - Fraction(num_cusps(N), 2) + 1
    assert g.denominator == 1 and g >= 0
    return int(g)


# Merel matrices -----------------------------------------------------


def merel_matrices(n: int):
    """All [a,b;c,d] with ad-bc=n, a>b>=0, d>c>=0."""
    mats = []
    for a in range(1, n + 1):
        for d in range(1, n + 1):
            r = a * d - n
            if r < 0:
                continue
            if r == 0:
                for b in range(a):
                    mats.append((a, b, 0, d))
                for c in range(1, d):
                    mats.append((a, 0, c, d))
            else:
                for c in range(1, d):
                    if r % c == 0 and r // c < a:
                        mats.append((a, r // c, c, d))
    return mats


class ModularSymbolSpace:
    """Relation quotient of the free module on Manin symbols x_(c:d)."""

    def __init__(self, N: int, _payload=None):
        self.N = N
        self.p1 = P1List(N)
        self._hecke = {}
        self._boundary = None
        self._cache_path = None
        if _payload is not None:
            self._from_payload(_payload)
            return
        n = len(self.p1)
        idx = self.p1.index
        zero_row = [Fraction(0)] * n
        rows = []
        for i, (u, v) in enumerate(self.p1.pairs):
            row = list(zero_row)
            row[i] += 1
            row[idx(v, -u)] += 1
            rows.append(row)
            row = list(zero_row)
            row[i] += 1
            row[idx(v, -u - v)] += 1
            row[idx(-u - v, u)] += 1
            rows.append(row)
        red, pivots = rref(rows)
        pivset = set(pivots)
        self.basis_cols = [j for j in range(n) if j not in pivset]
        self.dim = len(self.basis_cols)
        pos = {c: k for k, c in enumerate(self.basis_cols)}
        row_of = {pc: red[r] for r, pc in enumerate(pivots)}
        vecs = []
        for i in range(n):
            if i in pos:
                w = [Fraction(0)] * self.dim
                w[pos[i]] = Fraction(1)
            else:
                rr = row_of[i]
                w = [-rr[c] for c in self.basis_cols]
            vecs.append(tuple(w))
        self.vectors = vecs
        expected = 2 * genus_gamma0(N) + num_cusps(N) - 1
        if self.dim != expected:
            raise AssertionError(
                f"level {N}: quotient dimension {self.dim} != 2g + cusps - 1 = {expected}")

    # --- involutions and Hecke ---

    def star_images(self):
        """Image of each basis symbol under (c:d) -> (-c:d), as quotient rows."""
        out = []
        for col in self.basis_cols:
            u, v = self.p1.pairs[col]
            out.append(list(self.vectors[self.p1.index(-u, v)]))
        return out

    def hecke_images(self, n: int):
        """Row j = image of basis symbol j under T_n (U_n when gcd(n,N)>1),
        in quotient coordinates."""
        key = str(n)
        if key in self._hecke:
            return self._hecke[key]
        mats = merel_matrices(n)
        out = []
        for col in self.basis_cols:
            u, v = self.p1.pairs[col]
            acc = [Fraction(0)] * self.dim
            for a, b, c, d in mats:
                uu = u * a + v * c
                vv = u * b + v * d
                if self.N > 1 and gcd(gcd(uu, vv), self.N) != 1:
                    continue
                w = self.vectors[self.p1.index(uu, vv)]
                for k in range(self.dim):
                    acc[k] += w[k]
            out.append(acc)
        self._hecke[key] = out
        if self._cache_path:
            with open(self._cache_path, "w") as fh:
                json.dump(self.to_payload(), fh)
        return out

    # --- boundary ---

    def boundary_data(self):
        """(cusp representatives, matrix rows over cusp classes x basis)."""
        if self._boundary is not None:
            return self._boundary
        cusps = []
        cols = []
        for col in self.basis_cols:
            u, v = self.p1.pairs[col]
            a, b, c, d = lift_to_sl2(u, v, self.N)
            e1 = self._cusp_class(cusps, _cusp_reduce(a, c))
            e2 = self._cusp_class(cusps, _cusp_reduce(b, d))
            cols.append((e1, e2))
        rows = [[Fraction(0)] * self.dim for _ in cusps]
        for j, (e1, e2) in enumerate(cols):
            rows[e1][j] += 1
            rows[e2][j] -= 1
        self._boundary = (cusps, rows)
        return self._boundary

    def _cusp_class(self, cusps, c):
        for i, known in enumerate(cusps):
            if cusp_equivalent(self.N, known, c):
                return i
        cusps.append(c)
        return len(cusps) - 1

    def cuspidal_basis(self):
        _, rows = self.boundary_data()
        return right_kernel(rows, self.dim, Fraction(1))

    def cuspidal_dimension(self) -> int:
        return len(self.cuspidal_basis())

    def restrict_to_cuspidal(self, images):
        """Matrix (rows = images) of an operator on the cuspidal subspace,
        in the cuspidal_basis coordinates."""
        K = self.cuspidal_basis()
        cols = [list(c) for c in zip(*K)] if K else []
        out = []
        for k in K:
            img = [Fraction(0)] * self.dim
            for j, coeff in enumerate(k):
                if coeff:
                    row = images[j]
                    for t in range(self.dim):
                        img[t] += coeff * row[t]
            x = solve_right(cols, img)
            if x is None:
                raise ValueError("operator does not preserve the cuspidal subspace")
            out.append(x)
        return out

    # --- cache ---

    def to_payload(self):
        return {
            "version": FORMAT_VERSION,
            "N": self.N,
            "basis_cols": self.basis_cols,
            "vectors": [[str(x) for x in w] for w in self.vectors],
            "star": [[str(x) for x in r] for r in self.star_images()],
            "hecke": {k: [[str(x) for x in r] for r in m]
                      for k, m in self._hecke.items()},
        }

    def _from_payload(self, payload):
        if payload.get("version") != FORMAT_VERSION or payload.get("N") != self.N:
            raise ValueError("stale or mismatched cache payload")
        self.basis_cols = list(payload["basis_cols"])
        self.dim = len(self.basis_cols)
        self.vectors = [tuple(Fraction(x) for x in w) for w in payload["vectors"]]
        if len(self.vectors) != len(self.p1):
            raise ValueError("cache payload has wrong generator count")
        self._hecke = {k: [[Fraction(x) for x in r] for r in m]
                       for k, m in payload["hecke"].items()}

    def save(self, cache_dir):
        path = os.path.join(cache_dir, f"modsym_{self.N}_v{FORMAT_VERSION}.json")
        os.makedirs(cache_dir, exist_ok=True)
        with open(path, "w") as fh:
            json.dump(self.to_payload(), fh)
        self._cache_path = path
        return path


def build_space(N: int, cache_dir=None) -> ModularSymbolSpace:
    if cache_dir:
        path = os.path.join(cache_dir, f"modsym_{N}_v{FORMAT_VERSION}.json")
        if os.path.exists(path):
            with open(path) as fh:
                space = ModularSymbolSpace(N, _payload=json.load(fh))
            space._cache_path = path
            return space
    space = ModularSymbolSpace(N)
    if cache_dir:
        space.save(cache_dir)
    return space


def hecke_operator(space: ModularSymbolSpace, n: int):
    return space.hecke_images(n)


def _cusp_reduce(p, q):
    if q == 0:
        return (1, 0)
    g = gcd(p, q)
    p, q = p // g, q // g
    if q < 0:
        p, q = -p, -q
    return (p, q)


def cusp_equivalent(N, c1, c2) -> bool:
    """Gamma0(N)-equivalence of cusps in lowest terms: s1 q2 = s2 q1 modulo
    gcd(q1 q2, N), with s_i p_i = 1 mod q_i."""
    p1, q1 = c1
    p2, q2 = c2
    s1 = 1 if q1 == 0 else pow(p1, -1, q1)
    s2 = 1 if q2 == 0 else pow(p2, -1, q2)
    g = gcd(q1 * q2, N)
    return (s1 * q2 - s2 * q1) % g == 0


# functionals --------------------------------------------------------


class SymbolFunctional:
    """Linear functional on the quotient, of fixed star sign; evaluate(r)
    returns its value on the path {oo -> r}."""

    def __init__(self, space, sign, coords, normalization=Fraction(1)):
        self.space = space
        self.sign = sign
        self.coords = list(coords)
        self.normalization = normalization
        self._gen_table = None
        self._cache = {}

    def _dot(self, vec):
        acc = None
        for c, x in zip(self.coords, vec):
            term = c * x
            acc = term if acc is None else acc + term
        return acc

    def generator_values(self):
        if self._gen_table is None:
            self._gen_table = [self._dot(v) for v in self.space.vectors]
        return self._gen_table

    def normalize(self):
        """Rescale so generator values are coprime integers (content 1) and
        the first nonzero one is positive."""
        vals = self.generator_values()
        parts = []
        for v in vals:
            parts.extend(_frac_parts(v))
        nz = [f for f in parts if f != 0]
        if not nz:
            raise ValueError("cannot normalize the zero functional")
        num = 0
        den = 1
        for f in nz:
            num = gcd(num, f.numerator)
            den = lcm(den, f.denominator)
        content = Fraction(num, den)
        lead = next(f for f in parts if f != 0)
        scale = 1 / content if lead > 0 else -1 / content
        coords = [c * scale for c in self.coords]
        return SymbolFunctional(self.space, self.sign, coords,
                                normalization=self.normalization * scale)

    def evaluate(self, r):
        """Value on {oo -> r} by summing generator symbols along the
        continued-fraction convergents of r."""
        r = Fraction(r)
        r = r - (r.numerator // r.denominator)
        key = (r.numerator, r.denominator)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        table = self.generator_values()
        idx = self.space.p1.index
        a, b = r.numerator, r.denominator
        acc = None
        pm1, qm1 = 1, 0
        pm2, qm2 = 0, 1
        x, y = a, b
        k = 0
        while y:
            d = x // y
            x, y = y, x - d * y
            pk = d * pm1 + pm2
            qk = d * qm1 + qm2
            sgn = 1 if k % 2 else -1
            term = table[idx(qk, sgn * qm1)]
            acc = term if acc is None else acc + term
            pm2, pm1 = pm1, pk
            qm2, qm1 = qm1, qk
            k += 1
        if acc is None:  # r = 0 with denominator 1 handled in loop; guard anyway
            acc = table[idx(1, 0)]
        self._cache[key] = acc
        return acc

    def evaluate_from_zero(self, r):
        """Value on the path {0 -> r}; the convention used for printed
        symbol tables (the measure itself integrates paths based at oo)."""
        return self.evaluate(r) - self.evaluate(0)


def _frac_parts(v):
    if isinstance(v, Fraction):
        return [v]
    if isinstance(v, int):
        return [Fraction(v)]
    return [Fraction(c) for c in v.coeffs]


def eigen_functional(space, targets, sign, one=Fraction(1)):
    """The unique (up to scalar) functional with Phi(T_l x) = a_l Phi(x) for
    the given (l, a_l) pairs and star sign; returned normalized.

    `one` fixes the coefficient field (Fraction(1), or a number-field 1).
    """
    dim = space.dim
    rows = []
    for ell, a in targets:
        imgs = space.hecke_images(ell)
        for j in range(dim):
            row = [one * x for x in imgs[j]]
            row[j] = row[j] - a
            rows.append(row)
    for j, srow in enumerate(space.star_images()):
        row = [one * x for x in srow]
        row[j] = row[j] - sign
        rows.append(row)
    ker = right_kernel(rows, dim, one)
    if len(ker) != 1:
        raise EigenspaceError(
            f"level {space.N} sign {sign:+d}: eigenspace has dimension "
            f"{len(ker)}, expected 1")
    return SymbolFunctional(space, sign, ker[0]).normalize()


def functional_eigenvalue(phi: SymbolFunctional, ell: int, probes=(0, Fraction(1, 2), Fraction(1, 3))):
    """a_l recovered from the path identity
    a_l x(r) = sum_b x((r+b)/l) + x(l r)   (the last term only for l
    prime to the level): cheap for large l, no Hecke matrix needed."""
    N = phi.space.N
    for r in probes:
        base = phi.evaluate(r)
        if _frac_is_zero(base):
            continue
        r = Fraction(r)
        acc = None
        for b in range(ell):
            t = phi.evaluate((r + b) / ell)
            acc = t if acc is None else acc + t
        if N % ell != 0:
            acc = acc + phi.evaluate(ell * r)
        return _divide(acc, base)
    raise ValueError("all probe values vanish; supply better probes")


def _frac_is_zero(v):
    z = getattr(v, "is_zero", None)
    return z() if z is not None else v == 0


def _divide(a, b):
    f = getattr(b, "inverse", None)
    if f is not None:
        return a * f()
    return a / b


# twisting -----------------------------------------------------------


class SymbolPair:
    """x^+ and x^- of one form, presented to the p-adic layer."""

    def __init__(self, plus, minus, level, label=""):
        self.plus = plus
        self.minus = minus
        self.level = level
        self.label = label

    def evaluate(self, r, sign):
        return (self.plus if sign > 0 else self.minus).evaluate(r)

    def evaluate_from_zero(self, r, sign):
        return self.evaluate(r, sign) - self.evaluate(0, sign)


class TwistedSymbol:
    """Symbol pair of f tensor chi via Birch sums over a mod cond(chi).

    value at r, sign s:  sum_a conj(chi)(a) x^{s*chi(-1)}(r + a/C), divided
    by a per-sign scalar fixed on the probe set (content 1, first nonzero
    positive), recorded in .scales.
    """

    def __init__(self, pair, chi, probes=(), label=""):
        chi = chi.primitive_part()
        C = chi.modulus
        if gcd(C, pair.level) != 1:
            raise ValueError("twist conductor must be coprime to the level")
        self.pair = pair
        self.chi = chi
        self.C = C
        self.eps = chi.parity()
        self.level = pair.level * C * C
        self.label = label or (pair.label + "_twist")
        chibar = chi.conjugate()
        vals = {}
        if C == 1:
            vals[0] = Fraction(1)
        else:
            for a in range(C):
                if gcd(a, C) == 1:
                    cv = chibar(a)
                    if isinstance(cv, CyclotomicNumber) and cv.is_rational():
                        cv = cv.rational_value()
                    vals[a] = cv
        self._chibar = vals
        self.scales = {1: Fraction(1), -1: Fraction(1)}
        self._cache = {}
        if probes:
            self.renormalize(probes)

    def raw_value(self, r, sign):
        r = Fraction(r)
        base_sign = sign * self.eps
        acc = None
        for a, cv in self._chibar.items():
            t = cv * self.pair.evaluate(r + Fraction(a, self.C), base_sign)
            acc = t if acc is None else acc + t
        return acc

    def renormalize(self, probes):
        """Fix the per-sign scalar: content 1 and first nonzero value
        positive over the probe arguments."""
        for sign in (1, -1):
            parts = []
            for r in probes:
                parts.extend(_frac_parts(self.raw_value(r, sign)))
            nz = [f for f in parts if f != 0]
            if not nz:
                self.scales[sign] = Fraction(1)
                continue
            num, den = 0, 1
            for f in nz:
                num = gcd(num, f.numerator)
                den = lcm(den, f.denominator)
            content = Fraction(num, den)
            self.scales[sign] = content if nz[0] > 0 else -content
        self._cache.clear()

    def evaluate(self, r, sign):
        r = Fraction(r)
        key = (r.numerator, r.denominator, sign)
        hit = self._cache.get(key)
        if hit is None:
            hit = self.raw_value(r, sign) / self.scales[sign]
            self._cache[key] = hit
        return hit

    def evaluate_from_zero(self, r, sign):
        return self.evaluate(r, sign) - self.evaluate(0, sign)


def twist_symbol(pair, chi, probes=(), label=""):
    if chi.conductor() == 1:
        return pair
    return TwistedSymbol(pair, chi, probes=probes, label=label)
