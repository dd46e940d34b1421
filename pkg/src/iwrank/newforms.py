"""Newform coefficient ingestion.

Coefficient data is loaded from structured files (or the bundled set under
iwrank/data), validated against the Hecke relations, and adapted to
QExpansion for the congruence and stabilization machinery.  Eigenforms are
never recomputed here; only their stored coefficients are consumed.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from importlib import resources
from math import gcd

from .characters import (
    DirichletCharacter, ResidualCharacter, lift_residual_character,
    parse_descriptor,
)
from .numfield import NumberField
from .qseries import (
    CongruenceIdealSpec, QExpansion, eisenstein_series, sigma0_and_m,
)


class IngestionError(ValueError):
    pass


def _parse_frac(s) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise IngestionError(f"bad coefficient entry {s!r}") from exc


class NewformData:
    """Validated coefficients a(1..n_max) of one newform."""

    def __init__(self, label, level, weight, nebentypus, field_poly, an,
                 seed_root_mod_p=None, source=""):
        self.label = label
        self.level = level
        self.weight = weight
        self.nebentypus = nebentypus
        self.field_poly = tuple(int(c) for c in field_poly)
        self.field = None if len(self.field_poly) == 2 else NumberField(self.field_poly)
        self.an = list(an)
        self.seed_root_mod_p = dict(seed_root_mod_p or {})
        self.source = source
        self._validate()

    # --- construction ---

    @classmethod
    def from_dict(cls, payload) -> "NewformData":
        try:
            label = payload["label"]
            level = int(payload["level"])
            weight = int(payload["weight"])
            neb = parse_descriptor(payload["nebentypus"])
            poly = [int(c) for c in payload["field_poly"]]
            raw_an = payload["an"]
        except (KeyError, TypeError, ValueError) as exc:
            raise IngestionError(f"malformed newform record: {exc}") from exc
        if len(poly) < 2 or poly[-1] != 1:
            raise IngestionError("field_poly must be monic of degree >= 1")
        deg = len(poly) - 1
        field = None if deg == 1 else NumberField(poly)
        an = []
        for i, vec in enumerate(raw_an):
            if len(vec) != deg:
                raise IngestionError(
                    f"coefficient {i + 1} has {len(vec)} entries, expected {deg}")
            parts = [_parse_frac(c) for c in vec]
            an.append(parts[0] if deg == 1 else field.element(parts))
        seeds = {int(p): int(r) for p, r in payload.get("seed_root_mod_p", {}).items()}
        return cls(label, level, weight, neb, poly, an,
                   seed_root_mod_p=seeds, source=payload.get("source", ""))

    @classmethod
    def load(cls, path) -> "NewformData":
        try:
            with open(path) as fh:
                payload = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise IngestionError(f"cannot read newform file {path}: {exc}") from exc
        return cls.from_dict(payload)

    # --- validation ---

    def _validate(self):
        if self.level < 1 or self.weight < 1:
            raise IngestionError("level and weight must be positive")
        if not self.an:
            raise IngestionError("no coefficients")
        if self.an[0] != 1:
            raise IngestionError("a(1) must be 1 (arithmetic normalization)")
        if self.level % self.nebentypus.modulus != 0:
            raise IngestionError("nebentypus modulus must divide the level")
        for ell in (2, 3, 5, 7):
            if ell * ell > self.n_max:
                break
            a_l, a_l2 = self.a(ell), self.a(ell * ell)
            if self.level % ell == 0:
                expect = a_l * a_l
            else:
                chi_l = self.nebentypus(ell)
                chi_l = chi_l.rational_value() if hasattr(chi_l, "rational_value") else chi_l
                expect = a_l * a_l - chi_l * ell ** (self.weight - 1)
            if a_l2 != expect:
                raise IngestionError(
                    f"{self.label}: Hecke relation fails at {ell}^2")
        for m, n in ((2, 3), (3, 4), (2, 7), (5, 7)):
            if m * n > self.n_max:
                continue
            if self.a(m * n) != self.a(m) * self.a(n):
                raise IngestionError(
                    f"{self.label}: multiplicativity fails at {m}*{n}")

    # --- access ---

    @property
    def n_max(self) -> int:
        return len(self.an)

    def a(self, n: int):
        if not 1 <= n <= self.n_max:
            raise IndexError(f"coefficient a({n}) outside stored range")
        return self.an[n - 1]

    @property
    def is_rational(self) -> bool:
        return self.field is None

    def q_expansion(self, n_max=None) -> QExpansion:
        if n_max is None:
            n_max = self.n_max
        if n_max > self.n_max:
            raise IngestionError(
                f"{self.label}: requested {n_max} coefficients, have {self.n_max}")
        zero = Fraction(0) if self.field is None else self.field.zero()
        return QExpansion(self.weight, self.level, self.nebentypus,
                          [zero] + self.an[:n_max], label=self.label)

    def congruence_ideal(self, p: int) -> CongruenceIdealSpec:
        """The stored degree-one prime above p."""
        if self.field is None:
            return CongruenceIdealSpec(p)
        if p not in self.seed_root_mod_p:
            raise IngestionError(
                f"{self.label}: no seed root above p={p} in the data file")
        return CongruenceIdealSpec(p, field_poly=self.field_poly,
                                   seed=self.seed_root_mod_p[p])


def bundled_labels():
    out = []
    for entry in resources.files("iwrank.data").iterdir():
        if entry.name.endswith(".json"):
            out.append(entry.name[:-5])
    return sorted(out)


def bundled(label: str) -> NewformData:
    res = resources.files("iwrank.data").joinpath(f"{label}.json")
    try:
        payload = json.loads(res.read_text())
    except (FileNotFoundError, OSError) as exc:
        raise IngestionError(
            f"no bundled newform {label!r}; available: {bundled_labels()}") from exc
    return NewformData.from_dict(payload)


# residual Eisenstein partner ------------------------------------------


class ResidualPair:
    """Residual data (xi1_bar, xi2_bar) of an Eisenstein congruence at a
    degree-one prime above p, with the tame level of the form."""

    def __init__(self, p, xi1_bar, xi2_bar, level, residual_conductor=1):
        self.p = p
        self.xi1_bar = xi1_bar
        self.xi2_bar = xi2_bar
        self.level = level
        self.residual_conductor = residual_conductor
        if xi2_bar.modulus % p == 0:
            # normalization: the second character is taken unramified at p
            raise ValueError("xi2_bar must be presented prime to p")


def _prime_to_p(n: int, p: int) -> int:
    while n % p == 0:
        n //= p
    return n


def residual_eisenstein_partner(hbar: ResidualPair, l: int, n_max: int):
    """Lift the residual pair and build the Eisenstein series congruent to
    the form: (xi1, xi2, g = E_l(xi1 w^(1-l), xi2), m).

    The canonical lift is multiplicative, so lifting xi1_bar and then
    twisting by w^(1-l) agrees with lifting xi1_bar w_bar^(1-l) directly.
    """
    p = hbar.p
    xi1 = lift_residual_character(hbar.xi1_bar, p)
    xi2 = lift_residual_character(hbar.xi2_bar, p)
    omega = DirichletCharacter.teichmuller(p)
    theta = xi1 * omega ** ((1 - l) % (p - 1))
    parity = xi1.parity() * xi2.parity() * omega.parity() ** ((1 - l) % 2)
    if parity != (-1) ** l:
        raise ValueError("parity violation: xi1 xi2 w^(1-l)(-1) != (-1)^l")
    if theta.is_trivial() and l == 2 and xi2.is_trivial():
        # trivial values mod p: the holomorphic combination E2(z) - p E2(pz)
        theta = DirichletCharacter.trivial(p)
    else:
        theta = theta.primitive_part()
    phi = xi2.primitive_part()
    g = eisenstein_series(theta, phi, l, n_max)
    _, m = sigma0_and_m(_prime_to_p(hbar.level, p),
                        _prime_to_p(hbar.residual_conductor, p))
    return xi1, xi2, g, m
