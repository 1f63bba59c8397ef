"""Sparse chains with exact rational coefficients over algebraic simplices.

Chains are immutable values; every operation returns a new chain and all
arithmetic is exact (`fractions.Fraction`), so equalities like
``boundary(b) == c - c_next`` can be asserted bit for bit.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Iterable, Mapping

from .errors import DomainError, FormatError
from .multicomplex import AlgebraicSimplex, Multicomplex
from .serialize import frac_str, parse_frac, require

_PARITY_CACHE: dict[tuple[int, ...], int] = {}


def perm_sign(perm: tuple[int, ...]) -> int:
    """Sign of a permutation given as a tuple of images of 0..k."""
    sign = _PARITY_CACHE.get(perm)
    if sign is not None:
        return sign
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    _PARITY_CACHE[perm] = sign
    return sign


class Chain:
    """A finitely supported rational combination of algebraic n-simplices."""

    __slots__ = ("complex", "degree", "_terms")

    def __init__(self, complex: Multicomplex, degree: int,
                 terms: Mapping[AlgebraicSimplex, Fraction] | None = None,
                 _trusted: dict | None = None):
        self.complex = complex
        self.degree = degree
        if _trusted is not None:
            self._terms = _trusted
            return
        clean: dict[AlgebraicSimplex, Fraction] = {}
        for sigma, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            if sigma.degree != degree:
                raise DomainError(
                    f"term {sigma} has degree {sigma.degree}, chain has {degree}")
            clean[sigma] = coeff
        self._terms = clean

    # -- basics -----------------------------------------------------------

    @classmethod
    def zero(cls, complex: Multicomplex, degree: int) -> "Chain":
        return cls(complex, degree, _trusted={})

    @classmethod
    def single(cls, complex: Multicomplex, sigma: AlgebraicSimplex,
               coeff: Fraction | int = 1) -> "Chain":
        return cls(complex, sigma.degree, {sigma: Fraction(coeff)})

    def items(self):
        return self._terms.items()

    def sorted_items(self):
        return sorted(self._terms.items())

    def support(self) -> list[AlgebraicSimplex]:
        return sorted(self._terms)

    def coefficient(self, sigma: AlgebraicSimplex) -> Fraction:
        return self._terms.get(sigma, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        return (isinstance(other, Chain) and self.degree == other.degree
                and self._terms == other._terms)

    def __hash__(self):
        raise TypeError("chains are not hashable")

    def __repr__(self):
        n = len(self._terms)
        return f"<Chain deg={self.degree} terms={n} norm={self.l1_norm()}>"

    # -- linear structure ---------------------------------------------------

    def __add__(self, other: "Chain") -> "Chain":
        self._check_compatible(other)
        out = dict(self._terms)
        for sigma, c in other._terms.items():
            s = out.get(sigma, Fraction(0)) + c
            if s == 0:
                out.pop(sigma, None)
            else:
                out[sigma] = s
        return Chain(self.complex, self.degree, _trusted=out)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __neg__(self) -> "Chain":
        return Chain(self.complex, self.degree,
                     _trusted={s: -c for s, c in self._terms.items()})

    def __mul__(self, scalar) -> "Chain":
        scalar = Fraction(scalar)
        if scalar == 0:
            return Chain.zero(self.complex, self.degree)
        return Chain(self.complex, self.degree,
                     _trusted={s: c * scalar for s, c in self._terms.items()})

    __rmul__ = __mul__

    def _check_compatible(self, other: "Chain"):
        if self.degree != other.degree:
            raise DomainError(
                f"degree mismatch: {self.degree} vs {other.degree}")
        if self.complex is not other.complex:
            raise DomainError("chains live on different complexes")

    def restrict(self, keys: Iterable[AlgebraicSimplex]) -> "Chain":
        keep = set(keys)
        return Chain(self.complex, self.degree,
                     _trusted={s: c for s, c in self._terms.items() if s in keep})

    # -- the operations -----------------------------------------------------

    def l1_norm(self) -> Fraction:
        return sum((abs(c) for c in self._terms.values()), Fraction(0))

    def coefficient_sum(self) -> Fraction:
        return sum(self._terms.values(), Fraction(0))

    def boundary(self) -> "Chain":
        """Alternating sum of faces, extended linearly."""
        if self.degree < 1:
            raise DomainError("boundary undefined in degree 0")
        K = self.complex
        out: dict[AlgebraicSimplex, Fraction] = {}
        for sigma, coeff in self._terms.items():
            sign = 1
            for i in range(self.degree + 1):
                tau = K.face(sigma, i)
                s = out.get(tau, Fraction(0)) + sign * coeff
                if s == 0:
                    out.pop(tau, None)
                else:
                    out[tau] = s
                sign = -sign
        return Chain(K, self.degree - 1, _trusted=out)

    def is_cycle(self) -> bool:
        if self.degree < 1:
            raise DomainError("cycles live in degree >= 1")
        return self.boundary().is_zero()

    def alt(self) -> "Chain":
        """Signed average over all tuple permutations (a projection)."""
        n = self.degree
        norm = Fraction(1)
        for k in range(2, n + 2):
            norm /= k
        out: dict[AlgebraicSimplex, Fraction] = {}
        for sigma, coeff in self._terms.items():
            tup = sigma.vertices
            for perm in permutations(range(n + 1)):
                sign = perm_sign(perm)
                tau = AlgebraicSimplex(sigma.simplex,
                                       tuple(tup[i] for i in perm))
                s = out.get(tau, Fraction(0)) + sign * coeff * norm
                if s == 0:
                    out.pop(tau, None)
                else:
                    out[tau] = s
        return Chain(self.complex, n, _trusted=out)

    def is_alternating(self) -> bool:
        """True iff coefficients transform by the sign of tuple permutations
        (in particular, tuples with repeated vertices carry coefficient 0)."""
        n = self.degree
        for sigma, coeff in self._terms.items():
            tup = sigma.vertices
            if len(set(tup)) != len(tup):
                return False
            for perm in permutations(range(n + 1)):
                tau = AlgebraicSimplex(sigma.simplex,
                                       tuple(tup[i] for i in perm))
                if self._terms.get(tau, Fraction(0)) != perm_sign(perm) * coeff:
                    return False
        return True


# -- file format ------------------------------------------------------------

def chain_to_obj(c: Chain) -> list:
    return [
        {"simplex": sigma.simplex, "tuple": list(sigma.vertices),
         "coeff": frac_str(coeff)}
        for sigma, coeff in c.sorted_items()
    ]


def chain_from_obj(obj, complex: Multicomplex, degree: int | None = None) -> Chain:
    require(isinstance(obj, list), "chain must be a JSON list of terms")
    terms: dict[AlgebraicSimplex, Fraction] = {}
    for rec in obj:
        for k in ("simplex", "tuple", "coeff"):
            require(k in rec, f"chain term missing {k!r}")
        sigma = AlgebraicSimplex(rec["simplex"], tuple(rec["tuple"]))
        if degree is None:
            degree = sigma.degree
        if sigma.degree != degree:
            raise FormatError(f"term {sigma} does not have degree {degree}")
        if not complex.contains_algebraic(sigma):
            raise FormatError(f"term {sigma} is not an algebraic simplex "
                              f"of the complex")
        if sigma in terms:
            raise FormatError(f"duplicate term {sigma}")
        terms[sigma] = parse_frac(rec["coeff"])
    if degree is None:
        raise FormatError("empty chain needs an explicit degree")
    return Chain(complex, degree, terms)
