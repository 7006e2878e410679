"""Sparse multivariate Laurent polynomials with integer coefficients.

Variables come from an open universe: the fixed symbols ``A, V, H, s, x, y``
plus the indexed families ``s_k``, ``s_{p,q}`` and ``s_{p,q,k}`` which are
created on demand.  Only ``A`` and ``x`` may carry negative exponents.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

_RANK = {"A": 0, "V": 1, "H": 2, "s": 3, "x": 4, "y": 5, "s_k": 6, "s_pq": 7, "s_pqk": 8}
LAURENT = frozenset({"A", "x"})


class PolyError(ValueError):
    """Raised for ill-posed polynomial operations."""


def canonical_pq(p: int, q: int) -> tuple[int, int]:
    """Return the canonical representative of the unoriented class (p, q).

    Requires gcd(|p|, |q|) = 1.  The sign is fixed so that q > 0, or
    (p, q) = (1, 0) when q = 0.
    """
    if math.gcd(p, q) != 1:
        raise PolyError(f"class ({p},{q}) is not primitive")
    if q < 0 or (q == 0 and p < 0):
        return -p, -q
    return p, q


@dataclass(frozen=True)
class Var:
    """A polynomial variable; ``p``, ``q`` and ``k`` are used by the indexed families."""

    name: str
    p: int | None = None
    q: int | None = None
    k: int | None = None

    def __post_init__(self) -> None:
        if self.name not in _RANK:
            raise PolyError(f"unknown variable family {self.name!r}")
        if self.name in ("s_k", "s_pqk") and (self.k is None or self.k < 1):
            raise PolyError(f"{self.name} needs a positive index k")
        if self.name in ("s_pq", "s_pqk"):
            if self.p is None or self.q is None or canonical_pq(self.p, self.q) != (self.p, self.q):
                raise PolyError(f"({self.p},{self.q}) is not a canonical class")

    @property
    def key(self) -> tuple:
        if self.name == "s_k":
            return (_RANK[self.name], self.k)
        if self.name == "s_pq":
            return (_RANK[self.name], self.p, self.q)
        if self.name == "s_pqk":
            return (_RANK[self.name], self.p, self.q, self.k)
        return (_RANK[self.name],)

    def __str__(self) -> str:
        if self.name == "s_k":
            return f"s_{{{self.k}}}"
        if self.name == "s_pq":
            return f"s_{{{self.p},{self.q}}}"
        if self.name == "s_pqk":
            return f"s_{{{self.p},{self.q},{self.k}}}"
        return self.name

    def to_json(self) -> dict:
        out: dict = {"name": self.name}
        for field in ("p", "q", "k"):
            if getattr(self, field) is not None:
                out[field] = getattr(self, field)
        return out


def s_k(k: int) -> Var:
    return Var("s_k", k=k)


def s_pq(p: int, q: int) -> Var:
    return Var("s_pq", *canonical_pq(p, q))


def s_pqk(p: int, q: int, k: int) -> Var:
    return Var("s_pqk", *canonical_pq(p, q), k=k)


# A monomial is a tuple of (Var, exponent) pairs sorted by Var.key, no zero exponents.
Monomial = tuple


def _mono(items: Iterable[tuple[Var, int]]) -> Monomial:
    acc: dict[Var, int] = {}
    for v, e in items:
        acc[v] = acc.get(v, 0) + e
    return tuple(sorted(((v, e) for v, e in acc.items() if e), key=lambda t: t[0].key))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    return _mono(a + b)


class Poly:
    """Immutable sparse polynomial: a mapping Monomial -> nonzero int."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None) -> None:
        clean: dict[Monomial, int] = {}
        for m, c in (terms or {}).items():
            if c:
                for v, e in m:
                    if e < 0 and v.name not in LAURENT:
                        raise PolyError(f"negative exponent on {v}")
                clean[m] = clean.get(m, 0) + c
        self._terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    # constructors
    @classmethod
    def const(cls, c: int) -> Poly:
        return cls({(): c})

    @classmethod
    def var(cls, v: Var | str, exp: int = 1) -> Poly:
        if isinstance(v, str):
            v = Var(v)
        return cls({_mono([(v, exp)]): 1})

    @classmethod
    def monomial(cls, exps: Mapping[Var, int], coeff: int = 1) -> Poly:
        return cls({_mono(exps.items()): coeff})

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def variables(self) -> set[Var]:
        return {v for m in self._terms for v, _ in m}

    # arithmetic
    @staticmethod
    def _lift(other) -> Poly:
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other) -> Poly:
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> Poly:
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        return self._lift(other) - self

    def __mul__(self, other) -> Poly:
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly:
        if n < 0:
            inv = self._unit_inverse()
            if inv is None:
                raise PolyError("negative power of a non-invertible polynomial")
            return inv ** (-n)
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _unit_inverse(self) -> Poly | None:
        if len(self._terms) != 1:
            return None
        (m, c), = self._terms.items()
        if c not in (1, -1) or any(v.name not in LAURENT for v, _ in m):
            return None
        return Poly({tuple((v, -e) for v, e in m): c})

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({render_canonical(self)!r})"

    def __str__(self) -> str:
        return render_canonical(self)


def add(*ps: Poly) -> Poly:
    out = Poly()
    for p in ps:
        out = out + p
    return out


def mul(*ps: Poly) -> Poly:
    out = Poly.const(1)
    for p in ps:
        out = out * p
    return out


def negate(p: Poly) -> Poly:
    return -p


def power(p: Poly, n: int) -> Poly:
    if n < 0:
        raise PolyError("negative power")
    return p ** n


A = Poly.var("A")
V = Poly.var("V")
H = Poly.var("H")
S = Poly.var("s")
X = Poly.var("x")
Y = Poly.var("y")


def d_const() -> Poly:
    """The loop value -A^2 - A^-2."""
    return Poly({_mono([(Var("A"), 2)]): -1, _mono([(Var("A"), -2)]): -1})


def substitute(p: Poly, v: Var | str, r: Poly) -> Poly:
    """Replace every occurrence of ``v^e`` in ``p`` by ``r^e``."""
    if isinstance(v, str):
        v = Var(v)
    cache: dict[int, Poly] = {}
    out = Poly()
    for m, c in p.items():
        e = dict(m).get(v, 0)
        if e == 0:
            out = out + Poly({m: c})
            continue
        if e not in cache:
            if e < 0 and r._unit_inverse() is None:
                raise PolyError(f"cannot raise a non-unit to the power {e}")
            cache[e] = r ** e
        rest = Poly({tuple(t for t in m if t[0] != v): c})
        out = out + rest * cache[e]
    return out


def map_monomials(p: Poly, fn) -> Poly:
    """Sum ``coeff * fn(monomial)`` over the terms of ``p``; ``fn`` returns a Poly."""
    out = Poly()
    for m, c in p.items():
        out = out + fn(m) * c
    return out


# rendering

def _sorted_terms(p: Poly) -> list[tuple[Monomial, int]]:
    order = sorted(p.variables(), key=lambda v: v.key)
    def vec(m):
        d = dict(m)
        return tuple(d.get(v, 0) for v in order)
    return sorted(p.items(), key=lambda t: vec(t[0]), reverse=True)


def _join(pieces: list[tuple[int, str]]) -> str:
    if not pieces:
        return "0"
    out = []
    for i, (sign, body) in enumerate(pieces):
        if i == 0:
            out.append(("-" if sign < 0 else "") + body)
        else:
            out.append((" - " if sign < 0 else " + ") + body)
    return "".join(out)


def _factor(name: str, e: int) -> str:
    return name if e == 1 else f"{name}^{e}"


def render_canonical(p: Poly) -> str:
    pieces = []
    for m, c in _sorted_terms(p):
        factors = [_factor(str(v), e) for v, e in m]
        body = "*".join([str(abs(c))] + factors)
        pieces.append((c, body))
    return _join(pieces)


def _t_exponent(e: int) -> str:
    f = Fraction(-e, 4)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def render_jones(p: Poly) -> str:
    """Render with A = t^(-1/4); unit coefficients are left implicit."""
    if any(v.name == "H" for v in p.variables()):
        raise PolyError("Jones rendering needs an H-free (normalized) polynomial")
    pieces = []
    for m, c in _sorted_terms(p):
        factors = []
        for v, e in m:
            factors.append(f"t^{_t_exponent(e)}" if v.name == "A" else _factor(str(v), e))
        if not factors:
            body = str(abs(c))
        elif abs(c) == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(abs(c))] + factors)
        pieces.append((c, body))
    return _join(pieces)


def to_json(p: Poly) -> list[dict]:
    return [
        {"coeff": c, "vars": [dict(v.to_json(), exp=e) for v, e in m]}
        for m, c in _sorted_terms(p)
    ]


def from_json(data: list[dict]) -> Poly:
    terms = {}
    for t in data:
        items = []
        for v in t["vars"]:
            items.append((Var(v["name"], v.get("p"), v.get("q"), v.get("k")), int(v["exp"])))
        m = _mono(items)
        terms[m] = terms.get(m, 0) + int(t["coeff"])
    return Poly(terms)


_FACTOR_RE = re.compile(r"^(A|V|H|s|x|y|s_\{(-?\d+)(?:,(-?\d+))?(?:,(\d+))?\})(?:\^(-?\d+))?$")


def parse_canonical(text: str) -> Poly:
    """Parse the output of :func:`render_canonical`."""
    text = text.strip()
    if text == "0":
        return Poly()
    tokens = re.split(r"\s+([+-])\s+", text)
    signs = [1]
    first = tokens[0]
    if first.startswith("-"):
        signs[0] = -1
        first = first[1:]
    bodies = [first]
    for i in range(1, len(tokens), 2):
        signs.append(-1 if tokens[i] == "-" else 1)
        bodies.append(tokens[i + 1])
    terms = {}
    for sign, body in zip(signs, bodies):
        parts = body.split("*")
        coeff = int(parts[0]) * sign
        items = []
        for f in parts[1:]:
            mt = _FACTOR_RE.match(f)
            if not mt:
                raise PolyError(f"bad factor {f!r}")
            name, a, b, c, e = mt.groups()
            e = int(e) if e else 1
            if name.startswith("s_"):
                if b is None:
                    v = s_k(int(a))
                elif c is None:
                    v = Var("s_pq", int(a), int(b))
                else:
                    v = Var("s_pqk", int(a), int(b), int(c))
            else:
                v = Var(name)
            items.append((v, e))
        m = _mono(items)
        terms[m] = terms.get(m, 0) + coeff
    return Poly(terms)
