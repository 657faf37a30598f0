"""Exact multivariate polynomial arithmetic in single-relation quotient rings.

Representation:

  Monomial    sorted tuple of (variable index, exponent) pairs; zero exponents
              are never stored, so the empty tuple is the constant monomial 1.
  Polynomial  a coordinate ring plus a dict Monomial -> Fraction with no zero
              coefficients.  Every stored monomial is in normal form, meaning
              it is not divisible by the ring's rewrite head.

Each ring carries at most one rewrite rule (head monomial -> replacement),
which is confluent on its own because the head divides no monomial of the
replacement.  The two quotient rings used throughout:

  QUADRIC   C[x,y,z] / (x*y - z^2),   rewrite z^2 -> x*y
  SL2       C[a,b,c,d] / (a*d - b*c - 1),   rewrite a*d -> b*c + 1

Normal forms are therefore spanned by monomials with z-exponent <= 1 on the
quadric, and by monomials not divisible by a*d on SL2.  Both rewrites keep the
total degree from increasing, so reduction never raises degree.

Scalars are `fractions.Fraction` (arbitrary precision, canonical sign and
lowest terms by construction).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "Monomial",
    "CoordinateRing",
    "Polynomial",
    "reduce_terms",
    "reduce",
    "poly_mul",
    "QUADRIC",
    "SL2",
    "AFFINE3",
    "AFFINE4",
    "affine_ring",
    "parse_polynomial",
]

ONE = Fraction(1)


class Monomial(tuple):
    """Sparse exponent map, stored as a sorted tuple of (index, exponent)."""

    __slots__ = ()

    def __new__(cls, pairs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        if isinstance(pairs, Monomial):
            return pairs
        if isinstance(pairs, Mapping):
            pairs = pairs.items()
        items = sorted((int(i), int(e)) for i, e in pairs if e != 0)
        for _, e in items:
            if e < 0:
                raise ValueError("negative exponent in monomial")
        return tuple.__new__(cls, items)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self)

    def exponent(self, var: int) -> int:
        for i, e in self:
            if i == var:
                return e
        return 0

    def mul(self, other: "Monomial") -> "Monomial":
        if not self:
            return other
        if not other:
            return self
        exps = dict(self)
        for i, e in other:
            exps[i] = exps.get(i, 0) + e
        return Monomial(exps)

    def divides(self, other: "Monomial") -> bool:
        it = dict(other)
        return all(it.get(i, 0) >= e for i, e in self)

    def div(self, other: "Monomial") -> "Monomial":
        """Quotient monomial; caller must ensure other divides self."""
        exps = dict(self)
        for i, e in other:
            exps[i] = exps[i] - e
        return Monomial(exps)

    def dense(self, nvars: int) -> tuple[int, ...]:
        out = [0] * nvars
        for i, e in self:
            out[i] = e
        return tuple(out)

    def deglex_key(self, nvars: int) -> tuple:
        return (self.degree, self.dense(nvars))

    def __str__(self) -> str:  # debugging aid; ring-aware printing lives on Polynomial
        return "*".join(f"v{i}^{e}" for i, e in self) or "1"


MONOMIAL_ONE = Monomial()


@dataclass(frozen=True)
class CoordinateRing:
    """Ambient variables plus an optional single rewrite rule head -> tail."""

    name: str
    variables: tuple[str, ...]
    rewrite_head: Monomial | None = None
    rewrite_tail: tuple[tuple[Monomial, Fraction], ...] = ()

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def var_index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r} in ring {self.name}") from None

    def var(self, name: str) -> "Polynomial":
        m = Monomial(((self.var_index(name), 1),))
        return Polynomial(self, {m: ONE}, _normal=True)

    def const(self, value) -> "Polynomial":
        c = Fraction(value)
        if c == 0:
            return Polynomial(self, {}, _normal=True)
        return Polynomial(self, {MONOMIAL_ONE: c}, _normal=True)

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {}, _normal=True)

    @property
    def one(self) -> "Polynomial":
        return self.const(1)

    def poly(self, text: str) -> "Polynomial":
        return parse_polynomial(self, text)

    @property
    def relation_terms(self) -> dict[Monomial, Fraction] | None:
        """head - tail as a raw ambient term dict, or None for affine rings."""
        if self.rewrite_head is None:
            return None
        terms: dict[Monomial, Fraction] = {self.rewrite_head: ONE}
        for m, c in self.rewrite_tail:
            terms[m] = terms.get(m, Fraction(0)) - c
            if terms[m] == 0:
                del terms[m]
        return terms

    def relation_value(self, coords):
        """Evaluate the defining relation at a coordinate tuple (0 if affine)."""
        rel = self.relation_terms
        if rel is None:
            return 0
        return _eval_terms(rel, coords)


def _eval_terms(terms: Mapping[Monomial, Fraction], coords):
    total = None
    for m, c in terms.items():
        v = c if all(isinstance(x, (Fraction, int)) for x in coords) else complex(c)
        for i, e in m:
            v = v * coords[i] ** e
        total = v if total is None else total + v
    if total is None:
        return 0
    return total


def reduce_terms(terms: Mapping[Monomial, Fraction], ring: CoordinateRing) -> dict[Monomial, Fraction]:
    """Rewrite a raw term dict to normal form in the given ring."""
    head = ring.rewrite_head
    out: dict[Monomial, Fraction] = {}
    if head is None:
        for m, c in terms.items():
            if c != 0:
                out[m] = out.get(m, Fraction(0)) + c
                if out[m] == 0:
                    del out[m]
        return out
    stack = [(m, c) for m, c in terms.items() if c != 0]
    tail = ring.rewrite_tail
    while stack:
        m, c = stack.pop()
        if head.divides(m):
            q = m.div(head)
            for tm, tc in tail:
                stack.append((tm.mul(q), tc * c))
        else:
            acc = out.get(m)
            if acc is None:
                out[m] = c
            else:
                acc = acc + c
                if acc == 0:
                    del out[m]
                else:
                    out[m] = acc
    return out


class Polynomial:
    """Normal-formed element of a coordinate ring."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: CoordinateRing, terms: Mapping[Monomial, Fraction], *, _normal: bool = False):
        self.ring = ring
        if _normal:
            self.terms = dict(terms)
        else:
            self.terms = reduce_terms(terms, ring)

    # -- basic queries -------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Total degree of the normal form; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(m.degree for m in self.terms)

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def constant_value(self) -> Fraction:
        """The scalar value, if the polynomial is constant."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1 and MONOMIAL_ONE in self.terms:
            return self.terms[MONOMIAL_ONE]
        raise ValueError("polynomial is not constant")

    def uses_only(self, names: set[str]) -> bool:
        idx = {self.ring.var_index(n) for n in names}
        return all(i in idx for m in self.terms for i, _ in m)

    # -- arithmetic ----------------------------------------------------

    def _check_ring(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring.name} vs {other.ring.name}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        self._check_ring(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            acc = out.get(m, Fraction(0)) + c
            if acc == 0:
                out.pop(m, None)
            else:
                out[m] = acc
        return Polynomial(self.ring, out, _normal=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()}, _normal=True)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return self.ring.zero
            return Polynomial(self.ring, {m: c * v for m, v in self.terms.items()}, _normal=True)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_ring(other)
        raw: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1.mul(m2)
                raw[m] = raw.get(m, Fraction(0)) + c1 * c2
        return Polynomial(self.ring, raw)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def partial(self, var: int | str) -> "Polynomial":
        """Partial derivative; derivatives of normal forms stay normal."""
        if isinstance(var, str):
            var = self.ring.var_index(var)
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            e = m.exponent(var)
            if e == 0:
                continue
            exps = dict(m)
            if e == 1:
                del exps[var]
            else:
                exps[var] = e - 1
            dm = Monomial(exps)
            acc = out.get(dm, Fraction(0)) + c * e
            if acc == 0:
                out.pop(dm, None)
            else:
                out[dm] = acc
        return Polynomial(self.ring, out, _normal=True)

    def eval(self, coords):
        """Evaluate at a coordinate tuple (Fraction exact, complex numeric)."""
        exact = all(isinstance(x, (Fraction, int)) for x in coords)
        total = Fraction(0) if exact else 0j
        for m, c in self.terms.items():
            v = c if exact else complex(c)
            for i, e in m:
                v = v * coords[i] ** e
            total = total + v
        return total

    # -- comparisons / hashing ------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring.name, self.ring.variables, frozenset(self.terms.items())))

    # -- printing --------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        nv = self.ring.nvars
        return sorted(self.terms.items(), key=lambda kv: kv[0].deglex_key(nv), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms():
            factors = []
            for i, e in m:
                v = self.ring.variables[i]
                factors.append(v if e == 1 else f"{v}^{e}")
            if not factors:
                body = str(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(abs(c))] + factors)
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"Polynomial({self.ring.name}: {self})"


def reduce(p, ring: CoordinateRing) -> Polynomial:
    """Normal form of an ambient polynomial (Polynomial or raw term dict)."""
    if isinstance(p, Polynomial):
        return Polynomial(ring, p.terms)
    return Polynomial(ring, p)


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    """Normal-formed product."""
    return p * q


# -- parsing -------------------------------------------------------------


class _Tokens:
    def __init__(self, text: str):
        self.toks: list[tuple[str, str]] = []
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch in "+-*/^()":
                self.toks.append((ch, ch))
                i += 1
            elif ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.toks.append(("int", text[i:j]))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.toks.append(("name", text[i:j]))
                i = j
            else:
                raise ValueError(f"unexpected character {ch!r} in polynomial text")
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok


def parse_polynomial(ring: CoordinateRing, text: str) -> Polynomial:
    """Parse `coef*var1^e1*... + ...`; rationals written p/q, explicit `*`.

    Parenthesised subexpressions and unary minus are accepted, so factored
    inputs such as `(x - 2)*(x + 1)` parse too.  Round-trips with str().
    """
    toks = _Tokens(text)

    def parse_sum():
        sign = 1
        kind, _ = toks.peek()
        if kind in ("+", "-"):
            toks.next()
            sign = -1 if kind == "-" else 1
        total = parse_product() * sign
        while True:
            kind, _ = toks.peek()
            if kind == "+":
                toks.next()
                total = total + parse_product()
            elif kind == "-":
                toks.next()
                total = total - parse_product()
            else:
                return total

    def parse_product():
        p = parse_power()
        while True:
            kind, _ = toks.peek()
            if kind == "*":
                toks.next()
                p = p * parse_power()
            elif kind == "/":
                toks.next()
                q = parse_power()
                c = q.constant_value()
                if c == 0:
                    raise ZeroDivisionError("division by zero in polynomial text")
                p = p * (Fraction(1) / c)
            else:
                return p

    def parse_power():
        base = parse_atom()
        kind, _ = toks.peek()
        if kind == "^":
            toks.next()
            k2, val = toks.next()
            if k2 != "int":
                raise ValueError("exponent must be a nonnegative integer")
            return base ** int(val)
        return base

    def parse_atom():
        kind, val = toks.next()
        if kind == "int":
            return ring.const(int(val))
        if kind == "name":
            return ring.var(val)
        if kind == "-":
            return -parse_atom()
        if kind == "(":
            inner = parse_sum()
            k2, _ = toks.next()
            if k2 != ")":
                raise ValueError("missing closing parenthesis")
            return inner
        raise ValueError(f"unexpected token {val!r} in polynomial text")

    result = parse_sum()
    if toks.peek() != (None, None):
        raise ValueError(f"trailing input in polynomial text {text!r}")
    return result


# -- canonical rings -------------------------------------------------------

_AFFINE_CACHE: dict[tuple[str, ...], CoordinateRing] = {}


def affine_ring(variables: Iterable[str]) -> CoordinateRing:
    """Relation-free ring on the given variables (cached per variable tuple)."""
    key = tuple(variables)
    ring = _AFFINE_CACHE.get(key)
    if ring is None:
        ring = CoordinateRing(f"AFFINE{len(key)}", key)
        _AFFINE_CACHE[key] = ring
    return ring


def _mono(pairs) -> Monomial:
    return Monomial(pairs)


QUADRIC = CoordinateRing(
    "QUADRIC",
    ("x", "y", "z"),
    rewrite_head=_mono({2: 2}),                       # z^2
    rewrite_tail=((_mono({0: 1, 1: 1}), ONE),),       # -> x*y
)

SL2 = CoordinateRing(
    "SL2",
    ("a", "b", "c", "d"),
    rewrite_head=_mono({0: 1, 3: 1}),                 # a*d
    rewrite_tail=((_mono({1: 1, 2: 1}), ONE), (MONOMIAL_ONE, ONE)),  # -> b*c + 1
)

AFFINE3 = affine_ring(("x", "y", "z"))
AFFINE4 = affine_ring(("a", "b", "c", "d"))
