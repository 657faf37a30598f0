"""Tangent polynomial vector fields on SL2 and the quadric x*y = z^2.

A vector field is a derivation stored as one normal-formed coefficient
polynomial per ambient variable.  Tangency (the derivation maps the defining
relation into the ideal) is checked at construction, so every VectorField in
circulation genuinely lives on its variety.  Equality is componentwise
equality of normal forms, which is canonical because a coefficient tuple
induces the zero derivation exactly when all entries lie in the ideal.

The catalogs:

  SL2      V = c d/da + d d/db          (left multiplication, upper shear)
           W = a d/dc + b d/dd          (left multiplication, lower shear)
           H = [V, W] = -a d/da - b d/db + c d/dc + d d/dd
           BCW = (b+c)*W,  DW = d*W,  DH = d*H

  QUADRIC  THETA = 2z d/dx + y d/dz
           XI    = 2z d/dy + x d/dz
           H     = [THETA, XI] = -2x d/dx + 2y d/dy
           X_XI = x*XI,  Z_XI = z*XI,  Z_H = z*H
           plus the shear families f(x)*XI and g(y)*THETA.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .poly import (
    AFFINE3,
    QUADRIC,
    SL2,
    CoordinateRing,
    Monomial,
    Polynomial,
)

__all__ = [
    "VectorField",
    "Point",
    "TangencyError",
    "catalog",
    "bracket",
    "apply_derivation",
    "kk_combination",
    "evaluate",
    "span_rank_at",
    "omega_divergence",
    "shear_xi",
    "shear_theta",
    "parse_field",
]


class TangencyError(ValueError):
    pass


class VectorField:
    """Tangent derivation, stored as ambient coefficients in normal form."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: CoordinateRing, coeffs, *, check: bool = True):
        comps = []
        for c in coeffs:
            if isinstance(c, str):
                c = ring.poly(c)
            elif not isinstance(c, Polynomial):
                c = ring.const(c)
            else:
                c = Polynomial(ring, c.terms)
            comps.append(c)
        if len(comps) != ring.nvars:
            raise ValueError("one coefficient per ambient variable expected")
        self.ring = ring
        self.coeffs = tuple(comps)
        if check and ring.rewrite_head is not None and not self._is_tangent():
            raise TangencyError(f"field is not tangent to {ring.name}")

    def _is_tangent(self) -> bool:
        rel = self.ring.relation_terms
        total = self.ring.zero
        for i in range(self.ring.nvars):
            # d(relation)/dx_i, computed on the raw relation terms
            part: dict[Monomial, Fraction] = {}
            for m, c in rel.items():
                e = m.exponent(i)
                if e:
                    exps = dict(m)
                    if e == 1:
                        del exps[i]
                    else:
                        exps[i] = e - 1
                    dm = Monomial(exps)
                    part[dm] = part.get(dm, Fraction(0)) + c * e
            total = total + self.coeffs[i] * Polynomial(self.ring, part)
        return total.is_zero

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)

    @property
    def degree(self) -> int:
        """Max coefficient degree; -1 for the zero field."""
        return max((c.degree for c in self.coeffs), default=-1)

    def apply(self, p: Polynomial) -> Polynomial:
        return apply_derivation(self, p)

    def evaluate(self, point) -> tuple:
        return evaluate(self, point)

    def _check_ring(self, other: "VectorField"):
        if self.ring != other.ring:
            raise ValueError("ring mismatch between vector fields")

    def __add__(self, other: "VectorField") -> "VectorField":
        self._check_ring(other)
        return VectorField(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)], check=False)

    def __sub__(self, other: "VectorField") -> "VectorField":
        self._check_ring(other)
        return VectorField(self.ring, [a - b for a, b in zip(self.coeffs, other.coeffs)], check=False)

    def __neg__(self) -> "VectorField":
        return VectorField(self.ring, [-a for a in self.coeffs], check=False)

    def __mul__(self, other):
        """Scalar or polynomial multiple (tangency is preserved)."""
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("ring mismatch in polynomial multiple")
            return VectorField(self.ring, [other * a for a in self.coeffs], check=False)
        return VectorField(self.ring, [a * Fraction(other) for a in self.coeffs], check=False)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring.name, self.coeffs))

    def __str__(self) -> str:
        pieces = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero:
                continue
            body = str(c)
            if len(c.terms) > 1:
                body = f"({body})"
            pieces.append(f"{body} d/d{self.ring.variables[i]}")
        if not pieces:
            return "0"
        out = pieces[0]
        for piece in pieces[1:]:
            if piece.startswith("-"):
                out += " - " + piece[1:]
            else:
                out += " + " + piece
        return out

    def __repr__(self):
        return f"VectorField({self.ring.name}: {self})"

    def to_json(self) -> dict:
        return {"ring": self.ring.name, "coeffs": [str(c) for c in self.coeffs]}


@dataclass(frozen=True)
class Point:
    """Ambient coordinates of a point on (or numerically near) the variety."""

    ring: CoordinateRing
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.ring.nvars:
            raise ValueError("coordinate count mismatch")
        rel = self.ring.relation_value(self.coords)
        if self.is_exact:
            if rel != 0:
                raise ValueError(f"point not on {self.ring.name}: relation = {rel}")
        else:
            scale = max(1.0, sum(abs(complex(c)) ** 2 for c in self.coords))
            if abs(complex(rel)) > 1e-9 * scale:
                raise ValueError(f"point not on {self.ring.name}: relation = {rel}")

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, (Fraction, int)) for c in self.coords)


def apply_derivation(A: VectorField, p: Polynomial) -> Polynomial:
    """Sum of coeff_i * dp/dx_i, reduced to normal form."""
    if A.ring != p.ring:
        raise ValueError("ring mismatch in apply_derivation")
    total = A.ring.zero
    for i, c in enumerate(A.coeffs):
        if c.is_zero:
            continue
        dp = p.partial(i)
        if not dp.is_zero:
            total = total + c * dp
    return total


def bracket(A: VectorField, B: VectorField) -> VectorField:
    """Lie bracket [A, B]; component i is A(B_i) - B(A_i) in normal form."""
    A._check_ring(B)
    comps = [apply_derivation(A, bc) - apply_derivation(B, ac) for ac, bc in zip(A.coeffs, B.coeffs)]
    return VectorField(A.ring, comps, check=False)


def kk_combination(f: Polynomial, g: Polynomial, h: Polynomial,
                   gamma: VectorField, delta: VectorField) -> VectorField:
    """[h*f*Gamma, g*Delta] - [f*Gamma, h*g*Delta].

    Expanding the brackets cancels every second-order term, leaving
    -g*f*Delta(h)*Gamma - f*g*Gamma(h)*Delta; kk_rhs computes that side
    directly so the identity can be checked term by term.
    """
    gamma._check_ring(delta)
    lhs = bracket((h * f) * gamma, g * delta) - bracket(f * gamma, (h * g) * delta)
    return lhs


def kk_rhs(f: Polynomial, g: Polynomial, h: Polynomial,
           gamma: VectorField, delta: VectorField) -> VectorField:
    return -((g * f * apply_derivation(delta, h)) * gamma) - ((f * g * apply_derivation(gamma, h)) * delta)


def evaluate(A: VectorField, point) -> tuple:
    """Ambient tangent vector at a point (Point or raw coordinate tuple)."""
    coords = point.coords if isinstance(point, Point) else tuple(point)
    return tuple(c.eval(coords) for c in A.coeffs)


def span_rank_at(fields, point, tol: float = 1e-8) -> int:
    """Numeric rank of the evaluated tangent vectors (absolute tolerance)."""
    if not fields:
        return 0
    rows = [[complex(v) for v in evaluate(F, point)] for F in fields]
    return int(np.linalg.matrix_rank(np.array(rows, dtype=complex), tol=tol))


# -- catalogs ---------------------------------------------------------------

_CATALOGS: dict[str, dict[str, VectorField]] = {}


def catalog(variety: str | CoordinateRing) -> dict[str, VectorField]:
    """Named complete fields on 'SL2' or 'QUADRIC'."""
    name = variety.name if isinstance(variety, CoordinateRing) else variety.upper()
    if name in _CATALOGS:
        return dict(_CATALOGS[name])
    if name == "SL2":
        V = VectorField(SL2, ["c", "d", "0", "0"])
        W = VectorField(SL2, ["0", "0", "a", "b"])
        H = bracket(V, W)
        cat = {
            "V": V,
            "W": W,
            "H": H,
            "BCW": SL2.poly("b + c") * W,
            "DW": SL2.poly("d") * W,
            "DH": SL2.poly("d") * H,
        }
    elif name == "QUADRIC":
        theta = VectorField(QUADRIC, ["2*z", "0", "y"])
        xi = VectorField(QUADRIC, ["0", "2*z", "x"])
        H = bracket(theta, xi)
        cat = {
            "THETA": theta,
            "XI": xi,
            "H": H,
            "X_XI": QUADRIC.var("x") * xi,
            "Z_XI": QUADRIC.var("z") * xi,
            "Z_H": QUADRIC.var("z") * H,
        }
    else:
        raise KeyError(f"unknown variety {variety!r}")
    _CATALOGS[name] = cat
    return dict(cat)


def shear_xi(f: Polynomial) -> VectorField:
    """f(x) * XI; f must be a polynomial in x alone (so it is flow-invariant)."""
    if f.ring != QUADRIC or not f.uses_only({"x"}):
        raise ValueError("shear coefficient must be a QUADRIC polynomial in x only")
    return f * catalog("QUADRIC")["XI"]


def shear_theta(g: Polynomial) -> VectorField:
    """g(y) * THETA; g must be a polynomial in y alone."""
    if g.ring != QUADRIC or not g.uses_only({"y"}):
        raise ValueError("shear coefficient must be a QUADRIC polynomial in y only")
    return g * catalog("QUADRIC")["THETA"]


# -- volume form divergence --------------------------------------------------


def _chart_x(poly: Polynomial) -> dict[tuple[int, int], Fraction]:
    """Restrict to the chart x != 0 with coordinates (x, z), via y = z^2/x.

    Returns a Laurent dict (x exponent, z exponent) -> coefficient; the x
    exponent may be negative.
    """
    out: dict[tuple[int, int], Fraction] = {}
    for m, c in poly.terms.items():
        i, j, e = m.exponent(0), m.exponent(1), m.exponent(2)
        key = (i - j, 2 * j + e)
        out[key] = out.get(key, Fraction(0)) + c
        if out[key] == 0:
            del out[key]
    return out


def _laurent_div(num: dict, min_shift: int) -> dict:
    return {(i - min_shift, j): c for (i, j), c in num.items()}


def omega_divergence(A: VectorField) -> Polynomial:
    """Divergence of A for the chart-(x,z) volume form dx^dz / x.

    For X = P d/dx + R d/dz on the chart, the divergence is
    dP/dx + dR/dz - P/x; the result is returned with denominators cleared,
    as a polynomial in x and z (an AFFINE3 element), zero iff A preserves
    the form on the chart.
    """
    if A.ring != QUADRIC:
        raise ValueError("omega_divergence is defined on the QUADRIC ring")
    P = _chart_x(A.coeffs[0])
    R = _chart_x(A.coeffs[2])
    div: dict[tuple[int, int], Fraction] = {}

    def acc(key, val):
        if val == 0:
            return
        div[key] = div.get(key, Fraction(0)) + val
        if div[key] == 0:
            del div[key]

    for (i, j), c in P.items():
        acc((i - 1, j), c * i)      # dP/dx
        acc((i - 1, j), -c)         # -P/x
    for (i, j), c in R.items():
        acc((i, j - 1), c * j)      # dR/dz
    if not div:
        return AFFINE3.zero
    shift = min(i for (i, _j) in div)
    if shift < 0:
        div = _laurent_div(div, shift)
    terms = {Monomial({0: i, 2: j}): c for (i, j), c in div.items()}
    return Polynomial(AFFINE3, terms, _normal=True)


def omega_divergence_ychart(A: VectorField) -> Polynomial:
    """Cross-check divergence in the chart y != 0 (form -dy^dz / y)."""
    if A.ring != QUADRIC:
        raise ValueError("omega_divergence is defined on the QUADRIC ring")

    def chart_y(poly: Polynomial) -> dict[tuple[int, int], Fraction]:
        out: dict[tuple[int, int], Fraction] = {}
        for m, c in poly.terms.items():
            i, j, e = m.exponent(0), m.exponent(1), m.exponent(2)
            key = (j - i, 2 * i + e)
            out[key] = out.get(key, Fraction(0)) + c
            if out[key] == 0:
                del out[key]
        return out

    Q = chart_y(A.coeffs[1])
    R = chart_y(A.coeffs[2])
    div: dict[tuple[int, int], Fraction] = {}

    def acc(key, val):
        if val == 0:
            return
        div[key] = div.get(key, Fraction(0)) + val
        if div[key] == 0:
            del div[key]

    for (i, j), c in Q.items():
        acc((i - 1, j), c * i)
        acc((i - 1, j), -c)
    for (i, j), c in R.items():
        acc((i, j - 1), c * j)
    if not div:
        return AFFINE3.zero
    shift = min(i for (i, _j) in div)
    if shift < 0:
        div = _laurent_div(div, shift)
    terms = {Monomial({1: i, 2: j}): c for (i, j), c in div.items()}
    return Polynomial(AFFINE3, terms, _normal=True)


# -- text form ---------------------------------------------------------------


def parse_field(ring: CoordinateRing, text: str) -> VectorField:
    """Parse the `2*z d/dx + y d/dz` form (parenthesise sums: `(x + y) d/dx`)."""
    import re

    comps = {v: ring.zero for v in ring.variables}
    rest = text.strip()
    if rest == "0":
        return VectorField(ring, [comps[v] for v in ring.variables], check=False)
    matches = list(re.finditer(r"d/d([A-Za-z_]\w*)", rest))
    if not matches:
        raise ValueError("no d/d<var> component in field text")
    start = 0
    for mt in matches:
        chunk = rest[start:mt.start()].strip()
        var = mt.group(1)
        if var not in comps:
            raise KeyError(f"unknown variable {var!r} in field text")
        lead_sign = 1
        if chunk.startswith("+"):
            chunk = chunk[1:].strip()
        elif chunk.startswith("-"):
            lead_sign = -1
            chunk = chunk[1:].strip()
        if chunk.endswith("*"):
            chunk = chunk[:-1].strip()
        coeff = ring.one if chunk == "" else ring.poly(chunk)
        comps[var] = comps[var] + coeff * lead_sign
        start = mt.end()
    tail = rest[start:].strip()
    if tail:
        raise ValueError(f"trailing input in field text: {tail!r}")
    return VectorField(ring, [comps[v] for v in ring.variables])
