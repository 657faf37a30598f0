"""Exact linear algebra over the rationals.

Two layers:

  * linear_solve_exact: dense Gauss-Jordan over Fraction, returning one
    solution of A x = b or None when the system is inconsistent.

  * Eliminator: incremental sparse echelon form over the integers with full
    provenance.  Every accepted vector becomes a basis slot; inserting or
    reducing a vector yields either a new slot or the exact rational
    combination of existing slots that reproduces it.  Provenance is what
    turns the elimination into membership certificates downstream.

Vectors are dicts mapping integer keys to integer values; the key order (the
natural int order) doubles as the pivot order, so callers control determinism
by how they number coordinates.  Rational vectors are cleared to integers on
entry and the clearing factor is folded into the provenance, so reported
combinations are exact rationals.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

__all__ = ["linear_solve_exact", "Eliminator", "clear_denominators"]


def linear_solve_exact(A, b):
    """Solve A x = b exactly; returns a list of Fractions or None.

    A is a sequence of rows; entries may be int or Fraction.  When the system
    is underdetermined, free variables are set to zero.
    """
    rows = [[Fraction(v) for v in row] for row in A]
    rhs = [Fraction(v) for v in b]
    if len(rows) != len(rhs):
        raise ValueError("matrix/vector size mismatch")
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    for row in rows:
        if len(row) != ncols:
            raise ValueError("ragged matrix")

    piv_cols: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        rhs[r], rhs[pivot] = rhs[pivot], rhs[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        rhs[r] = rhs[r] / pv
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [vi - f * vr for vi, vr in zip(rows[i], rows[r])]
                rhs[i] = rhs[i] - f * rhs[r]
        piv_cols.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if rhs[i] != 0:
            return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(piv_cols):
        x[c] = rhs[i]
    return x


def clear_denominators(vec: dict[int, Fraction]) -> tuple[dict[int, int], int]:
    """Scale a rational vector to integers; returns (int vector, multiplier)."""
    mult = 1
    for v in vec.values():
        d = Fraction(v).denominator
        if d != 1:
            mult = lcm(mult, d)
    out = {}
    for k, v in vec.items():
        fv = Fraction(v) * mult
        if fv != 0:
            out[k] = int(fv)
    return out, mult


def _normalize(vec: dict[int, int], combo: dict[int, int]) -> None:
    g = 0
    for v in vec.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        for v in combo.values():
            g = gcd(g, v)
            if g == 1:
                break
    if g > 1:
        for k in vec:
            vec[k] //= g
        for k in combo:
            combo[k] //= g


class Eliminator:
    """Incremental exact echelon form with membership certificates.

    Each accepted vector occupies a numbered slot.  Internally rows are
    stored pivot-keyed; a row records an integer combination of slots, so a
    vector that reduces to zero yields its exact expansion over the slots.
    """

    SLOT_SELF = -1  # combo key for the vector currently being reduced

    def __init__(self):
        self._rows: dict[int, tuple[dict[int, int], dict[int, int]]] = {}
        self.nslots = 0

    def _reduce(self, vec: dict[int, int], combo: dict[int, int]):
        steps = 0
        while vec:
            lead = max(vec)
            row = self._rows.get(lead)
            if row is None:
                return lead
            rvec, rcombo = row
            p = rvec[lead]
            v = vec[lead]
            for k, rv in rvec.items():
                nv = p * vec.get(k, 0) - v * rv
                if nv == 0:
                    vec.pop(k, None)
                else:
                    vec[k] = nv
            for k in list(vec):
                if k not in rvec:
                    vec[k] *= p
            for k, rc in rcombo.items():
                nc = p * combo.get(k, 0) - v * rc
                if nc == 0:
                    combo.pop(k, None)
                else:
                    combo[k] = nc
            for k in list(combo):
                if k not in rcombo:
                    combo[k] *= p
            steps += 1
            if steps % 8 == 0:
                _normalize(vec, combo)
        return None

    def insert(self, vec: dict[int, Fraction | int]):
        """Insert a vector.

        Returns ("new", slot) when independent, or ("dep", {slot: Fraction})
        giving the exact combination of earlier slots equal to the vector.
        The zero vector reports ("dep", {}).
        """
        ivec, mult = clear_denominators({k: v for k, v in vec.items() if v != 0})
        combo = {self.SLOT_SELF: mult}
        lead = self._reduce(ivec, combo)
        if lead is None:
            alpha = combo.pop(self.SLOT_SELF)
            return "dep", {k: Fraction(-c, alpha) for k, c in combo.items()}
        _normalize(ivec, combo)
        slot = self.nslots
        self.nslots += 1
        combo[slot] = combo.pop(self.SLOT_SELF)
        self._rows[lead] = (ivec, combo)
        return "new", slot

    def reduce_only(self, vec: dict[int, Fraction | int]):
        """Like insert, but never accepts: returns the combo dict or None."""
        ivec, mult = clear_denominators({k: v for k, v in vec.items() if v != 0})
        combo = {self.SLOT_SELF: mult}
        lead = self._reduce(ivec, combo)
        if lead is None:
            alpha = combo.pop(self.SLOT_SELF)
            return {k: Fraction(-c, alpha) for k, c in combo.items()}
        return None
