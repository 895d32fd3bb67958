"""Sparse exact linear algebra over the rationals.

Systems are built around *unknown ids* — arbitrary hashable tags, usually
tuples like ("f", target, source) — registered in a fixed order that
determines pivoting.  Rows are sparse dicts id -> Fraction, each carrying a
provenance tag naming the constraint it came from, so a failed solve can say
which identity ruled the candidate out.

All routines are deterministic: the pivot of a row is its first nonzero
coefficient in registration order, and reduced row echelon form is unique for
a given unknown order, so kernel bases and solutions are reproducible across
runs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Optional

Row = dict[Hashable, Fraction]


class SubspaceNotContained(Exception):
    """A claimed subspace vector does not lie in the ambient span."""


class LinearSystem:
    """Sparse homogeneous system: ordered unknowns, tagged rows."""

    def __init__(self) -> None:
        self.unknowns: list[Hashable] = []
        self._pos: dict[Hashable, int] = {}
        self.rows: list[Row] = []
        self.tags: list[str] = []

    def add_unknown(self, uid: Hashable) -> None:
        """Register an unknown; re-registering is a no-op (order is kept)."""
        if uid not in self._pos:
            self._pos[uid] = len(self.unknowns)
            self.unknowns.append(uid)

    def add_unknowns(self, uids: Iterable[Hashable]) -> None:
        for uid in uids:
            self.add_unknown(uid)

    def position(self, uid: Hashable) -> int:
        return self._pos[uid]

    def add_row(self, coeffs: Row, tag: str = "") -> None:
        """Add a constraint sum(coeffs[u] * u) = 0; zero coefficients are dropped."""
        clean: Row = {}
        for uid, c in coeffs.items():
            if uid not in self._pos:
                raise KeyError(f"unknown id not registered: {uid!r}")
            if c:
                clean[uid] = Fraction(c)
        self.rows.append(clean)
        self.tags.append(tag)

    def __len__(self) -> int:
        return len(self.rows)


def _scaled_sub(target: dict[int, Fraction], factor: Fraction,
                source: dict[int, Fraction]) -> None:
    """target -= factor * source, in place, dropping zeros."""
    for pos, c in source.items():
        new = target.get(pos, Fraction(0)) - factor * c
        if new:
            target[pos] = new
        else:
            target.pop(pos, None)


def rref(system: LinearSystem) -> LinearSystem:
    """Reduced row echelon form: unit pivots, pivot-sorted rows, tags preserved.

    The tag of each output row is the tag of the input row that contributed
    its pivot.  rref is idempotent and canonical for the registered unknown
    order.
    """
    pivots: dict[int, tuple[dict[int, Fraction], str]] = {}
    for row, tag in zip(system.rows, system.tags):
        work = {system._pos[u]: c for u, c in row.items()}
        while work:
            hits = work.keys() & pivots.keys()
            if not hits:
                break
            p = min(hits)
            _scaled_sub(work, work[p], pivots[p][0])
        if not work:
            continue
        lead = min(work)
        inv = 1 / work[lead]
        work = {p: c * inv for p, c in work.items()}
        for orow, _otag in pivots.values():
            if lead in orow:
                _scaled_sub(orow, orow[lead], work)
        pivots[lead] = (work, tag)

    out = LinearSystem()
    out.add_unknowns(system.unknowns)
    for lead in sorted(pivots):
        prow, tag = pivots[lead]
        out.add_row({system.unknowns[p]: c for p, c in prow.items()}, tag)
    return out


def rank(system: LinearSystem) -> int:
    return len(rref(system).rows)


def kernel_basis(system: LinearSystem) -> list[Row]:
    """Basis of the solution space, one vector per free unknown, in unknown order.

    Read off the (unique) rref: the vector for free unknown u has a 1 at u and
    -coefficient at each pivot unknown, so the basis is canonical.
    """
    reduced = rref(system)
    rows_by_pivot: dict[Hashable, Row] = {}
    for row in reduced.rows:
        piv = min(row, key=system._pos.__getitem__)
        rows_by_pivot[piv] = row
    basis: list[Row] = []
    for free in system.unknowns:
        if free in rows_by_pivot:
            continue
        vec: Row = {free: Fraction(1)}
        for piv, row in rows_by_pivot.items():
            c = row.get(free)
            if c:
                vec[piv] = -c
        basis.append(vec)
    return basis


def solve_affine(system: LinearSystem, rhs: list[Fraction]) -> Optional[Row]:
    """One solution of system * x = rhs, or None when inconsistent.

    ``rhs`` aligns with ``system.rows``.  Free unknowns are set to zero, so
    the returned solution is the canonical (pivot-supported) one.
    """
    if len(rhs) != len(system.rows):
        raise ValueError("right-hand side length does not match row count")

    pivots: dict[int, tuple[dict[int, Fraction], Fraction]] = {}
    for row, b in zip(system.rows, rhs):
        work = {system._pos[u]: c for u, c in row.items()}
        b = Fraction(b)
        while work:
            hits = work.keys() & pivots.keys()
            if not hits:
                break
            p = min(hits)
            prow, pb = pivots[p]
            factor = work[p]
            _scaled_sub(work, factor, prow)
            b -= factor * pb
        if not work:
            if b:
                return None
            continue
        lead = min(work)
        inv = 1 / work[lead]
        work = {p: c * inv for p, c in work.items()}
        b *= inv
        for opos, (orow, ob) in list(pivots.items()):
            if lead in orow:
                factor = orow[lead]
                _scaled_sub(orow, factor, work)
                pivots[opos] = (orow, ob - factor * b)
        pivots[lead] = (work, b)

    solution: Row = {}
    for lead, (_prow, b) in pivots.items():
        if b:
            solution[system.unknowns[lead]] = b
    return solution


def quotient_dim(space: list[Row], subspace: list[Row]) -> int:
    """dim(span(space) / span(subspace)); raises SubspaceNotContained if needed.

    Vectors are sparse dicts over any hashable ids; the unknown order is the
    first-appearance order over ``space`` then ``subspace``, which is
    deterministic for deterministically-built inputs.
    """
    order: dict[Hashable, int] = {}
    for vec in list(space) + list(subspace):
        for uid in vec:
            if uid not in order:
                order[uid] = len(order)

    def to_pos(vec: Row) -> dict[int, Fraction]:
        return {order[u]: Fraction(c) for u, c in vec.items() if c}

    def reduce_against(row: dict[int, Fraction],
                       pivots: dict[int, dict[int, Fraction]]) -> dict[int, Fraction]:
        while row:
            hits = row.keys() & pivots.keys()
            if not hits:
                break
            p = min(hits)
            _scaled_sub(row, row[p], pivots[p])
        return row

    def insert(row: dict[int, Fraction], pivots: dict[int, dict[int, Fraction]]) -> bool:
        row = reduce_against(row, pivots)
        if not row:
            return False
        lead = min(row)
        inv = 1 / row[lead]
        pivots[lead] = {p: c * inv for p, c in row.items()}
        return True

    space_pivots: dict[int, dict[int, Fraction]] = {}
    space_rank = sum(insert(to_pos(v), space_pivots) for v in space)

    sub_pivots: dict[int, dict[int, Fraction]] = {}
    sub_rank = 0
    for vec in subspace:
        if reduce_against(to_pos(vec), dict(space_pivots)):
            raise SubspaceNotContained(
                "subspace vector does not lie in the ambient span"
            )
        sub_rank += insert(to_pos(vec), sub_pivots)
    return space_rank - sub_rank
