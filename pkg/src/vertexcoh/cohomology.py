"""Low-degree cohomology: derivations and square-zero classes.

Degree one is classical: a derivation is a degree-zero map f with

    f(u_n v) = f(u)_n v + u_n f(v)

where the first term is a module element acting back on the algebra through
skew-symmetry.  The solver assembles one linear row per (u, n, v, target
coordinate) inside the verification window and reads the kernel.

Degree two is deliberately operational.  A candidate 2-cochain psi is a
degree-zero mode family (V, V) -> W obeying the weight rule; its *residual*
is the full list of axiom-instance residuals of the square-zero extension
built along psi, projected to the fiber.  Because the fiber multiplies to
zero, that residual is linear in psi and vanishes exactly when the extension
passes the checker — so cocycles are computed by probing the residual on
elementary cochains and taking a kernel, coboundaries come from vacuum-killing
degree-zero maps, and the quotient is the cohomology.  No cocycle equation is
ever written down separately from the checker that justifies it.

Slot and probe order is (wt u, u, n, v, target), flat indices weight-major,
so every result is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .linalg import LinearSystem, kernel_basis, quotient_dim, solve_affine
from .spaces import (
    GradedMap,
    ModeFamily,
    TruncationBreach,
    VAModule,
    VertexAlgebra,
    mode_apply,
    skew_mode,
    viadd,
)


class VacuumNotKilled(Exception):
    """A coboundary source map must vanish on the vacuum."""


class NotACocycle(Exception):
    """is_coboundary was handed a cochain whose extension fails the checker."""

    def __init__(self, coords):
        sample = ", ".join(str(c) for c in coords[:3])
        more = "" if len(coords) <= 3 else f" (+{len(coords) - 3} more)"
        super().__init__(f"nonzero residual at {sample}{more}")
        self.coords = coords


@dataclass
class TwoCochain:
    """A degree-zero candidate 2-cochain: sparse modes (V, V) -> W.

    Arithmetic is pointwise; the weight rule is enforced on every stored
    entry by the underlying mode family.
    """

    V: VertexAlgebra
    W: VAModule
    psi: ModeFamily = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.psi is None:
            self.psi = ModeFamily(self.V.space, self.V.space, self.W.space)

    @classmethod
    def zero(cls, V: VertexAlgebra, W: VAModule) -> "TwoCochain":
        return cls(V, W)

    @classmethod
    def from_entries(cls, V: VertexAlgebra, W: VAModule, entries: Mapping) -> "TwoCochain":
        """Entries keyed by (u label, n, v label) -> {target label: coeff}."""
        out = cls(V, W)
        vidx, widx = V.space.index, W.space.index
        for (u, n, v), vec in entries.items():
            out.psi.set_entry(
                vidx[u], n, vidx[v], {widx[t]: c for t, c in vec.items()}
            )
        return out

    @classmethod
    def from_slots(cls, V: VertexAlgebra, W: VAModule, vec: Mapping) -> "TwoCochain":
        """Slot-vector form: {(u, n, v, target): coeff} with flat indices."""
        grouped: dict[tuple[int, int, int], dict[int, Fraction]] = {}
        for (u, n, v, t), c in vec.items():
            if c:
                grouped.setdefault((u, n, v), {})[t] = c
        out = cls(V, W)
        for (u, n, v), col in grouped.items():
            out.psi.set_entry(u, n, v, col)
        return out

    def entry(self, u: int, n: int, v: int) -> dict | None:
        return self.psi.entry(u, n, v)

    def slots(self) -> dict[tuple[int, int, int, int], Fraction]:
        return {
            (u, n, v, t): c
            for u, n, v, vec in self.psi.iter_entries()
            for t, c in sorted(vec.items())
        }

    def entries_by_labels(self) -> dict:
        lab, wlab = self.V.space.label_of, self.W.space.label_of
        return {
            (lab(u), n, lab(v)): {wlab(t): c for t, c in sorted(vec.items())}
            for u, n, v, vec in self.psi.iter_entries()
        }

    def _combine(self, other: "TwoCochain", sign: int) -> "TwoCochain":
        if other.V.space is not self.V.space and \
                other.V.space.labels != self.V.space.labels:
            raise ValueError("cochains live over different algebras")
        out = TwoCochain(self.V, self.W)
        keys = set(self.psi.entries) | set(other.psi.entries)
        for (u, n, v) in sorted(keys):
            vec = dict(self.psi.entries.get((u, n, v), {}))
            viadd(vec, sign, other.psi.entries.get((u, n, v), {}))
            out.psi.set_entry(u, n, v, vec)
        return out

    def __add__(self, other: "TwoCochain") -> "TwoCochain":
        return self._combine(other, 1)

    def __sub__(self, other: "TwoCochain") -> "TwoCochain":
        return self._combine(other, -1)

    def scale(self, coeff) -> "TwoCochain":
        out = TwoCochain(self.V, self.W)
        for u, n, v, vec in self.psi.iter_entries():
            out.psi.set_entry(u, n, v, {t: coeff * c for t, c in vec.items()})
        return out

    def __bool__(self):
        return bool(self.psi)

    def __eq__(self, other):
        if not isinstance(other, TwoCochain):
            return NotImplemented
        return self.psi.entries == other.psi.entries


@dataclass
class CohomologyResult:
    """Dimensions and witnesses for one cohomology degree.

    ``h_dim`` is dim span(cocycle_basis) - dim span(coboundary_basis);
    ``representative_classes`` are cocycle-basis members independent modulo
    the coboundaries, one per class.  ``window`` is None on exact tiers and
    "level-N" on truncated ones, flagging that every claim is about the
    enumerated window only.
    """

    degree: int
    h_dim: int
    cocycle_basis: list = field(default_factory=list)
    coboundary_basis: list = field(default_factory=list)
    representative_classes: list = field(default_factory=list)
    window: str | None = None


def _window_label(V: VertexAlgebra) -> str | None:
    return f"level-{V.space.cutoff}" if V.space.tier == "truncated" else None


# ---------------------------------------------------------------------------
# cochain slot enumeration (the probe order everything shares)
# ---------------------------------------------------------------------------

def cochain_slots(V: VertexAlgebra, W: VAModule) -> list[tuple[int, int, int, int]]:
    """All (u, n, v, target) a degree-zero 2-cochain may populate, probe order."""
    vsp, wsp = V.space, W.space
    slots: list[tuple[int, int, int, int]] = []
    target_weights = sorted(wsp.by_weight)
    for u in range(len(vsp)):
        wu = vsp.weight_of(u)
        ns = sorted({
            wu + vsp.weight_of(v) - 1 - tau
            for v in range(len(vsp))
            for tau in target_weights
        })
        for n in ns:
            for v in range(len(vsp)):
                tau = wu + vsp.weight_of(v) - n - 1
                for t in wsp.by_weight.get(tau, ()):
                    slots.append((u, n, v, t))
    return slots


def _mode_index_triples(V: VertexAlgebra, W: VAModule):
    """(u, n, v) windows where a degree-zero cochain may be nonzero."""
    vsp, wsp = V.space, W.space
    target_weights = sorted(wsp.by_weight)
    for u in range(len(vsp)):
        wu = vsp.weight_of(u)
        ns = sorted({
            wu + vsp.weight_of(v) - 1 - tau
            for v in range(len(vsp))
            for tau in target_weights
        })
        for n in ns:
            for v in range(len(vsp)):
                if (wu + vsp.weight_of(v) - n - 1) in wsp.by_weight:
                    yield u, n, v


# ---------------------------------------------------------------------------
# degree one
# ---------------------------------------------------------------------------

def derivation_system(V: VertexAlgebra, W: VAModule) -> LinearSystem:
    """Linear system whose kernel is the space of derivations V -> W.

    Unknowns ("f", source, target) in flat order; one row per (u, n, v,
    target coordinate) inside the window, tagged with the instance it came
    from.
    """
    vsp, wsp = V.space, W.space
    system = LinearSystem()
    for v in range(len(vsp)):
        for t in wsp.by_weight.get(vsp.weight_of(v), ()):
            system.add_unknown(("f", v, t))

    for u, n, v in _mode_index_triples(V, W):
        tau = vsp.weight_of(u) + vsp.weight_of(v) - n - 1
        uvec, vvec = {u: Fraction(1)}, {v: Fraction(1)}
        # coefficient dicts per target coordinate, built from the three terms
        per_target: dict[int, dict] = {tt: {} for tt in wsp.by_weight[tau]}

        def put(tt: int, uid, value) -> None:
            if value and uid in system._pos:
                row = per_target[tt]
                row[uid] = row.get(uid, Fraction(0)) + value

        prod = V.Y.entry(u, n, v) or {}
        for x, cx in prod.items():              # + f(u_n v)
            for tt in per_target:
                put(tt, ("f", x, tt), cx)
        for t in wsp.by_weight.get(vsp.weight_of(u), ()):   # - f(u)_n v
            svec = skew_mode(W, {t: Fraction(1)}, n, vvec)
            for tt, c in svec.items():
                put(tt, ("f", u, t), -c)
        for t in wsp.by_weight.get(vsp.weight_of(v), ()):   # - u_n f(v)
            mvec = mode_apply(W.Y_W, uvec, n, {t: Fraction(1)})
            for tt, c in mvec.items():
                put(tt, ("f", v, t), -c)

        lab = vsp.label_of
        for tt in wsp.by_weight[tau]:
            system.add_row(
                per_target[tt],
                tag=f"derivation {lab(u)}[{n}]{lab(v)} @ {wsp.label_of(tt)}",
            )
    return system


def compute_der(V: VertexAlgebra, W: VAModule) -> CohomologyResult:
    """All derivations V -> W, as graded maps, with the kernel as class basis."""
    system = derivation_system(V, W)
    maps = []
    for vec in kernel_basis(system):
        gmap = GradedMap(V.space, W.space, 0)
        for (_f, v, t), c in vec.items():
            gmap.set_entry(t, v, c)
        maps.append(gmap)
    return CohomologyResult(
        degree=1,
        h_dim=len(maps),
        cocycle_basis=maps,
        coboundary_basis=[],
        representative_classes=maps,
        window=_window_label(V),
    )


# ---------------------------------------------------------------------------
# degree two
# ---------------------------------------------------------------------------

def coboundary(V: VertexAlgebra, W: VAModule, g: GradedMap) -> TwoCochain:
    """The 2-cochain delta g (u, n, v) = -g(u_n v) + g(u)_n v + u_n g(v).

    ``g`` must be degree zero and kill the vacuum (VacuumNotKilled otherwise):
    these are exactly the maps whose coboundaries deform nothing.
    """
    if g.degree != 0:
        raise ValueError("coboundary source map must have degree 0")
    if g.column(V.vacuum):
        raise VacuumNotKilled(
            f"g({V.space.label_of(V.vacuum)}) must be zero, got a nonzero image"
        )
    out = TwoCochain(V, W)
    for u, n, v in _mode_index_triples(V, W):
        vec = viadd({}, -1, g.apply(V.Y.entry(u, n, v) or {}))
        viadd(vec, 1, skew_mode(W, g.apply({u: Fraction(1)}), n, {v: Fraction(1)}))
        viadd(vec, 1, mode_apply(W.Y_W, {u: Fraction(1)}, n, g.apply({v: Fraction(1)})))
        out.psi.set_entry(u, n, v, vec)
    return out


def vacuum_killing_basis(V: VertexAlgebra, W: VAModule) -> list[GradedMap]:
    """Elementary degree-zero maps V -> W vanishing on the vacuum, flat order."""
    basis = []
    for v in range(len(V.space)):
        if v == V.vacuum:
            continue
        for t in W.space.by_weight.get(V.space.weight_of(v), ()):
            gmap = GradedMap(V.space, W.space, 0)
            gmap.set_entry(t, v, Fraction(1))
            basis.append(gmap)
    return basis


def cocycle_residual(V: VertexAlgebra, W: VAModule, psi: TwoCochain) -> dict:
    """Fiber projection of every axiom residual of the extension along psi.

    Returns {(axiom, instance, fiber label): coefficient} over the checker's
    deterministic instance enumeration; empty means the extension passes
    within its window.  Instances the truncation makes unverifiable are
    breaches, i.e. skipped — they contribute no coordinates.  Linearity in
    psi holds because the fiber squares to zero.
    """
    from .axioms import (
        _gen_creation,
        _gen_identity,
        _gen_jacobi,
        _gen_skew,
        _gen_translation,
        translation_map,
    )
    from .extensions import build_extension

    ext = build_extension(V, W, psi)
    total = ext.total
    tmap = translation_map(total)
    fiber_of_total = {
        ti: wi for wi, ti in enumerate(ext.fiber_to_total)
    }
    wlab = W.space.label_of
    out: dict = {}
    generators = (
        _gen_identity(total),
        _gen_creation(total),
        _gen_translation(total, tmap),
        _gen_skew(total, tmap),
        _gen_jacobi(total.Y, total.Y, total.space.tier),
    )
    for gen in generators:
        for axiom, inst, result in gen:
            if isinstance(result, TruncationBreach):
                continue
            for t, c in result.items():
                wi = fiber_of_total.get(t)
                if wi is not None and c:
                    out[(axiom, inst, wlab(wi))] = c
    return out


def compute_z2(V: VertexAlgebra, W: VAModule) -> list[TwoCochain]:
    """Kernel of the cocycle residual, probed one elementary cochain at a time."""
    slots = cochain_slots(V, W)
    system = LinearSystem()
    system.add_unknowns(slots)
    rows: dict = {}
    coord_order: list = []
    for slot in slots:
        probe = TwoCochain.from_slots(V, W, {slot: Fraction(1)})
        for coord, value in cocycle_residual(V, W, probe).items():
            if coord not in rows:
                rows[coord] = {}
                coord_order.append(coord)
            rows[coord][slot] = value
    for coord in coord_order:
        system.add_row(rows[coord], tag=f"{coord[0]} {coord[1]} @ {coord[2]}")
    return [TwoCochain.from_slots(V, W, vec) for vec in kernel_basis(system)]


def _echelon_insert(pivots: dict, vec: Mapping) -> bool:
    """Insert a slot-vector into an echelon set; False if dependent."""
    work = {k: Fraction(c) for k, c in vec.items() if c}
    while work:
        lead = min(work)
        prow = pivots.get(lead)
        if prow is None:
            inv = 1 / work[lead]
            pivots[lead] = {k: c * inv for k, c in work.items()}
            return True
        factor = work[lead]
        for k, c in prow.items():
            new = work.get(k, Fraction(0)) - factor * c
            if new:
                work[k] = new
            else:
                work.pop(k, None)
    return False


def compute_h2(V: VertexAlgebra, W: VAModule) -> CohomologyResult:
    """Cocycles, coboundaries, the quotient dimension, and representatives."""
    z_basis = compute_z2(V, W)
    b_candidates = [coboundary(V, W, g) for g in vacuum_killing_basis(V, W)]
    pivots: dict = {}
    b_basis = [b for b in b_candidates if b and _echelon_insert(pivots, b.slots())]
    h_dim = quotient_dim(
        [z.slots() for z in z_basis], [b.slots() for b in b_basis]
    )
    reps = []
    rep_pivots = dict(pivots)
    for z in z_basis:
        if _echelon_insert(rep_pivots, z.slots()):
            reps.append(z)
    return CohomologyResult(
        degree=2,
        h_dim=h_dim,
        cocycle_basis=z_basis,
        coboundary_basis=b_basis,
        representative_classes=reps,
        window=_window_label(V),
    )


def is_coboundary(V: VertexAlgebra, W: VAModule, psi: TwoCochain) -> GradedMap | None:
    """Solve psi = delta g over vacuum-killing g; None when no solution exists.

    Raises NotACocycle when psi is not a cocycle in the first place (nonzero
    extension residual): asking whether a non-cocycle is a coboundary is a
    category error, not a "no".
    """
    residual = cocycle_residual(V, W, psi)
    if any(residual.values()):
        raise NotACocycle(sorted(residual))

    slots = cochain_slots(V, W)
    g_basis = vacuum_killing_basis(V, W)
    g_ids = []
    columns = []
    for k, g in enumerate(g_basis):
        src = next(iter(g.columns))
        tgt = next(iter(g.columns[src]))
        g_ids.append(("g", src, tgt))
        columns.append(coboundary(V, W, g).slots())

    system = LinearSystem()
    system.add_unknowns(g_ids)
    rhs = []
    psi_slots = psi.slots()
    for slot in slots:
        row = {}
        for gid, col in zip(g_ids, columns):
            c = col.get(slot)
            if c:
                row[gid] = c
        system.add_row(row, tag=f"slot {slot}")
        rhs.append(psi_slots.get(slot, Fraction(0)))
    solution = solve_affine(system, rhs)
    if solution is None:
        return None
    gmap = GradedMap(V.space, W.space, 0)
    for (_g, src, tgt), c in solution.items():
        gmap.set_entry(tgt, src, c)
    return gmap
