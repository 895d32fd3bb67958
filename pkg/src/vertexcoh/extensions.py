"""Square-zero extensions and first-order deformations, in exact bijection.

An extension along a candidate 2-cochain psi puts the module on top of the
algebra as a square-zero ideal:

    (v1, w1)_n (v2, w2) = ( v1_n v2,
                            v1_n w2 + skew(w1)_n v2 + psi(v1)_n v2 )

with vacuum (vacuum, 0).  A first-order deformation stores the same data as
dual-number coefficients on the original space: Y_t = Y + t psi, so the value
part is the undeformed algebra and the slope part is psi.  The two
constructions carry identical information entry for entry, and the axiom
checker runs unchanged over either scalar ring — the acceptance suite holds
the two verdicts equal on random cochains, cocycle or not.

Equivalence in both pictures reduces to the same linear question
psi_1 - psi_2 = delta g; the certificate g is then verified *exactly* — as a
total-space isomorphism commuting with the projections for extensions, and as
the identity f_t = 1 + t g over dual numbers for deformations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .axioms import AxiomReport, check_all
from .cohomology import TwoCochain, is_coboundary
from .scalars import DualScalar
from .spaces import (
    GradedMap,
    GradedSpace,
    ModeFamily,
    VAModule,
    VertexAlgebra,
    mode_apply,
    skew_mode,
    viadd,
    vsub,
)


class NotVerified(Exception):
    """An operation requires a verified extension, but verification fails."""


FIBER_PREFIX = "w:"


@dataclass
class SquareZeroExtension:
    """The total algebra with projection and inclusion bookkeeping.

    ``base_to_total`` / ``fiber_to_total`` map flat indices into the total
    space; ``proj`` collapses the fiber, ``incl`` embeds it, and psi is the
    cochain the construction was built along.
    """

    base: VertexAlgebra
    fiber: VAModule
    psi: TwoCochain
    total: VertexAlgebra
    proj: GradedMap
    incl: GradedMap
    base_to_total: tuple[int, ...]
    fiber_to_total: tuple[int, ...]

    def lift_base(self, vec: dict) -> dict:
        return {self.base_to_total[i]: c for i, c in vec.items()}

    def lift_fiber(self, vec: dict) -> dict:
        return {self.fiber_to_total[i]: c for i, c in vec.items()}


def build_extension(V: VertexAlgebra, W: VAModule, psi: TwoCochain) -> SquareZeroExtension:
    """Assemble the total algebra; the weight rule is re-checked on every entry.

    Fiber labels get the "w:" prefix, so iterated extensions stay unambiguous.
    """
    vsp, wsp = V.space, W.space
    tier = "truncated" if "truncated" in (vsp.tier, wsp.tier) else "exact"
    total_space = GradedSpace(
        [(lab, vsp.weight_of(i)) for i, lab in enumerate(vsp.labels)]
        + [(FIBER_PREFIX + lab, wsp.weight_of(i)) for i, lab in enumerate(wsp.labels)],
        tier=tier,
        cutoff=max(vsp.cutoff, wsp.cutoff),
        min_weight=min(vsp.min_weight, wsp.min_weight),
    )
    v_to_total = tuple(total_space.index[lab] for lab in vsp.labels)
    w_to_total = tuple(total_space.index[FIBER_PREFIX + lab] for lab in wsp.labels)

    def lift_v(vec: dict) -> dict:
        return {v_to_total[i]: c for i, c in vec.items()}

    def lift_w(vec: dict) -> dict:
        return {w_to_total[i]: c for i, c in vec.items()}

    Y_total = ModeFamily(total_space, total_space, total_space)
    # base x base: algebra part plus the psi deflection into the fiber
    for key in sorted(set(V.Y.entries) | set(psi.psi.entries)):
        u, n, v = key
        vec = lift_v(V.Y.entries.get(key, {}))
        viadd(vec, 1, lift_w(psi.psi.entries.get(key, {})))
        Y_total.set_entry(v_to_total[u], n, v_to_total[v], vec)
    # base x fiber: the module action
    for u, n, w, vec in W.Y_W.iter_entries():
        Y_total.set_entry(v_to_total[u], n, w_to_total[w], lift_w(vec))
    # fiber x base: forced by skew-symmetry from the module action
    for w in range(len(wsp)):
        ww = wsp.weight_of(w)
        wvec = {w: Fraction(1)}
        for v in range(len(vsp)):
            wv = vsp.weight_of(v)
            for tau in wsp.by_weight:
                n = ww + wv - 1 - tau
                vec = skew_mode(W, wvec, n, {v: Fraction(1)})
                if vec:
                    Y_total.set_entry(w_to_total[w], n, v_to_total[v], lift_w(vec))
    # fiber x fiber: nothing — that is what square-zero means

    total = VertexAlgebra(total_space, v_to_total[V.vacuum], Y_total)

    proj = GradedMap(total_space, vsp, 0)
    for i, ti in enumerate(v_to_total):
        proj.set_entry(i, ti, Fraction(1))
    incl = GradedMap(wsp, total_space, 0)
    for i, ti in enumerate(w_to_total):
        incl.set_entry(ti, i, Fraction(1))
    return SquareZeroExtension(
        base=V, fiber=W, psi=psi, total=total, proj=proj, incl=incl,
        base_to_total=v_to_total, fiber_to_total=w_to_total,
    )


def verify_extension(ext: SquareZeroExtension) -> AxiomReport:
    """check_all on the total algebra plus the structural extension checks.

    Structural fragments: the fiber multiplies to zero, the projection is a
    homomorphism onto the base, the inclusion intertwines the module action,
    and the vacuum is the base vacuum.  All live inside the window, so they
    pass or fail — never skip.
    """
    report = AxiomReport()
    report.merge(check_all(ext.total))
    total, V, W = ext.total, ext.base, ext.fiber
    tsp, vsp, wsp = total.space, V.space, W.space

    for wi, w1 in enumerate(ext.fiber_to_total):     # square-zero ideal
        lw1 = tsp.label_of(w1)
        for wj, w2 in enumerate(ext.fiber_to_total):
            lw2 = tsp.label_of(w2)
            ww = wsp.weight_of(wi) + wsp.weight_of(wj)
            for n in range(ww - 1 - tsp.cutoff, ww - 1 - tsp.min_weight + 1):
                inst = (lw1, n, lw2)
                vec = total.Y.entry(w1, n, w2)
                if vec:
                    report.failed.append(("square-zero", inst, tsp.describe(vec)))
                else:
                    report.passed.append(("square-zero", inst))

    for a in range(len(tsp)):                        # projection homomorphism
        la = tsp.label_of(a)
        pa = ext.proj.apply({a: Fraction(1)})
        for b in range(len(tsp)):
            lb = tsp.label_of(b)
            pb = ext.proj.apply({b: Fraction(1)})
            wab = tsp.weight_of(a) + tsp.weight_of(b)
            for n in range(wab - 1 - vsp.cutoff, wab - 1 - vsp.min_weight + 1):
                inst = (la, n, lb)
                lhs = ext.proj.apply(total.Y.entry(a, n, b) or {})
                rhs = mode_apply(V.Y, pa, n, pb)
                residual = vsub(lhs, rhs)
                if residual:
                    report.failed.append(("projection", inst, vsp.describe(residual)))
                else:
                    report.passed.append(("projection", inst))

    for v in range(len(vsp)):                        # inclusion intertwines Y_W
        lv = vsp.label_of(v)
        vt = ext.base_to_total[v]
        for w in range(len(wsp)):
            lw = wsp.label_of(w)
            wt = ext.fiber_to_total[w]
            wvw = vsp.weight_of(v) + wsp.weight_of(w)
            for n in range(wvw - 1 - wsp.cutoff, wvw - 1 - wsp.min_weight + 1):
                inst = (lv, n, lw)
                lhs = total.Y.entry(vt, n, wt) or {}
                rhs = ext.lift_fiber(W.Y_W.entry(v, n, w) or {})
                residual = vsub(lhs, rhs)
                if residual:
                    report.failed.append(("inclusion", inst, tsp.describe(residual)))
                else:
                    report.passed.append(("inclusion", inst))

    if ext.total.vacuum == ext.base_to_total[V.vacuum]:
        report.passed.append(("vacuum-preserved", ("vacuum",)))
    else:
        report.failed.append(("vacuum-preserved", ("vacuum",), {}))
    return report


def extension_to_cocycle(ext: SquareZeroExtension) -> TwoCochain:
    """Read the deflection back off a verified extension, entry for entry."""
    report = verify_extension(ext)
    if report.verdict == "fail":
        raise NotVerified(
            f"extension fails verification on {len(report.failed)} instance(s)"
        )
    base_of_total = {t: i for i, t in enumerate(ext.base_to_total)}
    fiber_of_total = {t: i for i, t in enumerate(ext.fiber_to_total)}
    out = TwoCochain(ext.base, ext.fiber)
    for a, n, b, vec in ext.total.Y.iter_entries():
        u = base_of_total.get(a)
        v = base_of_total.get(b)
        if u is None or v is None:
            continue
        deflection = {
            fiber_of_total[t]: c for t, c in vec.items() if t in fiber_of_total
        }
        if deflection:
            out.psi.set_entry(u, v=v, n=n, vec=deflection)
    return out


# ---------------------------------------------------------------------------
# deformations
# ---------------------------------------------------------------------------

@dataclass
class Deformation:
    """Y_t = Y + t psi over dual numbers on the original state space."""

    base: VertexAlgebra
    psi: TwoCochain
    deformed: VertexAlgebra


def build_deformation(V: VertexAlgebra, psi: TwoCochain) -> Deformation:
    """Lift the mode table to dual scalars with psi in the slope part."""
    if psi.W.space.labels != V.space.labels:
        raise ValueError("deformation cochains must take values in the algebra itself")
    sp = V.space
    Y_t = ModeFamily(sp, sp, sp)
    for key in sorted(set(V.Y.entries) | set(psi.psi.entries)):
        u, n, v = key
        base_vec = V.Y.entries.get(key, {})
        slope_vec = psi.psi.entries.get(key, {})
        vec = {}
        for t in set(base_vec) | set(slope_vec):
            vec[t] = DualScalar(base_vec.get(t, 0), slope_vec.get(t, 0))
        Y_t.set_entry(u, n, v, vec)
    deformed = VertexAlgebra(sp, V.vacuum, Y_t, ring="dual")
    return Deformation(base=V, psi=psi, deformed=deformed)


def deformation_to_extension(defm: Deformation) -> SquareZeroExtension:
    """The same first-order data repackaged as an extension by the adjoint module."""
    from .presets import adjoint_module

    return build_extension(defm.base, adjoint_module(defm.base), defm.psi)


# ---------------------------------------------------------------------------
# equivalence
# ---------------------------------------------------------------------------

@dataclass
class Equivalence:
    """A verified equivalence certificate: the shear g and how it was applied."""

    g: GradedMap
    kind: str          # "extension" or "deformation"
    note: str


def _require_same_base(A: VertexAlgebra, B: VertexAlgebra, what: str) -> None:
    if not A.same_content(B):
        raise ValueError(f"{what} live over different algebras")


def check_equivalence_extensions(
    ext1: SquareZeroExtension, ext2: SquareZeroExtension
) -> Equivalence | None:
    """Find and verify h(v, w) = (v, w + g(v)) between two verified extensions.

    Returns None when the difference cochain is not a coboundary (the
    extensions are genuinely inequivalent); raises NotACocycle if either
    input was never a cocycle to begin with, and NotVerified if one fails
    verification.
    """
    _require_same_base(ext1.base, ext2.base, "extensions")
    if ext1.fiber.Y_W.entries != ext2.fiber.Y_W.entries or \
            ext1.fiber.space.labels != ext2.fiber.space.labels:
        raise ValueError("extensions have different fibers")
    for ext in (ext1, ext2):
        if verify_extension(ext).verdict == "fail":
            raise NotVerified("cannot compare an unverified extension")

    diff = ext1.psi - ext2.psi
    g = is_coboundary(ext1.base, ext1.fiber, diff)
    if g is None:
        return None

    # exact verification of the certificate on the total spaces
    total1, total2 = ext1.total, ext2.total
    tsp = total1.space

    def h(vec: dict) -> dict:
        out = dict(vec)
        base_part = ext1.proj.apply(vec)
        viadd(out, 1, ext2.lift_fiber(g.apply(base_part)))
        return out

    for a in range(len(tsp)):
        for b in range(len(tsp)):
            wab = tsp.weight_of(a) + tsp.weight_of(b)
            for n in range(wab - 1 - tsp.cutoff, wab - 1 - tsp.min_weight + 1):
                lhs = h(total1.Y.entry(a, n, b) or {})
                rhs = mode_apply(
                    total2.Y, h({a: Fraction(1)}), n, h({b: Fraction(1)})
                )
                if vsub(lhs, rhs):
                    raise RuntimeError(
                        "equivalence certificate failed exact verification "
                        f"at ({tsp.label_of(a)}, {n}, {tsp.label_of(b)})"
                    )
    for a in range(len(tsp)):                  # commuting diagram, both legs
        avec = {a: Fraction(1)}
        if ext2.proj.apply(h(avec)) != ext1.proj.apply(avec):
            raise RuntimeError("projection leg of the diagram failed")
    for w in range(len(ext1.fiber.space)):
        wvec = {w: Fraction(1)}
        if h(ext1.incl.apply(wvec)) != ext2.incl.apply(wvec):
            raise RuntimeError("inclusion leg of the diagram failed")
    if h(total1.vacuum_vec()) != total2.vacuum_vec():
        raise RuntimeError("equivalence does not preserve the vacuum")

    return Equivalence(
        g=g, kind="extension",
        note="h(v, w) = (v, w + g(v)) from total space 1 to total space 2",
    )


def check_equivalence_deformations(
    defm1: Deformation, defm2: Deformation
) -> Equivalence | None:
    """Find and verify f_t = 1 + t g between two deformations of the same base.

    The verification is the exact dual-number identity
    f_t( Y_t^(1)(u)_n v ) = Y_t^(2)( f_t u )_n ( f_t v ) on all basis pairs
    and window modes; nothing is truncated or approximated.
    """
    _require_same_base(defm1.base, defm2.base, "deformations")
    V = defm1.base
    sp = V.space
    diff = defm1.psi - defm2.psi
    g = is_coboundary(V, defm1.psi.W, diff)
    if g is None:
        return None

    def f_t(vec: dict) -> dict:
        out = dict(vec)
        viadd(out, DualScalar(0, 1), g.apply(vec))
        return out

    Y1, Y2 = defm1.deformed.Y, defm2.deformed.Y
    for u in range(len(sp)):
        for v in range(len(sp)):
            wuv = sp.weight_of(u) + sp.weight_of(v)
            for n in range(wuv - 1 - sp.cutoff, wuv - 1 - sp.min_weight + 1):
                lhs = f_t(mode_apply(Y1, {u: Fraction(1)}, n, {v: Fraction(1)}))
                rhs = mode_apply(Y2, f_t({u: Fraction(1)}), n, f_t({v: Fraction(1)}))
                if vsub(lhs, rhs):
                    raise RuntimeError(
                        "deformation equivalence failed exact verification "
                        f"at ({sp.label_of(u)}, {n}, {sp.label_of(v)})"
                    )
    return Equivalence(
        g=g, kind="deformation",
        note="f_t = 1 + t g carries deformation 1 to deformation 2",
    )
