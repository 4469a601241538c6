"""Multiprofunctors: bimodules between multicategory monads, their composite and commuting tensor,
the omega comparison, and the probe for invertibility of the interchange with an identity factor."""
from __future__ import annotations

from typing import Sequence

from ..finkit import ShapeError
from ..promod import (
    Bimodule,
    Interchange,
    MonadTensor,
    bimodule_compose,
    bimodule_tensor,
    check_universal,
    free_bimodule,
    free_tensor_iso,
    identity_bimodule,
    interchange,
    omega,
    profunctor_interchange,
)
from ..seqcells import Cell, CellMap, TensorCell, htensor, identity_map
from .multicat import SymMulticat, TruncatedError, bv_monad_tensor, bv_tensor

MultiProfunctor = Bimodule


def multiprofunctor(cell: Cell, A: SymMulticat, B: SymMulticat, rho_fn, lam_fn, name: str = "p") -> Bimodule:
    """cell : A -+-> B with right action rho on p o a and left action lam on b o p."""
    return Bimodule(A.monad(), B.monad(), cell, rho_fn, lam_fn, name)


def identity_multibimodule(M: SymMulticat) -> Bimodule:
    return identity_bimodule(M.monad())


def free_multibimodule(x: Cell, A: SymMulticat, B: SymMulticat, name: str | None = None) -> Bimodule:
    return free_bimodule(x, A.monad(), B.monad(), name)


def multiprof_compose(q: Bimodule, p: Bimodule, name: str | None = None) -> Bimodule:
    if q.A is not p.B:
        raise ShapeError("middle multicategories differ")
    return bimodule_compose(q, p, name)


class TensorContext:
    """BV tensors of the source and target multicategories, shared by every tensor built over them."""

    def __init__(self, A1: SymMulticat, A2: SymMulticat, B1: SymMulticat, B2: SymMulticat, N: int | None = None):
        self.MA, self.TA = self._pair(A1, A2, N)
        if A1 is B1 and A2 is B2:
            self.MB, self.TB = self.MA, self.TA
        else:
            self.MB, self.TB = self._pair(B1, B2, N)

    @staticmethod
    def _pair(M1: SymMulticat, M2: SymMulticat, N: int | None):
        T = bv_tensor(M1, M2, trunc=max(M1.N, M2.N) if N is None else N)
        return bv_monad_tensor(M1, M2, T), T


def multiprof_tensor(p1: Bimodule, p2: Bimodule, ctx: TensorContext, name: str | None = None) -> Bimodule:
    """p1 (x) p2 as the coequaliser of F(u) and v-bar; `.universal` is the commuting bimorphism."""
    for p, side in ((p1, 0), (p2, 1)):
        a = (ctx.MA.M1, ctx.MA.M2)[side]
        b = (ctx.MB.M1, ctx.MB.M2)[side]
        if p.A is not a or p.B is not b:
            raise ShapeError("factor boundaries do not match the tensor context")
    return bimodule_tensor(p1, p2, ctx.MA, ctx.MB, name)


def universal_violations(t: Bimodule) -> list[str]:
    return check_universal(t)


# -- omega ---------------------------------------------------------------------------------

def omega_map(xs: Sequence[Cell], sources: Sequence[SymMulticat], targets: Sequence[SymMulticat]) -> dict:
    """omega : F(x1) [x] ... [x] F(xn) -> F(x1 [x] ... [x] xn), folded from the left.

    Returns the map, the free bimodules and the tensor contexts used at each step.
    """
    if not (len(xs) == len(sources) == len(targets)) or not xs:
        raise ShapeError("need one source and one target multicategory per sequence")
    for x, A, B in zip(xs, sources, targets):
        if tuple(x.src) != A.colours or tuple(x.tgt) != B.colours:
            raise ShapeError(f"boundary mismatch for {x.name}")
    frees = [free_multibimodule(x, A, B) for x, A, B in zip(xs, sources, targets)]
    if len(xs) == 1:
        return {"map": identity_map(frees[0].cell), "free": frees, "steps": []}
    acc_x, acc_A, acc_B = xs[0], sources[0], targets[0]
    acc_F = frees[0]
    acc_map = identity_map(frees[0].cell)
    acc_dom = frees[0].cell
    steps = []
    for x, A, B, F in zip(xs[1:], sources[1:], targets[1:], frees[1:]):
        ctx = TensorContext(acc_A, A, acc_B, B)
        X = TensorCell(acc_x, x)
        FX = free_bimodule(X, ctx.MA.T, ctx.MB.T)
        om = omega(acc_x, x, ctx.MA, ctx.MB, acc_F, F, FX)
        dom = TensorCell(acc_dom, F.cell)
        inner = htensor(acc_map, identity_map(F.cell), dom, om.dom)
        acc_map = CellMap(dom, FX.cell, lambda e, om=om, inner=inner: om(inner(e)), "omega")
        steps.append({"context": ctx, "free": FX})
        acc_x, acc_F, acc_dom = X, FX, dom
        acc_A, acc_B = ctx.TA, ctx.TB
    return {"map": acc_map, "free": frees + [acc_F], "steps": steps}


def free_tensor_instance(x1: Cell, x2: Cell, A1, A2, B1, B2) -> dict:
    """F(x1) (x) F(x2) against F(x1 [x] x2) through the split coequaliser."""
    ctx = TensorContext(A1, A2, B1, B2)
    F1 = free_multibimodule(x1, A1, B1)
    F2 = free_multibimodule(x2, A2, B2)
    T = multiprof_tensor(F1, F2, ctx)
    Fx = free_bimodule(TensorCell(x1, x2), ctx.MA.T, ctx.MB.T)
    out = free_tensor_iso(F1, F2, T, Fx)
    out["tensor"] = T
    out["free"] = Fx
    out["sizes"] = (T.cell.size(), Fx.cell.size())
    return out


# -- normality probe -------------------------------------------------------------------------

def _inexact_profiles(c: Cell) -> set:
    return {k for k in range(c.N + 1) if not c.exact(k)}


def monad_tensor(M1: SymMulticat, M2: SymMulticat, N: int | None = None) -> MonadTensor:
    return TensorContext._pair(M1, M2, N)[0]


def probe_interchange(q1: Bimodule, p1: Bimodule, q2: Bimodule, p2: Bimodule,
                      MA: MonadTensor, MB: MonadTensor, MC: MonadTensor) -> dict:
    """Build xi-tilde and classify it: invertible, witness (a failing exact entry) or truncated."""
    try:
        xi = interchange(q1, p1, q2, p2, MA, MB, MC)
    except TruncatedError as exc:
        return {"verdict": "truncated", "reason": str(exc), "checks": {}, "entries": [], "witness": None}
    return classify_interchange(xi)


def classify_interchange(xi: Interchange) -> dict:
    rows = xi.entry_report()
    bad_l = _inexact_profiles(xi.left.cell)
    bad_r = _inexact_profiles(xi.right.cell)
    entries = []
    witness = None
    truncated = False
    for r in rows:
        ar = len(r["profile"][0])
        exact = ar not in bad_l and ar not in bad_r
        ok = r["injective"] and r["surjective"]
        entries.append({"profile": r["profile"], "dom": r["dom"], "cod": r["cod"],
                        "injective": r["injective"], "surjective": r["surjective"], "exact": exact})
        if not ok and exact and witness is None:
            witness = r
        if not exact:
            truncated = True
    checks = dict(xi.checks)
    if not checks.get("well_defined", False) or not checks.get("left_column_onto", False):
        verdict = "truncated"
    elif witness is not None:
        verdict = "witness"
    elif xi.invertible:
        verdict = "invertible" if not truncated else "invertible-below-truncation"
    else:
        verdict = "truncated"
    return {"verdict": verdict, "checks": checks, "entries": entries,
            "witness": None if witness is None else {"profile": witness["profile"],
                                                     "injective": witness["injective"],
                                                     "surjective": witness["surjective"]}}


def normality_instance(q1: Bimodule, p1: Bimodule, p2: Bimodule, A1, A2, B1, B2, C1) -> dict:
    """xi-tilde for (q1 . p1) (x) (id . p2) with q1 : B1 -+-> C1 and p_i : A_i -+-> B_i."""
    q2 = identity_multibimodule(B2)
    MA, MB, MC = monad_tensor(A1, A2), monad_tensor(B1, B2), monad_tensor(C1, B2)
    return probe_interchange(q1, p1, q2, p2, MA, MB, MC)


def normality_probe(instances: Sequence[dict], controls: Sequence[tuple] = (), budget: int = 12) -> dict:
    """Run the probe on operadic instances and the profunctor control regime.

    Each operadic instance is a dict with keys name, q1, p1, p2, A1, A2, B1, B2, C1.
    Each control is (name, q1, p1, q2, p2) of promod Profunctors.
    """
    report = {"instances": [], "controls": []}
    for inst in instances:
        args = [inst[k] for k in ("q1", "p1", "p2", "A1", "A2", "B1", "B2", "C1")]
        res = normality_instance(*args)
        res["name"] = inst["name"]
        report["instances"].append(res)
    for name, q1, p1, q2, p2 in controls:
        xi = profunctor_interchange(q1, p1, q2, p2, budget)
        res = classify_interchange(xi)
        res["name"] = name
        report["controls"].append(res)
    report["controls_all_invertible"] = all(r["verdict"] == "invertible" for r in report["controls"])
    return report
