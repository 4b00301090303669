"""Relative monads on a finite family of arity objects, their algebras,
the standardized presentation, and extraction from a presentation.

A relative monad here is the finite data (H, e, m): one carrier presheaf HJ
per arity object J, a unit J -> HJ, and a substitution map taking each
family J -> HK to a family HJ -> HK.  All three laws are checked by
exhaustion and every violation carries a concrete witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .base import (
    HomList,
    Presheaf,
    PresheafMorphism,
    StructureError,
    copower,
    copower_pair,
    hom_index,
    hom_list,
    identity_morphism,
)
from .syntax import (
    Equation,
    FreeFormSignature,
    OperationSymbol,
    ParamTerm,
    app,
    param_term_from_map,
    var,
    var_assignment,
)
from .presentation import FreeAlgebra, Presentation, free_algebra


@dataclass(frozen=True, eq=False)
class Violation:
    law: str
    witness: tuple

    def __repr__(self):
        return f"{self.law} at {self.witness}"


class RelativeMonad:
    """The triple (H, e, m) over an explicit finite list of arity objects."""

    def __init__(
        self,
        name: str,
        objects: Sequence[Presheaf],
        carriers: Sequence[Presheaf],
        unit: Sequence[PresheafMorphism],
        mult: dict[tuple[int, int], Sequence[PresheafMorphism]],
        hom_cache: dict | None = None,
    ):
        self.name = name
        self.objects = tuple(objects)
        self.carriers = tuple(carriers)
        self.unit = tuple(unit)
        self._shared_homs = hom_cache if hom_cache is not None else {}
        if len(self.carriers) != len(self.objects):
            raise StructureError("one carrier per arity object required")
        if len(self.unit) != len(self.objects):
            raise StructureError("one unit component per arity object required")
        for J, HJ, e in zip(self.objects, self.carriers, self.unit):
            if e.source != J or e.target != HJ:
                raise StructureError("unit component has wrong endpoints")
        self._homs_into: dict[tuple[int, int], HomList] = {}
        self.mult = {}
        for i in range(len(self.objects)):
            for j in range(len(self.objects)):
                homs = self.homs_into(i, j)
                try:
                    values = tuple(mult[(i, j)])
                except KeyError:
                    raise StructureError(f"missing substitution table for {(i, j)}")
                if len(values) != len(homs):
                    raise StructureError(
                        f"substitution table {(i, j)} must cover hom({i}, H{j})")
                for g in values:
                    if (g.source != self.carriers[i]
                            or g.target != self.carriers[j]):
                        raise StructureError(
                            f"substitution value in {(i, j)} has wrong endpoints")
                self.mult[(i, j)] = values

    def homs_into(self, i: int, j: int) -> HomList:
        """hom(J_i, H J_j) in canonical order."""
        got = self._homs_into.get((i, j))
        if got is None:
            key = (self.objects[i], self.carriers[j])
            got = self._shared_homs.get(key)
            if got is None:
                got = hom_list(self.objects[i], self.carriers[j])
                self._shared_homs[key] = got
            self._homs_into[(i, j)] = got
        return got

    def m(self, i: int, j: int, g: PresheafMorphism) -> PresheafMorphism:
        return self.mult[(i, j)][hom_index(self.homs_into(i, j), g)]

    def __repr__(self):  # pragma: no cover - debugging aid
        return (f"RelativeMonad({self.name}, "
                f"sizes={[c.sizes for c in self.carriers]})")


def check_relative_monad(M: RelativeMonad,
                         first_only: bool = False) -> list[Violation]:
    """All failures of the unit and associativity diagrams, with witnesses.

    ``first_only`` stops at the first violation; mutation sweeps only need
    to know that one exists.
    """
    out: list[Violation] = []
    n = len(M.objects)
    for j in range(n):
        if M.m(j, j, M.unit[j]).components != identity_morphism(M.carriers[j]).components:
            out.append(Violation("left-unit", (j,)))
            if first_only:
                return out
    for i in range(n):
        for j in range(n):
            for gi, g in enumerate(M.homs_into(i, j)):
                if M.unit[i].then(M.mult[(i, j)][gi]).components != g.components:
                    out.append(Violation("right-unit", (i, j, gi)))
                    if first_only:
                        return out
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for gi, g in enumerate(M.homs_into(i, j)):
                    mg = M.mult[(i, j)][gi]
                    for hi, h in enumerate(M.homs_into(j, k)):
                        mh = M.mult[(j, k)][hi]
                        lhs = M.m(i, k, g.then(mh))
                        if lhs.components != mg.then(mh).components:
                            out.append(Violation("associativity", (i, j, k, gi, hi)))
                            if first_only:
                                return out
    return out


class HAlgebraStructure:
    """A carrier with one extension operator per arity object."""

    def __init__(self, M: RelativeMonad, carrier: Presheaf,
                 alpha: Sequence[Sequence[PresheafMorphism]]):
        self.monad = M
        self.carrier = carrier
        self._homs: dict[int, HomList] = {}
        self.alpha = []
        for i, values in enumerate(alpha):
            homs = self.homs(i)
            values = tuple(values)
            if len(values) != len(homs):
                raise StructureError(
                    f"alpha_{i} must cover hom(J_{i}, carrier)")
            for g in values:
                if g.source != M.carriers[i] or g.target != carrier:
                    raise StructureError(f"alpha_{i} value has wrong endpoints")
            self.alpha.append(values)
        if len(self.alpha) != len(M.objects):
            raise StructureError("one alpha per arity object required")

    def homs(self, i: int) -> HomList:
        got = self._homs.get(i)
        if got is None:
            got = hom_list(self.monad.objects[i], self.carrier)
            self._homs[i] = got
        return got

    def a(self, i: int, phi: PresheafMorphism) -> PresheafMorphism:
        return self.alpha[i][hom_index(self.homs(i), phi)]


def check_h_algebra(M: RelativeMonad, struct: HAlgebraStructure) -> list[Violation]:
    """Failures of the unit and substitution laws for an algebra structure."""
    out: list[Violation] = []
    n = len(M.objects)
    for i in range(n):
        for pi, phi in enumerate(struct.homs(i)):
            if M.unit[i].then(struct.alpha[i][pi]).components != phi.components:
                out.append(Violation("alg-unit", (i, pi)))
    for i in range(n):
        for j in range(n):
            for pj, phi in enumerate(struct.homs(j)):
                aphi = struct.alpha[j][pj]
                for gi, g in enumerate(M.homs_into(i, j)):
                    lhs = struct.a(i, g.then(aphi))
                    rhs = M.mult[(i, j)][gi].then(aphi)
                    if lhs.components != rhs.components:
                        out.append(Violation("alg-subst", (i, j, pj, gi)))
    return out


def standardized_presentation(M: RelativeMonad, name: str | None = None) -> Presentation:
    """One extension symbol per arity object, with unit and substitution laws.

    The symbol for J has arity J and parameter HJ; substitution laws are
    stated with parameter hom(J, HK) . HJ, materialized as a copower.
    """
    symbols = [
        OperationSymbol(f"alpha{i}", J, HJ)
        for i, (J, HJ) in enumerate(zip(M.objects, M.carriers))]
    sig = FreeFormSignature(name or f"std[{M.name}]", symbols)
    idx = sig.index
    equations: list[Equation] = []
    for i, J in enumerate(M.objects):
        vass = var_assignment(sig, J)

        def unit_side(sort: str, j: int, i=i, vass=vass):
            return app(sig, f"alpha{i}", vass.rows, sort,
                       M.unit[i](sort, j), M.objects[i])

        equations.append(Equation(
            f"unit{i}",
            param_term_from_map(sig, J, J, unit_side),
            param_term_from_map(sig, J, J,
                                lambda sort, j: var(sig, sort, j)),
        ))
    for i in range(len(M.objects)):
        for j in range(len(M.objects)):
            homs = M.homs_into(i, j)
            HJ = M.carriers[i]
            parameter = copower(len(homs), HJ)
            vj = var_assignment(sig, M.objects[j])

            def lhs(sort: str, z: int, i=i, j=j, homs=homs, HJ=HJ, vj=vj):
                gi, w = z // HJ.size(sort), z % HJ.size(sort)
                return app(sig, f"alpha{j}", vj.rows, sort,
                           M.mult[(i, j)][gi](sort, w), M.objects[j])

            def rhs(sort: str, z: int, i=i, j=j, homs=homs, HJ=HJ, vj=vj):
                gi, w = z // HJ.size(sort), z % HJ.size(sort)
                g = homs[gi]
                rows = tuple(
                    tuple(
                        app(sig, f"alpha{j}", vj.rows, bsort, g(bsort, y),
                            M.objects[j])
                        for y in M.objects[i].elements(bsort))
                    for bsort in idx.sorts)
                return app(sig, f"alpha{i}", rows, sort, w, M.objects[j])

            equations.append(Equation(
                f"subst{i}_{j}",
                param_term_from_map(sig, M.objects[j], parameter, lhs),
                param_term_from_map(sig, M.objects[j], parameter, rhs),
            ))
    return Presentation(name or f"std[{M.name}]", sig, equations)


def h_algebra_as_algebra(P: Presentation, struct: HAlgebraStructure):
    """The same data read as an algebra of the standardized presentation."""
    from .algebra import Algebra
    values = {
        f"alpha{i}": tuple(struct.alpha[i])
        for i in range(len(struct.monad.objects))}
    return Algebra(P.signature, struct.carrier, values)


def algebra_as_h_structure(M: RelativeMonad, A) -> HAlgebraStructure:
    """Read an algebra of the standardized presentation as (A, alpha)."""
    alpha = []
    for i in range(len(M.objects)):
        homs = hom_list(M.objects[i], A.carrier)
        alpha.append(tuple(A.op_value(f"alpha{i}", h) for h in homs))
    return HAlgebraStructure(M, A.carrier, alpha)


def clone_of_presentation(
    P: Presentation, objects: Sequence[Presheaf], depth: int,
    max_nodes: int = 500_000,
) -> RelativeMonad | None:
    """The relative monad of saturated free algebras, or None if any
    generator fails to saturate at this depth."""
    quotients: list[FreeAlgebra] = []
    for J in objects:
        Q = free_algebra(P, J, depth, max_nodes=max_nodes)
        if not Q.saturated:
            return None
        quotients.append(Q)
    carriers = [Q.classes for Q in quotients]
    unit = [Q.unit() for Q in quotients]
    mult: dict[tuple[int, int], list[PresheafMorphism]] = {}
    idx = objects[0].index
    for i, Qi in enumerate(quotients):
        for j, Qj in enumerate(quotients):
            values = []
            for g in hom_list(objects[i], carriers[j]):
                memo: dict = {}
                comps = tuple(
                    tuple(
                        Qi.evaluate_class(Qj, g, sort, ci, memo)
                        for ci in range(carriers[i].size(sort)))
                    for sort in idx.sorts)
                values.append(PresheafMorphism(carriers[i], carriers[j], comps))
            mult[(i, j)] = values
    M = RelativeMonad(f"clone[{P.name}]", objects, carriers, unit, mult)
    bad = check_relative_monad(M)
    if bad:
        raise StructureError(f"extracted clone violates monad laws: {bad[0]}")
    return M


def identity_clone(objects: Sequence[Presheaf], name: str = "identity") -> RelativeMonad:
    """HJ = J with unit and substitution the identities."""
    objects = tuple(objects)
    mult = {}
    for i, J in enumerate(objects):
        for j, K in enumerate(objects):
            mult[(i, j)] = list(hom_list(J, K))
    return RelativeMonad(
        name, objects, objects,
        [identity_morphism(J) for J in objects], mult)
