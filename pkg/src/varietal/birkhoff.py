"""The satisfaction Galois connection between algebras and parametrized
equations, restricted to an explicit finite window.

The window fixes a carrier size bound, a term depth bound, a set of
generator parameters, and an arity list; equation candidates are pairs of
natural families from a generator into the depth-bounded term presheaf.
Every result is relative to the window: nothing here claims anything about
the unbounded connection, and reports carry the scale so a finite run is
never mistaken for a theorem.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .base import (
    Presheaf,
    StructureError,
    enumerate_families,
    hom_set,
)
from .syntax import (
    Equation,
    FreeFormSignature,
    ParamTerm,
    precompose_equation,
)
from .algebra import (
    DEFAULT_CEILING,
    Algebra,
    enumerate_algebras,
    evaluate,
    satisfies,
)


class ScaleError(StructureError):
    """An input lies outside the declared finite window."""


@dataclass(frozen=True)
class GaloisScale:
    """Finite window: carrier bound, term depth, generators, arity list."""

    size: int
    depth: int
    generators: tuple[Presheaf, ...]
    arities: tuple[Presheaf, ...] = ()

    def __post_init__(self):
        if self.size < 0 or self.depth < 0:
            raise StructureError("scale bounds must be nonnegative")
        if not self.generators:
            raise StructureError("scale needs at least one generator object")


class BirkhoffWindow:
    """All Galois-connection computations for one signature at one scale."""

    def __init__(self, signature: FreeFormSignature, scale: GaloisScale,
                 ceiling: int = DEFAULT_CEILING):
        self.signature = signature
        self.scale = scale
        self.ceiling = ceiling
        arities = scale.arities
        if not arities:
            seen: list[Presheaf] = []
            for sym in signature.symbols:
                if sym.arity not in seen:
                    seen.append(sym.arity)
            arities = tuple(seen)
        self.arities = arities
        self._universes = {}
        self._algebras: list[Algebra] | None = None
        self._window: list[Equation] | None = None
        self._rows: dict[tuple, dict] = {}

    # -- window construction -------------------------------------------------

    def universe(self, ai: int):
        got = self._universes.get(ai)
        if got is None:
            from .syntax import enumerate_terms
            got = enumerate_terms(self.signature, self.arities[ai],
                                  self.scale.depth)
            self._universes[ai] = got
        return got

    def param_terms(self, ai: int, gi: int) -> list[ParamTerm]:
        """Natural families from a generator into the truncated terms."""
        key = ("pt", ai, gi)
        got = self._universes.get(key)
        if got is None:
            uni = self.universe(ai)
            G = self.scale.generators[gi]
            idx = G.index
            fams = enumerate_families(
                G,
                [uni.terms(s) for s in idx.sorts],
                lambda m, t: uni.act(m, t),
            )
            got = [
                ParamTerm(self.signature, self.arities[ai], G, rows)
                for rows in fams]
            self._universes[key] = got
        return got

    def equation_window(self) -> list[Equation]:
        """All candidate equations at scale: unordered pairs, deduplicated.

        Names encode the window coordinates, so membership and subset tests
        on window equations can compare names.
        """
        if self._window is None:
            out = []
            for ai in range(len(self.arities)):
                for gi in range(len(self.scale.generators)):
                    pts = self.param_terms(ai, gi)
                    for i in range(len(pts)):
                        for j in range(i + 1, len(pts)):
                            out.append(Equation(
                                f"w[{ai},{gi},{i},{j}]", pts[i], pts[j]))
            self._window = out
        return self._window

    def algebras(self) -> list[Algebra]:
        if self._algebras is None:
            self._algebras = enumerate_algebras(
                self.signature, self.scale.size, ceiling=self.ceiling)
        return self._algebras

    # -- the two polarities ----------------------------------------------------

    def _term_rows(self, A: Algebra, ai: int) -> dict:
        key = (A.canonical_key(), ai)
        got = self._rows.get(key)
        if got is None:
            uni = self.universe(ai)
            homs = A.homs_from(self.arities[ai])
            memos = [dict() for _ in homs]
            got = {}
            for sort in self.arities[ai].index.sorts:
                for t in uni.terms(sort):
                    got[t] = tuple(
                        evaluate(A, t, phi, memo)
                        for phi, memo in zip(homs, memos))
            self._rows[key] = got
        return got

    def _pt_signature(self, A: Algebra, ai: int, pt: ParamTerm) -> tuple:
        rows = self._term_rows(A, ai)
        return tuple(tuple(rows[t] for t in row) for row in pt.rows)

    def _window_lookup(self) -> dict[str, Equation]:
        got = self.__dict__.get("_window_by_name")
        if got is None:
            got = {eq.name: eq for eq in self.equation_window()}
            self.__dict__["_window_by_name"] = got
        return got

    def _holds(self, A: Algebra, eq: Equation) -> bool:
        # window equations compare cached interpretation rows instead of
        # re-evaluating; arbitrary equations fall back to direct checking
        if eq.name in self._window_lookup() and eq.signature is self.signature:
            parts = eq.name[2:-1].split(",")
            ai = int(parts[0])
            return (self._pt_signature(A, ai, eq.lhs)
                    == self._pt_signature(A, ai, eq.rhs))
        return bool(satisfies(A, eq))

    def sat_star(self, E: Sequence[Equation]) -> list[Algebra]:
        """All window algebras satisfying every equation in E."""
        out = []
        for A in self.algebras():
            if all(self._holds(A, eq) for eq in E):
                out.append(A)
        return out

    def sat_lower_g(self, algebras: Sequence[Algebra]) -> list[Equation]:
        """All window equations satisfied by every algebra in the set.

        Computed through the kernel of the joint interpretation rows: two
        families are equated exactly when their value rows agree in every
        member algebra.
        """
        out = []
        for ai in range(len(self.arities)):
            for gi in range(len(self.scale.generators)):
                pts = self.param_terms(ai, gi)
                keys = []
                for pt in pts:
                    keys.append(tuple(
                        self._pt_signature(A, ai, pt) for A in algebras))
                for i in range(len(pts)):
                    for j in range(i + 1, len(pts)):
                        if keys[i] == keys[j]:
                            out.append(Equation(
                                f"w[{ai},{gi},{i},{j}]", pts[i], pts[j]))
        return out

    def variety_generated(self, algebras: Sequence[Algebra]) -> list[Algebra]:
        return self.sat_star(self.sat_lower_g(algebras))

    def theory_generated(self, E: Sequence[Equation]) -> list[Equation]:
        return self.sat_lower_g(self.sat_star(E))

    # -- law checking ------------------------------------------------------------

    def _require_window_equations(self, E: Sequence[Equation]):
        names = {eq.name for eq in self.equation_window()}
        for eq in E:
            if eq.signature is not self.signature or eq.name not in names:
                raise ScaleError(f"equation {eq.name} is outside the window")

    def _require_window_algebras(self, algebras: Sequence[Algebra]):
        keys = {A.canonical_key() for A in self.algebras()}
        for A in algebras:
            if A.canonical_key() not in keys:
                raise ScaleError("algebra outside the window scale")

    def check_galois_laws(self, E: Sequence[Equation],
                          algebras: Sequence[Algebra]) -> tuple[bool, list[str]]:
        """Adjunction, triple laws, and closure idempotence at this scale."""
        self._require_window_equations(E)
        self._require_window_algebras(algebras)
        scale_tag = (f"scale=({self.scale.size},{self.scale.depth},"
                     f"{len(self.scale.generators)})")
        lines = []
        ok_all = True

        def record(name: str, ok: bool, witness: str = "-"):
            nonlocal ok_all
            ok_all = ok_all and ok
            lines.append(
                f"LAW {name} {'OK' if ok else 'FAIL'} witness={witness} {scale_tag}")

        left = all(
            all(satisfies(A, eq) for eq in E) for A in algebras)
        lower = {eq.name for eq in self.sat_lower_g(algebras)}
        right = all(eq.name in lower for eq in E)
        record("adjunction", left == right,
               f"left={left},right={right}")

        sat_e = self.sat_star(E)
        sat_e_keys = {A.canonical_key() for A in sat_e}
        tri1 = self.sat_star(self.sat_lower_g(sat_e))
        record("triple-algebras",
               {A.canonical_key() for A in tri1} == sat_e_keys)
        low_a = {eq.name for eq in self.sat_lower_g(algebras)}
        tri2 = {eq.name for eq in
                self.sat_lower_g(self.sat_star(self.sat_lower_g(algebras)))}
        record("triple-equations", tri2 == low_a)

        va = self.variety_generated(algebras)
        vva = self.variety_generated(va)
        record("variety-idempotent",
               {A.canonical_key() for A in va}
               == {A.canonical_key() for A in vva})
        te = self.theory_generated(E)
        tte = self.theory_generated(te)
        record("theory-idempotent",
               {eq.name for eq in te} == {eq.name for eq in tte})
        return ok_all, lines


def restrict_to_generators(equations: Sequence[Equation],
                           generators: Sequence[Presheaf]) -> list[Equation]:
    """All precompositions of the equations along maps from the generators."""
    out = []
    for eq in equations:
        for gi, G in enumerate(generators):
            for xi, x in enumerate(hom_set(G, eq.parameter)):
                out.append(precompose_equation(
                    eq, x, name=f"{eq.name}|{gi}:{xi}"))
    return out
