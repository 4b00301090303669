"""Pretheories over a finite object family, concrete models, compilation to
presentations, and Kleisli pretheories of a presentation.

A pretheory is a finite category on the chosen arity objects together with
an identity-on-objects functor from the opposite of their full subcategory;
hom-sets are abstract tokens with explicit composition tables.  Stored
composition ``compose(f, g)`` means "f then g"; the structural functor is
contravariant, so a presheaf morphism x : K -> J yields a token in T(J, K).
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
    hom_index,
    hom_list,
)
from .syntax import (
    Equation,
    FreeFormSignature,
    OperationSymbol,
    app,
    param_term_from_map,
    var,
    var_assignment,
)
from .algebra import Algebra
from .presentation import FreeAlgebra, Presentation, free_algebra
from .clones import Violation


class Pretheory:
    """Finite category data on arity objects with the structural functor."""

    def __init__(
        self,
        name: str,
        objects: Sequence[Presheaf],
        homs: dict[tuple[int, int], Sequence[str]],
        compose: dict[tuple[int, int, int], dict[tuple[int, int], int]],
        identities: Sequence[int],
        tau: dict[tuple[int, int], Sequence[int]],
    ):
        self.name = name
        self.objects = tuple(objects)
        n = len(self.objects)
        self.homs = {}
        for i in range(n):
            for j in range(n):
                try:
                    tokens = tuple(homs[(i, j)])
                except KeyError:
                    raise StructureError(f"missing hom tokens for {(i, j)}")
                if len(set(tokens)) != len(tokens):
                    raise StructureError(f"duplicate hom tokens in {(i, j)}")
                self.homs[(i, j)] = tokens
        self.compose = {}
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    try:
                        table = dict(compose[(i, j, k)])
                    except KeyError:
                        raise StructureError(
                            f"missing composition table for {(i, j, k)}")
                    for f in range(len(self.homs[(i, j)])):
                        for g in range(len(self.homs[(j, k)])):
                            if (f, g) not in table:
                                raise StructureError(
                                    f"missing composite for {(i, j, k)}[{f},{g}]")
                            if not (0 <= table[(f, g)] < len(self.homs[(i, k)])):
                                raise StructureError("composite out of range")
                    self.compose[(i, j, k)] = table
        self.identities = tuple(identities)
        if len(self.identities) != n:
            raise StructureError("one identity token per object required")
        for i, t in enumerate(self.identities):
            if not (0 <= t < len(self.homs[(i, i)])):
                raise StructureError(f"identity token at {i} out of range")
        self._carrier_homs: dict[tuple[int, int], HomList] = {}
        self.tau = {}
        for i in range(n):
            for j in range(n):
                homs_c = self.c_homs(j, i)
                try:
                    table = tuple(tau[(i, j)])
                except KeyError:
                    raise StructureError(f"missing tau table for {(i, j)}")
                if len(table) != len(homs_c):
                    raise StructureError(
                        f"tau table {(i, j)} must cover hom(K_{j}, K_{i})")
                for t in table:
                    if not (0 <= t < len(self.homs[(i, j)])):
                        raise StructureError("tau image out of range")
                self.tau[(i, j)] = table

    def c_homs(self, j: int, i: int) -> HomList:
        """hom of the base category from objects[j] to objects[i]."""
        got = self._carrier_homs.get((j, i))
        if got is None:
            got = hom_list(self.objects[j], self.objects[i])
            self._carrier_homs[(j, i)] = got
        return got

    def hom_count(self, i: int, j: int) -> int:
        return len(self.homs[(i, j)])

    def comp(self, i: int, j: int, k: int, f: int, g: int) -> int:
        return self.compose[(i, j, k)][(f, g)]


def check_pretheory(T: Pretheory) -> list[Violation]:
    """Category laws plus contravariant functoriality of the tau tables."""
    out: list[Violation] = []
    n = len(T.objects)
    for i in range(n):
        for j in range(n):
            for f in range(T.hom_count(i, j)):
                if T.comp(i, i, j, T.identities[i], f) != f:
                    out.append(Violation("left-identity", (i, j, f)))
                if T.comp(i, j, j, f, T.identities[j]) != f:
                    out.append(Violation("right-identity", (i, j, f)))
    tables: dict[tuple[int, int, int], list[tuple[int, ...]]] = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                table = T.compose[(i, j, k)]
                tables[(i, j, k)] = [
                    tuple(table[(f, g)] for g in range(T.hom_count(j, k)))
                    for f in range(T.hom_count(i, j))]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    c_ijk = tables[(i, j, k)]
                    c_ikl = tables[(i, k, l)]
                    c_jkl = tables[(j, k, l)]
                    c_ijl = tables[(i, j, l)]
                    for f in range(T.hom_count(i, j)):
                        row_f = c_ijk[f]
                        via_f = c_ijl[f]
                        for g in range(T.hom_count(j, k)):
                            lhs_row = c_ikl[row_f[g]]
                            gh_row = c_jkl[g]
                            if lhs_row != tuple(via_f[x] for x in gh_row):
                                for h in range(T.hom_count(k, l)):
                                    if lhs_row[h] != via_f[gh_row[h]]:
                                        out.append(Violation(
                                            "associativity",
                                            (i, j, k, l, f, g, h)))
    for i in range(n):
        ident_c = None
        for xi, x in enumerate(T.c_homs(i, i)):
            if all(c == tuple(range(len(c))) for c in x.components):
                ident_c = xi
                break
        if ident_c is not None and T.tau[(i, i)][ident_c] != T.identities[i]:
            out.append(Violation("tau-identity", (i,)))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                homs_ji = T.c_homs(j, i)
                homs_kj = T.c_homs(k, j)
                homs_ki = T.c_homs(k, i)
                for xi, x in enumerate(homs_ji):
                    for yi, y in enumerate(homs_kj):
                        xy = hom_index(homs_ki, y.then(x))
                        lhs = T.tau[(i, k)][xy]
                        rhs = T.comp(i, j, k, T.tau[(i, j)][xi], T.tau[(j, k)][yi])
                        if lhs != rhs:
                            out.append(Violation(
                                "tau-composition", (i, j, k, xi, yi)))
    return out


class ConcreteModel:
    """A carrier with an action of every hom token on its input families.

    ``action[(i, j)][t]`` maps indices of hom(J_i, A) to indices of
    hom(J_j, A), one table per token t.
    """

    def __init__(self, T: Pretheory, carrier: Presheaf,
                 action: dict[tuple[int, int], Sequence[Sequence[int]]],
                 hom_cache: dict | None = None):
        self.pretheory = T
        self.carrier = carrier
        self._hom_cache = hom_cache if hom_cache is not None else {}
        self.action = {}
        n = len(T.objects)
        for i in range(n):
            for j in range(n):
                try:
                    tables = tuple(tuple(t) for t in action[(i, j)])
                except KeyError:
                    raise StructureError(f"missing action tables for {(i, j)}")
                if len(tables) != T.hom_count(i, j):
                    raise StructureError(
                        f"one table per token required at {(i, j)}")
                ni, nj = len(self.homs(i)), len(self.homs(j))
                for t in tables:
                    if len(t) != ni or any(not (0 <= v < nj) for v in t):
                        raise StructureError(
                            f"action table at {(i, j)} malformed")
                self.action[(i, j)] = tables
        self._hom_lookup: dict[int, dict] = {}

    def homs(self, i: int) -> HomList:
        J = self.pretheory.objects[i]
        got = self._hom_cache.get(J)
        if got is None:
            got = hom_list(J, self.carrier)
            self._hom_cache[J] = got
        return got

    def hom_idx(self, i: int, f: PresheafMorphism) -> int:
        return hom_index(self.homs(i), f)


def check_concrete_model(M: ConcreteModel,
                         first_only: bool = False) -> list[Violation]:
    """Functoriality and the nerve condition, checked by exhaustion."""
    T = M.pretheory
    out: list[Violation] = []
    n = len(T.objects)
    for i in range(n):
        ident = M.action[(i, i)][T.identities[i]]
        if ident != tuple(range(len(M.homs(i)))):
            out.append(Violation("model-identity", (i,)))
            if first_only:
                return out
    for i in range(n):
        for j in range(n):
            for xi, x in enumerate(T.c_homs(j, i)):
                table = M.action[(i, j)][T.tau[(i, j)][xi]]
                expected = tuple(
                    M.hom_idx(j, x.then(phi)) for phi in M.homs(i))
                if table != expected:
                    out.append(Violation("model-nerve", (i, j, xi)))
                    if first_only:
                        return out
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for f in range(T.hom_count(i, j)):
                    tf = M.action[(i, j)][f]
                    for g in range(T.hom_count(j, k)):
                        tg = M.action[(j, k)][g]
                        fg = M.action[(i, k)][T.comp(i, j, k, f, g)]
                        if tuple(tg[v] for v in tf) != fg:
                            out.append(Violation(
                                "model-composition", (i, j, k, f, g)))
                            if first_only:
                                return out
    return out


def precomposition_model(T: Pretheory, carrier: Presheaf,
                         token_maps) -> ConcreteModel:
    """Build a model from a map assigning each token a hom-index table."""
    action = {
        (i, j): [token_maps(i, j, t) for t in range(T.hom_count(i, j))]
        for i in range(len(T.objects)) for j in range(len(T.objects))}
    return ConcreteModel(T, carrier, action)


def free_pretheory(objects: Sequence[Presheaf], name: str = "free") -> Pretheory:
    """T(J, K) = hom(K, J) with composition in the base and tau the identity."""
    objects = tuple(objects)
    n = len(objects)
    homs = {}
    compose = {}
    tau = {}
    identities = []
    hom_lists = {}
    for i in range(n):
        for j in range(n):
            hom_lists[(i, j)] = hom_list(objects[j], objects[i])
            homs[(i, j)] = tuple(
                f"h{t}" for t in range(len(hom_lists[(i, j)])))
            tau[(i, j)] = tuple(range(len(hom_lists[(i, j)])))
    for i in range(n):
        ident = None
        for xi, x in enumerate(hom_lists[(i, i)]):
            if all(c == tuple(range(len(c))) for c in x.components):
                ident = xi
                break
        identities.append(ident)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                table = {}
                for f, x in enumerate(hom_lists[(i, j)]):
                    for g, y in enumerate(hom_lists[(j, k)]):
                        # f : J_i -> J_j is x : K_j -> K_i in the base, so
                        # "f then g" is the base composite y then x.
                        table[(f, g)] = hom_index(
                            hom_lists[(i, k)], y.then(x))
                compose[(i, j, k)] = table
    return Pretheory(name, objects, homs, compose, identities, tau)


def presentation_of_pretheory(T: Pretheory, name: str | None = None) -> Presentation:
    """Compile a pretheory to a presentation with one symbol per hom pair.

    The symbol for (J, K) has arity J and parameter T(J,K) . K; equations
    express preservation of composition and identities and that the model
    extends precomposition along the structural functor.
    """
    n = len(T.objects)
    symbols = []
    for i in range(n):
        for j in range(n):
            symbols.append(OperationSymbol(
                f"m{i}_{j}", T.objects[i],
                copower(T.hom_count(i, j), T.objects[j])))
    sig = FreeFormSignature(name or f"preth[{T.name}]", symbols)
    idx = sig.index
    equations = []
    for k in range(n):
        K = T.objects[k]
        vass = var_assignment(sig, K)

        def lhs(sort, x, k=k, K=K, vass=vass):
            c = T.identities[k] * K.size(sort) + x
            return app(sig, f"m{k}_{k}", vass.rows, sort, c, K)

        equations.append(Equation(
            f"id{k}",
            param_term_from_map(sig, K, K, lhs),
            param_term_from_map(sig, K, K, lambda sort, x: var(sig, sort, x)),
        ))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                J, K, L = T.objects[i], T.objects[j], T.objects[k]
                npairs = T.hom_count(i, j) * T.hom_count(j, k)
                parameter = copower(npairs, L)
                vi = var_assignment(sig, J)

                def lhs(sort, z, i=i, j=j, k=k, L=L):
                    pair, x = divmod(z, L.size(sort))
                    f, g = divmod(pair, T.hom_count(j, k))
                    c = T.comp(i, j, k, f, g) * L.size(sort) + x
                    return app(sig, f"m{i}_{k}", vi.rows, sort, c, J)

                def rhs(sort, z, i=i, j=j, k=k, K=K, L=L):
                    pair, x = divmod(z, L.size(sort))
                    f, g = divmod(pair, T.hom_count(j, k))
                    rows = tuple(
                        tuple(
                            app(sig, f"m{i}_{j}", vi.rows, bsort,
                                f * K.size(bsort) + y, J)
                            for y in K.elements(bsort))
                        for bsort in idx.sorts)
                    c = g * L.size(sort) + x
                    return app(sig, f"m{j}_{k}", rows, sort, c, J)

                equations.append(Equation(
                    f"comp{i}_{j}_{k}",
                    param_term_from_map(sig, J, parameter, lhs),
                    param_term_from_map(sig, J, parameter, rhs),
                ))
    for i in range(n):
        for j in range(n):
            J, K = T.objects[i], T.objects[j]
            homs_ji = T.c_homs(j, i)
            parameter = copower(len(homs_ji), K)

            def lhs(sort, z, i=i, j=j, K=K, homs_ji=homs_ji):
                xi, y = divmod(z, K.size(sort))
                vi = var_assignment(sig, J)
                c = T.tau[(i, j)][xi] * K.size(sort) + y
                return app(sig, f"m{i}_{j}", vi.rows, sort, c, J)

            def rhs(sort, z, j=j, K=K, homs_ji=homs_ji):
                xi, y = divmod(z, K.size(sort))
                return var(sig, sort, homs_ji[xi](sort, y))

            equations.append(Equation(
                f"nerve{i}_{j}",
                param_term_from_map(sig, J, parameter, lhs),
                param_term_from_map(sig, J, parameter, rhs),
            ))
    return Presentation(name or f"preth[{T.name}]", sig, equations)


def model_as_algebra(P: Presentation, M: ConcreteModel) -> Algebra:
    """Read a concrete model as an algebra of the compiled presentation."""
    T = M.pretheory
    n = len(T.objects)
    values = {}
    for i in range(n):
        for j in range(n):
            sym = P.signature.symbol(f"m{i}_{j}")
            vals = []
            for hi, h in enumerate(M.homs(i)):
                comps = []
                for si, sort in enumerate(M.carrier.index.sorts):
                    row = []
                    for c in sym.parameter.elements(sort):
                        t, y = divmod(c, T.objects[j].size(sort))
                        psi = M.homs(j)[M.action[(i, j)][t][hi]]
                        row.append(psi(sort, y))
                    comps.append(tuple(row))
                vals.append(PresheafMorphism(sym.parameter, M.carrier,
                                             tuple(comps)))
            values[f"m{i}_{j}"] = vals
    return Algebra(P.signature, M.carrier, values,
                   hom_cache=M._hom_cache)


def algebra_as_model(T: Pretheory, A: Algebra) -> ConcreteModel:
    """Read an algebra of the compiled presentation as a concrete model."""
    n = len(T.objects)
    action = {}
    hom_cache = getattr(A, "_hom_cache")
    for i in range(n):
        homs_i = A.homs_from(T.objects[i])
        for j in range(n):
            homs_j = A.homs_from(T.objects[j])
            tables = []
            for t in range(T.hom_count(i, j)):
                table = []
                for h in homs_i:
                    g = A.op_value(f"m{i}_{j}", h)
                    K = T.objects[j]
                    comps = tuple(
                        tuple(
                            g(sort, t * K.size(sort) + y)
                            for y in K.elements(sort))
                        for sort in A.carrier.index.sorts)
                    table.append(hom_index(
                        homs_j, PresheafMorphism(K, A.carrier, comps)))
                tables.append(tuple(table))
            action[(i, j)] = tables
    return ConcreteModel(T, A.carrier, action, hom_cache=hom_cache)


def kleisli_pretheory(P: Presentation, objects: Sequence[Presheaf],
                      depth: int, max_nodes: int = 500_000) -> Pretheory | None:
    """Hom tokens are families into the free algebras; None if unsaturated.

    T(J, K) enumerates hom(K, T_P J); composition is class-level
    substitution and the structural functor postcomposes with the unit.
    """
    objects = tuple(objects)
    quotients: list[FreeAlgebra] = []
    for J in objects:
        Q = free_algebra(P, J, depth, max_nodes=max_nodes)
        if not Q.saturated:
            return None
        quotients.append(Q)
    n = len(objects)
    kleisli_homs = {}
    homs = {}
    for i in range(n):
        for j in range(n):
            kl = hom_list(objects[j], quotients[i].classes)
            kleisli_homs[(i, j)] = kl
            homs[(i, j)] = tuple(f"k{t}" for t in range(len(kl)))
    identities = []
    for i in range(n):
        identities.append(hom_index(kleisli_homs[(i, i)], quotients[i].unit()))
    compose = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                table = {}
                for fi, f in enumerate(kleisli_homs[(i, j)]):
                    for gi, g in enumerate(kleisli_homs[(j, k)]):
                        memo: dict = {}
                        comps = tuple(
                            tuple(
                                quotients[j].evaluate_class(
                                    quotients[i], f, sort, g(sort, x), memo)
                                for x in objects[k].elements(sort))
                            for sort in objects[k].index.sorts)
                        composite = PresheafMorphism(
                            objects[k], quotients[i].classes, comps)
                        table[(fi, gi)] = hom_index(
                            kleisli_homs[(i, k)], composite)
                compose[(i, j, k)] = table
    tau = {}
    for i in range(n):
        unit = quotients[i].unit()
        for j in range(n):
            tau[(i, j)] = tuple(
                hom_index(kleisli_homs[(i, j)], x.then(unit))
                for x in hom_list(objects[j], objects[i]))
    T = Pretheory(f"kleisli[{P.name}]", objects, homs, compose, identities, tau)
    bad = check_pretheory(T)
    if bad:
        raise StructureError(f"Kleisli pretheory violates category laws: {bad[0]}")
    return T
