"""Presentations, their combinators, and depth-bounded free algebras.

The free algebra on a generator presheaf is computed as a congruence closure
over class-level application nodes (an e-graph): nodes are variables or
"symbol applied to a natural family of classes with a parameter element",
merged by equation instances, congruence, and the index action.  Growth and
equation instantiation are both bounded so that every identification is
witnessed inside the depth-d term universe; a "saturated" certificate means
every one-step application over the final classes already has a class, which
makes the truncation the genuine free algebra.

Soundness is unconditional: each union is logged with the equation instance
or the congruence/act step that forced it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .base import (
    Presheaf,
    PresheafMorphism,
    StructureError,
    coproduct_of,
    enumerate_families,
    hom_list,
    product,
    product_pair,
)
from .syntax import (
    Equation,
    FreeFormSignature,
    OperationSymbol,
    ParamTerm,
    Term,
    app,
    param_term_from_map,
    term_leaf_depths,
    var,
)
from .algebra import Algebra, ResourceCeiling, enumerate_algebras, satisfies


class Presentation:
    """A free-form signature together with finitely many equations."""

    def __init__(self, name: str, signature: FreeFormSignature,
                 equations: Sequence[Equation]):
        self.name = name
        self.signature = signature
        self.equations = tuple(equations)
        names = [e.name for e in self.equations]
        if len(set(names)) != len(names):
            raise StructureError("duplicate equation names")
        for eq in self.equations:
            if eq.signature is not signature:
                raise StructureError(
                    f"equation {eq.name} is not over the presentation's signature")
            if signature.index is not None and eq.arity.index != signature.index:
                raise StructureError(
                    f"equation {eq.name} lives over a different index category")

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"Presentation({self.name}, |S|={len(self.signature.symbols)}, |E|={len(self.equations)})"


def palg_satisfies(A: Algebra, P: Presentation) -> bool:
    return all(satisfies(A, eq) for eq in P.equations)


def _rename_terms(new_sig, rename: dict[str, str], t: Term, variables, memo):
    got = memo.get(id(t))
    if got is not None:
        return got
    if t.is_var:
        out = var(new_sig, t.sort, t.var)
    else:
        rows = tuple(
            tuple(_rename_terms(new_sig, rename, u, variables, memo) for u in row)
            for row in t.binding)
        out = app(new_sig, rename[t.symbol.name], rows, t.sort, t.param, variables)
    memo[id(t)] = out
    return out


def _transport_equation(eq: Equation, new_sig, rename, suffix: str) -> Equation:
    memo: dict = {}
    sides = []
    for pt in (eq.lhs, eq.rhs):
        rows = tuple(
            tuple(_rename_terms(new_sig, rename, t, eq.arity, memo) for t in row)
            for row in pt.rows)
        sides.append(ParamTerm(new_sig, eq.arity, eq.parameter, rows))
    return Equation(eq.name + suffix, sides[0], sides[1])


def sum_presentations(P1: Presentation, P2: Presentation,
                      name: str | None = None) -> Presentation:
    """Disjoint union of signatures (symbols tagged .1/.2), all equations kept."""
    if (P1.signature.index is not None and P2.signature.index is not None
            and P1.signature.index != P2.signature.index):
        raise StructureError("sum requires a common index category")
    symbols = (
        [OperationSymbol(s.name + ".1", s.arity, s.parameter)
         for s in P1.signature.symbols]
        + [OperationSymbol(s.name + ".2", s.arity, s.parameter)
           for s in P2.signature.symbols])
    sig = FreeFormSignature(f"{P1.name}+{P2.name}", symbols)
    if sig.index is None:
        sig.index = P1.signature.index or P2.signature.index
    r1 = {s.name: s.name + ".1" for s in P1.signature.symbols}
    r2 = {s.name: s.name + ".2" for s in P2.signature.symbols}
    equations = (
        [_transport_equation(eq, sig, r1, ".1") for eq in P1.equations]
        + [_transport_equation(eq, sig, r2, ".2") for eq in P2.equations])
    return Presentation(name or f"{P1.name}+{P2.name}", sig, equations)


def kronecker_equation(sig: FreeFormSignature, name1: str, name2: str) -> Equation:
    """The commutation equation for two symbols over a one-sort base.

    Both nestings of the two operations over the product arity and product
    parameter; the left side has the second symbol outermost, matching the
    composite that applies the first symbol inside.
    """
    s1, s2 = sig.symbol(name1), sig.symbol(name2)
    idx = s1.arity.index
    if not idx.is_trivial:
        raise StructureError("Kronecker products require the one-sort base")
    sort = idx.sorts[0]
    J1, J2, C1, C2 = s1.arity, s2.arity, s1.parameter, s2.parameter
    J = product(J1, J2)
    C = product(C1, C2)

    def lhs(b: str, c: int) -> Term:
        c1, c2 = divmod(c, C2.size(sort))
        inner = [
            app(sig, name1,
                ((tuple(var(sig, sort, product_pair(J1, J2, sort, j1, j2))
                        for j1 in J1.elements(sort))),),
                sort, c1, J)
            for j2 in J2.elements(sort)]
        return app(sig, name2, (tuple(inner),), sort, c2, J)

    def rhs(b: str, c: int) -> Term:
        c1, c2 = divmod(c, C2.size(sort))
        inner = [
            app(sig, name2,
                ((tuple(var(sig, sort, product_pair(J1, J2, sort, j1, j2))
                        for j2 in J2.elements(sort))),),
                sort, c2, J)
            for j1 in J1.elements(sort)]
        return app(sig, name1, (tuple(inner),), sort, c1, J)

    return Equation(
        f"kron[{name1},{name2}]",
        param_term_from_map(sig, J, C, lhs),
        param_term_from_map(sig, J, C, rhs),
    )


def tensor(P1: Presentation, P2: Presentation,
           name: str | None = None) -> Presentation:
    """Sum plus one commutation equation per pair of symbols."""
    S = sum_presentations(P1, P2, name=name or f"{P1.name}*{P2.name}")
    extra = [
        kronecker_equation(S.signature, s1.name + ".1", s2.name + ".2")
        for s1 in P1.signature.symbols
        for s2 in P2.signature.symbols]
    return Presentation(S.name, S.signature, list(S.equations) + extra)


def bundle_equations(P: Presentation) -> Presentation:
    """Coproduct-bundle all equations of equal arity into one equation each."""
    groups: list[tuple[Presheaf, list[Equation]]] = []
    for eq in P.equations:
        for a, eqs in groups:
            if a == eq.arity:
                eqs.append(eq)
                break
        else:
            groups.append((eq.arity, [eq]))
    bundled = []
    for i, (arity, eqs) in enumerate(groups):
        parameter = coproduct_of([e.parameter for e in eqs])
        idx = parameter.index
        lrows = tuple(
            tuple(e.lhs(sort, c) for e in eqs for c in e.parameter.elements(sort))
            for sort in idx.sorts)
        rrows = tuple(
            tuple(e.rhs(sort, c) for e in eqs for c in e.parameter.elements(sort))
            for sort in idx.sorts)
        bundled.append(Equation(
            f"bundle{i}",
            ParamTerm(P.signature, arity, parameter, lrows),
            ParamTerm(P.signature, arity, parameter, rrows)))
    return Presentation(P.name + "/bundled", P.signature, bundled)


# ---------------------------------------------------------------------------
# Free algebras by congruence closure


@dataclass
class AuditEntry:
    kind: str                 # "eq" | "cong" | "act"
    left: int                 # node ids at merge time
    right: int
    equation: str | None = None
    phi: tuple | None = None  # class-choice rows, for "eq" entries
    morphism: str | None = None


class FreeAlgebra:
    """Depth-bounded free algebra of a presentation on a generator presheaf.

    Exposes the class presheaf, the unit (generators to classes), canonical
    representative terms, operation application at class level, and the
    saturation certificate.  ``saturated`` being False is a value, not an
    error: it means the depth budget could not certify closure.
    """

    def __init__(self, P: Presentation, generators: Presheaf, depth: int,
                 grow: bool = True, seeds: Sequence[Term] = (),
                 max_nodes: int = 500_000):
        if depth < 0:
            raise StructureError("depth must be nonnegative")
        self.presentation = P
        self.signature = P.signature
        self.generators = generators
        self.depth = depth
        self.index = generators.index
        self.max_nodes = max_nodes
        self._nodes: list[tuple] = []
        self._parent: list[int] = []
        self._hash: dict[tuple, int] = {}
        self._node_sort: list[str] = []
        self._mindepth: list[int] = []
        self.audit: list[AuditEntry] = []
        self._var_node: dict[tuple[str, int], int] = {}
        for sort in self.index.sorts:
            for x in generators.elements(sort):
                nid = self._add_node(("v", sort, x), sort)
                self._var_node[(sort, x)] = nid
        for t in seeds:
            self._fold_insert(t)
        self._close(grow)
        self._finalize()

    # -- union-find ---------------------------------------------------------

    def _find(self, a: int) -> int:
        p = self._parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def _union(self, a: int, b: int, entry: AuditEntry | None) -> bool:
        ra, rb = self._find(a), self._find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self._parent[rb] = ra
        self._mindepth[ra] = min(self._mindepth[ra], self._mindepth[rb])
        if entry is not None:
            self.audit.append(entry)
        return True

    # -- nodes ---------------------------------------------------------------

    def _canon_key(self, node: tuple) -> tuple:
        if node[0] == "v":
            return node
        _, sym, sort, c, binding = node
        return ("a", sym, sort, c,
                tuple(tuple(self._find(r) for r in row) for row in binding))

    def _add_node(self, node: tuple, sort: str) -> int:
        key = self._canon_key(node)
        got = self._hash.get(key)
        if got is not None:
            return self._find(got)
        nid = len(self._nodes)
        if nid >= self.max_nodes:
            raise ResourceCeiling(
                f"free algebra exceeded {self.max_nodes} nodes")
        self._nodes.append(key)
        self._parent.append(nid)
        self._node_sort.append(sort)
        if key[0] == "v":
            self._mindepth.append(0)
        else:
            children = [r for row in key[4] for r in row]
            self._mindepth.append(
                1 + max((self._mindepth[self._find(r)] for r in children),
                        default=0))
        self._hash[key] = nid
        return nid

    def _app_node(self, sym_name: str, binding_cls, sort: str, c: int) -> int:
        return self._add_node(("a", sym_name, sort, c, binding_cls), sort)

    def _fold_insert(self, t: Term) -> int:
        """Insert the nodes of a term (over the generator presheaf)."""
        if t.is_var:
            return self._find(self._var_node[(t.sort, t.var)])
        binding = tuple(
            tuple(self._fold_insert(u) for u in row) for row in t.binding)
        return self._find(self._app_node(t.symbol.name, binding, t.sort, t.param))

    def class_of_term(self, t: Term) -> int | None:
        """Final class of a term, or None if it leads outside the universe."""
        if t.is_var:
            return self._class_index[self._find(self._var_node[(t.sort, t.var)])]
        rows = []
        for row in t.binding:
            out = []
            for u in row:
                c = self.class_of_term(u)
                if c is None:
                    return None
                out.append(c)
            rows.append(tuple(out))
        got = self.apply(t.symbol.name, tuple(rows), t.sort, t.param)
        return got

    # -- closure -------------------------------------------------------------

    def _recompute_depths(self):
        changed = True
        while changed:
            changed = False
            for nid, key in enumerate(self._nodes):
                root = self._find(nid)
                if key[0] == "v":
                    d = 0
                else:
                    children = [self._find(r) for row in key[4] for r in row]
                    d = 1 + max((self._mindepth[c] for c in children), default=0)
                if d < self._mindepth[root]:
                    self._mindepth[root] = d
                    changed = True

    def _act_image(self, m: str, nid: int) -> int:
        key = self._nodes[nid]
        tgt = self.index.tgt(m)
        if key[0] == "v":
            _, sort, x = key
            return self._find(self._var_node[(tgt, self.generators.map(m)[x])])
        _, sym, sort, c, binding = key
        param = self.signature.symbol(sym).parameter
        return self._find(self._app_node(sym, binding, tgt, param.map(m)[c]))

    def _rebuild(self) -> bool:
        """Congruence and act closure to a local fixpoint; True if changed."""
        any_change = False
        while True:
            changed = False
            self._recompute_depths()
            fresh: dict[tuple, int] = {}
            for nid in range(len(self._nodes)):
                key = self._canon_key(self._nodes[nid])
                other = fresh.get(key)
                if other is None:
                    fresh[key] = nid
                elif self._union(other, nid, AuditEntry("cong", other, nid)):
                    changed = True
            self._hash = fresh
            classes: dict[int, list[int]] = {}
            for nid in range(len(self._nodes)):
                classes.setdefault(self._find(nid), []).append(nid)
            for m, msrc, _ in self.index.morphisms:
                if m in self.index.identities:
                    continue
                for root, members in list(classes.items()):
                    if self._node_sort[root] != msrc:
                        continue
                    images = [self._act_image(m, nid) for nid in members
                              if self._node_sort[nid] == msrc]
                    for other in images[1:]:
                        if self._union(images[0], other,
                                       AuditEntry("act", images[0], other,
                                                  morphism=m)):
                            changed = True
            if not changed:
                return any_change
            any_change = True

    def _class_lists(self) -> dict[str, list[int]]:
        roots: dict[str, list[int]] = {s: [] for s in self.index.sorts}
        seen = set()
        for nid in range(len(self._nodes)):
            r = self._find(nid)
            if r not in seen:
                seen.add(r)
                roots[self._node_sort[r]].append(r)
        return roots

    def _enumerate_class_families(self, X: Presheaf, budgets=None):
        roots = self._class_lists()

        def act_fn(m, root):
            return self._act_image(m, self._find(root))

        if budgets is None:
            candidates = None
        else:
            def candidates(sort, x):
                limit = budgets.get((sort, x), self.depth)
                return [r for r in roots[sort]
                        if self._mindepth[self._find(r)] <= limit]
        return enumerate_families(
            X,
            [roots[s] for s in self.index.sorts],
            act_fn,
            candidates=candidates,
        )

    def _build_side(self, t: Term, phi_rows, memo) -> int | None:
        got = memo.get(id(t))
        if got is not None:
            return got
        if t.is_var:
            out = self._find(phi_rows[self.index.sort_index(t.sort)][t.var])
        else:
            rows = []
            for row in t.binding:
                rows.append(tuple(
                    self._build_side(u, phi_rows, memo) for u in row))
            out = self._find(
                self._app_node(t.symbol.name, tuple(rows), t.sort, t.param))
        memo[id(t)] = out
        return out

    def _equation_pass(self) -> bool:
        changed = False
        for eq in self.presentation.equations:
            idx = self.index
            for sort in idx.sorts:
                for c in eq.parameter.elements(sort):
                    lt, rt = eq.lhs(sort, c), eq.rhs(sort, c)
                    if max(lt.depth, rt.depth) > self.depth:
                        continue
                    budgets: dict[tuple[str, int], int] = {}
                    for t in (lt, rt):
                        for leaf, path in term_leaf_depths(t).items():
                            b = self.depth - path
                            if b < budgets.get(leaf, 1 << 30):
                                budgets[leaf] = b
                    if any(b < 0 for b in budgets.values()):
                        continue
                    for fam in self._enumerate_class_families(eq.arity, budgets):
                        memo: dict = {}
                        a = self._build_side(lt, fam, memo)
                        b = self._build_side(rt, fam, memo)
                        if self._union(a, b, AuditEntry(
                                "eq", a, b, equation=eq.name,
                                phi=tuple(fam))):
                            changed = True
        return changed

    def _grow_pass(self) -> bool:
        before = len(self._nodes)
        for sym in self.signature.symbols:
            for fam in self._enumerate_class_families(sym.arity):
                children = [self._find(r) for row in fam for r in row]
                dep = 1 + max((self._mindepth[c] for c in children), default=0)
                if dep > self.depth:
                    continue
                binding = tuple(tuple(self._find(r) for r in row) for row in fam)
                for sort in self.index.sorts:
                    for c in sym.parameter.elements(sort):
                        self._app_node(sym.name, binding, sort, c)
        return len(self._nodes) > before

    def _close(self, grow: bool):
        self._rebuild()
        while True:
            changed = self._equation_pass()
            changed |= self._rebuild()
            if grow:
                changed |= self._grow_pass()
                changed |= self._rebuild()
            if not changed:
                break

    # -- finalization ---------------------------------------------------------

    def _best_node(self, root: int) -> int:
        cache = self.__dict__.setdefault("_best_cache", {})
        best = cache.get(root)
        if best is not None:
            return best
        for nid in range(len(self._nodes)):
            if self._find(nid) != root:
                continue
            key = self._nodes[nid]
            if key[0] == "v":
                d = 0
            else:
                children = [self._find(r) for row in key[4] for r in row]
                d = 1 + max((self._mindepth[c] for c in children), default=0)
            if d == self._mindepth[root]:
                if best is None or nid < best:
                    best = nid
        assert best is not None
        cache[root] = best
        return best

    def _root_key(self, root: int) -> tuple:
        """Structural sort key of a class via its minimal defining node.

        Classes can lack an honest term representative over a nontrivial
        index (class-level composability outruns term-level naturality), so
        canonical ordering works on node structure, not extracted terms.
        """
        memo = self.__dict__.setdefault("_root_key_memo", {})
        got = memo.get(root)
        if got is not None:
            return got
        key = self._nodes[self._best_node(root)]
        if key[0] == "v":
            out = (0, key[1], key[2])
        else:
            _, sym, sort, c, binding = key
            out = (1, self.signature.symbol_index(sym), sort, c,
                   tuple(tuple(self._root_key(self._find(r)) for r in row)
                         for row in binding))
        memo[root] = out
        return out

    def _root_text(self, root: int) -> str:
        return self._node_text(self._best_node(root))

    def _node_text(self, nid: int) -> str:
        key = self._nodes[nid]
        if key[0] == "v":
            return f"(var {key[1]} {key[2]})"
        _, sym, sort, c, binding = key
        idx = self.index
        entries = []
        for bsort, row in zip(idx.sorts, binding):
            entries.extend(
                f"({bsort} {i} {self._root_text(self._find(r))})"
                for i, r in enumerate(row))
        return f"(app {sym} ({' '.join(entries)}) ({sort} {c}))"

    def _rep_term(self, root: int, memo: dict[int, Term]) -> Term:
        got = memo.get(root)
        if got is not None:
            return got
        key = self._nodes[self._best_node(root)]
        if key[0] == "v":
            t = var(self.signature, key[1], key[2])
        else:
            _, sym, sort, c, binding = key
            rows = tuple(
                tuple(self._rep_term(self._find(r), memo) for r in row)
                for row in binding)
            t = app(self.signature, sym, rows, sort, c, self.generators)
        memo[root] = t
        return t

    def _finalize(self):
        self._recompute_depths()
        roots = self._class_lists()
        order: dict[str, list[int]] = {}
        for sort in self.index.sorts:
            rs = roots[sort]
            rs.sort(key=lambda r: (self._mindepth[r], self._root_key(r)))
            order[sort] = rs
        self._class_index: dict[int, int] = {}
        self._roots_by_sort = order
        for sort in self.index.sorts:
            for i, r in enumerate(order[sort]):
                self._class_index[r] = i
        sizes = tuple(len(order[s]) for s in self.index.sorts)
        action = []
        for m, msrc, mtgt in self.index.morphisms:
            table = [
                self._class_index[self._find(self._act_image(m, r))]
                for r in order[msrc]]
            action.append(tuple(table))
        self.classes = Presheaf(self.index, sizes, tuple(action))
        self.saturated, self.saturation_witness = self._check_saturated()

    def _check_saturated(self) -> tuple[bool, tuple | None]:
        for sym in self.signature.symbols:
            for fam in self._enumerate_class_families(sym.arity):
                binding = tuple(tuple(self._find(r) for r in row) for row in fam)
                for sort in self.index.sorts:
                    for c in sym.parameter.elements(sort):
                        key = self._canon_key(("a", sym.name, sort, c, binding))
                        if key not in self._hash:
                            return False, (sym.name, binding, sort, c)
        return True, None

    # -- public surface --------------------------------------------------------

    def class_count(self, sort: str | None = None) -> int:
        if sort is None:
            return sum(self.classes.sizes)
        return self.classes.size(sort)

    def rep_text(self, sort: str, i: int) -> str:
        """Printable canonical representative (class-level, always defined)."""
        return self._root_text(self._roots_by_sort[sort][i])

    def rep(self, sort: str, i: int) -> Term:
        """Honest term representative; raises when no natural lift exists."""
        return self._rep_term(self._roots_by_sort[sort][i], {})

    def unit(self) -> PresheafMorphism:
        comps = tuple(
            tuple(self._class_index[self._find(self._var_node[(sort, x)])]
                  for x in self.generators.elements(sort))
            for sort in self.index.sorts)
        return PresheafMorphism(self.generators, self.classes, comps)

    def apply(self, sym_name: str, rows, sort: str, c: int) -> int | None:
        """Class of the one-step application, or None outside the universe."""
        binding = tuple(
            tuple(self._roots_by_sort[s][i] for i in row)
            for s, row in zip(self.index.sorts, rows))
        key = self._canon_key(("a", sym_name, sort, c, binding))
        nid = self._hash.get(key)
        if nid is None:
            return None
        return self._class_index[self._find(nid)]

    def act_class(self, m: str, i: int) -> int:
        return self.classes.map(m)[i]

    def as_algebra(self) -> Algebra:
        if not self.saturated:
            raise StructureError(
                "only a saturated quotient carries a total algebra structure")
        values: dict[str, list[PresheafMorphism]] = {}
        for sym in self.signature.symbols:
            vals = []
            for h in hom_list(sym.arity, self.classes):
                comps = tuple(
                    tuple(self.apply(sym.name, h.components, sort, c)
                          for c in sym.parameter.elements(sort))
                    for sort in self.index.sorts)
                vals.append(PresheafMorphism(sym.parameter, self.classes, comps))
            values[sym.name] = vals
        return Algebra(self.signature, self.classes, values)

    def evaluate_class(self, A: Algebra, phi: PresheafMorphism, sort: str,
                       i: int, memo: dict | None = None) -> int:
        """Interpret a class in an algebra satisfying the base presentation.

        ``phi`` assigns carrier elements to the generators; the value is
        independent of the chosen representative exactly when the algebra is
        a model of the presentation.
        """
        if memo is None:
            memo = {}
        root = self._roots_by_sort[sort][i]
        return self._eval_root(A, phi, root, memo)

    def _eval_root(self, A: Algebra, phi, root: int, memo: dict) -> int:
        got = memo.get(root)
        if got is not None:
            return got
        key = self._nodes[self._best_node(root)]
        if key[0] == "v":
            out = phi(key[1], key[2])
        else:
            _, sym, sort, c, binding = key
            rows = tuple(
                tuple(self._eval_root(A, phi, self._find(r), memo) for r in row)
                for row in binding)
            out = A.apply(sym, rows, sort, c)
        memo[root] = out
        return out

    def audit_lines(self) -> list[str]:
        lines = []

        def show(nid: int) -> str:
            return self._node_text(nid)

        for e in self.audit:
            if e.kind == "eq":
                phi = " ".join(
                    show(r) for row in (e.phi or ()) for r in row)
                lines.append(
                    f"merge {show(e.left)} {show(e.right)} by {e.equation} "
                    f"phi=[{phi}]")
            elif e.kind == "cong":
                lines.append(f"merge {show(e.left)} {show(e.right)} by cong")
            else:
                lines.append(
                    f"merge {show(e.left)} {show(e.right)} by act {e.morphism}")
        return lines


def free_algebra(P: Presentation, generators: Presheaf, depth: int,
                 max_nodes: int = 500_000) -> FreeAlgebra:
    """The depth-bounded free P-algebra on a generator presheaf."""
    return FreeAlgebra(P, generators, depth, grow=True, max_nodes=max_nodes)


# ---------------------------------------------------------------------------
# Word problem verdicts


EQUAL = "Equal"
DISTINCT = "Distinct"
UNKNOWN = "Unknown"


def quotient_map_equal(P: Presentation, t: ParamTerm, u: ParamTerm,
                       depth: int, search_size: int = 3,
                       max_nodes: int = 200_000,
                       ceiling: int | None = None) -> tuple[str, object]:
    """Do two parametrized terms become equal in the presented monad?

    Equal verdicts come from the congruence closure (sound by the audit
    trail); Distinct verdicts carry either a saturated free algebra or an
    explicit finite countermodel; everything else is Unknown.
    """
    if t.arity != u.arity or t.parameter != u.parameter:
        raise StructureError("terms must share arity and parameter")
    seeds = [s for pt in (t, u) for row in pt.rows for s in row]
    lazy = FreeAlgebra(P, t.arity, depth, grow=False, seeds=seeds,
                       max_nodes=max_nodes)
    idx = t.parameter.index
    pairs = [
        (t(sort, c), u(sort, c))
        for sort in idx.sorts for c in t.parameter.elements(sort)]
    if all(lazy.class_of_term(a) == lazy.class_of_term(b) for a, b in pairs):
        return EQUAL, lazy
    full = None
    try:
        full = free_algebra(P, t.arity, depth, max_nodes=max_nodes)
    except ResourceCeiling:
        full = None
    if full is not None:
        folds = [(full.class_of_term(a), full.class_of_term(b)) for a, b in pairs]
        if all(x is not None and y is not None for x, y in folds):
            if all(x == y for x, y in folds):
                return EQUAL, full
            if full.saturated:
                return DISTINCT, full
    eq = Equation("probe", t, u)
    kwargs = {} if ceiling is None else {"ceiling": ceiling}
    for A in enumerate_algebras(P, search_size, **kwargs):
        witness = satisfies(A, eq, witness=True)
        if witness is not None:
            return DISTINCT, (A, witness)
    return UNKNOWN, None


# ---------------------------------------------------------------------------
# Equations over a base presentation (two-stage presentations)


@dataclass(frozen=True, eq=False)
class QuotientEquation:
    """A parallel pair of class-valued families over a base free algebra.

    This is how equations whose sides only exist modulo earlier equations are
    expressed: the sides are classes of the base presentation's free algebra
    on the arity.  Satisfaction is checked by interpreting classes, which is
    well defined on algebras of the base presentation.
    """

    name: str
    base: FreeAlgebra
    parameter: Presheaf
    lhs_rows: tuple[tuple[int, ...], ...]
    rhs_rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        idx = self.parameter.index
        for rows in (self.lhs_rows, self.rhs_rows):
            for sort, row in zip(idx.sorts, rows):
                if len(row) != self.parameter.size(sort):
                    raise StructureError(f"row at {sort} has wrong length")
                for i in row:
                    if not (0 <= i < self.base.classes.size(sort)):
                        raise StructureError("class id out of range")
        for m, msrc, mtgt in idx.morphisms:
            if m in idx.identities:
                continue
            for rows in (self.lhs_rows, self.rhs_rows):
                src_row = rows[idx.sort_index(msrc)]
                tgt_row = rows[idx.sort_index(mtgt)]
                for c, i in enumerate(src_row):
                    if tgt_row[self.parameter.map(m)[c]] != self.base.act_class(m, i):
                        raise StructureError(
                            f"class family not natural at {m}, element {c}")


def satisfies_quotient_equation(A: Algebra, qeq: QuotientEquation) -> bool:
    """Check a class-level equation; the algebra must model the base."""
    Q = qeq.base
    idx = qeq.parameter.index
    for phi in A.homs_from(Q.generators):
        memo: dict = {}
        for sort in idx.sorts:
            for c in qeq.parameter.elements(sort):
                lv = Q.evaluate_class(A, phi, sort,
                                      qeq.lhs_rows[idx.sort_index(sort)][c], memo)
                rv = Q.evaluate_class(A, phi, sort,
                                      qeq.rhs_rows[idx.sort_index(sort)][c], memo)
                if lv != rv:
                    return False
    return True


@dataclass(frozen=True, eq=False)
class TwoStagePresentation:
    """A presentation plus further equations stated over its algebras."""

    name: str
    base: Presentation
    extra: tuple[QuotientEquation, ...]

    def satisfied_by(self, A: Algebra) -> bool:
        return palg_satisfies(A, self.base) and all(
            satisfies_quotient_equation(A, q) for q in self.extra)

    def models_on(self, carrier: Presheaf, ceiling: int | None = None) -> list[Algebra]:
        kwargs = {} if ceiling is None else {"ceiling": ceiling}
        return [
            A for A in enumerate_algebras(self.base, 0, carrier=carrier, **kwargs)
            if all(satisfies_quotient_equation(A, q) for q in self.extra)]
