"""Finite presheaves over a finite index category.

Everything is finite and extensional: an index category is a composition
table, a presheaf assigns a finite set ``{0, .., n-1}`` to each sort and a
function table to each index morphism, and hom-sets are enumerated outright.
All values are immutable after construction and constructors validate their
invariants eagerly, so a value that exists is a value that is well formed.

Canonical orders are lexicographic on the underlying integer tables; every
enumeration in this module is deterministic and stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Callable, Iterable, Sequence


class StructureError(ValueError):
    """An invariant of a finite structure failed; the message names it."""


@dataclass(frozen=True, eq=False)
class IndexCategory:
    """A finite category given by a full composition table.

    ``morphisms`` lists triples ``(name, source sort, target sort)``;
    ``identities`` maps each sort to the name of its identity; ``composition``
    lists ``(f, g, h)`` entries meaning "f then g is h" for every composable
    pair ``(f, g)``.
    """

    name: str
    sorts: tuple[str, ...]
    morphisms: tuple[tuple[str, str, str], ...]
    identities: tuple[str, ...]
    composition: tuple[tuple[str, str, str], ...]

    def _key(self):
        return (self.name, self.sorts, self.morphisms, self.identities,
                frozenset(self.composition))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, IndexCategory):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self._key())
            object.__setattr__(self, "_hash", h)
        return h

    def __post_init__(self):
        if len(set(self.sorts)) != len(self.sorts):
            raise StructureError("duplicate sort names")
        names = [m[0] for m in self.morphisms]
        if len(set(names)) != len(names):
            raise StructureError("duplicate morphism names")
        known = set(names)
        for mname, src, tgt in self.morphisms:
            if src not in self.sorts or tgt not in self.sorts:
                raise StructureError(f"morphism {mname} uses unknown sort")
        if len(self.identities) != len(self.sorts):
            raise StructureError("need exactly one identity per sort")
        for sort, ident in zip(self.sorts, self.identities):
            if ident not in known:
                raise StructureError(f"identity {ident} is not a morphism")
            if self.src(ident) != sort or self.tgt(ident) != sort:
                raise StructureError(f"identity {ident} is not an endo on {sort}")
        table = {}
        for f, g, h in self.composition:
            if f not in known or g not in known or h not in known:
                raise StructureError("composition entry uses unknown morphism")
            if self.tgt(f) != self.src(g):
                raise StructureError(f"({f}, {g}) is not a composable pair")
            if (f, g) in table:
                raise StructureError(f"duplicate composition entry for ({f}, {g})")
            if self.src(h) != self.src(f) or self.tgt(h) != self.tgt(g):
                raise StructureError(f"composite of ({f}, {g}) has wrong endpoints")
            table[(f, g)] = h
        for f, _, ftgt in self.morphisms:
            for g, gsrc, _ in self.morphisms:
                if ftgt == gsrc and (f, g) not in table:
                    raise StructureError(f"missing composite for ({f}, {g})")
        for sort, ident in zip(self.sorts, self.identities):
            for f, src, tgt in self.morphisms:
                if src == sort and table[(ident, f)] != f:
                    raise StructureError(f"left unit law fails at ({ident}, {f})")
                if tgt == sort and table[(f, ident)] != f:
                    raise StructureError(f"right unit law fails at ({f}, {ident})")
        for f, _, _ in self.morphisms:
            for g, _, _ in self.morphisms:
                if (f, g) not in table:
                    continue
                for h, _, _ in self.morphisms:
                    if (g, h) not in table:
                        continue
                    if table[(table[(f, g)], h)] != table[(f, table[(g, h)])]:
                        raise StructureError(
                            f"associativity fails at ({f}, {g}, {h})")

    def sort_index(self, sort: str) -> int:
        return self.sorts.index(sort)

    def src(self, morphism: str) -> str:
        return self._mor()[morphism][0]

    def tgt(self, morphism: str) -> str:
        return self._mor()[morphism][1]

    def _mor(self) -> dict[str, tuple[str, str]]:
        cached = self.__dict__.get("_mor_table")
        if cached is None:
            cached = {m: (s, t) for m, s, t in self.morphisms}
            object.__setattr__(self, "_mor_table", cached)
        return cached

    def identity(self, sort: str) -> str:
        return self.identities[self.sort_index(sort)]

    def compose(self, f: str, g: str) -> str:
        """Composite "f then g"."""
        cached = self.__dict__.get("_comp_table")
        if cached is None:
            cached = {(a, b): c for a, b, c in self.composition}
            object.__setattr__(self, "_comp_table", cached)
        return cached[(f, g)]

    def morphisms_from(self, sort: str) -> list[str]:
        return [m for m, s, _ in self.morphisms if s == sort]

    @property
    def is_trivial(self) -> bool:
        return len(self.sorts) == 1 and len(self.morphisms) == 1


def trivial_index(name: str = "pt") -> IndexCategory:
    """The one-object index; presheaves over it are plain finite sets."""
    return IndexCategory(
        name=name,
        sorts=("*",),
        morphisms=(("id", "*", "*"),),
        identities=("id",),
        composition=(("id", "id", "id"),),
    )


def parallel_pair_index(name: str = "graph") -> IndexCategory:
    """Two sorts e, v with s, t : e -> v; presheaves are directed graphs."""
    return IndexCategory(
        name=name,
        sorts=("v", "e"),
        morphisms=(("idv", "v", "v"), ("ide", "e", "e"), ("s", "e", "v"), ("t", "e", "v")),
        identities=("idv", "ide"),
        composition=(
            ("idv", "idv", "idv"),
            ("ide", "ide", "ide"),
            ("ide", "s", "s"),
            ("ide", "t", "t"),
            ("s", "idv", "s"),
            ("t", "idv", "t"),
        ),
    )


@dataclass(frozen=True, eq=False)
class Presheaf:
    """A functor from the index category to finite sets.

    Elements of each sort are dense integers ``0..sizes[b]-1``; ``action``
    holds one image tuple per index morphism, aligned with the index
    category's morphism order.
    """

    index: IndexCategory
    sizes: tuple[int, ...]
    action: tuple[tuple[int, ...], ...]

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Presheaf):
            return NotImplemented
        return (self.sizes == other.sizes and self.action == other.action
                and self.index == other.index)

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.sizes, self.action, self.index))
            object.__setattr__(self, "_hash", h)
        return h

    def __post_init__(self):
        if len(self.sizes) != len(self.index.sorts):
            raise StructureError("one size per sort required")
        if any(n < 0 for n in self.sizes):
            raise StructureError("negative sort size")
        if len(self.action) != len(self.index.morphisms):
            raise StructureError("one action table per index morphism required")
        for (m, src, tgt), table in zip(self.index.morphisms, self.action):
            if len(table) != self.size(src):
                raise StructureError(f"action table for {m} has wrong length")
            if any(not (0 <= y < self.size(tgt)) for y in table):
                raise StructureError(f"action table for {m} is out of range")
        for sort, ident in zip(self.index.sorts, self.index.identities):
            if self.map(ident) != tuple(range(self.size(sort))):
                raise StructureError(f"functoriality fails: {ident} is not identity")
        for f, g, h in self.index.composition:
            ftab, gtab, htab = self.map(f), self.map(g), self.map(h)
            if tuple(gtab[y] for y in ftab) != htab:
                raise StructureError(f"functoriality fails at composite ({f}, {g})")

    def size(self, sort: str) -> int:
        return self.sizes[self.index.sort_index(sort)]

    def map(self, morphism: str) -> tuple[int, ...]:
        names = self.__dict__.get("_mor_index")
        if names is None:
            names = {m: i for i, (m, _, _) in enumerate(self.index.morphisms)}
            object.__setattr__(self, "_mor_index", names)
        return self.action[names[morphism]]

    def elements(self, sort: str) -> range:
        return range(self.size(sort))

    @property
    def total_size(self) -> int:
        return sum(self.sizes)

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"Presheaf({self.index.name}, sizes={self.sizes})"


@dataclass(frozen=True)
class PresheafMorphism:
    """A natural family of functions between presheaves over one index."""

    source: Presheaf
    target: Presheaf
    components: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.source.index != self.target.index:
            raise StructureError("morphism between presheaves over different indices")
        if len(self.components) != len(self.source.index.sorts):
            raise StructureError("one component per sort required")
        for sort, comp in zip(self.source.index.sorts, self.components):
            if len(comp) != self.source.size(sort):
                raise StructureError(f"component at {sort} has wrong length")
            if any(not (0 <= y < self.target.size(sort)) for y in comp):
                raise StructureError(f"component at {sort} is out of range")
        for m, src, tgt in self.source.index.morphisms:
            fsrc = self.components[self.source.index.sort_index(src)]
            ftgt = self.components[self.source.index.sort_index(tgt)]
            for x in self.source.elements(src):
                if ftgt[self.source.map(m)[x]] != self.target.map(m)[fsrc[x]]:
                    raise StructureError(
                        f"naturality fails at morphism {m}, element {x}")

    def __call__(self, sort: str, x: int) -> int:
        return self.components[self.source.index.sort_index(sort)][x]

    def then(self, other: "PresheafMorphism") -> "PresheafMorphism":
        if self.target != other.source:
            raise StructureError("composition of non-composable presheaf morphisms")
        comps = tuple(
            tuple(oc[y] for y in sc)
            for sc, oc in zip(self.components, other.components)
        )
        return PresheafMorphism(self.source, other.target, comps)

    def is_injective(self) -> bool:
        return all(len(set(c)) == len(c) for c in self.components)

    def is_surjective(self) -> bool:
        return all(
            set(c) == set(range(self.target.size(sort)))
            for sort, c in zip(self.source.index.sorts, self.components)
        )


def identity_morphism(X: Presheaf) -> PresheafMorphism:
    return PresheafMorphism(
        X, X, tuple(tuple(range(n)) for n in X.sizes))


def constant_presheaf(index: IndexCategory, n: int) -> Presheaf:
    action = tuple(tuple(range(n)) for _ in index.morphisms)
    return Presheaf(index, tuple(n for _ in index.sorts), action)


def terminal(index: IndexCategory) -> Presheaf:
    return constant_presheaf(index, 1)


def empty(index: IndexCategory) -> Presheaf:
    return constant_presheaf(index, 0)


def finite_set(n: int, index: IndexCategory | None = None) -> Presheaf:
    """The n-element set as a presheaf over the trivial index."""
    return constant_presheaf(index if index is not None else trivial_index(), n)


def enumerate_families(
    X: Presheaf,
    targets: Sequence[Sequence[object]],
    act: Callable[[str, object], object],
    candidates: Callable[[str, int], Iterable[object]] | None = None,
) -> list[tuple[tuple[object, ...], ...]]:
    """All natural families from X into a finite "presheaf of values".

    ``targets[b]`` lists the values available at sort ``b`` and ``act(u, y)``
    transports a value along an index morphism.  ``candidates`` may narrow the
    choices per element; naturality is enforced against already-chosen
    elements, so enumeration order (sort-major, element-minor, value order as
    listed) is the canonical lexicographic one.
    """
    idx = X.index
    slots: list[tuple[str, int]] = []
    for sort in idx.sorts:
        slots.extend((sort, x) for x in X.elements(sort))
    pos = {slot: i for i, slot in enumerate(slots)}
    constraints: list[list[tuple[str, int, int]]] = [[] for _ in slots]
    for m, src, tgt in idx.morphisms:
        if m in idx.identities:
            continue
        for x in X.elements(src):
            i, j = pos[(src, x)], pos[(tgt, X.map(m)[x])]
            if i < j:
                constraints[j].append((m, i, +1))
            elif j < i:
                constraints[i].append((m, j, -1))
            else:
                constraints[i].append((m, i, 0))
    out: list[tuple[tuple[object, ...], ...]] = []
    chosen: list[object] = [None] * len(slots)

    def ok(k: int, value: object) -> bool:
        for m, other, direction in constraints[k]:
            if direction == +1:
                if act(m, chosen[other]) != value:
                    return False
            elif direction == -1:
                if act(m, value) != chosen[other]:
                    return False
            else:
                if act(m, value) != value:
                    return False
        return True

    def rec(k: int):
        if k == len(slots):
            fam = []
            i = 0
            for sort in idx.sorts:
                n = X.size(sort)
                fam.append(tuple(chosen[i:i + n]))
                i += n
            out.append(tuple(fam))
            return
        sort, x = slots[k]
        pool = (
            candidates(sort, x)
            if candidates is not None
            else targets[idx.sort_index(sort)]
        )
        for value in pool:
            if ok(k, value):
                chosen[k] = value
                rec(k + 1)
        chosen[k] = None

    rec(0)
    return out


def hom_set(X: Presheaf, Y: Presheaf) -> list[PresheafMorphism]:
    """All presheaf morphisms X -> Y in canonical lexicographic order."""
    if X.index != Y.index:
        raise StructureError("hom_set requires a common index category")
    families = enumerate_families(
        X,
        [list(range(n)) for n in Y.sizes],
        lambda m, y: Y.map(m)[y],
    )
    return [PresheafMorphism(X, Y, fam) for fam in families]


def hom_index(homs: Sequence[PresheafMorphism], f: PresheafMorphism) -> int:
    """Position of f in a canonical hom_set listing."""
    table = getattr(homs, "_lookup", None)
    if table is None:
        table = {h.components: i for i, h in enumerate(homs)}
        try:
            homs._lookup = table  # type: ignore[attr-defined]
        except AttributeError:
            pass
    return table[f.components]


class HomList(list):
    """A hom_set listing that caches component lookups."""


def hom_list(X: Presheaf, Y: Presheaf) -> HomList:
    return HomList(hom_set(X, Y))


def copower(n: int, X: Presheaf) -> Presheaf:
    """n . X, with (i, x) encoded as i*|X(b)| + x and action on x only."""
    sizes = tuple(n * k for k in X.sizes)
    action = []
    for (m, src, tgt), table in zip(X.index.morphisms, X.action):
        ksrc, ktgt = X.size(src), X.size(tgt)
        action.append(tuple(
            (z // ksrc) * ktgt + table[z % ksrc] for z in range(n * ksrc)))
    return Presheaf(X.index, sizes, tuple(action))


def copower_pair(X: Presheaf, sort: str, i: int, x: int) -> int:
    return i * X.size(sort) + x


def copower_split(X: Presheaf, sort: str, z: int) -> tuple[int, int]:
    k = X.size(sort)
    return z // k, z % k


def product(X: Presheaf, Y: Presheaf) -> Presheaf:
    """Pointwise product, (x, y) encoded as x*|Y(b)| + y."""
    if X.index != Y.index:
        raise StructureError("product requires a common index category")
    sizes = tuple(a * b for a, b in zip(X.sizes, Y.sizes))
    action = []
    for (m, src, tgt) in X.index.morphisms:
        xs, ys = X.size(src), Y.size(src)
        yt = Y.size(tgt)
        xtab, ytab = X.map(m), Y.map(m)
        action.append(tuple(
            xtab[z // ys] * yt + ytab[z % ys] for z in range(xs * ys)))
    return Presheaf(X.index, sizes, tuple(action))


def product_pair(X: Presheaf, Y: Presheaf, sort: str, x: int, y: int) -> int:
    return x * Y.size(sort) + y


def product_split(X: Presheaf, Y: Presheaf, sort: str, z: int) -> tuple[int, int]:
    k = Y.size(sort)
    return z // k, z % k


def projections(X: Presheaf, Y: Presheaf) -> tuple[PresheafMorphism, PresheafMorphism]:
    P = product(X, Y)
    p1 = tuple(
        tuple(z // Y.size(sort) for z in P.elements(sort))
        for sort in X.index.sorts)
    p2 = tuple(
        tuple(z % Y.size(sort) for z in P.elements(sort))
        for sort in X.index.sorts)
    return PresheafMorphism(P, X, p1), PresheafMorphism(P, Y, p2)


def coproduct(X: Presheaf, Y: Presheaf) -> Presheaf:
    """Pointwise disjoint union; X's elements come first at every sort."""
    if X.index != Y.index:
        raise StructureError("coproduct requires a common index category")
    sizes = tuple(a + b for a, b in zip(X.sizes, Y.sizes))
    action = []
    for (m, src, tgt) in X.index.morphisms:
        xs = X.size(src)
        xt = X.size(tgt)
        xtab, ytab = X.map(m), Y.map(m)
        action.append(tuple(
            xtab[z] if z < xs else xt + ytab[z - xs]
            for z in range(xs + Y.size(src))))
    return Presheaf(X.index, sizes, tuple(action))


def coproduct_of(summands: Sequence[Presheaf]) -> Presheaf:
    """Left-fold of binary coproducts; elements are concatenated in order."""
    if not summands:
        raise StructureError("coproduct_of needs at least one summand")
    total = summands[0]
    for X in summands[1:]:
        total = coproduct(total, X)
    return total


def injections(X: Presheaf, Y: Presheaf) -> tuple[PresheafMorphism, PresheafMorphism]:
    S = coproduct(X, Y)
    i1 = tuple(tuple(range(X.size(sort))) for sort in X.index.sorts)
    i2 = tuple(
        tuple(X.size(sort) + y for y in Y.elements(sort))
        for sort in X.index.sorts)
    return PresheafMorphism(X, S, i1), PresheafMorphism(Y, S, i2)


def jointly_surjective(
    family: Sequence[PresheafMorphism], codomain: Presheaf | None = None
) -> bool:
    """True iff every element of the common codomain is hit at every sort."""
    if not family:
        return codomain is not None and codomain.total_size == 0
    cod = family[0].target
    if codomain is not None and codomain != cod:
        raise StructureError("family does not target the stated codomain")
    for f in family:
        if f.target != cod:
            raise StructureError("jointly_surjective requires a common codomain")
    for si, sort in enumerate(cod.index.sorts):
        hit = set()
        for f in family:
            hit.update(f.components[si])
        if hit != set(range(cod.size(sort))):
            return False
    return True


def representable(index: IndexCategory, sort: str) -> tuple[Presheaf, list[str]]:
    """The covariant representable at ``sort`` plus its element labels.

    Element i of sort b is the i-th index morphism sort -> b in morphism-list
    order; the returned label list is in that same flat order.
    """
    by_sort: dict[str, list[str]] = {b: [] for b in index.sorts}
    for m, src, tgt in index.morphisms:
        if src == sort:
            by_sort[tgt].append(m)
    sizes = tuple(len(by_sort[b]) for b in index.sorts)
    action = []
    for (u, src, tgt) in index.morphisms:
        table = []
        for v in by_sort[src]:
            table.append(by_sort[tgt].index(index.compose(v, u)))
        action.append(tuple(table))
    labels = [m for b in index.sorts for m in by_sort[b]]
    return Presheaf(index, sizes, tuple(action)), labels


def element_morphism(X: Presheaf, sort: str, x: int) -> PresheafMorphism:
    """The Yoneda map from the representable at ``sort`` picking out ``x``."""
    Y, _ = representable(X.index, sort)
    comps = []
    for b in X.index.sorts:
        names = [m for m, s, t in X.index.morphisms if s == sort and t == b]
        comps.append(tuple(X.map(v)[x] for v in names))
    return PresheafMorphism(Y, X, tuple(comps))


def element_family(X: Presheaf) -> list[PresheafMorphism]:
    """The jointly surjective family of all elements of X, via Yoneda."""
    return [
        element_morphism(X, sort, x)
        for sort in X.index.sorts
        for x in X.elements(sort)
    ]
