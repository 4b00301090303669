"""Free-form signatures and the sorted term syntax of the free monad.

A term over a variable presheaf J is either a variable (an element of J at
some sort) or an operation symbol applied to a natural binding of its arity
into terms, together with a parameter element at the term's sort.  Terms are
interned per signature, so structural equality is identity and hashing is
O(1); build them only through :func:`var` and :func:`app`.

The variable presheaf is tracked by the surrounding context (assignments,
parametrized terms, universes), not stored inside the term, so the same
variable node can be read over any presheaf large enough to contain it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .base import (
    IndexCategory,
    Presheaf,
    PresheafMorphism,
    StructureError,
    enumerate_families,
    identity_morphism,
    injections,
)


@dataclass(frozen=True)
class OperationSymbol:
    name: str
    arity: Presheaf
    parameter: Presheaf

    def __post_init__(self):
        if self.arity.index != self.parameter.index:
            raise StructureError(
                f"symbol {self.name}: arity and parameter over different indices")


class FreeFormSignature:
    """A finite family of operation symbols over one index category."""

    def __init__(self, name: str, symbols: Sequence[OperationSymbol]):
        symbols = tuple(symbols)
        names = [s.name for s in symbols]
        if len(set(names)) != len(names):
            raise StructureError("duplicate operation symbol names")
        if symbols:
            index = symbols[0].arity.index
            for s in symbols:
                if s.arity.index != index:
                    raise StructureError("symbols over different index categories")
            self.index = index
        else:
            self.index = None  # fixed on first use; empty signatures carry none
        self.name = name
        self.symbols = symbols
        self._by_name = {s.name: s for s in symbols}
        self._sym_index = {s.name: i for i, s in enumerate(symbols)}
        self._intern: dict = {}

    def symbol(self, name: str) -> OperationSymbol:
        try:
            return self._by_name[name]
        except KeyError:
            raise StructureError(f"unknown operation symbol {name!r}") from None

    def symbol_index(self, name: str) -> int:
        return self._sym_index[name]

    def with_index(self, index: IndexCategory) -> "FreeFormSignature":
        if self.index is None:
            self.index = index
        return self

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"FreeFormSignature({self.name}, {[s.name for s in self.symbols]})"


@dataclass(frozen=True)
class TraditionalSignature:
    """One parameter object per (distinct) arity object."""

    arities: tuple[Presheaf, ...]
    parameters: tuple[Presheaf, ...]

    def __post_init__(self):
        if len(self.arities) != len(self.parameters):
            raise StructureError("arity/parameter lists must align")
        for i, a in enumerate(self.arities):
            for b in self.arities[i + 1:]:
                if a == b:
                    raise StructureError("arity objects must be pairwise distinct")


@dataclass(eq=False)
class Term:
    """An interned term node; compare with ``is`` or ``==`` (same thing)."""

    sort: str
    var: int | None = None
    symbol: OperationSymbol | None = None
    binding: tuple[tuple["Term", ...], ...] | None = None
    param: int | None = None
    depth: int = 0
    skey: tuple = field(default_factory=tuple, repr=False)

    @property
    def is_var(self) -> bool:
        return self.var is not None

    def __repr__(self):
        if self.is_var:
            return f"(var {self.sort} {self.var})"
        entries = []
        for bsort, terms in zip(self.symbol.arity.index.sorts, self.binding):
            entries.extend(
                f"({bsort} {i} {t!r})" for i, t in enumerate(terms))
        return (f"(app {self.symbol.name} ({' '.join(entries)})"
                f" ({self.sort} {self.param}))")


def var(sig: FreeFormSignature, sort: str, x: int) -> Term:
    key = ("v", sort, x)
    t = sig._intern.get(key)
    if t is None:
        if sig.index is not None and sort not in sig.index.sorts:
            raise StructureError(f"unknown sort {sort!r}")
        if x < 0:
            raise StructureError("negative variable element")
        t = Term(sort=sort, var=x, depth=0, skey=(0, sort, x))
        sig._intern[key] = t
    return t


def app(
    sig: FreeFormSignature,
    symbol: str,
    binding: Sequence[Sequence[Term]],
    sort: str,
    param_elt: int,
    variables: Presheaf,
) -> Term:
    """Apply ``symbol`` with a natural binding of its arity into terms.

    ``variables`` is the variable presheaf of the binding's terms; it is
    needed to validate naturality of the binding (variable leaves transport
    along it).
    """
    sym = sig.symbol(symbol)
    binding = tuple(tuple(row) for row in binding)
    # The variable presheaf is part of the key: naturality of the binding
    # depends on it, and a cache hit must only replay a validated build.
    key = ("a", symbol, sort, param_elt, variables,
           tuple(tuple(id(t) for t in row) for row in binding))
    cached = sig._intern.get(key)
    if cached is not None:
        return cached
    idx = sym.arity.index
    if sort not in idx.sorts:
        raise StructureError(f"unknown sort {sort!r}")
    if not (0 <= param_elt < sym.parameter.size(sort)):
        raise StructureError(
            f"parameter element {param_elt} out of range for {symbol} at {sort}")
    if len(binding) != len(idx.sorts):
        raise StructureError("binding needs one row per sort")
    for bsort, row in zip(idx.sorts, binding):
        if len(row) != sym.arity.size(bsort):
            raise StructureError(
                f"binding row at {bsort} has wrong length for {symbol}")
        for t in row:
            if t.sort != bsort:
                raise StructureError("binding row contains term of wrong sort")
    for m, msrc, mtgt in idx.morphisms:
        if m in idx.identities:
            continue
        src_row = binding[idx.sort_index(msrc)]
        tgt_row = binding[idx.sort_index(mtgt)]
        table = sym.arity.map(m)
        for x, t in enumerate(src_row):
            if tgt_row[table[x]] is not act(sig, variables, m, t):
                raise StructureError(
                    f"binding for {symbol} is not natural at {m}, element {x}")
    depth = 1 + max((t.depth for row in binding for t in row), default=0)
    skey = (1, sig.symbol_index(symbol), sort, param_elt,
            tuple(tuple(t.skey for t in row) for row in binding))
    t = Term(sort=sort, symbol=sym, binding=binding, param=param_elt,
             depth=depth, skey=skey)
    sig._intern[key] = t
    return t


def act(sig: FreeFormSignature, variables: Presheaf, m: str, t: Term) -> Term:
    """Transport a term of sort src(m) to sort tgt(m); bindings are untouched."""
    idx = variables.index
    if t.sort != idx.src(m):
        raise StructureError(f"act: term sort {t.sort} does not match src({m})")
    if m in idx.identities:
        return t
    tgt = idx.tgt(m)
    if t.is_var:
        return var(sig, tgt, variables.map(m)[t.var])
    return app(sig, t.symbol.name, t.binding, tgt,
               t.symbol.parameter.map(m)[t.param], variables)


@dataclass(frozen=True, eq=False)
class Assignment:
    """A natural family from a presheaf J into terms over a presheaf J'."""

    signature: FreeFormSignature
    source: Presheaf
    context: Presheaf
    rows: tuple[tuple[Term, ...], ...]

    def __post_init__(self):
        idx = self.source.index
        if len(self.rows) != len(idx.sorts):
            raise StructureError("assignment needs one row per sort")
        for sort, row in zip(idx.sorts, self.rows):
            if len(row) != self.source.size(sort):
                raise StructureError(f"assignment row at {sort} has wrong length")
            for t in row:
                if t.sort != sort:
                    raise StructureError("assignment row contains term of wrong sort")
        for m, msrc, mtgt in idx.morphisms:
            if m in idx.identities:
                continue
            src_row = self.rows[idx.sort_index(msrc)]
            tgt_row = self.rows[idx.sort_index(mtgt)]
            table = self.source.map(m)
            for x, t in enumerate(src_row):
                if tgt_row[table[x]] is not act(self.signature, self.context, m, t):
                    raise StructureError(
                        f"assignment is not natural at {m}, element {x}")

    def __call__(self, sort: str, x: int) -> Term:
        return self.rows[self.source.index.sort_index(sort)][x]


def var_assignment(sig: FreeFormSignature, J: Presheaf) -> Assignment:
    rows = tuple(
        tuple(var(sig, sort, x) for x in J.elements(sort))
        for sort in J.index.sorts)
    return Assignment(sig, J, J, rows)


def substitute(sig: FreeFormSignature, t: Term, phi: Assignment) -> Term:
    """Kleisli extension: replace variables by phi, keeping App structure."""
    memo: dict[int, Term] = {}

    def go(s: Term) -> Term:
        got = memo.get(id(s))
        if got is not None:
            return got
        if s.is_var:
            out = phi(s.sort, s.var)
        else:
            rows = tuple(tuple(go(u) for u in row) for row in s.binding)
            out = app(sig, s.symbol.name, rows, s.sort, s.param, phi.context)
        memo[id(s)] = out
        return out

    return go(t)


def compose_assignments(
    sig: FreeFormSignature, phi: Assignment, psi: Assignment
) -> Assignment:
    """Kleisli composition: apply phi, then substitute along psi."""
    rows = tuple(
        tuple(substitute(sig, t, psi) for t in row) for row in phi.rows)
    return Assignment(sig, phi.source, psi.context, rows)


@dataclass(frozen=True, eq=False)
class ParamTerm:
    """A natural family from a parameter presheaf into terms over J."""

    signature: FreeFormSignature
    arity: Presheaf
    parameter: Presheaf
    rows: tuple[tuple[Term, ...], ...]

    def __post_init__(self):
        idx = self.parameter.index
        if self.arity.index != idx:
            raise StructureError("arity and parameter over different indices")
        if len(self.rows) != len(idx.sorts):
            raise StructureError("parametrized term needs one row per sort")
        for sort, row in zip(idx.sorts, self.rows):
            if len(row) != self.parameter.size(sort):
                raise StructureError(f"row at {sort} has wrong length")
            for t in row:
                if t.sort != sort:
                    raise StructureError("row contains term of wrong sort")
                _check_variables_within(t, self.arity)
        for m, msrc, mtgt in idx.morphisms:
            if m in idx.identities:
                continue
            src_row = self.rows[idx.sort_index(msrc)]
            tgt_row = self.rows[idx.sort_index(mtgt)]
            table = self.parameter.map(m)
            for c, t in enumerate(src_row):
                if tgt_row[table[c]] is not act(self.signature, self.arity, m, t):
                    raise StructureError(
                        f"parametrized term not natural at {m}, element {c}")

    def __call__(self, sort: str, c: int) -> Term:
        return self.rows[self.parameter.index.sort_index(sort)][c]

    @property
    def skey(self) -> tuple:
        return tuple(tuple(t.skey for t in row) for row in self.rows)


def _check_variables_within(t: Term, J: Presheaf, _seen=None) -> None:
    if _seen is None:
        _seen = set()
    if id(t) in _seen:
        return
    _seen.add(id(t))
    if t.is_var:
        if t.var >= J.size(t.sort):
            raise StructureError(
                f"variable ({t.sort}, {t.var}) outside arity presheaf")
    else:
        for row in t.binding:
            for u in row:
                _check_variables_within(u, J, _seen)


@dataclass(frozen=True, eq=False)
class Equation:
    """A parallel pair of parametrized terms with shared arity and parameter."""

    name: str
    lhs: ParamTerm
    rhs: ParamTerm

    def __post_init__(self):
        if self.lhs.arity != self.rhs.arity:
            raise StructureError(f"equation {self.name}: arity mismatch")
        if self.lhs.parameter != self.rhs.parameter:
            raise StructureError(f"equation {self.name}: parameter mismatch")
        if self.lhs.signature is not self.rhs.signature:
            raise StructureError(f"equation {self.name}: signature mismatch")

    @property
    def signature(self) -> FreeFormSignature:
        return self.lhs.signature

    @property
    def arity(self) -> Presheaf:
        return self.lhs.arity

    @property
    def parameter(self) -> Presheaf:
        return self.lhs.parameter


def standardize(
    sig: FreeFormSignature,
) -> tuple[TraditionalSignature, dict[str, PresheafMorphism]]:
    """Bundle symbols of equal arity into one parameter coproduct per arity.

    Returns the traditional signature together with the coproduct insertion
    of each symbol's parameter into its arity's bundled parameter.
    """
    arities: list[Presheaf] = []
    groups: dict[int, list[OperationSymbol]] = {}
    for s in sig.symbols:
        for i, a in enumerate(arities):
            if a == s.arity:
                groups[i].append(s)
                break
        else:
            arities.append(s.arity)
            groups[len(arities) - 1] = [s]
    params: list[Presheaf] = []
    insertions: dict[str, PresheafMorphism] = {}
    for i, a in enumerate(arities):
        syms = groups[i]
        total = syms[0].parameter
        ins = [None] * len(syms)
        ins[0] = identity_morphism(total)
        for k in range(1, len(syms)):
            i1, i2 = injections(total, syms[k].parameter)
            total = i1.target
            for j in range(k):
                ins[j] = ins[j].then(i1)
            ins[k] = i2
        params.append(total)
        for s, m in zip(syms, ins):
            insertions[s.name] = m
    return TraditionalSignature(tuple(arities), tuple(params)), insertions


def from_traditional(
    trad: TraditionalSignature, name: str = "std"
) -> FreeFormSignature:
    """One symbol per arity object, with the bundled parameter."""
    symbols = [
        OperationSymbol(f"op{i}", a, p)
        for i, (a, p) in enumerate(zip(trad.arities, trad.parameters))
    ]
    return FreeFormSignature(name, symbols)


class TermUniverse:
    """All terms of depth <= d over a variable presheaf, per sort.

    Closed under the index action; membership and per-sort listing are O(1).
    """

    def __init__(self, sig: FreeFormSignature, variables: Presheaf,
                 depth: int, by_sort: dict[str, list[Term]]):
        self.signature = sig
        self.variables = variables
        self.depth = depth
        self.by_sort = by_sort
        self._members = {id(t) for ts in by_sort.values() for t in ts}

    def __contains__(self, t: Term) -> bool:
        return id(t) in self._members

    def terms(self, sort: str) -> list[Term]:
        return self.by_sort[sort]

    def act(self, m: str, t: Term) -> Term:
        return act(self.signature, self.variables, m, t)

    @property
    def total(self) -> int:
        return len(self._members)


def enumerate_terms(
    sig: FreeFormSignature,
    variables: Presheaf,
    depth: int,
    max_terms: int = 2_000_000,
) -> TermUniverse:
    """Exactly the terms of depth <= d, layered by depth, canonical order."""
    if depth < 0:
        raise StructureError("depth must be nonnegative")
    idx = variables.index
    by_sort: dict[str, list[Term]] = {
        sort: [var(sig, sort, x) for x in variables.elements(sort)]
        for sort in idx.sorts
    }
    seen = {id(t) for ts in by_sort.values() for t in ts}
    for _level in range(depth):
        new: dict[str, list[Term]] = {sort: [] for sort in idx.sorts}
        for sym in sig.symbols:
            families = enumerate_families(
                sym.arity,
                [by_sort[s] for s in idx.sorts],
                lambda m, t: act(sig, variables, m, t),
            )
            for fam in families:
                for sort in idx.sorts:
                    for c in sym.parameter.elements(sort):
                        t = app(sig, sym.name, fam, sort, c, variables)
                        if id(t) not in seen:
                            seen.add(id(t))
                            new[sort].append(t)
                            if len(seen) > max_terms:
                                raise StructureError(
                                    f"term universe exceeds {max_terms} terms")
        for sort in idx.sorts:
            by_sort[sort].extend(new[sort])
    return TermUniverse(sig, variables, depth, by_sort)


def precompose(pt: ParamTerm, x: PresheafMorphism) -> ParamTerm:
    """Reparametrize along x : G -> C; the arity is unchanged."""
    if x.target != pt.parameter:
        raise StructureError("precompose: morphism does not target the parameter")
    idx = pt.parameter.index
    rows = tuple(
        tuple(pt(sort, x(sort, g)) for g in x.source.elements(sort))
        for sort in idx.sorts)
    return ParamTerm(pt.signature, pt.arity, x.source, rows)


def precompose_equation(
    eq: Equation, x: PresheafMorphism, name: str | None = None
) -> Equation:
    return Equation(
        name if name is not None else f"{eq.name}/pre",
        precompose(eq.lhs, x),
        precompose(eq.rhs, x),
    )


def param_term_from_map(
    sig: FreeFormSignature,
    arity: Presheaf,
    parameter: Presheaf,
    fn: Callable[[str, int], Term],
) -> ParamTerm:
    rows = tuple(
        tuple(fn(sort, c) for c in parameter.elements(sort))
        for sort in parameter.index.sorts)
    return ParamTerm(sig, arity, parameter, rows)


def term_leaf_depths(t: Term) -> dict[tuple[str, int], int]:
    """Minimal remaining-depth budget per variable leaf: leaf -> max path length.

    Used to bound substitution images: substituting x by a term of depth k
    yields depth max over leaves (path + k), so the image depth allowed for x
    at total budget d is d - out[(sort, x)].
    """
    out: dict[tuple[str, int], int] = {}

    def walk(s: Term, path: int):
        if s.is_var:
            key = (s.sort, s.var)
            if path > out.get(key, -1):
                out[key] = path
        else:
            for row in s.binding:
                for u in row:
                    walk(u, path + 1)

    walk(t, 0)
    return out
