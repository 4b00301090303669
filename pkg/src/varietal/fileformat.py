"""The on-disk text format: parsing into validated structures and printing.

Declarations are line-oriented s-expressions, resolved in order of
appearance; every structure goes through the library constructors, so a file
that parses is a file whose invariants hold.  The printer emits one
declaration per line in a fixed layout, and parse(print(w)) reproduces the
workspace exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import sexpr
from .base import (
    IndexCategory,
    Presheaf,
    PresheafMorphism,
    StructureError,
    hom_list,
)
from .syntax import (
    Equation,
    FreeFormSignature,
    OperationSymbol,
    ParamTerm,
    Term,
    app,
    var,
)
from .algebra import Algebra
from .presentation import Presentation
from .clones import RelativeMonad
from .pretheory import Pretheory


class ParseError(ValueError):
    pass


@dataclass
class Workspace:
    """Parsed declarations keyed by kind and name, with provenance."""

    indexes: dict[str, IndexCategory] = field(default_factory=dict)
    objects: dict[str, Presheaf] = field(default_factory=dict)
    signatures: dict[str, FreeFormSignature] = field(default_factory=dict)
    equations: dict[str, Equation] = field(default_factory=dict)
    presentations: dict[str, Presentation] = field(default_factory=dict)
    algebras: dict[str, Algebra] = field(default_factory=dict)
    relmonads: dict[str, RelativeMonad] = field(default_factory=dict)
    pretheories: dict[str, Pretheory] = field(default_factory=dict)
    provenance: dict[tuple[str, str], tuple[str, int]] = field(default_factory=dict)
    order: list[tuple[str, str]] = field(default_factory=list)

    def _declare(self, kind: str, name: str, value, table: dict,
                 filename: str, line: int):
        if name in table:
            raise ParseError(f"{filename}:{line}: duplicate {kind} {name!r}")
        table[name] = value
        self.provenance[(kind, name)] = (filename, line)
        self.order.append((kind, name))

    def object_index(self, name: str) -> IndexCategory:
        return self.objects[name].index


def _err(node: sexpr.Node, filename: str, message: str) -> ParseError:
    return ParseError(f"{filename}:{node.line}:{node.column}: {message}")


def _expect_list(node, filename, what):
    if not node.is_list:
        raise _err(node, filename, f"expected {what}")
    return node.items


def _atom(node, filename, what="atom"):
    if node.is_list:
        raise _err(node, filename, f"expected {what}")
    return node.value


def _named(items, filename, keyword):
    for i, node in enumerate(items):
        if not node.is_list and node.value == keyword:
            return items[i + 1]
    raise ParseError(f"{filename}: missing {keyword}")


def _section(items, filename, keyword):
    """The sublist whose head atom is the keyword; returns its tail."""
    for node in items:
        if node.is_list and node.items and not node.items[0].is_list \
                and node.items[0].value == keyword:
            return node.items[1:]
    raise ParseError(f"{filename}: missing ({keyword} ...) section")


def parse_term(node: sexpr.Node, sig: FreeFormSignature,
               variables: Presheaf, filename: str) -> Term:
    items = _expect_list(node, filename, "term")
    head = _atom(items[0], filename)
    if head == "var":
        sort = str(_atom(items[1], filename))
        elt = _atom(items[2], filename)
        if not isinstance(elt, int) or not (0 <= elt < variables.size(sort)):
            raise _err(items[2], filename, "variable element out of range")
        return var(sig, sort, elt)
    if head == "app":
        name = str(_atom(items[1], filename))
        try:
            sym = sig.symbol(name)
        except StructureError as exc:
            raise _err(items[1], filename, str(exc))
        entries = _expect_list(items[2], filename, "binding list")
        rows = {sort: {} for sort in sig.index.sorts}
        for entry in entries:
            parts = _expect_list(entry, filename, "binding entry")
            sort = str(_atom(parts[0], filename))
            elt = _atom(parts[1], filename)
            rows[sort][elt] = parse_term(parts[2], sig, variables, filename)
        binding = []
        for sort in sig.index.sorts:
            want = sym.arity.size(sort)
            got = rows[sort]
            if sorted(got) != list(range(want)):
                raise _err(node, filename,
                           f"binding for {name} must cover 0..{want - 1} at {sort}")
            binding.append(tuple(got[i] for i in range(want)))
        tail = _expect_list(items[3], filename, "parameter element")
        sort = str(_atom(tail[0], filename))
        c = _atom(tail[1], filename)
        try:
            return app(sig, name, binding, sort, c, variables)
        except StructureError as exc:
            raise _err(node, filename, str(exc))
    raise _err(node, filename, f"unknown term head {head!r}")


def term_node(t: Term, index: IndexCategory) -> sexpr.Node:
    if t.is_var:
        return sexpr.lst("var", t.sort, t.var)
    entries = []
    for sort, row in zip(index.sorts, t.binding):
        for i, sub in enumerate(row):
            entries.append(sexpr.lst(sort, i, term_node(sub, index)))
    return sexpr.lst("app", t.symbol.name, sexpr.Node(items=entries),
                     sexpr.lst(t.sort, t.param))


def _parse_index(items, filename, ws: Workspace, line):
    name = str(_atom(items[1], filename))
    sorts = tuple(str(_atom(n, filename))
                  for n in _section(items, filename, "sorts"))
    arrows = []
    for node in _section(items, filename, "arrows"):
        m, src, tgt = (_atom(x, filename) for x in
                       _expect_list(node, filename, "arrow"))
        arrows.append((str(m), str(src), str(tgt)))
    idents = {}
    for node in _section(items, filename, "identities"):
        sort, m = (_atom(x, filename) for x in
                   _expect_list(node, filename, "identity entry"))
        idents[str(sort)] = str(m)
    comp = []
    for node in _section(items, filename, "compose"):
        f, g, h = (_atom(x, filename) for x in
                   _expect_list(node, filename, "compose entry"))
        comp.append((str(f), str(g), str(h)))
    try:
        idx = IndexCategory(name, sorts, tuple(arrows),
                            tuple(idents[s] for s in sorts), tuple(comp))
    except (StructureError, KeyError) as exc:
        raise ParseError(f"{filename}:{line}: invalid index {name!r}: {exc}")
    ws._declare("index", name, idx, ws.indexes, filename, line)


def _parse_object(items, filename, ws: Workspace, line):
    name = str(_atom(items[1], filename))
    index_name = str(_atom(items[2], filename))
    if index_name not in ws.indexes:
        raise ParseError(f"{filename}:{line}: unknown index {index_name!r}")
    idx = ws.indexes[index_name]
    sizes = {}
    for node in _section(items, filename, "elems"):
        sort, n = (_atom(x, filename) for x in
                   _expect_list(node, filename, "elems entry"))
        sizes[str(sort)] = n
    maps = {}
    for node in items:
        if node.is_list and node.items and not node.items[0].is_list \
                and node.items[0].value == "map":
            parts = node.items
            m = str(_atom(parts[1], filename))
            maps[m] = tuple(_atom(x, filename) for x in parts[2:])
    action = []
    for (m, src, tgt) in idx.morphisms:
        if m in idx.identities:
            action.append(tuple(range(sizes.get(src, 0))))
        elif m in maps:
            action.append(maps[m])
        else:
            raise ParseError(f"{filename}:{line}: object {name!r} lacks map for {m}")
    try:
        X = Presheaf(idx, tuple(sizes.get(s, 0) for s in idx.sorts),
                     tuple(action))
    except StructureError as exc:
        raise ParseError(f"{filename}:{line}: invalid object {name!r}: {exc}")
    ws._declare("object", name, X, ws.objects, filename, line)


def _parse_signature(items, filename, ws: Workspace, line):
    name = str(_atom(items[1], filename))
    index_name = str(_atom(items[2], filename))
    if index_name not in ws.indexes:
        raise ParseError(f"{filename}:{line}: unknown index {index_name!r}")
    symbols = []
    for node in items[3:]:
        parts = _expect_list(node, filename, "op declaration")
        if str(_atom(parts[0], filename)) != "op":
            raise _err(node, filename, "expected (op ...)")
        op_name = str(_atom(parts[1], filename))
        arity = str(_atom(_named(parts, filename, ":arity"), filename))
        param = str(_atom(_named(parts, filename, ":param"), filename))
        for ref in (arity, param):
            if ref not in ws.objects:
                raise ParseError(
                    f"{filename}:{line}: op {op_name!r} references unknown "
                    f"object {ref!r}")
        symbols.append(OperationSymbol(
            op_name, ws.objects[arity], ws.objects[param]))
    try:
        sig = FreeFormSignature(name, symbols)
        if sig.index is None:
            sig.index = ws.indexes[index_name]
    except StructureError as exc:
        raise ParseError(f"{filename}:{line}: invalid signature {name!r}: {exc}")
    ws._declare("signature", name, sig, ws.signatures, filename, line)


def _parse_equation(items, filename, ws: Workspace, line):
    name = str(_atom(items[1], filename))
    sig_name = str(_atom(items[2], filename))
    if sig_name not in ws.signatures:
        raise ParseError(f"{filename}:{line}: unknown signature {sig_name!r}")
    sig = ws.signatures[sig_name]
    arity_name = str(_atom(_named(items, filename, ":arity"), filename))
    param_name = str(_atom(_named(items, filename, ":param"), filename))
    for ref in (arity_name, param_name):
        if ref not in ws.objects:
            raise ParseError(
                f"{filename}:{line}: equation {name!r} references unknown "
                f"object {ref!r}")
    arity, param = ws.objects[arity_name], ws.objects[param_name]
    lhs_rows = {s: {} for s in sig.index.sorts}
    rhs_rows = {s: {} for s in sig.index.sorts}
    for node in items:
        if node.is_list and node.items and not node.items[0].is_list \
                and node.items[0].value == "pair":
            parts = node.items
            where = _expect_list(parts[1], filename, "parameter element")
            sort = str(_atom(where[0], filename))
            c = _atom(where[1], filename)
            try:
                lhs_rows[sort][c] = parse_term(parts[2], sig, arity, filename)
                rhs_rows[sort][c] = parse_term(parts[3], sig, arity, filename)
            except ParseError as exc:
                raise ParseError(f"in equation {name!r}: {exc}") from None
    def rows_of(table):
        rows = []
        for sort in sig.index.sorts:
            want = param.size(sort)
            got = table[sort]
            if sorted(got) != list(range(want)):
                raise ParseError(
                    f"{filename}:{line}: equation {name!r} must give one pair "
                    f"per parameter element at {sort}")
            rows.append(tuple(got[c] for c in range(want)))
        return tuple(rows)
    try:
        eq = Equation(name,
                      ParamTerm(sig, arity, param, rows_of(lhs_rows)),
                      ParamTerm(sig, arity, param, rows_of(rhs_rows)))
    except StructureError as exc:
        raise ParseError(f"{filename}:{line}: invalid equation {name!r}: {exc}")
    ws._declare("equation", name, eq, ws.equations, filename, line)


def _parse_presentation(items, filename, ws: Workspace, line):
    name = str(_atom(items[1], filename))
    sig_name = str(_atom(items[2], filename))
    if sig_name not in ws.signatures:
        raise ParseError(f"{filename}:{line}: unknown signature {sig_name!r}")
    eqs = []
    for node in items[3:]:
        parts = _expect_list(node, filename, "(equations ...)")
        if str(_atom(parts[0], filename)) != "equations":
            raise _err(node, filename, "expected (equations ...)")
        for ref in parts[1:]:
            eq_name = str(_atom(ref, filename))
            if eq_name not in ws.equations:
                raise ParseError(
                    f"{filename}:{line}: unknown equation {eq_name!r}")
            eqs.append(ws.equations[eq_name])
    try:
        P = Presentation(name, ws.signatures[sig_name], eqs)
    except StructureError as exc:
        raise ParseError(f"{filename}:{line}: invalid presentation {name!r}: {exc}")
    ws._declare("presentation", name, P, ws.presentations, filename, line)


def _parse_algebra(items, filename, ws: Workspace, line):
    name = str(_atom(items[1], filename))
    sig_name = str(_atom(items[2], filename))
    carrier_name = str(_atom(items[3], filename))
    if sig_name not in ws.signatures:
        raise ParseError(f"{filename}:{line}: unknown signature {sig_name!r}")
    if carrier_name not in ws.objects:
        raise ParseError(f"{filename}:{line}: unknown object {carrier_name!r}")
    sig = ws.signatures[sig_name]
    carrier = ws.objects[carrier_name]
    values = {}
    for node in items[4:]:
        parts = _expect_list(node, filename, "op table")
        if str(_atom(parts[0], filename)) != "op":
            raise _err(node, filename, "expected (op ...)")
        op_name = str(_atom(parts[1], filename))
        sym = sig.symbol(op_name)
        homs = hom_list(sym.arity, carrier)
        vals = []
        groups = parts[2:]
        if len(groups) != len(homs):
            raise ParseError(
                f"{filename}:{line}: op {op_name!r} needs {len(homs)} value "
                f"groups, got {len(groups)}")
        for group in groups:
            flat = [_atom(x, filename) for x in
                    _expect_list(group, filename, "value group")]
            comps = []
            k = 0
            for sort in sig.index.sorts:
                m = sym.parameter.size(sort)
                comps.append(tuple(flat[k:k + m]))
                k += m
            if k != len(flat):
                raise ParseError(
                    f"{filename}:{line}: op {op_name!r} value group has "
                    f"wrong length")
            try:
                vals.append(PresheafMorphism(sym.parameter, carrier,
                                             tuple(comps)))
            except StructureError as exc:
                raise ParseError(
                    f"{filename}:{line}: op {op_name!r}: {exc}")
        values[op_name] = vals
    try:
        A = Algebra(sig, carrier, values)
    except StructureError as exc:
        raise ParseError(f"{filename}:{line}: invalid algebra {name!r}: {exc}")
    ws._declare("algebra", name, A, ws.algebras, filename, line)


def _parse_relmonad(items, filename, ws: Workspace, line):
    name = str(_atom(items[1], filename))
    objects = [ws.objects[str(_atom(n, filename))]
               for n in _section(items, filename, "objects")]
    carriers = [ws.objects[str(_atom(n, filename))]
                for n in _section(items, filename, "carriers")]
    unit = [None] * len(objects)
    mult: dict[tuple[int, int], list] = {}
    idx = objects[0].index if objects else None
    for node in items:
        if not (node.is_list and node.items and not node.items[0].is_list):
            continue
        head = node.items[0].value
        if head == "e":
            i = _atom(node.items[1], filename)
            comps = []
            for group in node.items[2:]:
                parts = _expect_list(group, filename, "component")
                comps.append(tuple(_atom(x, filename) for x in parts[1:]))
            unit[i] = PresheafMorphism(objects[i], carriers[i], tuple(comps))
        elif head == "m":
            i = _atom(node.items[1], filename)
            j = _atom(node.items[2], filename)
            values = []
            for group in node.items[3:]:
                parts = _expect_list(group, filename, "m value")
                comps = []
                for sub in parts[1:]:
                    rows = _expect_list(sub, filename, "component")
                    comps.append(tuple(_atom(x, filename) for x in rows[1:]))
                values.append(PresheafMorphism(carriers[i], carriers[j],
                                               tuple(comps)))
            mult[(i, j)] = values
    try:
        M = RelativeMonad(name, objects, carriers, unit, mult)
    except StructureError as exc:
        raise ParseError(f"{filename}:{line}: invalid relmonad {name!r}: {exc}")
    ws._declare("relmonad", name, M, ws.relmonads, filename, line)


def _parse_pretheory(items, filename, ws: Workspace, line):
    name = str(_atom(items[1], filename))
    objects = [ws.objects[str(_atom(n, filename))]
               for n in _section(items, filename, "objects")]
    homs = {}
    compose = {}
    tau = {}
    identities = None
    for node in items:
        if not (node.is_list and node.items and not node.items[0].is_list):
            continue
        head = node.items[0].value
        parts = node.items
        if head == "homs":
            i, j = _atom(parts[1], filename), _atom(parts[2], filename)
            homs[(i, j)] = tuple(str(_atom(x, filename)) for x in parts[3:])
        elif head == "identities":
            identities = tuple(_atom(x, filename) for x in parts[1:])
        elif head == "compose":
            i = _atom(parts[1], filename)
            j = _atom(parts[2], filename)
            k = _atom(parts[3], filename)
            table = {}
            for entry in parts[4:]:
                f, g, h = (_atom(x, filename) for x in
                           _expect_list(entry, filename, "compose entry"))
                table[(f, g)] = h
            compose[(i, j, k)] = table
        elif head == "tau":
            i, j = _atom(parts[1], filename), _atom(parts[2], filename)
            tau[(i, j)] = tuple(_atom(x, filename) for x in parts[3:])
    try:
        T = Pretheory(name, objects, homs, compose, identities, tau)
    except StructureError as exc:
        raise ParseError(f"{filename}:{line}: invalid pretheory {name!r}: {exc}")
    ws._declare("pretheory", name, T, ws.pretheories, filename, line)


_PARSERS = {
    "index": _parse_index,
    "object": _parse_object,
    "signature": _parse_signature,
    "equation": _parse_equation,
    "presentation": _parse_presentation,
    "algebra": _parse_algebra,
    "relmonad": _parse_relmonad,
    "pretheory": _parse_pretheory,
}


def parse_file(path: str, ws: Workspace | None = None) -> Workspace:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_text(fh.read(), path, ws)


def parse_text(text: str, filename: str = "<text>",
               ws: Workspace | None = None) -> Workspace:
    if ws is None:
        ws = Workspace()
    try:
        forms = sexpr.parse(text)
    except sexpr.SexprError as exc:
        raise ParseError(f"{filename}: {exc}")
    for form in forms:
        items = _expect_list(form, filename, "declaration")
        if not items:
            raise _err(form, filename, "empty declaration")
        head = str(_atom(items[0], filename))
        parser = _PARSERS.get(head)
        if parser is None:
            raise _err(form, filename, f"unknown declaration kind {head!r}")
        parser(items, filename, ws, form.line)
    return ws


# ---------------------------------------------------------------------------
# Printing


def index_node(name: str, idx: IndexCategory) -> sexpr.Node:
    return sexpr.lst(
        "index", name,
        sexpr.Node(items=[sexpr.atom("sorts"),
                          *(sexpr.atom(s) for s in idx.sorts)]),
        sexpr.Node(items=[sexpr.atom("arrows"),
                          *(sexpr.lst(m, s, t) for m, s, t in idx.morphisms)]),
        sexpr.Node(items=[sexpr.atom("identities"),
                          *(sexpr.lst(s, m)
                            for s, m in zip(idx.sorts, idx.identities))]),
        sexpr.Node(items=[sexpr.atom("compose"),
                          *(sexpr.lst(f, g, h) for f, g, h in idx.composition)]),
    )


def object_node(name: str, X: Presheaf, index_name: str) -> sexpr.Node:
    parts = [sexpr.atom("object"), sexpr.atom(name), sexpr.atom(index_name),
             sexpr.Node(items=[sexpr.atom("elems"),
                               *(sexpr.lst(s, n)
                                 for s, n in zip(X.index.sorts, X.sizes))])]
    for (m, src, _), table in zip(X.index.morphisms, X.action):
        if m in X.index.identities:
            continue
        parts.append(sexpr.Node(items=[sexpr.atom("map"), sexpr.atom(m),
                                       *(sexpr.atom(v) for v in table)]))
    return sexpr.Node(items=parts)


def signature_node(name: str, sig: FreeFormSignature, index_name: str,
                   object_names: dict[Presheaf, str]) -> sexpr.Node:
    parts = [sexpr.atom("signature"), sexpr.atom(name), sexpr.atom(index_name)]
    for sym in sig.symbols:
        parts.append(sexpr.lst("op", sym.name,
                               ":arity", object_names[sym.arity],
                               ":param", object_names[sym.parameter]))
    return sexpr.Node(items=parts)


def equation_node(eq: Equation, sig_name: str,
                  object_names: dict[Presheaf, str]) -> sexpr.Node:
    idx = eq.parameter.index
    parts = [sexpr.atom("equation"), sexpr.atom(eq.name), sexpr.atom(sig_name),
             sexpr.atom(":arity"), sexpr.atom(object_names[eq.arity]),
             sexpr.atom(":param"), sexpr.atom(object_names[eq.parameter])]
    for sort in idx.sorts:
        for c in eq.parameter.elements(sort):
            parts.append(sexpr.lst(
                "pair", sexpr.lst(sort, c),
                term_node(eq.lhs(sort, c), idx),
                term_node(eq.rhs(sort, c), idx)))
    return sexpr.Node(items=parts)


def presentation_nodes(P: Presentation, *, index_name: str = "I",
                       name: str | None = None) -> list[sexpr.Node]:
    """Self-contained declaration list for a presentation."""
    name = name or P.name
    sig = P.signature
    idx = sig.index
    nodes = [index_node(index_name, idx)]
    object_names: dict[Presheaf, str] = {}
    counter = 0

    def register(X: Presheaf):
        nonlocal counter
        if X not in object_names:
            object_names[X] = f"ob{counter}"
            counter += 1

    for sym in sig.symbols:
        register(sym.arity)
        register(sym.parameter)
    for eq in P.equations:
        register(eq.arity)
        register(eq.parameter)
    for X, oname in object_names.items():
        nodes.append(object_node(oname, X, index_name))
    nodes.append(signature_node(f"{name}.sig", sig, index_name, object_names))
    for eq in P.equations:
        nodes.append(equation_node(eq, f"{name}.sig", object_names))
    nodes.append(sexpr.Node(items=[
        sexpr.atom("presentation"), sexpr.atom(name), sexpr.atom(f"{name}.sig"),
        sexpr.Node(items=[sexpr.atom("equations"),
                          *(sexpr.atom(eq.name) for eq in P.equations)])]))
    return nodes


def algebra_nodes(name: str, A: Algebra, *, presentation: Presentation,
                  carrier_name: str = "carrier",
                  sig_name: str | None = None) -> list[sexpr.Node]:
    sig_name = sig_name or f"{presentation.name}.sig"
    nodes = [object_node(carrier_name, A.carrier, "I")]
    parts = [sexpr.atom("algebra"), sexpr.atom(name), sexpr.atom(sig_name),
             sexpr.atom(carrier_name)]
    for sym in A.signature.symbols:
        groups = [sexpr.atom("op"), sexpr.atom(sym.name)]
        for g in A.values[sym.name]:
            flat = [v for comp in g.components for v in comp]
            groups.append(sexpr.Node(items=[sexpr.atom(v) for v in flat]))
        parts.append(sexpr.Node(items=groups))
    nodes.append(sexpr.Node(items=parts))
    return nodes


def relmonad_nodes(M: RelativeMonad, *, index_name: str = "I",
                   name: str | None = None) -> list[sexpr.Node]:
    name = name or M.name
    idx = M.objects[0].index
    nodes = [index_node(index_name, idx)]
    object_names: dict[Presheaf, str] = {}
    counter = 0
    for X in list(M.objects) + list(M.carriers):
        if X not in object_names:
            object_names[X] = f"ob{counter}"
            counter += 1
    for X, oname in object_names.items():
        nodes.append(object_node(oname, X, index_name))
    parts = [sexpr.atom("relmonad"), sexpr.atom(name),
             sexpr.Node(items=[sexpr.atom("objects"),
                               *(sexpr.atom(object_names[X]) for X in M.objects)]),
             sexpr.Node(items=[sexpr.atom("carriers"),
                               *(sexpr.atom(object_names[X]) for X in M.carriers)])]
    for i, e in enumerate(M.unit):
        groups = [sexpr.atom("e"), sexpr.atom(i)]
        for sort, comp in zip(idx.sorts, e.components):
            groups.append(sexpr.Node(items=[sexpr.atom(sort),
                                            *(sexpr.atom(v) for v in comp)]))
        parts.append(sexpr.Node(items=groups))
    for i in range(len(M.objects)):
        for j in range(len(M.objects)):
            groups = [sexpr.atom("m"), sexpr.atom(i), sexpr.atom(j)]
            for gi, g in enumerate(M.mult[(i, j)]):
                comps = [sexpr.atom(gi)]
                for sort, comp in zip(idx.sorts, g.components):
                    comps.append(sexpr.Node(items=[
                        sexpr.atom(sort), *(sexpr.atom(v) for v in comp)]))
                groups.append(sexpr.Node(items=comps))
            parts.append(sexpr.Node(items=groups))
    nodes.append(sexpr.Node(items=parts))
    return nodes


def pretheory_nodes(T: Pretheory, *, index_name: str = "I",
                    name: str | None = None) -> list[sexpr.Node]:
    name = name or T.name
    idx = T.objects[0].index
    nodes = [index_node(index_name, idx)]
    object_names: dict[Presheaf, str] = {}
    counter = 0
    for X in T.objects:
        if X not in object_names:
            object_names[X] = f"ob{counter}"
            counter += 1
    for X, oname in object_names.items():
        nodes.append(object_node(oname, X, index_name))
    parts = [sexpr.atom("pretheory"), sexpr.atom(name),
             sexpr.Node(items=[sexpr.atom("objects"),
                               *(sexpr.atom(object_names[X]) for X in T.objects)])]
    n = len(T.objects)
    for i in range(n):
        for j in range(n):
            parts.append(sexpr.Node(items=[
                sexpr.atom("homs"), sexpr.atom(i), sexpr.atom(j),
                *(sexpr.atom(t) for t in T.homs[(i, j)])]))
    parts.append(sexpr.Node(items=[sexpr.atom("identities"),
                                   *(sexpr.atom(t) for t in T.identities)]))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                entries = [sexpr.atom("compose"), sexpr.atom(i), sexpr.atom(j),
                           sexpr.atom(k)]
                table = T.compose[(i, j, k)]
                for f in range(T.hom_count(i, j)):
                    for g in range(T.hom_count(j, k)):
                        entries.append(sexpr.lst(f, g, table[(f, g)]))
                parts.append(sexpr.Node(items=entries))
    for i in range(n):
        for j in range(n):
            parts.append(sexpr.Node(items=[
                sexpr.atom("tau"), sexpr.atom(i), sexpr.atom(j),
                *(sexpr.atom(t) for t in T.tau[(i, j)])]))
    nodes.append(sexpr.Node(items=parts))
    return nodes


def render(nodes: list[sexpr.Node]) -> str:
    return "\n".join(sexpr.write(n) for n in nodes) + "\n"
