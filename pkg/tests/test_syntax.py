import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from varietal.base import (
    StructureError,
    finite_set,
    hom_set,
    identity_morphism,
    parallel_pair_index,
    terminal,
    trivial_index,
)
from varietal.syntax import (
    Assignment,
    FreeFormSignature,
    OperationSymbol,
    ParamTerm,
    act,
    app,
    compose_assignments,
    enumerate_terms,
    from_traditional,
    precompose,
    standardize,
    substitute,
    var,
    var_assignment,
)


@pytest.fixture(scope="module")
def sl_sig():
    I = trivial_index()
    return FreeFormSignature(
        "sl", [OperationSymbol("join", finite_set(2, I), terminal(I))])


def terms_strategy(sig, J, max_depth=3):
    leaf = st.integers(0, J.size("*") - 1).map(lambda i: var(sig, "*", i))

    def extend(children):
        return st.tuples(children, children).map(
            lambda ab: app(sig, "join", ((ab[0], ab[1]),), "*", 0, J))

    return st.recursive(leaf, extend, max_leaves=2 ** max_depth)


def test_standardize_single_symbol(sl_sig):
    trad, ins = standardize(sl_sig)
    assert len(trad.arities) == 1
    assert trad.parameters[0].sizes == (1,)
    assert ins["join"].components == identity_morphism(terminal(trivial_index())).components


def test_standardize_global_state_shapes(global_state):
    trad, _ = standardize(global_state.signature)
    by_arity = {a.sizes: p.sizes for a, p in zip(trad.arities, trad.parameters)}
    assert by_arity[(2,)] == (1,)   # lookup bundles into parameter L
    assert by_arity[(1,)] == (2,)   # update bundles into parameter L x V


def test_standardize_merges_equal_arities():
    I = trivial_index()
    two = finite_set(2, I)
    sig = FreeFormSignature("two-ops", [
        OperationSymbol("f", two, finite_set(2, I)),
        OperationSymbol("g", two, finite_set(3, I)),
    ])
    trad, ins = standardize(sig)
    assert len(trad.arities) == 1
    assert trad.parameters[0].sizes == (5,)
    # insertions are jointly surjective and disjoint
    assert sorted(ins["f"].components[0]) + sorted(ins["g"].components[0]) == [0, 1, 2, 3, 4]


def test_from_traditional_shapes(sl_sig):
    trad, _ = standardize(sl_sig)
    back = from_traditional(trad)
    assert len(back.symbols) == 1
    assert back.symbols[0].arity.sizes == (2,)
    assert back.symbols[0].parameter.sizes == (1,)


def test_from_traditional_empty_parameters():
    I = trivial_index()
    from varietal.syntax import TraditionalSignature
    trad = TraditionalSignature((finite_set(2, I),), (finite_set(0, I),))
    sig = from_traditional(trad)
    # no parameter elements means no applicable operations: only variables
    uni = enumerate_terms(sig, finite_set(2, I), 3)
    assert uni.total == 2


def test_substitute_unit_laws(sl_sig):
    I = trivial_index()
    two = finite_set(2, I)
    x, y = var(sl_sig, "*", 0), var(sl_sig, "*", 1)
    t = app(sl_sig, "join", ((x, y),), "*", 0, two)
    assert substitute(sl_sig, t, var_assignment(sl_sig, two)) is t
    phi = Assignment(sl_sig, two, two, ((t, x),))
    assert substitute(sl_sig, x, phi) is t


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_substitute_associativity(sl_sig, data):
    I = trivial_index()
    two = finite_set(2, I)
    t = data.draw(terms_strategy(sl_sig, two))
    phi = Assignment(sl_sig, two, two, (
        (data.draw(terms_strategy(sl_sig, two)),
         data.draw(terms_strategy(sl_sig, two))),))
    psi = Assignment(sl_sig, two, two, (
        (data.draw(terms_strategy(sl_sig, two)),
         data.draw(terms_strategy(sl_sig, two))),))
    left = substitute(sl_sig, substitute(sl_sig, t, phi), psi)
    right = substitute(sl_sig, t, compose_assignments(sl_sig, phi, psi))
    assert left is right


def test_act_identity_and_trivial_index(sl_sig):
    I = trivial_index()
    two = finite_set(2, I)
    x = var(sl_sig, "*", 0)
    t = app(sl_sig, "join", ((x, x),), "*", 0, two)
    assert act(sl_sig, two, "id", t) is t


def test_act_on_graph_variables():
    B = parallel_pair_index()
    e1 = __import__("varietal.base", fromlist=["Presheaf"]).Presheaf(
        B, (2, 1), ((0, 1), (0,), (0,), (1,)))
    sig = FreeFormSignature("g", [OperationSymbol("c", e1, terminal(B))])
    ve = var(sig, "e", 0)
    assert act(sig, e1, "s", ve) is var(sig, "v", 0)
    assert act(sig, e1, "t", ve) is var(sig, "v", 1)


def test_act_functoriality_on_terms():
    B = parallel_pair_index()
    from varietal.base import Presheaf
    e1 = Presheaf(B, (2, 1), ((0, 1), (0,), (0,), (1,)))
    one = terminal(B)
    sig = FreeFormSignature("g", [OperationSymbol("nu", e1, one)])
    t = app(sig, "nu", ((var(sig, "v", 0), var(sig, "v", 1)),
                        (var(sig, "e", 0),)), "e", 0, e1)
    for m in ("s", "t"):
        assert act(sig, e1, m, t).sort == "v"


def test_enumerate_terms_depths(sl_sig):
    I = trivial_index()
    two = finite_set(2, I)
    u0 = enumerate_terms(sl_sig, two, 0)
    assert u0.total == 2
    u1 = enumerate_terms(sl_sig, two, 1)
    assert u1.total == 6
    u2 = enumerate_terms(sl_sig, two, 2)
    assert u2.total == 38
    assert u0.total < u1.total < u2.total


def test_enumerate_terms_closed_under_act():
    B = parallel_pair_index()
    from varietal.base import Presheaf
    e1 = Presheaf(B, (2, 1), ((0, 1), (0,), (0,), (1,)))
    sig = FreeFormSignature("g", [OperationSymbol("nu", e1, e1)])
    uni = enumerate_terms(sig, e1, 2)
    for sort in ("v", "e"):
        for t in uni.terms(sort):
            for m in ("s", "t"):
                if B.src(m) == sort:
                    assert uni.act(m, t) in uni


def test_binding_validation_rejects_nonnatural():
    B = parallel_pair_index()
    from varietal.base import Presheaf
    e1 = Presheaf(B, (2, 1), ((0, 1), (0,), (0,), (1,)))
    sig = FreeFormSignature("g", [OperationSymbol("nu", e1, terminal(B))])
    with pytest.raises(StructureError):
        # vertex components swapped: act(s, e0) is v0, not v1
        app(sig, "nu", ((var(sig, "v", 1), var(sig, "v", 0)),
                        (var(sig, "e", 0),)), "e", 0, e1)


def test_precompose_identity_and_column(sl_sig):
    I = trivial_index()
    two = finite_set(2, I)
    x, y = var(sl_sig, "*", 0), var(sl_sig, "*", 1)
    pt = ParamTerm(sl_sig, two, finite_set(2, I),
                   ((app(sl_sig, "join", ((x, y),), "*", 0, two),
                     app(sl_sig, "join", ((y, x),), "*", 0, two)),))
    assert precompose(pt, identity_morphism(pt.parameter)).rows == pt.rows
    for point in hom_set(terminal(I), pt.parameter):
        col = precompose(pt, point)
        assert col.rows == ((pt("*", point("*", 0)),),)


def test_depth_of_nullary_application():
    I = trivial_index()
    sig = FreeFormSignature(
        "pointed", [OperationSymbol("e", finite_set(0, I), terminal(I))])
    t = app(sig, "e", ((),), "*", 0, finite_set(1, I))
    assert t.depth == 1
