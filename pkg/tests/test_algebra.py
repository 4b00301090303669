import itertools

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from varietal.base import (
    StructureError,
    element_family,
    finite_set,
    hom_list,
    hom_set,
    terminal,
    trivial_index,
)
from varietal.syntax import (
    Assignment,
    Equation,
    FreeFormSignature,
    OperationSymbol,
    ParamTerm,
    app,
    enumerate_terms,
    precompose_equation,
    substitute,
    var,
    var_assignment,
)
from varietal.algebra import (
    Algebra,
    ResourceCeiling,
    TruncatedTermAlgebra,
    enumerate_algebras,
    evaluate,
    interpretation_table,
    is_homomorphism,
    homomorphisms,
    product_algebra,
    satisfies,
)
from varietal.catalog import max_semilattice_algebra, semilattice_presentation


I = trivial_index()
TWO = finite_set(2, I)
ONE = terminal(I)


def binop_algebra(sig, table):
    """Algebra on {0,1} for a single binary symbol given by a 2x2 table."""
    carrier = TWO
    homs = hom_list(TWO, carrier)
    points = hom_list(ONE, carrier)
    name = sig.symbols[0].name
    vals = [points[table[h.components[0][0]][h.components[0][1]]] for h in homs]
    return Algebra(sig, carrier, {name: vals})


@pytest.fixture(scope="module")
def sl():
    return semilattice_presentation()


@pytest.fixture(scope="module")
def chain2(sl):
    return max_semilattice_algebra(sl, 2)


def test_evaluate_variable(sl, chain2):
    phi = hom_list(TWO, chain2.carrier)[1]  # x -> 0, y -> 1
    assert evaluate(chain2, var(sl.signature, "*", 0), phi) == 0
    assert evaluate(chain2, var(sl.signature, "*", 1), phi) == 1


def test_evaluate_idempotent_join(sl, chain2):
    x = var(sl.signature, "*", 0)
    t = app(sl.signature, "join", ((x, x),), "*", 0, TWO)
    for phi in hom_list(TWO, chain2.carrier):
        assert evaluate(chain2, t, phi) == phi("*", 0)


def test_evaluate_on_truncated_free_algebra(sl):
    # against the variable assignment, a term within the bound evaluates to
    # itself: the free truncation with unit inputs is the identity
    uni = enumerate_terms(sl.signature, TWO, 3)
    free = TruncatedTermAlgebra(uni)
    phi = var_assignment(sl.signature, TWO)
    for sort in ("*",):
        for t in uni.terms(sort):
            assert evaluate(free, t, phi) is t


def test_truncated_algebra_rejects_overflow(sl):
    uni = enumerate_terms(sl.signature, TWO, 1)
    free = TruncatedTermAlgebra(uni)
    deep = uni.terms("*")[-1]
    with pytest.raises(ResourceCeiling):
        free.apply("join", ((deep, deep),), "*", 0)


def test_satisfies_reflexive_equation(sl, chain2):
    x, y = (var(sl.signature, "*", i) for i in range(2))
    t = app(sl.signature, "join", ((x, y),), "*", 0, TWO)
    eq = Equation("refl", ParamTerm(sl.signature, TWO, ONE, ((t,),)),
                  ParamTerm(sl.signature, TWO, ONE, ((t,),)))
    assert satisfies(chain2, eq)


def test_satisfies_commutativity_on_chain(sl, chain2):
    comm = [e for e in sl.equations if e.name == "comm"][0]
    assert satisfies(chain2, comm)


def test_noncommutative_table_fails_with_witness(sl):
    comm = [e for e in sl.equations if e.name == "comm"][0]
    A = binop_algebra(sl.signature, [[0, 0], [1, 0]])
    witness = satisfies(A, comm, witness=True)
    assert witness is not None
    phi, sort, c = witness
    assert phi.components == ((0, 1),)


def test_identity_and_composite_homomorphisms(sl, chain2):
    from varietal.base import identity_morphism
    assert is_homomorphism(identity_morphism(chain2.carrier), chain2, chain2)
    for f in homomorphisms(chain2, chain2):
        for g in homomorphisms(chain2, chain2):
            assert is_homomorphism(f.then(g), chain2, chain2)


def test_constant_map_to_non_idempotent_element_fails(sl, chain2):
    from varietal.base import PresheafMorphism
    # target: a table where 1 is not idempotent
    B = binop_algebra(sl.signature, [[0, 0], [0, 0]])
    const1 = PresheafMorphism(chain2.carrier, B.carrier, ((1, 1),))
    assert not is_homomorphism(const1, chain2, B)


def test_enumerate_semilattices_small(sl):
    # the empty carrier carries the vacuous structure: every operation has an
    # empty input set, so sizes <= 1 give the empty and the singleton model
    small = enumerate_algebras(sl, 1)
    assert [A.carrier.sizes[0] for A in small] == [0, 1]
    models = enumerate_algebras(sl, 2)
    # direct oracle: idempotent commutative associative tables on {0,1}
    count = 0
    for cells in itertools.product(range(2), repeat=4):
        tab = {(0, 0): cells[0], (0, 1): cells[1],
               (1, 0): cells[2], (1, 1): cells[3]}
        if tab[(0, 0)] != 0 or tab[(1, 1)] != 1:
            continue
        if tab[(0, 1)] != tab[(1, 0)]:
            continue
        if not all(tab[(tab[(a, b)], c)] == tab[(a, tab[(b, c)])]
                   for a in range(2) for b in range(2) for c in range(2)):
            continue
        count += 1
    by_size = {}
    for A in models:
        by_size.setdefault(A.carrier.sizes[0], []).append(A)
    assert len(by_size.get(2, [])) == count
    assert len(models) == 1 + 1 + count  # empty and singleton carriers


def test_enumerate_empty_signature_counts():
    sig = FreeFormSignature("none", [])
    sig.index = I
    algs = enumerate_algebras(sig, 3)
    assert len(algs) == 4  # one per carrier size 0..3


def test_resource_ceiling_raises(sl):
    with pytest.raises(ResourceCeiling):
        enumerate_algebras(sl, 3, ceiling=10)


def test_interpretation_table_rows(sl, chain2):
    table = interpretation_table(chain2, TWO, 1)
    homs = chain2.homs_from(TWO)
    x, y = (var(sl.signature, "*", i) for i in range(2))
    assert table[x] == tuple(phi("*", 0) for phi in homs)
    assert table[y] == tuple(phi("*", 1) for phi in homs)
    txy = app(sl.signature, "join", ((x, y),), "*", 0, TWO)
    tyx = app(sl.signature, "join", ((y, x),), "*", 0, TWO)
    # equal rows amount to satisfaction of the equation with terminal parameter
    assert table[txy] == table[tyx]
    eq = Equation("c", ParamTerm(sl.signature, TWO, ONE, ((txy,),)),
                  ParamTerm(sl.signature, TWO, ONE, ((tyx,),)))
    assert satisfies(chain2, eq)


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_substitution_lemma(sl, chain2, data):
    sig = sl.signature
    x, y = (var(sig, "*", i) for i in range(2))
    j = lambda a, b: app(sig, "join", ((a, b),), "*", 0, TWO)
    pool = [x, y, j(x, y), j(y, x), j(x, j(x, y)), j(j(y, y), x)]
    t = data.draw(st.sampled_from(pool))
    img = (data.draw(st.sampled_from(pool)), data.draw(st.sampled_from(pool)))
    phi = Assignment(sig, TWO, TWO, (img,))
    psi = data.draw(st.sampled_from(hom_list(TWO, chain2.carrier)))
    lhs = evaluate(chain2, substitute(sig, t, phi), psi)
    from varietal.base import PresheafMorphism
    comps = tuple(
        tuple(evaluate(chain2, phi(sort, i), psi)
              for i in range(TWO.size(sort)))
        for sort in ("*",))
    rhs = evaluate(chain2, t, PresheafMorphism(TWO, chain2.carrier, comps))
    assert lhs == rhs


def test_jointly_epi_reduction(sl):
    # satisfaction is equivalent to satisfaction of all element restrictions
    comm = [e for e in sl.equations if e.name == "comm"][0]
    fam = element_family(comm.parameter)
    for table in ([[0, 1], [1, 1]], [[0, 0], [1, 0]]):
        A = binop_algebra(sl.signature, table)
        whole = satisfies(A, comm)
        parts = all(
            satisfies(A, precompose_equation(comm, x)) for x in fam)
        assert whole == parts


def test_mono_homomorphism_reflects_satisfaction(sl):
    comm = [e for e in sl.equations if e.name == "comm"][0]
    big = max_semilattice_algebra(sl, 3)
    for A in enumerate_algebras(sl.signature, 2):
        for f in hom_set(A.carrier, big.carrier):
            if f.is_injective() and is_homomorphism(f, A, big):
                assert satisfies(A, comm)


def test_product_algebra_satisfies_equations(sl, chain2):
    P = product_algebra(chain2, chain2)
    for eq in sl.equations:
        assert satisfies(P, eq)
