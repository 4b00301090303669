import random

import pytest

from varietal.base import (
    finite_set,
    hom_set,
    terminal,
    trivial_index,
)
from varietal.syntax import FreeFormSignature, OperationSymbol
from varietal.algebra import enumerate_algebras, is_homomorphism, satisfies, product_algebra
from varietal.presentation import palg_satisfies, free_algebra
from varietal.birkhoff import (
    BirkhoffWindow,
    GaloisScale,
    ScaleError,
    restrict_to_generators,
)
from varietal.catalog import max_semilattice_algebra, semilattice_presentation

I = trivial_index()
ONE = terminal(I)
TWO = finite_set(2, I)


@pytest.fixture(scope="module")
def binop_window():
    sig = FreeFormSignature("binop", [OperationSymbol("f", TWO, ONE)])
    return BirkhoffWindow(sig, GaloisScale(2, 2, (ONE,)))


@pytest.fixture(scope="module")
def sl_window(semilattice):
    return BirkhoffWindow(semilattice.signature,
                          GaloisScale(2, 2, (ONE,), (TWO,)))


def keys(algebras):
    return {A.canonical_key() for A in algebras}


def names(equations):
    return {eq.name for eq in equations}


def test_sat_star_empty_is_everything(binop_window):
    assert len(binop_window.sat_star([])) == len(binop_window.algebras())


def test_sat_star_semilattice_axioms(semilattice, sl_window):
    got = sl_window.sat_star(semilattice.equations)
    direct = [A for A in sl_window.algebras() if palg_satisfies(A, semilattice)]
    assert keys(got) == keys(direct)


def test_sat_star_antitone(binop_window):
    window = binop_window.equation_window()
    small, large = window[:4], window[:9]
    assert keys(binop_window.sat_star(large)) <= keys(binop_window.sat_star(small))


def test_sat_lower_empty_set_is_whole_window(binop_window):
    assert names(binop_window.sat_lower_g([])) == names(
        binop_window.equation_window())


def test_sat_lower_contains_commutativity_for_chain(semilattice, sl_window):
    chain = max_semilattice_algebra(semilattice, 2)
    theory = sl_window.sat_lower_g([chain])
    # find the window pair naming join(x,y) and join(y,x)
    pts = sl_window.param_terms(0, 0)
    xy = [i for i, pt in enumerate(pts)
          if not pt("*", 0).is_var and [t.var for t in pt("*", 0).binding[0]] == [0, 1]]
    yx = [i for i, pt in enumerate(pts)
          if not pt("*", 0).is_var and [t.var for t in pt("*", 0).binding[0]] == [1, 0]]
    target = f"w[0,0,{min(xy[0], yx[0])},{max(xy[0], yx[0])}]"
    assert target in names(theory)


def test_sat_lower_antitone(binop_window):
    algebras = binop_window.algebras()
    small, large = algebras[:3], algebras[:9]
    assert names(binop_window.sat_lower_g(large)) <= names(
        binop_window.sat_lower_g(small))


def test_restrict_to_generators_contains_identity_column(semilattice):
    comm = [e for e in semilattice.equations if e.name == "comm"][0]
    out = restrict_to_generators([comm], [comm.parameter])
    assert any(eq.lhs.rows == comm.lhs.rows and eq.rhs.rows == comm.rhs.rows
               for eq in out)


def test_restrict_to_generators_point_count(semilattice, global_state):
    for P in (semilattice, global_state):
        out = restrict_to_generators(list(P.equations), [ONE])
        expected = sum(eq.parameter.total_size for eq in P.equations)
        assert len(out) == expected


def test_restriction_preserves_satisfaction(semilattice, sl_window):
    # the generator family reaches every point, so satisfaction transfers
    for A in sl_window.algebras():
        for eq in semilattice.equations:
            whole = satisfies(A, eq)
            parts = all(
                satisfies(A, r)
                for r in restrict_to_generators([eq], [ONE]))
            assert whole == parts


def test_variety_generated_by_chain(semilattice, sl_window):
    chain = max_semilattice_algebra(semilattice, 2)
    got = sl_window.variety_generated([chain])
    direct = [A for A in sl_window.algebras() if palg_satisfies(A, semilattice)]
    assert keys(got) == keys(direct)


def test_variety_generated_is_monotone_and_idempotent(binop_window):
    algebras = binop_window.algebras()[:5]
    closure = binop_window.variety_generated(algebras)
    assert keys(algebras) <= keys(closure)
    assert keys(binop_window.variety_generated(closure)) == keys(closure)


def test_galois_laws_vacuous(binop_window):
    ok, lines = binop_window.check_galois_laws([], [])
    assert ok and len(lines) == 5


def test_galois_laws_random_seeds(binop_window):
    rng = random.Random(2024)
    window = binop_window.equation_window()
    algebras = binop_window.algebras()
    for _ in range(25):
        E = rng.sample(window, rng.randint(0, 6))
        A = rng.sample(algebras, rng.randint(0, 6))
        ok, lines = binop_window.check_galois_laws(E, A)
        assert ok, lines


def test_scale_mismatch_rejected(binop_window, semilattice, sl_window):
    big = max_semilattice_algebra(semilattice, 3)
    with pytest.raises(ScaleError):
        sl_window.check_galois_laws([], [big])
    foreign = sl_window.equation_window()[0]
    with pytest.raises(ScaleError):
        binop_window.check_galois_laws([foreign], [])


def test_sat_star_closed_under_subobjects_and_products(binop_window):
    window = binop_window.equation_window()
    E = window[:3]
    variety = binop_window.sat_star(E)
    vkeys = keys(variety)
    for A in binop_window.algebras():
        for B in variety:
            for f in hom_set(A.carrier, B.carrier):
                if f.is_injective() and is_homomorphism(f, A, B):
                    assert A.canonical_key() in vkeys
    for A in variety:
        for B in variety:
            P = product_algebra(A, B)
            if P.carrier.sizes[0] <= binop_window.scale.size:
                assert P.canonical_key() in vkeys


def test_variety_of_free_algebras_equals_presented_variety(semilattice):
    window = BirkhoffWindow(
        semilattice.signature,
        GaloisScale(2, 2, (ONE,), (TWO,)))
    frees = []
    for k in (1, 2, 3):
        Q = free_algebra(semilattice, finite_set(k, I), 3)
        assert Q.saturated
        frees.append(Q.as_algebra())
    generated = window.variety_generated(frees)
    direct = window.sat_star(semilattice.equations)
    assert keys(generated) == keys(direct)


def test_kernel_of_interpretation_table_matches_sat_lower(semilattice, sl_window):
    # the window theory of a single algebra is the kernel of its
    # interpretation rows: same pairs either way
    from varietal.algebra import interpretation_table
    chain = max_semilattice_algebra(semilattice, 2)
    table = interpretation_table(chain, TWO, sl_window.scale.depth)
    pts = sl_window.param_terms(0, 0)
    kernel = {
        f"w[0,0,{i},{j}]"
        for i in range(len(pts))
        for j in range(i + 1, len(pts))
        if table[pts[i]("*", 0)] == table[pts[j]("*", 0)]}
    assert kernel == names(sl_window.sat_lower_g([chain]))
