import itertools

import pytest

from varietal.base import (
    PresheafMorphism,
    finite_set,
    hom_list,
    hom_set,
    terminal,
    trivial_index,
)
from varietal.syntax import (
    Equation,
    FreeFormSignature,
    OperationSymbol,
    ParamTerm,
    app,
    enumerate_terms,
    from_traditional,
    standardize,
    var,
)
from varietal.algebra import Algebra, enumerate_algebras, satisfies
from varietal.presentation import (
    DISTINCT,
    EQUAL,
    UNKNOWN,
    Presentation,
    bundle_equations,
    free_algebra,
    kronecker_equation,
    palg_satisfies,
    quotient_map_equal,
    sum_presentations,
    tensor,
)
from varietal.catalog import (
    global_state_presentation,
    max_semilattice_algebra,
    monoid_presentation,
    semilattice_presentation,
    state_transformer_algebra,
)

I = trivial_index()
ONE = terminal(I)
TWO = finite_set(2, I)


def empty_presentation():
    sig = FreeFormSignature("nothing", [])
    sig.index = I
    return Presentation("nothing", sig, [])


def model_counts(P, size):
    counts = {}
    for A in enumerate_algebras(P, size):
        counts[A.carrier.sizes[0]] = counts.get(A.carrier.sizes[0], 0) + 1
    return counts


# -- satisfaction -------------------------------------------------------------


def test_empty_equations_always_satisfied(semilattice):
    P = Presentation("bare", semilattice.signature, [])
    for A in enumerate_algebras(semilattice.signature, 2):
        assert palg_satisfies(A, P)


def test_chain_is_semilattice_model(semilattice):
    assert palg_satisfies(max_semilattice_algebra(semilattice, 2), semilattice)


def test_saturated_quotient_models_its_presentation(semilattice):
    Q = free_algebra(semilattice, finite_set(3, I), 3)
    assert Q.saturated
    assert palg_satisfies(Q.as_algebra(), semilattice)


# -- sum ----------------------------------------------------------------------


def test_sum_with_empty_presentation(semilattice):
    S = sum_presentations(semilattice, empty_presentation())
    assert len(S.signature.symbols) == len(semilattice.signature.symbols)
    assert model_counts(S, 2) == model_counts(semilattice, 2)


def test_sum_symbol_count(semilattice, monoid):
    S = sum_presentations(semilattice, monoid)
    assert len(S.signature.symbols) == 3
    assert len(S.equations) == 6


def test_sum_models_are_pairs(semilattice, monoid):
    S = sum_presentations(semilattice, monoid)
    joint = model_counts(S, 2)
    left = model_counts(semilattice, 2)
    right = model_counts(monoid, 2)
    for size in range(3):
        assert joint.get(size, 0) == left.get(size, 0) * right.get(size, 0)


# -- Kronecker products and tensor ---------------------------------------------


def test_kronecker_nullary_pair():
    zero = finite_set(0, I)
    sig = FreeFormSignature("pts", [
        OperationSymbol("a", zero, ONE), OperationSymbol("b", zero, ONE)])
    eq = kronecker_equation(sig, "a", "b")
    assert eq.arity.sizes == (0,)
    # both sides collapse to the bare constants: the equation merges them
    assert eq.lhs("*", 0).symbol.name == "b"
    assert eq.rhs("*", 0).symbol.name == "a"
    assert eq.lhs("*", 0).binding == ((),)


def test_kronecker_binary_is_middle_four(monoid):
    S = sum_presentations(monoid, monoid)
    eq = kronecker_equation(S.signature, "mul.1", "mul.2")
    assert eq.arity.sizes == (4,)
    lhs = eq.lhs("*", 0)
    assert lhs.symbol.name == "mul.2"
    inner = lhs.binding[0][0]
    assert inner.symbol.name == "mul.1"
    # variable grid: inner terms bind pairs (j1, j2) with j2 fixed
    assert [t.var for t in inner.binding[0]] == [0, 2]


def test_kronecker_arity_sizes_multiply(semilattice, monoid):
    S = sum_presentations(semilattice, monoid)
    eq = kronecker_equation(S.signature, "join.1", "mul.2")
    assert eq.arity.sizes == (4,)
    eq2 = kronecker_equation(S.signature, "join.1", "unit.2")
    assert eq2.arity.sizes == (0,)


def test_tensor_equation_count(semilattice, monoid):
    T = tensor(semilattice, monoid)
    assert len(T.equations) == 3 + 3 + 1 * 2


def test_tensor_with_empty_presentation(semilattice):
    T = tensor(semilattice, empty_presentation())
    assert model_counts(T, 2) == model_counts(semilattice, 2)


def commutative_monoid_count(n):
    """Direct table enumeration of commutative monoids on {0..n-1}."""
    count = 0
    for unit in range(n):
        cells = [(a, b) for a in range(n) for b in range(n) if a <= b]
        free = [c for c in cells if unit not in c]
        for choice in itertools.product(range(n), repeat=len(free)):
            tab = {}
            for a in range(n):
                tab[(unit, a)] = a
                tab[(a, unit)] = a
            for (a, b), v in zip(free, choice):
                tab[(a, b)] = v
                tab[(b, a)] = v
            if all(tab[(tab[(a, b)], c)] == tab[(a, tab[(b, c)])]
                   for a in range(n) for b in range(n) for c in range(n)):
                count += 1
    return count


def test_tensor_monoid_monoid_is_commutative_monoid_small(monoid):
    T = tensor(monoid, monoid)
    models = enumerate_algebras(T, 2)
    expected = sum(commutative_monoid_count(n) for n in range(3))
    assert len(models) == expected
    # Eckmann-Hilton collapse: both operations coincide, both units coincide
    for A in models:
        assert A.values["mul.1"] == A.values["mul.2"]
        assert A.values["unit.1"] == A.values["unit.2"]


# -- free algebras ---------------------------------------------------------------


def test_free_algebra_no_equations_is_discrete(semilattice):
    P = Presentation("bare", semilattice.signature, [])
    for k, d in [(1, 2), (2, 2)]:
        Q = free_algebra(P, finite_set(k, I), d)
        uni = enumerate_terms(semilattice.signature, finite_set(k, I), d)
        assert Q.class_count() == uni.total
        assert not Q.saturated


def test_free_semilattices_subset_oracle(semilattice):
    for k, d, expect in [(1, 3, 1), (2, 3, 3), (3, 3, 7)]:
        Q = free_algebra(semilattice, finite_set(k, I), d)
        assert Q.class_count() == expect
        assert Q.saturated
        # explicit bijection onto nonempty subsets under union
        subsets = sorted(
            frozenset(s)
            for r in range(1, k + 1)
            for s in itertools.combinations(range(k), r))
        oracle_carrier = finite_set(len(subsets), I)
        pts = hom_list(ONE, oracle_carrier)
        joins = []
        for h in hom_list(TWO, oracle_carrier):
            a, b = h.components[0]
            joins.append(pts[subsets.index(frozenset(subsets[a] | subsets[b]))])
        oracle = Algebra(semilattice.signature, oracle_carrier,
                         {"join": joins})
        gen = PresheafMorphism(
            finite_set(k, I), oracle_carrier,
            (tuple(subsets.index(frozenset([i])) for i in range(k)),))
        images = {
            Q.evaluate_class(oracle, gen, "*", i)
            for i in range(Q.class_count())}
        assert len(images) == Q.class_count() == len(subsets)


def test_free_algebra_audit_log(semilattice):
    Q = free_algebra(semilattice, TWO, 2)
    lines = Q.audit_lines()
    assert lines
    eq_names = {e.name for e in semilattice.equations}
    for line in lines:
        assert line.startswith("merge ")
        assert (" by cong" in line or " by act" in line
                or any(f" by {n} " in line for n in eq_names))


def test_free_algebra_exactness(semilattice):
    # universal property at small scale: unique extension of generator maps
    X = TWO
    Q = free_algebra(semilattice, X, 3)
    FA = Q.as_algebra()
    unit = Q.unit()
    from varietal.algebra import homomorphisms
    for A in enumerate_algebras(semilattice, 3):
        for phi in hom_set(X, A.carrier):
            extensions = [
                f for f in homomorphisms(FA, A)
                if unit.then(f).components == phi.components]
            assert len(extensions) == 1


def test_global_state_free_algebra_bijection(global_state):
    for k, expect in [(1, 4), (2, 16)]:
        Q = free_algebra(global_state, finite_set(k, I), 3)
        assert Q.saturated and Q.class_count() == expect
        A = state_transformer_algebra(global_state, k)
        base = k * 2
        gen = PresheafMorphism(
            finite_set(k, I), A.carrier,
            (tuple(sum((x * 2 + s) * base ** s for s in range(2))
                   for x in range(k)),))
        images = {Q.evaluate_class(A, gen, "*", i)
                  for i in range(Q.class_count())}
        assert len(images) == expect == A.carrier.sizes[0]


# -- word problem -----------------------------------------------------------------


def single(sig, J, t):
    return ParamTerm(sig, J, ONE, ((t,),))


def test_quotient_map_equal_syntactic(semilattice):
    x = var(semilattice.signature, "*", 0)
    t = single(semilattice.signature, finite_set(1, I), x)
    verdict, _ = quotient_map_equal(semilattice, t, t, 0)
    assert verdict == EQUAL


def test_quotient_map_equal_commutativity(semilattice):
    sig = semilattice.signature
    x, y = (var(sig, "*", i) for i in range(2))
    t = single(sig, TWO, app(sig, "join", ((x, y),), "*", 0, TWO))
    u = single(sig, TWO, app(sig, "join", ((y, x),), "*", 0, TWO))
    verdict, _ = quotient_map_equal(semilattice, t, u, 2)
    assert verdict == EQUAL


def test_quotient_map_equal_monoid_distinct(monoid):
    sig = monoid.signature
    x, y = (var(sig, "*", i) for i in range(2))
    t = single(sig, TWO, app(sig, "mul", ((x, y),), "*", 0, TWO))
    u = single(sig, TWO, app(sig, "mul", ((y, x),), "*", 0, TWO))
    verdict, witness = quotient_map_equal(monoid, t, u, 2, search_size=3)
    assert verdict == DISTINCT
    A, (phi, sort, c) = witness
    assert not satisfies(A, Equation("probe", t, u))


def test_quotient_map_equal_unknown_without_countermodel(monoid):
    # all monoids of size <= 2 are commutative and the free monoid never
    # saturates, so a size-2 search cannot decide xy = yx
    sig = monoid.signature
    x, y = (var(sig, "*", i) for i in range(2))
    t = single(sig, TWO, app(sig, "mul", ((x, y),), "*", 0, TWO))
    u = single(sig, TWO, app(sig, "mul", ((y, x),), "*", 0, TWO))
    verdict, _ = quotient_map_equal(monoid, t, u, 2, search_size=2)
    assert verdict == UNKNOWN


def test_equal_implies_all_models_satisfy(semilattice):
    sig = semilattice.signature
    x, y = (var(sig, "*", i) for i in range(2))
    t = single(sig, TWO, app(sig, "join", ((x, app(sig, "join", ((x, y),), "*", 0, TWO)),), "*", 0, TWO))
    u = single(sig, TWO, app(sig, "join", ((x, y),), "*", 0, TWO))
    verdict, _ = quotient_map_equal(semilattice, t, u, 3)
    assert verdict == EQUAL
    eq = Equation("absorb", t, u)
    for A in enumerate_algebras(semilattice, 2):
        assert satisfies(A, eq)


def test_saturated_free_algebra_satisfaction_matches_equality(semilattice):
    sig = semilattice.signature
    Q = free_algebra(semilattice, TWO, 3)
    FA = Q.as_algebra()
    x, y = (var(sig, "*", i) for i in range(2))
    pairs = [
        (x, y, False),
        (app(sig, "join", ((x, y),), "*", 0, TWO),
         app(sig, "join", ((y, x),), "*", 0, TWO), True),
        (app(sig, "join", ((x, x),), "*", 0, TWO), x, True),
    ]
    for a, b, expect in pairs:
        t, u = single(sig, TWO, a), single(sig, TWO, b)
        verdict, _ = quotient_map_equal(semilattice, t, u, 3)
        assert (verdict == EQUAL) == expect
        assert satisfies(FA, Equation("probe", t, u)) == expect


# -- traditional signatures and bundling -----------------------------------------


def test_traditional_round_trip_model_bijection():
    two_ops = FreeFormSignature("pair", [
        OperationSymbol("f", TWO, ONE),
        OperationSymbol("g", TWO, ONE),
    ])
    trad, insertions = standardize(two_ops)
    back = from_traditional(trad)
    for n in range(3):
        carrier = finite_set(n, I)
        left = enumerate_algebras(two_ops, 0, carrier=carrier)
        right = enumerate_algebras(back, 0, carrier=carrier)
        assert len(left) == len(right)
        # explicit bijection through the insertions
        seen = set()
        for B in right:
            values = {}
            for sym in two_ops.symbols:
                ins = insertions[sym.name]
                vals = []
                for h in hom_list(sym.arity, carrier):
                    bundled = B.op_value("op0", h)
                    vals.append(ins.then(bundled))
                values[sym.name] = vals
            A = Algebra(two_ops, carrier, values)
            seen.add(A.canonical_key())
        assert seen == {A.canonical_key() for A in left}


def test_bundled_equations_same_models(semilattice):
    bundled = bundle_equations(semilattice)
    assert len(bundled.equations) == 3  # three distinct arities
    left = {A.canonical_key() for A in enumerate_algebras(semilattice, 2)}
    right = {A.canonical_key() for A in enumerate_algebras(bundled, 2)}
    assert left == right


def test_global_state_bundling(global_state):
    bundled = bundle_equations(global_state)
    left = {A.canonical_key() for A in enumerate_algebras(global_state, 2)}
    right = {A.canonical_key() for A in enumerate_algebras(bundled, 2)}
    assert left == right
