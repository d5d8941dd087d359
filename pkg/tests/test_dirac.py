import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from higherdirac import catalog, linalg
from higherdirac.algebroid import LieAlgebroidData, build_theta, d_A
from higherdirac.dirac import (
    NambuTensor,
    PairSpec,
    SubbundleSpec,
    check_coisotropic,
    check_higher_dirac,
    check_lagrangian,
    check_nambu_dirac_hagiwara,
    check_pair_q_lagrangian,
    check_quadruple,
    check_twisted_nambu,
    check_wade_w2,
    conormal,
    from_pair,
    graph_of_form,
    graph_of_nambu,
    ideal_coisotropic,
    ideal_preserved,
    induced_K,
    is_decomposable,
    same_pair,
    same_subbundle,
    to_pair,
)
from higherdirac.errors import GradedError, UnsupportedRegimeError
from higherdirac.properties import random_pair
from higherdirac.symplectic import CotangentChart

seeds = st.integers(0, 10 ** 9)
SO3 = LieAlgebroidData.lie_algebra(catalog.so3())
SO3_AFF = LieAlgebroidData.lie_algebra(catalog.direct_sum(catalog.so3(), catalog.affine_line()))


# -- lagrangian --------------------------------------------------------------------

@pytest.mark.parametrize("k", [3, 4])
def test_conormal_is_lagrangian_with_zero_form(k):
    B = [[1, 0, 0, 0], [0, 1, 1, 0]]
    L = conormal(B, k, 4)
    assert check_lagrangian(L).final() == "pass"
    pair = to_pair(L)
    assert linalg.same_span(pair.E, B, 4)
    assert pair.Omega == {}


def test_graph_of_form_is_lagrangian_and_transverse():
    rng = random.Random(0)
    chart = CotangentChart(4, 0, 5)
    omega = catalog.random_form(chart, 4, rng)
    L = graph_of_form(omega, chart)
    rep = check_lagrangian(L)
    assert rep.final() == "pass"
    # p1 is onto and dim L = n, so L meets wedge^{k-1} A* trivially
    assert rep.data["p1_ranks"] == [5] and len(L.vectors) == 5
    pair = to_pair(L)
    assert pair.rank == 5
    assert same_subbundle(from_pair(pair), L)


def test_one_direction_over_all_forms_is_still_lagrangian():
    # with p1(L) of rank 1 < k-1, p1(L)° ^ wedge^{k-2} A* is every (k-1)-form
    rows = [[0] * 3 + [int(i == j) for j in range(3)] for i in range(3)]
    rows.append([1, 0, 0, 0, 0, 0])
    assert check_lagrangian(SubbundleSpec.from_coefficients(3, 3, rows)).passed


def test_forms_plus_two_directions_fails_L2():
    rows = [[0] * 3 + [int(i == j) for j in range(3)] for i in range(3)]
    rows += [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0]]
    L = SubbundleSpec.from_coefficients(3, 3, rows)
    rep = check_lagrangian(L)
    assert rep.final() == "fail" and "L2" in rep.failing()
    # direct count: L meets the forms in dimension 3, p1(L)° ^ A* has dimension 2
    forms = [[Fraction(int(i == j)) for j in range(6)] for i in range(3, 6)]
    meet = linalg.intersection([[Fraction(c) for c in r] for r in rows], forms, 6)
    assert len(meet) == 3


def test_non_isotropic_fails_both_checks():
    L = SubbundleSpec.from_coefficients(3, 2, [[1, 0, 1], [0, 1, 0]])
    assert check_lagrangian(L).failing() == ["L1"]
    assert check_nambu_dirac_hagiwara(L).final() == "fail"


def test_zero_section_and_graph_of_zero():
    k, n = 4, 3
    zero = conormal([], k, n)
    assert check_lagrangian(zero).passed
    assert to_pair(zero).rank == 0
    chart = CotangentChart(k, 0, n)
    full = [[int(i == j) for j in range(n)] for i in range(n)]
    assert same_subbundle(graph_of_form(chart.table.zero(), chart), conormal(full, k, n))


def test_to_pair_requires_lagrangian():
    L = SubbundleSpec.from_coefficients(3, 2, [[1, 0, 1], [0, 1, 0]])
    with pytest.raises(GradedError):
        to_pair(L)


def test_pair_validation():
    with pytest.raises(GradedError):
        PairSpec(3, 2, [[1, 0], [2, 0]], {})
    with pytest.raises(GradedError):
        PairSpec.from_array(2, 2, [[1, 0], [0, 1]], [[0, 1], [1, 0]])


@given(seeds, st.sampled_from([3, 4, 5]))
def test_round_trip(seed, k):
    rng = random.Random(seed)
    pair = random_pair(rng, k, rng.randint(k, 6 if k < 5 else 5))
    L = from_pair(pair)
    assert check_lagrangian(L).passed
    back = to_pair(L)
    assert same_pair(back, pair)
    assert same_subbundle(from_pair(back), L)


def test_sampled_regime_detects_rank_drop():
    Pi = NambuTensor.from_components(3, 1, 4, {(0, 1, 2): "x1"}, points=[[0], [1], [2]])
    L = graph_of_nambu(Pi)
    assert check_lagrangian(L).final() == "weak-lagrangian"
    assert check_nambu_dirac_hagiwara(L).final() == "irregular"


def test_lagrangian_checks_are_pointwise():
    # the graph of x1 * alpha1 alpha2 alpha3 is lagrangian at every sample
    chart = CotangentChart(3, 1, 3)
    omega = chart.gen("x1") * chart.alpha_word([0, 1, 2])
    L = graph_of_form(omega, chart, points=[[0], [1], [-3]])
    assert L.regime == "sampled"
    assert check_lagrangian(L).passed
    assert check_nambu_dirac_hagiwara(L).passed


@given(seeds)
def test_lagrangian_implies_hagiwara(seed):
    rng = random.Random(seed)
    pair = random_pair(rng, 3, rng.randint(3, 5))
    assert check_nambu_dirac_hagiwara(from_pair(pair)).passed


# -- higher Dirac -----------------------------------------------------------------------

def test_conormal_of_subalgebra_is_higher_dirac():
    for k in (3, 4):
        assert check_higher_dirac(conormal([[1, 0, 0]], k, 3), SO3).passed
        rep = check_higher_dirac(conormal([[1, 0, 0], [0, 1, 0]], k, 3), SO3)
        assert rep.failing() == ["closure"]


def test_graph_with_matching_H():
    rng = random.Random(4)
    chart5 = CotangentChart(3, 0, 5)
    omega = catalog.random_form(chart5, 3, rng)
    while not d_A(omega, SO3_AFF, chart5):
        omega = catalog.random_form(chart5, 3, rng)
    H = d_A(omega, SO3_AFF, chart5)
    L = graph_of_form(omega, chart5)
    assert check_higher_dirac(L, SO3_AFF, H).passed
    assert not check_higher_dirac(L, SO3_AFF, None).passed
    pair = to_pair(L)
    assert check_pair_q_lagrangian(pair, SO3_AFF, H).passed
    assert not check_pair_q_lagrangian(pair, SO3_AFF, None).passed


def test_higher_dirac_needs_point_base():
    chart = CotangentChart(3, 1, 3)
    L = graph_of_form(chart.table.zero(), chart, points=[[0]])
    with pytest.raises(UnsupportedRegimeError):
        check_higher_dirac(L, catalog.tangent_plus(1, catalog.abelian(2)), None)


def test_higher_dirac_reports_non_lagrangian_as_precondition():
    L = SubbundleSpec.from_coefficients(3, 3, [[1, 0, 0, 1, 0, 0]])
    assert check_higher_dirac(L, SO3).final() == "precondition"


@given(seeds)
def test_closure_matches_ideal_preservation(seed):
    rng = random.Random(seed)
    _, t = catalog.random_lie_algebra(rng, 5)
    alg = LieAlgebroidData.lie_algebra(t)
    k = rng.choice([3, 4])
    if alg.n < k:
        return
    pair = random_pair(rng, k, alg.n, density=0.5)
    L = from_pair(pair)
    chart = CotangentChart(k, 0, alg.n)
    H = catalog.random_form(chart, k + 1, rng) if rng.random() < 0.5 else None
    closed = check_higher_dirac(L, alg, H).passed
    assert closed == ideal_preserved(L, build_theta(alg, H, chart=chart)).passed
    assert closed == check_pair_q_lagrangian(pair, alg, H).passed


# -- Nambu --------------------------------------------------------------------------------

def test_decomposability_examples():
    assert is_decomposable(NambuTensor.from_components(3, 0, 3, {(0, 1, 2): 1})).passed
    two = NambuTensor.from_components(3, 0, 6, {(0, 1, 2): 1, (3, 4, 5): 1})
    assert not is_decomposable(two).passed
    vanishing = NambuTensor.from_components(3, 1, 3, {(0, 1, 2): "x1"}, points=[[0], [1]])
    assert is_decomposable(vanishing).passed


def test_plucker_by_direct_evaluation():
    # e1e2e3 + e4e5e6: contracting with alpha^1 alpha^2 gives e3, and e3 ^ Pi != 0
    Pi = NambuTensor.from_components(3, 0, 6, {(0, 1, 2): 1, (3, 4, 5): 1})
    e3 = Pi.table.gen("e3")
    assert e3 * Pi.Pi


def test_twisted_nambu_examples():
    for k in (3, 4):
        ab = LieAlgebroidData.lie_algebra(catalog.abelian(k))
        Pi = NambuTensor.from_components(k, 0, k, {tuple(range(k)): 1})
        assert check_twisted_nambu(Pi, ab).passed
    two = NambuTensor.from_components(3, 0, 6, {(0, 1, 2): 1, (3, 4, 5): 1})
    ab6 = LieAlgebroidData.lie_algebra(catalog.abelian(6))
    assert check_twisted_nambu(two, ab6).final() == "precondition"


def test_perturbed_nambu_fails_both_paths():
    # so3 + affine with Pi = e1 e2 e4: [e1, e2] = e3 leaves the image
    Pi = NambuTensor.from_components(3, 0, 5, {(0, 1, 3): 1})
    rep = check_twisted_nambu(Pi, SO3_AFF)
    assert rep.failing() == ["int-nan", "graph-closure"]
    ok = NambuTensor.from_components(3, 0, 5, {(0, 3, 4): 1})
    rep_ok = check_twisted_nambu(ok, SO3_AFF)
    assert rep_ok.clause("int-nan").passed == rep_ok.clause("graph-closure").passed


def test_graph_of_nambu():
    never = NambuTensor.from_components(3, 1, 4, {(0, 1, 2): 1}, points=[[0], [1]])
    assert check_lagrangian(graph_of_nambu(never)).final() == "pass"
    zero = NambuTensor.from_components(3, 0, 4, {})
    assert check_lagrangian(graph_of_nambu(zero)).final() == "pass"


# -- quadruples and coisotropic ------------------------------------------------------------

def test_lagrangian_with_annihilator_is_coisotropic():
    k, n = 3, 3
    L = conormal([[1, 0, 0]], k, n)
    D = [[0, 1, 0], [0, 0, 1]]
    base = SubbundleSpec.from_coefficients(k, n, [], D=D)
    spec = SubbundleSpec(k, n, L.vectors, D=base.D)
    spec = SubbundleSpec(k, n, L.vectors, D=base.D, K=induced_K(spec))
    assert check_quadruple(spec).passed
    rep = check_coisotropic(spec)
    assert rep.passed
    assert ideal_coisotropic(spec).passed
    assert rep.data["totdim"] == rep.data["half_totdim"]


def test_D_outside_annihilator_fails():
    spec = SubbundleSpec.from_coefficients(3, 2, [[1, 0, 0]], D=[[1, 0]])
    rep = check_coisotropic(spec)
    assert "D⊆p1(L)°" in rep.failing()


def test_empty_quadruple_passes():
    spec = SubbundleSpec.from_coefficients(3, 2, [], D=[], K=[])
    assert check_quadruple(spec).passed
    assert check_coisotropic(spec).passed


def test_quadruple_needs_D():
    with pytest.raises(GradedError):
        check_quadruple(SubbundleSpec.from_coefficients(3, 2, []))


# -- Wade ------------------------------------------------------------------------------------

def test_wade_condition_on_simple_pairs():
    zero = PairSpec(3, 3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], {})
    assert check_wade_w2(zero).passed
    top = PairSpec(3, 3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], {(0, 1, 2): Fraction(1)})
    # over a rank-3 E with a top form every contraction product lies in the image
    assert check_wade_w2(top).passed


def test_spans_are_exact():
    rows = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    assert linalg.rank(rows, 2) == 1
    assert list(itertools.chain(*linalg.row_basis(rows, 2))) == [1, 2]
