import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from higherdirac import catalog
from higherdirac.algebroid import pairing
from higherdirac.errors import GradedError, MalformedSectionError, NotHomogeneousError
from higherdirac.graded import Derivation, random_homogeneous
from higherdirac.symplectic import (
    CotangentChart,
    TwistCochain,
    compose_section,
    decompose_section,
    hamiltonian_vf,
    poisson,
    twist,
)


def _sign(e):
    return -1 if e % 2 else 1


@pytest.fixture(params=[3, 4, 5])
def chart(request):
    return CotangentChart(request.param, 2, 3)


def test_chart_layout(chart):
    k = chart.k
    assert len(chart.table) == 2 * chart.m + 2 * chart.n
    degs = dict(chart.table.generators)
    assert degs["x1"] == 0 and degs["alpha1"] == 1
    assert degs["a1"] == k - 1 and degs["p1"] == k
    assert CotangentChart.from_dict(chart.to_dict()) == chart


def test_low_k_rejected():
    with pytest.raises(GradedError):
        CotangentChart(2, 1, 1)


def test_darboux_values(chart):
    g = chart.gen
    assert poisson(g("p1"), g("x1"), chart) == chart.table.one()
    assert poisson(g("a1"), g("alpha1"), chart) == chart.table.one()
    assert poisson(g("alpha1"), g("a1"), chart) == chart.table.constant(_sign(chart.k))
    assert poisson(g("p1"), g("x2"), chart) == chart.table.zero()
    assert poisson(g("a1"), g("alpha2"), chart) == chart.table.zero()


def test_a_on_alpha_word_matches_partial(chart):
    g = chart.gen
    w = g("alpha1") * g("alpha2")
    assert poisson(g("a1"), w, chart) == g("alpha2")
    assert poisson(g("a1"), w, chart) == Derivation.partial(chart.table, "alpha1")(w)


def _triple(rng, k):
    chart = CotangentChart(k, rng.randint(0, 2), rng.randint(1, 4))
    degs = [rng.choice([0, 1, k - 1, k, k + 1, k + 2]) for _ in range(3)]
    polys = [random_homogeneous(chart.table, d, rng, terms=3, x_power=2) for d in degs]
    return chart, degs, polys


@given(st.integers(0, 10 ** 9), st.sampled_from([3, 4, 5]))
def test_poisson_axioms(seed, k):
    chart, (df, dg, _), (f, g, h) = _triple(random.Random(seed), k)

    def br(u, v):
        return poisson(u, v, chart)

    assert br(f, g) == br(g, f).scale(-_sign((df + k) * (dg + k)))
    assert br(f, g * h) == br(f, g) * h + (g * br(f, h)).scale(_sign((df + k) * dg))
    assert br(f, br(g, h)) == br(br(f, g), h) + br(g, br(f, h)).scale(_sign((df + k) * (dg + k)))


@given(st.integers(0, 10 ** 9), st.sampled_from([3, 4, 5]))
def test_bracket_degree(seed, k):
    chart, (df, dg, _), (f, g, _) = _triple(random.Random(seed), k)
    assert poisson(f, g, chart).is_homogeneous(df + dg - k)


def test_hamiltonian_vf_examples(chart):
    assert hamiltonian_vf(chart.table.zero(), chart) == Derivation.zero(chart.table, 0)
    X = hamiltonian_vf(chart.gen("p1"), chart)
    assert X.degree == 0
    assert X.values["x1"] == chart.table.one()
    assert all(not v for n, v in X.values.items() if n != "x1")
    theta = chart.gen("p1") * chart.gen("alpha1")
    assert hamiltonian_vf(theta, chart).degree == 1


def test_hamiltonian_vf_rejects_inhomogeneous(chart):
    with pytest.raises(NotHomogeneousError):
        hamiltonian_vf(chart.gen("x1") + chart.gen("alpha1"), chart)


@given(st.integers(0, 10 ** 9), st.sampled_from([3, 4, 5]))
def test_hamiltonian_vf_is_bracket(seed, k):
    rng = random.Random(seed)
    chart, _, (theta, f, _) = _triple(rng, k)
    theta = random_homogeneous(chart.table, k + 1, rng, terms=3)
    assert hamiltonian_vf(theta, chart, degree=1)(f) == poisson(theta, f, chart)


# -- twists -------------------------------------------------------------------

def test_twist_fixes_low_generators(chart):
    rng = random.Random(0)
    B = catalog.random_form(chart, chart.k, rng)
    assert twist(B, chart.gen("x1"), chart) == chart.gen("x1")
    assert twist(B, chart.gen("alpha1"), chart) == chart.gen("alpha1")


def test_zero_twist_is_identity(chart):
    rng = random.Random(1)
    f = random_homogeneous(chart.table, chart.k + 1, rng)
    assert twist(chart.table.zero(), f, chart) == f


def test_twist_cochain_validation(chart):
    with pytest.raises(GradedError):
        TwistCochain(chart.gen("a1") * chart.gen("alpha1"), chart)
    with pytest.raises(NotHomogeneousError):
        TwistCochain(chart.gen("alpha1"), chart)


@given(st.integers(0, 10 ** 9), st.sampled_from([3, 4, 5]))
def test_twist_is_a_symplectic_automorphism(seed, k):
    rng = random.Random(seed)
    chart, _, (f, g, _) = _triple(rng, k)
    B = TwistCochain(catalog.random_form(chart, k, rng), chart)
    tf, tg = twist(B, f), twist(B, g)
    assert twist(B, f * g) == tf * tg
    assert poisson(tf, tg, chart) == twist(B, poisson(f, g, chart))


# -- sections ---------------------------------------------------------------------

def test_decompose_examples():
    chart = CotangentChart(4, 1, 3)
    g = chart.gen
    s = decompose_section(g("a1"), chart)
    assert [str(c) for c in s.a] == ["1", "0", "0"] and not s.form
    w = chart.alpha_word([0, 1, 2])
    s = decompose_section(w, chart)
    assert not any(s.a) and s.form == w
    e = g("x1") * g("a2") + w.scale(3)
    s = decompose_section(e, chart)
    assert str(s.a[1]) == "x1" and s.form == w.scale(3)
    assert compose_section(s, chart) == e


def test_decompose_rejects_malformed():
    chart = CotangentChart(4, 1, 2)
    with pytest.raises(MalformedSectionError):
        decompose_section(chart.gen("alpha1"), chart)
    with pytest.raises(MalformedSectionError):
        decompose_section(chart.gen("a1") + chart.gen("alpha1"), chart)


@given(st.integers(0, 10 ** 9), st.sampled_from([3, 4, 5]))
def test_pairing_realization(seed, k):
    rng = random.Random(seed)
    chart = CotangentChart(k, rng.randint(0, 2), rng.randint(2, 4))
    e1 = catalog.random_section(chart, rng)
    e2 = catalog.random_section(chart, rng)
    s1, s2 = decompose_section(e1, chart), decompose_section(e2, chart)
    # i_a eta + i_b omega, with i_a the left derivative along sum s^j d/dalpha^j
    expected = chart.table.zero()
    for j in range(chart.n):
        expected = expected + chart.lift(s1.a[j]) * s2.form.derivative(chart.alpha[j])
        expected = expected + chart.lift(s2.a[j]) * s1.form.derivative(chart.alpha[j])
    assert poisson(e1, e2, chart) == expected
    assert pairing(e1, e2, chart) == expected
