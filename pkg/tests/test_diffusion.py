import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from amensweep.action import GroupAction, apply
from amensweep.chains import Chain
from amensweep.diffusion import (Measure, ProductMeasure, convolve, diffuse,
                                 measure_from_obj, measure_to_obj,
                                 synthesize_measure)
from amensweep.errors import DomainError, SynthesisFailure
from amensweep.multicomplex import AlgebraicSimplex

from helpers import (bigon, bigon_swap_action, edge_simplex_on_line,
                     line_complex, line_shift_action, random_chain,
                     random_measure, s3_action, triangle_boundary_cycle,
                     triangle_full)


def test_measure_invariants():
    K = triangle_full()
    G = s3_action(K)
    with pytest.raises(DomainError):
        Measure(G.elements()[:2], [Fraction(1, 2), Fraction(1, 3)])
    with pytest.raises(DomainError):
        Measure(G.elements()[:1], [Fraction(0)])
    with pytest.raises(DomainError):
        Measure([G.identity(), G.identity()], [Fraction(1, 2), Fraction(1, 2)])


def test_point_mass_at_identity_is_identity():
    K = triangle_full()
    G = s3_action(K)
    rng = random.Random(0)
    c = random_chain(rng, K, 1)
    assert diffuse(Measure.dirac(G.identity()), c) == c


def test_uniform_pair_annihilates_alternating_pair():
    K = triangle_full()
    G = s3_action(K)
    g = G.generator("tab")
    sigma = Chain.single(K, AlgebraicSimplex("s[a.b]", ("a", "b")))
    c = sigma - apply(g, sigma)
    mu = Measure.uniform([G.identity(), g])
    assert diffuse(mu, c).is_zero()


@given(st.integers(0, 10_000))
def test_diffusion_never_increases_norm(seed):
    rng = random.Random(seed)
    K = triangle_full()
    G = s3_action(K)
    mu = random_measure(rng, G)
    c = random_chain(rng, K, rng.choice([1, 2]))
    assert diffuse(mu, c).l1_norm() <= c.l1_norm()


@given(st.integers(0, 10_000))
def test_diffusion_is_linear_and_chain_map(seed):
    rng = random.Random(seed)
    K = triangle_full()
    G = s3_action(K)
    mu = random_measure(rng, G)
    c1, c2 = random_chain(rng, K, 2), random_chain(rng, K, 2)
    assert diffuse(mu, c1 + c2) == diffuse(mu, c1) + diffuse(mu, c2)
    assert diffuse(mu, c1).boundary() == diffuse(mu, c1.boundary())


def test_diffusion_preserves_cycles_and_alternation():
    K = triangle_full()
    G = s3_action(K)
    rng = random.Random(3)
    z = triangle_boundary_cycle(K).alt()
    for _ in range(10):
        mu = random_measure(rng, G)
        out = diffuse(mu, z)
        assert out.is_cycle()
        assert out.is_alternating()


def test_convolve_with_dirac_identity():
    K = triangle_full()
    G = s3_action(K)
    rng = random.Random(5)
    mu = random_measure(rng, G)
    left = convolve(Measure.dirac(G.identity()), mu)
    assert measure_to_obj(left) == measure_to_obj(mu)


def test_convolve_uniform_z2_is_uniform():
    K = bigon()
    G = bigon_swap_action(K)
    mu = Measure.uniform([G.identity(), G.generator("t")])
    out = convolve(mu, mu)
    assert out.support_size() == 2
    assert set(out.weights) == {Fraction(1, 2)}


@given(st.integers(0, 10_000))
def test_convolve_matches_sequential_diffusion(seed):
    rng = random.Random(seed)
    K = triangle_full()
    G = s3_action(K)
    mu1, mu2 = random_measure(rng, G), random_measure(rng, G)
    c = random_chain(rng, K, 1)
    assert diffuse(convolve(mu1, mu2), c) == diffuse(mu1, diffuse(mu2, c))


@given(st.integers(0, 10_000))
def test_convolve_associative(seed):
    # associative as measures (words are representatives, not canonical)
    rng = random.Random(seed)
    G = s3_action(triangle_full())
    m1, m2, m3 = (random_measure(rng, G) for _ in range(3))
    a = convolve(convolve(m1, m2), m3)
    b = convolve(m1, convolve(m2, m3))
    assert {g.key(): w for g, w in a.items()} == \
        {g.key(): w for g, w in b.items()}


def test_product_measure_matches_explicit():
    K = triangle_full()
    G = s3_action(K)
    rng = random.Random(8)
    f1, f2 = random_measure(rng, G, 2), random_measure(rng, G, 2)
    prod = ProductMeasure((f1, f2))
    c = random_chain(rng, K, 1)
    assert diffuse(prod, c) == diffuse(prod.explicit(), c)


# -- synthesis: finite family ---------------------------------------------------

def test_synthesize_finite_transitive_orbit_exact():
    K = triangle_full()
    G = s3_action(K)
    sigma = AlgebraicSimplex("s[a.b]", ("a", "b"))
    f = Chain(K, 1, {sigma: Fraction(2), apply(G.generator("tab"),
              Chain.single(K, sigma)).support()[0]: Fraction(1)})
    mu = synthesize_measure(G, f, Fraction(1, 100))
    out = diffuse(mu, f)
    assert out.l1_norm() == abs(f.coefficient_sum())


def test_synthesize_finite_alternating_cancellation_to_zero():
    K = triangle_full()
    G = s3_action(K)
    z = triangle_boundary_cycle(K).alt()
    mu = synthesize_measure(G, z, Fraction(1, 100))
    assert diffuse(mu, z).is_zero()


def test_synthesize_rejects_multi_orbit_support():
    K = triangle_full()
    G = GroupAction(K, [])  # trivial group: everything is its own orbit
    rng = random.Random(1)
    f = random_chain(rng, K, 1, size=3)
    with pytest.raises(DomainError):
        synthesize_measure(G, f, Fraction(1, 2))


# -- synthesis: windowed Z action ------------------------------------------------

def test_synthesize_window_folner_box():
    L = 8
    K = line_complex(L)
    G = line_shift_action(K, L)
    sig0 = edge_simplex_on_line(0, 1)
    sig1 = edge_simplex_on_line(1, 2)
    f = Chain(K, 1, {sig0: Fraction(1), sig1: Fraction(-1)})
    eta = Fraction(1, 2)
    mu = synthesize_measure(G, f, eta)
    out = diffuse(mu, f)
    assert out.l1_norm() <= abs(f.coefficient_sum()) + eta
    # the box spreads along the declared translation direction
    assert out.l1_norm() < f.l1_norm()


def test_synthesize_window_exhaustion_when_box_cannot_fit():
    L = 3
    K = line_complex(L)
    G = line_shift_action(K, L)
    sig0 = edge_simplex_on_line(0, 1)
    sig1 = edge_simplex_on_line(1, 2)
    f = Chain(K, 1, {sig0: Fraction(1), sig1: Fraction(-1)})
    with pytest.raises(SynthesisFailure):
        synthesize_measure(G, f, Fraction(1, 1000))


# -- serialization ----------------------------------------------------------------

def test_measure_round_trip():
    K = triangle_full()
    G = s3_action(K)
    rng = random.Random(11)
    mu = random_measure(rng, G)
    obj = measure_to_obj(mu)
    mu2 = measure_from_obj(obj, G)
    assert measure_to_obj(mu2) == obj
    c = random_chain(rng, K, 1)
    assert diffuse(mu, c) == diffuse(mu2, c)


def test_synthesize_trivial_when_target_already_met():
    # a one-sided chain cannot be improved below |sum f|; the identity
    # measure already meets the bound
    L = 6
    K = line_complex(L)
    G = line_shift_action(K, L)
    f = Chain(K, 1, {edge_simplex_on_line(0, 1): Fraction(1)})
    mu = synthesize_measure(G, f, Fraction(1, 4))
    assert diffuse(mu, f).l1_norm() <= abs(f.coefficient_sum()) + Fraction(1, 4)


def test_diffusion_preserves_homology_class():
    # mu*c - c must bound: diffusion never moves the class
    from amensweep.homology_lp import class_of
    K = triangle_full()
    G = s3_action(K)
    rng = random.Random(21)
    z = triangle_boundary_cycle(K).alt()
    for _ in range(5):
        mu = random_measure(rng, G)
        moved = diffuse(mu, z) - z
        assert all(v == 0 for v in class_of(K, moved))
