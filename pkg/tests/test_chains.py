import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from amensweep.chains import Chain, chain_from_obj, chain_to_obj, perm_sign
from amensweep.errors import DomainError, FormatError
from amensweep.multicomplex import AlgebraicSimplex

from helpers import (bigon, bigon_fundamental_cycle, one_edge, point,
                     random_chain, random_multicomplex, triangle_boundary,
                     triangle_boundary_cycle, triangle_full, tetra_full)


def frac(n, d=1):
    return Fraction(n, d)


# -- l1 norm -----------------------------------------------------------------

def test_l1_norm_zero():
    assert Chain.zero(one_edge(), 1).l1_norm() == 0


def test_l1_norm_mixed_signs():
    K = bigon()
    s1 = AlgebraicSimplex("e1", ("u", "w"))
    s2 = AlgebraicSimplex("e2", ("u", "w"))
    c = Chain(K, 1, {s1: frac(1, 2), s2: frac(-1, 3)})
    assert c.l1_norm() == frac(5, 6)


def test_l1_norm_cancellation():
    K = triangle_full()
    rng = random.Random(0)
    c = random_chain(rng, K, 1)
    assert (c - c).l1_norm() == 0


# -- boundary ----------------------------------------------------------------

def test_boundary_of_edge():
    K = one_edge()
    c = Chain.single(K, AlgebraicSimplex("s[a.b]", ("a", "b")))
    expect = Chain(K, 0, {AlgebraicSimplex("s[b]", ("b",)): frac(1),
                          AlgebraicSimplex("s[a]", ("a",)): frac(-1)})
    assert c.boundary() == expect


def test_boundary_of_degenerate_edge_vanishes():
    K = point()
    c = Chain.single(K, AlgebraicSimplex("s[a]", ("a", "a")))
    assert c.boundary().is_zero()


def test_boundary_of_coherent_triangle_cycle():
    K = triangle_boundary()
    assert triangle_boundary_cycle(K).boundary().is_zero()


def test_boundary_rejects_degree_zero():
    K = point()
    c = Chain.single(K, AlgebraicSimplex("s[a]", ("a",)))
    with pytest.raises(DomainError):
        c.boundary()


def test_boundary_squared_zero_exhaustive_small():
    for K in (triangle_full(), bigon(), tetra_full()):
        for sigma in K.algebraic_simplices(2):
            c = Chain.single(K, sigma)
            assert c.boundary().boundary().is_zero()


@given(st.integers(0, 10_000), st.integers(2, 3))
def test_boundary_squared_zero_random(seed, degree):
    rng = random.Random(seed)
    K = random_multicomplex(seed % 50, 20)
    c = random_chain(rng, K, degree)
    if c.degree >= 2:
        assert c.boundary().boundary().is_zero()


def test_boundary_norm_bound_and_equality_witness():
    # |d c| <= (n+2) |c|, equality for a simplex with distinct faces
    K = tetra_full()
    rng = random.Random(1)
    for degree in (1, 2, 3):
        for _ in range(20):
            c = random_chain(rng, K, degree)
            if not c.is_zero():
                assert c.boundary().l1_norm() <= (degree + 1) * c.l1_norm()
        basis = [s for s in K.algebraic_simplices(degree)
                 if len(set(s.vertices)) == degree + 1]
        witness = Chain.single(K, basis[0])
        assert witness.boundary().l1_norm() == (degree + 1) * witness.l1_norm()


# -- alt ----------------------------------------------------------------------

def test_alt_on_edge():
    K = one_edge()
    c = Chain.single(K, AlgebraicSimplex("s[a.b]", ("a", "b"))).alt()
    assert c.coefficient(AlgebraicSimplex("s[a.b]", ("a", "b"))) == frac(1, 2)
    assert c.coefficient(AlgebraicSimplex("s[a.b]", ("b", "a"))) == frac(-1, 2)


def test_alt_kills_repeated_vertices():
    K = point()
    c = Chain.single(K, AlgebraicSimplex("s[a]", ("a", "a")))
    assert c.alt().is_zero()


@given(st.integers(0, 10_000))
def test_alt_idempotent_random(seed):
    rng = random.Random(seed)
    K = random_multicomplex(seed % 50, 20)
    c = random_chain(rng, K, rng.choice([1, 2]))
    a = c.alt()
    assert a.alt() == a
    assert a.is_alternating()
    assert a.l1_norm() <= c.l1_norm()


@given(st.integers(0, 10_000))
def test_alt_commutes_with_boundary(seed):
    rng = random.Random(seed)
    K = random_multicomplex(seed % 50, 20)
    c = random_chain(rng, K, 2)
    assert c.alt().boundary() == c.boundary().alt()


def test_alt_linear():
    rng = random.Random(5)
    K = triangle_full()
    c1, c2 = random_chain(rng, K, 1), random_chain(rng, K, 1)
    assert (c1 + c2).alt() == c1.alt() + c2.alt()
    assert (c1 * frac(3, 7)).alt() == c1.alt() * frac(3, 7)


# -- is_alternating ------------------------------------------------------------

def test_alt_output_is_alternating():
    rng = random.Random(9)
    for _ in range(10):
        K = random_multicomplex(rng.randint(0, 40), 15)
        c = random_chain(rng, K, 1)
        assert c.alt().is_alternating()


def test_single_unpaired_simplex_not_alternating():
    K = one_edge()
    c = Chain.single(K, AlgebraicSimplex("s[a.b]", ("a", "b")))
    assert not c.is_alternating()


def test_bigon_fundamental_alt_cycle_is_alternating():
    K = bigon()
    z = bigon_fundamental_cycle(K).alt()
    assert z.is_alternating()
    assert z.is_cycle()


# -- is_cycle -------------------------------------------------------------------

def test_boundaries_are_cycles():
    rng = random.Random(11)
    for _ in range(10):
        K = random_multicomplex(rng.randint(0, 40), 20)
        b = random_chain(rng, K, 2)
        if b.degree >= 2:
            assert b.boundary().is_cycle()


def test_single_edge_is_not_cycle():
    K = one_edge()
    c = Chain.single(K, AlgebraicSimplex("s[a.b]", ("a", "b")))
    assert not c.is_cycle()


def test_coherent_triangle_cycle():
    K = triangle_boundary()
    assert triangle_boundary_cycle(K).is_cycle()


# -- serialization ----------------------------------------------------------------

def test_chain_round_trip():
    K = bigon()
    z = bigon_fundamental_cycle(K).alt() * frac(5, 3)
    obj = chain_to_obj(z)
    z2 = chain_from_obj(obj, K)
    assert z2 == z
    assert chain_to_obj(z2) == obj


def test_chain_from_obj_rejects_foreign_simplex():
    K = bigon()
    with pytest.raises(FormatError):
        chain_from_obj([{"simplex": "nope", "tuple": ["u", "w"],
                         "coeff": "1"}], K)


def test_chain_from_obj_rejects_wrong_vertex_set():
    K = bigon()
    with pytest.raises(FormatError):
        chain_from_obj([{"simplex": "e1", "tuple": ["u", "u"],
                         "coeff": "1"}], K)


def test_perm_sign():
    assert perm_sign((0, 1, 2)) == 1
    assert perm_sign((1, 0, 2)) == -1
    assert perm_sign((1, 2, 0)) == 1
