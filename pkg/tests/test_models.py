from fractions import Fraction

import pytest

from amensweep.action import (apply, bounding_chain,
                              stabilizer_sign_search, verify_witness)
from amensweep.diffusion import Measure, diffuse
from amensweep.errors import DomainError
from amensweep.homology_lp import class_of, homology, seminorm_lp
from amensweep.models import (CircleComplex, LadderKit,
                              arc_transposition_generator, circle_witness,
                              gen_circle_model, gen_synthetic, loop_generator,
                              short_arc_cycle, transposition_element,
                              witness_from_word, _loop_chain, _ladder,
                              _edge_chain, _strip)
from amensweep.serialize import canonical_dumps
from amensweep.chains import chain_to_obj


def small_model(m=3, w=3):
    return gen_circle_model(m, w)


# -- circle complex -----------------------------------------------------------

def test_circle_complex_validates():
    K = CircleComplex(3, Fraction(2))
    assert K.validate().ok


def test_circle_edge_count():
    K = CircleComplex(3, Fraction(2))
    edges = K.simplices_of_dim(1)
    # per pair: labels in (j-i)/3 + Z within [-2, 2]: 4 values; 3 pairs
    assert len(edges) == 12


def test_circle_triangle_enumeration_small():
    K = CircleComplex(3, Fraction(2))
    tris = K.simplices_of_dim(2)
    assert tris
    assert K.validate().ok
    for t in tris:
        assert len(t.vertices) == 3


def test_circle_rejects_small_window():
    with pytest.raises(DomainError):
        CircleComplex(3, Fraction(1))
    with pytest.raises(DomainError):
        CircleComplex(2, Fraction(4))


def test_circle_edge_canonicalization():
    K = CircleComplex(3, Fraction(2))
    assert K.edge_id(0, 1, Fraction(1, 3)) == K.edge_id(1, 0, Fraction(-1, 3))


# -- circle elements ------------------------------------------------------------

def test_loop_generator_shifts_labels():
    K = CircleComplex(3, Fraction(3))
    y0 = loop_generator(K, 0)
    e = K.edge_id(0, 1, Fraction(1, 3))
    image = y0.simplex_image(e)
    # path 0 -> 1 with displacement t maps to t - 1 under a loop at 0
    assert image == K.edge_id(0, 1, Fraction(1, 3) - 1)


def test_arc_transposition_is_involution_and_odd_stabilizer():
    K = CircleComplex(3, Fraction(3))
    g0 = arc_transposition_generator(K, 0)
    square = g0.compose(g0)
    assert square.key() == "__identity__"
    arc = K.edge_id(0, 1, Fraction(1, 3))
    assert g0.simplex_image(arc) == arc
    assert g0.vertex_image("v0") == "v1"


def test_transposition_element_word_replays():
    K = CircleComplex(3, Fraction(4))
    gens = {f"g{k}": arc_transposition_generator(K, k) for k in range(3)}
    gens.update({f"y{k}": loop_generator(K, k) for k in range(3)})
    from amensweep.action import GroupAction
    G = GroupAction(K, sorted(gens.items()), family="windowed")
    for (i, j, t) in [(0, 1, Fraction(1, 3)), (0, 1, Fraction(1, 3) + 2),
                      (0, 2, Fraction(2, 3) - 1), (1, 2, Fraction(1, 3) + 1)]:
        g = transposition_element(K, gens, i, j, t)
        assert g.perm[i] == j and g.perm[j] == i
        assert g.disp[i] == t and g.disp[j] == -t
        replay = G.element_for_word(g.word)
        assert replay.key() == g.key()
        edge = K.edge_id(i, j, t)
        assert g.simplex_image(edge) == edge


def test_window_exhaustion_returns_none_image():
    K = CircleComplex(3, Fraction(2))
    y0 = loop_generator(K, 0)
    # push the label past the window
    e = K.edge_id(0, 1, Fraction(1, 3) - 2)
    assert y0.simplex_image(e) is None


# -- ladders ---------------------------------------------------------------------

def test_strip_boundary_identity():
    K = CircleComplex(3, Fraction(4))
    for (a, b) in [(0, 1), (1, 2), (0, 2)]:
        u = Fraction((b - a) % 3, 3) + 1
        strip = _strip(K, a, b, u)
        from amensweep.models import _third_vertex
        c = _third_vertex(3, a, b)
        want = (_edge_chain(K, a, b, u + 1) - _edge_chain(K, a, b, u)
                - _loop_chain(K, b, c))
        assert strip.boundary() == want


def test_ladder_boundary_identity():
    K = CircleComplex(3, Fraction(5))
    from amensweep.models import _third_vertex
    for k in (2, -2, 0):
        u = Fraction(1, 3)
        lad = _ladder(K, 0, 1, u, k)
        want = (_edge_chain(K, 0, 1, u + k) - _edge_chain(K, 0, 1, u)
                - k * _loop_chain(K, 1, _third_vertex(3, 0, 1)))
        assert lad.boundary() == want


def test_movers_connect_loops():
    K = CircleComplex(3, Fraction(3))
    kit = LadderKit(K)
    for x, y in [(0, 1), (1, 2), (2, 0), (1, 0)]:
        M = kit.mover(x, y)
        assert M.boundary() == _loop_chain(K, x, y) - kit.base_loop()


# -- witnesses ----------------------------------------------------------------------

def test_loop_witness_verifies():
    K = CircleComplex(3, Fraction(3))
    kit = LadderKit(K)
    w = circle_witness(K, kit, loop_generator(K, 0))
    assert verify_witness(w) is None


def test_transposition_witness_verifies():
    K = CircleComplex(3, Fraction(3))
    kit = LadderKit(K)
    for k in range(3):
        w = circle_witness(K, kit, arc_transposition_generator(K, k))
        assert verify_witness(w) is None


def test_synthesized_stabilizer_witness_verifies():
    K = CircleComplex(3, Fraction(3))
    kit = LadderKit(K)
    gens = {f"g{k}": arc_transposition_generator(K, k) for k in range(3)}
    gens.update({f"y{k}": loop_generator(K, k) for k in range(3)})
    g = transposition_element(K, gens, 0, 2, Fraction(2, 3) - 1)
    w = circle_witness(K, kit, g)
    assert verify_witness(w) is None


def test_prism_bound_for_transpositions():
    # prism images (away from the swapped pair's line) have norm <= n+1
    K = CircleComplex(3, Fraction(3))
    kit = LadderKit(K)
    g = arc_transposition_generator(K, 0)
    w = circle_witness(K, kit, g)
    for sigma in K.algebraic_simplices(1):
        s = K.simplex(sigma.simplex)
        indices, _ = s.geom
        if set(indices) != {0, 1}:
            assert w.image(sigma).l1_norm() <= 2
    for sigma in K.algebraic_simplices(0):
        assert w.image(sigma).l1_norm() <= 1


# -- the generated model ----------------------------------------------------------------

def test_gen_circle_model_full_verification():
    model = small_model()
    assert model.complex.validate().ok
    assert model.cycle.is_cycle()
    assert model.cycle.is_alternating()
    assert model.cycle.l1_norm() == 3


def test_gen_circle_stabilizers_on_cycle_support():
    model = small_model()
    for sigma in model.cycle.support():
        g = stabilizer_sign_search(model.action, sigma.simplex)
        assert g is not None
        assert g.simplex_image(sigma.simplex) == sigma.simplex
        # odd action: the two endpoints swap
        s = model.complex.simplex(sigma.simplex)
        vs = sorted(s.vertices)
        assert g.vertex_image(vs[0]) == vs[1]


def test_gen_circle_homology_class_nonzero():
    model = small_model(3, 2)
    basis = homology(model.complex, 1)
    assert basis.dimension >= 1
    coords = class_of(model.complex, model.cycle, basis)
    assert any(v != 0 for v in coords)


def test_circle_lp_seminorm_scales_inversely_with_window():
    # winding forces seminorm >= 1/W; spreading reaches ~2/(2W - 1)
    vals = {}
    for w in (2, 3):
        model = gen_circle_model(3, w)
        res = seminorm_lp(model.complex, model.cycle)
        assert res.value > 0
        assert res.value >= Fraction(1, w)
        vals[w] = res.value
    assert vals[3] < vals[2]


def test_circle_witness_bounding_chain_replay():
    model = small_model()
    c = model.cycle
    for label in sorted(model.witnesses):
        w = model.witnesses[label]
        b = bounding_chain(w, c)
        assert b.boundary() == apply(w.element, c) - c


def test_witness_from_word_composition():
    model = small_model()
    w = witness_from_word(model.action, model.witnesses, "g0*y1^-1*g2")
    assert verify_witness(w) is None


def test_generator_witness_inverse():
    from amensweep.models import invert_witness
    model = small_model()
    w = invert_witness(model.witnesses["y1"])
    assert verify_witness(w) is None


# -- synthetic instances -------------------------------------------------------------------

def test_gen_synthetic_passes_invariants():
    inst = gen_synthetic(0)
    assert inst.complex.validate().ok
    assert inst.cycle.is_cycle()
    assert inst.cycle.is_alternating()
    for w in inst.witnesses.values():
        assert verify_witness(w) is None


def test_gen_synthetic_uniform_diffusion_annihilates():
    inst = gen_synthetic(0)
    mu = Measure.uniform(inst.action.elements())
    assert diffuse(mu, inst.cycle).is_zero()


def test_gen_synthetic_deterministic():
    a = gen_synthetic(7)
    b = gen_synthetic(7)
    from amensweep.multicomplex import complex_to_obj
    assert canonical_dumps(complex_to_obj(a.complex)) == \
        canonical_dumps(complex_to_obj(b.complex))
    assert canonical_dumps(chain_to_obj(a.cycle)) == \
        canonical_dumps(chain_to_obj(b.cycle))


def test_gen_synthetic_varies_with_seed():
    objs = {canonical_dumps(chain_to_obj(gen_synthetic(s).cycle))
            for s in range(6)}
    assert len(objs) > 1


def test_synthetic_witness_provider_words():
    inst = gen_synthetic(1)
    G = inst.action
    for elem in G.elements():
        w = G.witness_provider(elem)
        assert verify_witness(w) is None


def test_certified_residuals_monotone_in_window():
    # once the window hosts N halving steps the 2^-N envelope is met, and
    # larger windows keep meeting it; a too-small window fails loudly
    from amensweep.certifier import certify
    from amensweep.errors import WindowExhausted
    n = 3
    with pytest.raises(WindowExhausted):
        small = gen_circle_model(3, 2)
        certify(small.action, small.cycle, 6)
    achieved = []
    for w in (6, 10):
        model = gen_circle_model(3, w)
        cert = certify(model.action, model.cycle, n)
        envelope = model.cycle.l1_norm() / 2 ** n
        assert cert.residual_bound <= envelope
        achieved.append(cert.residual_bound)
    assert min(achieved) <= max(achieved)


def test_circle_without_triangles_has_rigid_seminorm():
    # with the window capped at dimension 1 the only 2-chains are
    # degenerate, the alternating projection kills them, and the LP cannot
    # improve on the cycle's own norm
    from amensweep.models import CircleComplex, short_arc_cycle
    K = CircleComplex(3, Fraction(2), max_dim=1)
    z = short_arc_cycle(K).alt()
    res = seminorm_lp(K, z)
    assert res.value == z.l1_norm() == 3
