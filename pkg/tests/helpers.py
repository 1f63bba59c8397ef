"""Shared builders and independent oracles for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction
from math import comb

from amensweep.multicomplex import (AlgebraicSimplex, Multicomplex, Simplex,
                                    facet_key, simplicial_from_top)
from amensweep.chains import Chain


def simplicial_complex(top_faces) -> Multicomplex:
    """Simplicial complex from top faces (package builder, re-exported for
    the older test call sites)."""
    return simplicial_from_top(top_faces)


def point() -> Multicomplex:
    return simplicial_complex([("a",)])


def one_edge() -> Multicomplex:
    return simplicial_complex([("a", "b")])


def triangle_full() -> Multicomplex:
    """The full 2-simplex on {a,b,c} with all faces."""
    return simplicial_complex([("a", "b", "c")])


def triangle_boundary() -> Multicomplex:
    return simplicial_complex([("a", "b"), ("b", "c"), ("a", "c")])


def tetra_full() -> Multicomplex:
    return simplicial_complex([("a", "b", "c", "d")])


def tetra_boundary() -> Multicomplex:
    return simplicial_complex([("a", "b", "c"), ("a", "b", "d"),
                               ("a", "c", "d"), ("b", "c", "d")])


def path_graph(names) -> Multicomplex:
    return simplicial_complex([(names[i], names[i + 1])
                               for i in range(len(names) - 1)])


def cycle_graph(n: int) -> Multicomplex:
    names = [f"p{i}" for i in range(n)]
    return simplicial_complex([(names[i], names[(i + 1) % n])
                               for i in range(n)])


def bigon() -> Multicomplex:
    """Two vertices joined by two distinct edges: the smallest honest
    multicomplex (distinct simplices sharing a vertex set)."""
    u, w = "u", "w"
    key = facet_key([u])
    key_w = facet_key([w])
    vs = [Simplex("s[u]", (u,)), Simplex("s[w]", (w,))]
    edges = [
        Simplex("e1", (u, w), {key: "s[u]", key_w: "s[w]"}),
        Simplex("e2", (u, w), {key: "s[u]", key_w: "s[w]"}),
    ]
    return Multicomplex([u, w], vs + edges)


def bigon_fundamental_cycle(K: Multicomplex) -> Chain:
    t1 = AlgebraicSimplex("e1", ("u", "w"))
    t2 = AlgebraicSimplex("e2", ("u", "w"))
    return Chain(K, 1, {t1: Fraction(1), t2: Fraction(-1)})


def triangle_boundary_cycle(K: Multicomplex) -> Chain:
    """Coherently ordered boundary of the triangle a-b-c."""
    terms = {
        AlgebraicSimplex("s[a.b]", ("a", "b")): Fraction(1),
        AlgebraicSimplex("s[b.c]", ("b", "c")): Fraction(1),
        AlgebraicSimplex("s[a.c]", ("c", "a")): Fraction(1),
    }
    return Chain(K, 1, terms)


def surjection_count(domain: int, codomain: int) -> int:
    """Number of surjections {1..domain} -> {1..codomain}, by
    inclusion-exclusion (independent of the enumeration code)."""
    return sum((-1) ** i * comb(codomain, i) * (codomain - i) ** domain
               for i in range(codomain + 1))


def random_multicomplex(seed: int, max_simplices: int = 30,
                        cap: int = 3) -> Multicomplex:
    """Seeded random multicomplex: coherent face flags, with occasional
    duplicate simplices over a shared vertex set."""
    rng = random.Random(seed)
    n_verts = rng.randint(3, 7)
    verts = [f"v{i}" for i in range(n_verts)]
    simplices: dict[str, Simplex] = {}
    by_vset: dict[tuple[str, ...], list[str]] = {}
    counter = [0]

    def new_simplex(vset: tuple[str, ...], faces: dict[str, str]) -> str:
        sid = f"x{counter[0]}"
        counter[0] += 1
        simplices[sid] = Simplex(sid, vset, faces)
        by_vset.setdefault(vset, []).append(sid)
        return sid

    def build_flag(vset: tuple[str, ...], chosen: dict[tuple, str],
                   force_new: bool) -> str:
        """Pick or create a simplex on vset whose faces agree with the
        flag choices already made for its subsets."""
        if vset in chosen:
            return chosen[vset]
        if len(vset) == 1:
            ids = by_vset.get(vset)
            sid = ids[0] if ids else new_simplex(vset, {})
            chosen[vset] = sid
            return sid
        faces = {}
        for v in vset:
            rest = tuple(x for x in vset if x != v)
            faces[facet_key(rest)] = build_flag(rest, chosen, False)
        candidates = [sid for sid in by_vset.get(vset, ())
                      if simplices[sid].faces == faces]
        if candidates and not force_new and rng.random() < 0.8:
            sid = rng.choice(candidates)
        else:
            sid = new_simplex(vset, faces)
        chosen[vset] = sid
        return sid

    while len(simplices) < max_simplices:
        dim = rng.choice([1, 1, 2, 2, min(cap, 3)])
        dim = min(dim, n_verts - 1)
        vset = tuple(sorted(rng.sample(verts, dim + 1)))
        force_new = rng.random() < 0.25
        build_flag(vset, {}, force_new)
    return Multicomplex(verts, simplices.values())


def random_chain(rng: random.Random, K: Multicomplex, degree: int,
                 size: int = 4, cap: int = 4) -> Chain:
    basis = K.algebraic_simplices(degree, cap=cap)
    if not basis:
        return Chain.zero(K, degree)
    terms = {}
    for sigma in rng.sample(basis, min(size, len(basis))):
        num = rng.randint(-6, 6)
        den = rng.randint(1, 4)
        if num:
            terms[sigma] = Fraction(num, den)
    return Chain(K, degree, terms)


# -- group action helpers -----------------------------------------------------

from amensweep.action import (GroupAction, HomotopyWitness,  # noqa: E402
                              TableAutomorphism, apply)


def vertex_permutation_automorphism(K: Multicomplex, perm: dict,
                                    word: str) -> TableAutomorphism:
    """Extend a vertex permutation over a simplicial complex built by
    `simplicial_complex` (ids determined by vertex sets)."""
    full = {v: perm.get(v, v) for v in K.vertices}
    smap = {}
    for s in K.stored_simplices():
        image = sorted(full[v] for v in s.vertices)
        smap[s.sid] = "s[" + ".".join(image) + "]"
    return TableAutomorphism(K, full, smap, word)


def bigon_swap_action(K: Multicomplex) -> GroupAction:
    """Z/2 exchanging the bigon's two edges, fixing the vertices."""
    ident_v = {"u": "u", "w": "w"}
    swap = TableAutomorphism(
        K, ident_v, {"s[u]": "s[u]", "s[w]": "s[w]", "e1": "e2", "e2": "e1"},
        "t")
    return GroupAction(K, [("t", swap)])


def s3_action(K: Multicomplex) -> GroupAction:
    """Full symmetric group on the 2-simplex complex over {a,b,c}."""
    t_ab = vertex_permutation_automorphism(K, {"a": "b", "b": "a"}, "tab")
    t_bc = vertex_permutation_automorphism(K, {"b": "c", "c": "b"}, "tbc")
    return GroupAction(K, [("tab", t_ab), ("tbc", t_bc)])


def cone_map(K: Multicomplex, p: str):
    """Cone operator at p for simplicial complexes with vertex-set ids."""
    def s(sigma: AlgebraicSimplex) -> Chain:
        verts = sorted(set(sigma.vertices) | {p})
        sid = "s[" + ".".join(verts) + "]"
        return Chain.single(K, AlgebraicSimplex(sid, (p,) + sigma.vertices))
    return s


def cone_witness(K: Multicomplex, g: TableAutomorphism, p: str,
                 cap: int, label: str | None = None) -> HomotopyWitness:
    """Witness h = g∘cone - cone; valid whenever g fixes the cone point."""
    assert g.vertex_image(p) == p
    cone = cone_map(K, p)

    def image(sigma: AlgebraicSimplex) -> Chain:
        base = cone(sigma)
        return apply(g, base) - base

    return HomotopyWitness(g, K, cap, Fraction(2), image_fn=image,
                           label=label or g.word)


def s3_witnesses(K: Multicomplex, G: GroupAction, cap: int = 2) -> dict:
    """Verified witnesses for the S3 generators (cone point = fixed vertex)."""
    return {
        "tab": cone_witness(K, G.generator("tab"), "c", cap, "tab"),
        "tbc": cone_witness(K, G.generator("tbc"), "a", cap, "tbc"),
    }


def line_complex(L: int) -> Multicomplex:
    """Path x0 - x1 - ... - xL, a finite window onto the line."""
    return simplicial_complex([(f"x{i}", f"x{i+1}") for i in range(L)])


def line_shift_action(K: Multicomplex, L: int) -> GroupAction:
    """Windowed Z-action: shift one step rightwards (partial at the ends)."""
    vmap = {f"x{i}": f"x{i+1}" for i in range(L)}
    smap = {}
    for i in range(L):
        smap[f"s[x{i}]"] = f"s[x{i+1}]"
    for i in range(L - 1):
        a, b = sorted([f"x{i}", f"x{i+1}"])
        a2, b2 = sorted([f"x{i+1}", f"x{i+2}"])
        smap[f"s[{a}.{b}]"] = f"s[{a2}.{b2}]"
    shift = TableAutomorphism(K, vmap, smap, "r")
    return GroupAction(K, [("r", shift)], family="windowed",
                       translation_labels=["r"])


def edge_simplex_on_line(i: int, j: int) -> AlgebraicSimplex:
    a, b = sorted([f"x{i}", f"x{j}"])
    return AlgebraicSimplex(f"s[{a}.{b}]", (f"x{i}", f"x{j}"))


def random_measure(rng, G: GroupAction, k: int = 3):
    from amensweep.diffusion import Measure
    elements = rng.sample(G.elements(), min(k, G.order()))
    weights = [Fraction(rng.randint(1, 5)) for _ in elements]
    total = sum(weights)
    return Measure(elements, [w / total for w in weights])


import json  # noqa: E402


def tamper_certificate_obj(obj, rng):
    """Flip one stored coefficient (or numeric field) in a certificate."""
    places = []
    for si, st in enumerate(obj["steps"]):
        for name in ("cycle_out", "bounding_chain"):
            for ti in range(len(st[name])):
                places.append(("steps", si, name, ti))
    for si, st in enumerate(obj["steps"]):
        places.append(("norm", si, "cycle_out"))
        places.append(("norm", si, "bounding"))
    for ti in range(len(obj["partial_bounding_chain"])):
        places.append(("partial", ti))
    for ti in range(len(obj["residual_cycle"])):
        places.append(("residual", ti))
    places.append(("residual_bound",))
    places.append(("initial", rng.randrange(len(obj["initial_cycle"]))))
    spot = places[rng.randrange(len(places))]
    out = json.loads(json.dumps(obj))
    if spot[0] == "steps":
        _, si, name, ti = spot
        out["steps"][si][name][ti]["coeff"] = _bump_coeff(
            out["steps"][si][name][ti]["coeff"])
    elif spot[0] == "norm":
        _, si, which = spot
        out["steps"][si]["norms"][which] = _bump_coeff(
            out["steps"][si]["norms"][which])
    elif spot[0] == "partial":
        out["partial_bounding_chain"][spot[1]]["coeff"] = _bump_coeff(
            out["partial_bounding_chain"][spot[1]]["coeff"])
    elif spot[0] == "residual":
        out["residual_cycle"][spot[1]]["coeff"] = _bump_coeff(
            out["residual_cycle"][spot[1]]["coeff"])
    elif spot[0] == "initial":
        out["initial_cycle"][spot[1]]["coeff"] = _bump_coeff(
            out["initial_cycle"][spot[1]]["coeff"])
    else:
        out["residual_bound"] = _bump_coeff(out["residual_bound"] or "0")
    return out


def _bump_coeff(coeff: str) -> str:
    return str(Fraction(coeff) + Fraction(3, 7))


def _bump_coeff(coeff: str) -> str:
    return str(Fraction(coeff) + Fraction(3, 7))
