"""Desk-scale instance generators.

The circle model is a finite window onto the aspherical multicomplex of a
circle with m marked vertices: an edge per path class between two marked
points (labelled by its winding displacement t, |t| <= window), and one
higher simplex per compatible labelling of a vertex tuple.  The group acts
through path families: based loops shift labels at their basepoint;
short-arc transpositions swap adjacent vertices while relabelling by path
composition.  Every element used in certification carries an explicitly
constructed chain-homotopy witness (prism for transposition types, ladder
chains for loop types), verified rather than trusted.

`gen_synthetic` produces finite-group instances: the full symmetric group
on a 2-simplex with cone-operator witnesses, plus an alternating boundary
cycle whose support it annihilates in one uniform diffusion.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .action import (GroupAction, GroupElement, HomotopyWitness,
                     IdentityElement, TableAutomorphism, apply)
from .chains import Chain
from .errors import DomainError, WindowExhausted
from .homology_lp import row_reduce
from .multicomplex import (AlgebraicSimplex, Multicomplex, Simplex,
                           facet_key, simplicial_from_top)

ZERO = Fraction(0)
ONE = Fraction(1)


# -- circle complex -----------------------------------------------------------

_SIMPLEX_ID = re.compile(r"^x(\d+)\[([\d.]+)\|(.+)\]$")


def _vertex_id(k: int) -> str:
    return f"v{k}"


def _simplex_id(indices: tuple[int, ...], consec: tuple[Fraction, ...]) -> str:
    from .serialize import frac_str
    d = len(indices) - 1
    return (f"x{d}[" + ".".join(str(i) for i in indices) + "|"
            + ",".join(frac_str(t) for t in consec) + "]")


class CircleComplex(Multicomplex):
    """Windowed circle model: lazily materialized simplices keyed by their
    vertex indices and consecutive winding displacements.

    All displacements are multiples of 1/m; internally they are scaled by m
    and handled as integers, with Fractions only at the API boundary.
    """

    def __init__(self, m: int, window: Fraction, max_dim: int = 2,
                 enumeration_cap: int = 300000):
        if m < 3:
            raise DomainError("circle model needs at least 3 marked vertices")
        window = Fraction(window)
        if window < 2:
            raise DomainError("circle model needs window >= 2")
        if (window * m).denominator != 1:
            raise DomainError("window must be a multiple of 1/m")
        self.m = m
        self.window = window
        self.swindow = int(window * m)  # window in scaled units
        self.max_dim = max_dim
        self.enumeration_cap = enumeration_cap
        self._sgeom: dict[str, tuple[tuple[int, ...], tuple[int, ...]]] = {}
        self._scaled_ids: dict[tuple, str | None] = {}
        vertices = [_vertex_id(k) for k in range(m)]
        simplices = [Simplex(_vertex_id(k), (_vertex_id(k),), {},
                             geom=((k,), ()))
                     for k in range(m)]
        super().__init__(vertices, simplices)
        self._edges_enumerated = False
        self._full_dims: set[int] = set()
        self._enumerate_edges()

    # -- scaled-integer fast path ------------------------------------------

    def scaled_geom(self, sid: str) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(vertex indices, lifts) with lifts in units of 1/m."""
        got = self._sgeom.get(sid)
        if got is None:
            indices, consec = self.simplex(sid).geom
            lifts = [0]
            for t in consec:
                lifts.append(lifts[-1] + int(t * self.m))
            got = (indices, tuple(lifts))
            self._sgeom[sid] = got
        return got

    def simplex_for_scaled(self, pairs: list[tuple[int, int]]) -> str | None:
        """Simplex id for (vertex index, scaled lift) pairs, materializing
        on demand; None when a pairwise class exceeds the window."""
        pairs.sort()
        key = tuple(pairs)
        try:
            return self._scaled_ids[key]
        except KeyError:
            pass
        m = self.m
        sw = self.swindow
        lo = hi = pairs[0][1]
        # lifts are defined up to a global constant: congruence is relative
        offset = (pairs[0][1] - pairs[0][0]) % m
        prev_i = -1
        ok = True
        for i, lift in pairs:
            if i == prev_i:
                raise DomainError("repeated vertex in lift data")
            prev_i = i
            if (lift - i) % m != offset:
                ok = False
                break
            if lift < lo:
                lo = lift
            elif lift > hi:
                hi = lift
        if not ok or hi - lo > sw or len(pairs) - 1 > self.max_dim:
            self._scaled_ids[key] = None
            return None
        indices = tuple(i for i, _ in pairs)
        consec = tuple(Fraction(pairs[a + 1][1] - pairs[a][1], m)
                       for a in range(len(pairs) - 1))
        sid = (_vertex_id(indices[0]) if len(indices) == 1
               else _simplex_id(indices, consec))
        if self._lookup(sid) is None:
            sid = None
        self._scaled_ids[key] = sid
        return sid

    # edge labels between i < j live on the lattice (j - i)/m + Z
    def _label_range(self, i: int, j: int) -> list[Fraction]:
        base = Fraction(j - i, self.m)
        out = []
        k = -(int(self.window + base))  # smallest integer with base+k >= -W
        while base + k < -self.window:
            k += 1
        t = base + k
        while t <= self.window:
            out.append(t)
            t += 1
        return out

    def _enumerate_edges(self):
        for i in range(self.m):
            for j in range(i + 1, self.m):
                for t in self._label_range(i, j):
                    self._lookup(_simplex_id((i, j), (t,)))
        self._edges_enumerated = True
        self._full_dims.add(1)

    def _resolve(self, sid: str) -> Simplex | None:
        parsed = self._parse(sid)
        if parsed is None:
            return None
        indices, consec = parsed
        return self._build(indices, consec)

    def _parse(self, sid: str) -> tuple[tuple[int, ...], tuple[Fraction, ...]] | None:
        m = _SIMPLEX_ID.match(sid)
        if not m:
            return None
        d = int(m.group(1))
        try:
            indices = tuple(int(x) for x in m.group(2).split("."))
            consec = tuple(Fraction(x) for x in m.group(3).split(","))
        except (ValueError, ZeroDivisionError):
            return None
        if len(indices) != d + 1 or len(consec) != d:
            return None
        if not self._admissible(indices, consec):
            return None
        return indices, consec

    def _admissible(self, indices, consec) -> bool:
        if len(indices) - 1 > self.max_dim:
            return False
        if any(not 0 <= i < self.m for i in indices):
            return False
        if any(a >= b for a, b in zip(indices, indices[1:])):
            return False
        # lattice congruence and window bounds for every pairwise class
        lift = ZERO
        lifts = [ZERO]
        for (a, b), t in zip(zip(indices, indices[1:]), consec):
            if (t - Fraction(b - a, self.m)).denominator != 1:
                return False
            lift += t
            lifts.append(lift)
        for x, y in combinations(lifts, 2):
            if abs(y - x) > self.window:
                return False
        return True

    def _build(self, indices, consec) -> Simplex:
        sid = _simplex_id(indices, consec)
        faces = {}
        if len(indices) > 1:
            for drop in range(len(indices)):
                sub_idx = indices[:drop] + indices[drop + 1:]
                sub_consec = _drop_position(consec, drop)
                key = facet_key(_vertex_id(i) for i in sub_idx)
                if len(sub_idx) == 1:
                    faces[key] = _vertex_id(sub_idx[0])
                else:
                    faces[key] = _simplex_id(sub_idx, sub_consec)
        return Simplex(sid, tuple(_vertex_id(i) for i in indices), faces,
                       geom=(indices, consec))

    def edge_id(self, i: int, j: int, t: Fraction) -> str:
        """Canonical id of the path class from v_i to v_j with displacement
        t (reversal flips the sign); None-safe via has_simplex."""
        if i == j:
            raise DomainError("edges need distinct endpoints")
        if i < j:
            return _simplex_id((i, j), (Fraction(t),))
        return _simplex_id((j, i), (-Fraction(t),))

    def simplex_for_lifts(self, pairs: list[tuple[int, Fraction]]) -> str | None:
        """Simplex id for distinct vertices with given lifts; None when a
        pairwise class exceeds the window."""
        scaled = []
        for k, x in pairs:
            sx = Fraction(x) * self.m
            if sx.denominator != 1:
                return None
            scaled.append((k, int(sx)))
        return self.simplex_for_scaled(scaled)

    def simplices_of_dim(self, k: int) -> list[Simplex]:
        if k <= 1 or k in self._full_dims:
            return super().simplices_of_dim(k)
        self._enumerate_dim(k)
        return super().simplices_of_dim(k)

    def _enumerate_dim(self, k: int):
        if k > self.max_dim:
            self._full_dims.add(k)
            return
        est = 1
        for _ in range(k):
            est *= int(2 * self.window) + 1
        est *= len(list(combinations(range(self.m), k + 1)))
        if est > self.enumeration_cap:
            raise DomainError(
                f"full enumeration of dimension {k} (~{est} simplices) "
                f"exceeds the cap; shrink the window")
        for idx in combinations(range(self.m), k + 1):
            self._extend(idx, ())
        self._full_dims.add(k)

    def _extend(self, indices, consec):
        if len(consec) == len(indices) - 1:
            if self._admissible(indices, consec):
                self._lookup(_simplex_id(indices, consec))
            return
        a = indices[len(consec)]
        b = indices[len(consec) + 1]
        for t in self._label_range(a, b):
            cand = consec + (t,)
            # prune: partial lifts must stay within the window
            lift = ZERO
            lifts = [ZERO]
            for v in cand:
                lift += v
                lifts.append(lift)
            if max(lifts) - min(lifts) <= self.window:
                self._extend(indices, cand)


def _drop_position(consec: tuple[Fraction, ...], drop: int) -> tuple[Fraction, ...]:
    if drop == 0:
        return consec[1:]
    if drop == len(consec):
        return consec[:-1]
    return (consec[:drop - 1] + (consec[drop - 1] + consec[drop],)
            + consec[drop + 1:])


# -- circle group elements ------------------------------------------------------

class CircleElement(GroupElement):
    """Path-family automorphism in closed form: a vertex permutation plus a
    per-vertex winding displacement, with d(k) = pos(perm(k)) - pos(k) mod 1."""

    __slots__ = ("complex", "perm", "disp", "sdisp", "word", "_key",
                 "_imgcache")

    def __init__(self, complex: CircleComplex, perm: tuple[int, ...],
                 disp: tuple[Fraction, ...], word: str):
        self.complex = complex
        self.perm = perm
        self.disp = tuple(Fraction(d) for d in disp)
        self.word = word
        self._key = None
        self._imgcache: dict[str, str | None] = {}
        m = complex.m
        sdisp = []
        for k in range(m):
            s = self.disp[k] * m
            if s.denominator != 1 or (int(s) - (perm[k] - k)) % m:
                raise DomainError(
                    f"displacement {self.disp[k]} incompatible with "
                    f"{k} -> {perm[k]}")
            sdisp.append(int(s))
        self.sdisp = tuple(sdisp)

    @classmethod
    def identity(cls, complex: CircleComplex) -> "CircleElement":
        m = complex.m
        return cls(complex, tuple(range(m)), (ZERO,) * m, "e")

    def vertex_image(self, v: str) -> str:
        return _vertex_id(self.perm[int(v[1:])])

    def simplex_image(self, sid: str) -> str | None:
        try:
            return self._imgcache[sid]
        except KeyError:
            pass
        indices, lifts = self.complex.scaled_geom(sid)
        if len(indices) == 1:
            out = _vertex_id(self.perm[indices[0]])
        else:
            perm, sdisp = self.perm, self.sdisp
            pairs = [(perm[k], lifts[pos] + sdisp[k])
                     for pos, k in enumerate(indices)]
            out = self.complex.simplex_for_scaled(pairs)
        self._imgcache[sid] = out
        return out

    def compose(self, other: GroupElement) -> GroupElement:
        if isinstance(other, IdentityElement):
            return self
        if not isinstance(other, CircleElement) or self.complex is not other.complex:
            raise DomainError("cannot compose foreign elements")
        m = self.complex.m
        perm = tuple(self.perm[other.perm[k]] for k in range(m))
        disp = tuple(other.disp[k] + self.disp[other.perm[k]]
                     for k in range(m))
        from .action import concat_words
        return CircleElement(self.complex, perm, disp,
                             concat_words(self.word, other.word))

    def inverse(self) -> "CircleElement":
        m = self.complex.m
        inv_perm = [0] * m
        for k, p in enumerate(self.perm):
            inv_perm[p] = k
        disp = tuple(-self.disp[inv_perm[k]] for k in range(m))
        from .action import invert_word
        return CircleElement(self.complex, tuple(inv_perm), disp,
                             invert_word(self.word))

    def key(self):
        if self._key is None:
            if all(p == k for k, p in enumerate(self.perm)) and \
                    all(d == 0 for d in self.disp):
                self._key = "__identity__"
            else:
                self._key = (self.perm, self.disp)
        return self._key

    def is_identity_on_vertices(self) -> bool:
        return all(p == k for k, p in enumerate(self.perm))

    def moved_pair(self) -> tuple[int, int] | None:
        moved = [k for k, p in enumerate(self.perm) if p != k]
        if len(moved) == 2 and self.perm[moved[0]] == moved[1]:
            return moved[0], moved[1]
        return None

    def is_loop_type(self) -> bool:
        return self.is_identity_on_vertices()

    def is_transposition_type(self) -> bool:
        pair = self.moved_pair()
        if pair is None:
            return False
        return all(self.disp[k] == 0 for k in range(self.complex.m)
                   if k not in pair)


def loop_generator(K: CircleComplex, k: int) -> CircleElement:
    disp = [ZERO] * K.m
    disp[k] = ONE
    return CircleElement(K, tuple(range(K.m)), tuple(disp), f"y{k}")


def arc_transposition_generator(K: CircleComplex, k: int) -> CircleElement:
    """Swap v_k and v_{k+1} along the short arc between them."""
    m = K.m
    j = (k + 1) % m
    perm = list(range(m))
    perm[k], perm[j] = j, k
    disp = [ZERO] * m
    disp[k] = Fraction(1, m)
    disp[j] = -Fraction(1, m)
    return CircleElement(K, tuple(perm), tuple(disp), f"g{k}")


def transposition_element(K: CircleComplex, generators: dict[str, CircleElement],
                          i: int, j: int, t: Fraction) -> CircleElement:
    """The swap of v_i, v_j along the class-t path, as an explicit word in
    the model generators (adjacent-arc routing plus a loop conjugation)."""
    if not 0 <= i < j < K.m:
        raise DomainError("need 0 <= i < j < m")
    t = Fraction(t)
    route = IdentityElement(K)
    # bring j down next to i stepwise: conjugating g_i by the route yields
    # the bare (i j) swap with some displacement s on the same lattice as t
    for a in range(j - 1, i, -1):
        route = route.compose(generators[f"g{a}"])
    base = generators[f"g{i}"]
    conj = route.compose(base).compose(route.inverse()) if j > i + 1 else base
    s = conj.disp[i]
    q = t - s
    if q.denominator != 1:
        raise DomainError(f"class {t} unreachable from base displacement {s}")
    q = int(q)
    if q == 0:
        return conj
    loop = generators[f"y{j}"]
    word_loop = loop if q > 0 else loop.inverse()
    left: GroupElement = IdentityElement(K)
    for _ in range(abs(q)):
        left = left.compose(word_loop)
    return left.compose(conj).compose(left.inverse())


# -- ladder toolkit ----------------------------------------------------------------

def _edge_chain(K: CircleComplex, a: int, b: int, s: Fraction,
                coeff: Fraction = ONE) -> Chain:
    """The path class from v_a to v_b with displacement s, as a 1-chain."""
    sid = K.edge_id(a, b, s)
    if not K.has_simplex(sid):
        raise WindowExhausted(f"edge {a}->{b} class {s} outside the window",
                              simplex=sid)
    return Chain(K, 1, _trusted={
        AlgebraicSimplex(sid, (_vertex_id(a), _vertex_id(b))): coeff})


def _loop_chain(K: CircleComplex, x: int, y: int) -> Chain:
    """Winding-one cycle through v_x, v_y: short class forward, complement
    back."""
    s = Fraction((y - x) % K.m, K.m)
    return _edge_chain(K, x, y, s) + _edge_chain(K, y, x, 1 - s)


def _third_vertex(m: int, a: int, b: int) -> int:
    return min(set(range(m)) - {a, b})


def _triangle_chain(K: CircleComplex, verts: tuple[int, int, int],
                    lifts: tuple[Fraction, Fraction, Fraction],
                    coeff: Fraction = ONE) -> Chain:
    sid = K.simplex_for_lifts(list(zip(verts, lifts)))
    if sid is None:
        raise WindowExhausted("ladder triangle outside the window")
    tup = tuple(_vertex_id(v) for v in verts)
    return Chain(K, 2, _trusted={AlgebraicSimplex(sid, tup): coeff})


def _strip(K: CircleComplex, a: int, b: int, u: Fraction) -> Chain:
    """2-chain P with boundary(P) = E(a,b,u+1) - E(a,b,u) - loop(b,c)."""
    c = _third_vertex(K.m, a, b)
    beta = Fraction((c - b) % K.m, K.m)
    tri1 = _triangle_chain(K, (a, b, c), (ZERO, u, u + beta))
    tri2 = _triangle_chain(K, (a, c, b), (ZERO, u + beta, u + 1))
    return -(tri1 + tri2)


def _ladder(K: CircleComplex, a: int, b: int, u: Fraction, k: int) -> Chain:
    """2-chain with boundary = E(a,b,u+k) - E(a,b,u) - k*loop(b,c)."""
    out = Chain.zero(K, 2)
    if k >= 0:
        for l in range(k):
            out = out + _strip(K, a, b, u + l)
    else:
        for l in range(-k):
            out = out - _strip(K, a, b, u - 1 - l)
    return out


class LadderKit:
    """Shared ladder machinery with cached loop movers.

    Movers connect each two-edge loop to the standard loop through
    (0, third(0)); they are found once by an exact boundary solve over the
    small-label triangle pool and verified on the spot.
    """

    def __init__(self, K: CircleComplex):
        self.K = K
        self.base_pair = (0, 1)
        self._movers: dict[tuple[int, int], Chain] = {}
        self._pool: list[AlgebraicSimplex] | None = None

    def base_loop(self) -> Chain:
        return _loop_chain(self.K, *self.base_pair)

    def mover(self, x: int, y: int) -> Chain:
        """2-chain M with boundary(M) = loop(x,y) - loop(base)."""
        key = (x, y)
        if key not in self._movers:
            target = _loop_chain(self.K, x, y) - self.base_loop()
            self._movers[key] = self._solve_boundary(target)
        return self._movers[key]

    def _triangle_pool(self) -> list[AlgebraicSimplex]:
        """All algebraic 2-simplices over the small-label part of the
        window: every tuple orientation of each triangle, plus degenerate
        tuples over edges and vertices (needed to convert between tuple
        orientations)."""
        if self._pool is None:
            from itertools import permutations
            from .multicomplex import surjective_tuples
            K = self.K
            pool = []
            bound = min(Fraction(2), K.window)
            for verts in combinations(range(K.m), 3):
                i, j, k = verts
                names = [_vertex_id(v) for v in verts]
                for t1 in K._label_range(i, j):
                    if abs(t1) > bound:
                        continue
                    for t2 in K._label_range(j, k):
                        if abs(t2) > bound or abs(t1 + t2) > bound:
                            continue
                        sid = _simplex_id(verts, (t1, t2))
                        if K.has_simplex(sid):
                            for perm in permutations(names):
                                pool.append(AlgebraicSimplex(sid, perm))
            for i in range(K.m):
                for j in range(i + 1, K.m):
                    for t in K._label_range(i, j):
                        if abs(t) > bound:
                            continue
                        sid = _simplex_id((i, j), (t,))
                        names = sorted([_vertex_id(i), _vertex_id(j)])
                        for tup in surjective_tuples(names, 3):
                            pool.append(AlgebraicSimplex(sid, tup))
            for k in range(K.m):
                v = _vertex_id(k)
                pool.append(AlgebraicSimplex(v, (v, v, v)))
            self._pool = pool
        return self._pool

    def _solve_boundary(self, target: Chain) -> Chain:
        """Exact solve of boundary(x) = target over the triangle pool."""
        cols = self._triangle_pool()
        boundaries = [Chain.single(self.K, sigma).boundary() for sigma in cols]
        row_index: dict[AlgebraicSimplex, int] = {}
        for ch in boundaries + [target]:
            for sigma, _ in ch.items():
                row_index.setdefault(sigma, len(row_index))
        rows = [[ZERO] * (len(cols) + 1) for _ in range(len(row_index))]
        for c, ch in enumerate(boundaries):
            for sigma, coeff in ch.items():
                rows[row_index[sigma]][c] = coeff
        for sigma, coeff in target.items():
            rows[row_index[sigma]][-1] = coeff
        work, pivots = row_reduce(rows)
        sol = [ZERO] * len(cols)
        for r, p in enumerate(pivots):
            if p == len(cols):
                raise DomainError(
                    "no ladder mover found; window too small for the "
                    "loop-connecting chain")
            sol[p] = work[r][-1]
        out = Chain(self.K, 2,
                    _trusted={cols[c]: v for c, v in enumerate(sol) if v != 0})
        if out.boundary() != target:
            raise DomainError("mover solve failed to replay")
        return out


# -- circle witnesses ------------------------------------------------------------

def _parse_vertex(v: str) -> int:
    return int(v[1:])


def _lifts_of(K: CircleComplex, sid: str) -> dict[int, Fraction]:
    indices, consec = K.simplex(sid).geom
    lifts = {indices[0]: ZERO}
    acc = ZERO
    for (a, b), t in zip(zip(indices, indices[1:]), consec):
        acc += t
        lifts[b] = acc
    return lifts


def _prism_image(K: CircleComplex, g: CircleElement,
                 sigma: AlgebraicSimplex) -> Chain:
    """Raw prism over sigma: alternating sum of the corner tuples, each
    resolved to a model simplex through its vertex lifts."""
    lifts = _lifts_of(K, sigma.simplex)
    tup = tuple(_parse_vertex(v) for v in sigma.vertices)
    n = len(tup) - 1
    out = Chain.zero(K, n + 1)
    sign = ONE
    for i in range(n + 1):
        tuple_entries = []
        by_vertex: dict[int, Fraction] = {}
        for p in range(n + 2):
            if p <= i:
                k = tup[p]
                lift = lifts[k]
            else:
                base = tup[p - 1]
                k = g.perm[base]
                lift = lifts[base] + g.disp[base]
            if k in by_vertex and by_vertex[k] != lift:
                raise DomainError(
                    f"prism corner inconsistent on {sigma}: vertex v{k} "
                    f"wants lifts {by_vertex[k]} and {lift}")
            by_vertex[k] = lift
            tuple_entries.append(k)
        sid = K.simplex_for_lifts(sorted(by_vertex.items()))
        if sid is None:
            raise WindowExhausted(
                f"prism simplex over {sigma} leaves the window",
                element=g.word, simplex=sigma.simplex)
        term = AlgebraicSimplex(sid, tuple(_vertex_id(k)
                                           for k in tuple_entries))
        out = out + Chain(K, n + 1, _trusted={term: sign})
        sign = -sign
    return out


def _transposition_h0(K: CircleComplex, g: CircleElement,
                      sigma: AlgebraicSimplex) -> Chain:
    k = _parse_vertex(sigma.vertices[0])
    if g.perm[k] == k:
        term = AlgebraicSimplex(_vertex_id(k), (_vertex_id(k), _vertex_id(k)))
        return Chain(K, 1, _trusted={term: ONE})
    return _edge_chain(K, k, g.perm[k], g.disp[k])


def _transposition_h1(K: CircleComplex, kit: LadderKit, g: CircleElement,
                      sigma: AlgebraicSimplex) -> Chain:
    """Degree-1 witness images for a single-transposition element: the raw
    prism wherever its corners are consistent, and an explicit ladder patch
    on the swapped pair's own line."""
    i, j = g.moved_pair()
    verts = {_parse_vertex(v) for v in sigma.vertices}
    if verts != {i, j}:
        return _prism_image(K, g, sigma)
    indices, consec = K.simplex(sigma.simplex).geom
    a = _parse_vertex(sigma.vertices[0])
    b = _parse_vertex(sigma.vertices[1])
    # displacement of sigma as a path a -> b, and of the defining arc
    s = consec[0] if a == indices[0] else -consec[0]
    t_a = g.disp[a]
    if s == t_a:
        return _prism_image(K, g, sigma)  # corners agree with the arc
    k = s - t_a
    if k.denominator != 1:
        raise DomainError("pair line labels off the lattice")
    k = int(k)
    lad1 = _ladder(K, b, a, -t_a, k)
    lad2 = _ladder(K, a, b, t_a, k)
    ca = _third_vertex(K.m, b, a)
    cb = _third_vertex(K.m, a, b)
    out = lad1 - lad2
    if k != 0:
        out = out + k * (kit.mover(a, ca) - kit.mover(b, cb))
    return out


def _loop_h0(K: CircleComplex, g: CircleElement,
             sigma: AlgebraicSimplex) -> Chain:
    k = _parse_vertex(sigma.vertices[0])
    d = g.disp[k]
    if d == 0:
        return Chain.zero(K, 1)
    return d * _loop_chain(K, k, (k + 1) % K.m)


def _loop_h1(K: CircleComplex, kit: LadderKit, g: CircleElement,
             sigma: AlgebraicSimplex) -> Chain:
    tupv = tuple(_parse_vertex(v) for v in sigma.vertices)
    a, b = tupv
    if a == b:
        return Chain.zero(K, 2)
    lifts = _lifts_of(K, sigma.simplex)
    s = lifts[b] - lifts[a]
    delta = g.disp[b] - g.disp[a]
    if delta.denominator != 1:
        raise DomainError("loop displacements must be integral")
    delta = int(delta)
    out = _ladder(K, a, b, s, delta)
    if delta != 0:
        out = out + delta * kit.mover(b, _third_vertex(K.m, a, b))
    next_b = (b + 1) % K.m
    next_a = (a + 1) % K.m
    if g.disp[b] != 0:
        out = out - g.disp[b] * kit.mover(b, next_b)
    if g.disp[a] != 0:
        out = out + g.disp[a] * kit.mover(a, next_a)
    return out


def circle_witness(K: CircleComplex, kit: LadderKit, g: CircleElement,
                   bound: Fraction | None = None,
                   label: str | None = None) -> HomotopyWitness:
    """Degree-cap-1 chain-homotopy witness for a loop-type or single-
    transposition-type circle element."""
    if g.is_loop_type():
        def image(sigma: AlgebraicSimplex) -> Chain:
            if sigma.degree == 0:
                return _loop_h0(K, g, sigma)
            if sigma.degree == 1:
                return _loop_h1(K, kit, g, sigma)
            raise DomainError("circle witnesses are capped at degree 1")
        if bound is None:
            bound = _loop_bound(K, kit, g)
    elif g.is_transposition_type():
        def image(sigma: AlgebraicSimplex) -> Chain:
            if sigma.degree == 0:
                return _transposition_h0(K, g, sigma)
            if sigma.degree == 1:
                return _transposition_h1(K, kit, g, sigma)
            raise DomainError("circle witnesses are capped at degree 1")
        if bound is None:
            bound = _transposition_bound(K, kit, g)
    else:
        raise DomainError(
            f"no witness recipe for {g.word}: neither loop-type nor a "
            f"single transposition")
    return HomotopyWitness(g, K, 1, bound, image_fn=image,
                           label=label or g.word)


def prism_witness(K: CircleComplex, kit: LadderKit, g: CircleElement,
                  cap: int = 1, label: str | None = None) -> HomotopyWitness:
    """Witness built from the prism over each simplex (with explicit ladder
    patches on a swapped pair's own line).

    The windowed circle model carries chain-homotopy data only up to
    degree 1: with marked vertices alone, a degree-2 homotopy would have to
    slide through unmarked circle points that the window does not contain.
    """
    if cap > 1:
        raise DomainError(
            "circle witnesses are capped at degree 1; the marked-vertex "
            "window holds no higher homotopy data")
    return circle_witness(K, kit, g, label=label)


def _mover_norm_bound(kit: LadderKit) -> Fraction:
    # movers live on the small-label pool; take the worst over all pairs
    if getattr(kit, "_mover_bound", None) is None:
        pairs = {(x, y) for x in range(kit.K.m) for y in range(kit.K.m)
                 if x != y}
        worst = ZERO
        for x, y in sorted(pairs):
            worst = max(worst, kit.mover(x, y).l1_norm())
        kit._mover_bound = worst
    return kit._mover_bound

def _loop_bound(K: CircleComplex, kit: LadderKit, g: CircleElement) -> Fraction:
    dmax = max((abs(d) for d in g.disp), default=ZERO)
    mover = _mover_norm_bound(kit)
    # h0 <= 2 dmax; h1 <= 2|delta| ladder strips plus (|delta| + 2 dmax)
    # movers, with |delta| <= 2 dmax
    return 2 + 4 * dmax + 4 * dmax * mover


def _transposition_bound(K: CircleComplex, kit: LadderKit,
                         g: CircleElement) -> Fraction:
    span = 2 * K.window + 1
    mover = _mover_norm_bound(kit)
    # prism pieces: at most 2; patched line images: two |k|-ladders plus
    # 2|k| movers with |k| <= 2W+1
    return max(Fraction(2), 4 * span + 2 * span * mover)


# -- witnesses from generator words -------------------------------------------------

def invert_witness(w: HomotopyWitness) -> HomotopyWitness:
    """Witness for the inverse element: h'(sigma) = -h(g^{-1} sigma)."""
    g_inv = w.element.inverse()

    def image(sigma: AlgebraicSimplex) -> Chain:
        return -w.image_of_chain(
            Chain.single(w.complex, g_inv.algebraic_image(sigma)))

    return HomotopyWitness(g_inv, w.complex, w.degree_cap, w.bound,
                           image_fn=image, label=f"({w.label})^-1")


def witness_from_word(G: GroupAction,
                      by_label: dict[str, HomotopyWitness],
                      word: str) -> HomotopyWitness:
    """Compose generator witnesses along a word (rightmost factor first)."""
    from .action import compose_witness, identity_witness, parse_word
    factors = parse_word(word)
    if not factors:
        cap = min((w.degree_cap for w in by_label.values()), default=1)
        return identity_witness(G.complex, G.identity(), cap)
    acc: HomotopyWitness | None = None
    for label, exp in factors:
        base = by_label[label]
        step = base if exp > 0 else invert_witness(base)
        for _ in range(abs(exp)):
            acc = step if acc is None else compose_witness(acc, step)
    return acc


# -- the circle model ----------------------------------------------------------------

@dataclass
class CircleModel:
    """A generated circle instance: complex, group action with witness
    machinery installed, per-generator witnesses, fundamental cycle."""

    m: int
    window: Fraction
    complex: CircleComplex
    action: GroupAction
    witnesses: dict[str, HomotopyWitness]
    cycle: Chain
    kit: LadderKit = field(repr=False, default=None)

    def witness_for(self, g: GroupElement) -> HomotopyWitness:
        if isinstance(g, IdentityElement):
            from .action import identity_witness
            return identity_witness(self.complex, g, 1)
        return circle_witness(self.complex, self.kit, g)


def short_arc_cycle(K: CircleComplex) -> Chain:
    """Sum of the m short arcs, oriented coherently around the circle."""
    terms: dict[AlgebraicSimplex, Fraction] = {}
    m = K.m
    for k in range(m):
        j = (k + 1) % m
        # displacement from v_k to v_{k+1} along the short arc is always 1/m
        sid = K.edge_id(k, j, Fraction(1, m))
        sigma = AlgebraicSimplex(sid, (_vertex_id(k), _vertex_id(j)))
        terms[sigma] = terms.get(sigma, ZERO) + ONE
    return Chain(K, 1, terms)


def _circle_stabilizer_hint(K: CircleComplex,
                            generators: dict[str, CircleElement]):
    def hint(simplex_id: str) -> CircleElement | None:
        s = K.simplex(simplex_id)
        indices, consec = s.geom
        if len(indices) < 2:
            return None
        i, j = indices[0], indices[1]
        return transposition_element(K, generators, i, j, consec[0])
    return hint


def _circle_fold_candidates(K: CircleComplex,
                            generators: dict[str, CircleElement],
                            per_line: int = 3):
    """Reflection elements for the synthesis greedy: odd stabilizers of
    center edges of each mass-carrying pair line."""

    def candidates(h: Chain) -> list[CircleElement]:
        lines: dict[tuple[int, int], list[tuple[Fraction, Fraction]]] = {}
        for sigma, coeff in h.items():
            s = K.simplex(sigma.simplex)
            indices, consec = s.geom
            if len(indices) != 2:
                continue
            lines.setdefault((indices[0], indices[1]), []).append(
                (consec[0], abs(coeff)))
        out: list[CircleElement] = []
        for (i, j) in sorted(lines):
            data = sorted(lines[(i, j)])
            total = sum((w for _, w in data), ZERO)
            labels = [t for t, _ in data]
            centers = []
            # mass-weighted median
            acc = ZERO
            for t, w in data:
                acc += w
                if 2 * acc >= total:
                    centers.append(t)
                    break
            # midpoint of the support range, rounded onto the lattice
            lo, hi = labels[0], labels[-1]
            mid = (lo + hi) / 2
            frac_part = lo - int(lo)
            rounded = Fraction(int(mid - frac_part)) + frac_part
            centers.extend([rounded, rounded + 1])
            seen = set()
            for t in centers[:per_line + 1]:
                if t in seen or abs(t) > K.window:
                    continue
                seen.add(t)
                out.append(transposition_element(K, generators, i, j, t))
        return out

    return candidates


def _circle_span(K: CircleComplex):
    def span(h: Chain):
        worst = ZERO
        for sigma, _ in h.items():
            indices, consec = K.simplex(sigma.simplex).geom
            lift = ZERO
            for t in consec:
                lift += t
                worst = max(worst, abs(lift))
        return worst
    return span


def gen_circle_model(m: int, window, *, max_dim: int = 2,
                     verify: bool | str = "auto",
                     enumeration_cap: int = 300000) -> CircleModel:
    """Build the windowed circle model: complex, generators (based loops
    y_k and short-arc transpositions g_k), verified degree-1 witnesses, and
    the alternating fundamental cycle."""
    window = Fraction(window)
    K = CircleComplex(m, window, max_dim=max_dim,
                      enumeration_cap=enumeration_cap)
    gens: dict[str, CircleElement] = {}
    for k in range(m):
        gens[f"g{k}"] = arc_transposition_generator(K, k)
    for k in range(m):
        gens[f"y{k}"] = loop_generator(K, k)
    gen_list = [(label, gens[label]) for label in sorted(gens)]
    kit = LadderKit(K)
    G = GroupAction(
        K, gen_list, family="windowed",
        stabilizer_hint=_circle_stabilizer_hint(K, gens),
        translation_labels=[f"y{k}" for k in range(m)],
        fold_candidates=_circle_fold_candidates(K, gens),
    )
    G.span_hint = _circle_span(K)
    witnesses = {label: circle_witness(K, kit, g)
                 for label, g in gen_list}
    z = short_arc_cycle(K)
    cycle = z.alt()
    model = CircleModel(m, window, K, G, witnesses, cycle, kit)
    G.witness_provider = model.witness_for

    report = K.validate()
    if not report.ok:
        raise DomainError(f"circle complex failed validation: {report}")
    if not cycle.is_cycle() or not cycle.is_alternating():
        raise DomainError("fundamental cycle failed its invariants")
    # the full witness scan costs about edges * window (line patches grow
    # with the label distance); sample on large windows
    do_full = verify is True or (verify == "auto"
                                 and len(K.simplices_of_dim(1)) <= 80)
    if verify:
        for label, w in sorted(witnesses.items()):
            failure = (w.verify(on_exhausted_image="fail") if do_full
                       else _sampled_verify(w))
            if failure is not None:
                raise DomainError(f"witness {label} failed: {failure}")
    return model


def _sampled_verify(w: HomotopyWitness, per_degree: int = 60):
    """Deterministic subsample of the witness identity checks, for large
    windows where the full scan is expensive."""
    K = w.complex
    g = w.element
    for n in range(w.degree_cap + 1):
        basis = K.algebraic_simplices(n)
        step = max(1, len(basis) // per_degree)
        for sigma in basis[::step]:
            single = Chain.single(K, sigma)
            try:
                rhs = apply(g, single) - single
            except WindowExhausted:
                continue
            lhs = w.image(sigma).boundary()
            if n >= 1:
                lhs = lhs + w.image_of_chain(single.boundary())
            if lhs != rhs:
                from .action import WitnessFailure
                return WitnessFailure(sigma, "chain-homotopy identity fails")
    return None


# -- synthetic finite-group instances ---------------------------------------------------

@dataclass
class SyntheticInstance:
    complex: Multicomplex
    action: GroupAction
    witnesses: dict[str, HomotopyWitness]
    cycle: Chain


def extend_vertex_permutation(K: Multicomplex, perm: dict[str, str],
                              word: str) -> TableAutomorphism:
    """Extend a vertex permutation over a complex with vertex-set ids."""
    full = {v: perm.get(v, v) for v in K.vertices}
    smap = {}
    for s in K.stored_simplices():
        image = sorted(full[v] for v in s.vertices)
        smap[s.sid] = "s[" + ".".join(image) + "]"
    return TableAutomorphism(K, full, smap, word)


def cone_witness(K: Multicomplex, g: TableAutomorphism, cone_point: str,
                 cap: int, support: frozenset[str] | None = None,
                 label: str | None = None) -> HomotopyWitness:
    """Witness h = g after cone minus cone, for g fixing the cone point of
    a full-simplex part of K; zero outside that part (where g must act as
    the identity)."""
    if g.vertex_image(cone_point) != cone_point:
        raise DomainError("cone witness needs a fixed cone point")

    def image(sigma: AlgebraicSimplex) -> Chain:
        verts = set(sigma.vertices)
        if support is not None and not verts <= support:
            return Chain.zero(K, sigma.degree + 1)
        cone_verts = sorted(verts | {cone_point})
        sid = "s[" + ".".join(cone_verts) + "]"
        base = Chain.single(
            K, AlgebraicSimplex(sid, (cone_point,) + sigma.vertices))
        return apply(g, base) - base

    return HomotopyWitness(g, K, cap, Fraction(2), image_fn=image,
                           label=label or g.word)


def gen_synthetic(seed: int, *, decorations: bool = True,
                  degree_cap: int = 2) -> SyntheticInstance:
    """Reproducible finite-group instance: the symmetric group on a full
    2-simplex (plus inert decoration simplices), cone-operator witnesses,
    and a scaled alternating boundary cycle annihilated by one uniform
    diffusion."""
    rng = random.Random(seed)
    letters = [chr(ord("a") + i) for i in range(12)]
    rng.shuffle(letters)
    tri = tuple(sorted(letters[:3]))
    tops = [tri]
    if decorations and rng.random() < 0.7:
        extra = sorted(letters[3:5])
        tops.append(tuple(extra))
    K = simplicial_from_top(tops)
    n0, n1, n2 = tri
    g01 = extend_vertex_permutation(K, {n0: n1, n1: n0}, "t01")
    g12 = extend_vertex_permutation(K, {n1: n2, n2: n1}, "t12")
    G = GroupAction(K, [("t01", g01), ("t12", g12)], family="finite")
    tri_support = frozenset(tri)
    witnesses = {
        "t01": cone_witness(K, g01, n2, degree_cap, tri_support, "t01"),
        "t12": cone_witness(K, g12, n0, degree_cap, tri_support, "t12"),
    }
    scale = Fraction(rng.randint(1, 4), rng.randint(1, 3))
    z = Chain(K, 1, {
        AlgebraicSimplex(f"s[{min(n0,n1)}.{max(n0,n1)}]", (n0, n1)): ONE,
        AlgebraicSimplex(f"s[{min(n1,n2)}.{max(n1,n2)}]", (n1, n2)): ONE,
        AlgebraicSimplex(f"s[{min(n0,n2)}.{max(n0,n2)}]", (n2, n0)): ONE,
    })
    cycle = z.alt() * scale

    report = K.validate()
    if not report.ok:
        raise DomainError(f"synthetic complex failed validation: {report}")
    for label, w in witnesses.items():
        failure = w.verify()
        if failure is not None:
            raise DomainError(f"witness {label} failed: {failure}")
    if not cycle.is_cycle() or not cycle.is_alternating():
        raise DomainError("synthetic cycle failed its invariants")

    G.witness_provider = lambda g: witness_from_word(G, witnesses, g.word)
    return SyntheticInstance(K, G, witnesses, cycle)
