"""Simplicial automorphism groups acting on algebraic simplices.

Elements may act partially (window-limited models): a missing image raises
`WindowExhausted` at the point of use.  Homotopy witnesses carry the
chain-homotopy data certifying an element is chain-homotopic to the
identity, with an explicit norm bound.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .chains import Chain
from .errors import DomainError, FormatError, WindowExhausted
from .multicomplex import AlgebraicSimplex, Multicomplex
from .serialize import frac_str, parse_frac, require
from .chains import chain_from_obj, chain_to_obj

# -- words -------------------------------------------------------------------

_WORD_TOKEN = re.compile(r"^(?P<label>[A-Za-z_][A-Za-z0-9_]*)(\^(?P<exp>-?\d+))?$")


def parse_word(word: str) -> list[tuple[str, int]]:
    """Parse 'g0*y1^-2' into [('g0', 1), ('y1', -2)].  'e' is the identity."""
    word = word.strip()
    if word in ("", "e"):
        return []
    out = []
    for tok in word.split("*"):
        m = _WORD_TOKEN.match(tok.strip())
        if not m:
            raise FormatError(f"bad word token {tok!r}")
        exp = int(m.group("exp") or 1)
        if exp != 0:
            out.append((m.group("label"), exp))
    return out


def word_str(factors: Sequence[tuple[str, int]]) -> str:
    merged: list[tuple[str, int]] = []
    for label, exp in factors:
        if exp == 0:
            continue
        if merged and merged[-1][0] == label:
            total = merged[-1][1] + exp
            if total == 0:
                merged.pop()
            else:
                merged[-1] = (label, total)
        else:
            merged.append((label, exp))
    if not merged:
        return "e"
    return "*".join(l if e == 1 else f"{l}^{e}" for l, e in merged)


def concat_words(w1: str, w2: str) -> str:
    """Word of the product 'apply w2 first, then w1'."""
    return word_str(parse_word(w1) + parse_word(w2))


def invert_word(w: str) -> str:
    return word_str([(l, -e) for l, e in reversed(parse_word(w))])


# -- group elements -----------------------------------------------------------

class GroupElement:
    """Interface: a simplicial automorphism, possibly window-limited."""

    word: str
    complex: Multicomplex

    def vertex_image(self, v: str) -> str:
        raise NotImplementedError

    def simplex_image(self, sid: str) -> str | None:
        """Image simplex id, or None when it falls outside the window."""
        raise NotImplementedError

    def compose(self, other: "GroupElement") -> "GroupElement":
        """self after other (apply `other` first)."""
        raise NotImplementedError

    def inverse(self) -> "GroupElement":
        raise NotImplementedError

    def key(self):
        raise NotImplementedError

    def is_identity_on_vertices(self) -> bool:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"<{type(self).__name__} {self.word}>"

    # -- derived --------------------------------------------------------

    def algebraic_image(self, sigma: AlgebraicSimplex) -> AlgebraicSimplex:
        image_id = self.simplex_image(sigma.simplex)
        if image_id is None:
            raise WindowExhausted(
                f"element {self.word} undefined on {sigma.simplex}",
                element=self.word, simplex=sigma.simplex)
        return AlgebraicSimplex(
            image_id, tuple(self.vertex_image(v) for v in sigma.vertices))


class IdentityElement(GroupElement):
    """The identity automorphism; total on any complex."""

    def __init__(self, complex: Multicomplex):
        self.complex = complex
        self.word = "e"

    def vertex_image(self, v: str) -> str:
        return v

    def simplex_image(self, sid: str) -> str | None:
        return sid

    def compose(self, other: GroupElement) -> GroupElement:
        return other

    def inverse(self) -> "IdentityElement":
        return self

    def key(self):
        return "__identity__"

    def is_identity_on_vertices(self) -> bool:
        return True


class TableAutomorphism(GroupElement):
    """Automorphism given by explicit vertex and simplex tables.

    `simplex_map` may be partial; missing ids model window exhaustion.
    """

    def __init__(self, complex: Multicomplex, vertex_map: Mapping[str, str],
                 simplex_map: Mapping[str, str], word: str = "e"):
        self.complex = complex
        self.vertex_map = dict(vertex_map)
        self.simplex_map = dict(simplex_map)
        self.word = word
        self._key = None

    @classmethod
    def identity(cls, complex: Multicomplex) -> "TableAutomorphism":
        vmap = {v: v for v in complex.vertices}
        smap = {s.sid: s.sid for s in complex.stored_simplices()}
        return cls(complex, vmap, smap, "e")

    def vertex_image(self, v: str) -> str:
        try:
            return self.vertex_map[v]
        except KeyError:
            raise WindowExhausted(
                f"element {self.word} has no image for vertex {v!r}",
                element=self.word)

    def simplex_image(self, sid: str) -> str | None:
        return self.simplex_map.get(sid)

    def compose(self, other: GroupElement) -> GroupElement:
        if isinstance(other, IdentityElement):
            return self
        if not isinstance(other, TableAutomorphism):
            raise DomainError("cannot compose table and non-table elements")
        if self.complex is not other.complex:
            raise DomainError("elements act on different complexes")
        vmap = {v: self.vertex_map[w] for v, w in other.vertex_map.items()
                if w in self.vertex_map}
        smap = {}
        for sid, mid in other.simplex_map.items():
            out = self.simplex_map.get(mid)
            if out is not None:
                smap[sid] = out
        return TableAutomorphism(self.complex, vmap, smap,
                                 concat_words(self.word, other.word))

    def inverse(self) -> "TableAutomorphism":
        vmap = {w: v for v, w in self.vertex_map.items()}
        smap = {w: s for s, w in self.simplex_map.items()}
        if len(vmap) != len(self.vertex_map) or len(smap) != len(self.simplex_map):
            raise DomainError(f"element {self.word} is not injective")
        return TableAutomorphism(self.complex, vmap, smap,
                                 invert_word(self.word))

    def key(self):
        if self._key is None:
            # a table acting as the identity on all vertices and its whole
            # simplex domain is keyed as the identity so that g g^-1 merges
            # with IdentityElement in measures and closures
            if (set(self.vertex_map) == set(self.complex.vertices)
                    and all(v == w for v, w in self.vertex_map.items())
                    and all(s == t for s, t in self.simplex_map.items())):
                self._key = "__identity__"
            else:
                self._key = (tuple(sorted(self.vertex_map.items())),
                             tuple(sorted(self.simplex_map.items())))
        return self._key

    def is_identity_on_vertices(self) -> bool:
        return all(v == w for v, w in self.vertex_map.items())


def validate_automorphism(K: Multicomplex, g: GroupElement) -> list[str]:
    """Check that g is a simplicial automorphism of the stored part of K:
    dimension-preserving, vertex-compatible, face-compatible."""
    problems = []
    for s in K.stored_simplices():
        image_id = g.simplex_image(s.sid)
        if image_id is None:
            continue  # window-limited: acceptable
        if not K.has_simplex(image_id):
            problems.append(f"{s.sid} -> {image_id}: image not in complex")
            continue
        img = K.simplex(image_id)
        expect_verts = {g.vertex_image(v) for v in s.vertices}
        if img.vertices != frozenset(expect_verts):
            problems.append(f"{s.sid} -> {image_id}: vertex sets disagree")
            continue
        if img.dim != s.dim:
            problems.append(f"{s.sid} -> {image_id}: dimension changes")
            continue
        for key, fid in s.faces.items():
            fimg = g.simplex_image(fid)
            if fimg is None:
                continue
            want = {g.vertex_image(v) for v in K.simplex(fid).vertices}
            got = img.faces.get("|".join(sorted(want)))
            if got != fimg:
                problems.append(
                    f"{s.sid}: face {fid} maps to {fimg}, but image simplex "
                    f"has face {got}")
    return problems


# -- the action on chains ------------------------------------------------------

def apply(g: GroupElement, c: Chain) -> Chain:
    """Linear extension of the basis action; norm-preserving."""
    out: dict[AlgebraicSimplex, Fraction] = {}
    for sigma, coeff in c.items():
        tau = g.algebraic_image(sigma)
        out[tau] = out.get(tau, Fraction(0)) + coeff
    return Chain(c.complex, c.degree,
                 _trusted={k: v for k, v in out.items() if v != 0})


# -- group actions --------------------------------------------------------------

class GroupAction:
    """A group acting simplicially: generators plus a closure policy.

    family 'finite': the generated group is finite and fully enumerated.
    family 'windowed': infinite or window-limited; only generators are held
    and elements are produced by composing words on demand.

    The action itself is immutable after construction; the only mutation is
    internal memoization (closures, generator moves, orbit search state),
    which is idempotent, so concurrent readers need no coordination beyond
    the interpreter's own guarantees.
    """

    def __init__(self, complex: Multicomplex,
                 generators: Sequence[tuple[str, GroupElement]],
                 family: str = "finite", closure_cap: int = 20000,
                 stabilizer_hint: Callable[[str], GroupElement | None] | None = None,
                 translation_labels: Sequence[str] = (),
                 fold_candidates: Callable[[Chain], list[GroupElement]] | None = None):
        if family not in ("finite", "windowed"):
            raise DomainError(f"unknown group family {family!r}")
        self.complex = complex
        self.generators = list(generators)
        self.family = family
        self.closure_cap = closure_cap
        self.stabilizer_hint = stabilizer_hint
        self.translation_labels = list(translation_labels)
        self.fold_candidates = fold_candidates
        self.span_hint: Callable[[Chain], object] | None = None
        # models install a witness factory here; the certifier requires it
        self.witness_provider: Callable[[GroupElement], "HomotopyWitness"] | None = None
        self._by_label = dict(generators)
        if len(self._by_label) != len(self.generators):
            raise DomainError("duplicate generator labels")
        self._elements: list[GroupElement] | None = None
        self._power_caches: dict = {}
        self._moves: list[GroupElement] | None = None
        # incremental orbit search state: union-find over visited simplices
        self._orbit_parent: dict[AlgebraicSimplex, AlgebraicSimplex] = {}
        self._orbit_explored: set[AlgebraicSimplex] = set()
        self._orbit_clipped = False

    def power_cache(self, direction: GroupElement) -> dict:
        """Shared cache of direction powers, preserving their per-element
        action caches across synthesis iterations."""
        return self._power_caches.setdefault(direction.key(), {})

    def generator(self, label: str) -> GroupElement:
        try:
            return self._by_label[label]
        except KeyError:
            raise DomainError(f"unknown generator {label!r}")

    def identity(self) -> GroupElement:
        return IdentityElement(self.complex)

    def element_for_word(self, word: str) -> GroupElement:
        # leftmost word factor is the outermost map: rightmost applies first
        elem: GroupElement = self.identity()
        for label, exp in parse_word(word):
            g = self.generator(label)
            step = g if exp > 0 else g.inverse()
            for _ in range(abs(exp)):
                elem = elem.compose(step)
        return elem

    def generator_moves(self) -> list[GroupElement]:
        """Generators and their inverses, deterministic order; cached so
        per-element action caches persist across searches."""
        if self._moves is None:
            self._moves = []
            for _, g in self.generators:
                self._moves.append(g)
                self._moves.append(g.inverse())
        return self._moves

    # -- union-find over the reachability graph --------------------------

    def _orbit_find(self, sigma: AlgebraicSimplex) -> AlgebraicSimplex:
        parent = self._orbit_parent
        root = sigma
        while parent[root] is not root:
            root = parent[root]
        while parent[sigma] is not root:
            parent[sigma], sigma = root, parent[sigma]
        return root

    def _orbit_union(self, a: AlgebraicSimplex, b: AlgebraicSimplex):
        parent = self._orbit_parent
        if a not in parent:
            parent[a] = a
        if b not in parent:
            parent[b] = b
        ra, rb = self._orbit_find(a), self._orbit_find(b)
        if ra != rb:
            # deterministic representative: the smaller simplex wins
            if rb < ra:
                ra, rb = rb, ra
            parent[rb] = ra

    def _orbit_explore(self, start: AlgebraicSimplex, strict: bool):
        if start in self._orbit_explored:
            return
        if start not in self._orbit_parent:
            self._orbit_parent[start] = start
        stack = [start]
        moves = self.generator_moves()
        while stack:
            sigma = stack.pop()
            if sigma in self._orbit_explored:
                continue
            self._orbit_explored.add(sigma)
            for g in moves:
                try:
                    tau = g.algebraic_image(sigma)
                except WindowExhausted:
                    self._orbit_clipped = True
                    if strict:
                        raise
                    continue
                self._orbit_union(sigma, tau)
                if tau not in self._orbit_explored:
                    stack.append(tau)

    def elements(self) -> list[GroupElement]:
        """Full closure (finite family only)."""
        if self.family != "finite":
            raise DomainError("windowed actions have no full closure")
        if self._elements is None:
            # seed with a tabulated identity so composed identities (g g^-1)
            # merge with it by key
            ident: GroupElement = TableAutomorphism.identity(self.complex)
            if self.generators and not isinstance(self.generators[0][1],
                                                  TableAutomorphism):
                ident = self.identity()
            seen = {ident.key(): ident}
            frontier = [ident]
            while frontier:
                nxt = []
                for e in frontier:
                    for _, g in self.generators:
                        prod = g.compose(e)
                        if prod.key() not in seen:
                            if len(seen) >= self.closure_cap:
                                raise DomainError(
                                    "closure exceeds cap; declare the action "
                                    "windowed")
                            seen[prod.key()] = prod
                            nxt.append(prod)
                frontier = nxt
            self._elements = sorted(seen.values(), key=lambda e: (len(e.word), e.word))
        return self._elements

    def order(self) -> int:
        return len(self.elements())


@dataclass(frozen=True)
class OrbitPartition:
    """Orbit decomposition of a finite support, with deterministic ids.

    `membership` maps every simplex reached during the search (not just the
    support) to its raw component id, so later diffused chains can be
    restricted to an orbit."""

    orbits: tuple[tuple[AlgebraicSimplex, ...], ...]
    clipped: bool
    membership: dict = field(default_factory=dict, compare=False, repr=False)

    def index_of(self, sigma: AlgebraicSimplex) -> int:
        for i, orb in enumerate(self.orbits):
            if sigma in orb:
                return i
        raise DomainError(f"{sigma} not in partitioned support")


def orbits(G: GroupAction, n: int | None = None,
           support: Iterable[AlgebraicSimplex] | None = None,
           strict: bool = False) -> OrbitPartition:
    """Partition a finite support of algebraic simplices into G-orbits.

    With window-limited actions the reachability search treats undefined
    images as dead ends; `strict=True` turns any such clipping into a
    `WindowExhausted` error instead.
    """
    if support is None:
        if n is None:
            raise DomainError("orbits needs a degree or an explicit support")
        support = G.complex.algebraic_simplices(n)
    support = sorted(set(support))
    for start in support:
        G._orbit_explore(start, strict)
    # orbit pieces = support grouped by union-find root, ordered by their
    # minimal element in the deterministic basis order
    pieces: dict[AlgebraicSimplex, list[AlgebraicSimplex]] = {}
    for sigma in support:
        pieces.setdefault(G._orbit_find(sigma), []).append(sigma)
    ordered = sorted(pieces.values(), key=lambda p: p[0])
    membership = {sigma: G._orbit_find(sigma) for sigma in G._orbit_explored}
    return OrbitPartition(tuple(tuple(p) for p in ordered), G._orbit_clipped,
                          membership=membership)


def stabilizer_sign_search(G: GroupAction, simplex_id: str,
                           max_states: int = 50000) -> GroupElement | None:
    """Find g with g(simplex) = simplex inducing an odd vertex permutation.

    Returns None when the (complete) search space holds no such element;
    raises WindowExhausted when a window-limited action clipped the search
    before an answer was found.
    """
    if G.stabilizer_hint is not None:
        hit = G.stabilizer_hint(simplex_id)
        if hit is not None:
            return hit
    base = tuple(sorted(G.complex.simplex(simplex_id).vertices))
    if len(base) == 1:
        return None  # no odd permutation of a single vertex
    start = AlgebraicSimplex(simplex_id, base)
    moves = G.generator_moves()
    reached: dict[AlgebraicSimplex, GroupElement] = {start: G.identity()}
    frontier = [start]
    clipped = False
    while frontier:
        nxt = []
        for sigma in frontier:
            elem = reached[sigma]
            for g in moves:
                try:
                    tau = g.algebraic_image(sigma)
                except WindowExhausted:
                    clipped = True
                    continue
                if tau in reached:
                    continue
                prod = g.compose(elem)
                if tau.simplex == simplex_id:
                    perm = tuple(base.index(v) for v in tau.vertices)
                    from .chains import perm_sign
                    if perm_sign(perm) == -1:
                        return prod
                if len(reached) >= max_states:
                    clipped = True
                    continue
                reached[tau] = prod
                nxt.append(tau)
        frontier = nxt
    if clipped:
        raise WindowExhausted(
            f"stabilizer search for {simplex_id} clipped by the window",
            simplex=simplex_id)
    return None


# -- homotopy witnesses ------------------------------------------------------------

@dataclass(frozen=True)
class WitnessFailure:
    sigma: AlgebraicSimplex
    reason: str

    def __str__(self):
        return f"{self.sigma}: {self.reason}"


class HomotopyWitness:
    """Chain-homotopy data for one element: per-degree linear maps h with
    boundary(h(sigma)) + h(boundary(sigma)) = g.sigma - sigma, plus a norm
    bound B >= max ||h(sigma)||_1."""

    def __init__(self, element: GroupElement, complex: Multicomplex,
                 degree_cap: int, bound: Fraction,
                 image_fn: Callable[[AlgebraicSimplex], Chain] | None = None,
                 table: Mapping[AlgebraicSimplex, Chain] | None = None,
                 label: str | None = None):
        if image_fn is None and table is None:
            raise DomainError("witness needs an image function or a table")
        self.element = element
        self.complex = complex
        self.degree_cap = degree_cap
        self.bound = Fraction(bound)
        self.label = label if label is not None else element.word
        self._image_fn = image_fn
        self._table = dict(table) if table is not None else None

    def image(self, sigma: AlgebraicSimplex) -> Chain:
        if sigma.degree > self.degree_cap:
            raise DomainError(
                f"witness {self.label} capped at degree {self.degree_cap}, "
                f"got {sigma.degree}")
        if self._table is not None and sigma in self._table:
            return self._table[sigma]
        if self._image_fn is None:
            raise DomainError(f"witness {self.label}: no image for {sigma}")
        return self._image_fn(sigma)

    def image_of_chain(self, c: Chain) -> Chain:
        out: dict[AlgebraicSimplex, Fraction] = {}
        for sigma, coeff in c.items():
            for tau, w in self.image(sigma).items():
                s = out.get(tau, Fraction(0)) + w * coeff
                if s == 0:
                    out.pop(tau, None)
                else:
                    out[tau] = s
        return Chain(self.complex, c.degree + 1, _trusted=out)

    def verify(self, degree_cap: int | None = None,
               on_exhausted_image: str = "skip") -> WitnessFailure | None:
        """Replay the chain-homotopy identity on every basis simplex up to
        the cap; returns the first failure, or None when all hold.

        Simplices where the element itself is window-undefined are always
        skipped.  A composed witness may also exhaust the window on its
        intermediate stages even where the element is defined; by default
        those simplices are skipped too, while ``on_exhausted_image='fail'``
        reports them (used when verifying freshly constructed witnesses,
        whose images must exist wherever the element acts)."""
        cap = self.degree_cap if degree_cap is None else degree_cap
        g = self.element
        for n in range(cap + 1):
            for sigma in self.complex.algebraic_simplices(n):
                single = Chain.single(self.complex, sigma)
                try:
                    rhs = apply(g, single) - single
                except WindowExhausted:
                    continue  # the element itself is undefined here
                try:
                    h_sigma = self.image(sigma)
                    lhs = h_sigma.boundary()
                    if n >= 1:
                        lhs = lhs + self.image_of_chain(single.boundary())
                except WindowExhausted as exc:
                    if on_exhausted_image == "skip":
                        continue
                    return WitnessFailure(sigma, f"image exhausted: {exc}")
                if h_sigma.l1_norm() > self.bound:
                    return WitnessFailure(
                        sigma, f"norm {h_sigma.l1_norm()} exceeds bound "
                               f"{self.bound}")
                if lhs != rhs:
                    return WitnessFailure(sigma, "chain-homotopy identity fails")
        return None

    def tabulate(self, degree_cap: int | None = None) -> dict[AlgebraicSimplex, Chain]:
        """Materialize the image table over the basis, omitting simplices
        outside the element's window (where the homotopy identity is
        vacuous)."""
        cap = self.degree_cap if degree_cap is None else degree_cap
        g = self.element
        table = {}
        for n in range(cap + 1):
            for sigma in self.complex.algebraic_simplices(n):
                try:
                    apply(g, Chain.single(self.complex, sigma))
                    table[sigma] = self.image(sigma)
                except WindowExhausted:
                    continue
        return table


def verify_witness(w: HomotopyWitness,
                   degree_cap: int | None = None) -> WitnessFailure | None:
    return w.verify(degree_cap)


def compose_witness(w1: HomotopyWitness, w2: HomotopyWitness) -> HomotopyWitness:
    """Witness for the product (apply w2's element first, then w1's)."""
    if w1.complex is not w2.complex:
        raise DomainError("witnesses live on different complexes")
    g1 = w1.element

    def image(sigma: AlgebraicSimplex) -> Chain:
        return w1.image(sigma) + apply(g1, w2.image(sigma))

    return HomotopyWitness(
        element=g1.compose(w2.element),
        complex=w1.complex,
        degree_cap=min(w1.degree_cap, w2.degree_cap),
        bound=w1.bound + w2.bound,
        image_fn=image,
        label=f"({w1.label})*({w2.label})",
    )


def identity_witness(complex: Multicomplex, element: GroupElement,
                     degree_cap: int) -> HomotopyWitness:
    def image(sigma: AlgebraicSimplex) -> Chain:
        return Chain.zero(complex, sigma.degree + 1)
    return HomotopyWitness(element, complex, degree_cap, Fraction(0),
                           image_fn=image, label="e")


def bounding_chain(w: HomotopyWitness, c: Chain) -> Chain:
    """The chain b = h(c): satisfies boundary(b) = g.c - c for cycles c."""
    if not c.is_cycle():
        raise DomainError("bounding_chain requires a cycle")
    b = w.image_of_chain(c)
    expect = apply(w.element, c) - c
    if b.boundary() != expect:
        raise DomainError(
            f"witness {w.label} failed its bounding identity on a cycle")
    return b


# -- action file format --------------------------------------------------------------

def action_to_obj(G: GroupAction,
                  witnesses: Sequence[HomotopyWitness] = ()) -> dict:
    gens = []
    for label, g in G.generators:
        if not isinstance(g, TableAutomorphism):
            g = freeze_element(G.complex, g)
        gens.append({
            "label": label,
            "vertex_map": dict(sorted(g.vertex_map.items())),
            "simplex_map": dict(sorted(g.simplex_map.items())),
        })
    wit = []
    for w in witnesses:
        table = w.tabulate()
        wit.append({
            "label": w.label,
            "degree_cap": w.degree_cap,
            "bound": frac_str(w.bound),
            "h": [{"simplex": s.simplex, "tuple": list(s.vertices),
                   "image_chain": chain_to_obj(img)}
                  for s, img in sorted(table.items())],
        })
    return {"family": G.family, "generators": gens, "witnesses": wit,
            "translations": list(G.translation_labels)}


def freeze_element(K: Multicomplex, g: GroupElement) -> TableAutomorphism:
    """Tabulate an element over the stored simplices of K."""
    vmap = {v: g.vertex_image(v) for v in K.vertices}
    smap = {}
    for s in K.stored_simplices():
        img = g.simplex_image(s.sid)
        if img is not None and K.has_simplex(img):
            smap[s.sid] = img
    return TableAutomorphism(K, vmap, smap, g.word)


def action_from_obj(obj, K: Multicomplex) -> tuple[GroupAction, list[HomotopyWitness]]:
    require(isinstance(obj, dict), "action file must be a JSON object")
    require("generators" in obj, "action file needs 'generators'")
    gens = []
    for rec in obj["generators"]:
        for k in ("label", "vertex_map", "simplex_map"):
            require(k in rec, f"generator record missing {k!r}")
        gens.append((rec["label"], TableAutomorphism(
            K, rec["vertex_map"], rec["simplex_map"], rec["label"])))
    family = obj.get("family", "finite")
    G = GroupAction(K, gens, family=family,
                    translation_labels=obj.get("translations", ()))
    witnesses = []
    for rec in obj.get("witnesses", ()):
        for k in ("label", "degree_cap", "h", "bound"):
            require(k in rec, f"witness record missing {k!r}")
        table = {}
        for entry in rec["h"]:
            sigma = AlgebraicSimplex(entry["simplex"], tuple(entry["tuple"]))
            table[sigma] = chain_from_obj(entry["image_chain"], K,
                                          sigma.degree + 1)
        elem = G.element_for_word(rec["label"])
        witnesses.append(HomotopyWitness(
            elem, K, int(rec["degree_cap"]), parse_frac(rec["bound"]),
            table=table, label=rec["label"]))
    return G, witnesses
