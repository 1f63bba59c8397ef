"""Cover analysis for triangulations: multiplicity, star-condition vertex
colorings, barycentric subdivision, and the pigeonhole witness that an
n-simplex with n >= multiplicity repeats a color.

Cover members are vertex subsets of a simplicial complex (a member
"contains" a simplex iff it contains all its vertices); amenability is a
declared flag, never computed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

from .errors import DomainError
from .multicomplex import Multicomplex, simplicial_from_top
from .serialize import require


@dataclass(frozen=True)
class CoverMember:
    member_id: str
    vertices: frozenset[str]
    amenable: bool = True


class Cover:
    def __init__(self, members: Iterable[CoverMember]):
        self.members = sorted(members, key=lambda m: m.member_id)
        if len({m.member_id for m in self.members}) != len(self.members):
            raise DomainError("duplicate cover member ids")

    def member(self, member_id: str) -> CoverMember:
        for m in self.members:
            if m.member_id == member_id:
                return m
        raise DomainError(f"no cover member {member_id!r}")

    def covers(self, K: Multicomplex) -> bool:
        covered = set()
        for m in self.members:
            covered |= m.vertices
        return K.vertices <= covered

    def all_amenable(self) -> bool:
        return all(m.amenable for m in self.members)


def multiplicity(C: Cover) -> int:
    """Largest number of members with a common vertex.  Members are vertex
    sets, so a nonempty intersection of J members means some vertex lies in
    all of them."""
    if not C.members:
        raise DomainError("multiplicity of an empty cover")
    count: dict[str, int] = {}
    for m in C.members:
        for v in m.vertices:
            count[v] = count.get(v, 0) + 1
    return max(count.values(), default=0)


def multiplicity_brute_force(C: Cover) -> int:
    """Independent oracle: maximize #J over subsets with nonempty
    intersection.  Exponential in the member count."""
    if not C.members:
        raise DomainError("multiplicity of an empty cover")
    if len(C.members) > 14:
        raise DomainError("brute force capped at 14 members")
    best = 0
    for k in range(1, len(C.members) + 1):
        for sub in combinations(C.members, k):
            common = frozenset.intersection(*[m.vertices for m in sub])
            if common:
                best = max(best, k)
    return best


@dataclass(frozen=True)
class Coloring:
    """Assignment vertex -> member id with the closed star of each vertex
    inside its member."""

    assignment: Mapping[str, str]

    def color(self, v: str) -> str:
        return self.assignment[v]

    def vertex_classes(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for v, i in sorted(self.assignment.items()):
            out.setdefault(i, []).append(v)
        return out


def star_vertices(T: Multicomplex, v: str) -> frozenset[str]:
    star = T.closed_star(v)
    verts: set[str] = set()
    for sid in star.simplex_ids:
        verts |= T.simplex(sid).vertices
    return frozenset(verts)


def find_coloring(T: Multicomplex, C: Cover) -> Coloring | None:
    """Greedy admissible coloring: each vertex gets the smallest member id
    whose vertex set contains its closed star; None if some vertex has no
    admissible member (then subdivide)."""
    assignment = {}
    for v in sorted(T.vertices):
        needed = star_vertices(T, v)
        admissible = [m.member_id for m in C.members
                      if needed <= m.vertices]
        if not admissible:
            return None
        assignment[v] = min(admissible)
    return Coloring(assignment)


def coloring_is_admissible(T: Multicomplex, C: Cover, col: Coloring) -> bool:
    for v in sorted(T.vertices):
        if v not in col.assignment:
            return False
        if not star_vertices(T, v) <= C.member(col.color(v)).vertices:
            return False
    return True


# -- barycentric subdivision -----------------------------------------------------

def barycenter_id(vertices: Iterable[str]) -> str:
    return "b[" + ".".join(sorted(vertices)) + "]"


@dataclass(frozen=True)
class Subdivision:
    complex: Multicomplex
    carrier: Mapping[str, frozenset[str]]  # new vertex -> original vertices

    def pullback(self, C: Cover, rule: str = "closed") -> Cover:
        """Transport a cover to the subdivision.

        rule 'closed': a subdivided vertex joins a member iff its carrier
        simplex's vertices all do.  This never enlarges overlaps, so a
        straddling star at v stays straddling at its barycenter.
        rule 'open': the carrier needs only to touch the member, modelling
        the open sets the cover is a shadow of; repeated subdivision then
        shrinks stars until a coloring appears.
        """
        if rule not in ("closed", "open"):
            raise DomainError(f"unknown pullback rule {rule!r}")
        members = []
        for m in C.members:
            if rule == "closed":
                verts = frozenset(v for v, carrier in self.carrier.items()
                                  if carrier <= m.vertices)
            else:
                verts = frozenset(v for v, carrier in self.carrier.items()
                                  if carrier & m.vertices)
            members.append(CoverMember(m.member_id, verts, m.amenable))
        return Cover(members)


def barycentric_subdivide(T: Multicomplex) -> Subdivision:
    """Standard barycentric subdivision of a simplicial complex: one vertex
    per simplex, one k-simplex per ascending flag of length k+1."""
    if not T.is_simplicial():
        raise DomainError("barycentric subdivision needs a simplicial complex")
    vsets = [tuple(sorted(s.vertices)) for s in T.stored_simplices()]
    vset_set = set(vsets)
    carrier = {barycenter_id(vs): frozenset(vs) for vs in vsets}

    flags: list[tuple[tuple[str, ...], ...]] = []

    def grow(flag: tuple[tuple[str, ...], ...]):
        flags.append(flag)
        top = flag[-1]
        for bigger in vset_set:
            if len(bigger) > len(top) and set(top) < set(bigger):
                grow(flag + (bigger,))

    for vs in sorted(vsets, key=lambda t: (len(t), t)):
        grow((vs,))
    top_flags = [f for f in flags
                 if not any(len(g) > len(f) and set(f) <= set(g)
                            for g in flags)]
    new_complex = simplicial_from_top(
        [tuple(barycenter_id(vs) for vs in flag) for flag in top_flags])
    return Subdivision(new_complex, carrier)


# -- pigeonhole witness --------------------------------------------------------------

@dataclass(frozen=True)
class ColorWitness:
    pair: tuple[str, str] | None
    diagnostic: str | None

    @property
    def found(self) -> bool:
        return self.pair is not None


def repeated_color_witness(C: Cover, col: Coloring, T: Multicomplex,
                           simplex_id: str) -> ColorWitness:
    """Two distinct vertices of the simplex with equal color; guaranteed by
    pigeonhole when the coloring is admissible and the simplex dimension is
    at least the cover multiplicity.  Checked, not assumed."""
    s = T.simplex(simplex_id)
    mult = multiplicity(C)
    if s.dim < mult:
        raise DomainError(
            f"simplex dimension {s.dim} below multiplicity {mult}; the "
            f"pigeonhole guarantee needs dim >= multiplicity")
    by_color: dict[str, list[str]] = {}
    for v in sorted(s.vertices):
        if v not in col.assignment:
            return ColorWitness(None, f"vertex {v!r} is uncolored")
        by_color.setdefault(col.color(v), []).append(v)
    for color in sorted(by_color):
        vs = by_color[color]
        if len(vs) >= 2:
            return ColorWitness((vs[0], vs[1]), None)
    return ColorWitness(
        None,
        f"all {s.dim + 1} vertices of {simplex_id} carry distinct colors; "
        f"the coloring is not admissible for a multiplicity-{mult} cover")


# -- file format ------------------------------------------------------------------------

def cover_to_obj(C: Cover) -> dict:
    return {"members": [
        {"id": m.member_id, "vertices": sorted(m.vertices),
         "amenable": m.amenable}
        for m in C.members
    ]}


def cover_from_obj(obj) -> Cover:
    require(isinstance(obj, dict) and "members" in obj,
            "cover file needs 'members'")
    members = []
    for rec in obj["members"]:
        for k in ("id", "vertices"):
            require(k in rec, f"cover member missing {k!r}")
        members.append(CoverMember(rec["id"], frozenset(rec["vertices"]),
                                   bool(rec.get("amenable", True))))
    return Cover(members)
