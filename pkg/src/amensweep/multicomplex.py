"""Finite multicomplexes: simplices with distinct unordered vertices, where
several simplices may share a vertex set, plus the algebraic simplices
(ordered tuples, repeats allowed) that form the chain-module bases.

A `Multicomplex` is immutable after construction; subclasses may materialize
simplices lazily through `_resolve`, which must be a pure function of the
requested id so the materialized complex is deterministic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, NamedTuple

from .errors import DomainError, FormatError
from .serialize import load_json, dump_json, require

DEFAULT_DEGREE_CAP = 4


def degree_cap(default: int = DEFAULT_DEGREE_CAP) -> int:
    """Degree cap for tuple enumeration, overridable via AMENSWEEP_DEGREE_CAP."""
    env = os.environ.get("AMENSWEEP_DEGREE_CAP")
    if env is None:
        return default
    try:
        return int(env)
    except ValueError:
        raise DomainError(f"AMENSWEEP_DEGREE_CAP={env!r} is not an integer")


def facet_key(vertices: Iterable[str]) -> str:
    return "|".join(sorted(vertices))


class AlgebraicSimplex(NamedTuple):
    """A simplex id together with an ordered vertex tuple (repeats allowed)."""

    simplex: str
    vertices: tuple[str, ...]

    @property
    def degree(self) -> int:
        return len(self.vertices) - 1

    def __str__(self):
        return f"({self.simplex}; {','.join(self.vertices)})"


@dataclass(frozen=True)
class Simplex:
    """One simplex record: id, ordered vertex list as supplied, face table."""

    sid: str
    vertex_list: tuple[str, ...]
    faces: dict[str, str] = field(default_factory=dict)
    geom: tuple | None = None  # structured payload for generated models

    @property
    def vertices(self) -> frozenset[str]:
        return frozenset(self.vertex_list)

    @property
    def dim(self) -> int:
        return len(self.vertex_list) - 1


@dataclass(frozen=True)
class Violation:
    code: str
    simplices: tuple[str, ...]
    detail: str

    def __str__(self):
        return f"{self.code} [{', '.join(self.simplices)}]: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.ok:
            return "ok"
        return "; ".join(str(v) for v in self.violations)


class Multicomplex:
    """Finite multicomplex with explicit face tables."""

    def __init__(self, vertices: Iterable[str], simplices: Iterable[Simplex]):
        self._vertices = frozenset(vertices)
        self._simplices: dict[str, Simplex] = {}
        for s in simplices:
            if s.sid in self._simplices:
                raise DomainError(f"duplicate simplex id {s.sid!r}")
            self._simplices[s.sid] = s

    # -- lookup ---------------------------------------------------------

    @property
    def vertices(self) -> frozenset[str]:
        return self._vertices

    def has_simplex(self, sid: str) -> bool:
        return self._lookup(sid) is not None

    def simplex(self, sid: str) -> Simplex:
        s = self._lookup(sid)
        if s is None:
            raise DomainError(f"unknown simplex id {sid!r}")
        return s

    def _lookup(self, sid: str) -> Simplex | None:
        s = self._simplices.get(sid)
        if s is None:
            s = self._resolve(sid)
            if s is not None:
                self._simplices[sid] = s
        return s

    def _resolve(self, sid: str) -> Simplex | None:
        """Hook for lazily generated complexes; pure function of sid."""
        return None

    def stored_simplices(self) -> list[Simplex]:
        """All simplices materialized so far, in id order."""
        return [self._simplices[k] for k in sorted(self._simplices)]

    def simplices_of_dim(self, k: int) -> list[Simplex]:
        """All k-simplices, in id order.  Lazy complexes override this to
        enumerate their full window."""
        return [s for s in self.stored_simplices() if s.dim == k]

    # -- core operations -------------------------------------------------

    def face(self, sigma: AlgebraicSimplex, i: int) -> AlgebraicSimplex:
        """The i-th face: drop position i; the underlying simplex changes
        only when the dropped vertex occurred exactly once."""
        tup = sigma.vertices
        if not 0 <= i < len(tup):
            raise DomainError(f"face index {i} out of range for {sigma}")
        if len(tup) == 1:
            raise DomainError("0-tuples have no faces")
        rest = tup[:i] + tup[i + 1:]
        if tup[i] in rest:
            return AlgebraicSimplex(sigma.simplex, rest)
        parent = self.simplex(sigma.simplex)
        key = facet_key(set(rest))
        try:
            face_id = parent.faces[key]
        except KeyError:
            raise DomainError(
                f"simplex {sigma.simplex!r} has no face for facet {key!r}")
        return AlgebraicSimplex(face_id, rest)

    def algebraic_simplices(self, n: int, cap: int | None = None) -> list[AlgebraicSimplex]:
        """All algebraic n-simplices: for each simplex of dimension k <= n,
        every surjective (n+1)-tuple onto its vertex set.  Sorted."""
        if n < 0:
            raise DomainError("degree must be nonnegative")
        cap = degree_cap() if cap is None else cap
        if n > cap:
            raise DomainError(f"degree {n} above cap {cap}")
        out: list[AlgebraicSimplex] = []
        for k in range(min(n, self.top_dim()) + 1):
            for s in self.simplices_of_dim(k):
                verts = sorted(s.vertices)
                for tup in surjective_tuples(verts, n + 1):
                    out.append(AlgebraicSimplex(s.sid, tup))
        out.sort()
        return out

    def top_dim(self) -> int:
        dims = [s.dim for s in self.stored_simplices()]
        return max(dims) if dims else -1

    def contains_algebraic(self, sigma: AlgebraicSimplex) -> bool:
        s = self._lookup(sigma.simplex)
        return s is not None and set(sigma.vertices) == s.vertices

    def closed_star(self, v: str) -> "Submulticomplex":
        """Smallest face-closed set containing every simplex whose vertex
        set contains v.  Requires a simplicial complex (unique vertex sets)."""
        if v not in self._vertices:
            raise DomainError(f"{v!r} is not a vertex")
        self._require_simplicial()
        ids: set[str] = set()
        stack = [s.sid for s in self.stored_simplices() if v in s.vertices]
        while stack:
            sid = stack.pop()
            if sid in ids:
                continue
            ids.add(sid)
            stack.extend(self.simplex(sid).faces.values())
        return Submulticomplex(self, frozenset(ids))

    def _require_simplicial(self):
        seen: dict[frozenset, str] = {}
        for s in self.stored_simplices():
            if s.vertices in seen:
                raise DomainError(
                    f"not a simplicial complex: {seen[s.vertices]!r} and "
                    f"{s.sid!r} share a vertex set")
            seen[s.vertices] = s.sid

    def is_simplicial(self) -> bool:
        try:
            self._require_simplicial()
        except DomainError:
            return False
        return True

    # -- validation -------------------------------------------------------

    def validate(self) -> ValidationReport:
        """Check regularity, closure and face coherence of all stored data."""
        bad: list[Violation] = []
        for s in self.stored_simplices():
            if len(set(s.vertex_list)) != len(s.vertex_list):
                bad.append(Violation("non-distinct vertices", (s.sid,),
                                     f"vertex list {s.vertex_list}"))
                continue
            missing = [v for v in s.vertex_list if v not in self._vertices]
            if missing:
                bad.append(Violation("unknown vertex", (s.sid,),
                                     f"vertices {missing} not in complex"))
                continue
            bad.extend(self._validate_faces(s))
        return ValidationReport(tuple(bad))

    def _validate_faces(self, s: Simplex) -> list[Violation]:
        bad = []
        verts = sorted(s.vertices)
        if s.dim == 0:
            if s.faces:
                bad.append(Violation("spurious faces", (s.sid,),
                                     "0-simplex with nonempty face table"))
            return bad
        expected = {facet_key(set(verts) - {v}): v for v in verts}
        if set(s.faces) != set(expected):
            bad.append(Violation("face table mismatch", (s.sid,),
                                 f"keys {sorted(s.faces)} != expected "
                                 f"{sorted(expected)}"))
            return bad
        for key, fid in s.faces.items():
            f = self._simplices.get(fid) or self._lookup(fid)
            if f is None:
                bad.append(Violation("missing face", (s.sid, fid),
                                     f"face {fid!r} not in complex"))
                continue
            if facet_key(f.vertices) != key:
                bad.append(Violation("face vertex mismatch", (s.sid, fid),
                                     f"face {fid!r} has vertices "
                                     f"{sorted(f.vertices)}, key was {key!r}"))
        if bad:
            return bad
        # coherence: the two orders of dropping a vertex pair agree
        for x in verts:
            fx = self.simplex(s.faces[facet_key(s.vertices - {x})])
            for y in verts:
                if y == x or s.dim < 2:
                    continue
                fy = self.simplex(s.faces[facet_key(s.vertices - {y})])
                a = fx.faces[facet_key(s.vertices - {x, y})]
                b = fy.faces[facet_key(s.vertices - {x, y})]
                if a != b:
                    bad.append(Violation(
                        "incoherent faces", (s.sid,),
                        f"dropping {x},{y} reaches {a!r} but {y},{x} "
                        f"reaches {b!r}"))
        return bad


@dataclass(frozen=True)
class Submulticomplex:
    """A face-closed subset of a parent multicomplex's simplices."""

    parent: Multicomplex
    simplex_ids: frozenset[str]

    def __post_init__(self):
        for sid in self.simplex_ids:
            s = self.parent.simplex(sid)
            for fid in s.faces.values():
                if fid not in self.simplex_ids:
                    raise DomainError(
                        f"submulticomplex not face-closed: {sid!r} has face "
                        f"{fid!r} outside the subset")

    def contains(self, sid: str) -> bool:
        return sid in self.simplex_ids


def surjective_tuples(verts: list[str], length: int) -> list[tuple[str, ...]]:
    """All tuples of the given length using every vertex at least once."""
    k = len(verts)
    if k > length:
        return []
    need = set(verts)
    return [t for t in product(verts, repeat=length) if need.issubset(t)]


def simplicial_from_top(top_faces: Iterable[Iterable[str]]) -> Multicomplex:
    """The simplicial complex generated by the given top faces, with
    deterministic vertex-set ids 's[a.b.c]'."""
    subsets: set[tuple[str, ...]] = set()

    def close(verts: tuple[str, ...]):
        verts = tuple(sorted(set(verts)))
        if verts in subsets:
            return
        subsets.add(verts)
        if len(verts) > 1:
            for v in verts:
                close(tuple(x for x in verts if x != v))

    for face in top_faces:
        close(tuple(face))
    sid = {verts: "s[" + ".".join(verts) + "]" for verts in subsets}
    simplices = []
    vertices: set[str] = set()
    for verts in sorted(subsets):
        vertices.update(verts)
        faces = {}
        if len(verts) > 1:
            for v in verts:
                rest = tuple(x for x in verts if x != v)
                faces[facet_key(rest)] = sid[rest]
        simplices.append(Simplex(sid[verts], verts, faces))
    return Multicomplex(vertices, simplices)


# -- file format ----------------------------------------------------------

def complex_to_obj(K: Multicomplex) -> dict:
    return {
        "vertices": sorted(K.vertices),
        "simplices": [
            {"id": s.sid, "vertices": list(s.vertex_list),
             "faces": dict(sorted(s.faces.items()))}
            for s in K.stored_simplices()
        ],
    }


def save_complex(K: Multicomplex, path) -> bytes:
    return dump_json(complex_to_obj(K), path)


def load_complex(path) -> Multicomplex:
    obj = load_json(path)
    return complex_from_obj(obj)


def complex_from_obj(obj) -> Multicomplex:
    require(isinstance(obj, dict), "complex file must be a JSON object")
    require("vertices" in obj and "simplices" in obj,
            "complex file needs 'vertices' and 'simplices'")
    simplices = []
    for rec in obj["simplices"]:
        for k in ("id", "vertices"):
            require(k in rec, f"simplex record missing {k!r}")
        simplices.append(Simplex(
            sid=rec["id"],
            vertex_list=tuple(rec["vertices"]),
            faces=dict(rec.get("faces", {})),
        ))
    try:
        return Multicomplex(obj["vertices"], simplices)
    except DomainError as exc:
        raise FormatError(str(exc)) from None
