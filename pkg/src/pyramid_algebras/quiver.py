"""Pyramid quivers, their stable extensions and Z-cover windows.

Vertices are tuples of ints.  Every arrow has an integer *kind* (its type)
and is determined by its source and kind, so a path is named by its source
together with the sequence of kinds it traverses.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import comb
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

Vertex = Tuple[int, ...]
Kinds = Tuple[int, ...]


class Arrow(NamedTuple):
    source: Vertex
    kind: int
    target: Vertex


class PathKey(NamedTuple):
    source: Vertex
    kinds: Kinds


class QuiverError(ValueError):
    pass


def check_params(n: int, m: int) -> None:
    if n < 1:
        raise QuiverError(f"n must be >= 1, got {n}")
    if m < 3:
        raise QuiverError(f"m must be >= 3, got {m}")


def in_pyramid(i: Sequence[int], m: int) -> bool:
    """Membership in Q(len(i))_0 at height m."""
    total = 0
    for s, x in enumerate(i, start=1):
        if x < 1:
            return False
        total += x
        if total > m + s - 1:
            return False
    return True


def shift(i: Vertex, t: int) -> Vertex:
    """i(t): add e_t - e_{t-1}, with e_0 = 0 (1-based t)."""
    v = list(i)
    v[t - 1] += 1
    if t > 1:
        v[t - 2] -= 1
    return tuple(v)


def unshift(i: Vertex, t: int) -> Vertex:
    """(t)i, the inverse of ``shift``."""
    v = list(i)
    v[t - 1] -= 1
    if t > 1:
        v[t - 2] += 1
    return tuple(v)


def pyramid_vertices(n: int, m: int) -> List[Vertex]:
    out: List[Vertex] = []

    def rec(prefix, total):
        s = len(prefix) + 1
        if s > n:
            out.append(tuple(prefix))
            return
        for x in range(1, m + s - 1 - total + 1):
            prefix.append(x)
            rec(prefix, total + x)
            prefix.pop()

    rec([], 0)
    return sorted(out)


def vertex_count(n: int, m: int) -> int:
    return comb(m + n - 1, n)


@dataclass(frozen=True)
class Skeleton:
    """A quiver with typed arrows and no relations.

    ``family`` records how it was produced ("pyramid", "stable", "cover",
    "sub", "opposite"); ``n`` and ``m`` are the pyramid parameters it came
    from and ``window`` the level range of a cover window.
    """

    n: int
    m: int
    family: str
    vertices: Tuple[Vertex, ...]
    arrows: Tuple[Arrow, ...]
    window: Optional[Tuple[int, int]] = None
    _out: Dict[Vertex, Dict[int, Vertex]] = field(default=None, repr=False, compare=False)
    _in: Dict[Vertex, Dict[int, Vertex]] = field(default=None, repr=False, compare=False)
    _vset: frozenset = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        vset = frozenset(self.vertices)
        out: Dict[Vertex, Dict[int, Vertex]] = {v: {} for v in self.vertices}
        inn: Dict[Vertex, Dict[int, Vertex]] = {v: {} for v in self.vertices}
        for a in self.arrows:
            if a.source not in vset or a.target not in vset:
                raise QuiverError(f"dangling arrow {a}")
            if a.kind in out[a.source]:
                raise QuiverError(f"two arrows of kind {a.kind} leave {a.source}")
            if a.kind in inn[a.target]:
                raise QuiverError(f"two arrows of kind {a.kind} enter {a.target}")
            out[a.source][a.kind] = a.target
            inn[a.target][a.kind] = a.source
        object.__setattr__(self, "_vset", vset)
        object.__setattr__(self, "_out", out)
        object.__setattr__(self, "_in", inn)

    def __contains__(self, v) -> bool:
        return tuple(v) in self._vset

    @property
    def kinds(self) -> Tuple[int, ...]:
        return tuple(sorted({a.kind for a in self.arrows}))

    def target(self, v: Vertex, kind: int) -> Optional[Vertex]:
        return self._out[v].get(kind)

    def source_of(self, v: Vertex, kind: int) -> Optional[Vertex]:
        return self._in[v].get(kind)

    def out_arrows(self, v: Vertex) -> List[Tuple[int, Vertex]]:
        return sorted(self._out[v].items())

    def in_arrows(self, v: Vertex) -> List[Tuple[int, Vertex]]:
        return sorted(self._in[v].items())

    def walk(self, v: Vertex, kinds: Sequence[int]) -> Optional[Vertex]:
        """End point of the path, or None if it leaves the quiver."""
        for k in kinds:
            v = self._out[v].get(k)
            if v is None:
                return None
        return v

    def path_vertices(self, v: Vertex, kinds: Sequence[int]) -> List[Vertex]:
        out = [v]
        for k in kinds:
            v = self._out[v][k]
            out.append(v)
        return out

    def paths(self, v: Vertex, length: int) -> Iterator[Tuple[Kinds, Vertex]]:
        """All paths of the given length starting at v, in lexicographic order."""
        if length == 0:
            yield (), v
            return
        for k, w in self.out_arrows(v):
            for rest, end in self.paths(w, length - 1):
                yield (k,) + rest, end

    def paths_into(self, v: Vertex, length: int) -> Iterator[Tuple[Vertex, Kinds]]:
        """All paths of the given length ending at v, as (source, kinds)."""
        if length == 0:
            yield v, ()
            return
        for k, u in self.in_arrows(v):
            for src, rest in self.paths_into(u, length - 1):
                yield src, rest + (k,)

    def induced(self, vertices, family: str = "sub") -> "Skeleton":
        keep = set(map(tuple, vertices))
        missing = keep - self._vset
        if missing:
            raise QuiverError(f"vertices not in quiver: {sorted(missing)}")
        arrows = tuple(a for a in self.arrows if a.source in keep and a.target in keep)
        return Skeleton(self.n, self.m, family, tuple(sorted(keep)), arrows, self.window)

    def relabel(self, f, family: str, n: Optional[int] = None, window=None) -> "Skeleton":
        verts = tuple(sorted(f(v) for v in self.vertices))
        arrows = tuple(sorted(Arrow(f(a.source), a.kind, f(a.target)) for a in self.arrows))
        return Skeleton(self.n if n is None else n, self.m, family, verts, arrows, window)

    def opposite(self) -> "Skeleton":
        arrows = tuple(sorted(Arrow(a.target, a.kind, a.source) for a in self.arrows))
        return Skeleton(self.n, self.m, "opposite", self.vertices, arrows, self.window)

    def same_shape(self, other: "Skeleton") -> bool:
        return set(self.vertices) == set(other.vertices) and set(self.arrows) == set(other.arrows)

    # serialisation

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "vertices": [list(v) for v in self.vertices],
            "arrows": [{"source": list(a.source), "kind": a.kind} for a in self.arrows],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def to_dot(self, name: str = "Q") -> str:
        lines = [f"digraph {name} {{"]
        for v in self.vertices:
            lines.append(f'  "{vertex_label(v)}";')
        for a in self.arrows:
            lines.append(f'  "{vertex_label(a.source)}" -> "{vertex_label(a.target)}" [label="{a.kind}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def vertex_label(v: Vertex) -> str:
    return ",".join(str(x) for x in v)


def _sorted_arrows(arrows) -> Tuple[Arrow, ...]:
    return tuple(sorted(arrows, key=lambda a: (a.source, a.kind)))


def generate_quiver(n: int, m: int) -> Skeleton:
    """The n-cubic pyramid quiver Q(n) of height m."""
    check_params(n, m)
    verts = pyramid_vertices(n, m)
    vset = set(verts)
    arrows = []
    for i in verts:
        for t in range(1, n + 1):
            j = shift(i, t)
            if j in vset:
                arrows.append(Arrow(i, t, j))
    return Skeleton(n, m, "pyramid", tuple(verts), _sorted_arrows(arrows))


def stable_quiver(q: Skeleton) -> Skeleton:
    """Add the arrows of type n+1, i -> i - e_n whenever i_n > 1."""
    if q.family != "pyramid":
        raise QuiverError(f"stable_quiver needs a pyramid skeleton, got {q.family}")
    n = q.n
    new = []
    for i in q.vertices:
        if i[n - 1] > 1:
            j = i[: n - 1] + (i[n - 1] - 1,)
            new.append(Arrow(i, n + 1, j))
    return Skeleton(n, q.m, "stable", q.vertices, _sorted_arrows(q.arrows + tuple(new)))


def cover_window(q: Skeleton, lo: int, hi: int) -> Skeleton:
    """Levels lo..hi of the Z-cover of a stable skeleton.

    Cover vertices are (n+1)-tuples whose last entry is the level.
    """
    if q.family != "stable":
        raise QuiverError(f"cover_window needs a stable skeleton, got {q.family}")
    if lo > hi:
        raise QuiverError(f"empty window [{lo}, {hi}]")
    n = q.n
    verts = [i + (v,) for v in range(lo, hi + 1) for i in q.vertices]
    arrows = []
    for a in q.arrows:
        for v in range(lo, hi + 1):
            if a.kind <= n:
                arrows.append(Arrow(a.source + (v,), a.kind, a.target + (v,)))
            elif v + 1 <= hi:
                arrows.append(Arrow(a.source + (v,), a.kind, a.target + (v + 1,)))
    return Skeleton(n, q.m, "cover", tuple(sorted(verts)), _sorted_arrows(arrows), (lo, hi))


# cuboids and vertex maps


def cuboid_bounds(i: Sequence[int], m: int) -> Tuple[int, ...]:
    """b(i) = (m+p-1-|i|, i_1-1, ..., i_p-1) for a p-tuple i."""
    p = len(i)
    return (m + p - 1 - sum(i),) + tuple(x - 1 for x in i)


@dataclass(frozen=True)
class Cuboid:
    base: Vertex
    b: Tuple[int, ...]
    m: int

    @property
    def p(self) -> int:
        return len(self.base)

    def layer(self, l: int) -> List[Tuple[int, ...]]:
        return sorted(a for a in self.points() if sum(a) == l)

    def layers(self) -> List[List[Tuple[int, ...]]]:
        return [self.layer(l) for l in range(self.m)]

    def points(self) -> Iterator[Tuple[int, ...]]:
        return itertools.product(*(range(x + 1) for x in self.b))

    def __contains__(self, a) -> bool:
        return len(a) == len(self.b) and all(0 <= x <= y for x, y in zip(a, self.b))

    def zero_set(self, a) -> frozenset:
        """O(a): coordinates where a vanishes (1-based)."""
        return frozenset(t for t, x in enumerate(a, start=1) if x == 0)

    def overflow_set(self, a) -> frozenset:
        """T(a): coordinates where a exceeds the side length (1-based)."""
        return frozenset(t for t, (x, y) in enumerate(zip(a, self.b), start=1) if x > y)

    def free_set(self, a) -> frozenset:
        return frozenset(range(1, len(self.b) + 1)) - self.zero_set(a) - self.overflow_set(a)


def cuboid_of(i: Sequence[int], m: int) -> Cuboid:
    i = tuple(i)
    if i and not in_pyramid(i, m):
        raise QuiverError(f"{i} is not a vertex of Q({len(i)}) at m={m}")
    return Cuboid(i, cuboid_bounds(i, m), m)


def vmap(i: Sequence[int], a: Sequence[int]) -> Vertex:
    """v^i(a) = (i_1+a_1-a_2, ..., i_p+a_p-a_{p+1})."""
    if len(a) != len(i) + 1:
        raise ValueError("vmap needs len(a) == len(i) + 1")
    return tuple(x + a[s] - a[s + 1] for s, x in enumerate(i))


def vmap_bar(i: Sequence[int], a: Sequence[int]) -> Vertex:
    """v-bar^i(a): like vmap on the first p entries, last entry i_{p+1}+a_{p+1}."""
    if len(a) != len(i):
        raise ValueError("vmap_bar needs len(a) == len(i)")
    p = len(i) - 1
    return vmap(i[:p], a) + (i[p] + a[p],)


def omega(i: Sequence[int], m: int) -> Vertex:
    """(m+n-|i|, i_1, ..., i_{n-1})."""
    i = tuple(i)
    if not in_pyramid(i, m):
        raise QuiverError(f"{i} is not a vertex at m={m}")
    return (m + len(i) - sum(i),) + i[:-1]


def zero_boundary(i: Sequence[int]) -> frozenset:
    """Z(i) = {s : i_s = 1}."""
    return frozenset(s for s, x in enumerate(i, start=1) if x == 1)


def wall_boundary(i: Sequence[int], m: int) -> frozenset:
    """W(i) = {s : i_1+...+i_s = m+s-1}."""
    out, total = set(), 0
    for s, x in enumerate(i, start=1):
        total += x
        if total == m + s - 1:
            out.add(s)
    return frozenset(out)


def unit_cube(p: int, l: Optional[int] = None) -> List[Tuple[int, ...]]:
    pts = itertools.product((0, 1), repeat=p)
    return sorted(a for a in pts if l is None or sum(a) == l)


def admissible_cube(i: Sequence[int], m: int, l: Optional[int] = None) -> List[Tuple[int, ...]]:
    """U^{(n+1)}(i): unit-cube points a with v^i(a) a vertex.

    On Z(i) the rule is a_s >= a_{s+1}.  On W(i) the s-th partial sum of
    v^i(a) is the wall value plus a_1 - a_{s+1}, so the rule is a_1 <= a_{s+1}.
    """
    Z, W = zero_boundary(i), wall_boundary(i, m)
    out = []
    for a in unit_cube(len(i) + 1, l):
        ok = all(a[s - 1] >= a[s] for s in Z) and all(a[0] <= a[s] for s in W)
        if ok:
            out.append(a)
    return out


# cells and hammocks


@dataclass(frozen=True)
class SubquiverView:
    parent: Skeleton
    anchor: Vertex
    vertices: Tuple[Vertex, ...]
    end_vertex: Vertex
    kind: str
    full_bound: Optional[bool] = None

    @property
    def complete(self) -> bool:
        return self.end_vertex in self.parent

    @property
    def skeleton(self) -> Skeleton:
        return self.parent.induced(self.vertices)

    def to_dot(self) -> str:
        return self.skeleton.to_dot(name=self.kind.upper())


def is_complete(view: SubquiverView) -> bool:
    return view.complete


def _require_pyramid_vertex(q: Skeleton, i: Vertex) -> None:
    if tuple(i) not in q:
        raise QuiverError(f"{i} is not a vertex of the quiver")


def cell(q: Skeleton, i: Sequence[int]) -> SubquiverView:
    """The cubic cell H^i: images of the unit cube under v-bar^i."""
    i = tuple(i)
    _require_pyramid_vertex(q, i)
    p = len(i)
    pts = {vmap_bar(i, a) for a in unit_cube(p)}
    verts = tuple(sorted(v for v in pts if v in q))
    return SubquiverView(q, i, verts, vmap_bar(i, (1,) * p), "cell")


def hammock(q: Skeleton, i: Sequence[int]) -> SubquiverView:
    """The hammock H_C^i: images of C^{(p-1)}(i_1..i_{p-1}) under v-bar^i."""
    i = tuple(i)
    _require_pyramid_vertex(q, i)
    C = Cuboid(i[:-1], cuboid_bounds(i[:-1], q.m), q.m)
    pts = {vmap_bar(i, a) for a in C.points()}
    verts = tuple(sorted(v for v in pts if v in q))
    return SubquiverView(q, i, verts, vmap_bar(i, C.b), "hammock")
