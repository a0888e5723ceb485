"""Slices of the Z-cover, cuboid completion/truncation and the cone step
Lambda(n) -> (Lambda(n+1), Gamma(n+1))."""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import (ANTICOMMUTATIVE, BoundAlgebra, CoefficientScheme, Relation, build_algebra, cover_algebra,
                      quadratic_dual, relation_set, restrict, stable_extension)
from .quiver import (Cuboid, Skeleton, Vertex, cell, cuboid_bounds, generate_quiver, hammock, in_pyramid,
                     pyramid_vertices, vmap_bar)


class WindowError(ValueError):
    pass


class ConstructionError(RuntimeError):
    pass


@dataclass
class SliceCheck:
    ok: bool
    orbit_violations: List[Tuple[Vertex, int]] = field(default_factory=list)
    witness: Optional[List[Vertex]] = None

    def describe(self) -> str:
        if self.ok:
            return "complete slice"
        out = []
        if self.orbit_violations:
            out.append("orbits met != once: " + ", ".join(f"{b} x{c}" for b, c in self.orbit_violations))
        if self.witness:
            out.append("path leaves and re-enters: " + " -> ".join(map(str, self.witness)))
        return "; ".join(out)


def _bfs(start: Iterable[Vertex], step) -> Dict[Vertex, Optional[Vertex]]:
    """Vertices reachable by at least one step, with BFS parents."""
    parent: Dict[Vertex, Optional[Vertex]] = {}
    queue = deque()
    for s in sorted(start):
        for w in step(s):
            if w not in parent:
                parent[w] = s
                queue.append(w)
    while queue:
        v = queue.popleft()
        for w in step(v):
            if w not in parent:
                parent[w] = v
                queue.append(w)
    return parent


def check_slice(window: Skeleton, subset: Iterable[Vertex]) -> SliceCheck:
    """Axiom (a): each orbit {(i, v)} of the window meets the subset once.
    Axiom (b): a path between subset vertices never leaves the subset."""
    if window.family != "cover":
        raise WindowError("slices live in a cover window")
    S = set(map(tuple, subset))
    n = window.n
    counts: Dict[Vertex, int] = defaultdict(int)
    for v in window.vertices:
        counts[v[:n]] += v in S
    bad = sorted((b, c) for b, c in counts.items() if c != 1)

    fwd = _bfs(S, lambda v: [w for _, w in window.out_arrows(v)])
    bwd = _bfs(S, lambda v: [u for _, u in window.in_arrows(v)])
    witness = None
    for x in sorted(set(fwd) & set(bwd) - S):
        head = [x]
        while head[-1] not in S:
            head.append(fwd[head[-1]])
        tail = [x]
        while tail[-1] not in S:
            tail.append(bwd[tail[-1]])
        witness = head[::-1] + tail[1:]
        break
    return SliceCheck(not bad and witness is None, bad, witness)


@dataclass
class SlicePlan:
    window: Skeleton
    t: int
    slice_vertices: Tuple[Vertex, ...]
    completion: Optional[Tuple[Vertex, ...]]
    check: SliceCheck

    @property
    def n(self) -> int:
        return self.window.n

    @property
    def m(self) -> int:
        return self.window.m


def completion_levels(t: int, m: int) -> Tuple[int, int]:
    """Levels touched by the completion anchored at t: the last cuboid side
    b_{n+1} = i_n - 1 reaches m - 1."""
    return t, t + m - 1


def completion_vertices(n: int, m: int, t: int) -> List[Vertex]:
    out = set()
    for i in pyramid_vertices(n, m):
        C = Cuboid(i, cuboid_bounds(i, m), m)
        for a in C.points():
            out.add(vmap_bar(i + (t,), a))
    return sorted(out)


def tau_slice(window: Skeleton, t: int) -> SlicePlan:
    """Q(n) x {t} with both slice axioms checked inside the window."""
    if window.family != "cover":
        raise WindowError("tau_slice needs a cover window")
    lo, hi = window.window
    if not lo <= t <= hi:
        raise WindowError(f"level {t} outside window [{lo}, {hi}]")
    base = [v[: window.n] for v in window.vertices if v[-1] == lo]
    S = tuple(sorted(b + (t,) for b in base))
    chk = check_slice(window, S)
    need_lo, need_hi = completion_levels(t, window.m)
    comp = None
    if lo <= need_lo and need_hi <= hi:
        comp = tuple(completion_vertices(window.n, window.m, t))
    return SlicePlan(window, t, S, comp, chk)


def cuboid_completion(plan: SlicePlan) -> Skeleton:
    """The completion Q(n+1)(t) as a full subquiver of the window."""
    if not plan.check.ok:
        raise ConstructionError(f"not a complete slice: {plan.check.describe()}")
    if plan.completion is None:
        lo, hi = completion_levels(plan.t, plan.m)
        raise WindowError(f"completion at level {plan.t} needs window levels {lo}..{hi}, have {plan.window.window}")
    return plan.window.induced(plan.completion, family="completion")


def to_pyramid_coords(v: Vertex, t: int) -> Vertex:
    return v[:-1] + (v[-1] - t + 1,)


def from_pyramid_coords(v: Vertex, t: int) -> Vertex:
    return v[:-1] + (v[-1] + t - 1,)


def identify(i: Sequence[int]) -> Tuple[Vertex, Tuple[int, ...]]:
    """Write i in Q(n+1) as vbar of a trailing-1 vertex: returns (j, a) with
    j in Q(n), a in C(j) and vbar^{(j, 1)}(a) = i."""
    i = tuple(i)
    n = len(i) - 1
    j = i[: n - 1] + (i[n - 1] + i[n] - 1,)
    a = (0,) * n + (i[n] - 1,)
    if vmap_bar(j + (1,), a) != i:
        raise ConstructionError(f"identification failed at {i}")
    return j, a


def unidentify(j: Sequence[int], a: Sequence[int]) -> Vertex:
    return vmap_bar(tuple(j) + (1,), tuple(a))


@dataclass
class Truncation:
    algebra: BoundAlgebra
    direct: BoundAlgebra
    skeleton_match: bool
    dims_match: bool
    relations_match: bool


def truncate(cover: BoundAlgebra, plan: SlicePlan, verify: bool = True) -> Truncation:
    """Lambda(n+1) as the cover algebra modulo the idempotents outside the completion,
    relabelled so the last coordinate starts at 1."""
    comp = cuboid_completion(plan)
    if not cover.skeleton.same_shape(plan.window):
        raise ConstructionError("cover algebra and slice plan use different windows")
    sub = restrict(cover, comp.vertices, role="completion")
    t, n, m = plan.t, plan.n, plan.m
    f = lambda v: to_pyramid_coords(v, t)
    sk = sub.skeleton.relabel(f, family="pyramid", n=n + 1)
    rels = [Relation(f(r.source), f(r.target), r.terms) for r in sub.relations]
    lam = BoundAlgebra(sk, rels, cover.field, cover.scheme, role="pyramid")
    direct = build_algebra(generate_quiver(n + 1, m), cover.scheme or ANTICOMMUTATIVE, cover.field)
    skel_ok = sk.same_shape(direct.skeleton)
    if verify and not skel_ok:
        raise ConstructionError("truncated quiver differs from Q(n+1)")
    dims_ok = lam.dims_table() == direct.dims_table() if verify else False
    rels_ok = relation_set(lam) == relation_set(direct)
    return Truncation(lam, direct, skel_ok, dims_ok, rels_ok)


def filtration_check(alg: BoundAlgebra, t: int) -> Tuple[bool, bool]:
    """Vertices of Lambda(N) with entries t+1..N equal to 1 form Q(t); returns
    (vertex/arrow sets match, relation sets match) against direct Lambda(t)."""
    N = alg.skeleton.n
    keep = [v for v in alg.vertices if all(x == 1 for x in v[t:])]
    sub = restrict(alg, keep, role="sub")
    sk = sub.skeleton.relabel(lambda v: v[:t], family="pyramid", n=t)
    direct = build_algebra(generate_quiver(t, alg.skeleton.m), alg.scheme or ANTICOMMUTATIVE, alg.field)
    rels = [Relation(r.source[:t], r.target[:t], r.terms) for r in sub.relations]
    mine = BoundAlgebra(sk, rels, alg.field, alg.scheme)
    return sk.same_shape(direct.skeleton), relation_set(mine) == relation_set(direct)


# the cone step


@dataclass
class ConeResult:
    lam: BoundAlgebra
    gamma: BoundAlgebra
    manifest: dict


def cone(alg: BoundAlgebra, t: int = 1) -> ConeResult:
    """Stable-extend, lift to the cover, slice at t, complete, truncate, dualize."""
    if alg.skeleton.family != "pyramid":
        raise ConstructionError("cone needs a pyramid algebra")
    n, m = alg.skeleton.n, alg.skeleton.m
    stages = []

    def stage(name, obj, **extra):
        rec = {"stage": name, "vertices": len(obj.vertices), **extra}
        if isinstance(obj, BoundAlgebra):
            rec["relations"] = len(obj.relations)
            rec["dims_sha256"] = obj.dims_checksum()
        stages.append(rec)

    stage("input", alg)
    st = stable_extension(alg)
    stage("stable", st)
    lo, hi = completion_levels(t, m)
    cov = cover_algebra(st, lo, hi)
    stage("cover", cov, window=[lo, hi])
    plan = tau_slice(cov.skeleton, t)
    if not plan.check.ok:
        raise ConstructionError(plan.check.describe())
    stages.append({"stage": "slice", "vertices": len(plan.slice_vertices), "level": t})
    tr = truncate(cov, plan)
    stage("truncation", tr.algebra, matches_direct=tr.dims_match, relations_match=tr.relations_match)
    gamma = quadratic_dual(tr.algebra)
    stage("dual", gamma)
    manifest = {"n": n, "m": m, "field": alg.field.name, "target_n": n + 1, "stages": stages}
    return ConeResult(tr.algebra, gamma, manifest)


# projective-injectives versus cells and hammocks


@dataclass
class PIRow:
    vertex: Vertex
    loewy: int
    complete: bool
    proj_inj: bool
    expected_loewy: int

    @property
    def agree(self) -> bool:
        return self.complete == (self.loewy == self.expected_loewy) == self.proj_inj


def projective_injective_report(alg: BoundAlgebra, mode: str = "cell") -> List[PIRow]:
    """Per vertex: Loewy length of P(i), completeness of the cell (or hammock)
    at i and whether P(i) is injective."""
    sk = alg.skeleton
    N, m = sk.n, sk.m
    if mode == "cell":
        view, expected = cell, N + 1
    elif mode == "hammock":
        view, expected = hammock, m
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return [PIRow(i, alg.loewy_length(i), view(sk, i).complete, alg.is_projective_injective(i), expected)
            for i in alg.vertices]


def cuboidcube_violations(q: Skeleton) -> List[Vertex]:
    """Vertices whose cell is complete but whose cell end vertex has a complete hammock."""
    out = []
    for i in q.vertices:
        c = cell(q, i)
        if c.complete and hammock(q, c.end_vertex).complete:
            out.append(i)
    return out
