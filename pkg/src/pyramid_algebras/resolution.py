"""Minimal graded projective resolutions of simple modules.

A free module is a list of generators ``(vertex, internal degree)``; the
generator at vertex u spans a copy of P(u) = Lambda e_u.  An element living
at vertex j in internal degree D is a dict ``{(g, path): coef}`` where
``path`` is a standard monomial from the vertex of generator g to j of
length ``D - deg(g)``.
"""
from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import BoundAlgebra
from .linalg import Echelon, nullspace
from .quiver import Cuboid, cuboid_bounds, cuboid_of, in_pyramid, omega, vertex_label, vmap, vmap_bar

Gen = Tuple[tuple, int]


class ResolutionError(ValueError):
    pass


@dataclass
class ResolutionStep:
    l: int
    generators: List[Gen]
    images: List[dict] = field(default_factory=list, repr=False)

    @property
    def linear(self) -> bool:
        return all(d == self.l for _, d in self.generators)

    def multiset(self) -> Counter:
        return Counter(self.generators)


@dataclass
class ResolutionReport:
    """Resolution of S(vertex).

    ``q`` is the last step of the linear part (steps 0..q generated in
    internal degree l) and ``terminal`` describes Ker f_q: a sorted list of
    (vertex, degree) when it is semisimple, ``[]`` when it is zero and
    None when it is not semisimple or was not reached before the cutoff.
    """

    vertex: tuple
    steps: List[ResolutionStep]
    q: Optional[int]
    terminal: Optional[List[Gen]]
    truncated: bool = False
    finite: bool = False
    kernel_dims: List[Dict[Tuple[tuple, int], int]] = field(default_factory=list, repr=False)
    algebra: str = ""

    def generators(self, l: int) -> List[Gen]:
        return self.steps[l].generators if l < len(self.steps) else []

    @property
    def linear_steps(self) -> List[ResolutionStep]:
        if self.q is None:
            return list(self.steps)
        return self.steps[: self.q + 1]

    def to_json(self) -> dict:
        term = None if self.terminal is None else [{"vertex": list(v), "deg": d} for v, d in self.terminal]
        return {
            "vertex": list(self.vertex),
            "steps": [{"l": s.l, "gens": [{"vertex": list(v), "deg": d} for v, d in s.generators]}
                      for s in self.steps],
            "q": self.q,
            "terminal": {"kernel": term, "semisimple": self.terminal is not None, "finite": self.finite},
            "truncated": self.truncated,
        }


# free-module arithmetic


def _act(alg: BoundAlgebra, gens: Sequence[Gen], x: dict, kinds) -> dict:
    """Left multiplication of an element by the path ``kinds`` (walked after x)."""
    F = alg.field
    out: dict = {}
    for (g, p), c in x.items():
        for p2, c2 in alg.normal_form(gens[g][0], p + tuple(kinds)).items():
            k = (g, p2)
            v = F.norm(out.get(k, 0) + c * c2)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


def _free_basis(alg: BoundAlgebra, gens: Sequence[Gen]) -> Dict[Tuple[tuple, int], List[tuple]]:
    """Basis of the free module grouped by (vertex, internal degree)."""
    out: Dict[Tuple[tuple, int], List[tuple]] = defaultdict(list)
    for g, (u, d) in enumerate(gens):
        for l in range(alg.top_degree(u) + 1):
            for j, paths in alg.basis_from(u, l).items():
                out[(j, d + l)].extend((g, p) for p in paths)
    return out


def _map_column(alg: BoundAlgebra, gens: Sequence[Gen], images: Sequence[dict],
                prev_gens: Sequence[Gen], key) -> dict:
    g, p = key
    img = images[g]
    return _act(alg, prev_gens, img, p)


def _minimal_generators(alg: BoundAlgebra, kernel: Dict[Tuple[tuple, int], List[dict]],
                        gens: Sequence[Gen]) -> Tuple[List[Gen], List[dict]]:
    """Generators of the kernel submodule spanning its top, lowest degree first."""
    sk = alg.skeleton
    new_gens: List[Gen] = []
    new_images: List[dict] = []
    for (j, D) in sorted(kernel, key=lambda k: (k[1], k[0])):
        vecs = kernel[(j, D)]
        E = Echelon(alg.field)
        for kind, u in sk.in_arrows(j):
            for x in kernel.get((u, D - 1), ()):
                E.add(_act(alg, gens, x, (kind,)))
        for v in vecs:
            grew, _ = E.add(v)
            if grew:
                new_gens.append((j, D))
                new_images.append(v)
    return new_gens, new_images


def _is_semisimple(alg: BoundAlgebra, kernel, gens) -> bool:
    sk = alg.skeleton
    for (j, D), vecs in kernel.items():
        for kind, _ in sk.out_arrows(j):
            for x in vecs:
                if _act(alg, gens, x, (kind,)):
                    return False
    return True


def minimal_resolution(alg: BoundAlgebra, i, cutoff: Optional[int] = None,
                       stop_at_terminal: bool = False) -> ResolutionReport:
    """Compute steps 0..cutoff-1 of the minimal resolution of S(i).

    With ``stop_at_terminal`` the computation ends once the linear part and
    its terminal kernel are known.
    """
    i = tuple(i)
    if i not in alg.skeleton:
        raise ResolutionError(f"{i} is not a vertex of {alg.name}")
    if cutoff is None:
        cutoff = default_cutoff(alg)
    if cutoff < 1:
        raise ResolutionError("cutoff must be >= 1")
    F = alg.field
    steps = [ResolutionStep(0, [(i, 0)], [{}])]
    kernel_dims = []
    q = terminal = None
    finite = False
    l = 0
    while True:
        step = steps[l]
        gens = step.generators
        basis = _free_basis(alg, gens)
        kernel: Dict[Tuple[tuple, int], List[dict]] = {}
        for (j, D), keys in basis.items():
            if l == 0:
                vecs = [{k: F(1)} for k in keys if D > 0]
            else:
                prev = steps[l - 1].generators
                cols = [_map_column(alg, gens, step.images, prev, k) for k in keys]
                vecs = [{keys[idx]: c for idx, c in v.items()} for v in nullspace(F, cols)]
            if vecs:
                kernel[(j, D)] = vecs
        kernel_dims.append({k: len(v) for k, v in kernel.items()})
        new_gens, new_images = _minimal_generators(alg, kernel, gens)
        if q is None and (not new_gens or any(d != l + 1 for _, d in new_gens)):
            q = l
            if not kernel:
                terminal = []
            elif _is_semisimple(alg, kernel, gens):
                terminal = sorted((j, D) for (j, D), vecs in kernel.items() for _ in vecs)
        if not new_gens:
            finite = True
            break
        if l + 1 >= cutoff or (stop_at_terminal and q is not None):
            break
        steps.append(ResolutionStep(l + 1, new_gens, new_images))
        l += 1
    truncated = not finite and q is None
    return ResolutionReport(i, steps, q, terminal, truncated, finite, kernel_dims, alg.name)


def default_cutoff(alg: BoundAlgebra) -> int:
    n, m = alg.skeleton.n, alg.skeleton.m
    if alg.role == "stable":
        return m + 2
    if alg.role == "dual":
        return n + 3
    return m + n + 2


def resolve_all(alg: BoundAlgebra, cutoff: Optional[int] = None, stop_at_terminal: bool = False):
    return {v: minimal_resolution(alg, v, cutoff, stop_at_terminal) for v in alg.vertices}


# invariant checks


def check_exactness(alg: BoundAlgebra, rep: ResolutionReport) -> List[str]:
    """Rank accounting: dim F_l = dim Ker f_l + dim Ker f_{l-1} at every (j, D),
    for the steps whose kernels were computed.  Returns a list of problems."""
    problems = []
    for l, step in enumerate(rep.steps[: len(rep.kernel_dims)]):
        basis = _free_basis(alg, step.generators)
        keys = set(basis) | set(rep.kernel_dims[l]) | (set(rep.kernel_dims[l - 1]) if l else set())
        for key in keys:
            dim = len(basis.get(key, ()))
            ker = rep.kernel_dims[l].get(key, 0)
            im = rep.kernel_dims[l - 1].get(key, 0) if l else (1 if key == (rep.vertex, 0) else 0)
            if dim != ker + im:
                problems.append(f"step {l} at {key}: dim {dim} != ker {ker} + im {im}")
    return problems


def check_complex(alg: BoundAlgebra, rep: ResolutionReport) -> List[str]:
    """f_{l-1} o f_l = 0 on generators."""
    problems = []
    for l in range(2, len(rep.steps)):
        prev, pprev = rep.steps[l - 1], rep.steps[l - 2]
        for g, img in enumerate(rep.steps[l].images):
            out: dict = {}
            for (h, p), c in img.items():
                for k, c2 in _act(alg, pprev.generators, prev.images[h], p).items():
                    out[k] = alg.field.norm(out.get(k, 0) + c * c2)
            if any(out.values()):
                problems.append(f"f_{l - 1} f_{l} nonzero on generator {g}")
    return problems


def check_minimality(rep: ResolutionReport) -> List[str]:
    """Every map entry lies in the radical (no paths of length 0)."""
    problems = []
    for step in rep.steps[1:]:
        for g, img in enumerate(step.images):
            for (h, p), c in img.items():
                if c and len(p) == 0:
                    problems.append(f"step {step.l} generator {g} hits generator {h} by a unit")
    return problems


def euler_check(alg: BoundAlgebra, rep: ResolutionReport) -> List[str]:
    """0 -> K_L -> F_L -> ... -> F_0 -> S(i) -> 0 has vanishing Euler characteristic
    at every (vertex, internal degree), L the last step with a computed kernel."""
    L = len(rep.kernel_dims) - 1
    total: Dict[Tuple[tuple, int], int] = defaultdict(int)
    for l in range(L + 1):
        for key, b in _free_basis(alg, rep.steps[l].generators).items():
            total[key] += (-1) ** l * len(b)
    for key, d in rep.kernel_dims[L].items():
        total[key] += (-1) ** (L + 1) * d
    total[(rep.vertex, 0)] -= 1
    return [f"Euler sum {v} at {k}" for k, v in sorted(total.items()) if v]


# cuboid predictions


def predict_resolution(i, m: int, mode: str = "stable", member=None) -> ResolutionReport:
    """Cuboid oracle.

    ``stable``: step l = {(v^i(a), l) : a in C_l(i)}, terminal S(omega(i)) in
    degree m+n.  ``bar``: i has N coordinates, step l = {(vbar^i(a), l) : a in
    C_l(i_1..i_{N-1})} restricted to ``member``, terminal vbar^i(b+e) in
    degree m+N-1 when it is a member and zero otherwise.
    """
    i = tuple(i)
    if mode == "stable":
        C = cuboid_of(i, m)
        steps = [ResolutionStep(l, sorted((vmap(i, a), l) for a in layer)) for l, layer in enumerate(C.layers())]
        terminal = [(omega(i, m), m + len(i))]
    elif mode == "bar":
        if member is None:
            member = lambda v: in_pyramid(v, m)
        p = len(i) - 1
        C = Cuboid(i[:p], cuboid_bounds(i[:p], m), m)
        steps = [ResolutionStep(l, sorted((v, l) for v in (vmap_bar(i, a) for a in layer) if member(v)))
                 for l, layer in enumerate(C.layers())]
        end = vmap_bar(i, tuple(x + 1 for x in C.b))
        terminal = [(end, m + p)] if member(end) else []
    else:
        raise ResolutionError(f"unknown prediction mode {mode!r}")
    while steps and not steps[-1].generators:
        steps.pop()
    return ResolutionReport(i, steps, len(steps) - 1, terminal, algebra=f"prediction({mode})")


@dataclass
class StepDiff:
    l: int
    missing: List[Gen]
    extra: List[Gen]


@dataclass
class ResolutionDiff:
    steps: List[StepDiff]
    terminal: Optional[Tuple[object, object]] = None

    def __bool__(self):
        return bool(self.steps) or self.terminal is not None

    @property
    def first_step(self) -> Optional[int]:
        return self.steps[0].l if self.steps else None

    def describe(self) -> str:
        if not self:
            return "no differences"
        lines = []
        for s in self.steps:
            lines.append(f"step {s.l}: missing {s.missing} extra {s.extra}")
        if self.terminal is not None:
            lines.append(f"terminal: actual {self.terminal[0]} predicted {self.terminal[1]}")
        return "\n".join(lines)


def compare(actual: ResolutionReport, predicted: ResolutionReport) -> ResolutionDiff:
    """Compare the linear parts step by step as multisets, then the terminal kernels.

    Missing means predicted but not computed."""
    a_steps = [s.multiset() for s in actual.linear_steps]
    p_steps = [s.multiset() for s in predicted.linear_steps]
    while a_steps and not a_steps[-1]:
        a_steps.pop()
    while p_steps and not p_steps[-1]:
        p_steps.pop()
    diffs = []
    for l in range(max(len(a_steps), len(p_steps))):
        a = a_steps[l] if l < len(a_steps) else Counter()
        p = p_steps[l] if l < len(p_steps) else Counter()
        if a != p:
            diffs.append(StepDiff(l, sorted((p - a).elements()), sorted((a - p).elements())))
    term = None
    a_t = None if actual.terminal is None else sorted(actual.terminal)
    p_t = None if predicted.terminal is None else sorted(predicted.terminal)
    if a_t != p_t:
        term = (a_t, p_t)
    return ResolutionDiff(diffs, term)


# classification and periodicity


@dataclass(frozen=True)
class KoszulType:
    kind: str
    p: int
    q: Optional[int] = None
    detail: str = ""

    @property
    def pq(self):
        return (self.p, self.q)

    def __str__(self):
        if self.kind == "almost-koszul":
            return f"almost Koszul of type ({self.p}, {self.q})"
        return f"{self.kind} (p={self.p})" + (f": {self.detail}" if self.detail else "")


def koszul_classify(alg: BoundAlgebra, cutoff: Optional[int] = None) -> KoszulType:
    """Koszul when every simple has a finite linear resolution; almost Koszul
    of type (p, q) when Lambda_t = 0 for t > p and every Ker f_q is
    concentrated in internal degree p + q."""
    p = alg.top_degree()
    reports = resolve_all(alg, cutoff, stop_at_terminal=True)
    if any(r.q is None for r in reports.values()):
        bad = [v for v, r in reports.items() if r.q is None]
        return KoszulType("inconclusive", p, None, f"cutoff reached for {bad[0]}")
    if all(r.finite and r.terminal == [] for r in reports.values()):
        return KoszulType("koszul", p, None)
    qs = {r.q for r in reports.values()}
    for v, r in reports.items():
        if not r.terminal:
            return KoszulType("neither", p, None, f"Ker f_q at {v} is zero or not semisimple")
        if any(d != p + r.q for _, d in r.terminal):
            return KoszulType("neither", p, None, f"Ker f_q at {v} not concentrated in degree p+q")
    if len(qs) != 1:
        return KoszulType("neither", p, None, f"linear lengths differ: {sorted(qs)}")
    return KoszulType("almost-koszul", p, qs.pop())


@dataclass
class SyzygyStep:
    source: tuple
    k: int
    target: tuple


def syzygy_step(alg: BoundAlgebra, i, cutoff: Optional[int] = None) -> Optional[SyzygyStep]:
    """Least k with Omega^k S(i) simple, and that simple."""
    rep = minimal_resolution(alg, i, cutoff, stop_at_terminal=True)
    if rep.terminal and len(rep.terminal) == 1:
        return SyzygyStep(tuple(i), rep.q + 1, rep.terminal[0][0])
    return None


def syzygy_orbit(alg: BoundAlgebra, i, cutoff: Optional[int] = None) -> List[SyzygyStep]:
    """Follow i -> j with Omega^k S(i) = S(j) until i returns."""
    i = tuple(i)
    orbit: List[SyzygyStep] = []
    seen = set()
    v = i
    while v not in seen:
        seen.add(v)
        s = syzygy_step(alg, v, cutoff)
        if s is None:
            raise ResolutionError(f"no simple syzygy of S({v}) within the cutoff")
        orbit.append(s)
        v = s.target
    if v != i:
        raise ResolutionError(f"orbit of {i} enters a cycle at {v} without returning")
    return orbit


def period(alg: BoundAlgebra, cutoff: Optional[int] = None) -> int:
    """Least P with Omega^P S(i) = S(i) for every simple."""
    steps = {v: syzygy_step(alg, v, cutoff) for v in alg.vertices}
    out = 1
    for v in alg.vertices:
        total, u = 0, v
        while True:
            s = steps[u]
            if s is None:
                raise ResolutionError(f"no simple syzygy of S({u}) within the cutoff")
            total += s.k
            u = s.target
            if u == v:
                break
        out = out * total // gcd(out, total)
    return out


def omega_order(i, m: int) -> int:
    i, k = tuple(i), 1
    j = omega(i, m)
    while j != i:
        j = omega(j, m)
        k += 1
    return k


# output


def reports_json(reports: Dict[tuple, ResolutionReport]) -> str:
    return json.dumps([reports[v].to_json() for v in sorted(reports)], indent=2, sort_keys=True)


def format_table(rep: ResolutionReport) -> str:
    lines = [f"S({vertex_label(rep.vertex)})"]
    for s in rep.steps:
        gens = " ".join(f"P({vertex_label(v)})<{d}>" for v, d in sorted(s.generators))
        lines.append(f"  {s.l:>3}  {'lin' if s.linear else '   '}  {gens}")
    if rep.terminal is None:
        term = "not semisimple" if rep.q is not None else "not reached"
    elif not rep.terminal:
        term = "0"
    else:
        term = " ".join(f"S({vertex_label(v)})<{d}>" for v, d in rep.terminal)
    lines.append(f"  Ker f_{rep.q}: {term}")
    return "\n".join(lines) + "\n"
