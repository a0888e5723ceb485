"""Quadratic bound quiver algebras kQ/(rho) with exact graded components.

Paths are written in traversal order: ``(source, (k1, k2, ...))`` walks the
arrow of kind k1 first.  Products follow composition order, so
``multiply(x, y)`` means "first y, then x".
"""
from __future__ import annotations

import hashlib
import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .linalg import QQ, Echelon, Field, annihilator, nullspace
from .quiver import Kinds, Skeleton, Vertex, stable_quiver, cover_window, vertex_label


class AlgebraError(ValueError):
    pass


class SchemeError(AlgebraError):
    pass


class FullBoundError(AlgebraError):
    def __init__(self, relation, term):
        self.relation = relation
        self.term = term
        super().__init__(
            f"relation {format_relation(relation)} has term {term} leaving the vertex subset"
        )


class Relation(NamedTuple):
    source: Vertex
    target: Vertex
    terms: Tuple[Tuple[Kinds, object], ...]


@dataclass(frozen=True)
class CoefficientScheme:
    """Coefficients d(s, t, i) of the mixed relations d*[s,t] - [t,s], t < s.

    ``[s,t]`` is the path taking the type-s arrow first.  ``i`` is the
    source vertex of the relation with any cover level dropped.
    """

    mode: str = "anticommutative"
    custom: Optional[Callable[[int, int, Vertex], object]] = None

    def __post_init__(self):
        if self.mode not in ("anticommutative", "commutative", "custom"):
            raise SchemeError(f"unknown scheme mode {self.mode!r}")
        if self.mode == "custom" and self.custom is None:
            raise SchemeError("custom scheme needs a coefficient function")

    def d(self, s: int, t: int, i: Vertex):
        if self.mode == "anticommutative":
            return -1
        if self.mode == "commutative":
            return 1
        return self.custom(s, t, i)


ANTICOMMUTATIVE = CoefficientScheme("anticommutative")
COMMUTATIVE = CoefficientScheme("commutative")


@dataclass
class Element:
    """Homogeneous element of e_target Lambda_degree e_source."""

    source: Vertex
    target: Vertex
    degree: int
    coeffs: Dict[Kinds, object]

    def is_zero(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True)
class GradedComponent:
    source: Vertex
    target: Vertex
    degree: int
    raw_paths: Tuple[Kinds, ...]
    basis: Tuple[Kinds, ...]
    relation_rank: int

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class QuadraticData:
    source: Vertex
    target: Vertex
    paths: Tuple[Kinds, ...]
    relations: Tuple[Dict[Kinds, object], ...]
    annihilator: Tuple[Dict[Kinds, object], ...]


@dataclass
class _Slice:
    raw: Dict[Vertex, List[Kinds]]
    basis: Dict[Vertex, List[Kinds]]
    nf: Dict[Kinds, Dict[Kinds, object]]
    rank: Dict[Vertex, int]


class BoundAlgebra:
    """kQ/(rho) for a quadratic relation set rho.

    Graded pieces are computed lazily per (source, degree) and cached; the
    cache is filled with ``setdefault`` so concurrent readers at worst
    duplicate work.
    """

    def __init__(self, skeleton: Skeleton, relations: Iterable[Relation], field: Field = QQ,
                 scheme: Optional[CoefficientScheme] = None, role: Optional[str] = None,
                 name: Optional[str] = None):
        self.skeleton = skeleton
        self.field = field
        self.scheme = scheme
        self.role = role or skeleton.family
        self.name = name or f"{self.role}(n={skeleton.n}, m={skeleton.m})"
        rels = []
        for r in relations:
            terms = tuple(sorted((k, field(c)) for k, c in r.terms if field(c) != 0))
            if not terms:
                continue
            for kinds, _ in terms:
                if len(kinds) != 2:
                    raise AlgebraError(f"non-quadratic relation term {kinds}")
                if skeleton.walk(r.source, kinds) != r.target:
                    raise AlgebraError(f"relation term {kinds} at {r.source} does not reach {r.target}")
            rels.append(Relation(r.source, r.target, terms))
        self.relations: Tuple[Relation, ...] = tuple(sorted(rels))
        self._by_source: Dict[Vertex, List[Relation]] = defaultdict(list)
        for r in self.relations:
            self._by_source[r.source].append(r)
        self._slices: Dict[Tuple[Vertex, int], _Slice] = {}
        self._top: Dict[Vertex, int] = {}

    def __repr__(self):
        return f"<BoundAlgebra {self.name} over {self.field.name}: {len(self.vertices)} vertices>"

    @property
    def vertices(self) -> Tuple[Vertex, ...]:
        return self.skeleton.vertices

    # graded pieces

    def _slice(self, i: Vertex, l: int) -> _Slice:
        key = (i, l)
        s = self._slices.get(key)
        if s is None:
            s = self._slices.setdefault(key, self._compute_slice(i, l))
        return s

    def _compute_slice(self, i: Vertex, l: int) -> _Slice:
        sk, F = self.skeleton, self.field
        if l >= 2 and not any(self._slice(i, l - 1).basis.values()):
            return _Slice({}, {}, {}, {})
        raw: Dict[Vertex, List[Kinds]] = defaultdict(list)
        for kinds, end in sk.paths(i, l):
            raw[end].append(kinds)
        if l < 2:
            return _Slice(dict(raw), {j: list(p) for j, p in raw.items()}, {}, {j: 0 for j in raw})
        rows: Dict[Vertex, List[dict]] = defaultdict(list)
        for k in range(l - 1):
            for pre, u in sk.paths(i, k):
                for rel in self._by_source.get(u, ()):
                    for suf, end in sk.paths(rel.target, l - 2 - k):
                        rows[end].append({pre + kk + suf: c for kk, c in rel.terms})
        basis, nf, rank = {}, {}, {}
        for end, paths in raw.items():
            E = Echelon(F)
            for r in rows.get(end, ()):
                E.add(r)
            basis[end] = [p for p in paths if p not in E.rows]
            rank[end] = E.rank
            for p, row in E.rows.items():
                nf[p] = {q: F.norm(-c) for q, c in row.items() if q != p}
        return _Slice(dict(raw), basis, nf, rank)

    def component(self, i: Vertex, j: Vertex, l: int) -> GradedComponent:
        s = self._slice(i, l)
        return GradedComponent(i, j, l, tuple(s.raw.get(j, ())), tuple(s.basis.get(j, ())),
                               s.rank.get(j, 0))

    def basis(self, i: Vertex, j: Vertex, l: int) -> List[Kinds]:
        return self._slice(i, l).basis.get(j, [])

    def basis_from(self, i: Vertex, l: int) -> Dict[Vertex, List[Kinds]]:
        return {j: b for j, b in self._slice(i, l).basis.items() if b}

    def graded_dim(self, i: Vertex, j: Vertex, l: int) -> int:
        if l < 0:
            return 0
        return len(self.basis(i, j, l))

    def normal_form(self, i: Vertex, kinds: Kinds) -> Dict[Kinds, object]:
        """Residue of the path (i, kinds) in the standard-monomial basis."""
        kinds = tuple(kinds)
        if self.skeleton.walk(i, kinds) is None:
            raise AlgebraError(f"no path {kinds} from {i}")
        if len(kinds) < 2:
            return {kinds: self.field(1)}
        s = self._slice(i, len(kinds))
        if not s.raw:
            return {}
        red = s.nf.get(kinds)
        if red is None:
            return {kinds: self.field(1)}
        return dict(red)

    def is_bound(self, i: Vertex, kinds: Kinds) -> bool:
        return bool(self.normal_form(i, kinds))

    def top_degree(self, i: Optional[Vertex] = None) -> int:
        """Largest l with Lambda_l e_i != 0 (over all i when i is None)."""
        if i is None:
            return max((self.top_degree(v) for v in self.vertices), default=-1)
        if i not in self._top:
            l = 0
            while any(self._slice(i, l + 1).basis.values()):
                l += 1
            self._top[i] = l
        return self._top[i]

    def path(self, i: Vertex, kinds: Kinds) -> Element:
        end = self.skeleton.walk(i, kinds)
        if end is None:
            raise AlgebraError(f"no path {kinds} from {i}")
        return Element(i, end, len(kinds), self.normal_form(i, kinds))

    def idempotent(self, i: Vertex) -> Element:
        return Element(i, i, 0, {(): self.field(1)})

    def multiply(self, x: Element, y: Element) -> Element:
        """x * y in composition order: walk y, then x."""
        if y.target != x.source:
            raise AlgebraError(f"cannot compose: {y.target} != {x.source}")
        F = self.field
        out: Dict[Kinds, object] = {}
        for ky, cy in y.coeffs.items():
            for kx, cx in x.coeffs.items():
                for k, c in self.normal_form(y.source, ky + kx).items():
                    v = F.norm(out.get(k, 0) + cx * cy * c)
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
        return Element(y.source, x.target, x.degree + y.degree, out)

    def dims_table(self) -> List[Tuple[Vertex, Vertex, int, int]]:
        out = []
        for i in self.vertices:
            for l in range(self.top_degree(i) + 1):
                for j, b in sorted(self.basis_from(i, l).items()):
                    out.append((i, j, l, len(b)))
        return out

    def dims_json(self) -> List[dict]:
        return [{"source": list(i), "target": list(j), "degree": l, "dim": d}
                for i, j, l, d in self.dims_table()]

    def dims_checksum(self) -> str:
        blob = json.dumps(self.dims_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    # module structure of the indecomposable projectives

    def radical_layers(self, i: Vertex) -> List[List[Tuple[Vertex, int]]]:
        """Composition factors of rad^t P(i) / rad^{t+1} P(i), t = 0, 1, ..."""
        return [sorted((j, len(b)) for j, b in self.basis_from(i, l).items())
                for l in range(self.top_degree(i) + 1)]

    def loewy_length(self, i: Vertex) -> int:
        return self.top_degree(i) + 1

    def projective_dim(self, i: Vertex) -> int:
        return sum(len(b) for l in range(self.top_degree(i) + 1) for b in self.basis_from(i, l).values())

    def injective_dim(self, j: Vertex) -> int:
        """dim e_j Lambda, the dimension of the injective hull of S(j)."""
        return sum(len(self.basis(i, j, l)) for i in self.vertices for l in range(self.top_degree(i) + 1))

    def _socle_series(self, i: Vertex) -> List[Dict[Tuple[Vertex, int], int]]:
        F, sk = self.field, self.skeleton
        comps = {(j, l): b for l in range(self.top_degree(i) + 1) for j, b in self.basis_from(i, l).items()}
        total = sum(len(b) for b in comps.values())
        series: List[Dict[Tuple[Vertex, int], Echelon]] = [{c: Echelon(F) for c in comps}]
        while sum(E.rank for E in series[-1].values()) < total:
            prev = series[-1]
            nxt = {}
            for (j, l), b in comps.items():
                columns = []
                for path in b:
                    col = {}
                    for kind, j2 in sk.out_arrows(j):
                        img = self.normal_form(i, path + (kind,))
                        if (j2, l + 1) in prev:
                            img = prev[(j2, l + 1)].reduce(img)[0]
                        for k, c in img.items():
                            col[(kind, k)] = c
                    columns.append(col)
                E = Echelon(F)
                for v in nullspace(F, columns):
                    E.add({b[idx]: c for idx, c in v.items()})
                nxt[(j, l)] = E
            if sum(E.rank for E in nxt.values()) == sum(E.rank for E in prev.values()):
                raise AlgebraError(f"socle series of P({i}) stalled")
            series.append(nxt)
        return [{c: E.rank for c, E in s.items()} for s in series]

    def socle_layers(self, i: Vertex) -> List[List[Tuple[Vertex, int]]]:
        """Composition factors of soc^{t+1} P(i) / soc^t P(i), t = 0, 1, ..."""
        series = self._socle_series(i)
        out = []
        for a, b in zip(series, series[1:]):
            mult: Dict[Vertex, int] = defaultdict(int)
            for (j, l), r in b.items():
                if r - a[(j, l)]:
                    mult[j] += r - a[(j, l)]
            out.append(sorted(mult.items()))
        return out

    def socle(self, i: Vertex) -> List[Tuple[Vertex, int]]:
        return self.socle_layers(i)[0] if self.projective_dim(i) else []

    def is_projective_injective(self, i: Vertex) -> bool:
        """P(i) is injective iff its socle is one simple S(j) and dim P(i) = dim e_j Lambda."""
        soc = self.socle(i)
        if len(soc) != 1 or soc[0][1] != 1:
            return False
        return self.projective_dim(i) == self.injective_dim(soc[0][0])

    # relation listing

    def relations_text(self) -> str:
        return "".join(format_relation(r, self.skeleton, self.field) + "\n" for r in self.relations)

    def quadratic_data(self, i: Vertex, j: Vertex) -> QuadraticData:
        paths = tuple(k for k, end in self.skeleton.paths(i, 2) if end == j)
        rels = tuple(dict(r.terms) for r in self._by_source.get(i, ()) if r.target == j)
        ann = tuple(annihilator(self.field, list(paths), list(rels)))
        return QuadraticData(i, j, paths, rels, ann)


def format_relation(r: Relation, skeleton: Optional[Skeleton] = None, F: Field = QQ) -> str:
    """``d*g[t]@v . g[s]@u - ...``: left factor is the second arrow walked."""
    parts = []
    for kinds, c in r.terms:
        mid = skeleton.target(r.source, kinds[0]) if skeleton is not None else None
        mid_label = vertex_label(mid) if mid is not None else "?"
        text = f"g[{kinds[1]}]@{mid_label} . g[{kinds[0]}]@{vertex_label(r.source)}"
        c = F.to_json(c)
        sign = "-" if str(c).startswith("-") else "+"
        mag = str(c).lstrip("-")
        body = text if mag == "1" else f"{mag}*{text}"
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


# relation schemes


def _base(skeleton: Skeleton, v: Vertex) -> Vertex:
    return v[: skeleton.n] if skeleton.family == "cover" else v


def rule_relations(skeleton: Skeleton, scheme: CoefficientScheme, F: Field,
                   pairs: Optional[Callable[[int, int], bool]] = None) -> List[Relation]:
    """Zero relations on same-type 2-paths and d*[s,t] - [t,s] wherever both
    paths of a type pair t < s exist."""
    out = []
    for i in skeleton.vertices:
        kinds = [k for k, _ in skeleton.out_arrows(i)]
        for t in skeleton.kinds:
            for s in skeleton.kinds:
                if s < t or (pairs is not None and not pairs(t, s)):
                    continue
                if s == t:
                    end = skeleton.walk(i, (t, t))
                    if end is not None:
                        out.append(Relation(i, end, (((t, t), 1),)))
                    continue
                if t not in kinds and s not in kinds:
                    continue
                e1 = skeleton.walk(i, (s, t))
                e2 = skeleton.walk(i, (t, s))
                if e1 is None or e2 is None:
                    continue
                if e1 != e2:
                    raise AlgebraError(f"paths {(s, t)} and {(t, s)} from {i} do not commute")
                d = F(scheme.d(s, t, _base(skeleton, i)))
                if d == 0:
                    raise SchemeError(f"scheme gives d({s},{t},{i}) = 0")
                out.append(Relation(i, e1, (((s, t), d), ((t, s), F(-1)))))
    return out


def build_algebra(skeleton: Skeleton, scheme: CoefficientScheme = ANTICOMMUTATIVE,
                  field: Field = QQ) -> BoundAlgebra:
    """Pyramid, stable or cover-window algebra with relations generated by the scheme."""
    if skeleton.family not in ("pyramid", "stable", "cover"):
        raise AlgebraError(f"no relation rule for {skeleton.family} skeletons")
    rels = rule_relations(skeleton, scheme, field)
    return BoundAlgebra(skeleton, rels, field, scheme)


def stable_extension(alg: BoundAlgebra, scheme: Optional[CoefficientScheme] = None) -> BoundAlgebra:
    """Add type-(n+1) arrows and their relations to a pyramid algebra, keeping its own relations."""
    scheme = scheme or alg.scheme or ANTICOMMUTATIVE
    sk = stable_quiver(alg.skeleton)
    top = sk.n + 1
    new = rule_relations(sk, scheme, alg.field, pairs=lambda t, s: s == top)
    return BoundAlgebra(sk, list(alg.relations) + new, alg.field, scheme, role="stable")


def cover_algebra(alg: BoundAlgebra, lo: int, hi: int) -> BoundAlgebra:
    """Lift every relation of a stable algebra to each level of the window."""
    sk = cover_window(alg.skeleton, lo, hi)
    top = sk.n + 1
    rels = []
    for r in alg.relations:
        rise = {kinds.count(top) for kinds, _ in r.terms}
        if len(rise) != 1:
            raise AlgebraError(f"relation {r} is not homogeneous for the level grading")
        rise = rise.pop()
        for v in range(lo, hi + 1 - rise):
            rels.append(Relation(r.source + (v,), r.target + (v + rise,), r.terms))
    return BoundAlgebra(sk, rels, alg.field, alg.scheme, role="cover")


def quadratic_dual(alg: BoundAlgebra) -> BoundAlgebra:
    """Same quiver, relations the annihilator of rho under the pairing making
    distinct paths orthonormal (one 2-path space per vertex pair)."""
    rels = []
    for i in alg.vertices:
        for j in sorted({end for _, end in alg.skeleton.paths(i, 2)}):
            for x in alg.quadratic_data(i, j).annihilator:
                rels.append(Relation(i, j, tuple(sorted(x.items()))))
    role = "dual" if alg.role != "dual" else alg.skeleton.family
    return BoundAlgebra(alg.skeleton, rels, alg.field, None, role=role, name=f"dual of {alg.name}")


koszul_dual = quadratic_dual


def opposite(alg: BoundAlgebra) -> BoundAlgebra:
    sk = alg.skeleton.opposite()
    rels = []
    for r in alg.relations:
        terms = tuple((kinds[::-1], c) for kinds, c in r.terms)
        for kinds, _ in terms:
            if sk.walk(r.target, kinds) != r.source:
                raise AlgebraError(f"cannot reverse relation term {kinds} at {r.source}")
        rels.append(Relation(r.target, r.source, terms))
    return BoundAlgebra(sk, rels, alg.field, alg.scheme, role=f"op-{alg.role}", name=f"opposite of {alg.name}")


def restrict(alg: BoundAlgebra, vertices: Iterable[Vertex], role: Optional[str] = None) -> BoundAlgebra:
    """Lambda / I for I generated by the dropped idempotents, checked to be a
    full bound subquiver first."""
    keep = set(map(tuple, vertices))
    sk = alg.skeleton
    rels = []
    for r in alg.relations:
        if r.source not in keep or r.target not in keep:
            continue
        for kinds, c in r.terms:
            if any(v not in keep for v in sk.path_vertices(r.source, kinds)):
                raise FullBoundError(r, kinds)
        rels.append(r)
    sub = sk.induced(keep)
    return BoundAlgebra(sub, rels, alg.field, alg.scheme, role=role or "sub")


def relation_set(alg: BoundAlgebra) -> set:
    """Relations as a hashable set, normalised so the first coefficient is 1."""
    F = alg.field
    out = set()
    for r in alg.relations:
        inv = F.inv(r.terms[0][1])
        out.add((r.source, r.target, tuple((k, F.norm(c * inv)) for k, c in r.terms)))
    return out
