"""Exact sparse linear algebra over Q or GF(p).

Vectors are plain dicts ``{key: coefficient}`` holding only nonzero
entries.  Keys must be mutually comparable; the key order decides which
entry of a row becomes its pivot, so echelon forms are deterministic.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Tuple

Vec = Dict[Hashable, object]

DEFAULT_PRIME = 32003


@dataclass(frozen=True)
class Field:
    """Coefficient field: ``p == 0`` means the rationals, otherwise GF(p)."""

    p: int = 0

    def __post_init__(self):
        if self.p < 0 or self.p == 1:
            raise ValueError(f"bad characteristic {self.p}")
        if self.p > 1 and any(self.p % q == 0 for q in range(2, int(self.p ** 0.5) + 1)):
            raise ValueError(f"{self.p} is not prime")

    @property
    def name(self) -> str:
        return "QQ" if self.p == 0 else f"GF({self.p})"

    def __call__(self, x):
        if self.p:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        return Fraction(x)

    def inv(self, x):
        if self.is_zero(x):
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(x, -1, self.p)
        return Fraction(1) / x

    def norm(self, x):
        return x % self.p if self.p else x

    def is_zero(self, x) -> bool:
        return x == 0

    def to_json(self, x):
        if self.p:
            return int(x)
        x = Fraction(x)
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


QQ = Field(0)


def field_from_name(name: Optional[str]) -> Field:
    """Parse ``rational``/``QQ`` or ``gf``/``gf:<p>``."""
    if name is None:
        name = os.environ.get("PYRAMID_FIELD", "rational")
    name = name.strip().lower()
    if name in ("rational", "qq", "q"):
        return QQ
    if name.startswith("gf"):
        rest = name[2:].lstrip(":(").rstrip(")")
        return Field(int(rest) if rest else DEFAULT_PRIME)
    raise ValueError(f"unknown field {name!r}")


def axpy(F: Field, y: Vec, a, x: Vec) -> None:
    """In place ``y += a*x``."""
    for k, v in x.items():
        s = F.norm(y.get(k, 0) + a * v)
        if s == 0:
            y.pop(k, None)
        else:
            y[k] = s


def scale(F: Field, a, x: Vec) -> Vec:
    if a == 0:
        return {}
    return {k: F.norm(a * v) for k, v in x.items()}


def leading_key(x: Vec):
    return min(x)


def normalize_leading(F: Field, x: Vec) -> Vec:
    """Scale so the coefficient at the smallest key is 1."""
    if not x:
        return x
    return scale(F, F.inv(x[leading_key(x)]), x)


class Echelon:
    """Incremental reduced row echelon form.

    Every stored row has coefficient 1 at its pivot (its smallest key) and
    zero at every other pivot.  An optional *tag* vector rides along with
    each row and receives the same row operations; ``nullspace`` uses the
    tags to remember which input combination produced each row.
    """

    def __init__(self, F: Field):
        self.F = F
        self.rows: Dict[Hashable, Vec] = {}
        self.tags: Dict[Hashable, Vec] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> List[Hashable]:
        return sorted(self.rows)

    def basis(self) -> List[Vec]:
        return [dict(self.rows[p]) for p in self.pivots()]

    def reduce(self, v: Vec, tag: Optional[Vec] = None) -> Tuple[Vec, Optional[Vec]]:
        v = dict(v)
        tag = dict(tag) if tag is not None else None
        hits = [k for k in v if k in self.rows]
        for k in hits:
            c = v.get(k, 0)
            if c == 0:
                continue
            axpy(self.F, v, -c, self.rows[k])
            if tag is not None:
                axpy(self.F, tag, -c, self.tags[k])
        return v, tag

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)[0]

    def add(self, v: Vec, tag: Optional[Vec] = None):
        """Insert ``v``.  Returns ``(True, None)`` if the rank grew, otherwise
        ``(False, reduced_tag)`` where the reduced tag is a dependency."""
        r, t = self.reduce(v, tag if tag is not None else {})
        if not r:
            return False, t
        F = self.F
        piv = leading_key(r)
        inv = F.inv(r[piv])
        r = scale(F, inv, r)
        t = scale(F, inv, t)
        for k, row in self.rows.items():
            c = row.get(piv, 0)
            if c:
                axpy(F, row, -c, r)
                axpy(F, self.tags[k], -c, t)
        self.rows[piv] = r
        self.tags[piv] = t
        return True, None


def rank(F: Field, vectors: Iterable[Vec]) -> int:
    E = Echelon(F)
    for v in vectors:
        E.add(v)
    return E.rank


def rref(F: Field, vectors: Iterable[Vec]) -> List[Vec]:
    E = Echelon(F)
    for v in vectors:
        E.add(v)
    return E.basis()


def nullspace(F: Field, columns: List[Vec]) -> List[Vec]:
    """Kernel of the map sending basis vector ``j`` to ``columns[j]``.

    Returns the canonical (reduced echelon) basis of the kernel as vectors
    keyed by column index.
    """
    E = Echelon(F)
    deps = []
    for j, c in enumerate(columns):
        grew, dep = E.add(c, {j: F(1)})
        if not grew:
            deps.append(dep)
    return rref(F, deps)


def annihilator(F: Field, keys: List[Hashable], vectors: List[Vec]) -> List[Vec]:
    """Basis of ``{x : sum_k v[k] x[k] = 0 for all v}`` in the span of ``keys``
    (keys treated as an orthonormal basis)."""
    rows = rref(F, vectors)
    pivots = {leading_key(r) for r in rows}
    out = []
    for k in sorted(keys):
        if k in pivots:
            continue
        x = {k: F(1)}
        for r in rows:
            c = r.get(k, 0)
            if c:
                x[leading_key(r)] = F.norm(-c)
        out.append(x)
    return rref(F, out)
