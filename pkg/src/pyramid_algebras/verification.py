"""Executable checks: translation-quiver axioms, admissibility (i) and the
theorem corpus over ranges of (n, m)."""
from __future__ import annotations

import itertools
import time
import xml.etree.ElementTree as ET
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from math import comb, lcm
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .algebra import (ANTICOMMUTATIVE, COMMUTATIVE, AlgebraError, BoundAlgebra, CoefficientScheme,
                      build_algebra, cover_algebra, quadratic_dual, stable_extension)
from .constructions import (check_slice, cone, cuboidcube_violations, identify, projective_injective_report,
                            tau_slice, truncate, unidentify)
from .linalg import QQ, Field, rank
from .quiver import (Vertex, admissible_cube, generate_quiver, in_pyramid, pyramid_vertices, shift,
                     stable_quiver, vertex_count, vmap, omega)
from .resolution import (compare, koszul_classify, minimal_resolution, omega_order, period,
                         predict_resolution, syzygy_orbit)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class AxiomReport:
    axiom: str
    status: str
    witness: object = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == PASS


# translations


def pyramid_translation(alg: BoundAlgebra) -> Dict[Vertex, Vertex]:
    """i -> i - e_n on the vertices with i_n > 1."""
    n = alg.skeleton.n
    return {i: i[:-1] + (i[-1] - 1,) for i in alg.vertices if i[n - 1] > 1}


def trivial_translation(alg: BoundAlgebra) -> Dict[Vertex, Vertex]:
    return {i: i for i in alg.vertices}


def bound_paths(alg: BoundAlgebra, i: Vertex, l: int):
    """Paths (kinds, end) of length l from i with nonzero residue."""
    for kinds, end in alg.skeleton.paths(i, l):
        if alg.normal_form(i, kinds):
            yield kinds, end


def _injective(alg: BoundAlgebra, source: Vertex, us: Sequence[tuple], qs: Sequence[tuple], u_first: bool) -> bool:
    """Is u -> (u.q)_q injective on span(us)?  Paths compose from ``source``."""
    cols = []
    for u in us:
        col = {}
        for idx, q in enumerate(qs):
            kinds = u + q if u_first else q + u
            for k, c in alg.normal_form(source, kinds).items():
                col[(idx, k)] = c
        cols.append(col)
    return rank(alg.field, cols) == len(us)


def check_translation_axioms(alg: BoundAlgebra, tau: Dict[Vertex, Vertex], n_param: int) -> List[AxiomReport]:
    sk = alg.skeleton
    L = n_param + 1
    if len(set(tau.values())) != len(tau):
        raise ValueError("translation is not injective")
    for a, b in tau.items():
        if a not in sk or b not in sk:
            raise ValueError(f"translation {a} -> {b} leaves the quiver")
    inv = {b: a for a, b in tau.items()}
    reports = []

    # 1. maximal bound paths have length n+1 and run tau(i) -> i
    bad = None
    for i in alg.vertices:
        for l in range(alg.top_degree(i) + 1):
            for kinds, end in bound_paths(alg, i, l):
                if any(alg.normal_form(i, kinds + (k,)) for k, _ in sk.out_arrows(end)):
                    continue
                if any(alg.normal_form(u, (k,) + kinds) for k, u in sk.in_arrows(i)):
                    continue
                if l != L or tau.get(end) != i:
                    bad = (i, kinds)
                    break
            if bad:
                break
        if bad:
            break
    reports.append(AxiomReport("1", FAIL if bad else PASS, bad,
                               "maximal bound path of wrong length or ends" if bad else ""))

    # 2. dim e_i Lambda_{n+1} e_{tau i} <= 1
    bad = next(((tau[i], i) for i in sorted(tau) if alg.graded_dim(tau[i], i, L) > 1), None)
    reports.append(AxiomReport("2", FAIL if bad else PASS, bad))

    # 3. u in e_i Lambda_t e_j nonzero => u q != 0 for some q: tau i -> j of length n+1-t
    bad = None
    for i in sorted(tau):
        ti = tau[i]
        for t in range(L + 1):
            for j in alg.vertices:
                us = alg.basis(j, i, t)
                if not us:
                    continue
                qs = alg.basis(ti, j, L - t)
                if not _injective(alg, ti, us, qs, u_first=False):
                    bad = (i, j, t)
                    break
            if bad:
                break
        if bad:
            break
    reports.append(AxiomReport("3", FAIL if bad else PASS, bad))

    # 4. u in e_j Lambda_t e_i nonzero => p u != 0 for some p: j -> tau^{-1} i
    bad = None
    for i in sorted(inv):
        ii = inv[i]
        for t in range(L + 1):
            for j, us in sorted(alg.basis_from(i, t).items()):
                ps = [k for k, end in sk.paths(j, L - t) if end == ii]
                if not _injective(alg, i, us, ps, u_first=True):
                    bad = (i, j, t)
                    break
            if bad:
                break
        if bad:
            break
    reports.append(AxiomReport("4", FAIL if bad else PASS, bad))
    return reports


def check_admissibility_i(alg: BoundAlgebra, n_param: int, budget: int = 2_000_000) -> AxiomReport:
    """Every bound path p extends to a bound path q' p q'' of length n+1.
    ``budget`` caps the number of candidate extensions tried."""
    sk = alg.skeleton
    L = n_param + 1
    spent = 0
    for i in alg.vertices:
        for l in range(min(alg.top_degree(i), L) + 1):
            for kinds, end in bound_paths(alg, i, l):
                found = False
                for s in range(L - l + 1):
                    for src, pre in sk.paths_into(i, s):
                        for post, _ in sk.paths(end, L - l - s):
                            spent += 1
                            if spent > budget:
                                return AxiomReport("ADM-i", INCONCLUSIVE, (i, kinds), f"budget {budget} exhausted")
                            if alg.normal_form(src, pre + kinds + post):
                                found = True
                                break
                        if found:
                            break
                    if found:
                        break
                if not found:
                    return AxiomReport("ADM-i", FAIL, (i, kinds), "bound path does not extend")
    return AxiomReport("ADM-i", PASS, None, f"{spent} extensions tried")


# oracles


def brute_vertices(n: int, m: int) -> List[Vertex]:
    """Q(n)_0 by filtering the full box [1, m+n-1]^n."""
    return sorted(v for v in itertools.product(range(1, m + n), repeat=n) if in_pyramid(v, m))


def path_oracle(n: int, m: int, i: Vertex, j: Vertex, l: int) -> Optional[int]:
    """Predicted dim e_j Lambda_l e_i for the stable algebra, l <= n+1: 1 if
    paths exist and each uses pairwise distinct types, else 0."""
    found, distinct = False, True
    for kinds in itertools.product(range(1, n + 2), repeat=l):
        v = i
        for k in kinds:
            v = shift(v, k) if k <= n else v[:-1] + (v[-1] - 1,)
            if not in_pyramid(v, m):
                break
        else:
            if v == j:
                found = True
                distinct = distinct and len(set(kinds)) == l
    return int(found and distinct)


# the theorem corpus


def _algs(n, m, scheme, field):
    A = build_algebra(generate_quiver(n, m), scheme, field)
    return A, stable_extension(A)


def thm_vertex_count(n, m, scheme, field):
    got = len(generate_quiver(n, m).vertices)
    brute = len(brute_vertices(n, m))
    ok = got == brute == comb(m + n - 1, n)
    return ok, f"{got} vertices"


def thm_resolution_shape(n, m, scheme, field):
    _, S = _algs(n, m, scheme, field)
    for v in S.vertices:
        rep = minimal_resolution(S, v, stop_at_terminal=True)
        d = compare(rep, predict_resolution(v, m))
        if d or rep.terminal != [(omega(v, m), m + n)]:
            return False, f"S{v}: {d.describe()}"
    return True, f"{len(S.vertices)} simples match"


def thm_koszul_type(n, m, scheme, field):
    A, S = _algs(n, m, scheme, field)
    k1 = koszul_classify(S)
    k2 = koszul_classify(quadratic_dual(S))
    k3 = koszul_classify(A)
    ok = (k1.kind == k2.kind == "almost-koszul" and k1.pq == (n + 1, m - 1) and k2.pq == (m - 1, n + 1)
          and k3.kind == "koszul")
    return ok, f"stable {k1.pq}, dual {k2.pq}, pyramid {k3.kind}"


def thm_periodicity(n, m, scheme, field):
    _, S = _algs(n, m, scheme, field)
    P = period(S)
    orders = {omega_order(v, m) for v in S.vertices}
    order = reduce(lcm, orders, 1)
    orbit_ok = all([s.target for s in syzygy_orbit(S, v)] == _omega_orbit(v, m) for v in S.vertices)
    ok = P == m * (n + 1) and order == n + 1 and orbit_ok
    detail = f"period {P}, omega order {order}"
    if n == 1:
        Pd = period(quadratic_dual(S))
        ok = ok and Pd == (n + 1) * (n + 2)
        detail += f", dual period {Pd}"
    return ok, detail


def _omega_orbit(v, m):
    out, w = [], omega(v, m)
    out.append(w)
    while w != v:
        w = omega(w, m)
        out.append(w)
    return out


def thm_path_length(n, m, scheme, field):
    _, S = _algs(n, m, scheme, field)
    for i in S.vertices:
        for l in range(n + 2):
            for j in S.vertices:
                d = S.graded_dim(i, j, l)
                if d > 1 or d != path_oracle(n, m, i, j, l):
                    return False, f"dim e_{j} L_{l} e_{i} = {d}"
    return True, "all pairs"


def thm_layers(n, m, scheme, field):
    _, S = _algs(n, m, scheme, field)
    for i in S.vertices:
        want = [sorted((vmap(i, a), 1) for a in admissible_cube(i, m, t)) for t in range(n + 2)]
        while want and not want[-1]:
            want.pop()
        rad = S.radical_layers(i)
        soc = S.socle_layers(i)
        if rad != want or soc != want[::-1] or S.loewy_length(i) != n + 2:
            return False, f"P{i}: radical {rad} socle {soc} expected {want}"
    return True, "radical and socle layers"


def thm_completion(n, m, scheme, field):
    A, S = _algs(n, m, scheme, field)
    cov = cover_algebra(S, 1, m)
    plan = tau_slice(cov.skeleton, 1)
    direct = set(generate_quiver(n + 1, m).vertices)
    if set(plan.completion) != direct or len(direct) != comb(m + n, n + 1):
        return False, "completion vertex set differs"
    for i in direct:
        j, a = identify(i)
        if unidentify(j, a) != i:
            return False, f"identification fails at {i}"
    tr = truncate(cov, plan)
    return tr.dims_match and tr.relations_match, f"dims {tr.dims_match}, relations {tr.relations_match}"


def thm_tau_slice(n, m, scheme, field):
    S = stable_quiver(generate_quiver(n, m))
    from .quiver import cover_window
    W = cover_window(S, 0, m - 2)
    for t in range(0, m - 1):
        plan = tau_slice(W, t)
        if not plan.check.ok:
            return False, f"level {t}: {plan.check.describe()}"
    return True, f"levels 0..{m - 2}"


def thm_loewy(n, m, scheme, field):
    A, _ = _algs(n, m, scheme, field)
    res = cone(A)
    rows = projective_injective_report(res.lam, "cell")
    rows_g = projective_injective_report(res.gamma, "hammock")
    bad = [r.vertex for r in rows + rows_g if not r.agree]
    cc = cuboidcube_violations(res.lam.skeleton)
    return not bad and not cc, f"disagree {bad}, cuboidcube {cc}"


def thm_translation(n, m, scheme, field):
    A, S = _algs(n, m, scheme, field)
    reps = check_translation_axioms(A, pyramid_translation(A), n - 1)
    reps += check_translation_axioms(S, trivial_translation(S), n)
    bad = [r for r in reps if not r.ok]
    return not bad, "; ".join(f"axiom {r.axiom} {r.status} {r.witness}" for r in bad) or "axioms 1-4"


def thm_admissibility(n, m, scheme, field):
    A, S = _algs(n, m, scheme, field)
    r1 = check_admissibility_i(A, n - 1)
    r2 = check_admissibility_i(S, n)
    if INCONCLUSIVE in (r1.status, r2.status):
        return None, "budget exhausted"
    return r1.ok and r2.ok, f"pyramid {r1.status}, stable {r2.status}"


def thm_scheme_independence(n, m, scheme, field):
    A1, S1 = _algs(n, m, ANTICOMMUTATIVE, field)
    A2, S2 = _algs(n, m, COMMUTATIVE, field)
    if A1.dims_table() != A2.dims_table() or S1.dims_table() != S2.dims_table():
        return False, "graded dimensions differ"
    for v in S1.vertices:
        r1 = minimal_resolution(S1, v, stop_at_terminal=True)
        r2 = minimal_resolution(S2, v, stop_at_terminal=True)
        if compare(r1, r2):
            return False, f"resolutions of S{v} differ"
    return True, "dims and resolutions agree"


def thm_cone(n, m, scheme, field):
    A = build_algebra(generate_quiver(n, m), scheme, field)
    lam = cone(A).lam
    direct = build_algebra(generate_quiver(n + 1, m), scheme, field)
    ok = lam.dims_table() == direct.dims_table()
    if n == 1:
        lam2 = cone(lam).lam
        direct2 = build_algebra(generate_quiver(3, m), scheme, field)
        ok = ok and lam2.dims_table() == direct2.dims_table()
    return ok, "matches direct construction" if ok else "graded dimensions differ"


THEOREMS: Dict[str, Callable] = {
    "vertex-count": thm_vertex_count,
    "resolution-shape": thm_resolution_shape,
    "koszul-type": thm_koszul_type,
    "periodicity": thm_periodicity,
    "path-length": thm_path_length,
    "layers": thm_layers,
    "completion": thm_completion,
    "tau-slice": thm_tau_slice,
    "loewy": thm_loewy,
    "translation": thm_translation,
    "admissibility": thm_admissibility,
    "scheme-independence": thm_scheme_independence,
    "cone": thm_cone,
}


@dataclass
class CheckResult:
    theorem: str
    n: int
    m: int
    status: str
    detail: str = ""
    seconds: float = 0.0


def run_check(name: str, n: int, m: int, scheme: CoefficientScheme = ANTICOMMUTATIVE,
              field: Field = QQ) -> CheckResult:
    if name not in THEOREMS:
        raise KeyError(f"unknown theorem {name!r}; choose from {', '.join(THEOREMS)}")
    t0 = time.perf_counter()
    try:
        ok, detail = THEOREMS[name](n, m, scheme, field)
        status = INCONCLUSIVE if ok is None else (PASS if ok else FAIL)
    except (AlgebraError, ValueError, RuntimeError) as e:
        status, detail = FAIL, f"{type(e).__name__}: {e}"
    return CheckResult(name, n, m, status, detail, time.perf_counter() - t0)


@dataclass
class CorpusReport:
    results: List[CheckResult] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        statuses = {r.status for r in self.results}
        if FAIL in statuses:
            return 1
        if INCONCLUSIVE in statuses:
            return 2
        return 0

    def counts(self) -> Counter:
        return Counter(r.status for r in self.results)

    def to_junit(self) -> str:
        suite = ET.Element("testsuite", name="pyramid-corpus", tests=str(len(self.results)),
                           failures=str(self.counts()[FAIL]), skipped=str(self.counts()[INCONCLUSIVE]))
        for r in self.results:
            case = ET.SubElement(suite, "testcase", classname=r.theorem, name=f"{r.theorem}[n={r.n},m={r.m}]",
                                 time=f"{r.seconds:.3f}")
            if r.status == FAIL:
                ET.SubElement(case, "failure", message=r.detail)
            elif r.status == INCONCLUSIVE:
                ET.SubElement(case, "skipped", message=r.detail)
        return ET.tostring(suite, encoding="unicode")


def corpus_tasks(nmax: int, mmax: int, theorems: Optional[Sequence[str]] = None) -> List[Tuple[str, int, int]]:
    names = list(theorems or THEOREMS)
    return [(name, n, m) for name in names for n in range(1, nmax + 1) for m in range(3, mmax + 1)]


def _run_task(args):
    name, n, m, field = args
    return run_check(name, n, m, ANTICOMMUTATIVE, field)


def run_corpus(nmax: int, mmax: int, theorems: Optional[Sequence[str]] = None,
               scheme: CoefficientScheme = ANTICOMMUTATIVE, field: Field = QQ,
               workers: int = 1) -> CorpusReport:
    """Every theorem check for 1 <= n <= nmax, 3 <= m <= mmax."""
    tasks = corpus_tasks(nmax, mmax, theorems)
    if workers > 1 and scheme == ANTICOMMUTATIVE:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_run_task, [t + (field,) for t in tasks]))
    else:
        results = [run_check(name, n, m, scheme, field) for name, n, m in tasks]
    return CorpusReport(results)
