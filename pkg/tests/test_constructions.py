from math import comb

import pytest
from hypothesis import given, strategies as st

from conftest import pyramid, stable
from pyramid_algebras.algebra import cover_algebra, restrict
from pyramid_algebras.constructions import (ConstructionError, WindowError, check_slice, completion_vertices, cone,
                                            cuboid_completion, cuboidcube_violations, filtration_check, identify,
                                            projective_injective_report, tau_slice, truncate, unidentify)
from pyramid_algebras.quiver import cell, cover_window, generate_quiver, hammock, stable_quiver
from pyramid_algebras.resolution import compare, minimal_resolution, predict_resolution


def window(n, m, lo, hi):
    return cover_window(stable_quiver(generate_quiver(n, m)), lo, hi)


def test_slice_example():
    plan = tau_slice(window(1, 3, 0, 2), 0)
    assert plan.check.ok
    assert plan.slice_vertices == ((1, 0), (2, 0), (3, 0))


@pytest.mark.parametrize("n,m", [(1, 3), (1, 4), (2, 3), (2, 4)])
def test_every_level_is_a_slice(n, m):
    W = window(n, m, 0, m - 2)
    for t in range(m - 1):
        assert tau_slice(W, t).check.ok


def test_missing_orbit_is_reported():
    W = window(1, 3, 0, 2)
    chk = check_slice(W, [(1, 0), (2, 0)])
    assert not chk.ok and chk.orbit_violations == [((3,), 0)]
    chk = check_slice(W, [(1, 0), (2, 0), (3, 0), (3, 1)])
    assert ((3,), 2) in chk.orbit_violations


def test_path_completeness_witness():
    W = window(1, 3, 0, 2)
    S = {(1, 0), (3, 0), (2, 1)}
    chk = check_slice(W, S)
    assert not chk.ok and not chk.orbit_violations
    path = chk.witness
    assert path[0] in S and path[-1] in S
    assert all(v not in S for v in path[1:-1]) and len(path) >= 3
    for a, b in zip(path, path[1:]):
        assert b in [w for _, w in W.out_arrows(a)]


def test_window_errors():
    W = window(1, 4, 0, 2)
    with pytest.raises(WindowError):
        tau_slice(W, 5)
    plan = tau_slice(W, 0)
    with pytest.raises(WindowError, match="levels 0..3"):
        cuboid_completion(plan)
    with pytest.raises(WindowError):
        tau_slice(generate_quiver(1, 4), 0)


@pytest.mark.parametrize("n,m", [(1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)])
def test_completion_is_next_pyramid(n, m):
    plan = tau_slice(window(n, m, 1, m), 1)
    comp = cuboid_completion(plan)
    assert set(comp.vertices) == set(generate_quiver(n + 1, m).vertices)
    assert len(comp.vertices) == comb(m + n, n + 1)


@given(st.sampled_from([(1, 3), (1, 4), (2, 3), (2, 4)]), st.integers(-3, 3))
def test_completions_are_level_shifts(p, t):
    n, m = p
    base = completion_vertices(n, m, 1)
    assert completion_vertices(n, m, t) == [v[:-1] + (v[-1] + t - 1,) for v in base]


@given(st.sampled_from([(2, 3), (2, 4), (3, 3), (3, 4), (3, 5)]), st.data())
def test_identification_round_trip(p, data):
    N, m = p
    i = data.draw(st.sampled_from(generate_quiver(N, m).vertices))
    j, a = identify(i)
    assert j in generate_quiver(N - 1, m)
    assert unidentify(j, a) == i
    assert a[-1] <= j[-1] - 1


@pytest.mark.parametrize("n,m,t", [(1, 3, 1), (1, 4, 1), (2, 3, 1), (2, 4, 2), (1, 5, -1)])
def test_truncation_matches_direct(n, m, t):
    C = cover_algebra(stable(n, m), t, t + m - 1)
    tr = truncate(C, tau_slice(C.skeleton, t))
    assert tr.skeleton_match and tr.dims_match and tr.relations_match
    for v in tr.algebra.vertices:
        rep = minimal_resolution(tr.algebra, v)
        assert not compare(rep, predict_resolution(v, m, "bar"))


def test_dropped_vertices_vanish():
    C = cover_algebra(stable(1, 3), 1, 3)
    plan = tau_slice(C.skeleton, 1)
    sub = restrict(C, plan.completion)
    outside = set(C.vertices) - set(plan.completion)
    assert outside and not outside & set(sub.vertices)
    for i in sub.vertices:
        for l in range(sub.top_degree(i) + 1):
            assert not set(sub.basis_from(i, l)) & outside


@pytest.mark.parametrize("N,m", [(2, 3), (3, 3), (3, 4)])
def test_filtration_by_trailing_ones(N, m):
    A = pyramid(N, m)
    for t in range(1, N + 1):
        assert filtration_check(A, t) == (True, True)


def test_cone_from_chain():
    res = cone(pyramid(1, 3))
    assert res.lam.skeleton.same_shape(generate_quiver(2, 3))
    names = [s["stage"] for s in res.manifest["stages"]]
    assert names == ["input", "stable", "cover", "slice", "truncation", "dual"]
    trunc = res.manifest["stages"][4]
    assert trunc["matches_direct"] and trunc["vertices"] == 6
    assert trunc["dims_sha256"] == pyramid(2, 3).dims_checksum()
    assert res.gamma.skeleton is res.lam.skeleton


def test_cone_twice_is_direct_three_cube():
    lam3 = cone(cone(pyramid(1, 3)).lam).lam
    assert lam3.dims_table() == pyramid(3, 3).dims_table()


def test_cone_needs_pyramid():
    with pytest.raises(ConstructionError):
        cone(stable(1, 3))


@pytest.mark.parametrize("n,m", [(1, 3), (1, 4), (2, 3), (2, 4)])
def test_loewy_criteria(n, m):
    res = cone(pyramid(n, m))
    for row in projective_injective_report(res.lam, "cell"):
        assert row.agree, row
        assert row.complete == (row.loewy == n + 2)
    for row in projective_injective_report(res.gamma, "hammock"):
        assert row.agree, row
        assert row.complete == (row.loewy == m)
    assert cuboidcube_violations(res.lam.skeleton) == []


def test_loewy_report_example():
    rows = projective_injective_report(pyramid(2, 3), "cell")
    complete = sorted(r.vertex for r in rows if r.complete)
    assert complete == sorted(i for i in generate_quiver(2, 3).vertices if cell(generate_quiver(2, 3), i).complete)
    assert all((r.loewy == 3) == r.complete for r in rows)
    with pytest.raises(ValueError):
        projective_injective_report(pyramid(2, 3), "cube")


def test_complete_cell_end_has_incomplete_hammock():
    for n, m in [(2, 3), (2, 4), (3, 4)]:
        q = generate_quiver(n, m)
        for i in q.vertices:
            c = cell(q, i)
            if c.complete:
                assert not hammock(q, c.end_vertex).complete
