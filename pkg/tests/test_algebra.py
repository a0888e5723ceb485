import itertools
from math import comb

import pytest
from hypothesis import given, strategies as st

from conftest import pyramid, stable, stable_dual
from pyramid_algebras.algebra import (ANTICOMMUTATIVE, COMMUTATIVE, AlgebraError, BoundAlgebra, CoefficientScheme,
                                      Element, FullBoundError, Relation, SchemeError, build_algebra, cover_algebra,
                                      opposite, quadratic_dual, relation_set, restrict, stable_extension)
from pyramid_algebras.linalg import Field
from pyramid_algebras.quiver import admissible_cube, generate_quiver, shift, vmap

small = st.sampled_from([(1, 3), (1, 4), (2, 3), (2, 4), (3, 3)])


def test_chain_relations_are_all_squares():
    A = pyramid(1, 4)
    assert {(r.source, r.target, r.terms) for r in A.relations} == {
        ((i,), (i + 2,), (((1, 1), 1),)) for i in (1, 2)}


def test_anticommutative_squares_n2():
    A = pyramid(2, 3)
    mixed = [r for r in A.relations if len(r.terms) == 2]
    assert mixed == [Relation((2, 1), (2, 2), (((1, 2), -1), ((2, 1), -1)))]


@pytest.mark.parametrize("m", [3, 4, 5])
def test_mixed_relations_count_unit_squares(m):
    q = generate_quiver(2, m)
    squares = [i for i in q.vertices
               if shift(i, 1) in q and shift(i, 2) in q and shift(shift(i, 1), 2) in q]
    A = pyramid(2, m) if m < 5 else build_algebra(q)
    assert len([r for r in A.relations if len(r.terms) == 2]) == len(squares)


def test_chain_dimensions():
    A = pyramid(1, 4)
    for i in (1, 2, 3):
        assert A.graded_dim((i,), (i + 1,), 1) == 1
    for i in (1, 2):
        assert A.graded_dim((i,), (i + 2,), 2) == 0


def test_stable_chain_loops():
    S = stable(1, 4)
    for i in (2, 3):
        comp = S.component((i,), (i,), 2)
        assert len(comp.raw_paths) == 2 and comp.relation_rank == 1 and comp.dim == 1


@given(small)
def test_degree_zero_is_idempotents(p):
    A = stable(*p)
    for i in A.vertices:
        for j in A.vertices:
            assert A.graded_dim(i, j, 0) == (i == j)


@given(small)
def test_top_degrees(p):
    n, m = p
    assert pyramid(n, m).top_degree() == n
    assert stable(n, m).top_degree() == n + 1


def test_units_and_squares():
    S = stable(2, 4)
    x = S.path((1, 2), (1, 2))
    assert S.multiply(S.idempotent(x.target), x).coeffs == x.coeffs
    assert S.multiply(x, S.idempotent((1, 2))).coeffs == x.coeffs
    for i in S.vertices:
        for t, _ in S.skeleton.out_arrows(i):
            if S.skeleton.walk(i, (t, t)) is not None:
                assert S.normal_form(i, (t, t)) == {}


def test_anticommuting_residues():
    A = pyramid(2, 4)
    for i in A.vertices:
        if A.skeleton.walk(i, (1, 2)) and A.skeleton.walk(i, (2, 1)):
            a, b = A.normal_form(i, (1, 2)), A.normal_form(i, (2, 1))
            assert a and {k: -v for k, v in b.items()} == a
    C = build_algebra(generate_quiver(2, 4), COMMUTATIVE)
    assert C.normal_form((2, 1), (1, 2)) == C.normal_form((2, 1), (2, 1))


@given(small, st.data())
def test_multiplication_is_associative(p, data):
    S = stable(*p)
    i = data.draw(st.sampled_from(S.vertices))

    def walk(v):
        k = data.draw(st.lists(st.sampled_from(S.skeleton.kinds), max_size=2))
        end = S.skeleton.walk(v, k)
        return None if end is None else S.path(v, tuple(k))

    z = walk(i)
    y = z and walk(z.target)
    x = y and walk(y.target)
    if x is None:
        return
    assert S.multiply(S.multiply(x, y), z).coeffs == S.multiply(x, S.multiply(y, z)).coeffs


def test_layers_examples():
    S = stable(1, 4)
    assert S.radical_layers((2,)) == [[((2,), 1)], [((1,), 1), ((3,), 1)], [((2,), 1)]]
    assert S.loewy_length((2,)) == 3
    A = pyramid(1, 4)
    assert A.radical_layers((1,)) == [[((1,), 1)], [((2,), 1)]]
    assert A.loewy_length((1,)) == 2


@given(small)
def test_layer_sizes_bounded_by_binomials(p):
    n, m = p
    S = stable(n, m)
    for i in S.vertices:
        for t, layer in enumerate(S.radical_layers(i)):
            assert sum(c for _, c in layer) <= comb(n + 1, t)
            assert all(c == 1 for _, c in layer)


@given(small)
def test_stable_layers_follow_unit_cube(p):
    n, m = p
    S = stable(n, m)
    for i in S.vertices:
        want = [sorted((vmap(i, a), 1) for a in admissible_cube(i, m, t)) for t in range(n + 2)]
        assert S.radical_layers(i) == want
        assert S.socle_layers(i) == want[::-1]


def test_projective_injectives():
    A = pyramid(1, 4)
    assert [A.is_projective_injective((i,)) for i in (1, 2, 3, 4)] == [True, True, True, False]
    S = stable(2, 3)
    assert all(S.is_projective_injective(i) for i in S.vertices)


def test_chain_dual_is_hereditary():
    D = quadratic_dual(pyramid(1, 4))
    assert D.relations == ()
    assert D.graded_dim((1,), (4,), 3) == 1


@given(small)
def test_double_dual(p):
    S = stable(*p)
    DD = quadratic_dual(quadratic_dual(S))
    assert DD.dims_table() == S.dims_table()
    assert relation_set(DD) == relation_set(S)


@given(small)
def test_opposite_is_involution(p):
    S = stable(*p)
    O = opposite(S)
    assert opposite(O).skeleton.same_shape(S.skeleton)
    assert relation_set(opposite(O)) == relation_set(S)
    assert sorted((j, i, l, d) for i, j, l, d in O.dims_table()) == sorted(S.dims_table())


def test_dual_of_stable_has_longer_chains():
    D = stable_dual(1, 4)
    assert D.top_degree() == 3


def test_restrict_full_bound_violation():
    A = pyramid(2, 3)
    with pytest.raises(FullBoundError) as e:
        restrict(A, [(2, 1), (3, 1), (2, 2)])
    assert e.value.term == (2, 1)
    B = restrict(A, [(2, 1), (3, 1), (1, 2), (2, 2)])
    assert len(B.relations) == 1 and B.graded_dim((2, 1), (2, 2), 2) == 1


def test_zero_coefficient_is_rejected():
    with pytest.raises(SchemeError):
        build_algebra(generate_quiver(2, 3), CoefficientScheme("custom", lambda s, t, i: 0))
    with pytest.raises(SchemeError):
        CoefficientScheme("custom")
    with pytest.raises(SchemeError):
        CoefficientScheme("braided")


@given(st.sampled_from([(2, 3), (2, 4), (3, 3)]), st.lists(st.sampled_from([-2, -1, 1, 3]), min_size=64, max_size=64))
def test_pyramid_dimensions_do_not_depend_on_coefficients(p, coeffs):
    n, m = p
    q = generate_quiver(n, m)
    index = {v: k for k, v in enumerate(q.vertices)}
    scheme = CoefficientScheme("custom", lambda s, t, i: coeffs[(index[i] * 7 + s * 3 + t) % 64])
    assert build_algebra(q, scheme).dims_table() == pyramid(n, m).dims_table()


@given(st.sampled_from([(2, 3), (2, 4), (3, 3)]), st.dictionaries(st.tuples(st.integers(1, 4), st.integers(1, 4)),
                                                                   st.sampled_from([-2, -1, 1, 3])))
def test_stable_dimensions_do_not_depend_on_type_coefficients(p, table):
    n, m = p
    scheme = CoefficientScheme("custom", lambda s, t, i: table.get((s, t), -1))
    S = stable_extension(build_algebra(generate_quiver(n, m), scheme))
    assert S.dims_table() == stable(n, m).dims_table()


def test_vertex_dependent_twist_can_kill_the_socle():
    # changing one mixed coefficient at (2,1) breaks the trivial extension at n=2, m=4
    scheme = CoefficientScheme("custom", lambda s, t, i: 2 if (i == (2, 1) and s == 2) else -1)
    S = stable_extension(build_algebra(generate_quiver(2, 4), scheme))
    assert pyramid(2, 4).dims_table() == build_algebra(generate_quiver(2, 4), scheme).dims_table()
    assert S.graded_dim((2, 2), (2, 2), 3) == 0
    assert stable(2, 4).graded_dim((2, 2), (2, 2), 3) == 1


def test_finite_field_dimensions():
    F = Field(5)
    S = stable_extension(build_algebra(generate_quiver(2, 4), ANTICOMMUTATIVE, F))
    assert S.dims_table() == stable(2, 4).dims_table()


def test_cover_relations_lift_levelwise():
    S = stable(1, 3)
    C = cover_algebra(S, 0, 2)
    assert len(C.vertices) == 9
    # each relation with r type-2 arrows lifts to 3 - r levels
    want = sum(3 - r.terms[0][0].count(2) for r in S.relations)
    assert len(C.relations) == want
    assert C.graded_dim((2, 0), (2, 1), 2) == 1


def test_relation_validation():
    q = generate_quiver(1, 4)
    with pytest.raises(AlgebraError):
        BoundAlgebra(q, [Relation((1,), (4,), (((1, 1), 1),))])
    with pytest.raises(AlgebraError):
        BoundAlgebra(q, [Relation((1,), (4,), (((1, 1, 1), 1),))])


def test_relations_text():
    txt = pyramid(2, 3).relations_text().splitlines()
    assert "-g[2]@3,1 . g[1]@2,1 - g[1]@1,2 . g[2]@2,1" in txt
    assert "g[1]@2,1 . g[1]@1,1" in txt


def test_normal_form_rejects_missing_path():
    with pytest.raises(AlgebraError):
        pyramid(1, 4).normal_form((4,), (1,))
