from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pyramid_algebras.linalg import QQ, Echelon, Field, annihilator, field_from_name, nullspace, rank, rref

GF7 = Field(7)


def apply(F, columns, x):
    out = {}
    for j, c in x.items():
        for k, v in columns[j].items():
            out[k] = F.norm(out.get(k, 0) + c * v)
    return {k: v for k, v in out.items() if v}


def dense_rank(F, rows):
    """Plain Gaussian elimination on lists, as an independent oracle."""
    rows = [list(r) for r in rows]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if F.norm(rows[i][c]) != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        for i in range(len(rows)):
            if i != r and F.norm(rows[i][c]):
                f = rows[i][c] * inv
                rows[i] = [F.norm(a - f * b) for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


matrices = st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=5)


def to_vecs(F, rows):
    return [{k: F(v) for k, v in enumerate(r) if F(v) != 0} for r in rows]


@pytest.mark.parametrize("F", [QQ, GF7])
@given(rows=matrices)
def test_rank_matches_dense_elimination(F, rows):
    assert rank(F, to_vecs(F, rows)) == dense_rank(F, [[F(v) for v in r] for r in rows])


@pytest.mark.parametrize("F", [QQ, GF7])
@given(rows=matrices)
def test_nullspace_is_kernel_with_right_dimension(F, rows):
    cols = to_vecs(F, rows)
    ker = nullspace(F, cols)
    for x in ker:
        assert apply(F, cols, x) == {}
    assert len(ker) + rank(F, cols) == len(cols)


@pytest.mark.parametrize("F", [QQ, GF7])
@given(rows=matrices)
def test_annihilator_is_orthogonal_complement(F, rows):
    keys = [0, 1, 2, 3]
    vecs = to_vecs(F, rows)
    ann = annihilator(F, keys, vecs)
    for a in ann:
        for v in vecs:
            assert F.norm(sum(a.get(k, 0) * v.get(k, 0) for k in keys)) == 0
    assert len(ann) + rank(F, vecs) == len(keys)


def test_rref_rows_are_reduced():
    rows = rref(QQ, [{0: 2, 1: 4}, {0: 1, 2: 1}])
    assert rows == [{0: 1, 2: 1}, {1: 1, 2: Fraction(-1, 2)}]


def test_echelon_add_reports_dependency():
    E = Echelon(QQ)
    assert E.add({0: 1}, {"a": 1}) == (True, None)
    assert E.add({1: 1}, {"b": 1}) == (True, None)
    grew, dep = E.add({0: 2, 1: 3}, {"c": 1})
    assert not grew and dep == {"a": -2, "b": -3, "c": 1}


def test_field_arithmetic():
    assert QQ.inv(3) == Fraction(1, 3)
    assert GF7.inv(3) == 5
    assert GF7(Fraction(1, 2)) == 4
    assert QQ.to_json(Fraction(-3, 4)) == "-3/4"
    with pytest.raises(ZeroDivisionError):
        QQ.inv(0)
    with pytest.raises(ValueError):
        Field(6)


def test_field_names(monkeypatch):
    assert field_from_name("rational") is QQ
    assert field_from_name("gf:5") == Field(5)
    assert field_from_name("GF(11)") == Field(11)
    assert field_from_name("gf").p == 32003
    monkeypatch.setenv("PYRAMID_FIELD", "gf:13")
    assert field_from_name(None) == Field(13)
    with pytest.raises(ValueError):
        field_from_name("reals")
