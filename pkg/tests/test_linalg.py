from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from qcoxeter import linalg

small_ints = st.integers(min_value=-6, max_value=6)


def matrices(rows, cols):
    return st.lists(st.lists(small_ints, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_inverse_and_determinant_of_cartan_g2():
    a = [[2, -3], [-1, 2]]
    assert linalg.determinant(a) == 1
    assert linalg.integer_inverse(a) == ((2, 3), (1, 2))


def test_inverse_rejects_singular():
    try:
        linalg.inverse([[1, 2], [2, 4]])
    except ValueError:
        return
    raise AssertionError("singular matrix was inverted")


@given(matrices(3, 3))
def test_determinant_matches_sympy(m):
    assert linalg.determinant(m) == sympy.Matrix(m).det()


@given(matrices(3, 2))
def test_hermite_form_spans_same_lattice(rows):
    h = linalg.hermite_normal_form(rows)
    # same row lattice: each side expresses the other with integer coefficients
    if not h:
        assert all(x == 0 for r in rows for x in r)
        return
    hm = sympy.Matrix(h)
    for r in rows:
        sol = hm.T.pinv() * sympy.Matrix(r) if hm.rows == hm.cols else None
        if sol is not None:
            assert all(x.is_integer for x in sol)
    assert sympy.Matrix(rows).rank() == len(h)
    # echelon: leading entries positive and strictly moving right
    leads = [next(j for j, x in enumerate(r) if x) for r in h]
    assert leads == sorted(set(leads))
    assert all(h[i][leads[i]] > 0 for i in range(len(h)))


@given(matrices(3, 3))
def test_smith_form_matches_sympy_invariants(m):
    d, u, v = linalg.smith_normal_form(m)
    prod = linalg.mat_mul(linalg.mat_mul(u, m), v)
    assert prod == d
    assert abs(linalg.determinant(u)) == 1 and abs(linalg.determinant(v)) == 1
    diag = [d[i][i] for i in range(3)]
    assert all(d[i][j] == 0 for i in range(3) for j in range(3) if i != j)
    for a, b in zip(diag, diag[1:]):
        assert b == 0 or (a != 0 and b % a == 0)
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf
    expected = sympy_snf(sympy.Matrix(m), domain=sympy.ZZ)
    assert sorted(abs(x) for x in diag) == sorted(abs(int(expected[i, i])) for i in range(3))


@given(st.lists(st.dictionaries(st.integers(0, 5), st.integers(-4, 4), max_size=4), max_size=6))
def test_nullspace_matches_sympy(rows):
    ncols = 6
    basis = linalg.nullspace(rows, ncols)
    dense = sympy.Matrix([[r.get(j, 0) for j in range(ncols)] for r in rows]) if rows \
        else sympy.zeros(0, ncols)
    expected_dim = ncols - (dense.rank() if rows else 0)
    assert len(basis) == expected_dim
    for vec in basis:
        for r in rows:
            assert sum(Fraction(c) * vec[j] for j, c in r.items()) == 0
    if basis:
        assert sympy.Matrix(basis).rank() == len(basis)


def test_nullspace_doc_example():
    assert linalg.nullspace([{0: 1, 1: -1}], 2) == [[Fraction(1), Fraction(1)]]
