"""Field and matrix layer: frozen arithmetic values, axioms, dual multiply paths."""

import random

import pytest

from regenrepair.gf import (
    DEFAULT_MODULI,
    DuplicatePointError,
    Field,
    Matrix,
    SingularMatrixError,
    ZeroInverseError,
    all_square_submatrices_invertible,
    cauchy,
    is_irreducible,
    mat_det,
    mat_inv,
    mat_mul,
    mat_solve,
    mat_vec,
    vandermonde,
)


# --- independent oracle: bitwise polynomial multiply written from scratch ---

def ref_mul(a: int, b: int, m: int, modulus: int) -> int:
    acc = 0
    for i in range(m):
        if (b >> i) & 1:
            acc ^= a << i
    for deg in range(2 * m - 2, m - 1, -1):
        if (acc >> deg) & 1:
            acc ^= modulus << (deg - m)
    return acc


def random_field_elems(field, count, seed):
    rng = random.Random(seed)
    return [rng.randrange(field.size) for _ in range(count)]


def test_frozen_gf8_products_and_inverses():
    f = Field(3, 0b1011)
    assert f.mul(3, 5) == 4
    assert f.mul(2, 5) == 1
    assert f.inv(2) == 5
    assert f.inv(4) == 7


def test_default_moduli_pinned():
    assert DEFAULT_MODULI[5] == 0b100101
    assert DEFAULT_MODULI[6] == 0b1000011
    assert DEFAULT_MODULI[8] == 0b100011101
    for m, mod in DEFAULT_MODULI.items():
        assert is_irreducible(mod, m)


def test_reducible_modulus_rejected():
    # x^4 + x^2 + 1 = (x^2 + x + 1)^2
    with pytest.raises(ValueError):
        Field(4, 0b10101)
    with pytest.raises(ValueError):
        Field(4, 0b1011)  # degree 3, not 4
    with pytest.raises(ValueError):
        Field(0)
    with pytest.raises(ValueError):
        Field(17)


@pytest.mark.parametrize("m", [3, 5, 8, 13])
def test_mul_matches_reference_oracle(m):
    f = Field(m)
    rng = random.Random(870 + m)
    for _ in range(400):
        a, b = rng.randrange(f.size), rng.randrange(f.size)
        want = ref_mul(a, b, m, f.modulus)
        assert f.mul(a, b) == want
        assert f.mul_direct(a, b) == want


@pytest.mark.parametrize("m", [2, 5, 8, 13])
def test_field_axioms_random_triples(m):
    f = Field(m)
    rng = random.Random(99 + m)
    for _ in range(300):
        a, b, c = (rng.randrange(f.size) for _ in range(3))
        assert f.mul(a, b) == f.mul(b, a)
        assert f.add(a, b) == f.add(b, a)
        assert f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c)
        assert f.add(a, f.add(b, c)) == f.add(f.add(a, b), c)
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        assert f.mul(a, 1) == a and f.add(a, 0) == a
        assert f.add(a, a) == 0  # characteristic 2
        if a:
            assert f.mul(a, f.inv(a)) == 1


def test_generator_is_smallest_with_full_order():
    for m in (3, 4, 5, 6, 8):
        f = Field(m)
        g = f.generator
        assert f.element_order(g) == f.order
        for cand in range(1, g):
            assert f.element_order(cand) != f.order if cand else True


def test_pow_and_div():
    f = Field(8)
    rng = random.Random(17)
    for _ in range(100):
        a = rng.randrange(1, f.size)
        assert f.pow(a, f.order) == 1  # Lagrange
        assert f.pow(a, -1) == f.inv(a)
        assert f.div(f.mul(a, 7), 7) == a
    assert f.pow(0, 0) == 1
    with pytest.raises(ZeroInverseError):
        f.inv(0)
    with pytest.raises(ZeroInverseError):
        f.div(3, 0)


def test_direct_path_field_beyond_table_limit():
    f = Field(13)
    assert f._exp is None
    a = f.generator
    assert f.mul(a, f.inv(a)) == 1
    assert f.pow(a, f.order) == 1


def test_matrix_inverse_round_trip_random():
    f = Field(8)
    rng = random.Random(4242)
    done = 0
    while done < 60:
        n = rng.randrange(1, 7)
        m = Matrix(f, [[rng.randrange(f.size) for _ in range(n)] for _ in range(n)])
        if mat_det(m) == 0:
            continue
        assert mat_mul(m, mat_inv(m)) == Matrix.identity(f, n)
        assert mat_mul(mat_inv(m), m) == Matrix.identity(f, n)
        done += 1


def test_det_multiplicative_and_singular():
    f = Field(5)
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randrange(1, 6)
        a = Matrix(f, [[rng.randrange(f.size) for _ in range(n)] for _ in range(n)])
        b = Matrix(f, [[rng.randrange(f.size) for _ in range(n)] for _ in range(n)])
        assert mat_det(mat_mul(a, b)) == f.mul(mat_det(a), mat_det(b))
    sing = Matrix(f, [[1, 2], [1, 2]])
    assert mat_det(sing) == 0
    with pytest.raises(SingularMatrixError):
        mat_inv(sing)
    with pytest.raises(SingularMatrixError):
        mat_solve(sing, [1, 0])


def test_solve_matches_multiply():
    f = Field(6)
    rng = random.Random(31)
    done = 0
    while done < 50:
        n = rng.randrange(1, 8)
        a = Matrix(f, [[rng.randrange(f.size) for _ in range(n)] for _ in range(n)])
        if mat_det(a) == 0:
            continue
        x = [rng.randrange(f.size) for _ in range(n)]
        b = mat_vec(a, x)
        assert mat_solve(a, b) == x
        done += 1


def test_vandermonde_structure_and_duplicates():
    f = Field(4)
    v = vandermonde(f, [0, 1, 2, 5], 4)
    assert v.data[0] == [1, 0, 0, 0]
    assert v.data[2] == [1, 2, f.mul(2, 2), f.mul(f.mul(2, 2), 2)]
    assert mat_det(v) != 0  # distinct points
    with pytest.raises(DuplicatePointError):
        vandermonde(f, [1, 2, 1], 3)


def test_any_square_vandermonde_subset_invertible():
    f = Field(6)
    pts = [f.pow(f.generator, i) for i in range(9)]
    v = vandermonde(f, pts, 5)
    rng = random.Random(5)
    for _ in range(40):
        rows = sorted(rng.sample(range(9), 5))
        assert mat_det(v.submatrix(rows, range(5))) != 0


def test_cauchy_all_submatrices_invertible():
    f = Field(4)
    c = cauchy(f, [1, 2], [3, 4])
    assert all_square_submatrices_invertible(c)
    c3 = cauchy(f, [1, 2, 3], [4, 5, 6])
    assert all_square_submatrices_invertible(c3)


def test_all_submatrix_check_catches_zero_entry():
    f = Field(4)
    # invertible overall but contains a zero entry => 1x1 submatrix fails
    m = Matrix(f, [[0, 1], [1, 0]])
    assert mat_det(m) != 0
    assert not all_square_submatrices_invertible(m)
