"""Arithmetic in GF(2^m) and small dense matrices over it.

Field elements are plain ints in [0, 2^m); the modulus is an irreducible
binary polynomial given as a bitmask (bit i = coefficient of x^i).
Multiplication uses log/antilog tables up to TABLE_LIMIT bits and falls
back to carry-less shift-and-reduce beyond that. The shift-and-reduce
path is always available (`mul_direct`) so the two can be cross-checked.
"""

from __future__ import annotations

import itertools

# Primitive polynomials, one per degree. m=5,6,8 are load-bearing defaults
# (several code constructions pin them); the rest are the usual LFSR picks.
DEFAULT_MODULI = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100000000101011,
    15: 0b1000000000000011,
    16: 0b10000000000101101,
}


class ZeroInverseError(ZeroDivisionError):
    """Multiplicative inverse of zero requested."""


class SingularMatrixError(ValueError):
    """Matrix has no inverse / system has no unique solution."""


class DuplicatePointError(ValueError):
    """Vandermonde evaluation points must be pairwise distinct."""


def polymul_gf2(a: int, b: int) -> int:
    """Carry-less product of two binary polynomials."""
    res = 0
    while b:
        if b & 1:
            res ^= a
        a <<= 1
        b >>= 1
    return res


def polymod_gf2(a: int, mod: int) -> int:
    """Remainder of binary polynomial a modulo mod."""
    dm = mod.bit_length() - 1
    while a.bit_length() - 1 >= dm:
        a ^= mod << (a.bit_length() - 1 - dm)
    return a


def is_irreducible(modulus: int, m: int) -> bool:
    """Trial division by every polynomial of degree 1..m//2."""
    if modulus.bit_length() - 1 != m:
        return False
    if m == 1:
        return True
    for deg in range(1, m // 2 + 1):
        for p in range(1 << deg, 1 << (deg + 1)):
            if polymod_gf2(modulus, p) == 0:
                return False
    return True


class Field:
    """GF(2^m) with a fixed irreducible modulus.

    The generator is the smallest element of multiplicative order 2^m - 1;
    it is found by exhaustive order checks against the prime factors of
    the group order, so it does not depend on the modulus being primitive.
    """

    TABLE_LIMIT = 12

    def __init__(self, m: int, modulus: int | None = None):
        if not 1 <= m <= 16:
            raise ValueError(f"field degree m={m} out of supported range 1..16")
        if modulus is None:
            modulus = DEFAULT_MODULI[m]
        if modulus.bit_length() - 1 != m:
            raise ValueError(f"modulus {modulus:#x} does not have degree exactly {m}")
        if not is_irreducible(modulus, m):
            raise ValueError(f"modulus {modulus:#x} is reducible")
        self.m = m
        self.modulus = modulus
        self.size = 1 << m
        self.order = self.size - 1  # multiplicative group order
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self.generator = self._find_generator()
        if m <= self.TABLE_LIMIT:
            self._build_tables()

    # -- scalar ops ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return a ^ b

    sub = add  # characteristic 2

    def neg(self, a: int) -> int:
        return a

    def mul_direct(self, a: int, b: int) -> int:
        """Shift-and-reduce product; reference path, table-free."""
        return polymod_gf2(polymul_gf2(a, b), self.modulus)

    def mul(self, a: int, b: int) -> int:
        if self._exp is None:
            return self.mul_direct(a, b)
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroInverseError("0 has no multiplicative inverse")
        if self._exp is not None:
            return self._exp[self.order - self._log[a]]
        return self.pow(a, self.order - 1)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        x, k = a, 1
        while x != 1:
            x = self.mul(x, a)
            k += 1
        return k

    def elements(self) -> range:
        return range(self.size)

    # -- internals ----------------------------------------------------

    def _find_generator(self) -> int:
        # g is a generator iff g^(order/p) != 1 for every prime p | order
        ps = _prime_factors(self.order)
        for g in range(1, self.size):
            if all(self.pow(g, self.order // p) != 1 for p in ps):
                return g
        raise AssertionError("no generator found; field construction is broken")

    def _build_tables(self) -> None:
        exp = [0] * (2 * self.order)
        log = [0] * self.size
        x = 1
        for i in range(self.order):
            exp[i] = x
            log[x] = i
            x = self.mul_direct(x, self.generator)
        for i in range(self.order, 2 * self.order):
            exp[i] = exp[i - self.order]
        self._exp, self._log = exp, log

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.m, self.modulus) == (other.m, other.modulus)

    def __hash__(self) -> int:
        return hash((self.m, self.modulus))

    def __repr__(self) -> str:
        return f"Field(m={self.m}, modulus={self.modulus:#x})"


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


class Matrix:
    """Dense matrix over a Field; data is a list of row lists of ints."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data: list[list[int]]):
        self.field = field
        self.rows = len(data)
        self.cols = len(data[0]) if data else 0
        if any(len(r) != self.cols for r in data):
            raise ValueError("ragged rows")
        self.data = [list(r) for r in data]

    @classmethod
    def zero(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, [[0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def copy(self) -> "Matrix":
        return Matrix(self.field, self.data)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [list(col) for col in zip(*self.data)])

    def submatrix(self, rows, cols) -> "Matrix":
        return Matrix(self.field, [[self.data[i][j] for j in cols] for i in rows])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.data == other.data
        )

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols} over GF(2^{self.field.m}))"


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch {a.rows}x{a.cols} @ {b.rows}x{b.cols}")
    f = a.field
    mul = f.mul
    out = [[0] * b.cols for _ in range(a.rows)]
    for i in range(a.rows):
        ai, oi = a.data[i], out[i]
        for t in range(a.cols):
            ait = ai[t]
            if ait == 0:
                continue
            bt = b.data[t]
            for j in range(b.cols):
                if bt[j]:
                    oi[j] ^= mul(ait, bt[j])
    return Matrix(f, out)


def mat_vec(a: Matrix, v: list[int]) -> list[int]:
    if a.cols != len(v):
        raise ValueError("shape mismatch")
    mul = a.field.mul
    out = []
    for row in a.data:
        acc = 0
        for c, x in zip(row, v):
            if c and x:
                acc ^= mul(c, x)
        out.append(acc)
    return out


def vec_mat(v: list[int], a: Matrix) -> list[int]:
    if a.rows != len(v):
        raise ValueError("shape mismatch")
    mul = a.field.mul
    out = [0] * a.cols
    for x, row in zip(v, a.data):
        if x == 0:
            continue
        for j in range(a.cols):
            if row[j]:
                out[j] ^= mul(x, row[j])
    return out


def dot(field: Field, u: list[int], v: list[int]) -> int:
    mul = field.mul
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc ^= mul(a, b)
    return acc


def _eliminate(field: Field, aug: list[list[int]], n: int):
    """In-place Gauss-Jordan on n pivot columns; pivot = first nonzero.

    Returns the list of pivot values (length n) or raises SingularMatrixError.
    Row swaps do not change determinants in characteristic 2.
    """
    mul, inv = field.mul, field.inv
    pivots = []
    for col in range(n):
        piv = None
        for r in range(col, n):
            if aug[r][col]:
                piv = r
                break
        if piv is None:
            raise SingularMatrixError(f"no pivot in column {col}")
        if piv != col:
            aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        pivots.append(pv)
        pinv = inv(pv)
        row = aug[col]
        for j in range(col, len(row)):
            row[j] = mul(row[j], pinv)
        for r in range(n):
            if r == col:
                continue
            f = aug[r][col]
            if f == 0:
                continue
            rr = aug[r]
            for j in range(col, len(row)):
                if row[j]:
                    rr[j] ^= mul(f, row[j])
    return pivots


def mat_solve(a: Matrix, b: list[int]) -> list[int]:
    """Solve A x = b for square A; raises SingularMatrixError."""
    if a.rows != a.cols or a.rows != len(b):
        raise ValueError("mat_solve needs a square system")
    aug = [row + [bv] for row, bv in zip(a.data, b)]
    _eliminate(a.field, aug, a.rows)
    return [row[-1] for row in aug]


def mat_inv(a: Matrix) -> Matrix:
    if a.rows != a.cols:
        raise ValueError("only square matrices invert")
    n = a.rows
    aug = [row + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a.data)]
    _eliminate(a.field, aug, n)
    return Matrix(a.field, [row[n:] for row in aug])


def mat_det(a: Matrix) -> int:
    if a.rows != a.cols:
        raise ValueError("determinant of a non-square matrix")
    f = a.field
    mul, inv = f.mul, f.inv
    m = [row[:] for row in a.data]
    n = a.rows
    det = 1
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]  # sign flip is a no-op in char 2
        pv = m[col][col]
        det = mul(det, pv)
        pinv = inv(pv)
        row = m[col]
        for r in range(col + 1, n):
            fct = m[r][col]
            if fct == 0:
                continue
            fct = mul(fct, pinv)
            rr = m[r]
            for j in range(col, n):
                if row[j]:
                    rr[j] ^= mul(fct, row[j])
    return det


def mat_rank(a: Matrix) -> int:
    f = a.field
    mul, inv = f.mul, f.inv
    m = [row[:] for row in a.data]
    rank = 0
    for col in range(a.cols):
        piv = None
        for r in range(rank, a.rows):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pinv = inv(m[rank][col])
        row = m[rank]
        for r in range(rank + 1, a.rows):
            fct = m[r][col]
            if fct == 0:
                continue
            fct = mul(fct, pinv)
            rr = m[r]
            for j in range(col, a.cols):
                if row[j]:
                    rr[j] ^= mul(fct, row[j])
        rank += 1
        if rank == a.rows:
            break
    return rank


def vandermonde(field: Field, points: list[int], cols: int) -> Matrix:
    """Rows [1, x, x^2, ..., x^(cols-1)] for each evaluation point."""
    if len(set(points)) != len(points):
        raise DuplicatePointError("repeated evaluation point")
    mul = field.mul
    data = []
    for x in points:
        row = [1]
        for _ in range(cols - 1):
            row.append(mul(row[-1], x))
        data.append(row)
    return Matrix(field, data)


def cauchy(field: Field, xs: list[int], ys: list[int]) -> Matrix:
    if set(xs) & set(ys):
        raise DuplicatePointError("Cauchy point sets must be disjoint")
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
        raise DuplicatePointError("repeated evaluation point")
    inv = field.inv
    return Matrix(field, [[inv(x ^ y) for y in ys] for x in xs])


def all_square_submatrices_invertible(a: Matrix) -> bool:
    """Every square submatrix (all sizes, all row/col subsets) is invertible."""
    for s in range(1, min(a.rows, a.cols) + 1):
        for rs in itertools.combinations(range(a.rows), s):
            for cs in itertools.combinations(range(a.cols), s):
                if mat_det(a.submatrix(rs, cs)) == 0:
                    return False
    return True
