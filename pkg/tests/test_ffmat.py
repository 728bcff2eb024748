from __future__ import annotations

import random

import pytest

from ssrank.ffmat import GF2, Matrix, PrimeField, Subspace, solve_linear_system

# F and V of the 2-dimensional supersingular block over F_2: x -> y, y -> 0.
I11_OP = Matrix.build(GF2, [[0, 0], [1, 0]])


def random_matrix(rng, field, nrows, ncols):
    return Matrix.build(field, [[rng.randrange(field.p) for _ in range(ncols)]
                                for _ in range(nrows)])


def test_prime_field_rejects_composites_and_large_primes():
    for bad in (0, 1, 4, 6, 91, 98, 101):
        with pytest.raises(ValueError):
            PrimeField(bad)
    assert PrimeField(97).p == 97


def test_field_arithmetic():
    f5 = PrimeField(5)
    assert f5.reduce(-1) == 4
    assert f5.neg(2) == 3
    assert f5.inv(3) == 2
    with pytest.raises(ZeroDivisionError):
        f5.inv(0)


def test_rank_examples(gf3):
    assert Matrix.zeros(GF2, 2, 2).rank() == 0
    assert Matrix.identity(gf3, 3).rank() == 3
    assert I11_OP.rank() == 1


def test_kernel_image_examples():
    assert Matrix.identity(GF2, 3).kernel() == Subspace.zero(GF2, 3)
    assert Matrix.zeros(GF2, 4, 4).image() == Subspace.zero(GF2, 4)
    # the exchange axiom instance on the supersingular block: ker F = im V
    assert I11_OP.kernel() == I11_OP.image()
    assert I11_OP.kernel() == Subspace.span(GF2, 2, [[0, 1]])


def test_preimage_examples():
    m = I11_OP
    assert m.preimage(Subspace.full(GF2, 2)) == Subspace.full(GF2, 2)
    s = Subspace.span(GF2, 2, [[1, 1]])
    assert Matrix.identity(GF2, 2).preimage(s) == s
    assert m.preimage(Subspace.zero(GF2, 2)) == Subspace.span(GF2, 2, [[0, 1]])


def test_preimage_dimension_mismatch():
    with pytest.raises(ValueError):
        I11_OP.preimage(Subspace.zero(GF2, 3))


def test_lattice_examples():
    s = Subspace.span(GF2, 3, [[1, 0, 1]])
    assert s.sum_with(Subspace.zero(GF2, 3)) == s
    assert s.intersect(Subspace.full(GF2, 3)) == s
    line = I11_OP.kernel().intersect(I11_OP.kernel())
    assert line.dim == 1 and line == Subspace.span(GF2, 2, [[0, 1]])
    with pytest.raises(ValueError):
        s.sum_with(Subspace.zero(GF2, 4))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_lattice_dimension_formula_randomized(p):
    rng = random.Random(700 + p)
    field = PrimeField(p)
    for _ in range(40):
        n = rng.randrange(1, 7)
        a = Subspace.span(field, n, [[rng.randrange(p) for _ in range(n)]
                                     for _ in range(rng.randrange(4))])
        b = Subspace.span(field, n, [[rng.randrange(p) for _ in range(n)]
                                     for _ in range(rng.randrange(4))])
        total = a.sum_with(b)
        meet = a.intersect(b)
        assert a.dim + b.dim == total.dim + meet.dim
        assert total.contains(a) and total.contains(b)
        assert a.contains(meet) and b.contains(meet)


@pytest.mark.parametrize("p", [2, 3, 7])
def test_rank_nullity_and_preimage_randomized(p):
    rng = random.Random(41 + p)
    field = PrimeField(p)
    for _ in range(40):
        nrows, ncols = rng.randrange(1, 6), rng.randrange(1, 6)
        m = random_matrix(rng, field, nrows, ncols)
        assert m.kernel().dim + m.rank() == ncols
        assert m.preimage(m.image()) == Subspace.full(field, ncols)
        s = Subspace.span(field, nrows, [[rng.randrange(p) for _ in range(nrows)]])
        pre = m.preimage(s)
        assert pre.contains(m.kernel())
        assert s.contains(m.map_subspace(pre))


def test_echelon_form_is_canonical():
    a = Subspace.span(GF2, 3, [[1, 1, 0], [0, 1, 1]])
    b = Subspace.span(GF2, 3, [[1, 0, 1], [0, 1, 1], [1, 1, 0]])
    assert a == b and hash(a) == hash(b)
    with pytest.raises(ValueError):
        Subspace(GF2, 3, ((1, 1, 0), (0, 1, 1), (1, 0, 1)))  # not RREF


def test_solve_linear_system():
    assert solve_linear_system(GF2, 4, []) == Subspace.full(GF2, 4)
    rows = [[1, 0], [0, 1]]
    assert solve_linear_system(GF2, 2, rows) == Subspace.zero(GF2, 2)


def test_solve_linear_system_polarization_family():
    # Compatibility for the supersingular block: brute-force all 2x2 matrices
    # over F_2, keep the antisymmetric zero-diagonal ones with F^T G = G V.
    f = v = I11_OP
    family = []
    for bits in range(16):
        g = Matrix.build(GF2, [[(bits >> 0) & 1, (bits >> 1) & 1],
                               [(bits >> 2) & 1, (bits >> 3) & 1]])
        if g.transpose() != g.neg():
            continue
        if any(g.entries[i][i] for i in range(2)):
            continue
        if f.transpose() @ g != g @ v:
            continue
        family.append(g)
    assert len(family) == 2  # zero and the hyperbolic plane: a 1-dimensional family
    # same family through the solver: one unknown u = G_01, and every entry of
    # F^T G - G V vanishes identically in u, so all four constraint rows are 0
    sol = solve_linear_system(GF2, 1, [[0], [0], [0], [0]])
    assert sol.dim == 1


@pytest.mark.parametrize("p", [2, 3, 5])
def test_matmul_apply_power_inverse(p):
    rng = random.Random(90 + p)
    field = PrimeField(p)
    for _ in range(25):
        n = rng.randrange(1, 6)
        a = random_matrix(rng, field, n, n)
        b = random_matrix(rng, field, n, n)
        vec = [rng.randrange(p) for _ in range(n)]
        assert (a @ b).apply(vec) == a.apply(b.apply(vec))
        assert a.power(3) == a @ a @ a
        assert a.power(0) == Matrix.identity(field, n)
    m = Matrix.build(field, [[1, 1], [0, 1]])
    assert m @ m.inverse() == Matrix.identity(field, 2)
    with pytest.raises(ValueError):
        Matrix.zeros(field, 2, 2).inverse()


def test_matrix_validation():
    with pytest.raises(ValueError):
        Matrix(GF2, 1, 1, ((2,),))  # not reduced
    with pytest.raises(ValueError):
        Matrix(GF2, 2, 1, ((0,),))  # wrong row count
    with pytest.raises(ValueError):
        Matrix.identity(GF2, 2) @ Matrix.identity(PrimeField(3), 2)


def test_zero_dimensional_edges():
    empty = Matrix.zeros(GF2, 0, 0)
    assert empty.rank() == 0
    assert empty.kernel() == Subspace.zero(GF2, 0)
    assert empty.image() == Subspace.zero(GF2, 0)
    assert Subspace.full(GF2, 0) == Subspace.zero(GF2, 0)
