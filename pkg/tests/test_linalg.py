from genuschange.ffield import FiniteField
from genuschange.basefield import RationalField
from genuschange.linalg import LinearSolver, solve_linear, kernel_basis, matrix_rank

K = RationalField(FiniteField(5), ("t",))
t = K.gen(0)


def M(rows):
    return [[K.from_int(x) if isinstance(x, int) else x for x in r] for r in rows]


def test_solve_square():
    rows = M([[1, 2], [3, 4]])
    rhs = [K.from_int(5), K.from_int(6)]
    x = solve_linear(K, rows, rhs)
    assert x is not None
    for r, b in zip(rows, rhs):
        acc = K.zero()
        for a, v in zip(r, x):
            acc = acc + a * v
        assert acc == b


def test_solve_inconsistent():
    rows = M([[1, 2], [2, 4]])
    rhs = [K.from_int(1), K.from_int(3)]
    assert solve_linear(K, rows, rhs) is None


def test_solver_reuse():
    slv = LinearSolver(K, M([[1, 1], [0, 1]]))
    for b0, b1 in [(1, 2), (3, 0), (4, 4)]:
        x = slv.solve([K.from_int(b0), K.from_int(b1)])
        assert x[0] + x[1] == K.from_int(b0)
        assert x[1] == K.from_int(b1)


def test_rational_entries():
    rows = [[t, K.one()], [K.one(), t]]
    rhs = [t * t + 1, t + t]
    x = solve_linear(K, rows, rhs)
    assert x == [t, K.one()]


def test_kernel():
    rows = M([[1, 2, 3], [2, 4, 6]])
    ker = kernel_basis(K, rows)
    assert len(ker) == 2
    for v in ker:
        for r in rows:
            acc = K.zero()
            for a, b in zip(r, v):
                acc = acc + a * b
            assert acc.is_zero()


def test_rank():
    assert matrix_rank(K, M([[1, 2], [2, 4]])) == 1
    assert matrix_rank(K, M([[1, 0], [0, 1]])) == 2
