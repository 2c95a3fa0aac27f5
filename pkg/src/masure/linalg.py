"""Small exact linear algebra helpers over Fraction tuples."""
from fractions import Fraction as Frac


def vec(xs):
    return tuple(Frac(x) for x in xs)


def zeros(d):
    return tuple(Frac(0) for _ in range(d))


def unit(d, i):
    return tuple(Frac(1) if j == i else Frac(0) for j in range(d))


def add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a):
    c = Frac(c)
    return tuple(c * x for x in a)


def dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Frac(0))


def identity(d):
    return tuple(unit(d, i) for i in range(d))


def matmul(A, B):
    cols = list(zip(*B))
    return tuple(tuple(dot(row, col) for col in cols) for row in A)


def matvec(A, v):
    return tuple(dot(row, v) for row in A)


def covec_mat(c, A):
    """Row vector c times matrix A."""
    return tuple(dot(c, col) for col in zip(*A))


def transpose(A):
    return tuple(tuple(r) for r in zip(*A))


def rref(rows):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    M = [list(map(Frac, r)) for r in rows]
    pivots = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [x / piv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(rows):
    if not rows:
        return 0
    return len(rref(rows)[1])


def solve(A, b):
    """One solution of A x = b (A has full row rank assumed); None if inconsistent."""
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    M, piv = rref(aug)
    n = len(A[0])
    if n in piv:
        return None
    x = [Frac(0)] * n
    for row, c in zip(M, piv):
        x[c] = row[-1]
    return tuple(x)


def inverse(A):
    d = len(A)
    aug = [list(A[i]) + list(unit(d, i)) for i in range(d)]
    M, piv = rref(aug)
    if piv[:d] != list(range(d)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(row[d:]) for row in M[:d])


def lcm_denominator(xs):
    from math import lcm

    out = 1
    for x in xs:
        out = lcm(out, Frac(x).denominator)
    return out
