"""Generalized Cartan matrices, realizations, real roots and Weyl words."""
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction as Frac
from functools import cached_property

from . import linalg as la
from .errors import RootOutsideTable, ViolatesGcmAxioms

PRESETS = {
    "a1": ((2,),),
    "affine-a1": ((2, -2), (-2, 2)),
    "hyp23": ((2, -3), (-3, 2)),
}


@dataclass(frozen=True)
class GcmRealization:
    matrix: tuple
    n: int
    d: int
    coroots: tuple  # alpha_i^vee as vectors of length d
    roots: tuple  # alpha_i as covectors of length d

    @cached_property
    def rho_vee(self):
        """A vector with alpha_i(rho_vee) = 1 for every i, inside the open chamber."""
        return la.solve(self.roots, [Frac(1)] * self.n)

    def reflection_matrix(self, i):
        a, c = self.roots[i], self.coroots[i]
        return tuple(
            tuple((Frac(1) if r == s else Frac(0)) - c[r] * a[s] for s in range(self.d))
            for r in range(self.d)
        )

    @cached_property
    def reflections(self):
        return tuple(self.reflection_matrix(i) for i in range(self.n))

    def reflect(self, i, v):
        return la.sub(v, la.scale(la.dot(self.roots[i], v), self.coroots[i]))

    def is_dominant(self, v, strict=False):
        vals = [la.dot(a, v) for a in self.roots]
        return all(x > 0 for x in vals) if strict else all(x >= 0 for x in vals)

    @cached_property
    def corank(self):
        return self.d - self.n

    @cached_property
    def indecomposable(self):
        seen, todo = {0}, [0]
        while todo:
            i = todo.pop()
            for j in range(self.n):
                if j not in seen and self.matrix[i][j] != 0:
                    seen.add(j)
                    todo.append(j)
        return len(seen) == self.n

    @cached_property
    def finite_type(self):
        """True when the Weyl group is finite (the positive real roots close up)."""
        cap = 4000
        seen = set()
        todo = deque(tuple(1 if j == i else 0 for j in range(self.n)) for i in range(self.n))
        while todo:
            b = todo.popleft()
            if b in seen:
                continue
            seen.add(b)
            if len(seen) > cap:
                return False
            for j in range(self.n):
                c = _reflect_coords(self.matrix, b, j)
                if all(x >= 0 for x in c) and c not in seen:
                    todo.append(c)
        return True


def validate_gcm(matrix):
    """Check the GCM axioms and build the rational realization."""
    try:
        C = tuple(tuple(int(x) for x in row) for row in matrix)
    except (TypeError, ValueError) as exc:
        raise ViolatesGcmAxioms(f"entries must be integers: {exc}") from None
    n = len(C)
    if n == 0 or any(len(r) != n for r in C):
        raise ViolatesGcmAxioms("matrix must be square and non-empty")
    for r in range(n):
        for s in range(n):
            if Frac(matrix[r][s]) != C[r][s]:
                raise ViolatesGcmAxioms(f"entry ({r},{s}) is not an integer")
    for i in range(n):
        if C[i][i] != 2:
            raise ViolatesGcmAxioms(f"diagonal entry ({i},{i}) = {C[i][i]} must be 2")
    for i in range(n):
        for j in range(n):
            if i != j and C[i][j] > 0:
                raise ViolatesGcmAxioms(f"off-diagonal entry ({i},{j}) = {C[i][j]} must be <= 0")
            if i != j and (C[i][j] == 0) != (C[j][i] == 0):
                raise ViolatesGcmAxioms(f"entries ({i},{j}) and ({j},{i}) must vanish together")
    # alpha_j(e_i) = c_ij, so row j of the root matrix starts with column j of C
    rows = [[Frac(C[i][j]) for i in range(n)] for j in range(n)]
    corank = n - la.rank(rows)
    for _ in range(corank):
        base = la.rank(rows)
        for j in range(n):
            trial = [r + [Frac(1) if t == j else Frac(0)] for t, r in enumerate(rows)]
            if la.rank(trial) > base:
                rows = trial
                break
    d = n + corank
    coroots = tuple(la.unit(d, i) for i in range(n))
    roots = tuple(tuple(r) for r in rows)
    return GcmRealization(C, n, d, coroots, roots)


def preset(name):
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; known: {sorted(PRESETS)}")
    return validate_gcm(PRESETS[name])


def _reflect_coords(C, b, j):
    # s_j(beta) = beta - beta(alpha_j^vee) alpha_j with alpha_i(alpha_j^vee) = c_ji
    p = sum(b[i] * C[j][i] for i in range(len(b)))
    return tuple(b[i] - (p if i == j else 0) for i in range(len(b)))


def _reflect_coroot_coords(C, b, j):
    # s_j(v) = v - alpha_j(v) alpha_j^vee with alpha_j(alpha_i^vee) = c_ij
    p = sum(b[i] * C[i][j] for i in range(len(b)))
    return tuple(b[i] - (p if i == j else 0) for i in range(len(b)))


@dataclass(frozen=True)
class Root:
    coords: tuple  # integer coordinates in the simple-root basis
    coroot_coords: tuple  # integer coordinates in the simple-coroot basis
    covector: tuple
    coroot: tuple

    @property
    def height(self):
        return sum(self.coords)

    @property
    def positive(self):
        return self.height > 0

    def __call__(self, v):
        return la.dot(self.covector, v)


def make_root(real, coords, coroot_coords):
    cov = tuple(
        sum((Frac(coords[i]) * real.roots[i][s] for i in range(real.n)), Frac(0))
        for s in range(real.d)
    )
    cor = tuple(Frac(coroot_coords[s]) if s < real.n else Frac(0) for s in range(real.d))
    return Root(tuple(coords), tuple(coroot_coords), cov, cor)


@dataclass(frozen=True)
class RealRootTable:
    realization: GcmRealization
    height_bound: int
    roots: tuple  # sorted by (height, coords)
    _by_coords: dict = field(repr=False, compare=False, hash=False)
    _by_covector: dict = field(repr=False, compare=False, hash=False)

    @cached_property
    def positive(self):
        return tuple(r for r in self.roots if r.positive)

    @cached_property
    def _positive_index(self):
        return {r.coords: i for i, r in enumerate(self.positive)}

    def positive_index(self, root):
        return self._positive_index[root.coords]

    def by_coords(self, coords):
        try:
            return self._by_coords[tuple(coords)]
        except KeyError:
            raise RootOutsideTable(f"root {tuple(coords)} not in table (H={self.height_bound})") from None

    def by_covector(self, cov):
        try:
            return self._by_covector[tuple(Frac(x) for x in cov)]
        except KeyError:
            raise RootOutsideTable(f"covector {tuple(str(x) for x in cov)} is not a real root of height <= {self.height_bound}") from None

    def negate(self, root):
        return self.by_coords(tuple(-c for c in root.coords))

    def simple(self, i):
        return self.by_coords(tuple(1 if j == i else 0 for j in range(self.realization.n)))

    def __len__(self):
        return len(self.roots)


def enumerate_real_roots(real, H):
    """Real roots of height at most H (in absolute value), by reflection closure."""
    if H < 1:
        raise ValueError("height bound must be >= 1")
    n = real.n
    C = real.matrix
    found = {}
    todo = deque()
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        todo.append((e, e))
        todo.append((tuple(-x for x in e), tuple(-x for x in e)))
    while todo:
        b, bv = todo.popleft()
        if b in found:
            continue
        found[b] = bv
        for j in range(n):
            c = _reflect_coords(C, b, j)
            if abs(sum(c)) <= H and c not in found:
                todo.append((c, _reflect_coroot_coords(C, bv, j)))
    roots = sorted((make_root(real, b, bv) for b, bv in found.items()), key=lambda r: (r.height, r.coords))
    by_coords = {r.coords: r for r in roots}
    by_cov = {r.covector: r for r in roots}
    return RealRootTable(real, H, tuple(roots), by_coords, by_cov)


# --- Weyl group -----------------------------------------------------------


@dataclass(frozen=True)
class WeylWord:
    word: tuple  # canonical (lexicographically least) reduced word, 0-based indices
    matrix: tuple

    def __len__(self):
        return len(self.word)

    def literal(self):
        return "".join(f"s{i + 1}" for i in self.word) or "e"


def word_matrix(real, word):
    M = la.identity(real.d)
    for i in word:
        if not 0 <= i < real.n:
            raise IndexError(f"generator index {i} outside 0..{real.n - 1}")
        M = la.matmul(M, real.reflections[i])
    return M


def reduce_matrix(real, M):
    """Lexicographically least reduced word of the element acting by M."""
    v = la.matvec(M, real.rho_vee)
    word = []
    while True:
        i = next((i for i in range(real.n) if la.dot(real.roots[i], v) < 0), None)
        if i is None:
            break
        word.append(i)
        v = real.reflect(i, v)
    return WeylWord(tuple(word), tuple(M))


def weyl_reduce(real, word):
    """Reduce a word using the descent criterion on exact covectors."""
    return reduce_matrix(real, word_matrix(real, tuple(word)))


def weyl_identity(real):
    return WeylWord((), la.identity(real.d))


def weyl_mul(real, a, b):
    return reduce_matrix(real, la.matmul(a.matrix, b.matrix))


def weyl_inverse(real, w):
    return weyl_reduce(real, tuple(reversed(w.word)))


def inversion_count(real, table, w):
    """Number of positive roots beta of the table with w^{-1} beta negative."""
    rho = la.matvec(w.matrix, real.rho_vee)
    return sum(1 for r in table.positive if r(rho) < 0)


@dataclass(frozen=True)
class AffineWeyl:
    """x -> w x + shift with shift in the coroot lattice."""

    w: WeylWord
    shift: tuple

    def inverse(self, real):
        winv = weyl_inverse(real, self.w)
        return AffineWeyl(winv, la.scale(-1, la.matvec(winv.matrix, self.shift)))


def weyl_act(real, elt, v):
    v = la.vec(v)
    if len(v) != real.d:
        raise ValueError(f"vector has dimension {len(v)}, expected {real.d}")
    if isinstance(elt, AffineWeyl):
        return la.add(la.matvec(elt.w.matrix, v), elt.shift)
    if isinstance(elt, WeylWord):
        return la.matvec(elt.matrix, v)
    return la.matvec(word_matrix(real, tuple(elt)), v)


def act_covector(w, cov):
    """(w.beta)(x) = beta(w^{-1} x), as a covector."""
    return la.covec_mat(cov, la.inverse(w.matrix))


# --- sector germs ----------------------------------------------------------


@dataclass(frozen=True)
class SectorGermId:
    sign: int  # +1 or -1
    w: WeylWord

    def literal(self):
        return ("+" if self.sign > 0 else "-") + self.w.literal()

    def direction(self, u):
        """Chart displacement of a dominant vector u towards this germ."""
        return la.scale(self.sign, la.matvec(self.w.matrix, u))

    @property
    def direction_matrix(self):
        return tuple(tuple(self.sign * x for x in row) for row in self.w.matrix)


def germ(real, sign, word=()):
    if sign not in (1, -1):
        raise ValueError("germ sign must be +1 or -1")
    return SectorGermId(sign, weyl_reduce(real, word))


def parse_germ(real, text):
    text = text.strip()
    if not text or text[0] not in "+-":
        raise ValueError(f"germ literal {text!r} must start with + or -")
    sign = 1 if text[0] == "+" else -1
    body = text[1:]
    if body in ("", "e"):
        return germ(real, sign)
    parts = body.split("s")
    if parts[0] != "" or any(not p.isdigit() for p in parts[1:]):
        raise ValueError(f"bad germ literal {text!r}")
    return germ(real, sign, [int(p) - 1 for p in parts[1:]])


def germ_side(table, beta, g):
    """+1 if beta is positive on the chamber of g, -1 otherwise."""
    image = table.by_covector(la.covec_mat(beta.covector, g.w.matrix))
    return g.sign if image.positive else -g.sign
