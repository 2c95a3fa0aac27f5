"""Geometry of the model apartment: norms, walls, enclosure, Tits preorder, u-paths."""
import warnings
from dataclasses import dataclass
from fractions import Fraction as Frac
from math import ceil

from . import linalg as la
from .errors import HeightBoundExhausted, NotComparable, RootOutsideTable
from .lp import GE, Infeasible, LpProblem, Optimal, lp_solve

L1, LINF = "l1", "linf"


@dataclass(frozen=True)
class PolyNorm:
    kind: str = L1

    def __post_init__(self):
        if self.kind not in (L1, LINF):
            raise ValueError(f"norm must be {L1!r} or {LINF!r}, got {self.kind!r}")

    def __call__(self, v):
        return norm_eval(self, v)


def norm_eval(norm, v):
    kind = norm.kind if isinstance(norm, PolyNorm) else norm
    if kind == L1:
        return sum((abs(Frac(x)) for x in v), Frac(0))
    if kind == LINF:
        return max((abs(Frac(x)) for x in v), default=Frac(0))
    raise ValueError(f"unknown norm {kind!r}")


def dual_norm(norm, covector):
    """Operator norm of a covector: the L1 dual is LINF of the row and vice versa."""
    kind = norm.kind if isinstance(norm, PolyNorm) else norm
    return norm_eval(LINF if kind == L1 else L1, covector)


def l1_comparison(norm, d):
    """kappa with |v|_1 <= kappa * |v|_norm."""
    kind = norm.kind if isinstance(norm, PolyNorm) else norm
    return Frac(1) if kind == L1 else Frac(d)


# --- affine maps and walls -------------------------------------------------


@dataclass(frozen=True)
class AffineMap:
    matrix: tuple
    shift: tuple

    def __call__(self, v):
        return la.add(la.matvec(self.matrix, v), self.shift)

    def compose(self, other):
        """self after other."""
        return AffineMap(la.matmul(self.matrix, other.matrix), self(other.shift))

    def is_identity(self):
        d = len(self.shift)
        return self.matrix == la.identity(d) and all(x == 0 for x in self.shift)


def identity_map(d):
    return AffineMap(la.identity(d), la.zeros(d))


def wall_reflection(beta, k):
    """s_{beta,k}(x) = x - (beta(x) + k) beta^vee."""
    cov, cor = beta.covector, beta.coroot
    d = len(cov)
    M = tuple(
        tuple((Frac(1) if r == s else Frac(0)) - cor[r] * cov[s] for s in range(d)) for r in range(d)
    )
    return AffineMap(M, la.scale(-Frac(k), cor))


def reflect_wall(beta, k, x):
    return la.sub(x, la.scale(beta(x) + Frac(k), beta.coroot))


@dataclass(frozen=True)
class HalfSpaceSpec:
    """The closed half {beta + k >= 0}."""

    root: object
    k: Frac

    @property
    def true(self):
        return Frac(self.k).denominator == 1

    def contains(self, x):
        return self.root(x) + self.k >= 0


def enclose(table, halfspaces):
    """Enclosure of an intersection of half-spaces over the real roots of the table."""
    halfspaces = list(halfspaces)
    for h in halfspaces:
        if h.root.coords not in table._by_coords:
            raise RootOutsideTable(f"root {h.root.coords} not in table")
    if len(halfspaces) == 1:
        h = halfspaces[0]
        return [HalfSpaceSpec(h.root, Frac(ceil(Frac(h.k))))]
    d = table.realization.d
    base = LpProblem([Frac(0)] * d, free=set(range(d)))
    for h in halfspaces:
        base.add(h.root.covector, GE, -Frac(h.k))
    out = []
    for r in table.roots:
        res = lp_solve(LpProblem(list(r.covector), base.rows, base.free))
        if isinstance(res, Optimal):
            out.append(HalfSpaceSpec(r, Frac(ceil(-res.value))))
        elif isinstance(res, Infeasible):
            # empty input set: every constraint rounds up on its own
            return [HalfSpaceSpec(h.root, Frac(ceil(Frac(h.k)))) for h in halfspaces]
    return out


# --- Tits cone and vectorial distance ---------------------------------------


def descend(real, v, max_steps):
    """Apply r_i while alpha_i(v) < 0; returns (vector, word applied, reached dominant)."""
    word = []
    for _ in range(max_steps + 1):
        i = next((i for i in range(real.n) if la.dot(real.roots[i], v) < 0), None)
        if i is None:
            return v, tuple(word), True
        if len(word) == max_steps:
            break
        v = real.reflect(i, v)
        word.append(i)
    return v, tuple(word), False


def _ascend(real, v, max_steps):
    for _ in range(max_steps):
        i = next((i for i in range(real.n) if la.dot(real.roots[i], v) > 0), None)
        if i is None:
            return v, True
        v = real.reflect(i, v)
    return v, False


def tits_leq(real, x, y, max_steps=200):
    """x <= y in the Tits preorder: True, False, or None when undecided."""
    v = la.sub(la.vec(y), la.vec(x))
    _, _, ok = descend(real, v, max_steps)
    if ok:
        return True
    if real.finite_type:
        return None  # cannot happen: the Tits cone is everything
    if not real.indecomposable:
        return None
    # v in -T but not in T intersect -T is a certificate of non-membership
    w, ok = _ascend(real, v, max_steps)
    if ok and any(la.dot(a, w) != 0 for a in real.roots):
        return False
    return None


def vectorial_distance(real, x, y, max_steps=200):
    v = la.sub(la.vec(y), la.vec(x))
    dom, _, ok = descend(real, v, max_steps)
    if not ok:
        raise NotComparable("y - x is not brought into the closed chamber by descent")
    return dom


def in_orbit(real, v, u, max_steps=200):
    """Is v in the Weyl orbit of the dominant vector u? True, False or None."""
    dom, _, ok = descend(real, la.vec(v), max_steps)
    if not ok:
        return None
    return dom == la.vec(u)


def in_coroot_cone(real, q):
    """Membership in the nonnegative real span of the simple coroots."""
    q = la.vec(q)
    return all(x == 0 for x in q[real.n:]) and all(x >= 0 for x in q[: real.n])


# --- wall density -----------------------------------------------------------


def wall_gap(beta, norm):
    return 1 / dual_norm(norm, beta.covector)


def find_dense_direction(table, eps, norm=PolyNorm(L1)):
    """Least-height positive root whose consecutive true walls are closer than eps."""
    eps = Frac(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    for r in table.positive:
        g = wall_gap(r, norm)
        if g < eps:
            return r, g
    raise HeightBoundExhausted(f"no root of height <= {table.height_bound} has wall gap < {eps}")


# --- u-paths ---------------------------------------------------------------


def is_u_path(real, breakpoints, u, max_steps=200):
    """breakpoints: [(t, point), ...] with increasing t. Velocities must lie in W.u."""
    u = la.vec(u)
    undecided = False
    for (t0, p0), (t1, p1) in zip(breakpoints, breakpoints[1:]):
        dt = Frac(t1) - Frac(t0)
        if dt <= 0:
            return False
        vel = la.scale(1 / dt, la.sub(la.vec(p1), la.vec(p0)))
        verdict = in_orbit(real, vel, u, max_steps)
        if verdict is None:
            undecided = True
        elif not verdict:
            return False
    if undecided:
        warnings.warn("orbit membership undecided within max_steps; treated as not a u-path")
        return False
    return True
