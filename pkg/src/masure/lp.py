"""Exact rational linear programming: two-phase dense simplex with Bland's rule."""
import logging
from math import lcm
from dataclasses import dataclass, field
from fractions import Fraction as Frac

log = logging.getLogger(__name__)

LE, EQ, GE = "<=", "=", ">="


@dataclass
class LpProblem:
    """minimize c.z subject to rows (a, rel, b); variables are >= 0 unless listed in free."""

    c: list
    rows: list = field(default_factory=list)
    free: set = field(default_factory=set)

    @property
    def nvars(self):
        return len(self.c)

    def add(self, a, rel, b):
        if rel not in (LE, EQ, GE):
            raise ValueError(f"bad relation {rel!r}")
        self.rows.append((tuple(Frac(x) for x in a), rel, Frac(b)))


@dataclass
class Optimal:
    value: Frac
    x: tuple
    dual: tuple  # one multiplier per (canonically ordered) input row, see lp_solve


@dataclass
class Infeasible:
    certificate: tuple  # multipliers per input row


@dataclass
class Unbounded:
    point: tuple
    ray: tuple


def _canonical_order(rows):
    return sorted(range(len(rows)), key=lambda i: (rows[i][1], rows[i][0], rows[i][2]))


def lp_solve(problem, verbose=False):
    """Solve exactly. Dual and certificate entries are indexed like problem.rows.

    Dual multipliers are <= 0 on <= rows and >= 0 on >= rows, with sum_r y_r a_r equal
    to c on free variables, <= c on nonnegative ones, and sum_r y_r b_r equal to the
    optimum. Certificate multipliers are >= 0 on <= rows and <= 0 on >= rows, their
    combination is 0 on free variables and >= 0 on nonnegative ones, and
    sum_r y_r b_r < 0.

    The tableau is kept in integers over a common denominator (integer pivoting), so
    every division is exact.
    """
    nv = problem.nvars
    rows = problem.rows
    order = _canonical_order(rows)
    # standard-form columns: original vars (split if free), then slacks
    cols = []  # (original var, sign)
    for j in range(nv):
        cols.append((j, 1))
        if j in problem.free:
            cols.append((j, -1))
    nslack = sum(1 for r in rows if r[1] != EQ)
    ncol = len(cols) + nslack
    m = len(rows)
    width = ncol + m
    T, factor = [], []
    s = len(cols)
    for pos, ri in enumerate(order):
        a, rel, rhs = rows[ri]
        line = [a[j] * sg for j, sg in cols] + [Frac(0)] * nslack
        if rel != EQ:
            line[s] = Frac(1) if rel == LE else Frac(-1)
            s += 1
        line.append(rhs)
        f = (-1 if rhs < 0 else 1) * lcm_denominators(line)
        ints = [int(x * f) for x in line]
        T.append(ints[:-1] + [1 if k == pos else 0 for k in range(m)] + [ints[-1]])
        factor.append(f)
    cscale = lcm_denominators(problem.c)
    cost = [int(problem.c[j] * sg * cscale) for j, sg in cols] + [0] * nslack
    basis = [ncol + i for i in range(m)]
    D = 1

    def pivot(r, c, obj):
        nonlocal D
        p = T[r][c]
        prow = T[r]
        nz = [k for k, x in enumerate(prow) if x != 0]
        for row in [T[i] for i in range(m) if i != r] + [obj]:
            f = row[c]
            if f != 0:
                for k in range(width + 1):
                    row[k] = row[k] * p
                for k in nz:
                    row[k] -= f * prow[k]
                for k in range(width + 1):
                    row[k] //= D
            elif p != D:
                for k in range(width + 1):
                    row[k] = row[k] * p // D
        D = p
        basis[r] = c

    def objective_row(costs):
        row = [D * x for x in costs] + [0]
        for i in range(m):
            cb = costs[basis[i]]
            if cb != 0:
                row = [x - cb * y for x, y in zip(row, T[i])]
        return row

    def run(obj, allowed):
        while True:
            sg = 1 if D > 0 else -1
            inb = set(basis)
            enter = next((j for j in range(width) if allowed(j) and obj[j] * sg < 0 and j not in inb), None)
            if enter is None:
                return None
            best = None
            for i in range(m):
                if T[i][enter] * sg > 0:
                    key = (Frac(T[i][-1], T[i][enter]), basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return enter
            if verbose:
                log.debug("pivot row %d col %d", best[1], enter)
            pivot(best[1], enter, obj)

    def duals(costs):
        # y = c_B B^{-1}; B^{-1} sits in the artificial columns
        return [
            Frac(sum(costs[basis[i]] * T[i][ncol + k] for i in range(m)), D) for k in range(m)
        ]

    # phase 1
    c1 = [0] * ncol + [1] * m
    run(objective_row(c1), lambda j: True)
    phase1 = sum((Frac(T[i][-1], D) for i in range(m) if basis[i] >= ncol), Frac(0))
    if phase1 > 0:
        y = duals(c1)
        cert = [Frac(0)] * len(rows)
        for pos, ri in enumerate(order):
            cert[ri] = -y[pos] * factor[pos]
        return Infeasible(tuple(cert))
    # drive zero-level artificials out where possible
    for i in range(m):
        if basis[i] >= ncol:
            inb = set(basis)
            j = next((j for j in range(ncol) if T[i][j] != 0 and j not in inb), None)
            if j is not None:
                pivot(i, j, [0] * (width + 1))
    c2 = cost + [0] * m
    enter = run(objective_row(c2), lambda j: j < ncol)
    xs = [Frac(0)] * width
    for i in range(m):
        xs[basis[i]] = Frac(T[i][-1], D)
    point = _recover(xs, cols, nv)
    if enter is not None:
        d = [Frac(0)] * width
        d[enter] = Frac(1)
        for i in range(m):
            d[basis[i]] = -Frac(T[i][enter], D)
        return Unbounded(point, _recover(d, cols, nv))
    y = duals(c2)
    dual = [Frac(0)] * len(rows)
    for pos, ri in enumerate(order):
        dual[ri] = y[pos] * factor[pos] / cscale
    value = sum((problem.c[j] * point[j] for j in range(nv)), Frac(0))
    res = Optimal(value, point, tuple(dual))
    _check_optimal(problem, res)
    return res


def lcm_denominators(xs):
    out = 1
    for x in xs:
        out = lcm(out, Frac(x).denominator)
    return out


def _recover(xs, cols, nv):
    out = [Frac(0)] * nv
    for k, (j, sg) in enumerate(cols):
        out[j] += sg * xs[k]
    return tuple(out)


def satisfies(problem, x):
    for j in range(problem.nvars):
        if j not in problem.free and x[j] < 0:
            return False
    for a, rel, b in problem.rows:
        v = sum((ai * xi for ai, xi in zip(a, x)), Frac(0))
        if (rel == LE and v > b) or (rel == GE and v < b) or (rel == EQ and v != b):
            return False
    return True


def _check_optimal(problem, res):
    if not satisfies(problem, res.x):
        raise AssertionError("simplex witness violates a constraint")


def check_dual(problem, res):
    """Verify dual feasibility and zero duality gap of an Optimal result."""
    y = res.dual
    for (a, rel, b), yr in zip(problem.rows, y):
        if (rel == LE and yr > 0) or (rel == GE and yr < 0):
            return False
    for j in range(problem.nvars):
        comb = sum((yr * a[j] for (a, _, _), yr in zip(problem.rows, y)), Frac(0))
        if j in problem.free and comb != problem.c[j]:
            return False
        if j not in problem.free and comb > problem.c[j]:
            return False
    dual_value = sum((yr * b for (_, _, b), yr in zip(problem.rows, y)), Frac(0))
    return dual_value == res.value


def check_certificate(problem, cert):
    for (a, rel, b), yr in zip(problem.rows, cert):
        if (rel == LE and yr < 0) or (rel == GE and yr > 0):
            return False
    for j in range(problem.nvars):
        comb = sum((yr * a[j] for (a, _, _), yr in zip(problem.rows, cert)), Frac(0))
        if j in problem.free and comb != 0:
            return False
        if j not in problem.free and comb < 0:
            return False
    return sum((yr * b for (_, _, b), yr in zip(problem.rows, cert)), Frac(0)) < 0


def lexmin(problem, value, keys):
    """Among optimal points, the lexicographically least in the given variable order."""
    prob = LpProblem(list(problem.c), list(problem.rows), set(problem.free))
    prob.add(problem.c, EQ, value)
    x = None
    for j in keys:
        obj = [Frac(0)] * problem.nvars
        obj[j] = Frac(1)
        res = lp_solve(LpProblem(obj, prob.rows, prob.free))
        if not isinstance(res, Optimal):
            return x
        x = res.x
        prob.add(obj, EQ, res.value)
    return x


def min_norm_pair(d, rows, cone, norm="l1", lexmin_witness=False):
    """Minimize |u| + |u'| over pairs in the closed cone subject to affine rows.

    rows: (coef_u, coef_u2, rel, rhs) constraints on the pair; cone: covectors that must
    be >= 0 on both u and u'. Returns (value, u, u') or None when infeasible.
    The pair is written as differences p - q of nonnegative variables; for l1 the
    objective is the sum of all parts, for linf two bounds t, t' are added.
    """
    if norm not in ("l1", "linf"):
        raise ValueError(f"unsupported norm {norm!r}")
    nt = 0 if norm == "l1" else 2
    c = [Frac(1) if norm == "l1" else Frac(0)] * (4 * d) + [Frac(1)] * nt
    prob = LpProblem(c)

    def row(cu, cu2, ct=None):
        cu, cu2 = list(cu), list(cu2)
        out = cu + [-x for x in cu] + cu2 + [-x for x in cu2] + [Frac(0)] * nt
        for j, v in (ct or {}).items():
            out[4 * d + j] = Frac(v)
        return out

    z = [Frac(0)] * d
    for a in cone:
        prob.add(row(a, z), GE, 0)
        prob.add(row(z, a), GE, 0)
    for cu, cu2, rel, rhs in rows:
        prob.add(row(cu, cu2), rel, rhs)
    if norm == "linf":
        for side in range(2):
            for i in range(d):
                e = [Frac(1) if k == i else Frac(0) for k in range(d)]
                me = [-x for x in e]
                pos = (e, z) if side == 0 else (z, e)
                neg = (me, z) if side == 0 else (z, me)
                prob.add(row(*pos, {side: -1}), LE, 0)
                prob.add(row(*neg, {side: -1}), LE, 0)
    res = lp_solve(prob)
    if isinstance(res, Infeasible):
        return None
    if isinstance(res, Unbounded):
        raise AssertionError("norm minimization cannot be unbounded")
    x = res.x
    u = tuple(x[i] - x[d + i] for i in range(d))
    u2 = tuple(x[2 * d + i] - x[3 * d + i] for i in range(d))
    if lexmin_witness:
        u, u2 = _lexmin_pair(prob, res.value, d, nt)
    return res.value, u, u2


def _lexmin_pair(prob, value, d, nt):
    """Lexicographically least (u, u') among optimal pairs."""
    nv = prob.nvars
    base = LpProblem([Frac(0)] * nv, list(prob.rows))
    base.add(prob.c, EQ, value)
    out = []
    for k in range(2 * d):
        p, q = (k, d + k) if k < d else (d + k, 2 * d + k)
        obj = [Frac(0)] * nv
        obj[p], obj[q] = Frac(1), Frac(-1)
        res = lp_solve(LpProblem(obj, base.rows))
        if not isinstance(res, Optimal):
            raise AssertionError("lexicographic refinement lost feasibility")
        out.append(res.value)
        base.add(obj, EQ, res.value)
    return tuple(out[:d]), tuple(out[d:])
