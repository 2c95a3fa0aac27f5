"""Signed and mixed distances on a branched masure, plus the probes built on them."""
import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction as Frac

from . import linalg as la
from .apartment import L1, PolyNorm, in_coroot_cone, is_u_path, l1_comparison, norm_eval
from .errors import DegenerateWitness, HeightBoundExhausted, InternalInconsistency, MixedSigns
from .lp import GE, min_norm_pair
from .masure_sim import FoldingLetter, MasurePoint
from .rootsys import SectorGermId, germ, reduce_matrix, weyl_mul


@dataclass(frozen=True)
class ThetaSpec:
    norm: PolyNorm
    germ: SectorGermId

    def literal(self):
        return {"norm": self.norm.kind, "germ": self.germ.literal()}


@dataclass(frozen=True)
class XiSpec:
    plus: ThetaSpec
    minus: ThetaSpec

    def __post_init__(self):
        if self.plus.germ.sign != 1 or self.minus.germ.sign != -1:
            raise MixedSigns("a mixed distance needs one positive and one negative germ")

    def literal(self):
        return [self.plus.literal(), self.minus.literal()]


@dataclass(frozen=True)
class ConePair:
    u: tuple
    u2: tuple


@dataclass(frozen=True)
class DistanceResult:
    value: Frac
    witness: ConePair
    meet: MasurePoint
    pieces: tuple  # indices of the winning piece pair


def theta(real, norm=L1, sign=1, word=()):
    return ThetaSpec(PolyNorm(norm), germ(real, sign, word))


def standard_xi(real, norm=L1):
    return XiSpec(theta(real, norm, 1), theta(real, norm, -1))


def _check_dominant(real, u):
    if not real.is_dominant(u):
        raise ValueError(f"direction {tuple(str(x) for x in u)} is not in the closed chamber")


# --- translation -------------------------------------------------------------


def translate(m, x, g, u):
    """x +_g u, computed in the chart of x's apartment towards g."""
    u = la.vec(u)
    _check_dominant(m.real, u)
    c = la.add(m.retract(x, g), g.direction(u))
    return m.point_at(m.chart(x.word, g), c)


# --- distance LP -----------------------------------------------------------


def _pair_rows(m, P, Q, rx, ry, D):
    d = m.real.d
    z = la.zeros(d)
    rows = []
    for con in P.region:
        rows.append((la.covec_mat(con.covector, D), z, GE, -(con.k + la.dot(con.covector, rx))))
    for con in Q.region:
        rows.append((z, la.covec_mat(con.covector, D), GE, -(con.k + la.dot(con.covector, ry))))
    AP, AQ = la.matmul(P.map.matrix, D), la.matmul(Q.map.matrix, D)
    px, qy = P.map(rx), Q.map(ry)
    # P.map(rx + D u) == Q.map(ry + D u')
    for r in range(d):
        rows.append((AP[r], tuple(-x for x in AQ[r]), "=", qy[r] - px[r]))
    # letters past the common prefix must be satisfied by the common image
    L = 0
    while L < min(len(P.host), len(Q.host)) and P.host[L] == Q.host[L]:
        L += 1
    for l in P.host[L:] + Q.host[L:]:
        beta = m.root_of(l)
        rows.append((la.covec_mat(beta.covector, AP), z, GE, -(l.k + beta(px))))
    return rows


def distance_result(m, x, y, th, lexmin=True):
    """Exact d_th with a witness; lexmin picks the lexicographically least optimal pair."""
    g = th.germ
    D = g.direction_matrix
    cx, cy = m.chart(x.word, g), m.chart(y.word, g)
    rx, ry = m.retract(x, g), m.retract(y, g)
    pairs = [(i, j) for i in range(len(cx.pieces)) for j in range(len(cy.pieces))]
    pairs.sort(key=lambda ij: (len(cx.pieces[ij[0]].host) + len(cy.pieces[ij[1]].host), ij))
    best = None
    for i, j in pairs:
        rows = _pair_rows(m, cx.pieces[i], cy.pieces[j], rx, ry, D)
        res = min_norm_pair(m.real.d, rows, m.real.roots, th.norm.kind)
        if res is not None and (best is None or res[0] < best[0][0]):
            best = (res, (i, j), rows)
    if best is None:
        raise InternalInconsistency("no piece pair admits a common translate")
    (value, u, u2), (i, j), rows = best
    if lexmin:
        _, u, u2 = min_norm_pair(m.real.d, rows, m.real.roots, th.norm.kind, lexmin_witness=True)
    meet = translate(m, x, g, u)
    if not m.points_equal(meet, translate(m, y, g, u2)):
        raise InternalInconsistency("LP witness does not meet")
    if norm_eval(th.norm, u) + norm_eval(th.norm, u2) != value:
        raise InternalInconsistency("witness norm differs from the LP value")
    return DistanceResult(value, ConePair(u, u2), meet, (i, j))


def distance(m, x, y, th):
    return distance_result(m, x, y, th, lexmin=False).value


def distance_mixed(m, x, y, xi):
    return distance(m, x, y, xi.plus) + distance(m, x, y, xi.minus)


def root_norm(m, v, th):
    """The norm induced by d_th on the root apartment."""
    d = m.real.d
    return distance(m, MasurePoint((), la.zeros(d)), MasurePoint((), la.vec(v)), th)


# --- brute-force oracle --------------------------------------------------------


@functools.lru_cache(maxsize=64)
def _lattice_shell(real, N, lo, hi, norm):
    """Lattice points u of (1/N)Z^d in the closed chamber with lo < |u| <= hi, by norm."""
    span = range(-hi * N, hi * N + 1)
    out = []
    for coords in itertools.product(span, repeat=real.d):
        u = tuple(Frac(c, N) for c in coords)
        n = norm_eval(norm, u)
        if lo < n <= hi and real.is_dominant(u):
            out.append((n, u))
    out.sort()
    return tuple(out)


def distance_oracle(m, x, y, th, N=1, max_radius=256):
    """min |u|+|u'| over lattice pairs of (1/N)Z^d in the closed chamber.

    Lattice points are scanned by increasing norm; once the norm reaches the best sum
    found, no later point can improve it.
    """
    if N < 1:
        raise ValueError("resolution must be >= 1")
    best_x, best_y = {}, {}
    best = None
    lo, hi = -1, 1
    while True:
        for n, u in _lattice_shell(m.real, N, lo, hi, th.norm):
            if best is not None and n >= best:
                return best
            px = translate(m, x, th.germ, u)
            py = translate(m, y, th.germ, u)
            best_x.setdefault(px, n)
            best_y.setdefault(py, n)
            for p in (px, py):
                if p in best_x and p in best_y:
                    s = best_x[p] + best_y[p]
                    if best is None or s < best:
                        best = s
        if best is not None and best <= hi:
            return best
        if hi >= max_radius:
            raise InternalInconsistency(f"oracle found no meeting pair within radius {hi}")
        lo, hi = hi, 2 * hi


# --- rays to the root apartment -----------------------------------------------


def _check_open(real, u):
    if not real.is_dominant(u, strict=True):
        raise ValueError("ray directions must lie in the open chamber")


def ray_exit(m, x, u, sign=1):
    """(T, y): least T >= 0 with x +_{sign inf} T u in the root, and that root point."""
    u = la.vec(u)
    _check_open(m.real, u)
    g = germ(m.real, sign)
    rho = m.retract(x, g)
    if not x.word:
        return Frac(0), rho
    beta = m.chain_root(x.word)
    if sign > 0:
        T = max([Frac(0)] + [-(beta(x.b) + l.k) / beta(u) for l in x.word])
    else:
        T = (beta(rho) + m.fold_level(x.word)) / beta(u)
    y = la.add(rho, la.scale(sign * T, u))
    if translate(m, x, g, la.scale(T, u)) != MasurePoint((), y):
        raise InternalInconsistency("closed-form exit time disagrees with translation")
    return T, y


def t_lipschitz_constant(real, u):
    """ell with T_u(x) <= ell |rho_+(x) - rho_-(x)| for the l1 and linf norms.

    T equals |rho_+ - rho_-| / (|beta^vee| beta(u)); integral coroots have norm >= 1 and
    positive roots satisfy beta(u) >= min_i alpha_i(u).
    """
    u = la.vec(u)
    _check_open(real, u)
    return 1 / min(la.dot(a, u) for a in real.roots)


def mixed_bound_k(real, u, xi):
    """k with d_xi(a,x) <= k (d_xi(a, rho_-(x)) + d_xi(a, rho_+(x)))."""
    ell = t_lipschitz_constant(real, u)
    return 2 + 2 * ell * (norm_eval(xi.plus.norm, u) + norm_eval(xi.minus.norm, u))


# --- geodesics -------------------------------------------------------------------


def geodesic(m, x, y, th, t, result=None):
    t = Frac(t)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    res = result or distance_result(m, x, y, th)
    if res.value == 0:
        return x
    u1, u2 = res.witness.u, res.witness.u2
    a1 = norm_eval(th.norm, u1) / res.value
    a2 = 1 - a1
    if t <= a1 and a1 > 0:
        return translate(m, x, th.germ, la.scale(t / a1, u1))
    return translate(m, y, th.germ, la.scale((1 - t) / a2, u2))


def geodesic_family(m, xp, th, z, t, result=None):
    """gamma_z(t) in chart coordinates, from 0 to xp through z u1."""
    z, t = Frac(z), Frac(t)
    xp = la.vec(xp)
    res = result or distance_result(m, MasurePoint((), la.zeros(m.real.d)), MasurePoint((), xp), th)
    u1, u2 = res.witness.u, res.witness.u2
    if all(c == 0 for c in u1) or all(c == 0 for c in u2):
        raise DegenerateWitness("the witness pair has a zero leg")
    D = th.germ.direction_matrix
    v1, v2 = la.matvec(D, u1), la.matvec(D, u2)
    a1 = norm_eval(th.norm, u1) / res.value
    a2 = 1 - a1
    if t <= z * a1:
        return la.scale(t / a1, v1)
    if t <= z * a1 + a2:
        return la.sub(la.scale(z, v1), la.scale((t - z * a1) / a2, v2))
    return la.sub(la.scale((t - a2) / a1, v1), v2)


# --- contraction -----------------------------------------------------------------


def chi(m, x, t, u):
    t = Frac(t)
    T, y = ray_exit(m, x, u, 1)
    if t < 1 and t / (1 - t) < T:
        return translate(m, x, germ(m.real, 1), la.scale(t / (1 - t), la.vec(u)))
    return MasurePoint((), y)


def upsilon(m, x, t, u):
    t = Frac(t)
    if t <= Frac(1, 2):
        return chi(m, x, 2 * t, u)
    _, y = ray_exit(m, x, u, 1)
    return MasurePoint((), la.scale(2 - 2 * t, y))


def chi_modulus(m, points, u, times, xi, deltas, dist=None):
    """Largest d_xi between chi-images of sampled (x,t) pairs within each delta.

    Pairs are measured by d_xi(x,x') + |t - t'|.
    """
    dist = dist or (lambda a, b: distance_mixed(m, a, b, xi))
    samples = [(x, Frac(t), chi(m, x, t, u)) for x in points for t in times]
    table = []
    for delta in deltas:
        delta = Frac(delta)
        worst = Frac(0)
        for (x, t, cx), (y, s, cy) in itertools.combinations(samples, 2):
            gap = abs(t - s)
            if gap > delta:
                continue
            if dist(x, y) + gap <= delta:
                worst = max(worst, dist(cx, cy))
        table.append((delta, worst))
    return table


# --- equivalence of signed distances ------------------------------------------------


def _op_norm_l1(M):
    """Operator norm of M for |.|_1: maximal absolute column sum."""
    return max(sum(abs(M[r][c]) for r in range(len(M))) for c in range(len(M[0])))


def _unit_bound(m, th):
    d = m.real.d
    return max(root_norm(m, la.scale(s, la.unit(d, i)), th) for i in range(d) for s in (1, -1))


def step_constants(m, th, th2):
    """(ell_0, ell_1) for one step from th to an adjacent germ th2 of the same sign."""
    d = m.real.d
    ca = _unit_bound(m, th2)
    l0 = ca * l1_comparison(th.norm, d) * _op_norm_l1(th.germ.direction_matrix)
    # the wall between the two chambers: w r_i w^{-1} with g2 = g r_i
    w1, w2 = th.germ.w.matrix, th2.germ.w.matrix
    R = la.matmul(w2, la.inverse(w1))
    l1 = ca * _op_norm_l1(R) * l1_comparison(th2.norm, d) * _op_norm_l1(th2.germ.direction_matrix)
    return l0, max(l1, Frac(1))


def minimal_gallery(m, g1, g2):
    """Germs g1 = h_0, ..., h_n = g2 with adjacent neighbours."""
    if g1.sign != g2.sign:
        raise MixedSigns("germs of a gallery share their sign")
    diff = weyl_mul(m.real, _inv(m.real, g1.w), g2.w)
    out, M = [g1], g1.w.matrix
    for i in diff.word:
        M = la.matmul(M, m.real.reflections[i])
        out.append(SectorGermId(g1.sign, reduce_matrix(m.real, M)))
    return out


def _inv(real, w):
    return reduce_matrix(real, la.inverse(w.matrix))


def equivalence_constant(m, th1, th2, pairs, dist=None):
    """Empirical ratios d_2/d_1 and d_1/d_2 on the sample plus the a-priori bound."""
    if th1.germ.sign != th2.germ.sign:
        raise MixedSigns("equivalence is compared for germs of one sign")
    gallery = minimal_gallery(m, th1.germ, th2.germ)
    n = len(gallery) - 1
    step = Frac(1)
    prev = th1
    for h in gallery[1:]:
        nxt = ThetaSpec(th2.norm, h)
        l0, l1 = step_constants(m, prev, nxt)
        step = max(step, l0 * l1)
        prev = nxt
    dist = dist or (lambda a, b, th: distance(m, a, b, th))
    fwd = bwd = Frac(0)
    witnesses = []
    for x, y in pairs:
        a, b = dist(x, y, th1), dist(x, y, th2)
        if a == 0 and b == 0:
            continue
        if a == 0 or b == 0:
            raise InternalInconsistency("distances disagree on coincidence")
        witnesses.append((x, y, a, b))
        fwd, bwd = max(fwd, b / a), max(bwd, a / b)
    if th1 == th2:
        return {"forward": Frac(1), "backward": Frac(1), "gallery": 0, "bound": Frac(1), "witnesses": witnesses}
    return {"forward": fwd, "backward": bwd, "gallery": n, "bound": step ** n, "witnesses": witnesses}


# --- discreteness -------------------------------------------------------------------


def lambda_point(m, beta):
    """The type-0 vertex at coordinates 0 of the branch at the wall {beta = 1}."""
    return MasurePoint((FoldingLetter(m.table.positive_index(beta), -1, 1),), la.zeros(m.real.d))


def discreteness_probe(m, levels=5, norm=L1):
    """Data on whether type-0 vertices accumulate at 0 for d_+.

    For finite Weyl groups the minimal positive d_+ spacing around 0 is reported. Otherwise
    roots beta_m are chosen so that the vertices lambda_m branching at {beta_m = 1}
    approach 0 for d_+ while their negative retractions beta_m^vee grow.
    Branches are read from m's table; m itself is not modified.
    """
    real = m.real
    xi = standard_xi(real, norm)
    zero = MasurePoint((), la.zeros(real.d))
    if real.finite_type:
        spacing = _finite_spacing(m, xi.plus)
        return {"discrete": True, "min_spacing": spacing}
    from .masure_sim import Masure

    scratch = Masure(m.config)
    seq = []
    for beta in m.table.positive:
        scratch.register((FoldingLetter(m.table.positive_index(beta), -1, 1),))
        lam = lambda_point(scratch, beta)
        dp = distance(scratch, lam, zero, xi.plus)
        cor = norm_eval(L1, beta.coroot)
        if seq and not (dp < seq[-1]["d_plus"] and cor > seq[-1]["coroot_norm"]):
            continue
        rho_minus = scratch.retract(lam, xi.minus.germ)
        seq.append(
            {
                "root": beta.coords,
                "d_plus": dp,
                "d_mixed": distance_mixed(scratch, lam, zero, xi),
                "rho_minus": rho_minus,
                "coroot_norm": cor,
                "point": lam,
            }
        )
        if len(seq) == levels:
            break
    if len(seq) < levels:
        raise HeightBoundExhausted(
            f"only {len(seq)} separating levels found with roots of height <= {m.table.height_bound}"
        )
    return {"discrete": False, "levels": seq, "min_mixed": min(s["d_mixed"] for s in seq)}


def _finite_spacing(m, th, radius=2):
    """Least positive d_th from 0 to type-0 vertices with small coordinates, branched or not."""
    from .masure_sim import Masure

    real = m.real
    zero = MasurePoint((), la.zeros(real.d))
    scratch = Masure(m.config)
    best = None
    span = range(-radius, radius + 1)
    cands = [MasurePoint((), la.vec(c)) for c in itertools.product(span, repeat=real.d)]
    for idx in range(len(m.table.positive)):
        for k in range(-radius, 0):
            word = scratch.register((FoldingLetter(idx, k, 1),))
            cands.append(scratch._canon(word, la.zeros(real.d)))
    for p in cands:
        v = distance(scratch, p, zero, th)
        if v > 0 and (best is None or v < best):
            best = v
    return best


# --- retracted segments ---------------------------------------------------------------


def segment_image(m, x, u):
    """Breakpoints (t, rho_-(x + t u)) of the retracted segment, t in [0,1]."""
    u = la.vec(u)
    _check_dominant(m.real, u)
    gm = germ(m.real, -1)
    ts = {Frac(0), Frac(1)}
    if x.word:
        beta = m.chain_root(x.word)
        bu = beta(u)
        if bu != 0:
            for l in x.word:
                t = -(beta(x.b) + l.k) / bu
                if 0 < t < 1:
                    ts.add(t)
    gp = germ(m.real, 1)
    return [(t, m.retract(translate(m, x, gp, la.scale(t, u)), gm)) for t in sorted(ts)]


def path_retract_check(m, x, u, times=None):
    """u-path, coroot-cone increment and two-time bound for rho_- of [x, x + u]."""
    u = la.vec(u)
    pts = segment_image(m, x, u)
    upath = is_u_path(m.real, pts, u)
    inc = la.sub(u, la.sub(pts[-1][1], pts[0][1]))
    increment_ok = in_coroot_cone(m.real, inc)
    gp, gm = germ(m.real, 1), germ(m.real, -1)
    r0 = pts[0][1]

    def rho(t):
        return m.retract(translate(m, x, gp, la.scale(t, u)), gm)

    times = sorted(Frac(t) for t in (times or [0, Frac(1, 4), Frac(1, 2), 1]))
    two_time = True
    for t, t2 in itertools.combinations_with_replacement(times, 2):
        lhs = norm_eval(L1, la.sub(rho(t), r0))
        rhs = t * norm_eval(L1, u) + norm_eval(L1, la.sub(la.sub(rho(t2), r0), la.scale(t2, u)))
        if lhs > rhs:
            two_time = False
    return {
        "breakpoints": pts,
        "u_path": upath,
        "increment": inc,
        "increment_ok": increment_ok,
        "two_time_ok": two_time,
    }
