"""Acceptance checks: thirteen exact or explicitly bounded properties per preset."""
import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction as Frac

import networkx as nx

from . import linalg as la
from .apartment import L1, HalfSpaceSpec, enclose, norm_eval
from .errors import RootOutsideTable
from .masure_sim import Masure, MasurePoint, make_config, random_masure, random_point
from .metrics import (
    ThetaSpec,
    chi,
    chi_modulus,
    discreteness_probe,
    distance,
    distance_oracle,
    distance_result,
    equivalence_constant,
    geodesic,
    geodesic_family,
    mixed_bound_k,
    path_retract_check,
    ray_exit,
    standard_xi,
    theta,
    translate,
    upsilon,
)
from .rootsys import germ, preset

PRESET_NAMES = ("a1", "affine-a1", "hyp23")

CRITERIA = {
    1: "enclosure rounds levels up",
    2: "metric axioms",
    3: "tree ground truth",
    4: "norm restriction on the root apartment",
    5: "retraction contract",
    6: "geodesics",
    7: "equivalence constants",
    8: "oracle agreement",
    9: "topology separation",
    10: "mixed-distance bound",
    11: "u-path property",
    12: "contraction",
    13: "splitting",
}


@dataclass
class AcceptanceConfig:
    height_bound: int = 20
    depth: int = 4
    thickness: int = 2
    seed: int = 0
    pairs: int = 200
    pool: int = 16
    words: int = 10
    separation_height: int = 200
    oracle_instances: int = 50


@dataclass
class CriterionResult:
    criterion: int
    preset: str
    passed: bool
    checked: int
    detail: dict = field(default_factory=dict)


class Context:
    """One preset: a random masure, a point pool, and a distance cache."""

    def __init__(self, name, cfg, seed):
        self.name = name
        self.cfg = cfg
        self.real = preset(name)
        self.mcfg = make_config(self.real, cfg.height_bound, cfg.thickness, cfg.depth)
        self.rng = random.Random(f"{seed}:{name}")
        self.masure = random_masure(self.mcfg, self.rng, n_words=cfg.words, root_height=4)
        self.pool = [random_point(self.masure, self.rng) for _ in range(cfg.pool)]
        self.pool += [MasurePoint((), la.zeros(self.real.d))]
        self.xi = standard_xi(self.real)
        self._cache = {}

    def d(self, x, y, th, m=None):
        m = m or self.masure
        key = (id(m), x, y, th)
        if key not in self._cache:
            self._cache[key] = distance(m, x, y, th)
        return self._cache[key]

    def dxi(self, x, y):
        return self.d(x, y, self.xi.plus) + self.d(x, y, self.xi.minus)

    def pairs(self, count):
        pts = self.pool
        allp = list(itertools.combinations(range(len(pts)), 2))
        self.rng.shuffle(allp)
        out = [(pts[i], pts[j]) for i, j in allp]
        while len(out) < count:
            out.append((self.rng.choice(pts), self.rng.choice(pts)))
        return out[:count]

    def dominant(self, scale=2):
        """A random dominant vector with small rational entries."""
        rv = self.real.rho_vee
        while True:
            q = self.rng.choice((1, 2))
            v = tuple(Frac(self.rng.randint(-scale * q, scale * q), q) for _ in range(self.real.d))
            if self.real.is_dominant(v):
                return v
            v = la.add(v, la.scale(self.rng.randint(0, 3), rv))
            if self.real.is_dominant(v):
                return v

    def germs(self, max_len=2):
        out = []
        for sign in (1, -1):
            for n in range(max_len + 1):
                for word in itertools.product(range(self.real.n), repeat=n):
                    g = germ(self.real, sign, word)
                    if g not in out and len(g.w) == n:
                        out.append(g)
        return out

    def usable_germs(self, max_len=2):
        """Germs whose sides are readable in the table for every branch root."""
        out = []
        for g in self.germs(max_len):
            try:
                for w in self.masure.apartments:
                    if w:
                        self.masure.germ_in(w, g)
            except RootOutsideTable:
                continue
            out.append(g)
        return out


# --- criteria ----------------------------------------------------------------------


def c1_enclosure(ctx):
    fails = []
    table = ctx.mcfg.table
    for _ in range(50):
        beta = ctx.rng.choice(table.roots)
        k = Frac(ctx.rng.randint(-40, 40), ctx.rng.randint(1, 7))
        got = enclose(table, [HalfSpaceSpec(beta, k)])
        want = -((-k.numerator) // k.denominator)
        if len(got) != 1 or got[0].root != beta or got[0].k != want:
            fails.append((beta.coords, k))
    return CriterionResult(1, ctx.name, not fails, 50, {"failures": fails})


def c2_metric(ctx):
    pts = ctx.pool
    m = ctx.masure
    bad = []
    n = 0
    for th in (ctx.xi.plus, ctx.xi.minus):
        for x, y in itertools.product(pts, repeat=2):
            dxy = ctx.d(x, y, th)
            n += 1
            if dxy != ctx.d(y, x, th):
                bad.append(("symmetry", th.germ.literal()))
            if (dxy == 0) != m.points_equal(x, y):
                bad.append(("identity", th.germ.literal()))
        for x, y, z in itertools.permutations(pts, 3):
            if ctx.d(x, z, th) > ctx.d(x, y, th) + ctx.d(y, z, th):
                bad.append(("triangle", th.germ.literal()))
    for x, y, z in itertools.permutations(pts, 3):
        if ctx.dxi(x, z) > ctx.dxi(x, y) + ctx.dxi(y, z):
            bad.append(("triangle", "xi"))
    return CriterionResult(2, ctx.name, not bad, n, {"violations": bad[:10]})


def tree_graph(m, radius):
    """Vertices at half-integers of every apartment, glued by canonical form."""
    G = nx.Graph()
    half = Frac(1, 2)
    steps = range(-2 * radius, 2 * radius)
    for w in m.apartments:
        for s in steps:
            a = m._canon(w, (s * half,))
            b = m._canon(w, ((s + 1) * half,))
            G.add_edge(a, b)
    return G


def c3_tree(ctx):
    if ctx.name != "a1":
        return None
    rng = random.Random(f"{ctx.cfg.seed}:tree")
    mcfg = make_config(ctx.real, ctx.cfg.height_bound, ctx.cfg.thickness, 3)
    m = random_masure(mcfg, rng, n_words=9, depth=3, level_range=3)
    radius = 6
    G = tree_graph(m, radius)
    pts = [random_point(m, rng, radius=3) for _ in range(21)]
    pairs = list(itertools.combinations(pts, 2))[: ctx.cfg.pairs]
    bad = []
    for x, y in pairs:
        truth = Frac(nx.shortest_path_length(G, x, y), 2)
        for sign in (1, -1):
            got = ctx.d(x, y, theta(ctx.real, L1, sign), m)
            if got != truth:
                bad.append((x, y, sign, got, truth))
    detail = {"depth": max(len(w) for w in m.apartments), "violations": bad[:5]}
    return CriterionResult(3, ctx.name, not bad, len(pairs), detail)


def c4_norm(ctx):
    d = ctx.real.d
    rng = ctx.rng
    bad = []

    def vec():
        q = rng.choice((1, 2, 3))
        return tuple(Frac(rng.randint(-3 * q, 3 * q), q) for _ in range(d))

    def root(v):
        return MasurePoint((), v)

    zero = root(la.zeros(d))
    n = 0
    for g in ctx.usable_germs(1):
        th = ThetaSpec(ctx.xi.plus.norm, g)
        for _ in range(12):
            x, y, s, v = vec(), vec(), vec(), vec()
            t = Frac(rng.randint(0, 6), rng.randint(1, 3))
            dxy = ctx.d(root(x), root(y), th)
            if dxy != ctx.d(root(la.add(x, s)), root(la.add(y, s)), th):
                bad.append(("difference", g.literal()))
            if dxy != ctx.d(zero, root(la.sub(y, x)), th):
                bad.append(("difference", g.literal()))
            nv = ctx.d(zero, root(v), th)
            if ctx.d(zero, root(la.scale(t, v)), th) != t * nv:
                bad.append(("homogeneity", g.literal()))
            if ctx.d(zero, root(la.add(v, s)), th) > nv + ctx.d(zero, root(s), th):
                bad.append(("subadditivity", g.literal()))
            n += 1
    return CriterionResult(4, ctx.name, not bad, n, {"violations": bad[:5]})


def c5_retraction(ctx):
    m = ctx.masure
    germs = ctx.usable_germs(1)
    bad = []
    pairs = ctx.pairs(ctx.cfg.pairs)
    for k, (x, y) in enumerate(pairs):
        g = germs[k % len(germs)]
        th = ThetaSpec(ctx.xi.plus.norm, g)
        u = ctx.dominant()
        moved = translate(m, x, g, u)
        if m.retract(moved, g) != la.add(m.retract(x, g), g.direction(u)):
            bad.append(("translation", x, g.literal()))
        rx, ry = MasurePoint((), m.retract(x, g)), MasurePoint((), m.retract(y, g))
        if ctx.d(rx, ry, th) > ctx.d(x, y, th):
            bad.append(("lipschitz", x, y, g.literal()))
    return CriterionResult(5, ctx.name, not bad, len(pairs), {"violations": bad[:5]})


def c6_geodesics(ctx):
    m = ctx.masure
    th = ctx.xi.plus
    ts = [Frac(0), Frac(1, 5), Frac(1, 3), Frac(1, 2), Frac(3, 4), Frac(1)]
    bad = []
    pairs = ctx.pairs(20)
    for x, y in pairs:
        res = distance_result(m, x, y, th)
        path = {t: geodesic(m, x, y, th, t, res) for t in ts}
        if not (m.points_equal(path[Frac(0)], x) and m.points_equal(path[Frac(1)], y)):
            bad.append(("endpoints", x, y))
        for t, s in itertools.combinations(ts, 2):
            if ctx.d(path[t], path[s], th) != abs(t - s) * res.value:
                bad.append(("isometry", x, y, t, s))
    detail = {"violations": bad[:5]}
    if ctx.name == "hyp23":
        xp = la.unit(ctx.real.d, 0)
        res = distance_result(m, MasurePoint((), la.zeros(ctx.real.d)), MasurePoint((), xp), th)
        a1 = norm_eval(th.norm, res.witness.u) / res.value
        p0 = geodesic_family(m, xp, th, 0, a1 / 2, res)
        ph = geodesic_family(m, xp, th, Frac(1, 2), a1 / 2, res)
        distinct = p0 != ph
        iso = True
        for z in (Frac(0), Frac(1, 3), Frac(1, 2), Frac(1)):
            pts = {t: MasurePoint((), geodesic_family(m, xp, th, z, t, res)) for t in ts}
            for t, s in itertools.combinations(ts, 2):
                if ctx.d(pts[t], pts[s], th) != abs(t - s) * res.value:
                    iso = False
        detail.update({"gamma_0": p0, "gamma_half": ph, "distinct": distinct, "family_isometric": iso})
        if not (distinct and iso):
            bad.append("family")
    return CriterionResult(6, ctx.name, not bad, len(pairs), detail)


def c7_equivalence(ctx):
    m = ctx.masure
    germs = ctx.usable_germs(2)
    rows = []
    bad = []
    pairs = ctx.pairs(30)
    # per sign: the identity germ against the first germs at gallery distance 1 and 2
    steps = []
    for sign in (1, -1):
        base = germ(ctx.real, sign)
        for n in (1, 2):
            far = [g for g in germs if g.sign == sign and m.gallery_distance(base, g) == n]
            if far:
                steps.append((base, far[0]))
    for g1, g2 in steps:
        th1 = ThetaSpec(ctx.xi.plus.norm, g1)
        th2 = ThetaSpec(ctx.xi.plus.norm, g2)
        for a, b in ((th1, th2), (th2, th1)):
            rep = equivalence_constant(m, a, b, pairs, ctx.d)
            rows.append({"from": a.germ, "to": b.germ, "n": rep["gallery"], "ratio": rep["forward"], "bound": rep["bound"]})
            if rep["forward"] > rep["bound"]:
                bad.append((a.germ.literal(), b.germ.literal()))
    return CriterionResult(7, ctx.name, not bad and bool(rows), len(pairs) * len(rows), {"rows": rows, "violations": bad})


def c8_oracle(ctx):
    m = ctx.masure
    rng = random.Random(f"{ctx.cfg.seed}:{ctx.name}:oracle")
    bad = []
    exact = 0
    n = 0
    germs = [ctx.xi.plus.germ, ctx.xi.minus.germ]
    while n < ctx.cfg.oracle_instances:
        x = random_point(m, rng, radius=1, denominators=(1,))
        y = random_point(m, rng, radius=1, denominators=(1, 2))
        th = ThetaSpec(ctx.xi.plus.norm, germs[n % 2])
        res = distance_result(m, x, y, th)
        N = la.lcm_denominator(res.witness.u + res.witness.u2)
        # keep the brute-force search small
        if N > 2 or res.value > 16:
            continue
        o = distance_oracle(m, x, y, th, N)
        n += 1
        if o == res.value:
            exact += 1
        else:
            bad.append((x, y, th.germ.literal(), res.value, o, N))
    return CriterionResult(8, ctx.name, not bad, n, {"exact": exact, "violations": bad[:5]})


def c9_separation(ctx):
    if ctx.name != "hyp23":
        return None
    mcfg = make_config(ctx.real, ctx.cfg.separation_height, ctx.cfg.thickness, ctx.cfg.depth)
    rep = discreteness_probe(Masure(mcfg), levels=5)
    lv = rep["levels"]
    dplus = [s["d_plus"] for s in lv]
    rho = [norm_eval(L1, s["rho_minus"]) for s in lv]
    ok = (
        all(a > b for a, b in zip(dplus, dplus[1:]))
        and all(v > 0 for v in dplus)
        and all(a < b for a, b in zip(rho, rho[1:]))
        and min(s["d_mixed"] for s in lv) >= 1
    )
    detail = {
        "height_bound": ctx.cfg.separation_height,
        "roots": [s["root"] for s in lv],
        "d_plus": dplus,
        "rho_minus_l1": rho,
        "d_mixed": [s["d_mixed"] for s in lv],
    }
    return CriterionResult(9, ctx.name, ok, len(lv), detail)


def c10_mixed(ctx):
    m = ctx.masure
    u = ctx.real.rho_vee
    k = mixed_bound_k(ctx.real, u, ctx.xi)
    ell = 1 / min(la.dot(a, u) for a in ctx.real.roots)
    gp, gm = germ(ctx.real, 1), germ(ctx.real, -1)
    bad = []
    pairs = ctx.pairs(ctx.cfg.pairs)
    for a, x in pairs:
        rp, rm = MasurePoint((), m.retract(x, gp)), MasurePoint((), m.retract(x, gm))
        lhs = ctx.dxi(a, x)
        if lhs > k * (ctx.dxi(a, rm) + ctx.dxi(a, rp)):
            bad.append(("mixed", a, x))
        gap = norm_eval(L1, la.sub(rp.b, rm.b))
        for sign in (1, -1):
            T, _ = ray_exit(m, x, u, sign)
            if T > ell * gap:
                bad.append(("exit", x, sign))
    return CriterionResult(10, ctx.name, not bad, len(pairs), {"k": k, "ell": ell, "violations": bad[:5]})


def c11_upath(ctx):
    m = ctx.masure
    bad = []
    n = 0
    for x in ctx.pool:
        for _ in range(4):
            u = ctx.dominant()
            rep = path_retract_check(m, x, u)
            n += 1
            if not (rep["u_path"] and rep["increment_ok"] and rep["two_time_ok"]):
                bad.append((x, u, rep["u_path"], rep["increment_ok"], rep["two_time_ok"]))
    return CriterionResult(11, ctx.name, not bad, n, {"violations": bad[:5]})


def c12_contraction(ctx):
    m = ctx.masure
    u = ctx.real.rho_vee
    ts = [Frac(0), Frac(1, 4), Frac(1, 2), Frac(3, 4), Frac(1)]
    bad = []
    zero = MasurePoint((), la.zeros(ctx.real.d))
    for x in ctx.pool:
        T, y = ray_exit(m, x, u, 1)
        if chi(m, x, 0, u) != x:
            bad.append(("start", x))
        end = chi(m, x, 1, u)
        if end != MasurePoint((), y) or end.word:
            bad.append(("end", x))
        if upsilon(m, x, 1, u) != zero:
            bad.append(("upsilon", x))
        if not x.word and any(chi(m, x, t, u) != x for t in ts):
            bad.append(("fixed", x))
    table = chi_modulus(m, ctx.pool[:4], u, ts, ctx.xi, [Frac(1, 4), Frac(1, 2), Frac(1)], ctx.dxi)
    detail = {"modulus": [{"delta": dl, "omega": w} for dl, w in table], "violations": bad[:5]}
    return CriterionResult(12, ctx.name, not bad, len(ctx.pool), detail)


def c13_split(ctx):
    m = ctx.masure
    rng = random.Random(f"{ctx.cfg.seed}:{ctx.name}:split")
    words = [w for w in m.apartments if w] or [()]
    bad = []
    n = 0
    rows = []
    while n < 20:
        w = rng.choice(words)
        g = germ(ctx.real, rng.choice((1, -1)), [rng.randrange(ctx.real.n) for _ in range(rng.randint(0, 2))])
        try:
            pieces = m.split_apartment(w, g)
            dist = m.germ_distance(w, g)
        except RootOutsideTable:
            continue
        n += 1
        rows.append({"apartment": len(w), "germ": g, "n": dist, "pieces": len(pieces)})
        if len(pieces) > 2**dist:
            bad.append(("count", w, g.literal()))
        dirn = g.direction(ctx.real.rho_vee)
        for _ in range(10):
            b = tuple(Frac(rng.randint(-8, 8), 2) for _ in range(ctx.real.d))
            p = m._canon(w, b)
            hit = [pc for pc in pieces if all(c.holds(b) for c in pc.region)]
            if not hit:
                bad.append(("cover", w, b))
            for pc in hit:
                if m._canon(pc.host, b) != p:
                    bad.append(("host", w, b))
                if m.point_at(pc.chart, m.retract(p, g)) != p:
                    bad.append(("chart", w, b))
                # far along g the chart sits in the root apartment, which holds the germ
                far = la.scale(1000, dirn)
                if len(pc.chart.pieces) > 1 and pc.chart.locate(far).host != ():
                    bad.append(("germ", w, g.literal()))
    return CriterionResult(13, ctx.name, not bad, n, {"rows": rows, "violations": bad[:5]})


CHECKS = {
    1: c1_enclosure,
    2: c2_metric,
    3: c3_tree,
    4: c4_norm,
    5: c5_retraction,
    6: c6_geodesics,
    7: c7_equivalence,
    8: c8_oracle,
    9: c9_separation,
    10: c10_mixed,
    11: c11_upath,
    12: c12_contraction,
    13: c13_split,
}


def run_preset(name, cfg, criteria=None):
    ctx = Context(name, cfg, cfg.seed)
    out = []
    for num in criteria or sorted(CHECKS):
        t0 = time.perf_counter()
        res = CHECKS[num](ctx)
        if res is not None:
            res.detail["seconds"] = round(time.perf_counter() - t0, 2)
            out.append(res)
    return out


def run_acceptance(presets=PRESET_NAMES, cfg=None, criteria=None):
    cfg = cfg or AcceptanceConfig()
    results = []
    for name in presets:
        results.extend(run_preset(name, cfg, criteria))
    return results


def summarize(results):
    """One verdict per criterion over all presets where it applies."""
    out = {}
    for r in results:
        row = out.setdefault(r.criterion, {"name": CRITERIA[r.criterion], "passed": True, "presets": []})
        row["passed"] = row["passed"] and r.passed
        row["presets"].append(r.preset)
    return out
