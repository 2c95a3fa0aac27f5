"""Command-line front end: scenario commands with deterministic JSON reports."""
import argparse
import csv
import json
import sys
from fractions import Fraction as Frac

from . import __version__
from . import acceptance as acc
from .errors import ConfigInvalid, MasureError, RootOutsideTable
from .io import (
    RunConfig,
    config_from_dict,
    decimal_str,
    dumps,
    frac,
    frac_str,
    load_config,
    load_masure,
    parse_point,
    parse_point_raw,
    parse_theta,
    parse_vector,
    parse_word,
    parse_xi,
    save_masure,
)
from .masure_sim import Masure, MasurePoint, random_masure, random_point
from .metrics import (
    chi,
    discreteness_probe,
    distance,
    distance_result,
    equivalence_constant,
    geodesic,
    path_retract_check,
    ray_exit,
    standard_xi,
    translate,
    upsilon,
)
from .rootsys import germ_side, parse_germ

COMMANDS = (
    "distance",
    "retract",
    "translate",
    "geodesic",
    "split",
    "probe-discreteness",
    "probe-separation",
    "probe-equivalence",
    "probe-upath",
    "contract",
    "acceptance",
)

DEFAULT_TIMES = ("0", "1/4", "1/2", "3/4", "1")


def build_parser():
    p = argparse.ArgumentParser(prog="masure", description="Distances on branched masures.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML or JSON run configuration")
    common.add_argument("--preset")
    common.add_argument("--matrix", help="generalized Cartan matrix as JSON")
    common.add_argument("--thickness", type=int)
    common.add_argument("--height-bound", type=int, dest="height_bound")
    common.add_argument("--depth", type=int)
    common.add_argument("--norm", choices=("l1", "linf"))
    common.add_argument("--seed", type=int)
    common.add_argument("--decimal", type=int, help="add decimal renderings with this many places")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--masure", help="load a saved masure instance")
    common.add_argument("--save-masure", dest="save_masure", help="save the masure used")
    common.add_argument("--csv", help="also write sampled curves as CSV")
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name in ("distance", "retract", "translate", "geodesic", "probe-upath", "contract"):
            sp.add_argument("--from", dest="source", required=True, help="point literal")
        if name in ("distance", "geodesic"):
            sp.add_argument("--to", dest="target", required=True, help="point literal")
        if name in ("distance", "retract", "translate", "geodesic", "probe-equivalence"):
            sp.add_argument("--theta", help='e.g. {"norm":"l1","germ":"+e"}')
        if name == "distance":
            sp.add_argument("--xi", help="pair of theta literals; reports the mixed distance")
        if name in ("translate", "probe-upath", "contract"):
            sp.add_argument("--u", help="dominant vector literal")
        if name in ("geodesic", "contract"):
            sp.add_argument("--t", action="append", help="time in [0,1]; repeatable")
        if name == "split":
            sp.add_argument("--apartment", required=True, help="apartment word literal")
            sp.add_argument("--germ", required=True)
        if name in ("probe-discreteness", "probe-separation"):
            sp.add_argument("--levels", type=int, default=5)
        if name == "probe-equivalence":
            sp.add_argument("--theta2", required=True)
            sp.add_argument("--pairs", type=int, default=40)
        if name == "acceptance":
            sp.add_argument("--pairs", type=int, default=200)
            sp.add_argument("--criterion", type=int, action="append")
    return p


def resolve_config(args):
    base = load_config(args.config).to_dict() if args.config else RunConfig().to_dict()
    if args.preset or args.matrix:
        base["preset"] = args.preset
        base["matrix"] = json.loads(args.matrix) if args.matrix else None
    for key in ("thickness", "height_bound", "depth", "norm", "seed", "decimal"):
        v = getattr(args, key)
        if v is not None:
            base[key] = v
    presets = None
    if args.command == "acceptance" and (args.preset or args.config):
        presets = base.get("preset")
    return config_from_dict(base), presets


def build_masure(args, cfg, literals=(), words=()):
    if args.masure:
        m, _ = load_masure(args.masure, freeze=False)
    else:
        m = Masure(cfg.masure_config())
    for lit in literals:
        m.register(parse_point_raw(lit)[0])
    for w in words:
        m.register(w)
    m.freeze()
    if args.save_masure:
        save_masure(args.save_masure, m, cfg)
    return m


def _theta(real, cfg, text, default_germ="+e"):
    if text:
        return parse_theta(real, text)
    return parse_theta(real, {"norm": cfg.norm, "germ": default_germ})


def _times(args):
    return [frac(t) for t in (args.t or DEFAULT_TIMES)]


def _u(real, args):
    return parse_vector(args.u) if args.u else real.rho_vee


def cmd_distance(args, cfg):
    real = cfg.realization()
    m = build_masure(args, cfg, (args.source, args.target))
    x, y = parse_point(m, args.source), parse_point(m, args.target)
    if args.xi:
        xi = parse_xi(real, args.xi)
        rp, rm = distance_result(m, x, y, xi.plus), distance_result(m, x, y, xi.minus)
        return {"value": rp.value + rm.value, "xi": xi, "plus": _res(rp), "minus": _res(rm)}
    th = _theta(real, cfg, args.theta)
    out = _res(distance_result(m, x, y, th))
    out["theta"] = th
    return out


def _res(r):
    return {"value": r.value, "witness": {"u": r.witness.u, "u2": r.witness.u2}, "meet": r.meet}


def cmd_retract(args, cfg):
    real = cfg.realization()
    m = build_masure(args, cfg, (args.source,))
    x = parse_point(m, args.source)
    th = _theta(real, cfg, args.theta)
    return {"point": x, "germ": th.germ, "retraction": m.retract(x, th.germ)}


def cmd_translate(args, cfg):
    real = cfg.realization()
    m = build_masure(args, cfg, (args.source,))
    x = parse_point(m, args.source)
    th = _theta(real, cfg, args.theta)
    u = _u(real, args)
    return {"point": x, "germ": th.germ, "u": u, "result": translate(m, x, th.germ, u)}


def cmd_geodesic(args, cfg):
    real = cfg.realization()
    m = build_masure(args, cfg, (args.source, args.target))
    x, y = parse_point(m, args.source), parse_point(m, args.target)
    th = _theta(real, cfg, args.theta)
    res = distance_result(m, x, y, th)
    samples = [{"t": t, "point": geodesic(m, x, y, th, t, res)} for t in _times(args)]
    rows = [[s["t"], distance(m, x, s["point"], th)] for s in samples]
    _write_csv(args, ["t", "distance_from_start"], rows, cfg)
    return {"value": res.value, "witness": {"u": res.witness.u, "u2": res.witness.u2}, "samples": samples}


def cmd_split(args, cfg):
    real = cfg.realization()
    word = parse_word(json.loads(args.apartment))
    m = build_masure(args, cfg, words=(word,))
    g = parse_germ(real, args.germ)
    pieces = m.split_apartment(word, g)
    out = []
    for pc in pieces:
        out.append(
            {
                "region": [{"covector": c.covector, "k": c.k, "strict": c.strict} for c in pc.region],
                "host": [[l.root, l.k, l.sheet] for l in pc.host],
                "chart_pieces": len(pc.chart.pieces),
            }
        )
    return {"apartment": json.loads(args.apartment), "germ": g, "n": m.germ_distance(word, g), "pieces": out}


def cmd_probe_discreteness(args, cfg):
    m = build_masure(args, cfg)
    rep = discreteness_probe(m, args.levels, cfg.norm)
    if rep["discrete"]:
        return rep
    rows = [
        {"m": i + 1, "root": s["root"], "d_plus": s["d_plus"], "rho_minus": s["rho_minus"], "rho_minus_l1": s["coroot_norm"]}
        for i, s in enumerate(rep["levels"])
    ]
    _write_csv(args, ["m", "d_plus", "rho_minus_l1"], [[r["m"], r["d_plus"], r["rho_minus_l1"]] for r in rows], cfg)
    return {"discrete": False, "levels": rows}


def cmd_probe_separation(args, cfg):
    m = build_masure(args, cfg)
    rep = discreteness_probe(m, args.levels, cfg.norm)
    if rep["discrete"]:
        return {"discrete": True, "min_spacing": rep["min_spacing"]}
    rows = [
        {"m": i + 1, "root": s["root"], "d_plus": s["d_plus"], "d_mixed": s["d_mixed"]}
        for i, s in enumerate(rep["levels"])
    ]
    _write_csv(args, ["m", "d_plus", "d_mixed"], [[r["m"], r["d_plus"], r["d_mixed"]] for r in rows], cfg)
    return {"levels": rows, "min_mixed": rep["min_mixed"], "lower_bound": Frac(1)}


def cmd_probe_equivalence(args, cfg):
    import random

    real = cfg.realization()
    rng = random.Random(cfg.seed)
    th1 = _theta(real, cfg, args.theta)
    th2 = parse_theta(real, args.theta2)
    mcfg = cfg.masure_config()

    def readable(beta):
        # both germs must have a side readable in the table
        try:
            for g in (th1.germ, th2.germ):
                germ_side(mcfg.table, beta, g)
        except RootOutsideTable:
            return False
        return True

    m = random_masure(mcfg, rng, n_words=8, root_height=4, keep=readable)
    pts = [random_point(m, rng) for _ in range(12)]
    pairs = [(rng.choice(pts), rng.choice(pts)) for _ in range(args.pairs)]
    fwd = equivalence_constant(m, th1, th2, pairs)
    bwd = equivalence_constant(m, th2, th1, pairs)
    return {
        "theta": th1,
        "theta2": th2,
        "gallery": fwd["gallery"],
        "forward": fwd["forward"],
        "forward_bound": fwd["bound"],
        "backward": bwd["forward"],
        "backward_bound": bwd["bound"],
        "within_bounds": fwd["forward"] <= fwd["bound"] and bwd["forward"] <= bwd["bound"],
        "pairs": len(pairs),
    }


def cmd_probe_upath(args, cfg):
    real = cfg.realization()
    m = build_masure(args, cfg, (args.source,))
    x = parse_point(m, args.source)
    rep = path_retract_check(m, x, _u(real, args))
    rep["breakpoints"] = [{"t": t, "point": p} for t, p in rep["breakpoints"]]
    return rep


def cmd_contract(args, cfg):
    real = cfg.realization()
    m = build_masure(args, cfg, (args.source,))
    x = parse_point(m, args.source)
    u = _u(real, args)
    T, y = ray_exit(m, x, u, 1)
    samples = [{"t": t, "chi": chi(m, x, t, u), "upsilon": upsilon(m, x, t, u)} for t in _times(args)]
    xi = standard_xi(real, cfg.norm)
    rows = [[s["t"], distance(m, x, s["chi"], xi.plus)] for s in samples]
    _write_csv(args, ["t", "d_plus_from_start"], rows, cfg)
    return {"exit_time": T, "exit_point": MasurePoint((), y), "samples": samples}


def cmd_acceptance(args, cfg, presets):
    acfg = acc.AcceptanceConfig(
        height_bound=cfg.height_bound, depth=cfg.depth, thickness=cfg.thickness, seed=cfg.seed, pairs=args.pairs
    )
    names = [presets] if presets else list(acc.PRESET_NAMES)
    results = acc.run_acceptance(names, acfg, args.criterion)
    summary = acc.summarize(results)
    for r in results:
        r.detail.pop("seconds", None)
    return {
        "presets": names,
        "criteria": {str(k): v for k, v in sorted(summary.items())},
        "results": [
            {"criterion": r.criterion, "preset": r.preset, "passed": r.passed, "checked": r.checked, "detail": r.detail}
            for r in results
        ],
        "all_passed": all(v["passed"] for v in summary.values()),
    }


HANDLERS = {
    "distance": cmd_distance,
    "retract": cmd_retract,
    "translate": cmd_translate,
    "geodesic": cmd_geodesic,
    "split": cmd_split,
    "probe-discreteness": cmd_probe_discreteness,
    "probe-separation": cmd_probe_separation,
    "probe-equivalence": cmd_probe_equivalence,
    "probe-upath": cmd_probe_upath,
    "contract": cmd_contract,
}


def _write_csv(args, header, rows, cfg):
    if not args.csv:
        return
    places = cfg.decimal
    with open(args.csv, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        extra = [f"{h}_decimal" for h in header[1:]] if places is not None else []
        w.writerow(header + extra)
        for row in rows:
            cells = [frac_str(v) if isinstance(v, Frac) else v for v in row]
            if places is not None:
                cells += [decimal_str(v, places) for v in row[1:]]
            w.writerow(cells)


def run(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg, presets = resolve_config(args)
        if args.command == "acceptance":
            result = cmd_acceptance(args, cfg, presets)
            report_cfg = {**cfg.to_dict(), "preset": presets}
        else:
            result = HANDLERS[args.command](args, cfg)
            report_cfg = cfg.to_dict()
    except (MasureError, ValueError, KeyError, json.JSONDecodeError) as exc:
        err = exc if isinstance(exc, MasureError) else ConfigInvalid(str(exc))
        sys.stderr.write(json.dumps({"command": args.command, **err.to_dict()}, sort_keys=True) + "\n")
        return 2
    report = {"command": args.command, "config": report_cfg, "version": __version__, "result": result}
    text = dumps(report, cfg.decimal)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "acceptance" and not result["all_passed"]:
        return 1
    return 0


def main():
    sys.exit(run())
