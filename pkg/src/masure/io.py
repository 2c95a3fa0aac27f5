"""Literals, run configuration and JSON serialization with exact rationals."""
import dataclasses
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction as Frac
from pathlib import Path

from .apartment import HalfSpaceSpec, PolyNorm
from .errors import ConfigInvalid, NotTrueWall, ViolatesGcmAxioms
from .masure_sim import FoldingLetter, Masure, MasurePoint, make_config
from .metrics import ThetaSpec, XiSpec
from .rootsys import PRESETS, SectorGermId, parse_germ, validate_gcm

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


def frac(text):
    if isinstance(text, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(text, (int, Frac)):
        return Frac(text)
    if isinstance(text, str):
        return Frac(text.strip())
    raise ValueError(f"expected a rational string, got {text!r}")


def frac_str(x):
    x = Frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def decimal_str(x, places):
    x = Frac(x)
    q = round(x * 10**places)
    sign = "-" if q < 0 else ""
    q = abs(q)
    whole, part = divmod(q, 10**places)
    return f"{sign}{whole}.{part:0{places}d}" if places else f"{sign}{whole}"


# --- literals ----------------------------------------------------------------


def word_literal(word):
    return [[l.root, l.k, l.sheet] for l in word]


def parse_word(obj):
    try:
        letters = [(int(i), frac(k), int(j)) for i, k, j in obj]
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid(f"bad apartment word {obj!r}: {exc}") from None
    for _, k, _ in letters:
        if k.denominator != 1:
            raise NotTrueWall(f"level {k} is not an integer (ghost wall)")
    return tuple(FoldingLetter(i, int(k), j) for i, k, j in letters)


def point_literal(p):
    return {"w": word_literal(p.word), "b": [frac_str(x) for x in p.b]}


def parse_point_raw(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        return parse_word(obj["w"]), tuple(frac(x) for x in obj["b"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigInvalid(f"bad point literal {obj!r}: {exc}") from None


def parse_point(m, obj):
    word, b = parse_point_raw(obj)
    return m.canonicalize(word, b)


def parse_vector(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        return tuple(frac(x) for x in obj)
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid(f"bad vector literal {obj!r}: {exc}") from None


def parse_theta(real, obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        return ThetaSpec(PolyNorm(obj.get("norm", "l1")), parse_germ(real, obj["germ"]))
    except (KeyError, AttributeError, ValueError) as exc:
        raise ConfigInvalid(f"bad theta literal {obj!r}: {exc}") from None


def parse_xi(real, obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    if isinstance(obj, dict):
        obj = [obj["plus"], obj["minus"]]
    if len(obj) != 2:
        raise ConfigInvalid("a xi literal is a pair of theta literals")
    return XiSpec(parse_theta(real, obj[0]), parse_theta(real, obj[1]))


def parse_halfspace(table, obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    return HalfSpaceSpec(table.by_coords(tuple(int(c) for c in obj["root"])), frac(obj["k"]))


def halfspace_literal(h):
    return {"root": list(h.root.coords), "k": frac_str(h.k)}


# --- configuration -----------------------------------------------------------------


@dataclass
class RunConfig:
    preset: str | None = "a1"
    matrix: list | None = None
    thickness: int = 2
    height_bound: int = 20
    depth: int = 4
    norm: str = "l1"
    seed: int = 0
    output: str = "json"
    decimal: int | None = None
    extra: dict = field(default_factory=dict)

    def validate(self):
        if (self.preset is None) == (self.matrix is None):
            raise ConfigInvalid("give exactly one of preset and matrix")
        if self.preset is not None and self.preset not in PRESETS:
            raise ConfigInvalid(f"unknown preset {self.preset!r}; known: {sorted(PRESETS)}")
        if self.matrix is not None:
            try:
                validate_gcm(self.matrix)
            except ViolatesGcmAxioms as exc:
                raise ConfigInvalid(f"matrix rejected: {exc}") from None
        for name, lo in (("thickness", 2), ("height_bound", 1), ("depth", 0)):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < lo:
                raise ConfigInvalid(f"{name} must be an integer >= {lo}, got {v!r}")
        if self.norm not in ("l1", "linf"):
            raise ConfigInvalid(f"norm must be l1 or linf, got {self.norm!r}")
        if not isinstance(self.seed, int):
            raise ConfigInvalid("seed must be an integer")
        if self.output not in ("json", "csv"):
            raise ConfigInvalid(f"output must be json or csv, got {self.output!r}")
        if self.decimal is not None and (not isinstance(self.decimal, int) or self.decimal < 0):
            raise ConfigInvalid("decimal must be a nonnegative integer")
        return self

    def realization(self):
        return validate_gcm(self.matrix if self.matrix is not None else PRESETS[self.preset])

    def masure_config(self):
        return make_config(self.realization(), self.height_bound, self.thickness, self.depth)

    def to_dict(self):
        d = dataclasses.asdict(self)
        if not d["extra"]:
            del d["extra"]
        return d


def config_from_dict(obj):
    names = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = set(obj) - names
    if unknown:
        raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
    obj = dict(obj)
    if "matrix" in obj and "preset" not in obj:
        obj["preset"] = None
    return RunConfig(**obj).validate()


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigInvalid(f"cannot read config {path}: {exc}") from None
    try:
        obj = tomllib.loads(text) if path.suffix == ".toml" else json.loads(text)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as exc:
        raise ConfigInvalid(f"cannot parse config {path}: {exc}") from None
    return config_from_dict(obj)


# --- masure files ---------------------------------------------------------------------


def masure_to_dict(m, cfg):
    return {"config": cfg.to_dict(), "apartments": [word_literal(w) for w in m.apartments if w]}


def masure_from_dict(obj, freeze=True):
    cfg = config_from_dict(obj["config"])
    m = Masure(cfg.masure_config())
    for w in obj.get("apartments", []):
        m.register(parse_word(w))
    return (m.freeze() if freeze else m), cfg


def save_masure(path, m, cfg):
    Path(path).write_text(dumps(masure_to_dict(m, cfg)))


def load_masure(path, freeze=True):
    return masure_from_dict(json.loads(Path(path).read_text()), freeze)


# --- JSON ------------------------------------------------------------------------------


def to_jsonable(obj, decimal=None):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Frac):
        return frac_str(obj)
    if isinstance(obj, MasurePoint):
        return point_literal(obj)
    if isinstance(obj, SectorGermId):
        return obj.literal()
    if isinstance(obj, (ThetaSpec, XiSpec)):
        return obj.literal()
    if isinstance(obj, HalfSpaceSpec):
        return halfspace_literal(obj)
    if isinstance(obj, dict):
        out = {}
        for k, v in obj.items():
            out[str(k)] = to_jsonable(v, decimal)
            if decimal is not None and isinstance(v, Frac):
                out[f"{k}_decimal"] = decimal_str(v, decimal)
        return out
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v, decimal) for v in obj]
    if dataclasses.is_dataclass(obj):
        return to_jsonable({f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)}, decimal)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, decimal=None):
    return json.dumps(to_jsonable(obj, decimal), sort_keys=True, indent=2) + "\n"

