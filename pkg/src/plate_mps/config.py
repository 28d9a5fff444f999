"""Flat ``section.key = value`` run configuration.

Example::

    domain.shape = circle
    material.nu = 0.33
    bc.default = clamped
    bc.arcs = pi 2*pi free
    scan.k_min = 2.5
    scan.k_max = 7.5

Numeric values accept arithmetic on literals and ``pi``.  Lists are comma
separated; ``bc.arcs`` is a ``;``-separated list of ``t_start t_end tag``.
"""

import ast
from dataclasses import dataclass, field, fields, replace
import math
import operator

from .basis import FB, PW, PlateMaterial
from .boundary import BoundaryCondition
from .geometry import StarDomain, make_circle, make_paper_shape2
from .solver import BasisSettings


class ConfigError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
    ast.USub: operator.neg,
    ast.UAdd: operator.pos,
}


def _arith(node):
    if isinstance(node, ast.Expression):
        return _arith(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return node.value
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
        return _OPS[type(node.op)](_arith(node.left), _arith(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
        return _OPS[type(node.op)](_arith(node.operand))
    raise ValueError("not an arithmetic expression")


def parse_float(text):
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return float(_arith(ast.parse(text.strip(), mode="eval")))
    except (SyntaxError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot read {text!r} as a number") from exc


def parse_int(text):
    v = parse_float(text)
    if v != int(v):
        raise ValueError(f"expected an integer, got {text!r}")
    return int(v)


def parse_bool(text):
    t = text.strip().lower()
    if t in ("true", "yes", "on", "1"):
        return True
    if t in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def parse_floats(text):
    return tuple(parse_float(v) for v in text.split(",") if v.strip())


def parse_optional_int(text):
    return None if text.strip().lower() in ("", "none", "auto") else parse_int(text)


def parse_kind(text):
    k = text.strip().upper()
    if k not in (PW, FB):
        raise ValueError(f"basis kind must be PW or FB, got {text!r}")
    return k


def parse_bc(text):
    return BoundaryCondition.parse(text).value


def parse_arcs(text):
    arcs = []
    for chunk in text.split(";"):
        parts = chunk.split()
        if not parts:
            continue
        if len(parts) != 3:
            raise ValueError(f"arc {chunk.strip()!r} must read 't_start t_end tag'")
        lo, hi = parse_float(parts[0]), parse_float(parts[1])
        if not lo < hi:
            raise ValueError(f"arc {chunk.strip()!r} has t_start >= t_end")
        arcs.append((lo, hi, parse_bc(parts[2])))
    return tuple(arcs)


@dataclass(frozen=True)
class DomainSpec:
    shape: str = "circle"
    radius: float = 1.0
    ax: tuple = ()
    bx: tuple = ()
    ay: tuple = ()
    by: tuple = ()

    def build(self):
        if self.shape == "circle":
            return make_circle(self.radius)
        if self.shape == "paper-shape2":
            return make_paper_shape2()
        if self.shape == "fourier":
            return StarDomain(self.ax, self.bx, self.ay, self.by, name="fourier")
        raise ValueError(f"unknown domain shape {self.shape!r}")


@dataclass(frozen=True)
class BCSpec:
    default: str = "clamped"
    arcs: tuple = ()


@dataclass(frozen=True)
class SamplingSpec:
    boundary: int = 2048
    interior: int = 1024
    seed: int = 1


@dataclass(frozen=True)
class ScanSpec:
    k_min: float = 2.0
    k_max: float = 8.0
    step: float = 0.01
    branches: int = 4
    dip_ratio: float = 0.1
    reg_eps: float = 1e-12
    log_parabola: bool = False


@dataclass(frozen=True)
class OutputSpec:
    directory: str = "plate_mps_out"
    resolution: int = 64


@dataclass(frozen=True)
class RunConfig:
    domain: DomainSpec = field(default_factory=DomainSpec)
    material: PlateMaterial = field(default_factory=PlateMaterial)
    bc: BCSpec = field(default_factory=BCSpec)
    basis: BasisSettings = field(default_factory=BasisSettings)
    sampling: SamplingSpec = field(default_factory=SamplingSpec)
    scan: ScanSpec = field(default_factory=ScanSpec)
    output: OutputSpec = field(default_factory=OutputSpec)

    def to_text(self):
        lines = []
        for key, (section, name, _, fmt) in KEYS.items():
            lines.append(f"{key} = {fmt(getattr(getattr(self, section), name))}")
        return "\n".join(lines) + "\n"


def _fmt_float(v):
    return repr(float(v))


def _fmt_floats(v):
    return ", ".join(repr(float(x)) for x in v)


def _fmt_arcs(v):
    return "; ".join(f"{lo!r} {hi!r} {tag}" for lo, hi, tag in v)


def _fmt_opt(v):
    return "auto" if v is None else str(v)


# key -> (section attribute, field name, parser, formatter)
KEYS = {
    "domain.shape": ("domain", "shape", str.strip, str),
    "domain.radius": ("domain", "radius", parse_float, _fmt_float),
    "domain.ax": ("domain", "ax", parse_floats, _fmt_floats),
    "domain.bx": ("domain", "bx", parse_floats, _fmt_floats),
    "domain.ay": ("domain", "ay", parse_floats, _fmt_floats),
    "domain.by": ("domain", "by", parse_floats, _fmt_floats),
    "material.D": ("material", "D", parse_float, _fmt_float),
    "material.rho": ("material", "rho", parse_float, _fmt_float),
    "material.h": ("material", "h", parse_float, _fmt_float),
    "material.T": ("material", "T", parse_float, _fmt_float),
    "material.nu": ("material", "nu", parse_float, _fmt_float),
    "bc.default": ("bc", "default", parse_bc, str),
    "bc.arcs": ("bc", "arcs", parse_arcs, _fmt_arcs),
    "basis.kind": ("basis", "kind", parse_kind, str),
    "basis.factor": ("basis", "factor", parse_float, _fmt_float),
    "basis.count": ("basis", "count", parse_optional_int, _fmt_opt),
    "basis.eva_ratio": ("basis", "eva_ratio", parse_float, _fmt_float),
    "basis.precondition": ("basis", "precondition", parse_bool, lambda v: str(v).lower()),
    "sampling.boundary": ("sampling", "boundary", parse_int, str),
    "sampling.interior": ("sampling", "interior", parse_int, str),
    "sampling.seed": ("sampling", "seed", parse_int, str),
    "scan.k_min": ("scan", "k_min", parse_float, _fmt_float),
    "scan.k_max": ("scan", "k_max", parse_float, _fmt_float),
    "scan.step": ("scan", "step", parse_float, _fmt_float),
    "scan.branches": ("scan", "branches", parse_int, str),
    "scan.dip_ratio": ("scan", "dip_ratio", parse_float, _fmt_float),
    "scan.reg_eps": ("scan", "reg_eps", parse_float, _fmt_float),
    "scan.log_parabola": ("scan", "log_parabola", parse_bool, lambda v: str(v).lower()),
    "output.directory": ("output", "directory", str.strip, str),
    "output.resolution": ("output", "resolution", parse_int, str),
}


def _validate(cfg, where):
    """Raise ConfigError pointing at the line of the first offending key."""

    def fail(key, msg):
        raise ConfigError(f"{key}: {msg}", where.get(key))

    positive = {
        "sampling.interior": cfg.sampling.interior,
        "scan.step": cfg.scan.step,
        "scan.branches": cfg.scan.branches,
        "scan.dip_ratio": cfg.scan.dip_ratio,
        "basis.factor": cfg.basis.factor,
        "basis.eva_ratio": cfg.basis.eva_ratio,
        "output.resolution": cfg.output.resolution,
        "domain.radius": cfg.domain.radius,
    }
    for key, v in positive.items():
        if not v > 0:
            fail(key, f"must be positive, got {v}")
    if cfg.sampling.boundary < 16:
        fail("sampling.boundary", "need at least 16 boundary samples")
    if cfg.basis.count is not None and cfg.basis.count < 2:
        fail("basis.count", "need at least 2 basis functions")
    if not cfg.scan.k_min > 0:
        fail("scan.k_min", "must be positive")
    if not cfg.scan.k_min < cfg.scan.k_max:
        fail("scan.k_max", "must exceed scan.k_min")
    if not 0 <= cfg.scan.reg_eps < 1:
        fail("scan.reg_eps", "must lie in [0, 1)")
    if cfg.domain.shape not in ("circle", "paper-shape2", "fourier"):
        fail("domain.shape", f"unknown shape {cfg.domain.shape!r}")
    if cfg.domain.shape == "fourier" and not (cfg.domain.ax or cfg.domain.ay):
        fail("domain.shape", "fourier shape needs domain.ax/bx/ay/by coefficients")
    if cfg.basis.precondition and cfg.basis.kind != PW:
        fail("basis.precondition", "preconditioning applies to PW bases only")


def parse_config(text, env_seed=None):
    """Parse config text; ``env_seed`` (a string) overrides ``sampling.seed``."""
    values = {}
    where = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r} (first set on line {where[key]})", lineno)
        section, name, parse, _ = KEYS[key]
        try:
            values[key] = parse(value)
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}", lineno) from None
        where[key] = lineno
    if env_seed is not None:
        try:
            values["sampling.seed"] = parse_int(env_seed)
        except ValueError as exc:
            raise ConfigError(f"PLATE_MPS_SEED: {exc}") from None

    sections = {}
    for key, v in values.items():
        section, name, _, _ = KEYS[key]
        sections.setdefault(section, {})[name] = v
    cfg = RunConfig()
    for section, updates in sections.items():
        try:
            cfg = replace(cfg, **{section: replace(getattr(cfg, section), **updates)})
        except ValueError as exc:
            # PlateMaterial validates itself on construction
            first = min(where[f"{section}.{n}"] for n in updates)
            raise ConfigError(str(exc), first) from None
    _validate(cfg, where)
    return cfg


def load_config(path, env_seed=None):
    with open(path) as fh:
        return parse_config(fh.read(), env_seed)


def config_fields():
    return {f.name for f in fields(RunConfig)}
