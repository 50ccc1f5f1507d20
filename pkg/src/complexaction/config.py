"""Run configuration: flat ``dotted.key = value`` text files.

Complex numbers are written ``a+bi`` (``0.5``, ``2i`` and ``1-0.5i`` are
all valid). Lines starting with ``#`` are comments. Shipped configurations
live next to this module in ``configs/`` and can be referred to by name.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from complexaction.engine import GaussianWavepacket, RootSearchConfig, default_fan
from complexaction.hierarchy import PhysicalConstants
from complexaction.integrator import IntegrationConfig
from complexaction.potentials import Potential, potential_from_dict
from complexaction.spectral import GridSpec
from complexaction.strategies import VelocityStrategy, strategy_from_name

CONFIG_DIR = Path(__file__).with_name("configs")


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


def parse_value(text: str):
    t = text.strip()
    if len(t) >= 2 and t[0] == t[-1] and t[0] in "\"'":
        return t[1:-1]
    low = t.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    try:
        return int(t)
    except ValueError:
        pass
    try:
        return float(t)
    except ValueError:
        pass
    if t[-1:] in ("i", "j") and " " not in t:
        try:
            return complex(t[:-1] + "j")
        except ValueError:
            pass
    return t


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, complex):
        return f"{v.real!r}{'+' if v.imag >= 0 else '-'}{abs(v.imag)!r}i"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        out[key.strip()] = parse_value(val)
    return out


def _section(flat: dict, prefix: str) -> dict:
    p = prefix + "."
    return {k[len(p):]: v for k, v in flat.items() if k.startswith(p)}


@dataclass(frozen=True)
class FanSpec:
    count: int = 2001
    width_sigmas: float = 5.0
    x_min: Optional[float] = None
    x_max: Optional[float] = None

    def points(self, w: GaussianWavepacket) -> np.ndarray:
        if self.x_min is not None and self.x_max is not None:
            return np.linspace(self.x_min, self.x_max, self.count)
        return default_fan(w, self.count, self.width_sigmas)


@dataclass(frozen=True)
class LineSpec:
    """Uniform real grid [x_min, x_max] with ``count`` points (endpoints included)."""

    x_min: float = -2.8
    x_max: float = 10.0
    count: int = 1281

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.count)


@dataclass(frozen=True)
class ReferenceSpec:
    grid: GridSpec = GridSpec()
    dt: float = 5e-4


@dataclass(frozen=True)
class InterferenceSpec:
    grid: LineSpec = LineSpec()
    # "airy", "none", or a numeric width past the caustic excluded from error norms
    exclusion: object = "airy"


@dataclass(frozen=True)
class RunConfig:
    name: str = "run"
    consts: PhysicalConstants = PhysicalConstants()
    wavepacket: GaussianWavepacket = GaussianWavepacket()
    potential: Potential = None
    strategy: VelocityStrategy = None
    truncation: int = 2
    fan: FanSpec = FanSpec()
    integration: IntegrationConfig = IntegrationConfig()
    reference: ReferenceSpec = ReferenceSpec()
    root_search: RootSearchConfig = RootSearchConfig()
    targets: LineSpec = LineSpec()
    interference: InterferenceSpec = InterferenceSpec()
    window: tuple = (-2.8, 10.0)
    output_dir: str = "out"
    flat: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def t_final(self) -> float:
        return self.integration.t_final

    def canonical_text(self) -> str:
        return "".join(f"{k} = {format_value(self.flat[k])}\n" for k in sorted(self.flat))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()

    def with_dt(self, dt: float) -> "RunConfig":
        flat = dict(self.flat)
        flat["integration.dt"] = dt
        flat["root_search.dt"] = dt
        return build_config(flat, self.name)


def _typed(section: dict, prefix: str, key: str, kind, default):
    full = f"{prefix}.{key}" if prefix else key
    if key not in section:
        return default
    v = section[key]
    try:
        if kind is int:
            if isinstance(v, bool) or (isinstance(v, float) and not v.is_integer()) or isinstance(v, (complex, str)):
                raise TypeError
            return int(v)
        if kind is float:
            if isinstance(v, (bool, complex, str)):
                raise TypeError
            return float(v)
        if kind is complex:
            if isinstance(v, (bool, str)):
                raise TypeError
            return complex(v)
        if kind is bool:
            if not isinstance(v, bool):
                raise TypeError
            return v
        return kind(v)
    except (TypeError, ValueError):
        raise ConfigError(full, f"expected {kind.__name__}, got {v!r}") from None


def _build(prefix, cls, section, kinds, **extra):
    """Instantiate ``cls`` from a config section, wrapping validation errors with the key path."""
    kwargs = {}
    for key, kind in kinds.items():
        default = object()
        v = _typed(section, prefix, key, kind, default)
        if v is not default:
            kwargs[key] = v
    unknown = set(section) - set(kinds)
    if unknown:
        raise ConfigError(f"{prefix}.{sorted(unknown)[0]}", "unknown key")
    kwargs.update(extra)
    try:
        return cls(**kwargs)
    except ValueError as e:
        raise ConfigError(prefix, str(e)) from None


def build_config(flat: dict, name: str = "run") -> RunConfig:
    known_sections = {
        "constants", "wavepacket", "potential", "fan", "integration", "reference",
        "root_search", "targets", "interference", "window", "output",
    }
    for k in flat:
        head = k.split(".", 1)[0]
        if head not in known_sections and k not in ("strategy", "truncation", "name"):
            raise ConfigError(k, "unknown key")
    consts = _build("constants", PhysicalConstants, _section(flat, "constants"), {"hbar": float, "mass": float})
    wp = _build(
        "wavepacket", GaussianWavepacket, _section(flat, "wavepacket"),
        {"alpha0": complex, "xc": float, "pc": float, "gamma0": complex},
    )
    pot_sec = _section(flat, "potential")
    if "kind" not in pot_sec:
        raise ConfigError("potential.kind", "missing")
    if str(pot_sec["kind"]).lower() == "harmonic":
        pot_sec.setdefault("mass", consts.mass)
    try:
        pot = potential_from_dict(pot_sec)
    except (ValueError, TypeError) as e:
        raise ConfigError("potential", str(e)) from None
    if "strategy" not in flat:
        raise ConfigError("strategy", "missing")
    try:
        strat = strategy_from_name(str(flat["strategy"]))
    except ValueError as e:
        raise ConfigError("strategy", str(e)) from None
    N = _typed(flat, "", "truncation", int, 2)
    if N < 0:
        raise ConfigError("truncation", f"must be >= 0, got {N}")
    fan = _build("fan", FanSpec, _section(flat, "fan"), {"count": int, "width_sigmas": float, "x_min": float, "x_max": float})
    if fan.count < 1:
        raise ConfigError("fan.count", f"fan must contain at least one trajectory, got {fan.count}")
    if fan.x_min is not None and fan.x_max is not None and not fan.x_max >= fan.x_min:
        raise ConfigError("fan.x_max", "empty fan range")
    if not fan.width_sigmas > 0 and fan.x_min is None:
        raise ConfigError("fan.width_sigmas", "empty fan range")
    integ = _build(
        "integration", IntegrationConfig, _section(flat, "integration"),
        {"dt": float, "t_final": float, "store_every": int, "error_estimate": bool},
    )
    ref_sec = _section(flat, "reference")
    grid = _build("reference", GridSpec, {k: v for k, v in ref_sec.items() if k != "dt"},
                  {"x_min": float, "x_max": float, "n_points": int})
    ref = ReferenceSpec(grid=grid, dt=_typed(ref_sec, "reference", "dt", float, 5e-4))
    if not ref.dt > 0:
        raise ConfigError("reference.dt", "must be positive")
    rs = _build("root_search", RootSearchConfig, _section(flat, "root_search"),
                {"max_iter": int, "tol_imag": float, "step": complex, "dt": float})
    targets = _build("targets", LineSpec, _section(flat, "targets"), {"x_min": float, "x_max": float, "count": int})
    if targets.count < 1 or targets.x_max < targets.x_min:
        raise ConfigError("targets", "empty target grid")
    isec = _section(flat, "interference")
    igrid = _build("interference", LineSpec, {k: v for k, v in isec.items() if k != "exclusion"},
                   {"x_min": float, "x_max": float, "count": int})
    excl = isec.get("exclusion", "airy")
    if not (excl in ("airy", "none") or isinstance(excl, (int, float)) and not isinstance(excl, bool)):
        raise ConfigError("interference.exclusion", f"expected 'airy', 'none' or a width, got {excl!r}")
    wsec = _section(flat, "window")
    window = (_typed(wsec, "window", "x_min", float, -2.8), _typed(wsec, "window", "x_max", float, 10.0))
    if not window[1] > window[0]:
        raise ConfigError("window", "x_max must exceed x_min")
    out = _section(flat, "output")
    return RunConfig(
        name=str(flat.get("name", name)),
        consts=consts,
        wavepacket=wp,
        potential=pot,
        strategy=strat,
        truncation=N,
        fan=fan,
        integration=integ,
        reference=ref,
        root_search=rs,
        targets=targets,
        interference=InterferenceSpec(grid=igrid, exclusion=excl),
        window=window,
        output_dir=str(out.get("dir", "out")),
        flat=dict(flat),
    )


def shipped_configs() -> list[str]:
    return sorted(p.stem for p in CONFIG_DIR.glob("*.cfg"))


def resolve_config_path(path_or_name) -> Path:
    p = Path(path_or_name)
    if p.exists():
        return p
    shipped = CONFIG_DIR / f"{path_or_name}.cfg"
    if shipped.exists():
        return shipped
    raise FileNotFoundError(f"no config file {path_or_name!r} and no shipped config of that name (have: {shipped_configs()})")


def load_config(path_or_name) -> RunConfig:
    p = resolve_config_path(path_or_name)
    return build_config(parse_config_text(p.read_text()), p.stem)
