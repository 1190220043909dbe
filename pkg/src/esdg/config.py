"""Run configuration: a line-oriented ``key = value`` text format.

Blank lines and ``#`` comments are ignored. Example::

    problem = kpp
    scheme = es1fs
    h = 1/128
    dt = 1e-3
    t_end = 1.0
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .limiters import Scheme, parse_scheme
from .mesh import BOUNDARY_MODES
from .problems import PROBLEMS, ConservationLaw, get_problem, linear_advection_problem


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    problem: str
    scheme: Scheme
    nx: int
    ny: int
    dt: float
    t_end: float
    domain: Optional[tuple[float, float, float, float]] = None
    boundary_mode: Optional[str] = None
    output_every: int = 0
    output_dir: str = "output"
    output_format: str = "vtk"
    edge_quadrature: int = 3
    volume_quadrature: int = 3
    law: Optional[ConservationLaw] = None

    def with_scheme(self, scheme) -> "RunConfig":
        return replace(self, scheme=parse_scheme(scheme) if isinstance(scheme, str) else scheme)


KEYS = {
    "problem", "scheme", "nx", "ny", "h", "domain", "dt", "t_end", "output_every",
    "output_dir", "output_format", "edge_quadrature", "volume_quadrature",
    "boundary_mode", "velocity",
}
REQUIRED = ("problem", "dt", "t_end")


def _number(text: str) -> float:
    return float(Fraction(text.strip())) if "/" in text else float(text)


def _floats(text: str, count: int) -> tuple[float, ...]:
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != count:
        raise ValueError(f"expected {count} numbers, got {len(parts)}")
    return tuple(_number(p) for p in parts)


def _cells(extent: float, h: float) -> int:
    n = extent / h
    if abs(n - round(n)) > 1e-9 * max(1.0, n):
        raise ValueError(f"h={h!r} does not divide the domain extent {extent!r}")
    return int(round(n))


def parse_config(text: str) -> RunConfig:
    raw: dict[str, tuple[int, str]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = (lineno, value)

    for key in REQUIRED:
        if key not in raw:
            raise ConfigError(f"missing required key {key!r}")

    def get(key, conv, default=None):
        if key not in raw:
            return default
        lineno, value = raw[key]
        try:
            return conv(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None

    problem = get("problem", str)
    if problem not in PROBLEMS:
        raise ConfigError(f"line {raw['problem'][0]}: unknown problem {problem!r}, expected one of {sorted(PROBLEMS)}")
    law = None
    if "velocity" in raw:
        if problem != "advection":
            raise ConfigError(f"line {raw['velocity'][0]}: 'velocity' applies to the advection problem only")
        law = linear_advection_problem(get("velocity", lambda s: _floats(s, 2)))
    base = law or get_problem(problem)

    scheme = get("scheme", parse_scheme, parse_scheme("es1fs"))
    domain = get("domain", lambda s: _floats(s, 4))
    dom = domain or base.default_domain
    if not (dom[1] > dom[0] and dom[3] > dom[2]):
        raise ConfigError(f"line {raw['domain'][0]}: degenerate domain {dom!r}")

    if "h" in raw:
        if "nx" in raw or "ny" in raw:
            raise ConfigError(f"line {raw['h'][0]}: give either h or nx/ny, not both")
        h = get("h", _number)
        if h <= 0:
            raise ConfigError(f"line {raw['h'][0]}: h must be positive")
        nx = get("h", lambda s: _cells(dom[1] - dom[0], _number(s)))
        ny = get("h", lambda s: _cells(dom[3] - dom[2], _number(s)))
    else:
        if "nx" not in raw:
            raise ConfigError("missing mesh size: give 'h' or 'nx' (and optionally 'ny')")
        nx = get("nx", int)
        ny = get("ny", int, nx)
    if nx < 1 or ny < 1:
        raise ConfigError(f"cell counts must be positive, got nx={nx}, ny={ny}")

    dt = get("dt", _number)
    t_end = get("t_end", _number)
    if not dt > 0:
        raise ConfigError(f"line {raw['dt'][0]}: dt must be positive")
    if not t_end >= 0:
        raise ConfigError(f"line {raw['t_end'][0]}: t_end must be nonnegative")

    boundary = get("boundary_mode", str)
    if boundary is not None and boundary not in BOUNDARY_MODES:
        raise ConfigError(f"line {raw['boundary_mode'][0]}: boundary_mode must be one of {BOUNDARY_MODES}")
    fmt = get("output_format", str, "vtk")
    if fmt not in ("vtk", "csv"):
        raise ConfigError(f"line {raw['output_format'][0]}: output_format must be 'vtk' or 'csv'")
    every = get("output_every", int, 0)
    if every < 0:
        raise ConfigError(f"line {raw['output_every'][0]}: output_every must be >= 0")
    eq = get("edge_quadrature", int, 3)
    vq = get("volume_quadrature", int, 3)
    if eq < 1 or vq < 1:
        raise ConfigError("quadrature point counts must be >= 1")

    return RunConfig(
        problem=problem, scheme=scheme, nx=nx, ny=ny, dt=dt, t_end=t_end,
        domain=domain, boundary_mode=boundary, output_every=every,
        output_dir=get("output_dir", str, "output"), output_format=fmt,
        edge_quadrature=eq, volume_quadrature=vq, law=law,
    )


def load_config(path) -> RunConfig:
    return parse_config(Path(path).read_text())
