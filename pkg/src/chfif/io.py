"""Run configuration parsing and CSV / SVG emission."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigParseError, EmptySample, IoFailure, RangeMismatch
from .evaluator import SampledFunction
from .insertion import SplitParameters
from .model import ChfifSystem, IfsParameters, build_system, validate_data

__all__ = [
    "InsertionConfig",
    "RunConfig",
    "parse_config",
    "load_config",
    "sample_config_path",
    "emit_csv",
    "read_csv",
    "format_csv",
    "emit_svg",
    "format_svg",
]

_TOP_KEYS = {"data", "alpha", "beta", "gamma", "insertion", "depth", "seed"}
_OVERRIDE_KEYS = ("alpha_l", "alpha_r", "beta_l", "beta_r", "gamma_l", "gamma_r")


@dataclass(frozen=True)
class InsertionConfig:
    x: float
    y: float
    z: float
    overrides: SplitParameters | None = None


@dataclass(frozen=True)
class RunConfig:
    data: list
    alpha: list
    beta: list
    gamma: list
    insertion: InsertionConfig | None = None
    depth: int = 10
    seed: int = 0
    source: str = field(default="<memory>", compare=False)

    def build(self) -> ChfifSystem:
        """Decode into a validated system; raises a ``ValidationError`` subclass on failure."""
        return build_system(
            validate_data(self.data), IfsParameters(self.alpha, self.beta, self.gamma)
        )


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _numbers(doc, key, where):
    v = doc[key]
    if not isinstance(v, list) or not all(_is_number(a) for a in v):
        raise ConfigParseError(f"{where}: '{key}' must be an array of numbers")
    return [float(a) for a in v]


def parse_config(text: str, source: str = "<memory>") -> RunConfig:
    """Parse a JSON run configuration.

    Syntax errors, missing keys, unknown keys and wrongly typed values raise
    :class:`ConfigParseError`.  Mathematical constraints are checked later by
    :meth:`RunConfig.build`.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"{source}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ConfigParseError(f"{source}: top level must be an object")
    unknown = sorted(set(doc) - _TOP_KEYS)
    if unknown:
        raise ConfigParseError(f"{source}: unknown key(s) {', '.join(unknown)}")
    for key in ("data", "alpha", "beta", "gamma"):
        if key not in doc:
            raise ConfigParseError(f"{source}: missing required key '{key}'")
    data = doc["data"]
    if not isinstance(data, list) or not all(
        isinstance(p, list) and len(p) == 3 and all(_is_number(a) for a in p) for p in data
    ):
        raise ConfigParseError(f"{source}: 'data' must be an array of [x, y, z] number triples")
    insertion = None
    if doc.get("insertion") is not None:
        ins = doc["insertion"]
        if not isinstance(ins, dict):
            raise ConfigParseError(f"{source}: 'insertion' must be an object")
        for key in ("x", "y", "z"):
            if not _is_number(ins.get(key)):
                raise ConfigParseError(f"{source}: insertion.{key} must be a number")
        extra = sorted(set(ins) - {"x", "y", "z", "overrides"})
        if extra:
            raise ConfigParseError(f"{source}: unknown insertion key(s) {', '.join(extra)}")
        overrides = None
        if ins.get("overrides") is not None:
            ov = ins["overrides"]
            if not isinstance(ov, dict) or set(ov) != set(_OVERRIDE_KEYS) or not all(
                _is_number(ov[k]) for k in _OVERRIDE_KEYS
            ):
                raise ConfigParseError(
                    f"{source}: insertion.overrides needs numeric {', '.join(_OVERRIDE_KEYS)}"
                )
            overrides = SplitParameters(*(float(ov[k]) for k in _OVERRIDE_KEYS))
        insertion = InsertionConfig(float(ins["x"]), float(ins["y"]), float(ins["z"]), overrides)
    depth = doc.get("depth", 10)
    seed = doc.get("seed", 0)
    for key, val in (("depth", depth), ("seed", seed)):
        if not isinstance(val, int) or isinstance(val, bool) or val < 0:
            raise ConfigParseError(f"{source}: '{key}' must be a non-negative integer")
    return RunConfig(
        data=[[float(a) for a in p] for p in data],
        alpha=_numbers(doc, "alpha", source),
        beta=_numbers(doc, "beta", source),
        gamma=_numbers(doc, "gamma", source),
        insertion=insertion,
        depth=depth,
        seed=seed,
        source=source,
    )


def sample_config_path():
    return resources.files("chfif").joinpath("data/sample.json")


def load_config(path=None) -> RunConfig:
    """Load a configuration file; ``None`` loads the bundled four-point sample."""
    if path is None:
        ref = sample_config_path()
        return parse_config(ref.read_text(encoding="utf-8"), "sample.json")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ConfigParseError(f"{path}: not UTF-8 text ({exc.reason})") from None
    except OSError as exc:
        raise IoFailure(f"{path}: {exc.strerror or exc}") from None
    return parse_config(text, str(path))


def format_csv(samples: SampledFunction) -> str:
    if len(samples) == 0:
        raise EmptySample("cannot write an empty sample")
    lines = ["x,f1,f2"]
    for x, a, b in zip(
        np.asarray(samples.grid).tolist(),
        np.asarray(samples.f1_values).tolist(),
        np.asarray(samples.f2_values).tolist(),
    ):
        lines.append(f"{x!r},{a!r},{b!r}")
    return "\n".join(lines) + "\n"


def _write(path, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"{path}: {exc.strerror or exc}") from None


def emit_csv(samples: SampledFunction, path) -> None:
    """Write ``x,f1,f2`` rows with shortest round-trip float formatting and LF endings."""
    _write(path, format_csv(samples))


def read_csv(path) -> SampledFunction:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IoFailure(f"{path}: {exc.strerror or exc}") from None
    if not lines or lines[0] != "x,f1,f2":
        raise ConfigParseError(f"{path}: expected header 'x,f1,f2'")
    rows = [[float(v) for v in line.split(",")] for line in lines[1:] if line]
    arr = np.array(rows, dtype=float).reshape(-1, 3)
    return SampledFunction(arr[:, 0], arr[:, 1], arr[:, 2])


PRE_COLOR = "#0000ff"
POST_COLOR = "#000000"


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def format_svg(pre: SampledFunction, post: SampledFunction | None = None,
               component: str = "f1", width: int = 800, height: int = 600) -> str:
    """Standalone SVG: ``pre`` in blue, optional ``post`` in black, linear axes."""
    if len(pre) == 0 or (post is not None and len(post) == 0):
        raise EmptySample("cannot plot an empty sample")
    series = [(pre, PRE_COLOR, "pre")]
    if post is not None:
        a0, a1 = float(pre.grid[0]), float(pre.grid[-1])
        b0, b1 = float(post.grid[0]), float(post.grid[-1])
        scale = max(abs(a0), abs(a1), abs(a1 - a0), 1.0)
        if abs(a0 - b0) > 1e-12 * scale or abs(a1 - b1) > 1e-12 * scale:
            raise RangeMismatch(f"x ranges differ: [{a0!r}, {a1!r}] vs [{b0!r}, {b1!r}]")
        series.append((post, POST_COLOR, "post"))

    xs = np.concatenate([np.asarray(s.grid, dtype=float) for s, _, _ in series])
    ys = np.concatenate([np.asarray(s.component(component), dtype=float) for s, _, _ in series])
    xlo, xhi = float(xs.min()), float(xs.max())
    ylo, yhi = float(ys.min()), float(ys.max())
    if xhi == xlo:
        xhi = xlo + 1.0
    if yhi == ylo:
        yhi = ylo + 1.0
    mx = 0.05 * (xhi - xlo)
    my = 0.05 * (yhi - ylo)
    xlo, xhi, ylo, yhi = xlo - mx, xhi + mx, ylo - my, yhi + my

    left, right, top, bottom = 70, 20, 20, 50
    pw = width - left - right
    ph = height - top - bottom

    def px(v):
        return left + (v - xlo) / (xhi - xlo) * pw

    def py(v):
        return top + (yhi - v) / (yhi - ylo) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="#808080"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="#808080"/>',
    ]
    for v in _nice_ticks(xlo + mx, xhi - mx):
        X = px(v)
        out.append(f'<line x1="{X:.3f}" y1="{top + ph}" x2="{X:.3f}" y2="{top + ph + 5}" stroke="#808080"/>')
        out.append(f'<text x="{X:.3f}" y="{top + ph + 20}" font-size="12" text-anchor="middle">{v:.4g}</text>')
    for v in _nice_ticks(ylo + my, yhi - my):
        Y = py(v)
        out.append(f'<line x1="{left - 5}" y1="{Y:.3f}" x2="{left}" y2="{Y:.3f}" stroke="#808080"/>')
        out.append(f'<text x="{left - 8}" y="{Y + 4:.3f}" font-size="12" text-anchor="end">{v:.4g}</text>')
    out.append(f'<text x="{left + pw / 2:.3f}" y="{height - 8}" font-size="14" text-anchor="middle">x</text>')
    out.append(
        f'<text x="16" y="{top + ph / 2:.3f}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + ph / 2:.3f})">{component}</text>'
    )
    for s, color, label in series:
        gx = np.asarray(s.grid, dtype=float)
        gy = np.asarray(s.component(component), dtype=float)
        pts = " ".join(f"{px(a):.3f},{py(b):.3f}" for a, b in zip(gx.tolist(), gy.tolist()))
        out.append(
            f'<polyline class="{label}" fill="none" stroke="{color}" stroke-width="1" points="{pts}"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(pre: SampledFunction, post: SampledFunction | None, path, component: str = "f1") -> None:
    _write(path, format_svg(pre, post, component))

