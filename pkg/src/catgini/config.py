"""
Scenario configuration files.

A scenario file is YAML::

    name: table1_row1
    dimension: 1            # optional; inferred from the component means
    n: 60
    methods: [jel, ajel, wjel, jv]
    level: 0.95
    replications: 500
    batches: 5
    seed: 20240601
    rho_true: 0.4556        # optional for `oracle`, required for `simulate`
    allocation: multinomial # or fixed
    components:
      - weight: 0.5
        normal: {mean: 0, sd: 1}
      - weight: 0.5
        normal: {mean: 3, var: 1}     # or cov: c, meaning c * I
      - weight: ...
        exponential: {mean: 4}

A scalar ``mean`` is broadcast to ``dimension`` coordinates. Validation
errors name the offending line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import yaml

from .errors import ConfigError, InvalidInputError
from .intervals import METHODS
from .simulation import Component, Scenario

TOP_KEYS = {"name", "family", "dimension", "components", "n", "methods", "level",
            "replications", "batches", "seed", "rho_true", "allocation", "proportions"}


@dataclass(frozen=True)
class StudyConfig:
    scenario: Scenario
    n: int | None = None
    methods: tuple = METHODS
    level: float = 0.95
    replications: int = 500
    batches: int = 5
    seed: int | None = None
    rho_true: float | None = None
    allocation: str = "multinomial"
    proportions: str = "resample"
    source: str = ""

    def with_overrides(self, **kw) -> "StudyConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _line(node) -> int:
    return node.start_mark.line + 1


def _plain(node):
    """Python value of a YAML node."""
    return yaml.safe_load(yaml.serialize(node)) if node is not None else None


def _mapping(node, what):
    if not isinstance(node, yaml.MappingNode):
        raise ConfigError(f"{what} must be a mapping", _line(node))
    out = {}
    for k, v in node.value:
        key = _plain(k)
        if key in out:
            raise ConfigError(f"duplicate key {key!r}", _line(k))
        out[key] = v
    return out


def _number(node, what, *, integer=False, positive=False, unit=False):
    value = _plain(node)
    ok_type = isinstance(value, int) if integer else isinstance(value, (int, float))
    if isinstance(value, bool) or not ok_type or not math.isfinite(value):
        kind = "an integer" if integer else "a number"
        raise ConfigError(f"{what} must be {kind}, got {value!r}", _line(node))
    if positive and value <= 0:
        raise ConfigError(f"{what} must be positive, got {value!r}", _line(node))
    if unit and not 0 < value < 1:
        raise ConfigError(f"{what} must lie in (0, 1), got {value!r}", _line(node))
    return value


def _vector(node, what, dim):
    value = _plain(node)
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        if dim is None:
            return (float(value),)
        return (float(value),) * dim
    if isinstance(value, list) and value and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        if dim is not None and len(value) != dim:
            raise ConfigError(f"{what} has {len(value)} entries but dimension is {dim}", _line(node))
        return tuple(float(v) for v in value)
    raise ConfigError(f"{what} must be a number or a list of numbers", _line(node))


def _component(node, index, dim):
    what = f"components[{index}]"
    fields = _mapping(node, what)
    if "weight" not in fields:
        raise ConfigError(f"{what} lacks a weight", _line(node))
    weight = _number(fields.pop("weight"), f"{what}.weight", positive=True)
    if len(fields) != 1:
        raise ConfigError(f"{what} needs exactly one of 'normal' or 'exponential'", _line(node))
    (kind_node, body), = ((k, v) for k, v in node.value if _plain(k) in fields)
    kind = _plain(kind_node)
    params = _mapping(body, f"{what}.{kind}")
    if "mean" not in params:
        raise ConfigError(f"{what}.{kind} lacks a mean", _line(body))
    mean = _vector(params.pop("mean"), f"{what}.{kind}.mean", dim)
    if kind == "exponential":
        if params:
            raise ConfigError(f"{what}.exponential takes only 'mean'", _line(body))
        if any(m <= 0 for m in mean):
            raise ConfigError(f"{what}.exponential.mean must be positive", _line(body))
        return Component(weight, "exponential", mean)
    if kind != "normal":
        raise ConfigError(f"unknown distribution {kind!r} in {what}", _line(kind_node))
    spread = [k for k in ("sd", "var", "cov") if k in params]
    unknown = set(params) - {"sd", "var", "cov"}
    if unknown or len(spread) > 1:
        raise ConfigError(f"{what}.normal takes mean and one of sd, var, cov", _line(body))
    sd = 1.0
    if spread:
        key = spread[0]
        val = _number(params[key], f"{what}.normal.{key}", positive=True)
        sd = float(val) if key == "sd" else math.sqrt(val)
    return Component(weight, "normal", mean, sd)


def parse_config(text: str, source: str = "<string>") -> StudyConfig:
    """Parse and validate scenario YAML; raises `ConfigError` with a line number."""
    try:
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"YAML syntax error: {getattr(exc, 'problem', exc)}",
                          mark.line + 1 if mark else None) from None
    if root is None:
        raise ConfigError("empty scenario file")
    top = _mapping(root, "scenario file")
    for key, node in top.items():
        if key not in TOP_KEYS:
            k_node = next(k for k, v in root.value if v is node)
            raise ConfigError(f"unknown key {key!r}", _line(k_node))
    if "components" not in top:
        raise ConfigError("missing 'components'", _line(root))

    dim = _number(top["dimension"], "dimension", integer=True, positive=True) if "dimension" in top else None
    comps_node = top["components"]
    if not isinstance(comps_node, yaml.SequenceNode) or len(comps_node.value) < 2:
        raise ConfigError("components must be a list of at least two entries", _line(comps_node))
    comps = [_component(c, i, dim) for i, c in enumerate(comps_node.value)]
    dims = {c.d for c in comps}
    if len(dims) != 1:
        raise ConfigError("components have different dimensions", _line(comps_node))
    total = sum(c.weight for c in comps)
    if not math.isclose(total, 1.0, rel_tol=0, abs_tol=1e-6):
        raise ConfigError(f"component weights sum to {total:.6g}, not 1", _line(comps_node))
    comps = [replace(c, weight=c.weight / total) for c in comps]

    name = str(_plain(top["name"])) if "name" in top else Path(source).stem
    family = str(_plain(top["family"])) if "family" in top else None
    try:
        scenario = Scenario(tuple(comps), name=name, family=family)
    except InvalidInputError as exc:
        raise ConfigError(str(exc), _line(comps_node)) from None

    kw = {}
    for key in ("n", "replications", "batches", "seed"):
        if key in top:
            kw[key] = _number(top[key], key, integer=True, positive=key != "seed")
    if "seed" in kw and kw["seed"] < 0:
        raise ConfigError("seed must be nonnegative", _line(top["seed"]))
    if "level" in top:
        kw["level"] = float(_number(top["level"], "level", unit=True))
    if "rho_true" in top:
        rho = _number(top["rho_true"], "rho_true")
        if not 0 <= rho <= 1:
            raise ConfigError("rho_true must lie in [0, 1]", _line(top["rho_true"]))
        kw["rho_true"] = float(rho)
    if "methods" in top:
        kw["methods"] = parse_methods(_plain(top["methods"]), _line(top["methods"]))
    for key, allowed in (("allocation", ("multinomial", "fixed")), ("proportions", ("resample", "fixed"))):
        if key in top:
            val = _plain(top[key])
            if val not in allowed:
                raise ConfigError(f"{key} must be one of {allowed}, got {val!r}", _line(top[key]))
            kw[key] = val
    return StudyConfig(scenario, source=source, **kw)


def parse_methods(value, line=None) -> tuple:
    """Method list from a YAML list or a comma-separated string; ``all`` expands."""
    items = value.split(",") if isinstance(value, str) else value
    if not isinstance(items, list | tuple) or not items:
        raise ConfigError("methods must be a nonempty list", line)
    out = []
    for m in items:
        m = str(m).strip().lower()
        if m == "all":
            out.extend(x for x in METHODS if x not in out)
        elif m in METHODS:
            if m not in out:
                out.append(m)
        else:
            raise ConfigError(f"unknown method {m!r}; choose from {METHODS + ('all',)}", line)
    return tuple(out)


def load_config(path) -> StudyConfig:
    """Read a scenario file. Bare names resolve to the bundled scenarios."""
    p = Path(path)
    if not p.exists():
        bundled = resources.files("catgini") / "scenarios" / (p.name if p.suffix else p.name + ".cfg")
        if bundled.is_file():
            return parse_config(bundled.read_text(encoding="utf-8"), str(p))
        raise ConfigError(f"no such scenario file: {path}")
    return parse_config(p.read_text(encoding="utf-8"), str(p))


def bundled_scenarios() -> list[str]:
    root = resources.files("catgini") / "scenarios"
    return sorted(f.name for f in root.iterdir() if f.name.endswith(".cfg"))
