"""Experiment configuration: ``key = value`` files, defaults and validation."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .adversary import DEFAULT_FS_GRID, DEFAULT_TRIALS
from .generators import GenParams
from .schemes import EG_REFERENCE_N, EG_REFERENCE_POOL, SCHEMES, SchemeConfig

APL_MODES = ("sampled", "exact")


class ConfigError(ValueError):
    """Bad configuration; ``line``/``column`` are 1-based when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None, field: str | None = None):
        self.line = line
        self.column = column
        self.field = field
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class ExperimentConfig:
    schemes: tuple[str, ...] = SCHEMES
    n: int = 10_000
    p: float = 0.4
    k: int = 4
    d_max: int = 25
    cps_k: int = 7
    eg_pool: int | None = None
    eg_ring: int = 25
    ls_k: int = 25
    ls_q: int | None = None
    fs_grid: tuple[float, ...] = DEFAULT_FS_GRID
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    seeds: int = 30
    out: str = "results"
    apl_mode: str = "sampled"
    exposure: bool = False
    workers: int | None = None

    def resolved_eg_pool(self) -> int:
        """Pool size; by default scaled with n to keep the reference key density."""
        if self.eg_pool is not None:
            return self.eg_pool
        return max(self.eg_ring, round(EG_REFERENCE_POOL * self.n / EG_REFERENCE_N))

    def scheme_config(self, scheme: str) -> SchemeConfig:
        if scheme == "PADB":
            return SchemeConfig("PADB", self.n, p=self.p, k=self.k, d_max=self.d_max)
        if scheme == "EG":
            return SchemeConfig("EG", self.n, pool_size=self.resolved_eg_pool(), ring_size=self.eg_ring)
        if scheme == "CPS":
            return SchemeConfig("CPS", self.n, k=self.cps_k)
        return SchemeConfig("LS", self.n, k=self.ls_k, q=self.ls_q)

    @property
    def apl_exact(self) -> bool | None:
        return True if self.apl_mode == "exact" else None

    def validate(self) -> "ExperimentConfig":
        def bad(name, msg):
            raise ConfigError(f"{name}: {msg}", field=name)

        if not self.schemes:
            bad("schemes", "at least one scheme required")
        for s in self.schemes:
            if s not in SCHEMES:
                bad("schemes", f"unknown scheme {s!r}; expected one of {', '.join(SCHEMES)}")
        if len(set(self.schemes)) != len(self.schemes):
            bad("schemes", "duplicate scheme")
        if self.n < 1:
            bad("n", "must be >= 1")
        if not 0.0 <= self.p <= 1.0:
            bad("p", "must lie in [0, 1]")
        if self.k < 1:
            bad("k", "must be >= 1")
        if self.d_max < self.k:
            bad("d_max", f"d_max < k ({self.d_max} < {self.k})")
        if self.trials < 1:
            bad("trials", "must be >= 1")
        if self.seeds < 1:
            bad("seeds", "must be >= 1")
        if not self.fs_grid:
            bad("fs_grid", "must not be empty")
        if any(not 0.0 <= f <= 1.0 for f in self.fs_grid):
            bad("fs_grid", "values must lie in [0, 1]")
        if any(b <= a for a, b in zip(self.fs_grid, self.fs_grid[1:])):
            bad("fs_grid", "values must be strictly increasing")
        if self.apl_mode not in APL_MODES:
            bad("apl_mode", f"expected one of {', '.join(APL_MODES)}")
        if self.workers is not None and self.workers < 1:
            bad("workers", "must be >= 1")
        for s in self.schemes:
            try:
                self.scheme_config(s)
            except ValueError as exc:
                name = {"PADB": "k", "EG": "eg_ring", "CPS": "cps_k", "LS": "ls_k"}[s]
                bad(name, f"{s}: {exc}")
        return self

    def with_overrides(self, **kw) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def to_json(self) -> str:
        d = asdict(self)
        d["eg_pool"] = self.resolved_eg_pool()
        d["schemes"] = list(self.schemes)
        d["fs_grid"] = list(self.fs_grid)
        return json.dumps(d, sort_keys=True, separators=(",", ":"))


def _parse_bool(text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_list(text: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in _parse_list(text))


def _optional_int(text: str) -> int | None:
    return None if text.lower() in ("", "auto", "none") else int(text)


PARSERS = {
    "schemes": lambda t: tuple(s.upper() for s in _parse_list(t)),
    "n": int,
    "p": float,
    "k": int,
    "d_max": int,
    "cps_k": int,
    "eg_pool": _optional_int,
    "eg_ring": int,
    "ls_k": int,
    "ls_q": _optional_int,
    "fs_grid": _parse_floats,
    "trials": int,
    "seed": int,
    "seeds": int,
    "out": str,
    "apl_mode": str,
    "exposure": _parse_bool,
    "workers": _optional_int,
}
assert set(PARSERS) == {f.name for f in fields(ExperimentConfig)}


def parse_config_text(text: str) -> dict:
    """Raw ``key = value`` pairs; ``#`` starts a comment."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            col = len(line) - len(line.lstrip()) + 1
            raise ConfigError("expected 'key = value'", lineno, col)
        key_part, value_part = line.split("=", 1)
        key = key_part.strip()
        key_col = len(key_part) - len(key_part.lstrip()) + 1
        if key not in PARSERS:
            raise ConfigError(f"unknown key {key!r}", lineno, key_col, field=key or None)
        value = value_part.strip()
        value_col = len(key_part) + 2 + (len(value_part) - len(value_part.lstrip()))
        try:
            values[key] = PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {exc}", lineno, value_col, field=key) from None
    return values


def parse_config(path: str | Path | None = None, **overrides) -> ExperimentConfig:
    """Defaults, then file values, then non-None ``overrides``; validated."""
    values = {}
    if path is not None:
        values = parse_config_text(Path(path).read_text())
    cfg = ExperimentConfig(**values).with_overrides(**overrides)
    return cfg.validate()


def gen_params(model: str, n: int, p: float, k: int, d_max: int | None, seed: int) -> GenParams:
    try:
        return GenParams(n, p, k, d_max if model == "padb" else None, seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
