"""Flat key=value run configuration with command-line overrides.

Keys mirror the pipeline parameters; ``class.<id> = <glob>`` lines register
the classes in order.  Relative paths resolve against the directory of the
configuration file so a generated corpus is self-contained.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from .seqdb import MiningParams


class ConfigError(ValueError):
    """Unusable run configuration."""


@dataclass
class RunConfig:
    corpus_root: Path = Path(".")
    out: Path = Path("out")
    k: int = 250
    minlen: int = 1
    maxlen: int = 2
    gap: int = 1
    quorum: float = 1.0
    train_fraction: float = 0.75
    seed: int = 7
    jobs: int = 1
    classes: dict[str, str] = field(default_factory=dict)

    def params(self) -> MiningParams:
        return MiningParams(self.k, self.minlen, self.maxlen, self.gap)

    def validate(self) -> None:
        if self.k < 1:
            raise ConfigError(f"k must be positive, got {self.k}")
        if self.minlen < 1 or self.minlen > self.maxlen:
            raise ConfigError(
                f"need 1 <= minlen <= maxlen, got {self.minlen}/{self.maxlen}"
            )
        if self.gap < 0:
            raise ConfigError(f"gap must be non-negative, got {self.gap}")
        if not 0.0 < self.quorum <= 1.0:
            raise ConfigError(f"quorum must be in (0, 1], got {self.quorum}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError(
                f"train_fraction must be in (0, 1), got {self.train_fraction}"
            )
        if self.jobs < 1:
            raise ConfigError(f"jobs must be positive, got {self.jobs}")
        if not self.classes:
            raise ConfigError("no class.<id> entries configured")


_INT_KEYS = ("k", "minlen", "maxlen", "gap", "seed", "jobs")
_FLOAT_KEYS = ("quorum", "train_fraction")
_PATH_KEYS = ("corpus_root", "out")


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    cfg = RunConfig()
    base = path.parent
    for n, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key = value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        try:
            if key in _INT_KEYS:
                setattr(cfg, key, int(value))
            elif key in _FLOAT_KEYS:
                setattr(cfg, key, float(value))
            elif key in _PATH_KEYS:
                p = Path(value)
                setattr(cfg, key, p if p.is_absolute() else base / p)
            elif key.startswith("class."):
                class_id = key[len("class.") :]
                if not class_id:
                    raise ConfigError(f"{path}:{n}: empty class id")
                cfg.classes[class_id] = value
            else:
                raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"{path}:{n}: bad value for {key}: {value!r}") from None
    cfg.validate()
    return cfg


def apply_overrides(cfg: RunConfig, args) -> RunConfig:
    """Apply the optional CLI flags on top of a loaded configuration."""
    updates = {}
    for key in ("k", "minlen", "maxlen", "gap", "quorum", "seed", "jobs"):
        value = getattr(args, key, None)
        if value is not None:
            updates[key] = value
    if getattr(args, "out", None) is not None:
        updates["out"] = Path(args.out)
    if not updates:
        return cfg
    cfg = replace(cfg, classes=dict(cfg.classes), **updates)
    cfg.validate()
    return cfg


def config_text(cfg: RunConfig) -> str:
    lines = [
        f"corpus_root = {cfg.corpus_root}",
        f"out = {cfg.out}",
        f"k = {cfg.k}",
        f"minlen = {cfg.minlen}",
        f"maxlen = {cfg.maxlen}",
        f"gap = {cfg.gap}",
        f"quorum = {cfg.quorum}",
        f"train_fraction = {cfg.train_fraction}",
        f"seed = {cfg.seed}",
        f"jobs = {cfg.jobs}",
    ]
    lines += [f"class.{cid} = {glob}" for cid, glob in cfg.classes.items()]
    return "".join(line + "\n" for line in lines)
