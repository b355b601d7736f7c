"""Run configuration: an INI file with sections, overridable by flags."""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, fields, replace

from .errors import FMethodError

FORMATS = ("json", "text", "latex")
SETTINGS = ("rankin_cohen", "juhl")


class ConfigError(FMethodError, ValueError):
    """Invalid configuration; ``field`` names the offending entry."""

    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


# (section, key) for each scalar field; weights get their own section
_LAYOUT = {
    "setting": ("setting", "name"),
    "n": ("setting", "n"),
    "delta": ("setting", "delta"),
    "degree_max": ("solver", "degree_max"),
    "parity": ("solver", "parity"),
    "jobs": ("solver", "jobs"),
    "format": ("output", "format"),
    "out": ("output", "out"),
    "test_degree": ("verify", "test_degree"),
    "samples": ("verify", "samples"),
    "seed": ("verify", "seed"),
}
_INTS = {"n", "delta", "degree_max", "jobs", "test_degree", "samples", "seed"}


@dataclass(frozen=True)
class RunConfig:
    setting: str = "rankin_cohen"
    n: int | None = None
    delta: int | None = None
    degree_max: int | None = None
    weights: tuple = ()            # sorted (name, value) pairs, values as written
    parity: str | None = None
    jobs: int = 1
    format: str = "json"
    out: str | None = None
    test_degree: int = 6
    samples: int = 3
    seed: int = 0

    def validate(self):
        if self.setting not in SETTINGS:
            raise ConfigError("setting", f"unknown setting {self.setting!r}; expected one of {SETTINGS}")
        if self.setting == "juhl":
            if self.n is None:
                raise ConfigError("n", "the juhl setting needs --n (dimension, at least 2)")
            if self.n < 2:
                raise ConfigError("n", f"dimension must be at least 2, got {self.n}")
        for name in ("n", "delta", "degree_max", "test_degree", "samples", "seed"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ConfigError(name, f"must be non-negative, got {v}")
        if self.jobs < 1:
            raise ConfigError("jobs", "must be at least 1")
        if self.parity not in (None, "even", "odd"):
            raise ConfigError("parity", f"must be even or odd, got {self.parity!r}")
        if self.format not in FORMATS:
            raise ConfigError("format", f"must be one of {FORMATS}, got {self.format!r}")
        return self

    @property
    def weight_map(self):
        return dict(self.weights)

    def merged(self, overrides: dict):
        """A copy with every non-None override applied (flags win over the file)."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        if "weights" in changes:
            w = self.weight_map
            w.update(dict(changes["weights"]))
            changes["weights"] = tuple(sorted(w.items()))
        return replace(self, **changes)

    def to_ini(self) -> str:
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str
        for f in fields(self):
            if f.name == "weights":
                continue
            v = getattr(self, f.name)
            if v is None:
                continue
            section, key = _LAYOUT[f.name]
            if not cp.has_section(section):
                cp.add_section(section)
            cp.set(section, key, str(v))
        if self.weights:
            cp.add_section("weights")
            for k, v in self.weights:
                cp.set("weights", k, v)
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()

    @classmethod
    def from_ini(cls, text: str) -> "RunConfig":
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str
        try:
            cp.read_string(text)
        except configparser.Error as exc:
            raise ConfigError("config", f"unreadable config file: {exc}") from exc
        known = {v: k for k, v in _LAYOUT.items()}
        values = {}
        for section in cp.sections():
            if section == "weights":
                values["weights"] = tuple(sorted(cp.items("weights")))
                continue
            for key, raw in cp.items(section):
                name = known.get((section, key))
                if name is None:
                    raise ConfigError(f"{section}.{key}", "unknown config entry")
                values[name] = _convert(name, raw)
        return cls(**values)


def _convert(name, raw):
    if name in _INTS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(name, f"expected an integer, got {raw!r}") from None
    return raw


def parse_weight_items(items):
    """``["k1=sym", "k2=4/1"]`` -> sorted pairs."""
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError("weights", f"expected name=value, got {item!r}")
        k, v = item.split("=", 1)
        k, v = k.strip(), v.strip()
        if not k or not v:
            raise ConfigError("weights", f"expected name=value, got {item!r}")
        out[k] = v
    return tuple(sorted(out.items()))
