"""Run configuration: user defaults, --params documents and the failure manifest.

Defaults live in `DEFAULT_CONFIG`; the user file at `get_config_path()` is merged
key by key and silently ignored when unreadable. A `--params` file is merged on
top, but there a bad document is a ConfigError. Sections are validated into the
settings models of `rlab.schema` before a command sees them.
"""

import hashlib
import json
import os
import sys
import typing

from pydantic import BaseModel, ValidationError

from rlab.errors import ConfigError, SchemaError
from rlab.schema import SETTINGS, describe_validation_error

DEFAULT_CONFIG = {
    name: model().model_dump(mode="json") for name, model in SETTINGS.items()
}


def get_config_path() -> str:
    if sys.platform == "win32":
        base = os.environ.get("APPDATA") or os.path.expanduser("~")
    elif sys.platform == "darwin":
        base = os.path.join(os.path.expanduser("~"), "Library", "Application Support")
    else:
        base = os.environ.get("XDG_CONFIG_HOME") or os.path.join(
            os.path.expanduser("~"), ".config"
        )
    return os.path.join(base, "rigidity-lab", "config.json")


def _merge(cfg: dict, data: dict, strict: bool, where: str):
    for section, values in data.items():
        if section not in cfg or not isinstance(values, dict):
            if strict:
                raise ConfigError(f"{where}: unknown section {section!r}")
            continue
        for k, v in values.items():
            if k in cfg[section]:
                cfg[section][k] = v
            elif strict:
                raise ConfigError(f"{where}: {section}.{k}: unknown key")


def load_config(path: typing.Optional[str] = None) -> dict:
    cfg = {k: dict(v) for k, v in DEFAULT_CONFIG.items()}
    try:
        with open(path or get_config_path(), "r") as f:
            data = json.load(f)
        if isinstance(data, dict):
            _merge(cfg, data, strict=False, where="config")
    except (FileNotFoundError, json.JSONDecodeError, OSError):
        pass
    return cfg


def apply_params(cfg: dict, path: str) -> dict:
    """Merge a --params document: either sections, or one section's keys."""
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"{path}: no such file") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    _merge(cfg, data, strict=True, where=path)
    return cfg


def settings(cfg: dict, section: str, **overrides) -> BaseModel:
    """The validated settings model for one section; None overrides are skipped."""
    values = dict(cfg[section])
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return SETTINGS[section].model_validate(values)
    except ValidationError as e:
        raise ConfigError(describe_validation_error(e, f"{section}.")) from None


def derive_seed(seed: int, *parts) -> int:
    """A sub-seed fixed by (seed, parts), independent of scheduling."""
    text = ":".join(str(p) for p in (seed,) + parts)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


# --- expected-failure manifest -----------------------------------------------

MANIFEST_PATH = os.path.join(os.path.dirname(__file__), "data", "expected.json")


class Manifest:
    """Rules marking violations as known boundary behaviour.

    A rule matches when every scalar field equals the violation's value and
    every [lo, hi] field (null = open end) contains it.
    """

    def __init__(self, rules: typing.Dict[str, typing.List[dict]]):
        self.rules = rules

    @classmethod
    def load(cls, path: str = MANIFEST_PATH) -> "Manifest":
        try:
            with open(path, "r") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise SchemaError(f"{path}: {e}") from None
        if not isinstance(data, dict):
            raise SchemaError(f"{path}: expected a JSON object")
        return cls({k: list(v) for k, v in data.items() if k != "schema"})

    @staticmethod
    def _field_matches(want, have) -> bool:
        if isinstance(want, list) and len(want) == 2:
            lo, hi = want
            if have is None:
                return False
            return (lo is None or have >= lo) and (hi is None or have <= hi)
        return want == have

    def reason(self, command: str, violation: dict) -> typing.Optional[str]:
        for rule in self.rules.get(command, []):
            fields = {k: v for k, v in rule.items() if k != "reason"}
            if all(self._field_matches(v, violation.get(k)) for k, v in fields.items()):
                return rule.get("reason", "expected")
        return None
