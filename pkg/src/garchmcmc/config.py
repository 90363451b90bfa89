"""Flat key=value config files.

One namespace serves both `fit` and `experiment`: keys the consumer does
not use are simply ignored by it, but every key must be known and parse
cleanly before any computation starts. Precedence is command-line flag >
config file > built-in default; merging happens in the CLI layer, this
module only parses and type-checks.

Format: one `key=value` per line, `#` starts a comment, blank lines are
skipped, whitespace around key and value is trimmed. Vector values are
four comma-separated floats.
"""

from __future__ import annotations

from pathlib import Path

from .exceptions import ConfigError

_INT_KEYS = frozenset({
    "n", "seed", "data_seed", "metropolis_seed", "adaptive_seed",
    "burn_in", "initial_pool", "rebuild_every", "retained", "freeze_after",
})
_FLOAT_KEYS = frozenset({"alpha", "beta", "omega", "lambda", "nu"})
_VEC_KEYS = frozenset({"d", "theta_init"})
_SPECIAL_KEYS = frozenset({"sigma2_init"})

KNOWN_KEYS = frozenset(_INT_KEYS | _FLOAT_KEYS | _VEC_KEYS | _SPECIAL_KEYS)


def _coerce(key: str, raw: str):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _VEC_KEYS:
            parts = [p.strip() for p in raw.split(",")]
            if len(parts) != 4:
                raise ValueError(f"expected 4 comma-separated values, got {len(parts)}")
            return tuple(float(p) for p in parts)
        if key == "sigma2_init":
            if raw == "unconditional":
                return raw
            val = float(raw)
            if not val > 0.0:
                raise ValueError("must be positive or 'unconditional'")
            return val
    except ValueError as exc:
        raise ConfigError(f"bad value for '{key}': {exc}") from None
    raise ConfigError(f"unknown key '{key}'")


def parse_config(text: str) -> dict:
    """Parse config text into a typed mapping. Rejects unknown and duplicate
    keys so a typo cannot silently fall back to a default."""
    out: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key=value, got '{stripped}'")
        key, _, raw = stripped.partition("=")
        key, raw = key.strip(), raw.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key '{key}'")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key '{key}'")
        if not raw:
            raise ConfigError(f"line {lineno}: empty value for '{key}'")
        try:
            out[key] = _coerce(key, raw)
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    return out


def load_config(path) -> dict:
    """Read and parse a config file. Unreadable paths propagate OSError
    (an IO failure, not a config syntax error)."""
    return parse_config(Path(path).read_text())
