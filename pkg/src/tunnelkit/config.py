"""Flat ``key = value`` configuration files.

Lines may use ``=`` or ``:`` as separator; ``#`` starts a comment.  Keys are
the barrier/particle keys (``v0_ev``, ``length_angstrom``,
``eta_evfs_per_ang2``, ``mass``, ``energy_ev``) plus ``area_m2`` for the
junction commands.
"""

import os

ENV_VAR = "TUNNELKIT_CONFIG"
KNOWN_KEYS = frozenset(
    {"v0_ev", "length_angstrom", "eta_evfs_per_ang2", "mass", "energy_ev", "area_m2"}
)


class ConfigError(ValueError):
    pass


def parse_config(text, source="<config>"):
    cfg = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for sep in ("=", ":"):
            if sep in line:
                key, value = line.split(sep, 1)
                break
        else:
            raise ConfigError(f"{source}:{n}: expected 'key = value', got {raw!r}")
        key = key.strip().lower()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{source}:{n}: unknown key {key!r}")
        cfg[key] = value.strip()
    return cfg


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), source=str(path))


def resolve(flags, config_path=None, defaults=None):
    """Merge settings with precedence flags > config file > defaults.

    ``config_path`` falls back to ``$TUNNELKIT_CONFIG``.  ``flags`` entries
    that are ``None`` count as unset.
    """
    merged = dict(defaults or {})
    path = config_path or os.environ.get(ENV_VAR)
    if path:
        merged.update(load_config(path))
    merged.update({k: v for k, v in flags.items() if v is not None})
    return merged
