"""
Tolerance Configuration
Default numeric tolerances and the PATCHFOLD_TOL environment override.

PATCHFOLD_TOL accepts either a single number (relative length tolerance) or
comma-separated key=value pairs, e.g. "len=1e-8,ang=1e-10".
"""
import os
import logging
from typing import Dict, Optional

from patchfold.errors import InvalidInput

logger = logging.getLogger(__name__)

ENV_VAR = 'PATCHFOLD_TOL'

# =============================================================================
# DEFAULTS
# =============================================================================
# eps_len_rel is scaled by the instance diameter; everything else is absolute.

DEFAULT_TOLERANCES = {
    'eps_len_rel': 1e-9,      # length tolerance, x instance diameter
    'eps_ang': 1e-9,          # radians
    'merge_dihedral': 1e-7,   # radians, coplanar facet merge in 3D hulls
    'winding': 1e-6,          # radians, region membership by winding angle
    'support_rel': 1e-9,      # supporting-plane check, x instance diameter
}

_ENV_KEYS = {
    'len': 'eps_len_rel',
    'ang': 'eps_ang',
    'merge': 'merge_dihedral',
    'winding': 'winding',
    'support': 'support_rel',
}


def parse_tolerance_override(text: str) -> Dict[str, float]:
    """
    Parse a PATCHFOLD_TOL value

    Args:
        text: "1e-8" or "len=1e-8,ang=1e-10"

    Returns:
        Dict of overridden tolerance keys
    """
    text = text.strip()
    if not text:
        return {}
    try:
        return {'eps_len_rel': _positive(float(text), text)}
    except ValueError:
        pass

    overrides = {}
    for part in text.split(','):
        key, sep, value = part.partition('=')
        key = key.strip()
        if not sep or key not in _ENV_KEYS:
            raise InvalidInput(f"Bad {ENV_VAR} entry '{part}' (keys: {', '.join(_ENV_KEYS)})")
        try:
            overrides[_ENV_KEYS[key]] = _positive(float(value), part)
        except ValueError:
            raise InvalidInput(f"Bad {ENV_VAR} value in '{part}'")
    return overrides


def _positive(value: float, raw: str) -> float:
    if not value > 0 or value == float('inf'):
        raise InvalidInput(f"{ENV_VAR} tolerances must be positive and finite, got '{raw}'")
    return value


def load_tolerances(env: Optional[Dict[str, str]] = None) -> Dict[str, float]:
    """Defaults merged with the environment override (os.environ unless env is given)."""
    env = os.environ if env is None else env
    settings = dict(DEFAULT_TOLERANCES)
    raw = env.get(ENV_VAR)
    if raw:
        overrides = parse_tolerance_override(raw)
        logger.debug(f"{ENV_VAR} overrides: {overrides}")
        settings.update(overrides)
    return settings
