"""Resource caps.

Defaults can be overridden through environment variables, e.g.
``STABTEST_FIDELITY_CAP=4``. Caps are read at call time so tests can
monkeypatch the environment.
"""

import os

from .errors import ConfigurationError, ResourceGuardError

DEFAULTS = {
    "state": 12,  # largest state the package will construct
    "spectrum": 10,  # all 4^n Weyl expectations
    "gowers": 7,  # 2^(4n) tuples for k=3
    "enum": 6,  # Lagrangian enumeration
    "fidelity": 5,  # exhaustive stabilizer fidelity / random stabilizer states
}


def cap(name: str) -> int:
    env = os.environ.get(f"STABTEST_{name.upper()}_CAP")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigurationError(f"STABTEST_{name.upper()}_CAP must be an integer, got {env!r}")
    return DEFAULTS[name]


def check_cap(name: str, n: int, what: str = "") -> None:
    limit = cap(name)
    if n > limit:
        label = what or name
        raise ResourceGuardError(f"{label}: n={n} exceeds the {name} cap of {limit}")
