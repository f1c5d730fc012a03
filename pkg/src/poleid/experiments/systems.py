"""The two-mass spring-damper benchmark systems."""

from __future__ import annotations

from ..errors import UnknownNameError
from ..lti import SpringDamperParams, StateSpace, spring_damper_continuous, zoh_discretize

BUILTIN_PARAMS = {
    "stable": SpringDamperParams(k1=0.5, k2=0.7, k3=0.6, c1=5.0, c2=5.0),
    "marginal": SpringDamperParams(k1=0.5, k2=0.7, k3=0.6, c1=60.0, c2=5.0),
    "unstable": SpringDamperParams(k1=-0.7, k2=0.7, k3=0.6, c1=5.0, c2=5.0),
}


def builtin_system(name: str) -> StateSpace:
    """ZOH-discretized spring-damper system (``Ts = 0.1``) by stability class."""
    try:
        params = BUILTIN_PARAMS[name]
    except KeyError:
        raise UnknownNameError(f"unknown system {name!r}; choose from {sorted(BUILTIN_PARAMS)}") from None
    Ac, Bc, Cc = spring_damper_continuous(params)
    return zoh_discretize(Ac, Bc, Cc, params.Ts)
