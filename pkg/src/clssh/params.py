"""Model parameters for the static and kicked ladder-chain lattices.

All couplings are dimensionless (energy unit: inverse driving period with
hbar = 1).  ``jx1p`` is the kick amplitude of the second driving protocol
and is ignored by the other protocols.
"""

import math
from dataclasses import dataclass, replace

STATIC = "static"
KICKED_V1 = "kicked_v1"
KICKED_V2 = "kicked_v2"
PROTOCOLS = (STATIC, KICKED_V1, KICKED_V2)


@dataclass(frozen=True)
class ModelParams:
    jx0: float
    jx1: float
    jy0: float
    jy1: float
    jx1p: float = 0.0
    protocol: str = STATIC

    def __post_init__(self):
        for name in ("jx0", "jx1", "jy0", "jy1", "jx1p"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be a finite real, got {value!r}")
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"unknown protocol {self.protocol!r}")

    @property
    def kicked(self):
        return self.protocol in (KICKED_V1, KICKED_V2)

    def with_(self, **kw):
        return replace(self, **kw)


def ladder_couplings_from_angle(theta):
    """(jx0, jx1) = (pi/2 - (pi/4) sin(theta), pi/2 - (pi/4) cos(theta))."""
    quarter = math.pi / 4.0
    half = math.pi / 2.0
    return half - quarter * math.sin(theta), half - quarter * math.cos(theta)


def chain_couplings_from_angle(phi):
    """(jy0, jy1) = (pi/2 + (pi/4) cos(phi), pi/2 - (pi/4) cos(phi))."""
    quarter = math.pi / 4.0
    half = math.pi / 2.0
    return half + quarter * math.cos(phi), half - quarter * math.cos(phi)


def params_from_angles(theta, phi, protocol=KICKED_V1, jx1p=0.0):
    """Couplings from the polar parameterization of the phase diagram."""
    jx0, jx1 = ladder_couplings_from_angle(theta)
    jy0, jy1 = chain_couplings_from_angle(phi)
    return ModelParams(
        jx0=jx0, jx1=jx1, jy0=jy0, jy1=jy1, jx1p=jx1p, protocol=protocol
    )
