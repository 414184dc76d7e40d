"""Physical-constant conventions.

Everything in the library is written against an explicit
:class:`PhysicalConstants` record rather than hard-coded unit choices, so
the same formulas serve both the natural-unit convention (hbar = k_B = 1,
with mass/frequency scales set per problem) and SI.  Parameter objects
(`TrapParams`, `MixtureParams`, `PairingModel`) carry the convention; free
functions default to NATURAL.
"""

import math
from dataclasses import dataclass

import scipy.constants


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float
    k_B: float
    name: str = "custom"

    @property
    def h(self):
        """Planck constant, 2*pi*hbar."""
        return 2.0 * math.pi * self.hbar


NATURAL = PhysicalConstants(hbar=1.0, k_B=1.0, name="natural")
SI = PhysicalConstants(hbar=scipy.constants.hbar, k_B=scipy.constants.k, name="si")

_BY_NAME = {"natural": NATURAL, "si": SI}


def by_name(name):
    """Look up a predefined convention ('natural' or 'si')."""
    try:
        return _BY_NAME[name]
    except KeyError:
        raise ValueError(f"unknown unit convention: {name!r}") from None
