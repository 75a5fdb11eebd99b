"""Attractive radial pair potentials.

The solver and the bound formulas dispatch on a closed family of potential
shapes rather than accepting arbitrary callables: the Coulomb singularity,
the scaling laws and the stability guard all need to know which shape they
are dealing with.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class PotentialParseError(ValueError):
    """A textual potential spec could not be parsed."""


def _radius(r, allow_zero: bool):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0.0):
        raise ValueError("radius must be nonnegative")
    if not allow_zero and np.any(r == 0.0):
        raise ValueError("potential is singular at r = 0")
    return r


def _num(x: float) -> str:
    return format(float(x), "g")


@dataclass(frozen=True)
class PairPotential:
    """Base class of the potential family.

    Subclasses are immutable value objects, safe to share between threads.
    ``__call__`` evaluates V(r) for scalar or array ``r``.
    """

    def __call__(self, r):
        raise NotImplementedError

    def homogeneity_degree(self) -> float | None:
        """Degree k with V(s r) = s^k V(r), or None for inhomogeneous shapes."""
        return None

    def coulomb_strength(self) -> float:
        """Coefficient v of an attractive -v/r component (0 if absent)."""
        return 0.0

    def spec(self) -> str:
        """Textual form accepted by :func:`parse_potential`."""
        raise NotImplementedError


@dataclass(frozen=True)
class Linear(PairPotential):
    """V(r) = b r with slope b > 0 (energy per length)."""

    slope: float

    def __post_init__(self):
        if not self.slope > 0.0:
            raise ValueError("linear slope must be positive")

    def __call__(self, r):
        return self.slope * _radius(r, allow_zero=True)

    def homogeneity_degree(self) -> float:
        return 1.0

    def spec(self) -> str:
        return f"linear:{_num(self.slope)}"


@dataclass(frozen=True)
class Coulomb(PairPotential):
    """V(r) = -v/r with strength v > 0 (energy times length); always attractive."""

    strength: float

    def __post_init__(self):
        if not self.strength > 0.0:
            raise ValueError("coulomb strength must be positive")

    def __call__(self, r):
        return -self.strength / _radius(r, allow_zero=False)

    def homogeneity_degree(self) -> float:
        return -1.0

    def coulomb_strength(self) -> float:
        return self.strength

    def spec(self) -> str:
        return f"coulomb:{_num(self.strength)}"


@dataclass(frozen=True)
class Harmonic(PairPotential):
    """V(r) = v r^2 with v > 0 (energy per length squared)."""

    strength: float

    def __post_init__(self):
        if not self.strength > 0.0:
            raise ValueError("harmonic strength must be positive")

    def __call__(self, r):
        r = _radius(r, allow_zero=True)
        return self.strength * r * r

    def homogeneity_degree(self) -> float:
        return 2.0

    def spec(self) -> str:
        return f"harmonic:{_num(self.strength)}"


@dataclass(frozen=True)
class CoulombPlusLinear(PairPotential):
    """V(r) = -v/r + b r with v >= 0 and b > 0."""

    coulomb: float
    slope: float

    def __post_init__(self):
        if self.coulomb < 0.0:
            raise ValueError("coulomb part must be nonnegative")
        if not self.slope > 0.0:
            raise ValueError("linear slope must be positive")

    def __call__(self, r):
        r = _radius(r, allow_zero=self.coulomb == 0.0)
        if self.coulomb == 0.0:
            return self.slope * r
        return self.slope * r - self.coulomb / r

    def homogeneity_degree(self) -> float | None:
        # The two terms scale with different degrees unless one is absent.
        if self.coulomb == 0.0:
            return 1.0
        return None

    def coulomb_strength(self) -> float:
        return self.coulomb

    def spec(self) -> str:
        return f"coulomb+linear:{_num(self.coulomb)},{_num(self.slope)}"


@dataclass(frozen=True)
class PowerLaw(PairPotential):
    """V(r) = c r^k with c > 0 and k > 0."""

    coefficient: float
    exponent: float

    def __post_init__(self):
        if not self.coefficient > 0.0:
            raise ValueError("power-law coefficient must be positive")
        if not self.exponent > 0.0:
            raise ValueError("power-law exponent must be positive")

    def __call__(self, r):
        r = _radius(r, allow_zero=True)
        return self.coefficient * r**self.exponent

    def homogeneity_degree(self) -> float:
        return self.exponent

    def spec(self) -> str:
        return f"power:{_num(self.coefficient)},{_num(self.exponent)}"


def evaluate(potential: PairPotential, r):
    """Evaluate V(r).

    Raises a domain error for r < 0, and for r = 0 when the potential has a
    Coulomb singularity there.
    """
    return potential(r)


def homogeneity_degree(potential: PairPotential) -> float | None:
    """Scaling degree of the potential, absent for genuine sums of degrees."""
    return potential.homogeneity_degree()


_FORMS = {
    "linear": (Linear, 1),
    "coulomb": (Coulomb, 1),
    "harmonic": (Harmonic, 1),
    "coulomb+linear": (CoulombPlusLinear, 2),
    "power": (PowerLaw, 2),
}


def parse_potential(text: str) -> PairPotential:
    """Parse a potential spec such as ``linear:1`` or ``coulomb+linear:0.5,1``.

    Recognized forms: ``linear:<b>``, ``coulomb:<v>``, ``harmonic:<v>``,
    ``coulomb+linear:<v>,<b>``, ``power:<c>,<k>``.
    """
    name, sep, rest = text.partition(":")
    name = name.strip().lower()
    if name not in _FORMS:
        raise PotentialParseError(f"unknown potential form {name!r} in {text!r}")
    cls, nargs = _FORMS[name]
    if not sep:
        raise PotentialParseError(f"missing parameters after {name!r} in {text!r}")
    tokens = [tok.strip() for tok in rest.split(",")]
    if len(tokens) != nargs:
        raise PotentialParseError(
            f"{name!r} takes {nargs} parameter(s), got {len(tokens)} in {text!r}"
        )
    values = []
    for tok in tokens:
        try:
            values.append(float(tok))
        except ValueError:
            raise PotentialParseError(f"bad number {tok!r} in {text!r}") from None
    try:
        return cls(*values)
    except ValueError as exc:
        raise PotentialParseError(f"invalid parameters in {text!r}: {exc}") from None
