"""Energy bounds for semirelativistic N-boson systems.

For N identical bosons with Hamiltonian sum_i sqrt(p_i^2 + m^2)
+ sum_{i<j} V(r_ij), every lower bound used here is N times the spectral
bottom of a reduced one-body operator

    sqrt(lam * p^2 + m^2) + (N - 1)/2 * V(r),

so the four bounds differ only in the kinetic rescaling ``lam``:

    pairwise reduction        lam = 1            (any N >= 2)
    three-body reduction      lam = 4/3          (N >= 3, any mass)
    four-body reduction       lam = 3/2          (N >= 4, massless only)
    model-operator reduction  lam = 2(N-1)/N     (conjectured in general)

The model-operator bound is exact at N = 2 and proved for N = 3 (any mass),
for N = 4 at zero mass, and for harmonic pair potentials; elsewhere it is
conjectured and reported as such.  The upper bound comes from a product
Gaussian trial state in relative coordinates, optimized over its scale.

For the massless linear potential V(r) = b r everything reduces to closed
forms through the one-body scaling law E(a, b) = sqrt(a b) e.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .potentials import Harmonic, Linear, PairPotential
from .quadrature import semi_infinite_rule
from .solver import (
    LINEAR_GROUND_ENERGY,
    ReducedHamiltonian,
    SolverConfig,
    SpectrumResult,
    ground_energy,
    minimize_log_golden,
)

_E = LINEAR_GROUND_ENERGY


@dataclass(frozen=True)
class ProblemSpec:
    """An N-boson problem: particle count, per-particle mass, pair potential."""

    n: int
    mass: float
    potential: PairPotential

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two particles")
        if self.mass < 0.0:
            raise ValueError("mass must be nonnegative")

    @property
    def pair_count(self) -> int:
        return self.n * (self.n - 1) // 2


@dataclass(frozen=True)
class ConjectureStatus:
    proven: bool
    reason: str

    @property
    def label(self) -> str:
        return "proven" if self.proven else "conjectured"


def conjecture_status(spec: ProblemSpec) -> ConjectureStatus:
    """Proof status of the model-operator lower bound for this problem."""
    if spec.n == 2:
        return ConjectureStatus(True, "exact two-body reduction at N = 2")
    if spec.n == 3:
        return ConjectureStatus(True, "proved for three bosons at any mass")
    if spec.n == 4 and spec.mass == 0.0:
        return ConjectureStatus(True, "proved for four massless bosons")
    if isinstance(spec.potential, Harmonic):
        return ConjectureStatus(True, "proved for harmonic pair potentials")
    return ConjectureStatus(False, "no proof known for this particle count and mass")


@dataclass
class BoundResult:
    """A lower bound value with its solver diagnostics."""

    value: float
    kinetic_factor: float
    derivation: str
    spectrum: SpectrumResult


@dataclass
class UpperBoundResult:
    """Gaussian variational upper bound with optimizer diagnostics."""

    value: float
    optimal_scale: float
    warnings: list[str]


def _reduced(spec: ProblemSpec, lam: float) -> ReducedHamiltonian:
    return ReducedHamiltonian(
        beta=1.0,
        lam=lam,
        gamma=(spec.n - 1) / 2.0,
        mass=spec.mass,
        potential=spec.potential,
    )


def _solve(spec: ProblemSpec, lam: float, derivation: str, config) -> BoundResult:
    result = ground_energy(_reduced(spec, lam), config)
    return BoundResult(
        value=spec.n * result.ground_energy,
        kinetic_factor=lam,
        derivation=derivation,
        spectrum=result,
    )


def lower_n2(spec: ProblemSpec, config: SolverConfig | None = None) -> BoundResult:
    """Pairwise-reduction lower bound, valid for every N >= 2 and mass."""
    return _solve(spec, 1.0, "pairwise reduction", config)


def lower_n3(spec: ProblemSpec, config: SolverConfig | None = None) -> BoundResult:
    """Three-body-reduction lower bound (kinetic factor 4/3); needs N >= 3."""
    if spec.n < 3:
        raise ValueError("three-body reduction requires n >= 3")
    return _solve(spec, 4.0 / 3.0, "three-body reduction", config)


def lower_n4(spec: ProblemSpec, config: SolverConfig | None = None) -> BoundResult:
    """Four-body-reduction lower bound (kinetic factor 3/2); N >= 4, m = 0 only."""
    if spec.n < 4:
        raise ValueError("four-body reduction requires n >= 4")
    if spec.mass != 0.0:
        raise ValueError("four-body reduction requires m=0 (massless kinematics)")
    return _solve(spec, 1.5, "four-body reduction", config)


def conjectured_lower(
    spec: ProblemSpec, config: SolverConfig | None = None
) -> tuple[BoundResult, ConjectureStatus]:
    """Model-operator lower bound (kinetic factor 2(N-1)/N) and its status."""
    lam = 2.0 * (spec.n - 1) / spec.n
    return _solve(spec, lam, "model-operator reduction", config), conjecture_status(spec)


def gaussian_upper(
    spec: ProblemSpec,
    quadrature_order: int = 400,
    scale_interval: tuple[float, float] = (0.05, 20.0),
    scale_tolerance: float = 1e-4,
) -> UpperBoundResult:
    """Variational upper bound from a product Gaussian in relative coordinates.

    Boson symmetry collapses the expectation to a single relative pair, with
    the kinetic term evaluated on sqrt(2(N-1)/N p^2 + m^2).  The bound is
    minimized over the Gaussian length scale with the same golden-section
    scheme as the solver.  For the massless linear potential the minimum has
    the closed form returned by :func:`upper_gaussian_linear`.
    """
    if quadrature_order < 16:
        raise ValueError("quadrature order must be at least 16")
    y, wy = semi_infinite_rule(quadrature_order, 2.0)
    keep = y < 38.0
    y = y[keep]
    # |phi_0|^2 y^2 dy weights for the unit Gaussian, normalized on y^2 dy
    rho = (4.0 / math.sqrt(math.pi)) * wy[keep] * y * y * np.exp(-y * y)
    lam = 2.0 * (spec.n - 1) / spec.n
    gamma = float(spec.pair_count)
    mass = spec.mass
    potential = spec.potential

    def energy(sigma: float) -> float:
        kinetic = float(rho @ np.sqrt(lam * (y / sigma) ** 2 + mass * mass))
        pot = float(rho @ np.asarray(potential(sigma * y), dtype=float))
        return spec.n * kinetic + gamma * pot

    lo, hi = scale_interval
    best = minimize_log_golden(energy, lo, hi, scale_tolerance)
    warnings = []
    if best.at_lower or best.at_upper:
        end = lo if best.at_lower else hi
        warnings.append(
            f"Gaussian-scale optimum {best.x:.6g} sits at the search-interval "
            f"endpoint {end:g}; widen scale_interval"
        )
    return UpperBoundResult(value=best.fx, optimal_scale=best.x, warnings=warnings)


@dataclass
class BoundSet:
    """All bounds for one problem, with provenance and proof status.

    Absent entries (below their N threshold, or requiring m = 0) are None,
    with the reason recorded in ``reasons`` under the same key.
    """

    spec: ProblemSpec
    n2: BoundResult
    n3: BoundResult | None
    n4: BoundResult | None
    conjectured: BoundResult
    status: ConjectureStatus
    upper: UpperBoundResult
    reasons: dict[str, str]

    def lower_values(self) -> dict[str, float]:
        out = {"n2": self.n2.value, "conjectured": self.conjectured.value}
        if self.n3 is not None:
            out["n3"] = self.n3.value
        if self.n4 is not None:
            out["n4"] = self.n4.value
        return out


def compute_bounds(spec: ProblemSpec, config: SolverConfig | None = None) -> BoundSet:
    """Evaluate every applicable bound and validate the sandwich.

    The Gaussian upper bound must dominate every lower bound; a violation
    beyond the solver's own convergence scale indicates an internal error
    and raises RuntimeError.
    """
    reasons: dict[str, str] = {}
    n2 = lower_n2(spec, config)
    if spec.n >= 3:
        n3 = lower_n3(spec, config)
    else:
        n3, reasons["n3"] = None, "requires n >= 3"
    if spec.n >= 4 and spec.mass == 0.0:
        n4 = lower_n4(spec, config)
    elif spec.n < 4:
        n4, reasons["n4"] = None, "requires n >= 4"
    else:
        n4, reasons["n4"] = None, "requires m=0"
    conjectured, status = conjectured_lower(spec, config)
    cfg = config if config is not None else SolverConfig()
    upper = gaussian_upper(spec, quadrature_order=cfg.quadrature_order)

    bounds = BoundSet(spec, n2, n3, n4, conjectured, status, upper, reasons)
    slack = max(1e-9 * max(1.0, abs(upper.value)), 10.0 * conjectured.spectrum.convergence_estimate)
    for name, value in bounds.lower_values().items():
        if value > upper.value + slack:
            raise RuntimeError(
                f"internal error: lower bound {name} = {value!r} exceeds the "
                f"Gaussian upper bound {upper.value!r}"
            )
    return bounds


# Closed forms for the massless linear potential V(r) = r.


def lower_n2_linear(n: int) -> float:
    """N ((N-1)/2)^(1/2) e."""
    return n * math.sqrt((n - 1) / 2.0) * _E


def lower_n3_linear(n: int) -> float:
    """N ((N-1)/sqrt(3))^(1/2) e."""
    return n * math.sqrt((n - 1) / math.sqrt(3.0)) * _E


def lower_n4_linear(n: int) -> float:
    """N (3 (N-1)^2 / 8)^(1/4) e."""
    return n * (3.0 * (n - 1) ** 2 / 8.0) ** 0.25 * _E


def conjectured_lower_linear(n: int) -> float:
    """N ((N-1)^3 / (2N))^(1/4) e."""
    return n * ((n - 1) ** 3 / (2.0 * n)) ** 0.25 * _E


def upper_gaussian_linear(n: int) -> float:
    """4N ((N-1)^3 / (2 N pi^2))^(1/4)."""
    return 4.0 * n * ((n - 1) ** 3 / (2.0 * n * math.pi**2)) ** 0.25


@dataclass(frozen=True)
class LinearBoundTable:
    """Closed-form bounds for N massless bosons with V(r) = r."""

    n: int
    lower_n2: float
    lower_n3: float | None
    lower_n4: float | None
    conjectured: float
    upper: float


def linear_bound_table(n: int) -> LinearBoundTable:
    """Exact evaluation of the five closed forms at particle count n."""
    if n < 2:
        raise ValueError("need at least two particles")
    return LinearBoundTable(
        n=n,
        lower_n2=lower_n2_linear(n),
        lower_n3=lower_n3_linear(n) if n >= 3 else None,
        lower_n4=lower_n4_linear(n) if n >= 4 else None,
        conjectured=conjectured_lower_linear(n),
        upper=upper_gaussian_linear(n),
    )


#: Ratio rows in display order; values are upper/lower for the linear case.
RATIO_ROWS = ("R_N/2", "R_N/3", "R_N/4", "R_c")

_RATIO_LOWER = {
    "R_N/2": (lower_n2_linear, 2),
    "R_N/3": (lower_n3_linear, 3),
    "R_N/4": (lower_n4_linear, 4),
    "R_c": (conjectured_lower_linear, 2),
}


def ratio_limit(row: str) -> float:
    """Large-N limit of a ratio row, from the symbolic limit of the formulas."""
    c = 4.0 / _E
    if row == "R_N/2":
        return c * (2.0 / math.pi**2) ** 0.25
    if row == "R_N/3":
        return c * (3.0 / (2.0 * math.pi**2)) ** 0.25
    if row == "R_N/4":
        return c * (4.0 / (3.0 * math.pi**2)) ** 0.25
    if row == "R_c":
        return c / math.sqrt(math.pi)
    raise ValueError(f"unknown ratio row {row!r}")


@dataclass(frozen=True)
class RatioTable:
    """Upper-to-lower bound ratios for the massless linear potential.

    ``rows`` maps a row label to one value per entry of ``n_values`` (None
    below the row's particle-count threshold) followed by the large-N limit.
    """

    n_values: tuple[int, ...]
    rows: dict[str, tuple[float | None, ...]]

    @property
    def columns(self) -> tuple[object, ...]:
        return self.n_values + ("inf",)


def ratio_table(n_values: tuple[int, ...] = (2, 3, 4, 5, 6, 10)) -> RatioTable:
    """Ratios upper/lower for each bound and each N, plus the N -> inf column."""
    rows: dict[str, tuple[float | None, ...]] = {}
    for row in RATIO_ROWS:
        lower, n_min = _RATIO_LOWER[row]
        values: list[float | None] = []
        for n in n_values:
            if n < n_min:
                values.append(None)
            else:
                values.append(upper_gaussian_linear(n) / lower(n))
        values.append(ratio_limit(row))
        rows[row] = tuple(values)
    return RatioTable(n_values=tuple(n_values), rows=rows)
