"""The spectral side of a fractal string.

The spectral measure of eta has an atom at every normalized frequency
k * x_j (k = 1, 2, ...) with the masses of coinciding frequencies merged.
Two independent code paths compute its counting function: direct
enumeration of the frequency atoms up to a cutoff, and the convolution
sum N_nu(x) = sum_k N_eta(x/k); their exact agreement is one of the
package's structural invariants.

On the zeta side the factorization  zeta_nu = zeta_eta * zeta  is checked
in the common convergence half-plane with an explicit tail bound for the
frequencies beyond the cutoff.  Lattice strings additionally get the
oscillatory explicit formulas: truncated sums over the complex-dimension
lattice for the counting function (level 1) and for the geometric and
spectral densities (level 0), plus the Weyl remainder profile with its
Minkowski-content coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .strings import (
    GeneralizedFractalString,
    SelfSimilarSpec,
    closed_form_zeta,
    complex_dimensions,
    counting_function,
    counting_many,
    from_atoms,
    geometric_zeta,
    make_power_string,
    power_minkowski_estimate,
)
from .zeta import DEFAULT_CONFIG, EvalConfig, zeta, zeta_line


@dataclass(frozen=True)
class SpectralMeasure:
    """Frequency atoms k * x_j <= cutoff, with coinciding atoms merged."""

    underlying: GeneralizedFractalString
    cutoff: float


def spectral_measure(eta: GeneralizedFractalString, cutoff: float) -> SpectralMeasure:
    if len(eta) == 0:
        raise ValueError("empty string has no spectrum")
    if cutoff < eta.positions[0]:
        raise ValueError("cutoff below the smallest atom of eta")
    chunks = []
    for x, w in zip(eta.positions, eta.masses):
        k_max = int(math.floor(cutoff / x + 1e-12))
        if k_max >= 1:
            ks = np.arange(1, k_max + 1, dtype=np.float64)
            chunks.append(np.column_stack((ks * x, np.full(k_max, w))))
    atoms = np.vstack(chunks)
    merged = from_atoms(atoms)
    keep = merged.positions <= cutoff * (1.0 + 1e-12)
    out = GeneralizedFractalString(merged.positions[keep], merged.masses[keep])
    return SpectralMeasure(underlying=out, cutoff=cutoff)


def spectral_counting(eta: GeneralizedFractalString, x: float) -> float:
    """N_nu(x) = sum_k N_eta(x/k); the sum stops at k = x / x0."""
    if x <= 0:
        raise ValueError("x must be positive")
    if len(eta) == 0 or x < eta.x0:
        return 0.0
    k_max = int(math.floor(x / eta.x0 + 1e-12))
    ks = np.arange(1, k_max + 1, dtype=np.float64)
    return float(np.sum(counting_many(eta, x / ks)))


def spectral_zeta_check(
    eta: GeneralizedFractalString,
    s: complex,
    cutoff: float,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> tuple[complex, complex, float]:
    """Both sides of the factorization at s (Re(s) > 1 required):
    lhs sums the truncated frequency atoms, rhs = zeta_eta(s) * zeta(s).
    Returns (lhs, rhs, |lhs - rhs|)."""
    s = complex(s)
    if not s.real > 1.0:
        raise ValueError("the factorization is checked for Re(s) > 1")
    nu = spectral_measure(eta, cutoff)
    lhs = geometric_zeta(nu.underlying, s)
    rhs = geometric_zeta(eta, s) * zeta(s, cfg)
    return lhs, rhs, abs(lhs - rhs)


def spectral_zeta_tail_bound(eta: GeneralizedFractalString, sigma: float, cutoff: float) -> float:
    """Bound on the frequencies dropped by the cutoff:
    sum_j w_j x_j^(-sigma) * sum_{k > K_j} k^(-sigma), K_j = floor(F/x_j)."""
    if not sigma > 1.0:
        raise ValueError("tail bound needs sigma > 1")
    total = 0.0
    for x, w in zip(eta.positions, eta.masses):
        k_cut = math.floor(cutoff / x + 1e-12)
        if k_cut < 1:
            tail = 1.0 + 1.0 / (sigma - 1.0)  # whole harmonic sum missing
        else:
            tail = k_cut ** (1.0 - sigma) / (sigma - 1.0)
        total += abs(w) * x ** (-sigma) * tail
    return total


def spectral_zeta_combined_bound(
    eta: GeneralizedFractalString,
    sigma: float,
    cutoff: float,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> float:
    """Analytic cutoff tail plus the zeta-evaluation error allowance; the
    measured factorization gap must stay under this."""
    eval_term = cfg.target_abs_error * (1.0 + abs(geometric_zeta(eta, complex(sigma))))
    return spectral_zeta_tail_bound(eta, sigma, cutoff) + eval_term


# ---------------------------------------------------------------------------
# Weyl asymptotics.


@dataclass(frozen=True)
class WeylData:
    """Ingredients of N_nu(x) = W(x) - c_D x^D + o(x^D) for a Minkowski
    measurable string: W(x) = weyl_factor * omega_length * x."""

    omega_length: float
    dimension: float
    minkowski_content: float
    c_coefficient: float
    weyl_factor: float = 1.0

    def weyl_term(self, x):
        return self.weyl_factor * self.omega_length * np.asarray(x, dtype=np.float64)


def power_weyl_data(
    exponent: float,
    count: int,
    epsilon: float = 1e-4,
    weyl_factor: float = 1.0,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> WeylData:
    """WeylData for the ideal power string: |Omega| = zeta(1/D), M from
    the direct epsilon-neighborhood oracle, and
    c_D = 2^(D-1) (1-D) (-zeta(D)) M."""
    omega = zeta(complex(1.0 / exponent), cfg).real
    content = power_minkowski_estimate(exponent, count, epsilon)
    zeta_d = zeta(complex(exponent), cfg).real
    c_coeff = 2.0 ** (-(1.0 - exponent)) * (1.0 - exponent) * (-zeta_d) * content
    return WeylData(
        omega_length=omega,
        dimension=exponent,
        minkowski_content=content,
        c_coefficient=c_coeff,
        weyl_factor=weyl_factor,
    )


def weyl_remainder_profile(
    eta: GeneralizedFractalString, x_grid, weyl: WeylData
) -> list[tuple[float, float]]:
    """[(x, (W(x) - N_nu(x)) / x^D)]: for a Minkowski-measurable string
    the profile settles near c_D; lattice strings oscillate forever."""
    out = []
    d = weyl.dimension
    for x in np.asarray(x_grid, dtype=np.float64):
        w = float(weyl.weyl_term(x))
        out.append((float(x), (w - spectral_counting(eta, float(x))) / x**d))
    return out


# ---------------------------------------------------------------------------
# Explicit formulas over the complex-dimension lattice.


@dataclass(frozen=True)
class ExplicitFormulaResult:
    x: float
    pole_sum: complex
    constant_term: float
    truncation_n: int
    direct_value: float

    @property
    def formula_value(self) -> float:
        return self.pole_sum.real + self.constant_term

    @property
    def gap(self) -> float:
        return abs(self.formula_value - self.direct_value)

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "pole_sum": [self.pole_sum.real, self.pole_sum.imag],
            "constant_term": self.constant_term,
            "truncation_n": self.truncation_n,
            "direct_value": self.direct_value,
            "formula_value": self.formula_value,
            "gap": self.gap,
        }


def _lattice(spec: SelfSimilarSpec, n_terms: int) -> np.ndarray:
    d = spec.dimension
    p = spec.oscillatory_period
    n = np.arange(-n_terms, n_terms + 1, dtype=np.float64)
    return d + 1j * n * p


def _materialize_covering(spec: SelfSimilarSpec, x: float) -> GeneralizedFractalString:
    n_atoms = max(int(math.ceil(math.log(x) / math.log(spec.ratio))) - spec.start_index + 2, 2)
    return spec.materialize(n_atoms)


def explicit_formula_counting(
    spec: SelfSimilarSpec, x: float, n_terms: int
) -> ExplicitFormulaResult:
    """Level-1 truncated explicit formula for the geometric counting
    function of a lattice string:

        N(x) ~ sum_{|n| <= N} res * x^omega / omega + zeta_eta(0).

    The constant is the boundary term of the pole-free part, pinned
    against the direct counting oracle (for the middle-thirds string it
    equals -1).  Conjugate lattice points keep the sum real.
    """
    if x <= 0:
        raise ValueError("x must be positive")
    omegas = _lattice(spec, n_terms)
    res = spec.residue
    pole_sum = complex(np.sum(res * np.exp(omegas * math.log(x)) / omegas))
    constant = closed_form_zeta(spec, 0.0).real
    direct = counting_function(_materialize_covering(spec, x), x)
    return ExplicitFormulaResult(
        x=x,
        pole_sum=pole_sum,
        constant_term=constant,
        truncation_n=n_terms,
        direct_value=direct,
    )


def explicit_formula_density(spec: SelfSimilarSpec, x: float, n_terms: int) -> float:
    """Level-0 truncated density of scales: Re sum res * x^(omega - 1)."""
    if x <= 0:
        raise ValueError("x must be positive")
    omegas = _lattice(spec, n_terms)
    return float(np.sum(spec.residue * np.exp((omegas - 1.0) * math.log(x))).real)


@lru_cache(maxsize=16)
def _lattice_zeta_values(spec: SelfSimilarSpec, n_terms: int, cfg: EvalConfig) -> tuple:
    """zeta at the lattice points D + i n p, n = -N..N (one vectorized
    vertical-line evaluation; negative n by conjugate symmetry)."""
    d = spec.dimension
    p = spec.oscillatory_period
    taus = p * np.arange(0, n_terms + 1, dtype=np.float64)
    upper = zeta_line(d, taus, cfg)
    vals = np.concatenate((np.conj(upper[:0:-1]), upper))
    return tuple(vals)


def spectral_density(
    spec: SelfSimilarSpec, x: float, n_terms: int, cfg: EvalConfig = DEFAULT_CONFIG
) -> float:
    """Level-0 truncated density of frequencies:
    zeta_eta(1) + Re sum res * zeta(omega) * x^(omega - 1)."""
    if x <= 0:
        raise ValueError("x must be positive")
    omegas = _lattice(spec, n_terms)
    zvals = np.asarray(_lattice_zeta_values(spec, n_terms, cfg))
    const = closed_form_zeta(spec, 1.0).real
    osc = np.sum(spec.residue * zvals * np.exp((omegas - 1.0) * math.log(x)))
    return const + float(osc.real)


def density_integral(
    spec: SelfSimilarSpec,
    a: float,
    b: float,
    n_terms: int,
    kind: str = "geometric",
    n_points: int = 32769,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> float:
    """Simpson quadrature of a truncated density over [a, b] (log-spaced
    grid, integrand density(e^u) e^u).  The smeared densities are the
    testable form of the level-0 formulas."""
    if not 0 < a < b:
        raise ValueError("need 0 < a < b")
    if n_points % 2 == 0:
        n_points += 1
    u = np.linspace(math.log(a), math.log(b), n_points)
    xs = np.exp(u)
    omegas = _lattice(spec, n_terms)
    if kind == "geometric":
        weights = np.ones(omegas.shape, dtype=complex)
        const = 0.0
    elif kind == "spectral":
        weights = np.asarray(_lattice_zeta_values(spec, n_terms, cfg))
        const = closed_form_zeta(spec, 1.0).real
    else:
        raise ValueError("kind must be 'geometric' or 'spectral'")
    acc = np.zeros(n_points)
    log_xs = np.log(xs)
    for om, wz in zip(omegas, weights):
        acc += (spec.residue * wz * np.exp((om - 1.0) * log_xs)).real
    integrand = (const + acc) * xs
    du = (u[-1] - u[0]) / (n_points - 1)
    return float(du / 3.0 * (integrand[0] + integrand[-1] + 4.0 * integrand[1:-1:2].sum() + 2.0 * integrand[2:-2:2].sum()))
