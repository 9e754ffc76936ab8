"""Fractal strings as finite atomic measures on (0, infinity).

A string is stored truncated: finitely many atoms (position, mass) with
positions strictly increasing.  Positions are reciprocal interval lengths,
so the atom (x, w) stands for w intervals of length 1/x.  Every series
quantity computed from a truncation carries an explicit geometric tail
bound; the helpers below expose those bounds instead of hiding them.

Lattice self-similar strings (atoms at a^j with mass C*b^j) additionally
get closed forms: geometric zeta, pole lattice D + i n p, residues, and
the oscillatory tube-volume series of the standard middle-thirds string.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientAtoms, PoleAtComplexDimension

_MERGE_RTOL = 1e-12


@dataclass(frozen=True)
class GeneralizedFractalString:
    """Finite atomic measure: sorted positions > 0 with real masses."""

    positions: np.ndarray
    masses: np.ndarray
    x0: float = field(default=0.0)

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.float64)
        mas = np.asarray(self.masses, dtype=np.float64)
        if pos.shape != mas.shape or pos.ndim != 1:
            raise ValueError("positions and masses must be 1-d arrays of equal length")
        if pos.size and (not np.all(pos > 0) or not np.all(np.isfinite(pos))):
            raise ValueError("positions must be finite and positive")
        if pos.size and not np.all(np.diff(pos) > 0):
            raise ValueError("positions must be strictly increasing")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "masses", mas)
        x0 = self.x0 if self.x0 > 0 else (float(pos[0]) if pos.size else 1.0)
        if pos.size and x0 > pos[0]:
            raise ValueError("support floor x0 exceeds the smallest atom")
        object.__setattr__(self, "x0", x0)

    def __len__(self) -> int:
        return int(self.positions.size)

    @property
    def cumulative_masses(self) -> np.ndarray:
        return np.cumsum(self.masses)

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.masses))

    @property
    def total_length(self) -> float:
        """Sum of w_j / x_j, the length of the underlying open set."""
        if len(self) == 0:
            return 0.0
        return float(np.sum(self.masses / self.positions))


def from_atoms(atoms) -> GeneralizedFractalString:
    """Build a string from (position, mass) pairs, merging coincident
    positions (relative tolerance 1e-12)."""
    if len(atoms) == 0:
        return GeneralizedFractalString(np.empty(0), np.empty(0))
    arr = np.asarray(atoms, dtype=np.float64)
    pos, mas = arr[:, 0], arr[:, 1]
    order = np.argsort(pos, kind="stable")
    pos, mas = pos[order], mas[order]
    new_group = np.empty(pos.size, dtype=bool)
    new_group[0] = True
    new_group[1:] = np.diff(pos) > _MERGE_RTOL * pos[1:]
    idx = np.cumsum(new_group) - 1
    upos = pos[new_group]
    umas = np.zeros(upos.size)
    np.add.at(umas, idx, mas)
    return GeneralizedFractalString(upos, umas)


def make_cantor_string(depth: int) -> GeneralizedFractalString:
    """Middle-thirds string truncation: atoms at 3^(j+1) with mass 2^j for
    j = 0..depth, so the full object has total length exactly 1."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    j = np.arange(0, depth + 1, dtype=np.float64)
    return GeneralizedFractalString(3.0 ** (j + 1), 2.0**j)


def make_power_string(exponent: float, count: int) -> GeneralizedFractalString:
    """Minkowski-measurable test string: lengths j^(-1/D), j = 1..count."""
    if not 0 < exponent < 1:
        raise ValueError("exponent must lie in (0, 1)")
    if count < 1:
        raise ValueError("count must be >= 1")
    j = np.arange(1, count + 1, dtype=np.float64)
    return GeneralizedFractalString(j ** (1.0 / exponent), np.ones(count))


def make_unit_string() -> GeneralizedFractalString:
    return GeneralizedFractalString(np.array([1.0]), np.array([1.0]))


def geometric_zeta(eta: GeneralizedFractalString, s: complex) -> complex:
    """sum_j w_j x_j^(-s) with principal powers of the positive x_j."""
    if len(eta) == 0:
        return 0j
    s = complex(s)
    return complex(np.sum(eta.masses * np.exp(-s * np.log(eta.positions))))


def counting_function(eta: GeneralizedFractalString, x: float) -> float:
    """N(x) with the half-atom convention at jump points."""
    if x <= 0:
        raise ValueError("x must be positive")
    return float(counting_many(eta, np.array([x]))[0])


def counting_many(eta: GeneralizedFractalString, xs: np.ndarray) -> np.ndarray:
    """Vectorized counting function (same half-atom convention)."""
    xs = np.asarray(xs, dtype=np.float64)
    if len(eta) == 0:
        return np.zeros(xs.shape)
    idx = np.searchsorted(eta.positions, xs, side="right")
    cum = np.concatenate(([0.0], eta.cumulative_masses))
    out = cum[idx]
    hit = idx > 0
    exact = np.zeros(xs.shape, dtype=bool)
    exact[hit] = eta.positions[idx[hit] - 1] == xs[hit]
    out[exact] -= eta.masses[idx[exact] - 1] / 2.0
    return out


# ---------------------------------------------------------------------------
# Lattice self-similar closed forms.


@dataclass(frozen=True)
class SelfSimilarSpec:
    """Atoms at a^j with mass normalization * b^j for j >= start_index."""

    ratio: float
    base: float
    start_index: int = 1
    normalization: float = 1.0

    def __post_init__(self):
        if not (1.0 < self.base < self.ratio):
            raise ValueError("need 1 < base < ratio")

    @property
    def dimension(self) -> float:
        return math.log(self.base) / math.log(self.ratio)

    @property
    def oscillatory_period(self) -> float:
        return 2.0 * math.pi / math.log(self.ratio)

    @property
    def residue(self) -> float:
        """Residue of the closed-form zeta at every lattice pole."""
        return self.normalization / math.log(self.ratio)

    def materialize(self, atoms: int) -> GeneralizedFractalString:
        j = np.arange(self.start_index, self.start_index + atoms, dtype=np.float64)
        return GeneralizedFractalString(self.ratio**j, self.normalization * self.base**j)


#: The middle-thirds string: atoms at 3^j with mass 2^(j-1), j >= 1.
CANTOR = SelfSimilarSpec(ratio=3.0, base=2.0, start_index=1, normalization=0.5)


@dataclass(frozen=True)
class ComplexDimension:
    omega: complex
    residue: complex


def closed_form_zeta(spec: SelfSimilarSpec, s: complex) -> complex:
    """normalization * q^start_index / (1 - q) with q = base * ratio^(-s)."""
    s = complex(s)
    log_q = math.log(spec.base) - s * math.log(spec.ratio)
    q = np.exp(log_q)
    if abs(1.0 - q) < 1e-12:
        raise PoleAtComplexDimension(f"s = {s:g} lies on the complex-dimension lattice")
    return complex(spec.normalization * np.exp(spec.start_index * log_q) / (1.0 - q))


def series_tail_bound(spec: SelfSimilarSpec, depth_atoms: int, sigma: float) -> float:
    """Geometric bound on |series(truncated) - closed form| for
    Re(s) = sigma > dimension, with depth_atoms atoms materialized."""
    q = spec.base * spec.ratio ** (-sigma)
    if q >= 1.0:
        return math.inf
    return q ** (depth_atoms + 1) / (1.0 - q)


def complex_dimensions(spec: SelfSimilarSpec, im_window: float) -> list[ComplexDimension]:
    """Lattice poles D + i n p with |n p| <= im_window, each with its
    residue (constant along the lattice for these closed forms)."""
    if im_window < 0:
        raise ValueError("im_window must be >= 0")
    d = spec.dimension
    p = spec.oscillatory_period
    n_max = int(math.floor(im_window / p + 1e-12))
    res = complex(spec.residue)
    return [ComplexDimension(complex(d, n * p), res) for n in range(-n_max, n_max + 1)]


@dataclass(frozen=True)
class StringStats:
    dimension: float
    total_mass: float
    minkowski_content: float | None = None


def string_stats(
    eta: GeneralizedFractalString,
    dimension: float | None = None,
    epsilon: float | None = None,
) -> StringStats:
    """Summary statistics; the dimension is fitted unless supplied (exact
    values from a SelfSimilarSpec should be passed in), and the Minkowski
    content is the direct epsilon-neighborhood estimate when epsilon is
    given."""
    d = dimension if dimension is not None else dimension_estimate(eta)
    content = None
    if epsilon is not None:
        content = minkowski_content_estimate(eta, d, epsilon)
    return StringStats(dimension=d, total_mass=eta.total_mass, minkowski_content=content)


# ---------------------------------------------------------------------------
# Tube volumes.


def tube_volume_direct(lengths, epsilon: float) -> float:
    """Exact inner epsilon-neighborhood volume of a disjoint union of
    intervals: sum of min(l, 2 eps)."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    lengths = np.asarray(lengths, dtype=np.float64)
    return float(np.sum(np.minimum(lengths, 2.0 * epsilon)))


def tube_volume(eta: GeneralizedFractalString, epsilon: float) -> float:
    """Mass-weighted tube volume: sum of w_j * min(1/x_j, 2 eps)."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    return float(np.sum(eta.masses * np.minimum(1.0 / eta.positions, 2.0 * epsilon)))


def tube_volume_cantor_series(epsilon: float, n_terms: int) -> float:
    """Oscillatory closed form of the middle-thirds tube volume,

        V(eps) = (2 log 3)^(-1) * sum_{|n| <= N} x^(1-D-inp) / ((D+inp)(1-D-inp)) - x

    with x = 2 eps, D = log_3 2, p = 2 pi / log 3.  The n = 0 term equals
    the 2^(-D) eps^(1-D) / (D (1-D) log 3) leading coefficient; conjugate
    pairs keep the truncation real.
    """
    if not 0 < epsilon < 0.5:
        raise ValueError("series form is valid for 0 < epsilon < 1/2")
    if n_terms < 0:
        raise ValueError("n_terms must be >= 0")
    d = math.log(2.0) / math.log(3.0)
    p = 2.0 * math.pi / math.log(3.0)
    x = 2.0 * epsilon
    total = x ** (1.0 - d) / (d * (1.0 - d))
    if n_terms:
        n = np.arange(1, n_terms + 1, dtype=np.float64)
        om = d + 1j * n * p
        total += 2.0 * float(np.sum((x ** (1.0 - om) / (om * (1.0 - om))).real))
    return total / (2.0 * math.log(3.0)) - x


def minkowski_content_estimate(eta: GeneralizedFractalString, dimension: float, epsilon: float) -> float:
    """Direct-oracle estimate V(eps) / eps^(1-D) of the Minkowski content."""
    return tube_volume(eta, epsilon) / epsilon ** (1.0 - dimension)


def power_minkowski_content(exponent: float) -> float:
    """Closed-form content of the lengths j^(-1/D) string: 2^(1-D)/(1-D)."""
    return 2.0 ** (1.0 - exponent) / (1.0 - exponent)


def power_tube_volume(exponent: float, count: int, epsilon: float) -> float:
    """Tube volume of the ideal (infinite) power string.

    The materialized part is summed directly; the lengths beyond the
    truncation are all shorter than 2*epsilon (enforced), so their exact
    contribution is the series tail zeta(1/D) - sum_{j<=count} j^(-1/D),
    evaluated with the zeta engine.
    """
    from .zeta import zeta as _zeta

    eta = make_power_string(exponent, count)
    if 1.0 / eta.positions[-1] >= 2.0 * epsilon:
        raise ValueError("truncation too short: lengths beyond count exceed 2*epsilon")
    partial = float(np.sum(1.0 / eta.positions))
    tail = _zeta(complex(1.0 / exponent)).real - partial
    return tube_volume(eta, epsilon) + tail


def power_minkowski_estimate(exponent: float, count: int, epsilon: float) -> float:
    """Direct epsilon-neighborhood oracle for the ideal power string:
    V(eps) / eps^(1-D)."""
    return power_tube_volume(exponent, count, epsilon) / epsilon ** (1.0 - exponent)


def dimension_estimate(eta: GeneralizedFractalString) -> float:
    """Least-squares slope of log N against log x over the top decade of
    atom positions.  Exact dimensions of closed-form strings should be
    taken from their spec instead."""
    if len(eta) < 32:
        raise InsufficientAtoms(f"need >= 32 atoms, have {len(eta)}")
    pos = eta.positions
    cum = eta.cumulative_masses
    sel = pos >= pos[-1] / 10.0
    if np.count_nonzero(sel) < 2:
        sel = np.zeros(len(eta), dtype=bool)
        sel[-2:] = True
    x = np.log(pos[sel])
    y = np.log(cum[sel])
    slope = np.polyfit(x, y, 1)[0]
    return float(slope)


# ---------------------------------------------------------------------------
# JSON wire format for string specs.


def string_spec_to_json(obj) -> dict:
    if isinstance(obj, SelfSimilarSpec):
        return {
            "type": "selfsimilar",
            "ratio": obj.ratio,
            "base": obj.base,
            "start_index": obj.start_index,
            "normalization": obj.normalization,
        }
    if isinstance(obj, GeneralizedFractalString):
        return {
            "type": "explicit",
            "atoms": [[float(x), float(w)] for x, w in zip(obj.positions, obj.masses)],
        }
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def string_from_json(d: dict, default_depth: int = 30):
    """Decode the wire format into (eta, spec-or-None)."""
    kind = d.get("type")
    if kind == "cantor":
        depth = int(d.get("depth", default_depth))
        return make_cantor_string(depth), CANTOR
    if kind == "power":
        eta = make_power_string(float(d["exponent"]), int(d.get("count", 10000)))
        return eta, None
    if kind == "selfsimilar":
        spec = SelfSimilarSpec(
            ratio=float(d["ratio"]),
            base=float(d["base"]),
            start_index=int(d.get("start_index", 1)),
            normalization=float(d.get("normalization", 1.0)),
        )
        return spec.materialize(int(d.get("depth", default_depth))), spec
    if kind == "unit":
        return make_unit_string(), None
    if kind == "explicit":
        return from_atoms(d["atoms"]), None
    raise ValueError(f"unknown string spec type: {kind!r}")
