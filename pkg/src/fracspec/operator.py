"""The multiplicative shift operator and its weighted-space machinery.

Functions live on a uniform t-grid as ``SampledFunction`` values carrying
the weight parameter c of the ambient space (norm integrates
|f(t)|^2 e^(-2ct)).  The central operator

    a(f)(t) = sum_{k >= 1} f(t - log k)

is an exact finite sum per evaluation point once the support of f is
bounded below.  Step-type inputs built from counting functions carry an
exact evaluator, so operator identities (Euler products on windows,
Moebius inversion) hold bit-for-bit instead of up to interpolation error;
sample-only inputs fall back to interpolation and record that fact.

Truncated operators are realized at the spectrum level: the spectrum of
the (T0, T)-truncation is the zeta image of the vertical segment, which a
``SpectrumCurve`` samples directly.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import NotPrime, PoleLine, PoleOnSegment, UnboundedTail
from .primes import is_prime, mobius, mobius_upto, primes_up_to
from .zeta import (
    DEFAULT_CONFIG,
    EvalConfig,
    ZeroBracket,
    find_critical_zeros,
    line_modulus_extrema,
    zeta,
    zeta_line,
)

_K_SUM_LIMIT = 5_000_000  # direct k-sum guard: costs scale with exp(window)
_ALIGN_RTOL = 1e-9


@dataclass(frozen=True)
class SampledFunction:
    """A function on a uniform grid, weighted by c, zero outside its
    declared support.

    ``source``, when present, evaluates the function exactly anywhere
    (it must be vectorized over numpy arrays and already zero outside the
    support); operators then avoid interpolation entirely.
    """

    t_min: float
    step: float
    values: np.ndarray
    weight: float
    support: tuple[float, float]
    kind: str = "linear"  # off-grid sampling: "linear" or "step"
    source: Optional[Callable[[np.ndarray], np.ndarray]] = None
    interpolated: bool = False

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.ndim != 1 or vals.size < 2:
            raise ValueError("values must be a 1-d array with at least 2 samples")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        if not self.step > 0:
            raise ValueError("step must be positive")
        if self.weight < 0:
            raise ValueError("weight c must be >= 0")
        if not self.support[0] <= self.support[1]:
            raise ValueError("support interval is empty")
        if self.kind not in ("linear", "step"):
            raise ValueError("kind must be 'linear' or 'step'")
        object.__setattr__(self, "values", vals)

    @property
    def t_max(self) -> float:
        return self.t_min + self.step * (len(self.values) - 1)

    @property
    def grid(self) -> np.ndarray:
        return self.t_min + self.step * np.arange(len(self.values))

    def __call__(self, taus):
        scalar = np.isscalar(taus)
        taus = np.atleast_1d(np.asarray(taus, dtype=np.float64))
        if self.source is not None:
            out = np.asarray(self.source(taus))
        elif self.kind == "step":
            idx = np.floor((taus - self.t_min) / self.step + _ALIGN_RTOL).astype(np.int64)
            inside = (idx >= 0) & (idx < len(self.values))
            out = np.zeros(taus.shape, dtype=self.values.dtype)
            out[inside] = self.values[idx[inside]]
        else:
            if np.iscomplexobj(self.values):
                out = np.interp(taus, self.grid, self.values.real, left=0.0, right=0.0).astype(complex)
                out = out + 1j * np.interp(taus, self.grid, self.values.imag, left=0.0, right=0.0)
            else:
                out = np.interp(taus, self.grid, self.values, left=0.0, right=0.0)
        return out[0] if scalar else out


def from_callable(
    fn: Callable[[np.ndarray], np.ndarray],
    t_min: float,
    t_max: float,
    step: float,
    weight: float,
    support: tuple[float, float],
    kind: str = "linear",
) -> SampledFunction:
    """Sample ``fn`` on the grid and keep it as the exact evaluator.
    ``fn`` must already vanish outside ``support``."""
    n = int(round((t_max - t_min) / step)) + 1
    grid = t_min + step * np.arange(n)
    return SampledFunction(t_min, step, np.asarray(fn(grid)), weight, support, kind, source=fn)


def unit_step(weight: float, t_max: float, step: float, t_min: float = -1.0) -> SampledFunction:
    """The Heaviside step at 0 (value 1 for t >= 0)."""

    def src(taus):
        return np.where(np.asarray(taus) >= 0.0, 1.0, 0.0)

    return from_callable(src, t_min, t_max, step, weight, (0.0, math.inf), kind="step")


def indicator(lo: float, hi: float, weight: float, step: float, pad: float = 0.5) -> SampledFunction:
    """Indicator of [lo, hi] with half values at the endpoints (the same
    midpoint convention the counting functions use; it also keeps the
    Simpson quadrature of the jump cells at O(step^2))."""

    def src(taus):
        taus = np.asarray(taus)
        inside = np.where((taus > lo) & (taus < hi), 1.0, 0.0)
        return inside + 0.5 * ((taus == lo) | (taus == hi))

    return from_callable(src, lo - pad, hi + pad, step, weight, (lo, hi), kind="step")


def counting_pullback(eta, weight: float, t_max: float, step: float) -> SampledFunction:
    """f(t) = N_eta(e^t): the geometric counting function in the additive
    variable, exact at every evaluation point."""
    from .strings import counting_many

    floor_t = math.log(eta.x0)

    def src(taus):
        return counting_many(eta, np.exp(np.asarray(taus, dtype=np.float64)))

    return from_callable(src, floor_t - 1.0, t_max, step, weight, (floor_t, math.inf), kind="step")


# ---------------------------------------------------------------------------
# Weighted norms and the shift group.


def _composite_simpson(y: np.ndarray, dx: float) -> float:
    """Composite Simpson; odd trailing interval handled by the 3/8 rule."""
    n = y.size
    if n < 2:
        return 0.0
    if n == 2:
        return float(dx * (y[0] + y[1]) / 2.0)
    if n % 2 == 1:
        return float(dx / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-2:2].sum()))
    head = _composite_simpson(y[: n - 3], dx) if n > 4 else 0.0
    tail = dx * 3.0 / 8.0 * (y[-4] + 3.0 * y[-3] + 3.0 * y[-2] + y[-1])
    if n == 4:
        return float(tail)
    return float(head + tail)


def weighted_norm(f: SampledFunction) -> float:
    """||f||_c: composite-Simpson quadrature of |f|^2 e^(-2ct) over the
    sample window (the caller's grid must resolve f)."""
    g = f.grid
    y = np.abs(f.values) ** 2 * np.exp(-2.0 * f.weight * g)
    return math.sqrt(max(_composite_simpson(y, f.step), 0.0))


def shift(f: SampledFunction, t: float) -> SampledFunction:
    """(e^{-t d})(f)(u) = f(u - t) on the lattice of f.

    Grid-aligned t translates indices exactly; otherwise the result is
    resampled (exactly when f carries a source, by linear interpolation
    with a recorded flag when it does not).
    """
    m_f = t / f.step
    m = round(m_f)
    aligned = abs(m_f - m) < _ALIGN_RTOL
    new_support = (f.support[0] + t, f.support[1] + t)
    new_source = None
    if f.source is not None:
        src = f.source
        new_source = lambda taus, _s=src, _t=t: np.asarray(_s(np.asarray(taus) - _t))
    if aligned:
        return replace(
            f,
            t_min=f.t_min + m * f.step,
            values=f.values.copy(),
            support=new_support,
            source=new_source,
        )
    n_new = len(f.values) + 1
    new_t_min = f.t_min + math.floor(m_f) * f.step
    grid = new_t_min + f.step * np.arange(n_new)
    if new_source is not None:
        vals = np.asarray(new_source(grid))
        return replace(f, t_min=new_t_min, values=vals, support=new_support, source=new_source)
    vals = f(grid - t)
    return replace(
        f, t_min=new_t_min, values=vals, support=new_support, source=None, interpolated=True
    )


# ---------------------------------------------------------------------------
# The operator, its Euler factors and the Moebius inverse.


def _sum_of_shifts(f: SampledFunction, shifts: np.ndarray, coeffs: np.ndarray) -> SampledFunction:
    """sum_i coeffs[i] * f(. - shifts[i]) on f's grid, ascending order."""
    grid = f.grid
    acc = np.zeros(len(grid), dtype=complex if np.iscomplexobj(f.values) else float)
    for sh, w in zip(shifts, coeffs):
        if w == 0:
            continue
        acc = acc + w * f(grid - sh)
    new_source = None
    if f.source is not None:
        src = f.source

        def new_source(taus, _s=src, _sh=shifts.copy(), _w=coeffs.copy()):
            taus = np.asarray(taus, dtype=np.float64)
            out = np.zeros(taus.shape, dtype=float)
            for sh, w in zip(_sh, _w):
                if w != 0:
                    out = out + w * np.asarray(_s(taus - sh))
            return out

    return replace(
        f,
        values=acc,
        support=(f.support[0], math.inf),
        source=new_source,
        interpolated=f.interpolated or f.source is None,
    )


def apply_spectral_operator(f: SampledFunction) -> SampledFunction:
    """a(f)(t) = sum_{k=1}^{floor(e^(t - t0))} f(t - log k): exact finite
    sum per grid point.  Requires the support of f to be bounded below."""
    t0 = f.support[0]
    if not math.isfinite(t0):
        raise UnboundedTail("support of f must be bounded below")
    k_max = int(math.floor(math.exp(f.t_max - t0))) + 1
    if k_max > _K_SUM_LIMIT:
        raise ValueError(f"window needs {k_max} shift terms; narrow it or raise the limit")
    ks = np.arange(1, k_max + 1, dtype=np.float64)
    return _sum_of_shifts(f, np.log(ks), np.ones(k_max))


def apply_euler_factor(f: SampledFunction, p: int) -> SampledFunction:
    """a_p(f)(t) = sum_{k >= 0} f(t - k log p) (finite on the window)."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    t0 = f.support[0]
    if not math.isfinite(t0):
        raise UnboundedTail("support of f must be bounded below")
    k_max = int(math.floor((f.t_max - t0) / math.log(p))) + 1
    shifts = math.log(p) * np.arange(0, k_max + 1, dtype=np.float64)
    return _sum_of_shifts(f, shifts, np.ones(k_max + 1))


def euler_product_apply(f: SampledFunction, primes_up_to_p: int) -> SampledFunction:
    """Composition of the Euler factors for all primes <= P, ascending.
    The factors commute, so the order is a determinism convention only."""
    out = f
    for p in primes_up_to(primes_up_to_p):
        out = apply_euler_factor(out, int(p))
    return out


def apply_inverse(f: SampledFunction, n_max: int) -> SampledFunction:
    """sum_{n <= n_max} mu(n) f(t - log n).  Exact inverse of the operator
    on a window [.., t_max] once n_max >= e^(t_max - t0)."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    mu = mobius_upto(n_max)[1:].astype(np.float64)
    ns = np.arange(1, n_max + 1, dtype=np.float64)
    return _sum_of_shifts(f, np.log(ns), mu)


def norm_bound_check(
    f: SampledFunction, cfg: EvalConfig = DEFAULT_CONFIG
) -> tuple[float, float, bool]:
    """Checks ||a(f)||_c <= zeta(c) ||f||_c (valid for c > 1).

    The norm of a(f) is computed on a padded window plus an analytic
    bound for the discarded tail, so the reported lhs is an upper
    estimate.  Returns (lhs, rhs, ok).
    """
    c = f.weight
    if not c > 1.0:
        raise ValueError("the norm bound needs weight c > 1")
    t0 = f.support[0]
    if not math.isfinite(t0) or not math.isfinite(f.support[1]):
        raise UnboundedTail("norm bound check needs compactly supported f")
    pad = min(8.0, max(2.0, 9.0 / (2.0 * (c - 1.0))))
    t_end = f.support[1] + pad
    n = int(math.ceil((t_end - f.t_min) / f.step)) + 1
    grid = f.t_min + f.step * np.arange(n)
    wide = SampledFunction(
        f.t_min, f.step, f(grid), c, f.support, f.kind, f.source, f.interpolated
    )
    af = apply_spectral_operator(wide)
    win = weighted_norm(af)
    m = float(np.max(np.abs(f.values)))
    tail_sq = m * m * math.exp(-2.0 * t0) * math.exp(2.0 * (1.0 - c) * af.t_max) / (2.0 * (c - 1.0))
    lhs = math.sqrt(win * win + tail_sq)
    rhs = zeta(complex(c), cfg).real * weighted_norm(f)
    return lhs, rhs, lhs <= rhs * (1.0 + 1e-6)


# ---------------------------------------------------------------------------
# Truncated spectra and invertibility verdicts.


@dataclass(frozen=True)
class SpectrumCurve:
    """Samples of zeta(c + i tau), tau in [T0, T]: the spectrum of the
    (T0, T)-truncated operator (the tau < 0 half is the conjugate
    mirror)."""

    c: float
    T0: float
    T: float
    step: float
    points: np.ndarray

    @property
    def taus(self) -> np.ndarray:
        n = len(self.points)
        if n == 1:
            return np.array([self.T0])
        return np.linspace(self.T0, self.T, n)

    @property
    def min_modulus(self) -> float:
        return float(np.min(np.abs(self.points)))

    @property
    def max_modulus(self) -> float:
        return float(np.max(np.abs(self.points)))

    def to_json(self) -> dict:
        return {
            "c": self.c,
            "T0": self.T0,
            "T": self.T,
            "step": self.step,
            "points": [[z.real, z.imag] for z in self.points],
        }


@dataclass(frozen=True)
class PhaseReport:
    c: float
    sup_mod: float
    min_mod: float
    zero_found: bool
    quasi_invertible_verdict: str  # "yes" | "no" | "undetermined-up-to-T"
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "c": self.c,
            "sup_mod": self.sup_mod,
            "min_mod": self.min_mod,
            "zero_found": self.zero_found,
            "verdict": self.quasi_invertible_verdict,
            "notes": self.notes,
        }


def truncated_spectrum(
    c: float, T0: float, T: float, step: float | None = None, cfg: EvalConfig = DEFAULT_CONFIG
) -> SpectrumCurve:
    if not 0 <= T0 <= T:
        raise ValueError("need 0 <= T0 <= T")
    if c == 1.0 and T0 <= 0.0 <= T:
        raise PoleOnSegment("the truncation at c = 1 meets the pole at tau = 0")
    step = cfg.line_grid_step if step is None else step
    if T0 == T:
        pts = np.array([zeta(complex(c, T0), cfg)])
        return SpectrumCurve(c, T0, T, step, pts)
    n_pts = int(math.ceil((T - T0) / step)) + 1
    taus = np.linspace(T0, T, n_pts)
    return SpectrumCurve(c, T0, T, step, zeta_line(c, taus, cfg))


_ZERO_FREE_NOTE = "Re(s) > 1 is unconditionally zero-free (Euler product)"
_LINE_ZERO_NOTE = "Re(s) = 0 is classically zero-free; the scan reports only what it verified"


def _scan_verdict(
    c: float,
    T0: float,
    T_max: float,
    cfg: EvalConfig,
    extend_for_witness: bool,
) -> PhaseReport:
    if c < 0:
        raise ValueError("need c >= 0")
    if c == 1.0:
        raise PoleLine("c = 1 is the pole line of zeta; verdicts are undefined there")
    min_mod, arg_min, sup_mod, arg_max = line_modulus_extrema(c, T0, T_max, cfg)
    notes: dict = {"arg_min": arg_min, "arg_max": arg_max, "scanned": [T0, T_max]}
    zero_found = False
    verdict = "undetermined-up-to-T"
    if c > 1.0:
        verdict = "yes"
        notes["reason"] = _ZERO_FREE_NOTE
    elif c == 0.5:
        zeros = find_critical_zeros(max(T0, 0.0), T_max, cfg) if T0 < T_max else []
        if not zeros and extend_for_witness:
            horizon = T_max + 30.0
            zeros = find_critical_zeros(T_max, horizon, cfg)
            if zeros:
                notes["witness_beyond_scan"] = zeros[0].refined_t
                notes["extended_to"] = horizon
        if zeros:
            zero_found = True
            verdict = "no"
            notes["zeros"] = [z.refined_t for z in zeros]
            min_mod = min(min_mod, min(z.residual for z in zeros))
    else:
        if c == 0.0:
            notes["reason"] = _LINE_ZERO_NOTE
        else:
            notes["reason"] = "full verdict off the critical line is out of scanning reach"
    return PhaseReport(c, sup_mod, min_mod, zero_found, verdict, notes)


def quasi_invertibility_verdict(
    c: float, T_max: float, cfg: EvalConfig = DEFAULT_CONFIG
) -> PhaseReport:
    """Scans |zeta| on the segment [0, T_max] of the line Re(s) = c.

    "no" is certified by a located zero (possible only at c = 1/2 at desk
    scale); "yes" is emitted only on the unconditionally zero-free
    half-plane c > 1; anything else stays undetermined-up-to-T.
    """
    return _scan_verdict(c, 0.0, T_max, cfg, extend_for_witness=False)


def almost_invertibility_verdict(
    c: float, T0: float, T_max: float, cfg: EvalConfig = DEFAULT_CONFIG
) -> PhaseReport:
    """Same scanning semantics restricted to T0 <= |tau| <= T_max.

    Any zero with |tau| >= T0 disproves almost-invertibility at this T0,
    so for c = 1/2 the search may extend past T_max (bounded horizon) to
    locate a witness; the report notes when it does.
    """
    if not 0 <= T0 <= T_max:
        raise ValueError("need 0 <= T0 <= T_max")
    return _scan_verdict(c, T0, T_max, cfg, extend_for_witness=True)


def _phase_report_for_c(c: float, T: float, cfg: EvalConfig) -> PhaseReport:
    if abs(c - 1.0) < 1e-12:
        return PhaseReport(
            c,
            math.nan,
            math.nan,
            False,
            "undetermined-up-to-T",
            {"flag": "pole line c = 1; scan skipped"},
        )
    base = _scan_verdict(c, 0.0, T, cfg, extend_for_witness=False)
    notes = dict(base.notes)
    # two-scale boundedness probe on the pole-free band: near tau = 0 the
    # modulus is dominated by the pole of zeta at s = 1 (|zeta(c)| ~
    # 1/|1-c|), which would mask the far-tau growth the probe is after
    band_lo = min(1.0, T / 2.0)
    _, _, band_sup_t, _ = line_modulus_extrema(c, band_lo, T, cfg)
    _, _, outer_sup, _ = line_modulus_extrema(c, T, 2.0 * T, cfg)
    band_sup_2t = max(band_sup_t, outer_sup)
    notes["sup_T"] = band_sup_t
    notes["sup_2T"] = band_sup_2t
    notes["sup_growth"] = band_sup_2t / band_sup_t if band_sup_t > 0 else math.inf
    notes["band_floor"] = band_lo
    if 0.0 < c < 1.0:
        curve = truncated_spectrum(c, 0.0, T, cfg.line_grid_step, cfg)
        pts = curve.points[np.abs(curve.points) <= 3.0]
        edges = np.linspace(-3.0, 3.0, 21)
        ix = np.clip(np.searchsorted(edges, pts.real, side="right") - 1, 0, 19)
        iy = np.clip(np.searchsorted(edges, pts.imag, side="right") - 1, 0, 19)
        notes["density_fraction"] = len(set(zip(ix.tolist(), iy.tolist()))) / 400.0
    return PhaseReport(base.c, base.sup_mod, base.min_mod, base.zero_found, base.quasi_invertible_verdict, notes)


def phase_transition_scan(
    c_grid: list[float], T: float, cfg: EvalConfig = DEFAULT_CONFIG
) -> list[PhaseReport]:
    """Per-c diagnostics over [0, T]: extrema of |zeta|, a two-scale
    boundedness probe (sup under T doubling) and, inside the strip, the
    fraction of a 20x20 cell grid of the disc |z| <= 3 hit by the curve."""
    workers = int(os.environ.get("FS_THREADS", "1") or "1")
    if workers > 1 and len(c_grid) > 1:
        with ThreadPoolExecutor(max_workers=min(workers, len(c_grid))) as pool:
            return list(pool.map(lambda c: _phase_report_for_c(float(c), T, cfg), c_grid))
    return [_phase_report_for_c(float(c), T, cfg) for c in c_grid]
