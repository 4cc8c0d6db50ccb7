"""Realistic detection chain: transmission filter, Heisenberg-limited
amplification with thermal noise, and an inefficient thresholded readout.

The chain is assembled backwards, the way inference runs: a click means at
least ``k_min`` excitations were read out with efficiency ``eta``, which
were drawn binomially from ``n`` quanta in the amplification target mode;
those ``n`` quanta split into thermal background plus ``G`` quanta per
excitation of the trigger mode; and each trigger excitation is either a
reflected thermal photon (weight beta^2 per quantum) or the transmitted
input photon (weight alpha^2).  Collapsing the bookkeeping leaves a click
element with exactly two projectors,

    Pi = w0 |vac><vac|  +  wT |T psi><T psi|,

whose weights this module computes with a certified series truncation.

Flat priors are used throughout: the inverse conditional Pr(n|k) is
identified with the forward Pr(k|n) without renormalizing over n, so `w0`
and `wT` are weights (conditional click probabilities given the input),
not a distribution over outcomes.  The Bayes-renormalized variant
(divide by sum_n Pr(k|n) = 1/eta, i.e. multiply by eta) is available via
``DetectorConfig.bayes_renormalize`` for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.stats import binom as _binom

from .errors import BandGapError, ResolutionError, ValidationError
from .grids import ComplexEnvelope, FrequencyGrid, quadrature_weights, resample

TRUNCATION_RTOL = 1e-10
N_MAX_CAP = 65536
BANDGAP_FLOOR = 1e-6     # of max |T|
SPECTRAL_FLOOR = 1e-8    # of max |f~|


# ---------------------------------------------------------------------------
# Elementary probabilities
# ---------------------------------------------------------------------------

def binomial_inefficiency(k: int, n: int, eta: float) -> float:
    """Probability to read out k of n quanta at efficiency eta.

    Under the flat prior the same number serves as the inverse conditional
    Pr(n|k) used in the click-element sums.
    """
    if not 0 <= k <= n:
        raise ValidationError(f"need 0 <= k <= n, got k={k}, n={n}")
    if not 0 < eta <= 1:
        raise ValidationError(f"eta must be in (0, 1], got {eta}")
    return float(_binom.pmf(k, n, eta))


def thermal_probability(n_excitations: int, nbar: float) -> float:
    """Bose-Einstein occupation probability  (1/(1+nbar)) (nbar/(1+nbar))^N.

    Returns 0 for negative N (the convention used when the amplifier
    bookkeeping indexes below the ground state).
    """
    if nbar < 0:
        raise ValidationError(f"nbar must be nonnegative, got {nbar}")
    if n_excitations < 0:
        return 0.0
    if nbar == 0.0:
        return 1.0 if n_excitations == 0 else 0.0
    ratio = nbar / (1.0 + nbar)
    return ratio ** n_excitations / (1.0 + nbar)


def thermal_occupation(omega: float, temperature: float, hbar: float = 1.0) -> float:
    """Mean occupation  1/(exp(hbar*omega/temperature) - 1)  of a mode."""
    if omega <= 0 or temperature <= 0:
        raise ValidationError("omega and temperature must be positive")
    return 1.0 / math.expm1(hbar * omega / temperature)


# ---------------------------------------------------------------------------
# Transmission filter
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FilterResponse:
    """Frequency-resolved transmission/reflection pair of the input network.

    Unitarity |T|^2 + |R|^2 = 1 must hold at every sample; the companion
    phase condition (R T* purely imaginary) is guaranteed by the
    ``from_transmission`` constructor.
    """

    grid: FrequencyGrid
    transmission: np.ndarray
    reflection: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.transmission, dtype=complex)
        r = np.asarray(self.reflection, dtype=complex)
        n = self.grid.n_points
        if t.shape != (n,) or r.shape != (n,):
            raise ValidationError("filter arrays must match the grid length")
        unitarity = np.abs(t) ** 2 + np.abs(r) ** 2
        worst = float(np.abs(unitarity - 1.0).max())
        if worst > 1e-10:
            raise ValidationError(
                f"filter violates |T|^2 + |R|^2 = 1 by {worst:.2e}")
        object.__setattr__(self, "transmission", t)
        object.__setattr__(self, "reflection", r)

    @classmethod
    def from_transmission(cls, grid: FrequencyGrid, transmission) -> "FilterResponse":
        """Build the reflection from unitarity, with R T* purely imaginary."""
        t = np.asarray(transmission, dtype=complex)
        mag = np.abs(t)
        if (mag > 1 + 1e-12).any():
            raise ValidationError("|T| must not exceed 1")
        phase = np.where(mag > 0, t / np.where(mag > 0, mag, 1.0), 1.0)
        r = 1j * phase * np.sqrt(np.clip(1.0 - mag ** 2, 0.0, None))
        return cls(grid, t, r)


def flat_filter(grid: FrequencyGrid, transmittance: float = 1.0) -> FilterResponse:
    """Frequency-independent |T|^2 = transmittance."""
    if not 0 <= transmittance <= 1:
        raise ValidationError("transmittance must lie in [0, 1]")
    return FilterResponse.from_transmission(
        grid, np.full(grid.n_points, math.sqrt(transmittance), dtype=complex))


def lorentzian_filter(grid: FrequencyGrid, center: float, width: float) -> FilterResponse:
    """Single-pole transmission T = (w/2) / (w/2 - i(omega - center))."""
    if width <= 0:
        raise ValidationError("width must be positive")
    omega = grid.points
    half = width / 2.0
    return FilterResponse.from_transmission(grid, half / (half - 1j * (omega - center)))


def notch_filter(grid: FrequencyGrid, notch: float, width: float) -> FilterResponse:
    """Transmission with an exact zero at ``notch`` (a photonic band gap)."""
    if width <= 0:
        raise ValidationError("width must be positive")
    omega = grid.points
    return FilterResponse.from_transmission(
        grid, (omega - notch) / np.sqrt((omega - notch) ** 2 + width ** 2))


class FilterSplit(NamedTuple):
    alpha: float
    beta: float
    transmitted: ComplexEnvelope
    reflected: ComplexEnvelope | None


def filter_overlap(trigger_spectrum: ComplexEnvelope, filt: FilterResponse,
                   detection_time: float = 0.0) -> FilterSplit:
    """Split a normalized trigger spectrum into transmitted/reflected parts.

    alpha^2 = int |psi~|^2 |T|^2, beta^2 = int |psi~|^2 |R|^2, and the
    transmitted single-photon state is psi~(w) T*(w) e^{i w T} / alpha.
    Unitarity of the filter guarantees alpha^2 + beta^2 = 1 for a
    normalized spectrum.
    """
    if not isinstance(trigger_spectrum.grid, FrequencyGrid):
        raise ValidationError("trigger spectrum must live on a frequency grid")
    n2 = trigger_spectrum.norm_squared
    if abs(n2 - 1.0) > 1e-6:
        raise ValidationError(f"trigger spectrum must be normalized (norm^2 = {n2!r})")
    t_amp, r_amp = _filter_on_grid(filt, trigger_spectrum.grid)
    w = trigger_spectrum.grid.weights()
    power = np.abs(trigger_spectrum.samples) ** 2
    alpha2 = float(w @ (power * np.abs(t_amp) ** 2))
    beta2 = float(w @ (power * np.abs(r_amp) ** 2))
    if alpha2 <= 0:
        raise ValidationError("filter transmits nothing of the trigger spectrum")
    omega = trigger_spectrum.grid.points
    carrier = np.exp(1j * omega * detection_time)
    transmitted = ComplexEnvelope(
        trigger_spectrum.grid,
        trigger_spectrum.samples * np.conj(t_amp) * carrier / math.sqrt(alpha2))
    reflected = None
    if beta2 > 0:
        reflected = ComplexEnvelope(
            trigger_spectrum.grid,
            trigger_spectrum.samples * np.conj(r_amp) * carrier / math.sqrt(beta2))
    return FilterSplit(math.sqrt(alpha2), math.sqrt(beta2), transmitted, reflected)


def _filter_on_grid(filt: FilterResponse, grid: FrequencyGrid):
    """Filter arrays on ``grid``, re-unitarized after any resampling."""
    if filt.grid == grid:
        return filt.transmission, filt.reflection
    t = resample(ComplexEnvelope(filt.grid, filt.transmission), grid).samples
    r = resample(ComplexEnvelope(filt.grid, filt.reflection), grid).samples
    norm = np.sqrt(np.abs(t) ** 2 + np.abs(r) ** 2)
    norm[norm == 0] = 1.0
    return t / norm, r / norm


def mode_match_compensation(target_spectrum: ComplexEnvelope, filt: FilterResponse,
                            detection_time: float = 0.0) -> ComplexEnvelope:
    """Trigger spectrum that makes the filtered detector project exactly
    onto ``target_spectrum``.

    The transmitted state built by :func:`filter_overlap` is
    psi~ T* e^{i w T} / alpha, so the compensation divides the filter's
    conjugate response out of the target:  psi~ = f~ e^{-i w T} / T*,
    renormalized.  Composing compensation -> filter split -> Born rule then
    returns the full weight:  P_T = wT.

    Raises
    ------
    BandGapError
        If |T| falls below ``BANDGAP_FLOOR`` anywhere the target carries
        spectral amplitude above ``SPECTRAL_FLOOR``; no drive can supply
        the frequencies the filter removes.  The error names the first
        blocked frequency.
    """
    if not isinstance(target_spectrum.grid, FrequencyGrid):
        raise ValidationError("target spectrum must live on a frequency grid")
    t_amp, _ = _filter_on_grid(filt, target_spectrum.grid)
    f_amp = np.abs(target_spectrum.samples)
    t_mag = np.abs(t_amp)
    live = f_amp > SPECTRAL_FLOOR * f_amp.max()
    blocked = live & (t_mag < BANDGAP_FLOOR * t_mag.max())
    if blocked.any():
        j = int(np.nonzero(blocked)[0][0])
        omega_bad = target_spectrum.grid.points[j]
        raise BandGapError(
            f"filter transmission vanishes at omega = {omega_bad!r} inside the "
            "target's spectral support; that frequency cannot be compensated",
            frequency=float(omega_bad))
    omega = target_spectrum.grid.points
    safe_t = np.where(t_mag > 0, t_amp, 1.0)
    psi = np.where(live,
                   target_spectrum.samples * np.exp(-1j * omega * detection_time)
                   / np.conj(safe_t),
                   0.0)
    return ComplexEnvelope(target_spectrum.grid, psi).normalized()


def transmitted_detection_probability(element: "PovmClickElement",
                                      input_spectrum: ComplexEnvelope) -> float:
    """Born-rule click probability  wT |<T psi|f>|^2  for a normalized input."""
    n2 = input_spectrum.norm_squared
    if abs(n2 - 1.0) > 1e-6:
        raise ValidationError(f"input spectrum must be normalized (norm^2 = {n2!r})")
    if element.projected_state is None:
        raise ValidationError("element carries no projected state")
    state = element.projected_state
    ket = input_spectrum
    if ket.grid != state.grid:
        ket = resample(ket, state.grid)
    amp = state.grid.weights() @ (np.conj(state.samples) * ket.samples)
    return float(element.photon_weight * abs(amp) ** 2)


# ---------------------------------------------------------------------------
# Click-element weights
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DetectorConfig:
    """Parameters of the amplification and readout stages.

    ``nbar_target`` is the thermal occupation of the amplification target
    mode (obtain it from a frequency and temperature with
    :func:`thermal_occupation`); ``nbar_reflected`` the occupation of the
    non-monochromatic reflected mode, supplied directly as a scalar.
    ``n_max`` bounds the photon-number sums; leave ``None`` for the
    certified automatic choice.
    """

    eta: float
    gain: int
    nbar_target: float
    nbar_reflected: float
    k_min: int
    n_max: int | None = None
    bayes_renormalize: bool = False

    def __post_init__(self):
        if not 0 < self.eta <= 1:
            raise ValidationError(f"eta must be in (0, 1], got {self.eta}")
        if self.gain < 1 or int(self.gain) != self.gain:
            raise ValidationError(f"gain must be a positive integer, got {self.gain}")
        if self.k_min < 1 or int(self.k_min) != self.k_min:
            raise ValidationError(f"k_min must be a positive integer, got {self.k_min}")
        if self.nbar_target < 0 or self.nbar_reflected < 0:
            raise ValidationError("thermal occupations must be nonnegative")
        if self.n_max is not None and self.n_max < self.k_min:
            raise ValidationError("n_max must be at least k_min")

    def default_n_max(self) -> int:
        scale = self.k_min + 20 * self.gain * (1 + self.nbar_target) * (1 + self.nbar_reflected)
        return max(50, int(math.ceil(scale)))


@dataclass(frozen=True, eq=False)
class PovmClickElement:
    """The synthesized click element  w0 |vac><vac| + wT |T psi><T psi|."""

    vacuum_weight: float
    photon_weight: float
    alpha: float
    beta: float
    projected_state: ComplexEnvelope | None = None

    @property
    def purity(self) -> float:
        """Tr[Pi^2] / (Tr Pi)^2 of the two-projector element."""
        return povm_purity([self.vacuum_weight, self.photon_weight],
                           np.eye(2))

    def figures_of_merit(self) -> dict:
        return {
            "efficiency": self.photon_weight,
            "dark_count_weight": self.vacuum_weight,
            "purity": self.purity,
        }


def _inner_series(config: DetectorConfig, beta2: float, n_max: int):
    """Vacuum and photon inner sums over the trigger occupation m, plus
    exact geometric bounds on everything omitted beyond ``n_max``.

    All tail terms are products of small positives (no cancellation), so
    the certificate stays meaningful even when the weights themselves are
    1e-10-scale.
    """
    r = config.nbar_target / (1.0 + config.nbar_target)
    rp = config.nbar_reflected / (1.0 + config.nbar_reflected)
    one_minus_r = 1.0 - r
    one_minus_rp = 1.0 - rp
    y = rp * beta2                       # per-trigger-thermal-photon factor
    gain = config.gain

    n = np.arange(n_max + 1)
    with np.errstate(divide="ignore"):
        log_r = np.log(r) if r > 0 else -np.inf
    if r > 0:
        pth = one_minus_r * np.exp(n * log_r)
    else:
        pth = np.zeros(n_max + 1)
        pth[0] = 1.0

    m_star = n_max // gain
    inner_vac = np.zeros(n_max + 1)
    inner_photon = np.zeros(n_max + 1)
    y_pow = 1.0
    for m in range(m_star + 1):
        shift = gain * m
        block = pth[:n_max + 1 - shift]
        if m == 0:
            inner_vac[shift:] += one_minus_rp * block
        else:
            inner_vac[shift:] += one_minus_rp * y_pow * block
            # photon branch: m transmitted+thermal triggers, m-1 thermal
            inner_photon[shift:] += m * one_minus_rp * y_prev * block
        y_prev = y_pow
        y_pow *= y

    # tails: sum over n > n_max, exactly
    def _r_tail(exponent):
        # sum_{N > K} (1-r) r^N = r^{K+1}, with K = exponent - 1 >= 0
        if r == 0.0:
            return 1.0 if exponent <= 0 else 0.0
        return r ** max(exponent, 0)

    tail_vac = 0.0
    tail_photon = 0.0
    y_pow = 1.0
    for m in range(m_star + 1):
        rem = _r_tail(n_max + 1 - gain * m)
        tail_vac += one_minus_rp * y_pow * rem
        if m >= 1:
            tail_photon += m * one_minus_rp * y_prev_t * rem
        y_prev_t = y_pow
        y_pow *= y
    if y > 0:
        tail_vac += one_minus_rp * y ** (m_star + 1) / (1.0 - y)
        big_m = m_star + 1
        tail_photon += one_minus_rp * (
            (big_m + 1) * y ** big_m * (1.0 - y) + y ** (big_m + 1)) / (1.0 - y) ** 2
    elif m_star < 1:
        tail_photon += one_minus_rp * _r_tail(n_max + 1 - gain)
    return inner_vac, inner_photon, tail_vac, tail_photon


def assemble_click_weights(config: DetectorConfig, alpha: float, beta: float,
                           projected_state: ComplexEnvelope | None = None) -> PovmClickElement:
    """Collapse the readout/amplification/transmission sums into (w0, wT).

        w0 = sum_{k>=k_min} sum_{n>=k} Pr(n|k) sum_{m=0}^{n//G}
                 Pth_{n-Gm} P'th_m beta^{2m}
        wT = sum_{k>=k_min} sum_{n>=k} Pr(n|k) sum_{m=1}^{n//G}
                 m Pth_{n-Gm} P'th_{m-1} alpha^2 beta^{2(m-1)}

    The n-sum runs to a truncation point whose omitted remainder is
    certified (by exact geometric tail sums) to stay below
    ``TRUNCATION_RTOL`` of the retained weights; the point doubles from
    ``config.default_n_max()`` as needed.

    Raises
    ------
    ResolutionError
        If no truncation below ``N_MAX_CAP`` satisfies the certificate.
    """
    if not (0 <= alpha <= 1 and 0 <= beta <= 1):
        raise ValidationError("alpha and beta must lie in [0, 1]")
    if abs(alpha ** 2 + beta ** 2 - 1.0) > 1e-6:
        raise ValidationError(
            f"alpha^2 + beta^2 = {alpha ** 2 + beta ** 2!r}, expected 1")
    beta2 = beta ** 2
    n_max = config.n_max if config.n_max is not None else config.default_n_max()
    fixed_n_max = config.n_max is not None
    while True:
        inner_vac, inner_photon, tail_vac, tail_photon = _inner_series(config, beta2, n_max)
        n = np.arange(n_max + 1)
        k_factor = _binom.sf(config.k_min - 1, n, config.eta)
        if config.bayes_renormalize:
            # sum_n Pr(k|n) = 1/eta for every k, so renormalizing over n
            # rescales every weight by eta
            k_factor = k_factor * config.eta
        w0 = float(k_factor @ inner_vac)
        photon_partial = float(k_factor @ inner_photon)
        wt = alpha ** 2 * photon_partial
        vac_ok = tail_vac <= TRUNCATION_RTOL * max(w0, 1e-30)
        photon_ok = (alpha == 0.0
                     or tail_photon <= TRUNCATION_RTOL * max(photon_partial, 1e-30))
        if vac_ok and photon_ok:
            return PovmClickElement(w0, wt, alpha, beta, projected_state)
        if fixed_n_max:
            raise ResolutionError(
                f"n_max = {n_max} leaves an uncertified tail "
                f"(vacuum {tail_vac:.2e}, photon {tail_photon:.2e})")
        if n_max >= N_MAX_CAP:
            raise ResolutionError(
                f"series truncation did not certify below n_max = {N_MAX_CAP}")
        n_max *= 2


def povm_purity(weights: Sequence[float], gram: np.ndarray) -> float:
    """Purity Tr[Pi^2]/(Tr Pi)^2 of  Pi = sum_i w_i |phi_i><phi_i|.

    ``gram`` holds the state overlaps <phi_i|phi_j> (unit diagonal for
    normalized states).  Equals 1 exactly when a single weight is nonzero,
    and 1/d for d equally weighted orthogonal states.
    """
    w = np.asarray(weights, dtype=float)
    g = np.asarray(gram)
    if w.ndim != 1 or g.shape != (w.size, w.size):
        raise ValidationError("need n weights and an n x n Gram matrix")
    if (w < 0).any():
        raise ValidationError("weights must be nonnegative")
    total = w.sum()
    if total <= 0:
        raise ValidationError("at least one weight must be positive")
    if np.abs(g - g.conj().T).max() > 1e-10:
        raise ValidationError("Gram matrix must be Hermitian")
    eigs = np.linalg.eigvalsh(g)
    if eigs.min() < -1e-10 * max(1.0, eigs.max()):
        raise ValidationError("Gram matrix must be positive semidefinite")
    trace_sq = float(np.einsum("i,j,ij->", w, w, np.abs(g) ** 2))
    return trace_sq / total ** 2


# ---------------------------------------------------------------------------
# Parameter fluctuations
# ---------------------------------------------------------------------------

class FluctuationAverage(NamedTuple):
    vacuum_weight: float
    photon_weight: float
    mixture_weights: np.ndarray
    elements: list


def fluctuation_average(element_family: Callable[[float], PovmClickElement],
                        parameters: np.ndarray,
                        prior_density: np.ndarray) -> FluctuationAverage:
    """Average a parameter-indexed click element over a classical prior.

    ``parameters`` are uniform quadrature nodes resolving the prior (at
    least 64 across +-4 prior widths); ``prior_density`` is the prior
    evaluated there, normalized to unit mass on the node lattice.  The
    returned mixture weights are the per-node probability masses; the
    averaged (w0, wT) use them directly.
    """
    x = np.asarray(parameters, dtype=float)
    p = np.asarray(prior_density, dtype=float)
    if x.ndim != 1 or x.size < 2 or p.shape != x.shape:
        raise ValidationError("parameters and prior must be equal-length 1-D arrays")
    if (p < 0).any():
        raise ValidationError("prior density must be nonnegative")
    dx = x[1] - x[0]
    if np.abs(np.diff(x) - dx).max() > 1e-9 * abs(dx):
        raise ValidationError("parameter nodes must be uniformly spaced")
    masses = p * quadrature_weights(x.size, dx)
    total = masses.sum()
    if abs(total - 1.0) > 1e-6:
        raise ValidationError(f"prior mass is {total!r}, expected 1")
    masses = masses / total
    elements = [element_family(xi) for xi in x]
    w0 = float(sum(m * e.vacuum_weight for m, e in zip(masses, elements)))
    wt = float(sum(m * e.photon_weight for m, e in zip(masses, elements)))
    return FluctuationAverage(w0, wt, masses, elements)


def jitter_efficiency_closed_form(jitter_width: float, sigma: float) -> float:
    """Detection efficiency of a Gaussian packet under Gaussian timing jitter,
    1 / sqrt(1 + (w/sigma)^2 / 2)."""
    if sigma <= 0 or jitter_width < 0:
        raise ValidationError("sigma must be positive and jitter nonnegative")
    return 1.0 / math.sqrt(1.0 + (jitter_width / sigma) ** 2 / 2.0)


def gaussian_jitter_efficiency(jitter_width: float, sigma: float,
                               n_nodes: int = 257, span_widths: float = 6.0) -> float:
    """Quadrature route to the jittered matched-detection efficiency.

    Averages the matched-overlap law  exp(-(tau0-t0)^2 / 4 sigma^2)  over a
    Gaussian distribution of the packet centre tau0 with width
    ``jitter_width``.  Independent of the closed form, for cross-checking.
    """
    if sigma <= 0 or jitter_width < 0:
        raise ValidationError("sigma must be positive and jitter nonnegative")
    if jitter_width == 0.0:
        return 1.0
    if n_nodes < 64:
        raise ValidationError("need at least 64 quadrature nodes")
    tau = np.linspace(-span_widths * jitter_width, span_widths * jitter_width, n_nodes)
    dx = tau[1] - tau[0]
    prior = np.exp(-tau ** 2 / (2 * jitter_width ** 2)) / math.sqrt(2 * math.pi * jitter_width ** 2)
    matched = np.exp(-tau ** 2 / (4 * sigma ** 2))
    w = quadrature_weights(n_nodes, dx)
    return float(w @ (prior * matched))


def mix_discrete_outcomes(elements: Sequence[PovmClickElement],
                          outcome_gram: np.ndarray,
                          probabilities: Sequence[float]):
    """Replace a classical parameter average by a quantum-clock mixture.

    For discrete auxiliary outcomes pi_n that need not be orthogonal, each
    element picks up the weight

        lambda_n = sum_m [Tr(pi_n pi_m) / Tr(pi_m)] Pr(X_m),

    with Tr(pi_m) read off the Gram diagonal.  Orthogonal outcomes reduce
    to the plain mixture lambda_n = Pr(X_n).  Returns (lambda, averaged
    element); the averaged element combines (w0, wT) under lambda.
    """
    g = np.asarray(outcome_gram, dtype=float)
    pr = np.asarray(probabilities, dtype=float)
    n = len(elements)
    if g.shape != (n, n) or pr.shape != (n,):
        raise ValidationError("Gram and probabilities must match the element count")
    if np.abs(g - g.T).max() > 1e-10:
        raise ValidationError("outcome Gram matrix must be symmetric")
    if (np.diag(g) <= 0).any():
        raise ValidationError("outcome Gram matrix needs a positive diagonal")
    eigs = np.linalg.eigvalsh(g)
    if eigs.min() < -1e-10 * max(1.0, eigs.max()):
        raise ValidationError("outcome Gram matrix must be positive semidefinite")
    if (pr < 0).any():
        raise ValidationError("outcome probabilities must be nonnegative")
    lam = g @ (pr / np.diag(g))
    w0 = float(sum(l * e.vacuum_weight for l, e in zip(lam, elements)))
    wt = float(sum(l * e.photon_weight for l, e in zip(lam, elements)))
    mixed = PovmClickElement(w0, wt,
                             elements[0].alpha, elements[0].beta,
                             elements[0].projected_state)
    return lam, mixed
