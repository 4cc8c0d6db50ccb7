"""Inverse pulse design: from a desired wavepacket to the drive that detects it.

Given a target amplitude A(t) and phase phi(t), the decay rate follows
from the closed-form solution of the underlying Bernoulli equation,

    kappa(t) = A^2(t) / (1 - int_t^T A^2 dt'),

and the detuning from the phase slope, Delta(t) = dphi/dt.  The
denominator is assembled as

    (running mass of A^2 from the grid start up to t)  +  (1 - mass up to T)

so that its error stays proportional to the local integrand: near the
leading tail both contributions are tiny numbers computed from tiny
inputs, which is what allows denominators of order 1e-12 (detection times
many widths past the pulse centre) to come out with sub-1e-8 relative
accuracy.

Besides the generic inversion this module generates the two target
families used throughout: the minimum-uncertainty Gaussian and a smoothed
first-order Hermite-Gaussian that is exactly orthogonal to it.  For the
latter the sign flip at the pulse centre is widened to a dead zone of
half-width z and the amplitude is convolved with a triangular kernel of
full width s <= z, so the pi phase ramp (a triangular detuning profile of
the same width s and area pi) completes while the amplitude is identically
zero.  That containment is exactly what makes the orthogonality hold to
rounding rather than to smoothing accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .forward import DetectorDrive
from .grids import ComplexEnvelope, TimeGrid, cumulative_integral

DENOMINATOR_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class TargetWavepacket:
    """Desired click wavepacket: amplitude, phase, and the detection time.

    ``amplitude`` and ``phase`` describe conj(psi)(t) = A(t) exp(+i phi(t))
    sampled on ``grid``; the grid may (and for accuracy should) extend past
    ``detection_time`` so the mass remaining after T is resolved by
    quadrature instead of by cancellation against 1.  ``detuning``, when
    given, supplies Delta(t) directly and takes precedence over numerical
    differentiation of the phase -- required whenever the phase moves
    inside a zero-amplitude gap.
    """

    grid: TimeGrid
    amplitude: np.ndarray
    phase: np.ndarray
    detection_time: float
    detuning: np.ndarray | None = None

    def __post_init__(self):
        amp = np.asarray(self.amplitude, dtype=float)
        ph = np.asarray(self.phase, dtype=float)
        n = self.grid.n_points
        if amp.shape != (n,) or ph.shape != (n,):
            raise ValidationError("amplitude/phase arrays must match the grid length")
        if not np.isfinite(amp).all() or not np.isfinite(ph).all():
            raise ValidationError("amplitude and phase must be finite")
        if (amp < 0).any():
            raise ValidationError("amplitude must be nonnegative")
        if self.detuning is not None:
            det = np.asarray(self.detuning, dtype=float)
            if det.shape != (n,) or not np.isfinite(det).all():
                raise ValidationError("detuning array must be finite and match the grid")
            object.__setattr__(self, "detuning", det)
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "phase", ph)
        # detection time must be a lattice node so the drive window is exact
        self.grid.index_of(self.detection_time)

    @property
    def detection_index(self) -> int:
        return self.grid.index_of(self.detection_time)

    def envelope(self) -> ComplexEnvelope:
        """The target as a complex envelope psi(t) = A exp(-i phi)."""
        return ComplexEnvelope(self.grid, self.amplitude * np.exp(-1j * self.phase))


def _phase_derivative(phase: np.ndarray, dt: float) -> np.ndarray:
    """Central differences, second-order one-sided stencils at the edges."""
    d = np.empty_like(phase)
    d[1:-1] = (phase[2:] - phase[:-2]) / (2 * dt)
    d[0] = (-3 * phase[0] + 4 * phase[1] - phase[2]) / (2 * dt)
    d[-1] = (3 * phase[-1] - 4 * phase[-2] + phase[-3]) / (2 * dt)
    return d


def invert_to_drive(target: TargetWavepacket) -> DetectorDrive:
    """Drive (kappa, Delta) on [grid start, detection time] detecting ``target``.

    Raises
    ------
    ValidationError
        If the mass accumulated before the detection time leaves the
        denominator below ``DENOMINATOR_FLOOR``; the message names the
        first offending time.  Such a target holds too much of its norm
        before T for any finite-bandwidth drive to track it.
    """
    j_t = target.detection_index
    if j_t < 1:
        raise ValidationError("detection time must lie after the grid start")
    dt = target.grid.spacing
    mass = cumulative_integral(target.amplitude ** 2, dt)
    remainder_after_t = 1.0 - mass[j_t]
    denominator = mass[:j_t + 1] + remainder_after_t
    low = denominator < DENOMINATOR_FLOOR
    if low.any():
        j = int(np.nonzero(low)[0][0])
        t_bad = target.grid.t_start + j * dt
        raise ValidationError(
            f"target carries too much norm before the detection time: "
            f"denominator {denominator[j]:.3e} < {DENOMINATOR_FLOOR} at t = {t_bad!r}")
    kappa = target.amplitude[:j_t + 1] ** 2 / denominator
    if target.detuning is not None:
        delta = target.detuning[:j_t + 1]
    else:
        delta = _phase_derivative(target.phase, dt)[:j_t + 1]
    grid = TimeGrid(target.grid.t_start, target.detection_time, j_t + 1)
    return DetectorDrive(grid, kappa, delta)


# ---------------------------------------------------------------------------
# Target families
# ---------------------------------------------------------------------------

def _anchored_grid(t0: float, detection_time: float, halfspan: float,
                   n_points: int) -> tuple[TimeGrid, float]:
    """Grid symmetric about t0, containing both t0 and T as exact nodes."""
    if detection_time <= t0:
        raise ValidationError("detection time must lie after the pulse centre")
    dt_nominal = 2 * halfspan / (n_points - 1)
    m = max(1, int(round((detection_time - t0) / dt_nominal)))
    dt = (detection_time - t0) / m
    n_half = int(np.ceil(halfspan / dt))
    start = t0 - n_half * dt
    grid = TimeGrid(start, t0 + n_half * dt, 2 * n_half + 1)
    return grid, dt


def gaussian_target(sigma: float, t0: float = 0.0, omega0: float = 0.0,
                    detection_time: float | None = None, n_points: int = 4097,
                    tail_sigmas: float = 10.0,
                    grid: TimeGrid | None = None) -> TargetWavepacket:
    """Minimum-uncertainty Gaussian target of temporal half-width ``sigma``.

    A(t) = (2 pi sigma^2)^{-1/4} exp(-(t-t0)^2 / 4 sigma^2), phase
    (omega0/2) t.  The detuning that reproduces this phase is the constant
    slope omega0/2.  The default grid is symmetric about ``t0``, spans
    ``tail_sigmas`` widths on each side, and contains the detection time as
    an exact node.
    """
    if sigma <= 0:
        raise ValidationError("sigma must be positive")
    if detection_time is None:
        detection_time = t0 + 2 * sigma
    if grid is None:
        grid, _ = _anchored_grid(t0, detection_time, tail_sigmas * sigma, n_points)
    t = grid.points
    amplitude = (2 * np.pi * sigma ** 2) ** (-0.25) * np.exp(-(t - t0) ** 2 / (4 * sigma ** 2))
    phase = (omega0 / 2.0) * t
    detuning = np.full_like(t, omega0 / 2.0)
    return TargetWavepacket(grid, amplitude, phase, detection_time, detuning)


def hermite_gaussian_target(sigma: float, t0: float = 0.0, omega0: float = 0.0,
                            detection_time: float | None = None,
                            gap_halfwidth: float = 0.5, smoothing_width: float = 0.5,
                            n_points: int = 8193, tail_sigmas: float = 12.0,
                            grid: TimeGrid | None = None) -> TargetWavepacket:
    """Smoothed first-order Hermite-Gaussian, orthogonal to the Gaussian family.

    The two lobes of |t'| exp(-t'^2 / 4 sigma^2) are pushed apart so the
    central zero becomes a dead zone of half-width z (``gap_halfwidth``,
    in units of sigma), then amplitude and phase are both convolved with a
    triangular kernel of full width s (``smoothing_width``, units of
    sigma).  Requires z >= s > 0: after smoothing the amplitude vanishes on
    +-(z - s/2) while the pi phase ramp occupies only +-s/2, so the sign
    flip happens entirely at zero amplitude and the overlap with the
    matching Gaussian cancels pairwise on the symmetric lattice.
    """
    if sigma <= 0:
        raise ValidationError("sigma must be positive")
    if not (gap_halfwidth >= smoothing_width > 0):
        raise ValidationError(
            f"need gap_halfwidth >= smoothing_width > 0, got z={gap_halfwidth}, "
            f"s={smoothing_width}")
    z = gap_halfwidth * sigma
    s = smoothing_width * sigma
    if detection_time is None:
        detection_time = t0 + 2 * sigma
    if grid is None:
        grid, _ = _anchored_grid(t0, detection_time, tail_sigmas * sigma, n_points)
    dt = grid.spacing
    t = grid.points
    u = np.abs(t - t0)

    lobe = np.where(u >= z, (u - z) * np.exp(-(u - z) ** 2 / (4 * sigma ** 2)), 0.0)
    half = s / 2.0
    n_k = max(1, int(round(half / dt)))
    ku = np.arange(-n_k, n_k + 1) * dt
    kernel = np.clip(1.0 - np.abs(ku) / half, 0.0, None)
    kernel /= kernel.sum() * dt
    amplitude = np.convolve(lobe, kernel, mode="same") * dt
    amplitude = np.clip(amplitude, 0.0, None)
    norm = np.sqrt(grid.weights() @ amplitude ** 2)
    amplitude /= norm

    # pi flip: triangular detuning of full width s and unit-pi area at t0
    flip_detuning = np.clip(1.0 - u / half, 0.0, None) * (np.pi / half)
    flip_phase = cumulative_integral(flip_detuning, dt)
    phase = (omega0 / 2.0) * t + flip_phase
    detuning = omega0 / 2.0 + flip_detuning
    return TargetWavepacket(grid, amplitude, phase, detection_time, detuning)


def symmetry_check(drive: DetectorDrive, t0: float) -> float:
    """Largest violation of the mirror identity obeyed by drives whose
    target amplitude is time-symmetric about ``t0``:

        kappa(t0 - t) = exp(int_{t0-t}^{t0+t} kappa dt') * kappa(t0 + t).

    The violation is normalized to the decay rate's scale over the compared
    window.  Callers are responsible for ``t0`` actually being a symmetry
    centre; for asymmetric drives the returned number is simply large.
    """
    grid = drive.grid
    j0 = grid.index_of(t0)
    dt = grid.spacing
    k_max = min(j0, grid.n_points - 1 - j0)
    if k_max < 1:
        return 0.0
    cum = cumulative_integral(drive.kappa, dt)
    ks = np.arange(1, k_max + 1)
    left = drive.kappa[j0 - ks]
    right = drive.kappa[j0 + ks]
    growth = np.exp(cum[j0 + ks] - cum[j0 - ks])
    window = np.concatenate([left, right])
    scale = window.max() if window.size else 1.0
    if scale <= 0:
        return 0.0
    return float(np.max(np.abs(left - growth * right)) / scale)
