"""Uniform sampling lattices, quadrature, and Fourier transforms.

Every integral in this package is evaluated on a uniform grid with a
fourth-order end-corrected rule whose weights are the column sums of the
cumulative rule in :func:`cumulative_integral`.  Using one family of rules
for both running integrals and full-interval integrals keeps quantities
like the trigger-mode weight internally consistent: the norm of an
envelope and the exponential of the accumulated decay are computed from
the same discrete operator.

Fourier convention (fixed package-wide, asserted in the test suite):

    F(w) = (2*pi)^{-1/2} * integral f(t) exp(+i*w*t) dt

i.e. unitary with the ``+i w t`` kernel for time -> frequency.  The
conjugate frequency grid of an ``n``-point time grid satisfies the
discrete reciprocity ``dw * dt = 2*pi/n``, which makes the transform an
exactly unitary map on the lattice (discrete Parseval holds to rounding).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import GridMismatchError, ValidationError

# Phase of a sample below this fraction of the peak amplitude is undefined;
# it is carried forward by constant extrapolation instead.
AMPLITUDE_FLOOR = 1e-12


# ---------------------------------------------------------------------------
# Quadrature rules
# ---------------------------------------------------------------------------

def quadrature_weights(n: int, dx: float) -> np.ndarray:
    """Weights of the fourth-order end-corrected rule on ``n`` uniform points.

    Interior weights equal ``dx``; the first and last four points carry the
    corrections (1/3, 31/24, 5/6, 25/24)*dx.  The rule is exact for cubics
    and reduces gracefully for very short grids (trapezoid for n=2,
    Simpson for n=3).
    """
    if n < 2:
        raise ValidationError(f"quadrature needs at least 2 points, got {n}")
    w = np.full(n, dx)
    if n >= 8:
        edge = dx * np.array([1 / 3, 31 / 24, 5 / 6, 25 / 24])
        w[:4] = edge
        w[-4:] = edge[::-1]
    elif n == 2:
        w[:] = dx / 2
    elif n == 3:
        w[:] = dx * np.array([1 / 3, 4 / 3, 1 / 3])
    else:
        # 4..7 points: trapezoid ends, unit interior
        w[0] = w[-1] = dx / 2
    return w


def cumulative_integral(samples: np.ndarray, dx: float) -> np.ndarray:
    """Running integral from the left edge at every grid point.

    Each interval increment integrates the cubic through the four nearest
    samples, so the local error is O(dx^5) and the accumulated error at any
    point is governed by the integrand's local derivatives rather than by
    the global span.  That locality is what lets the Bernoulli inversion
    resolve denominators ~1e-12 without catastrophic cancellation.
    """
    y = np.asarray(samples)
    n = y.shape[0]
    out_dtype = np.result_type(y.dtype, float)
    if n < 2:
        raise ValidationError("cumulative integral needs at least 2 points")
    if n == 2:
        inc = dx * 0.5 * (y[:-1] + y[1:])
    elif n == 3:
        inc = np.empty(2, dtype=out_dtype)
        inc[0] = dx * (5 * y[0] + 8 * y[1] - y[2]) / 12.0
        inc[1] = dx * (-y[0] + 8 * y[1] + 5 * y[2]) / 12.0
    else:
        inc = np.empty(n - 1, dtype=out_dtype)
        inc[1:-1] = dx * (-y[:-3] + 13 * y[1:-2] + 13 * y[2:-1] - y[3:]) / 24.0
        inc[0] = dx * (9 * y[0] + 19 * y[1] - 5 * y[2] + y[3]) / 24.0
        inc[-1] = dx * (y[-4] - 5 * y[-3] + 19 * y[-2] + 9 * y[-1]) / 24.0
    out = np.empty(n, dtype=inc.dtype)
    out[0] = 0.0
    np.cumsum(inc, out=out[1:])
    return out


# ---------------------------------------------------------------------------
# Grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TimeGrid:
    """Uniform time lattice on [t_start, t_end] with both endpoints included."""

    t_start: float
    t_end: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 2:
            raise ValidationError(f"n_points must be >= 2, got {self.n_points}")
        if not (np.isfinite(self.t_start) and np.isfinite(self.t_end)):
            raise ValidationError("grid endpoints must be finite")
        if self.t_end <= self.t_start:
            raise ValidationError(
                f"t_end ({self.t_end}) must exceed t_start ({self.t_start})")

    @property
    def spacing(self) -> float:
        return (self.t_end - self.t_start) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return self.t_start + self.spacing * np.arange(self.n_points)

    @property
    def span(self) -> float:
        return self.t_end - self.t_start

    def weights(self) -> np.ndarray:
        return quadrature_weights(self.n_points, self.spacing)

    def index_of(self, t: float, tol: float = 1e-6) -> int:
        """Index of the grid node at ``t``; error if ``t`` is off-lattice."""
        j = int(round((t - self.t_start) / self.spacing))
        if j < 0 or j >= self.n_points or abs(self.t_start + j * self.spacing - t) > tol * self.spacing:
            raise ValidationError(f"time {t} is not a node of {self}")
        return j


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform angular-frequency lattice on [omega_start, omega_end]."""

    omega_start: float
    omega_end: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 2:
            raise ValidationError(f"n_points must be >= 2, got {self.n_points}")
        if not (np.isfinite(self.omega_start) and np.isfinite(self.omega_end)):
            raise ValidationError("grid endpoints must be finite")
        if self.omega_end <= self.omega_start:
            raise ValidationError("omega_end must exceed omega_start")

    @property
    def spacing(self) -> float:
        return (self.omega_end - self.omega_start) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return self.omega_start + self.spacing * np.arange(self.n_points)

    @property
    def span(self) -> float:
        return self.omega_end - self.omega_start

    def weights(self) -> np.ndarray:
        return quadrature_weights(self.n_points, self.spacing)


def conjugate_grid(grid: TimeGrid) -> FrequencyGrid:
    """Frequency lattice conjugate to ``grid`` under the discrete transform.

    Satisfies dw*dt = 2*pi/n with frequencies centred on zero (the node
    layout of an fftshifted DFT axis).
    """
    n = grid.n_points
    dw = 2 * np.pi / (n * grid.spacing)
    start = -(n // 2) * dw
    return FrequencyGrid(start, start + (n - 1) * dw, n)


def _grids_conjugate(tgrid: TimeGrid, fgrid: FrequencyGrid, tol=1e-9) -> bool:
    ref = conjugate_grid(tgrid)
    return (
        fgrid.n_points == ref.n_points
        and abs(fgrid.omega_start - ref.omega_start) <= tol * max(1.0, abs(ref.omega_start))
        and abs(fgrid.spacing - ref.spacing) <= tol * ref.spacing
    )


# ---------------------------------------------------------------------------
# Envelopes
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ComplexEnvelope:
    """A sampled complex function of time or angular frequency.

    Immutable; ``samples`` has one value per grid node.  The amplitude is
    ``|samples|``.  The phase is only physically meaningful where the
    amplitude exceeds ``AMPLITUDE_FLOOR`` times the peak; below that it is
    filled by constant extrapolation from the nearest live sample.
    """

    grid: TimeGrid | FrequencyGrid
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        if samples.ndim != 1 or samples.shape[0] != self.grid.n_points:
            raise ValidationError(
                f"samples shape {samples.shape} does not match grid "
                f"with {self.grid.n_points} points")
        bad = np.nonzero(~np.isfinite(samples))[0]
        if bad.size:
            raise ValidationError(f"non-finite sample at index {bad[0]}")
        object.__setattr__(self, "samples", samples)

    @property
    def amplitude(self) -> np.ndarray:
        return np.abs(self.samples)

    @property
    def phase(self) -> np.ndarray:
        """Unwrapped-free pointwise phase with floor extrapolation."""
        amp = self.amplitude
        floor = AMPLITUDE_FLOOR * amp.max() if amp.max() > 0 else 0.0
        live = amp > floor
        ph = np.angle(self.samples)
        if not live.any():
            return np.zeros_like(ph)
        if not live.all():
            idx = np.arange(ph.size)
            # forward fill, then backfill the leading dead region
            last = np.maximum.accumulate(np.where(live, idx, -1))
            first_live = idx[live][0]
            last[last < 0] = first_live
            ph = ph[last]
        return ph

    @property
    def norm_squared(self) -> float:
        return float(np.real(self.grid.weights() @ (np.abs(self.samples) ** 2)))

    def normalized(self) -> "ComplexEnvelope":
        n2 = self.norm_squared
        if n2 <= 0:
            raise ValidationError("cannot normalize an envelope with zero norm")
        return ComplexEnvelope(self.grid, self.samples / np.sqrt(n2))


def quadrature(envelope: ComplexEnvelope) -> complex:
    """Integral of the envelope over its grid (fourth-order rule)."""
    return complex(envelope.grid.weights() @ envelope.samples)


def resample(envelope: ComplexEnvelope, new_grid) -> ComplexEnvelope:
    """Cubic-spline resampling onto ``new_grid``; zero outside the source span."""
    if type(new_grid) is not type(envelope.grid):
        raise GridMismatchError("cannot resample between time and frequency grids")
    x_old = envelope.grid.points
    x_new = new_grid.points
    if (new_grid.n_points == envelope.grid.n_points
            and abs(x_new[0] - x_old[0]) <= 1e-12 * max(1.0, abs(x_old[0]))
            and abs(new_grid.spacing - envelope.grid.spacing) <= 1e-12 * envelope.grid.spacing):
        return ComplexEnvelope(new_grid, envelope.samples.copy())
    sp_re = CubicSpline(x_old, envelope.samples.real)
    sp_im = CubicSpline(x_old, envelope.samples.imag)
    vals = sp_re(x_new) + 1j * sp_im(x_new)
    vals[(x_new < x_old[0]) | (x_new > x_old[-1])] = 0.0
    return ComplexEnvelope(new_grid, vals)


def overlap(bra: ComplexEnvelope, ket: ComplexEnvelope) -> complex:
    """Inner product  integral conj(bra) * ket  on the bra's grid."""
    if ket.grid != bra.grid:
        ket = resample(ket, bra.grid)
    return complex(bra.grid.weights() @ (np.conj(bra.samples) * ket.samples))


def zero_pad(envelope: ComplexEnvelope, n_total: int) -> ComplexEnvelope:
    """Embed into a wider grid of ``n_total`` points (zeros on both sides)."""
    if not isinstance(envelope.grid, TimeGrid):
        raise ValidationError("zero_pad expects a time-domain envelope")
    n = envelope.grid.n_points
    if n_total < n:
        raise ValidationError("n_total smaller than the envelope")
    extra = n_total - n
    left = extra // 2
    dt = envelope.grid.spacing
    start = envelope.grid.t_start - left * dt
    grid = TimeGrid(start, start + (n_total - 1) * dt, n_total)
    samples = np.zeros(n_total, dtype=complex)
    samples[left:left + n] = envelope.samples
    return ComplexEnvelope(grid, samples)


# ---------------------------------------------------------------------------
# Fourier transforms
# ---------------------------------------------------------------------------

def fourier_transform(envelope: ComplexEnvelope, sign: int = +1) -> ComplexEnvelope:
    """Unitary transform time -> frequency with kernel exp(sign*i*w*t).

    The result lives on the conjugate grid of the input.  Aliasing is the
    caller's responsibility: the input must effectively vanish at the grid
    edges and be band-limited within the conjugate grid.
    """
    if not isinstance(envelope.grid, TimeGrid):
        raise GridMismatchError("fourier_transform expects a time-domain envelope")
    if sign not in (+1, -1):
        raise ValidationError("sign convention must be +1 or -1")
    tgrid = envelope.grid
    n = tgrid.n_points
    fgrid = conjugate_grid(tgrid)
    omega = fgrid.points
    dt = tgrid.spacing
    if sign == +1:
        core = np.fft.fftshift(np.fft.ifft(envelope.samples)) * n
    else:
        core = np.fft.fftshift(np.fft.fft(envelope.samples))
    spec = core * dt / np.sqrt(2 * np.pi) * np.exp(sign * 1j * omega * tgrid.t_start)
    return ComplexEnvelope(fgrid, spec)


def inverse_fourier_transform(envelope: ComplexEnvelope, time_grid: TimeGrid,
                              sign: int = +1) -> ComplexEnvelope:
    """Inverse of :func:`fourier_transform`; exact on conjugate lattices."""
    if not isinstance(envelope.grid, FrequencyGrid):
        raise GridMismatchError("inverse transform expects a frequency-domain envelope")
    if not _grids_conjugate(time_grid, envelope.grid):
        raise GridMismatchError(
            "frequency grid is not conjugate to the requested time grid")
    if sign not in (+1, -1):
        raise ValidationError("sign convention must be +1 or -1")
    omega = envelope.grid.points
    dw = envelope.grid.spacing
    h = np.fft.ifftshift(envelope.samples * np.exp(-sign * 1j * omega * time_grid.t_start))
    if sign == +1:
        vals = np.fft.fft(h)
    else:
        vals = np.fft.ifft(h) * time_grid.n_points
    return ComplexEnvelope(time_grid, vals * dw / np.sqrt(2 * np.pi))


# ---------------------------------------------------------------------------
# Serialization (CSV, bit-exact roundtrip)
# ---------------------------------------------------------------------------

_COORD_NAMES = {TimeGrid: "t", FrequencyGrid: "omega"}


def write_envelope_csv(envelope: ComplexEnvelope, path) -> None:
    """Write (coordinate, re, im) rows with a one-line header."""
    coord = _COORD_NAMES[type(envelope.grid)]
    xs = envelope.grid.points
    with open(path, "w") as fh:
        fh.write(f"{coord},re,im\n")
        for x, v in zip(xs, envelope.samples):
            fh.write(f"{x:.17g},{v.real:.17g},{v.imag:.17g}\n")


def read_envelope_csv(path) -> ComplexEnvelope:
    """Read an envelope written by :func:`write_envelope_csv`."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if len(header) != 3 or header[1] != "re" or header[2] != "im":
            raise ValidationError(f"unrecognized envelope CSV header: {header}")
        data = np.loadtxt(fh, delimiter=",")
    if data.ndim != 2 or data.shape[1] != 3 or data.shape[0] < 2:
        raise ValidationError("envelope CSV must have >= 2 rows of 3 columns")
    xs = data[:, 0]
    if header[0] == "t":
        grid = TimeGrid(xs[0], xs[-1], xs.size)
    elif header[0] == "omega":
        grid = FrequencyGrid(xs[0], xs[-1], xs.size)
    else:
        raise ValidationError(f"unknown coordinate column '{header[0]}'")
    return ComplexEnvelope(grid, data[:, 1] + 1j * data[:, 2])
