"""Fourier multiplier operators on the torus.

All operators act diagonally on the fft2 coefficients of the periodic part
of a field. Conventions used throughout:

* ``inv_laplacian`` inverts the analyst's Laplacian, laplacian(inv_laplacian(f)) = f
  on zero-mean fields (multiplier -1/|xi|^2, zero mode dropped).
* ``grad_inv_laplacian`` is the gradient of the Newtonian potential
  (multiplier i xi_k / |xi|^2), the sign chosen so that
  f = -div(grad_inv_laplacian(f)) holds exactly on zero-mean fields.
* the Poisson extension multiplies by exp(-t |xi|) per height t, which keeps
  constants and contracts the sup norm (the discrete kernel is a positive
  summability kernel up to roundoff).
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import gammaincc

from fracsob.field import FracIndex, Grid2D, ScalarField, VectorField


def _xi_magnitude(grid: Grid2D) -> np.ndarray:
    k1, k2 = grid.frequencies()
    return np.hypot(np.broadcast_to(k1, (grid.n1, grid.n2)),
                    np.broadcast_to(k2, (grid.n1, grid.n2)))


def _apply_multiplier(f: ScalarField, mult: np.ndarray) -> np.ndarray:
    return np.fft.ifft2(mult * np.fft.fft2(f.values)).real


def inv_laplacian(f: ScalarField) -> ScalarField:
    """Solve laplacian(u) = f spectrally; a nonzero mean is removed with a warning."""
    if abs(f.mean) > 1e-12 * (1.0 + float(np.abs(f.values).max())):
        warnings.warn(
            f"inv_laplacian input has mean {f.mean:.3e}, removed before inversion",
            stacklevel=2,
        )
    xi = _xi_magnitude(f.grid)
    mult = np.zeros_like(xi)
    nz = xi > 0
    mult[nz] = -1.0 / xi[nz] ** 2
    return ScalarField(f.grid, _apply_multiplier(f, mult))


def grad_inv_laplacian(f: ScalarField) -> VectorField:
    """Gradient of the Newtonian potential of f (zero mode dropped)."""
    g = f.grid
    k1, k2 = g.frequencies()
    xi2 = k1**2 + k2**2
    fh = np.fft.fft2(f.values)
    out = []
    for k in (np.broadcast_to(k1, xi2.shape), np.broadcast_to(k2, xi2.shape)):
        mult = np.zeros_like(xi2, dtype=np.complex128)
        nz = xi2 > 0
        mult[nz] = 1j * k[nz] / xi2[nz]
        out.append(ScalarField(g, np.fft.ifft2(mult * fh).real))
    return VectorField(tuple(out))


def riesz(f: ScalarField) -> VectorField:
    """Riesz transforms (multiplier i xi_k / |xi|, zero mode to zero)."""
    g = f.grid
    k1, k2 = g.frequencies()
    xi = np.hypot(np.broadcast_to(k1, (g.n1, g.n2)), np.broadcast_to(k2, (g.n1, g.n2)))
    fh = np.fft.fft2(f.values)
    out = []
    for k in (np.broadcast_to(k1, xi.shape), np.broadcast_to(k2, xi.shape)):
        mult = np.zeros_like(xi, dtype=np.complex128)
        nz = xi > 0
        mult[nz] = 1j * k[nz] / xi[nz]
        out.append(ScalarField(g, np.fft.ifft2(mult * fh).real))
    return VectorField(tuple(out))


def divergence(v: VectorField) -> ScalarField:
    from fracsob.field import spectral_gradient_values

    g = v.grid
    d1, _ = spectral_gradient_values(g, v[0].values)
    _, d2 = spectral_gradient_values(g, v[1].values)
    out = d1 + d2
    for comp, k in ((v[0], 0), (v[1], 1)):
        if comp.affine is not None:
            out = out + comp.affine[k]
    return ScalarField(g, out)


def poisson_t_ladder(grid: Grid2D, count: int = 32, t_min_factor: float = 0.25,
                     ratio: float = 1.3) -> np.ndarray:
    """Geometric height ladder starting at t_min_factor * h."""
    if not (1.0 < ratio <= 2.0):
        raise ValueError(f"ladder ratio {ratio} outside (1, 2]")
    t_min = t_min_factor * min(grid.h1, grid.h2)
    return t_min * ratio ** np.arange(count)


def poisson_extension(f: ScalarField, t_ladder: np.ndarray) -> list[ScalarField]:
    """Harmonic extension slices exp(-t|xi|) f at each ladder height."""
    t_ladder = np.asarray(t_ladder, dtype=np.float64)
    if t_ladder.ndim != 1 or len(t_ladder) == 0 or np.any(t_ladder <= 0):
        raise ValueError("t ladder must be a nonempty sequence of positive heights")
    if np.any(np.diff(t_ladder) <= 0):
        raise ValueError("t ladder must be strictly increasing")
    xi = _xi_magnitude(f.grid)
    fh = np.fft.fft2(f.values)
    return [
        ScalarField(f.grid, np.fft.ifft2(np.exp(-t * xi) * fh).real)
        for t in t_ladder
    ]


def extension_seminorm(f: ScalarField, idx: FracIndex,
                       t_ladder: np.ndarray | None = None) -> float:
    """Extension-side seminorm (integral of |t^(1-1/p-s) D f^h|^p over x and t).

    Spatial derivatives of each slice are spectral; the height derivative is
    taken spectrally as -|xi| times the slice coefficients, exact for the
    Poisson multiplier. The t integral uses trapezoid weights in log t over
    the geometric ladder plus a closed-form tail for the lowest nonzero
    frequency shell beyond the last height.
    """
    g = f.grid
    if t_ladder is None:
        t_ladder = poisson_t_ladder(g)
    t_ladder = np.asarray(t_ladder, dtype=np.float64)
    if len(t_ladder) < 2:
        raise ValueError("extension seminorm needs at least two ladder heights")
    s, p = idx.s, idx.p
    gamma = 1.0 - 1.0 / p - s
    xi = _xi_magnitude(g)
    fh = np.fft.fft2(f.values)
    k1, k2 = g.frequencies()

    # trapezoid in log t: weight_k = t_k * dlog_k
    logs = np.log(t_ladder)
    dlog = np.zeros_like(logs)
    dlog[1:-1] = (logs[2:] - logs[:-2]) / 2
    dlog[0] = (logs[1] - logs[0]) / 2
    dlog[-1] = (logs[-1] - logs[-2]) / 2

    total = 0.0
    for t, w in zip(t_ladder, dlog * t_ladder):
        slice_h = np.exp(-t * xi) * fh
        d1 = np.fft.ifft2(1j * k1 * slice_h).real
        d2 = np.fft.ifft2(1j * k2 * slice_h).real
        dt = np.fft.ifft2(-xi * slice_h).real
        mag = np.sqrt(d1**2 + d2**2 + dt**2)
        total += w * float(((t**gamma * mag) ** p).sum()) * g.cell_area

    total += _base_mode_tail(f, idx, float(t_ladder[-1]))
    return total ** (1.0 / p)


def _base_mode_tail(f: ScalarField, idx: FracIndex, t_max: float) -> float:
    """Closed-form tail of the t integral past t_max for the base frequency shell."""
    g = f.grid
    xi = _xi_magnitude(g)
    fh = np.fft.fft2(f.values)
    nz = xi > 0
    if not np.any(nz):
        return 0.0
    xi_min = float(xi[nz].min())
    shell = np.isclose(xi, xi_min)
    sh = np.where(shell, fh, 0.0)
    k1, k2 = g.frequencies()
    d1 = np.fft.ifft2(1j * k1 * sh).real
    d2 = np.fft.ifft2(1j * k2 * sh).real
    u = np.fft.ifft2(sh).real
    p = idx.p
    gamma = 1.0 - 1.0 / p - idx.s
    space = float((np.sqrt(d1**2 + d2**2 + (xi_min * u) ** 2) ** p).sum()) * g.cell_area
    a = gamma * p + 1.0
    z = p * xi_min * t_max
    # integral of t^(gamma p) exp(-p xi_min t) over (t_max, inf)
    t_int = (p * xi_min) ** (-a) * gammaincc(a, z) * gamma_fn(a)
    return space * t_int
