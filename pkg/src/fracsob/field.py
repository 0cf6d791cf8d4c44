"""Periodic grid fields on the flat 2-torus.

Everything downstream works on uniform power-of-two grids over [0, L)^2 with
periodic wraparound. Fields are immutable samplings. Two optional attachments
widen what a sampled field can represent:

* ``affine``: a pair (a1, a2) meaning the represented function is
  ``values + a1*(x1 - c1) + a2*(x2 - c2)`` with the linear part understood in
  window coordinates around ``affine_center``. The stored values stay
  periodic; the linear part is handled exactly by gradient, mollification,
  and norm routines. This is how identity-like maps and recovered potentials
  avoid sawtooth artifacts at the wrap seam.
* ``grad_exprs``: closed-form partial derivatives (callables of the mesh),
  used by the analytic gradient scheme for fields whose spectral derivative
  is polluted by a genuine singularity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

GradExpr = tuple[Callable[..., np.ndarray], Callable[..., np.ndarray]]


@dataclass(frozen=True)
class Grid2D:
    """Uniform periodic grid: n1 x n2 nodes over [0, length)^2."""

    n1: int
    n2: int
    length: float = 1.0

    def __post_init__(self) -> None:
        for n in (self.n1, self.n2):
            if n < 8 or (n & (n - 1)) != 0:
                raise ValueError(f"grid size {n} must be a power of two >= 8")
        if not self.length > 0:
            raise ValueError(f"grid length {self.length} must be positive")

    @property
    def h1(self) -> float:
        return self.length / self.n1

    @property
    def h2(self) -> float:
        return self.length / self.n2

    @property
    def cell_area(self) -> float:
        return self.h1 * self.h2

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        x1 = np.arange(self.n1) * self.h1
        x2 = np.arange(self.n2) * self.h2
        return x1, x2

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        x1, x2 = self.axes()
        return np.meshgrid(x1, x2, indexing="ij")

    def wrap_delta(self, d: np.ndarray, axis_length: float | None = None) -> np.ndarray:
        """Minimum-image displacement on the periodic axis."""
        L = self.length if axis_length is None else axis_length
        return (d + L / 2) % L - L / 2

    def torus_distance(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        d1 = self.wrap_delta(x[..., 0] - y[..., 0])
        d2 = self.wrap_delta(x[..., 1] - y[..., 1])
        return np.hypot(d1, d2)

    def frequencies(self) -> tuple[np.ndarray, np.ndarray]:
        """Angular wavenumbers for fft2 layouts, shape-broadcastable."""
        k1 = 2 * np.pi * np.fft.fftfreq(self.n1, d=self.h1)
        k2 = 2 * np.pi * np.fft.fftfreq(self.n2, d=self.h2)
        return k1[:, None], k2[None, :]


@dataclass(frozen=True)
class FracIndex:
    """Fractional smoothness/integrability pair (s, p), 0 < s < 1, p > 1."""

    s: float
    p: float

    def __post_init__(self) -> None:
        if not (0.0 < self.s < 1.0):
            raise ValueError(f"s = {self.s} outside (0, 1)")
        if not self.p > 1.0:
            raise ValueError(f"p = {self.p} must exceed 1")

    @property
    def sp(self) -> float:
        return self.s * self.p

    @property
    def critical(self) -> bool:
        """Whether s*p hits the dimension (here 2)."""
        return abs(self.sp - 2.0) < 1e-12

    @property
    def conjugate(self) -> float:
        return self.p / (self.p - 1.0)


def _freeze(values: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(values, dtype=np.float64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ScalarField:
    grid: Grid2D
    values: np.ndarray
    name: str = ""
    affine: tuple[float, float] | None = None
    affine_center: tuple[float, float] | None = None
    grad_exprs: GradExpr | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.values.shape != (self.grid.n1, self.grid.n2):
            raise ValueError(
                f"values shape {self.values.shape} does not match grid "
                f"({self.grid.n1}, {self.grid.n2})"
            )
        if not np.all(np.isfinite(self.values)):
            bad = np.argwhere(~np.isfinite(self.values))[0]
            raise ValueError(f"non-finite value at node ({bad[0]}, {bad[1]})")
        object.__setattr__(self, "values", _freeze(self.values))
        if self.affine is not None and self.affine_center is None:
            c = self.grid.length / 2
            object.__setattr__(self, "affine_center", (c, c))

    def with_values(self, values: np.ndarray, **kw) -> "ScalarField":
        return replace(self, values=_freeze(values), **kw)

    def total_values(self) -> np.ndarray:
        """Values with the affine part added in window coordinates.

        The linear part jumps at the seam opposite affine_center; callers are
        expected to mask to regions away from the seam.
        """
        if self.affine is None:
            return self.values
        X1, X2 = self.grid.mesh()
        c1, c2 = self.affine_center
        a1, a2 = self.affine
        w1 = self.grid.wrap_delta(X1 - c1)
        w2 = self.grid.wrap_delta(X2 - c2)
        return self.values + a1 * w1 + a2 * w2

    @property
    def mean(self) -> float:
        return float(self.values.mean())


@dataclass(frozen=True)
class VectorField:
    components: tuple[ScalarField, ...]

    def __post_init__(self) -> None:
        if len(self.components) < 1:
            raise ValueError("vector field needs at least one component")
        g = self.components[0].grid
        if any(c.grid != g for c in self.components):
            raise ValueError("vector field components live on different grids")
        object.__setattr__(self, "components", tuple(self.components))

    @property
    def grid(self) -> Grid2D:
        return self.components[0].grid

    @property
    def m(self) -> int:
        return len(self.components)

    def __getitem__(self, k: int) -> ScalarField:
        return self.components[k]

    def stack(self) -> np.ndarray:
        return np.stack([c.values for c in self.components])


def sample(
    expr: Callable[..., np.ndarray],
    grid: Grid2D,
    name: str = "",
    grad: GradExpr | None = None,
    affine: tuple[float, float] | None = None,
) -> ScalarField:
    """Evaluate expr on the grid mesh and wrap it as a field.

    Rejects non-finite evaluations, naming the offending node. ``grad``
    attaches closed-form partials that the analytic gradient scheme can use
    later (e.g. for a cone height whose apex node takes the one-sided limit
    along the first axis).
    """
    X1, X2 = grid.mesh()
    values = np.asarray(expr(X1, X2), dtype=np.float64)
    if values.shape != X1.shape:
        values = np.broadcast_to(values, X1.shape).copy()
    if not np.all(np.isfinite(values)):
        i, j = np.argwhere(~np.isfinite(values))[0]
        raise ValueError(
            f"expression produced a non-finite value at node ({i}, {j}), "
            f"x = ({X1[i, j]:.6g}, {X2[i, j]:.6g})"
        )
    return ScalarField(grid, values, name=name, grad_exprs=grad, affine=affine)


def sample_vector(
    exprs: Sequence[Callable[..., np.ndarray]],
    grid: Grid2D,
    name: str = "",
    grads: Sequence[GradExpr | None] | None = None,
) -> VectorField:
    grads = grads if grads is not None else [None] * len(exprs)
    comps = [
        sample(e, grid, name=f"{name}[{k}]" if name else "", grad=g)
        for k, (e, g) in enumerate(zip(exprs, grads))
    ]
    return VectorField(tuple(comps))


def lp_norm(f: ScalarField, p: float, region: np.ndarray | None = None) -> float:
    """Discrete L^p norm, optionally restricted to a boolean node mask."""
    if not p >= 1.0:
        raise ValueError(f"p = {p} must be >= 1")
    vals = f.total_values() if f.affine is not None else f.values
    if region is not None:
        if region.shape != vals.shape:
            raise ValueError("region mask shape does not match the grid")
        vals = vals[region]
    return float((np.abs(vals) ** p).sum() * f.grid.cell_area) ** (1.0 / p)


def sup_norm(f: ScalarField, region: np.ndarray | None = None) -> float:
    vals = f.total_values() if f.affine is not None else f.values
    if region is not None:
        vals = vals[region]
    return float(np.abs(vals).max())


def lp_norm_vector(
    fields: Sequence[ScalarField],
    p: float,
    region: np.ndarray | None = None,
    weights: Sequence[float] | None = None,
) -> float:
    """L^p norm of the pointwise (weighted) Euclidean magnitude.

    weights square into the magnitude, e.g. (1, 2, 1) for the packed upper
    triangle of a symmetric 2x2 tensor.
    """
    if weights is None:
        weights = [1.0] * len(fields)
    sq = sum(w * np.square(f.total_values() if f.affine is not None else f.values)
             for w, f in zip(weights, fields))
    mag = np.sqrt(sq)
    g = fields[0].grid
    if region is not None:
        mag = mag[region]
    return float((mag**p).sum() * g.cell_area) ** (1.0 / p)


def spectral_gradient_values(grid: Grid2D, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    k1, k2 = grid.frequencies()
    # zero the Nyquist line in the derivative multiplier to keep outputs real
    k1 = k1.copy()
    k2 = k2.copy()
    k1[grid.n1 // 2, 0] = 0.0
    k2[0, grid.n2 // 2] = 0.0
    fh = np.fft.fft2(values)
    d1 = np.fft.ifft2(1j * k1 * fh).real
    d2 = np.fft.ifft2(1j * k2 * fh).real
    return d1, d2


def _centered_gradient_values(grid: Grid2D, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d1 = (np.roll(values, -1, axis=0) - np.roll(values, 1, axis=0)) / (2 * grid.h1)
    d2 = (np.roll(values, -1, axis=1) - np.roll(values, 1, axis=1)) / (2 * grid.h2)
    return d1, d2


def gradient(f: ScalarField, scheme: str = "spectral") -> VectorField:
    """Gradient of a scalar field.

    scheme: 'spectral' (trigonometric differentiation of the periodic part),
    'centered' (second-order differences, local so seam-safe), 'analytic'
    (attached closed-form partials), or 'auto' (analytic when attached,
    else spectral). The affine part contributes its exact constants.
    """
    g = f.grid
    if scheme == "auto":
        scheme = "analytic" if f.grad_exprs is not None else "spectral"
    if scheme == "analytic":
        if f.grad_exprs is None:
            raise ValueError("field has no attached analytic derivatives")
        X1, X2 = g.mesh()
        d1 = np.asarray(f.grad_exprs[0](X1, X2), dtype=np.float64)
        d2 = np.asarray(f.grad_exprs[1](X1, X2), dtype=np.float64)
        d1 = np.broadcast_to(d1, X1.shape).copy()
        d2 = np.broadcast_to(d2, X1.shape).copy()
    elif scheme == "spectral":
        d1, d2 = spectral_gradient_values(g, f.values)
    elif scheme == "centered":
        d1, d2 = _centered_gradient_values(g, f.values)
    else:
        raise ValueError(f"unknown gradient scheme '{scheme}'")
    if f.affine is not None and scheme != "analytic":
        d1 = d1 + f.affine[0]
        d2 = d2 + f.affine[1]
    return VectorField((ScalarField(g, d1), ScalarField(g, d2)))


def second_derivatives(
    f: ScalarField, scheme: str = "spectral"
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(d11, d12, d22) of the periodic part; affine parts drop out.

    'spectral' differentiates the trigonometric interpolant exactly;
    'centered' uses local 3-point stencils, which stay accurate when the
    field carries sharp features whose spectral tail would ring globally.
    """
    g = f.grid
    if scheme == "centered":
        v = f.values
        d11 = (np.roll(v, -1, axis=0) - 2 * v + np.roll(v, 1, axis=0)) / g.h1**2
        d22 = (np.roll(v, -1, axis=1) - 2 * v + np.roll(v, 1, axis=1)) / g.h2**2
        d1 = (np.roll(v, -1, axis=0) - np.roll(v, 1, axis=0)) / (2 * g.h1)
        d12 = (np.roll(d1, -1, axis=1) - np.roll(d1, 1, axis=1)) / (2 * g.h2)
        return d11, d12, d22
    if scheme != "spectral":
        raise ValueError(f"unknown second-derivative scheme '{scheme}'")
    k1, k2 = g.frequencies()
    k1 = k1.copy()
    k2 = k2.copy()
    k1[g.n1 // 2, 0] = 0.0
    k2[0, g.n2 // 2] = 0.0
    fh = np.fft.fft2(f.values)
    d11 = np.fft.ifft2(-(k1**2) * fh).real
    d22 = np.fft.ifft2(-(k2**2) * fh).real
    d12 = np.fft.ifft2(-(k1 * k2) * fh).real
    return d11, d12, d22


def save_field(f: ScalarField | VectorField, path: str | Path) -> None:
    """Write raw little-endian float64 values plus a JSON sidecar header.

    The binary part stores only periodic values; affine slopes and their
    centers live in the sidecar so maps with a linear part survive the round
    trip.  Closed-form gradients do not; loaded fields differentiate
    spectrally.
    """
    path = Path(path)
    comps = f.components if isinstance(f, VectorField) else (f,)
    g = comps[0].grid
    data = np.concatenate([c.values.ravel() for c in comps]).astype("<f8")
    path.write_bytes(data.tobytes())
    name = comps[0].name or path.stem
    header = {"n1": g.n1, "n2": g.n2, "length": g.length, "m": len(comps), "name": name}
    if any(c.affine is not None for c in comps):
        header["affine"] = [list(c.affine) if c.affine is not None else None
                            for c in comps]
        header["affine_center"] = [
            list(c.affine_center) if c.affine_center is not None else None
            for c in comps
        ]
    path.with_suffix(".json").write_text(json.dumps(header, sort_keys=True))


def load_field(path: str | Path) -> ScalarField | VectorField:
    path = Path(path)
    header = json.loads(path.with_suffix(".json").read_text())
    g = Grid2D(header["n1"], header["n2"], header["length"])
    raw = np.frombuffer(path.read_bytes(), dtype="<f8")
    m = header.get("m", 1)
    expected = m * g.n1 * g.n2
    if raw.size != expected:
        raise ValueError(
            f"field file holds {raw.size} values, header implies {expected}"
        )
    affines = header.get("affine", [None] * m)
    centers = header.get("affine_center", [None] * m)
    comps = [
        ScalarField(g, raw[k * g.n1 * g.n2 : (k + 1) * g.n1 * g.n2].reshape(g.n1, g.n2).copy(),
                    name=header.get("name", ""),
                    affine=None if affines[k] is None else tuple(affines[k]),
                    affine_center=None if centers[k] is None else tuple(centers[k]))
        for k in range(m)
    ]
    return comps[0] if m == 1 else VectorField(tuple(comps))


def export_csv(f: ScalarField, path: str | Path) -> None:
    X1, X2 = f.grid.mesh()
    rows = np.column_stack([X1.ravel(), X2.ravel(), f.values.ravel()])
    np.savetxt(path, rows, delimiter=",", header="x1,x2,value", comments="")


def window_mask(grid: Grid2D, half_width: float = 0.25, center: tuple[float, float] | None = None) -> np.ndarray:
    """Boolean mask of the centered square window [c - w, c + w]^2 (torus metric)."""
    L = grid.length
    c = (L / 2, L / 2) if center is None else center
    X1, X2 = grid.mesh()
    d1 = np.abs(grid.wrap_delta(X1 - c[0]))
    d2 = np.abs(grid.wrap_delta(X2 - c[1]))
    return (d1 <= half_width * L) & (d2 <= half_width * L)


def disk_mask(grid: Grid2D, radius: float, center: tuple[float, float] | None = None) -> np.ndarray:
    L = grid.length
    c = (L / 2, L / 2) if center is None else center
    X1, X2 = grid.mesh()
    d1 = grid.wrap_delta(X1 - c[0])
    d2 = grid.wrap_delta(X2 - c[1])
    return d1 * d1 + d2 * d2 <= radius * radius
