"""Analytic smoothing of finitely differentiable functions.

Action-direction smoothing convolves with the Fourier transform K of an even
compactly supported bump; angle directions are handled by reweighting Fourier
coefficients with a bump evaluated at s*k and truncating, which produces a
band-limited trigonometric polynomial.  The annulus pipeline combines both
through an action cutoff.

Both bumps are flat (identically 1) on a plateau ball, so K has all moments
beyond the zeroth equal to zero and low harmonics pass through exactly; this
is what gives the C^p approximation rate for every regularity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ResolutionError
from .fourier import CoefficientTable, split_axes
from .gridfn import Axis, GridFunction
from .norms import holder_norm_estimate
from .trigpoly import ActionPoly, TrigPoly, l1

_TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# bumps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BumpSpec:
    """Even C-infinity bump: 1 on the plateau ball, 0 outside the support ball.

    `ball` selects the norm of the balls: 2 for the action kernel, 1 for the
    angle-truncation bump (so the harmonic support is an l1 ball, and the
    Jackson truncation |k|_1 <= 1/s is exact).
    """

    dim: int
    plateau: float = 0.5
    support: float = 1.0
    ball: int = 2

    def __post_init__(self):
        if not (0 < self.plateau < self.support):
            raise DomainError("need 0 < plateau < support")
        if self.ball not in (1, 2):
            raise DomainError("ball must be 1 or 2")


def _smoothstep(t):
    """C-infinity transition: 1 for t <= 0, 0 for t >= 1."""
    t = np.asarray(t, dtype=float)
    lo = np.exp(-1.0 / np.clip(1.0 - t, 1e-300, None))
    hi = np.exp(-1.0 / np.clip(t, 1e-300, None))
    lo = np.where(t >= 1.0, 0.0, lo)
    hi = np.where(t <= 0.0, 0.0, hi)
    out = lo / (lo + hi)
    return out


def bump(x, spec: BumpSpec):
    """Evaluate the bump at points `x` of shape (..., dim) or scalars (dim 1)."""
    x = np.asarray(x, dtype=float)
    if spec.dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        r = np.abs(x)
    elif spec.ball == 1:
        r = np.abs(x).sum(axis=-1)
    else:
        r = np.sqrt((x * x).sum(axis=-1))
    t = (r - spec.plateau) / (spec.support - spec.plateau)
    return _smoothstep(t)


def bump_at_harmonic(k, s, spec: BumpSpec) -> float:
    """Bump value at s*k for an integer harmonic k."""
    arr = s * np.asarray(k, dtype=float)
    if spec.ball == 1:
        r = np.abs(arr).sum()
    else:
        r = float(np.sqrt((arr * arr).sum()))
    return float(_smoothstep((r - spec.plateau) / (spec.support - spec.plateau)))


# ---------------------------------------------------------------------------
# kernel
# ---------------------------------------------------------------------------

def _quad_nodes(spec: BumpSpec, nodes: int):
    """Midpoint tensor rule over the support box; returns (points, weight)."""
    h = 2.0 * spec.support / nodes
    line = -spec.support + h * (np.arange(nodes) + 0.5)
    mesh = np.meshgrid(*([line] * spec.dim), indexing="ij")
    pts = np.stack([m.reshape(-1) for m in mesh], axis=-1)
    return pts, h**spec.dim


def kernel(y, spec: BumpSpec, quadrature_nodes: int = 512, check: bool = False):
    """K(y) = (2 pi)^{-d} int Phi(eta) e^{-i eta.y} d eta, entire in y.

    `y` may be complex with shape (..., dim); scalars are accepted for dim 1.
    With `check=True` the quadrature is repeated at doubled resolution and a
    relative disagreement above 1e-8 raises `ResolutionError`.
    """
    if quadrature_nodes < 32:
        raise DomainError("need at least 32 quadrature nodes per axis")
    y = np.asarray(y, dtype=complex)
    scalar = False
    if spec.dim == 1 and (y.ndim == 0 or (y.ndim >= 1 and y.shape[-1] != 1)):
        y = y.reshape(y.shape + (1,))
    if y.ndim == 1:
        y = y[None, :]
        scalar = True
    flat = y.reshape(-1, spec.dim)

    def compute(nodes):
        pts, w = _quad_nodes(spec, nodes)
        phi = bump(pts, spec) if spec.dim > 1 else bump(pts[:, 0], spec)
        phase = np.exp(-1j * flat @ pts.T.astype(complex))
        return (phase @ phi.astype(complex)) * (w / _TWO_PI**spec.dim)

    vals = compute(quadrature_nodes)
    if check:
        fine = compute(2 * quadrature_nodes)
        scale = max(np.max(np.abs(fine)), 1e-300)
        if np.max(np.abs(fine - vals)) > 1e-8 * scale:
            raise ResolutionError("kernel quadrature not converged; increase nodes")
        vals = fine
    out = vals.reshape(y.shape[:-1])
    return out[0] if scalar else out


@dataclass
class KernelTable:
    """Tabulated kernel values with the quadrature resolution that made them."""

    spec: BumpSpec
    points: np.ndarray
    values: np.ndarray
    quadrature_nodes: int

    @classmethod
    def tabulate(cls, spec, points, quadrature_nodes=512):
        vals = kernel(points, spec, quadrature_nodes)
        return cls(spec, np.asarray(points), np.asarray(vals), quadrature_nodes)

    def validate(self, tol=1e-6):
        """Evenness, positivity at 0, and unit integral (dim-1 tables)."""
        k0 = complex(kernel(np.zeros(self.spec.dim), self.spec, self.quadrature_nodes))
        if not (abs(k0.imag) < tol and k0.real > 0):
            raise DomainError("kernel at 0 must be real and positive")
        probe = np.linspace(0.3, 5.7, 7)
        if self.spec.dim == 1:
            plus = kernel(probe, self.spec, self.quadrature_nodes)
            minus = kernel(-probe, self.spec, self.quadrature_nodes)
            if np.max(np.abs(plus - minus)) > tol:
                raise DomainError("kernel is not even")
            total = kernel_integral(self.spec, self.quadrature_nodes)
            if abs(total - 1.0) > tol:
                raise DomainError(f"kernel integral {total} != 1")
        return True


def kernel_integral(spec: BumpSpec, quadrature_nodes=512, extent=200.0, step=0.05):
    """Trapezoid of K over [-extent, extent]^dim; equals Phi(0) = 1."""
    if spec.dim != 1:
        raise DomainError("integral check implemented for dim 1")
    x = np.arange(-extent, extent + step / 2, step)
    vals = kernel(x, spec, quadrature_nodes)
    return float(np.real(np.trapz(vals, dx=step)))


def kernel_decay_table(spec: BumpSpec, radii, quadrature_nodes=512) -> dict:
    """|K(x)| (1+|x|)^{dim+1} tabulated, with a doubled-resolution check.

    The resolution change is reported relative to the sup of the weighted
    table (the kernel oscillates through zeros, so pointwise relative change
    is not meaningful there).
    """
    radii = np.asarray(radii, dtype=float)
    if spec.dim != 1:
        raise DomainError("decay table implemented for dim 1")
    base = kernel(radii, spec, quadrature_nodes)
    fine = kernel(radii, spec, 2 * quadrature_nodes)
    weight = (1.0 + np.abs(radii)) ** (spec.dim + 1)
    table = np.abs(fine) * weight
    sup = float(np.max(table))
    change = float(np.max(np.abs(fine - base) * weight) / max(sup, 1e-300))
    return {
        "radii": radii,
        "weighted": table,
        "fitted_constant": sup,
        "resolution_change": change,
        "quadrature_nodes": quadrature_nodes,
    }


# ---------------------------------------------------------------------------
# non-periodic smoothing
# ---------------------------------------------------------------------------

@dataclass
class SmoothedField:
    """Smoothed samples on the carrier grid plus complex strip probes."""

    s: float
    values: GridFunction
    strip_probes: dict
    method: str
    diagnostics: dict = field(default_factory=dict)

    @property
    def strip_sup(self) -> float:
        sup = float(np.max(np.abs(self.values.values)))
        for v in self.strip_probes.values():
            sup = max(sup, float(np.max(np.abs(v))))
        return sup


def _check_compact_support(f: GridFunction, tol=1e-9):
    scale = max(float(np.max(np.abs(f.values))), 1e-300)
    for axis in range(f.dim):
        if f.axes[axis].periodic:
            continue
        first = np.take(f.values, 0, axis=axis)
        last = np.take(f.values, f.axes[axis].count - 1, axis=axis)
        if max(np.max(np.abs(first)), np.max(np.abs(last))) > tol * scale:
            raise DomainError("function support touches the grid boundary")


def _fft_refine_1d(vals, refine):
    """Band-preserving refinement of one periodically-extended sample row."""
    n = vals.shape[-1]
    spec = np.fft.fft(vals, axis=-1)
    m = n * refine
    out = np.zeros(vals.shape[:-1] + (m,), dtype=complex)
    half = n // 2
    out[..., :half] = spec[..., :half]
    out[..., m - (n - half):] = spec[..., half:]
    # split the Nyquist bin symmetrically to keep real inputs real
    if n % 2 == 0 and refine > 1:
        out[..., half] = 0.5 * spec[..., half]
        out[..., m - half] = 0.5 * spec[..., half]
    return np.fft.ifft(out, axis=-1) * refine


def _conv_weights(target_idx, n_src, refine, hf, s, spec, quadrature_nodes,
                  kernel_cut, sigma=0.0):
    """Weight matrix W[t, j] = K((x_t - y_j + i sigma)/s) * hf/s.

    Targets sit on the carrier lattice (index i means lo + i*refine*hf), so
    the differences take at most n_src + refine*max(i) distinct values; the
    kernel is tabulated once on that set and indexed (Toeplitz structure).
    """
    target_idx = np.asarray(target_idx, dtype=int)
    offsets = target_idx[:, None] * refine - np.arange(n_src)[None, :]
    lo, hi = int(offsets.min()), int(offsets.max())
    diff_vals = np.arange(lo, hi + 1) * (hf / s)
    table = np.zeros(diff_vals.size, dtype=complex)
    mask = np.abs(diff_vals) <= kernel_cut
    if mask.any():
        args = diff_vals[mask].astype(complex)
        if sigma:
            args = args + 1j * (sigma / s)
        table[mask] = kernel(args, spec, quadrature_nodes)
    W = table[offsets - lo] * (hf / s)
    return W if sigma else np.real(W)


def _smooth_stack_quadrature_1d(
    stack, axis_obj: Axis, s, spec, probe_specs, tol, max_rounds, quadrature_nodes, kernel_cut
):
    """Convolution smoothing of (..., N) rows along one action axis.

    Sources are FFT-refined copies of the rows (the carrier is compactly
    supported); refinement doubles until the result moves less than `tol`.
    `probe_specs` maps tags to (carrier node indices, imaginary offset).
    """
    stack = np.asarray(stack, dtype=complex)
    n = axis_obj.count
    h = axis_obj.spacing
    all_idx = np.arange(n)
    prev = None
    diag = {"rounds": [], "method": "quadrature"}
    result = None
    refine = 2
    for round_idx in range(max_rounds):
        hf = h / refine
        fine = _fft_refine_1d(stack, refine)
        W = _conv_weights(all_idx, fine.shape[-1], refine, hf, s, spec,
                          quadrature_nodes, kernel_cut)
        result = np.einsum("...m,tm->...t", fine, W)
        if prev is not None:
            move = float(np.max(np.abs(result - prev)))
            diag["rounds"].append({"refine": refine, "move": move})
            if move < tol * max(1.0, float(np.max(np.abs(stack)))):
                break
            if round_idx == max_rounds - 1:
                raise ResolutionError(
                    f"convolution quadrature not converged (last move {move:.3e})"
                )
        else:
            diag["rounds"].append({"refine": refine, "move": float("nan")})
        prev = result
        refine *= 2
    # strip probes at the final refinement
    probes = {}
    refine //= 2
    hf = h / refine
    fine = _fft_refine_1d(stack, refine)
    for tag, (idx, sigma) in probe_specs.items():
        Wp = _conv_weights(idx, fine.shape[-1], refine, hf, s, spec,
                           quadrature_nodes, kernel_cut, sigma=sigma)
        probes[tag] = np.einsum("...m,tm->...t", fine, Wp)
    return result, probes, diag


def _smooth_stack_spectral(stack, action_axes, s, spec, probe_specs):
    """Fourier-multiplier smoothing over the trailing action axes of `stack`.

    The carrier box acts as a period; since the input is compactly supported
    inside the box and K decays superpolynomially, the periodization error is
    far below the smoothing error.
    """
    stack = np.asarray(stack, dtype=complex)
    d = len(action_axes)
    counts = tuple(ax.count for ax in action_axes)
    axes_idx = tuple(range(stack.ndim - d, stack.ndim))
    freqs = [
        _TWO_PI * np.fft.fftfreq(ax.count, d=ax.spacing) for ax in action_axes
    ]
    mesh = np.meshgrid(*freqs, indexing="ij")
    eta = np.stack([m.reshape(-1) for m in mesh], axis=-1)
    mult = bump(s * eta, spec) if d > 1 else bump(s * eta[:, 0], spec)
    mult = mult.reshape(counts)
    spectrum = np.fft.fftn(stack, axes=axes_idx) * mult
    smoothed = np.fft.ifftn(spectrum, axes=axes_idx)
    probes = {}
    for tag, (axis, sigma, take_idx) in probe_specs.items():
        damp_shape = [1] * d
        damp_shape[axis] = counts[axis]
        damp = np.exp(-freqs[axis] * sigma).reshape(damp_shape)
        shifted = np.fft.ifftn(spectrum * damp, axes=axes_idx)
        probes[tag] = shifted[(Ellipsis,) + take_idx] if take_idx else shifted
    return smoothed, probes, {"method": "spectral"}


def smooth_nonperiodic(
    f: GridFunction,
    s: float,
    spec: BumpSpec | None = None,
    method: str | None = None,
    probe_fracs=(0.5, 1.0),
    tol: float = 1e-6,
    max_rounds: int = 4,
    quadrature_nodes: int = 512,
    kernel_cut: float = 256.0,
) -> SmoothedField:
    """JMZ smoothing f_s(x) = s^{-d} int K((x-y)/s) f(y) dy on R^d.

    Requires 0 < s <= 1 and compact support inside the grid.  Returns the
    real part on the carrier nodes plus complex strip probes at imaginary
    offsets `frac * s` along each axis.
    """
    if not (0 < s <= 1):
        raise DomainError("smoothing width s must lie in (0, 1]")
    if any(ax.periodic for ax in f.axes):
        raise DomainError("smooth_nonperiodic expects non-periodic axes")
    _check_compact_support(f)
    d = f.dim
    spec = spec or BumpSpec(dim=d, ball=2)
    if spec.dim != d:
        raise DomainError("bump dimension mismatch")
    if method is None:
        method = "quadrature" if d == 1 else "spectral"

    if method == "quadrature":
        if d != 1:
            raise DomainError("quadrature smoothing is implemented for one action axis")
        probe_specs = {
            (0, frac): (np.arange(f.axes[0].count), frac * s) for frac in probe_fracs
        }
        vals, probes, diag = _smooth_stack_quadrature_1d(
            f.values[None, :], f.axes[0], s, spec, probe_specs, tol, max_rounds,
            quadrature_nodes, kernel_cut,
        )
        vals = vals[0]
        probes = {tag: v[0] for tag, v in probes.items()}
    elif method == "spectral":
        probe_specs = {
            (axis, frac): (axis, frac * s, ()) for axis in range(d) for frac in probe_fracs
        }
        vals, probes, diag = _smooth_stack_spectral(f.values, f.axes, s, spec, probe_specs)
    else:
        raise DomainError(f"unknown smoothing method {method!r}")

    imag_leak = float(np.max(np.abs(np.imag(vals))))
    diag["imag_leak"] = imag_leak
    out = GridFunction(f.axes, np.real(vals))
    return SmoothedField(s=s, values=out, strip_probes=probes, method=method, diagnostics=diag)


# ---------------------------------------------------------------------------
# periodic (Jackson) smoothing
# ---------------------------------------------------------------------------

def jackson_reweight(table: CoefficientTable, s: float, spec: BumpSpec | None = None):
    """Multiply coefficients by Psi(s k) and drop the zeros table-wise."""
    if not (0 < s <= 1):
        raise DomainError("smoothing width s must lie in (0, 1]")
    n = table.angle_dim
    spec = spec or BumpSpec(dim=n, ball=1)
    out = {}
    for k, c in table.coeffs.items():
        w = bump_at_harmonic(k, s, spec)
        if w != 0.0:
            out[k] = np.asarray(c) * w
    return CoefficientTable(angle_dim=n, action_axes=table.action_axes, coeffs=out)


def jackson_smooth(table: CoefficientTable, s: float, spec: BumpSpec | None = None) -> TrigPoly:
    """Jackson polynomial of an angle-only function: Psi(sk)-reweighted truncation.

    The input table must be action-independent (use `smooth_annulus` for
    functions of both actions and angles).  The output support satisfies
    |k|_1 <= 1/s exactly because Psi is supported in the unit l1 ball.
    """
    reweighted = jackson_reweight(table, s, spec)
    return reweighted.to_trigpoly()


# ---------------------------------------------------------------------------
# the annulus pipeline
# ---------------------------------------------------------------------------

@dataclass
class SmoothingReport:
    """Per-width smoothing diagnostics; sweep-level fits are attached later."""

    s: float
    errors: list
    fourier_norm: float
    slopes: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "s": self.s,
            "errors": list(self.errors),
            "fourier_norm": self.fourier_norm,
            "slopes": self.slopes or None,
            "constants": self.constants or None,
            "diagnostics": self.diagnostics,
        }

    def csv_rows(self):
        return [
            (self.s, p, err, self.fourier_norm) for p, err in enumerate(self.errors)
        ]


def box_cutoff_values(action_axes, radius):
    """chi(I) = product of 1D bumps: 1 on B_inf(0, R), 0 outside B_inf(0, 2R)."""
    spec1 = BumpSpec(dim=1, plateau=radius, support=2.0 * radius, ball=2)
    total = None
    for j, ax in enumerate(action_axes):
        line = bump(ax.nodes(), spec1)
        shape = [1] * len(action_axes)
        shape[j] = ax.count
        line = line.reshape(shape)
        total = line if total is None else total * line
    return total


def _sparse_coefficient_table(f, l1_cap, drop_tol=1e-13, n_angles=None):
    """Angle-FFT table keeping only harmonics below the grid band and l1 cap."""
    action_axes, angle_axes = split_axes(f, n_angles)
    n_act, n_ang = len(action_axes), len(angle_axes)
    axes_idx = tuple(range(n_act, n_act + n_ang))
    spec = np.fft.fftn(f.values, axes=axes_idx)
    spec /= np.prod([ax.count for ax in angle_axes])
    counts = [ax.count for ax in angle_axes]
    half = [c // 2 for c in counts]
    mags = np.abs(spec)
    if n_act:
        mags = mags.max(axis=tuple(range(n_act)))
    scale = max(float(mags.max()), 1e-300)
    keep = np.argwhere(mags > drop_tol * scale)
    coeffs = {}
    band = min(half) - 1
    for idx in keep:
        k = tuple(int(v) if v <= h else int(v) - c for v, h, c in zip(idx, half, counts))
        if l1(k) > l1_cap or any(abs(v) > band for v in k):
            continue
        coeffs[k] = np.ascontiguousarray(spec[(Ellipsis,) + tuple(idx)])
    return CoefficientTable(angle_dim=n_ang, action_axes=tuple(action_axes), coeffs=coeffs), band


def _monomial_basis(dim, degree):
    basis = []

    def rec(prefix, remaining, budget):
        if remaining == 0:
            basis.append(tuple(prefix))
            return
        for e in range(budget + 1):
            rec(prefix + [e], remaining - 1, budget - e)

    rec([], dim, degree)
    return sorted(basis)


def _fit_action_polys(coeffs, action_axes, eval_mask, degree):
    """Least-squares polynomial fits of coefficient grids on the eval region."""
    mesh = np.meshgrid(*(ax.nodes() for ax in action_axes), indexing="ij")
    pts = np.stack([m.reshape(-1) for m in mesh], axis=-1)
    flat_mask = eval_mask.reshape(-1)
    pts = pts[flat_mask]
    basis = _monomial_basis(len(action_axes), degree)
    V = np.stack(
        [np.prod(pts ** np.asarray(p, dtype=float), axis=1) for p in basis], axis=1
    )
    polys, residual = {}, 0.0
    for k, c in coeffs.items():
        rhs = np.asarray(c).reshape(-1)[flat_mask]
        sol, *_ = np.linalg.lstsq(V, rhs, rcond=None)
        fit = V @ sol
        residual = max(residual, float(np.max(np.abs(fit - rhs))))
        table = {p: complex(v) for p, v in zip(basis, sol) if v != 0}
        polys[k] = ActionPoly(len(action_axes), table)
    return polys, residual


def smooth_annulus(
    f: GridFunction,
    s: float,
    ell: float,
    radius: float,
    phi_spec: BumpSpec | None = None,
    psi_spec: BumpSpec | None = None,
    method: str = "auto",
    eval_radius: float | None = None,
    fit_degree: int = 8,
    probe_fracs=(0.5, 1.0),
    holder_norm: float | None = None,
    tol: float = 1e-6,
    quadrature_nodes: int = 512,
):
    """Smooth a C^ell function on B_inf(0, 2R) x T^n; returns (TrigPoly, report).

    Applies the action cutoff chi, smooths each angle-harmonic coefficient in
    the action directions, reweights by Psi(s k) and truncates.  The report
    carries C^p errors for p <= floor(ell) measured on the eval ball times the
    torus, and the weighted Fourier norm at widths (s, s).
    """
    if not (0 < s <= 1):
        raise DomainError("smoothing width s must lie in (0, 1]")
    if ell < 1:
        raise DomainError("regularity ell must be at least 1")
    action_axes, angle_axes = split_axes(f)
    n_act, n_ang = len(action_axes), len(angle_axes)
    for ax in action_axes:
        if -ax.lo < 2 * radius or ax.hi < 2 * radius:
            raise DomainError("action grid must contain B_inf(0, 2R) with padding")
    phi_spec = phi_spec or BumpSpec(dim=n_act, ball=2)
    psi_spec = psi_spec or BumpSpec(dim=n_ang, ball=1)
    eval_radius = radius / 2.0 if eval_radius is None else eval_radius
    if method == "auto":
        method = "quadrature" if n_act == 1 else "spectral"

    # action cutoff
    chi = box_cutoff_values(action_axes, radius)
    cut_values = f.values * chi.reshape(chi.shape + (1,) * n_ang)
    fcut = GridFunction(f.axes, cut_values)

    # sparse harmonic table below the truncation cap and the grid band
    table, band = _sparse_coefficient_table(fcut, l1_cap=int(math.floor(1.0 / s)))

    # eval-region mask over the action grid
    mesh = np.meshgrid(*(ax.nodes() for ax in action_axes), indexing="ij")
    eval_mask = np.ones(mesh[0].shape, dtype=bool)
    for m in mesh:
        eval_mask &= np.abs(m) <= eval_radius + 1e-12
    eval_idx = np.argwhere(eval_mask)

    # smooth the coefficient stack along the action axes
    ks = table.harmonics()
    stack = np.stack([table.coeffs[k] for k in ks], axis=0) if ks else np.zeros((0,) + table.action_shape)
    if method == "quadrature":
        if n_act != 1:
            raise DomainError("quadrature smoothing is implemented for one action axis")
        eval_flat = np.nonzero(eval_mask.reshape(-1))[0]
        probe_specs = {
            (0, frac): (eval_flat, frac * s) for frac in probe_fracs
        }
        smoothed, probes, diag = _smooth_stack_quadrature_1d(
            stack, action_axes[0], s, phi_spec, probe_specs, tol,
            max_rounds=4, quadrature_nodes=quadrature_nodes, kernel_cut=256.0,
        )
    else:
        take = tuple(np.ascontiguousarray(eval_idx[:, j]) for j in range(n_act))
        probe_specs = {
            (axis, frac): (axis, frac * s, take)
            for axis in range(n_act)
            for frac in probe_fracs
        }
        smoothed, probes, diag = _smooth_stack_spectral(stack, action_axes, s, phi_spec, probe_specs)

    smoothed_table = CoefficientTable(
        angle_dim=n_ang,
        action_axes=tuple(action_axes),
        coeffs={k: smoothed[i] for i, k in enumerate(ks)},
    )
    final = jackson_reweight(smoothed_table, s, psi_spec)

    # weighted Fourier norm ||f_s||_{s,s} over real nodes and strip probes
    weights = {k: math.exp(l1(k) * s) for k in final.coeffs}
    real_sum = np.zeros(table.action_shape)
    for k, c in final.coeffs.items():
        real_sum += np.abs(c) * weights[k]
    fourier_norm = float(real_sum.max()) if real_sum.size else 0.0
    for tag, pv in probes.items():
        psum = None
        for i, k in enumerate(ks):
            w = bump_at_harmonic(k, s, psi_spec)
            if w == 0.0:
                continue
            term = np.abs(pv[i]) * w * weights.get(k, math.exp(l1(k) * s))
            psum = term if psum is None else psum + term
        if psum is not None and psum.size:
            fourier_norm = max(fourier_norm, float(psum.max()))

    # C^p errors on the eval ball x torus
    synth = np.real(final.synthesize(angle_axes))
    diff = GridFunction(f.axes, f.values - synth)
    for axis in range(n_act):
        diff = diff.restrict(axis, -eval_radius, eval_radius)
    errors = []
    for p in range(int(math.floor(ell + 1e-12)) + 1):
        if p == 0:
            errors.append(float(np.max(np.abs(diff.values))))
        else:
            errors.append(holder_norm_estimate(diff, float(p), _richardson=False).value)

    # polynomial coefficient fits on the eval region
    polys, fit_residual = _fit_action_polys(final.coeffs, action_axes, eval_mask, fit_degree)
    result = TrigPoly(n_ang, polys) if n_act == n_ang else None

    report = SmoothingReport(
        s=s,
        errors=errors,
        fourier_norm=fourier_norm,
        diagnostics={
            "band_limit": band,
            "harmonics": len(final.coeffs),
            "fit_residual": fit_residual,
            "fit_degree": fit_degree,
            "method": method,
            "eval_radius": eval_radius,
            "holder_norm": holder_norm,
            **diag,
        },
    )
    return result if result is not None else final, report


def smoothing_error(f: GridFunction, f_s, p: int, ell: float | None = None,
                    eval_radius: float | None = None) -> float:
    """Discrete C^p norm of f - f_s on the eval ball times the torus."""
    if ell is not None and p > math.floor(ell + 1e-12):
        raise DomainError(f"order p={p} exceeds floor(ell)={math.floor(ell)}")
    if p < 0:
        raise DomainError("order p must be non-negative")
    if isinstance(f_s, GridFunction):
        approx = f_s.values
    elif isinstance(f_s, TrigPoly):
        action_axes, angle_axes = split_axes(f)
        approx = _evaluate_trigpoly_on_grid(f_s, action_axes, angle_axes)
    elif isinstance(f_s, CoefficientTable):
        _, angle_axes = split_axes(f)
        approx = np.real(f_s.synthesize(angle_axes))
    else:
        raise DomainError(f"unsupported smoothed representation {type(f_s)!r}")
    diff = GridFunction(f.axes, f.values - approx)
    if eval_radius is not None:
        for axis in range(diff.dim):
            if not diff.axes[axis].periodic:
                diff = diff.restrict(axis, -eval_radius, eval_radius)
    if p == 0:
        return float(np.max(np.abs(diff.values)))
    return holder_norm_estimate(diff, float(p), _richardson=False).value


def _evaluate_trigpoly_on_grid(g: TrigPoly, action_axes, angle_axes) -> np.ndarray:
    """Separable synthesis of a TrigPoly on a tensor grid."""
    if len(action_axes) != g.n or len(angle_axes) != g.n:
        raise DomainError("grid does not look like the annulus of this TrigPoly")
    amesh = np.meshgrid(*(ax.nodes() for ax in action_axes), indexing="ij")
    apts = np.stack([m.reshape(-1) for m in amesh], axis=-1)
    tmesh = np.meshgrid(*(ax.nodes() for ax in angle_axes), indexing="ij")
    tpts = np.stack([m.reshape(-1) for m in tmesh], axis=-1)
    total = np.zeros((apts.shape[0], tpts.shape[0]), dtype=complex)
    for k, poly in g.terms.items():
        phase = np.exp(1j * (tpts @ np.asarray(k, dtype=float)))
        total += np.outer(poly(apts.astype(complex)), phase)
    shape = tuple(ax.count for ax in action_axes) + tuple(ax.count for ax in angle_axes)
    return np.real(total).reshape(shape)


# ---------------------------------------------------------------------------
# sweep driver
# ---------------------------------------------------------------------------

def fit_loglog_slope(xs, ys):
    """Least-squares slope/intercept of log y against log x."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    mask = (xs > 0) & (ys > 0)
    if mask.sum() < 2:
        return float("nan"), float("nan"), float("nan")
    lx, ly = np.log(xs[mask]), np.log(ys[mask])
    A = np.stack([lx, np.ones_like(lx)], axis=1)
    sol, res, *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = float(np.sqrt(res[0] / lx.size)) if res.size else 0.0
    return float(sol[0]), float(sol[1]), resid


def smoothing_sweep(f: GridFunction, ell: float, widths, radius: float, **kwargs):
    """Run smooth_annulus across widths; attach slope fits and constants."""
    reports = []
    holder = holder_norm_estimate(f, ell).value
    for s in widths:
        _, rep = smooth_annulus(f, s, ell, radius, holder_norm=holder, **kwargs)
        reports.append(rep)
    ws = [r.s for r in reports]
    slopes = {}
    for p in (0, 1):
        errs = [r.errors[p] if p < len(r.errors) else float("nan") for r in reports]
        slope, intercept, resid = fit_loglog_slope(ws, errs)
        slopes[f"p{p}"] = slope
        slopes[f"p{p}_residual"] = resid
    c_a = 0.0
    for r in reports:
        for p, err in enumerate(r.errors):
            c_a = max(c_a, err / (r.s ** (ell - p) * holder))
    c_b = max(r.fourier_norm for r in reports) / holder
    constants = {"C_A_hat": c_a, "C_B_hat": c_b, "holder_norm": holder}
    for r in reports:
        r.slopes = slopes
        r.constants = constants
    return reports
