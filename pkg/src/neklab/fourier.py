"""Discrete Fourier analysis in the angle variables.

`fourier_coefficients` turns a grid-sampled function of (I, theta) into a
table of angle-harmonic coefficients sampled on the action grid; it is the
discrete counterpart of g_k(I) = (2 pi)^{-n} int g(I, v) e^{-i k.v} dv.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResolutionError
from .gridfn import TWO_PI, GridFunction
from .norms import holder_norm_estimate
from .trigpoly import ActionPoly, TrigPoly, l1, linf


@dataclass
class CoefficientTable:
    """Angle-harmonic coefficients sampled on the action grid.

    `coeffs` maps harmonics k to complex arrays over the action axes (0-dim
    arrays when the function has no action dependence).
    """

    angle_dim: int
    action_axes: tuple
    coeffs: dict

    @property
    def action_shape(self):
        return tuple(ax.count for ax in self.action_axes)

    def harmonics(self):
        return sorted(self.coeffs)

    def sup_abs(self, k) -> float:
        return float(np.max(np.abs(self.coeffs[k])))

    def is_real(self, tol=1e-10) -> bool:
        scale = max((self.sup_abs(k) for k in self.coeffs), default=0.0)
        for k, c in self.coeffs.items():
            partner = self.coeffs.get(tuple(-v for v in k))
            if partner is None:
                return False
            if np.max(np.abs(np.conj(partner) - c)) > tol * max(scale, 1.0):
                return False
        return True

    def to_trigpoly(self, tol=0.0) -> TrigPoly:
        """Constant-coefficient TrigPoly; requires no action dependence."""
        n = self.angle_dim
        terms = {}
        for k, c in self.coeffs.items():
            arr = np.asarray(c)
            if arr.ndim != 0:
                flat = arr.reshape(-1)
                if np.max(np.abs(flat - flat[0])) > 1e-12 * max(1.0, np.max(np.abs(flat))):
                    raise DomainError("coefficients are action-dependent")
                arr = flat[0]
            val = complex(arr)
            if abs(val) > tol:
                terms[k] = ActionPoly.constant(n, val)
        return TrigPoly(n, terms)

    def synthesize(self, angle_axes) -> np.ndarray:
        """Values on action_shape x angle grid via the inverse transform."""
        counts = tuple(ax.count for ax in angle_axes)
        spec = np.zeros(self.action_shape + counts, dtype=complex)
        for k, c in self.coeffs.items():
            idx = tuple(v % nn for v, nn in zip(k, counts))
            spec[(Ellipsis,) + idx] += np.asarray(c)
        axes = tuple(range(len(self.action_shape), len(self.action_shape) + len(counts)))
        vals = np.fft.ifftn(spec, axes=axes) * np.prod(counts)
        return vals


def split_axes(f: GridFunction, n_angles=None):
    """Trailing periodic axes are the angles; returns (action_axes, angle_axes)."""
    if n_angles is None:
        n_angles = 0
        for ax in reversed(f.axes):
            if ax.periodic:
                n_angles += 1
            else:
                break
        if n_angles == 0:
            raise DomainError("no trailing periodic angle axes")
    if n_angles < 1 or n_angles > f.dim:
        raise DomainError("invalid angle axis count")
    action_axes = f.axes[: f.dim - n_angles]
    angle_axes = f.axes[f.dim - n_angles :]
    for ax in angle_axes:
        if not ax.periodic:
            raise DomainError("angle axis is not periodic")
        if abs(ax.length - TWO_PI) > 1e-9:
            raise DomainError("angle axes must have period 2*pi")
    if any(ax.periodic for ax in action_axes):
        raise DomainError("periodic action axes are not supported")
    return action_axes, angle_axes


def fourier_coefficients(f: GridFunction, max_order: int, n_angles=None) -> CoefficientTable:
    """Harmonic coefficients for all |k|_inf <= max_order via the DFT.

    Requires at least 2*max_order + 2 nodes per angle axis so the extracted
    band sits strictly below Nyquist.
    """
    if max_order < 0:
        raise DomainError("max_order must be non-negative")
    action_axes, angle_axes = split_axes(f, n_angles)
    for ax in angle_axes:
        if ax.count < 2 * max_order + 2:
            raise ResolutionError(
                f"angle axis with {ax.count} nodes cannot resolve order {max_order}"
            )
    n_act = len(action_axes)
    n_ang = len(angle_axes)
    axes_idx = tuple(range(n_act, n_act + n_ang))
    spec = np.fft.fftn(f.values, axes=axes_idx)
    spec /= np.prod([ax.count for ax in angle_axes])

    # angle axes may start away from 0; carry the phase e^{-i k.lo}
    los = np.array([ax.lo for ax in angle_axes])

    coeffs = {}
    rng = range(-max_order, max_order + 1)
    mesh = np.meshgrid(*([list(rng)] * n_ang), indexing="ij")
    klist = np.stack([m.reshape(-1) for m in mesh], axis=-1)
    for krow in klist:
        k = tuple(int(v) for v in krow)
        idx = tuple(v % ax.count for v, ax in zip(k, angle_axes))
        c = spec[(Ellipsis,) + idx]
        phase = np.exp(-1j * float(np.dot(krow, los)))
        coeffs[k] = np.asarray(c) * phase
    return CoefficientTable(angle_dim=n_ang, action_axes=tuple(action_axes), coeffs=coeffs)


def fourier_decay_check(f: GridFunction, ell: float, max_order=None, n_angles=None) -> dict:
    """Empirical decay constants sup_k |f_k| |k|^{floor(ell)} / ||f||_{C^floor(ell)}.

    Ratios are reported against both the l-infinity and l1 harmonic norms,
    since the bound is stated with an unsubscripted |k|.
    """
    if ell < 1:
        raise DomainError("decay check requires regularity ell >= 1")
    q = int(math.floor(ell + 1e-12))
    _, angle_axes = split_axes(f, n_angles)
    if max_order is None:
        max_order = min(ax.count for ax in angle_axes) // 2 - 1
    table = fourier_coefficients(f, max_order, n_angles)
    norm = holder_norm_estimate(f, float(q))
    ratios_inf, ratios_one = {}, {}
    for k in table.harmonics():
        if all(v == 0 for v in k):
            continue
        mag = table.sup_abs(k)
        ratios_inf[k] = mag * linf(k) ** q / norm.value
        ratios_one[k] = mag * l1(k) ** q / norm.value
    return {
        "order": q,
        "norm_report": norm,
        "max_ratio_linf": max(ratios_inf.values(), default=0.0),
        "max_ratio_l1": max(ratios_one.values(), default=0.0),
        "ratios_linf": ratios_inf,
        "ratios_l1": ratios_one,
    }
