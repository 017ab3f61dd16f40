"""Numerical steepness estimation for integrable Hamiltonians.

Steepness asks that the frequency map, restricted to any subspace orthogonal
to the current frequency, bends away at a controlled rate: along every
m-dimensional frame the maximal projected frequency over drift distances up
to xi must exceed C_m xi^alpha_m.  Margins are estimated by quasi-uniform
sphere sampling plus local refinement, and indices by log-log fits at the
worst sampled configuration.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy import optimize

from .errors import DomainError

#: margins below this are treated as steepness violations
VIOLATION_FLOOR = 1e-12


@dataclass
class FrequencyMap:
    """Frequency map omega = grad h with its Hessian and domain metadata."""

    n: int
    omega: callable
    hessian: callable
    radius: float
    hessian_bound: float
    value: callable = None
    name: str = ""

    def check_consistency(self, rng, samples=8, step=1e-6, tol=1e-5):
        """Finite-difference cross-check of the Hessian against omega."""
        worst = 0.0
        for _ in range(samples):
            I = rng.uniform(-self.radius / 2, self.radius / 2, size=self.n)
            H = np.asarray(self.hessian(I), dtype=float)
            for j in range(self.n):
                e = np.zeros(self.n)
                e[j] = step
                fd = (np.asarray(self.omega(I + e)) - np.asarray(self.omega(I - e))) / (2 * step)
                worst = max(worst, float(np.max(np.abs(fd - H[:, j]))))
            if np.linalg.norm(H, 2) > self.hessian_bound + 1e-9:
                raise DomainError("sampled Hessian exceeds declared bound M")
        if worst > tol:
            raise DomainError(f"omega and Hessian inconsistent (fd error {worst:.2e})")
        return worst


@dataclass
class SubspaceFrame:
    """Orthonormal basis rows spanning an m-dimensional subspace of R^n."""

    basis: np.ndarray

    def __post_init__(self):
        self.basis = np.atleast_2d(np.asarray(self.basis, dtype=float))
        m, n = self.basis.shape
        if not 1 <= m < n:
            raise DomainError("frame must satisfy 1 <= m < n")
        gram = self.basis @ self.basis.T
        if np.max(np.abs(gram - np.eye(m))) > 1e-12:
            raise DomainError("frame basis is not orthonormal")

    @property
    def m(self):
        return self.basis.shape[0]

    @property
    def n(self):
        return self.basis.shape[1]

    @classmethod
    def random(cls, rng, n, m, orthogonal_to=None):
        for _ in range(64):
            raw = rng.normal(size=(m, n))
            if orthogonal_to is not None:
                w = np.asarray(orthogonal_to, dtype=float)
                nw = np.linalg.norm(w)
                if nw > 0:
                    raw -= np.outer(raw @ w, w) / nw**2
            q, r = np.linalg.qr(raw.T)
            if np.min(np.abs(np.diag(r))) > 1e-8:
                return cls(q[:, :m].T)
        raise DomainError("could not draw a well-conditioned frame")

    @classmethod
    def from_vectors(cls, vectors, orthogonal_to=None):
        raw = np.atleast_2d(np.asarray(vectors, dtype=float))
        if orthogonal_to is not None:
            w = np.asarray(orthogonal_to, dtype=float)
            nw = np.linalg.norm(w)
            if nw > 0:
                raw = raw - np.outer(raw @ w, w) / nw**2
        q, r = np.linalg.qr(raw.T)
        if np.min(np.abs(np.diag(r))) < 1e-8:
            return None
        return cls(q[:, : raw.shape[0]].T)

    def reorthogonalized(self, w):
        out = self.from_vectors(self.basis, orthogonal_to=w)
        if out is None:
            raise DomainError("frame degenerates when orthogonalized against omega")
        return out


def _sphere_directions(m, count):
    """Quasi-uniform unit vectors on S^{m-1}: exact for m=1, uniform circle
    for m=2, Fibonacci spiral for m=3, product angle grid beyond."""
    if m == 1:
        return np.array([[1.0], [-1.0]])
    if m == 2:
        t = 2 * np.pi * np.arange(count) / count
        return np.stack([np.cos(t), np.sin(t)], axis=1)
    if m == 3:
        i = np.arange(count) + 0.5
        phi = np.arccos(1 - 2 * i / count)
        golden = np.pi * (1 + math.sqrt(5.0))
        t = golden * i
        return np.stack(
            [np.sin(phi) * np.cos(t), np.sin(phi) * np.sin(t), np.cos(phi)], axis=1
        )
    per = max(3, int(round(count ** (1.0 / (m - 1)))))
    grids = np.meshgrid(*([np.linspace(0, np.pi, per)] * (m - 2) + [np.linspace(0, 2 * np.pi, 2 * per, endpoint=False)]), indexing="ij")
    angles = np.stack([g.reshape(-1) for g in grids], axis=-1)
    dirs = []
    for row in angles:
        v = np.ones(m)
        for j, a in enumerate(row):
            v[j] *= math.cos(a)
            v[j + 1 :] *= math.sin(a)
        dirs.append(v)
    dirs = np.asarray(dirs)
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def _projection_magnitude(fmap, I, frame, u_rows):
    om = np.asarray([fmap.omega(I + u) for u in u_rows], dtype=float)
    return np.linalg.norm(om @ frame.basis.T, axis=1)


def min_projection(
    fmap: FrequencyMap,
    I,
    frame: SubspaceFrame,
    eta: float,
    sphere_samples: int = 64,
    refine: bool = True,
    return_witness: bool = False,
):
    """min over u in the frame with |u|_2 = eta of |pi_Gamma omega(I+u)|_2.

    Quasi-uniform sampling of the radius-eta sphere in the frame, followed by
    a local descent from the best sample (tangent-chart BFGS with retraction).
    """
    I = np.asarray(I, dtype=float)
    if eta <= 0:
        raise DomainError("eta must be positive")
    if np.max(np.abs(I)) + eta > fmap.radius + 1e-12:
        raise DomainError("eta-sphere leaves the declared action domain")
    w = np.asarray(fmap.omega(I), dtype=float)
    if np.linalg.norm(frame.basis @ w) > 1e-8 * max(np.linalg.norm(w), 1.0):
        frame = frame.reorthogonalized(w)
    m = frame.m
    dirs = _sphere_directions(m, sphere_samples)
    mags = _projection_magnitude(fmap, I, frame, eta * dirs @ frame.basis)
    best = int(np.argmin(mags))
    best_val = float(mags[best])
    best_dir = dirs[best]

    if refine and m > 1:
        c0 = dirs[best]
        tangent = np.linalg.svd(np.eye(m) - np.outer(c0, c0))[0][:, : m - 1]

        def objective(t):
            c = c0 + tangent @ t
            c = c / np.linalg.norm(c)
            u = eta * c @ frame.basis
            v = frame.basis @ np.asarray(fmap.omega(I + u), dtype=float)
            return float(v @ v)

        res = optimize.minimize(
            objective, np.zeros(m - 1), method="Nelder-Mead",
            options={"maxiter": 200, "xatol": 1e-10, "fatol": 1e-22},
        )
        if res.fun < best_val**2:
            best_val = float(math.sqrt(max(res.fun, 0.0)))
            c = c0 + tangent @ res.x
            best_dir = c / np.linalg.norm(c)
    if return_witness:
        return best_val, eta * best_dir @ frame.basis
    return best_val


def _eta_grid(xi, eta_samples, anchor=None):
    """Geometric grid in (0, xi] descending from a fixed anchor.

    Anchoring makes the grids nested across xi values, so the margin is
    monotone in xi by construction.
    """
    anchor = xi if anchor is None else anchor
    ratio = 2.0 ** (-0.5)
    pts = anchor * ratio ** np.arange(256)
    pts = pts[(pts <= xi * (1 + 1e-12)) & (pts > 0)]
    return pts[:eta_samples]


def steepness_margin(
    fmap, I, frame, xi: float, eta_samples: int = 12, anchor: float = None, **kwargs
):
    """max over the eta-grid in (0, xi] of min_projection."""
    grid = _eta_grid(xi, eta_samples, anchor)
    if grid.size == 0:
        raise DomainError("empty eta grid")
    return max(min_projection(fmap, I, frame, float(eta), **kwargs) for eta in grid)


@dataclass
class SteepnessProfile:
    alpha: list
    C: list
    delta: float
    residuals: list
    seed: int
    budget: dict = field(default_factory=dict)
    clamped: list = field(default_factory=list)

    def __post_init__(self):
        if any(a < 1 for a in self.alpha) or any(c <= 0 for c in self.C) or self.delta <= 0:
            raise DomainError("invalid steepness profile")

    def to_json(self, **kw):
        return json.dumps(
            {
                "alpha": list(self.alpha),
                "C": list(self.C),
                "delta": self.delta,
                "residuals": list(self.residuals),
                "seed": self.seed,
                "budget": self.budget,
                "clamped": list(self.clamped),
            },
            **kw,
        )


@dataclass
class SteepnessViolation:
    """Zero-margin witness: the frequency projection stays flat along a frame."""

    point: list
    frame: list
    eta: float
    margin: float
    multiplicity: int

    def to_json(self, **kw):
        return json.dumps(
            {
                "violation": True,
                "point": list(self.point),
                "frame": [list(r) for r in self.frame],
                "eta": self.eta,
                "margin": self.margin,
                "multiplicity": self.multiplicity,
            },
            **kw,
        )


def _axis_frames(n, m, w):
    """Deterministic frames from coordinate-axis subsets, orthogonalized
    against omega; they catch degeneracies aligned with the axes."""
    frames = []
    eye = np.eye(n)
    for combo in combinations(range(n), m):
        fr = SubspaceFrame.from_vectors(eye[list(combo)], orthogonal_to=w)
        if fr is not None:
            frames.append(fr)
    return frames


def estimate_indices(
    fmap: FrequencyMap,
    points,
    xi_grid,
    frames_per_multiplicity: int = 16,
    sphere_samples: int = 64,
    seed: int = 0,
    include_axis_frames: bool = True,
    eta_samples: int = 12,
):
    """Fit steepness indices from sampled margins; returns a profile or a
    violation report.

    Per multiplicity the log-log fit is taken at the worst sampled (I, frame)
    pair (smallest margin at the smallest xi), where a degeneracy shows up
    most strongly.
    """
    xi_grid = np.sort(np.asarray(xi_grid, dtype=float))
    if xi_grid.size < 8:
        raise DomainError("need at least 8 xi values")
    if xi_grid[-1] / xi_grid[0] < 4.0 - 1e-9:
        raise DomainError("xi grid must span at least two dyadic decades")
    rng = np.random.default_rng(seed)
    points = [np.asarray(p, dtype=float) for p in points]
    n = fmap.n
    anchor = float(xi_grid[-1])
    alphas, Cs, residuals, clamped = [], [], [], []
    for m in range(1, n):
        worst = None  # (margin at smallest xi, margins over grid, witness)
        for I in points:
            w = np.asarray(fmap.omega(I), dtype=float)
            if np.linalg.norm(w) < 1e-9:
                continue
            frames = [
                SubspaceFrame.random(rng, n, m, orthogonal_to=w)
                for _ in range(frames_per_multiplicity)
            ]
            if include_axis_frames:
                frames.extend(_axis_frames(n, m, w))
            for fr in frames:
                margins = np.array(
                    [
                        steepness_margin(
                            fmap, I, fr, float(xi), eta_samples=eta_samples,
                            anchor=anchor, sphere_samples=sphere_samples,
                        )
                        for xi in xi_grid
                    ]
                )
                if margins.min() < VIOLATION_FLOOR:
                    eta = float(xi_grid[int(np.argmin(margins))])
                    return SteepnessViolation(
                        point=list(I),
                        frame=[list(r) for r in fr.basis],
                        eta=eta,
                        margin=float(margins.min()),
                        multiplicity=m,
                    )
                if worst is None or margins[0] < worst[0]:
                    worst = (float(margins[0]), margins, (I, fr))
        if worst is None:
            raise DomainError("no valid sample points for steepness estimation")
        margins = worst[1]
        lx, ly = np.log(xi_grid), np.log(margins)
        A = np.stack([lx, np.ones_like(lx)], axis=1)
        sol, res, *_ = np.linalg.lstsq(A, ly, rcond=None)
        slope, intercept = float(sol[0]), float(sol[1])
        was_clamped = slope < 1.0
        alphas.append(max(slope, 1.0))
        clamped.append(was_clamped)
        Cs.append(math.exp(intercept))
        residuals.append(float(np.sqrt(res[0] / lx.size)) if res.size else 0.0)
    return SteepnessProfile(
        alpha=alphas,
        C=Cs,
        delta=float(xi_grid[-1]),
        residuals=residuals,
        seed=seed,
        budget={
            "points": len(points),
            "frames_per_multiplicity": frames_per_multiplicity,
            "sphere_samples": sphere_samples,
            "xi_grid": [float(x) for x in xi_grid],
        },
        clamped=clamped,
    )


def verify_steepness(
    fmap: FrequencyMap,
    profile: SteepnessProfile,
    points,
    xi_values=None,
    frames_per_multiplicity: int = 8,
    sphere_samples: int = 32,
    seed: int = 1,
) -> dict:
    """Check margin > C_m xi^alpha_m on a sample; reports the worst ratio."""
    rng = np.random.default_rng(seed)
    if xi_values is None:
        xi_values = profile.delta * 2.0 ** -np.arange(4, dtype=float)
    n = fmap.n
    worst_ratio = math.inf
    failures = []
    min_freq = math.inf
    for I in points:
        I = np.asarray(I, dtype=float)
        w = np.asarray(fmap.omega(I), dtype=float)
        min_freq = min(min_freq, float(np.linalg.norm(w)))
        if np.linalg.norm(w) < 1e-9:
            failures.append({"point": list(I), "reason": "frequency vanishes"})
            continue
        for m in range(1, n):
            frames = [
                SubspaceFrame.random(rng, n, m, orthogonal_to=w)
                for _ in range(frames_per_multiplicity)
            ] + _axis_frames(n, m, w)
            for fr in frames:
                for xi in xi_values:
                    xi = float(xi)
                    if xi > profile.delta:
                        continue
                    margin = steepness_margin(
                        fmap, I, fr, xi, sphere_samples=sphere_samples
                    )
                    bound = profile.C[m - 1] * xi ** profile.alpha[m - 1]
                    ratio = margin / bound if bound > 0 else math.inf
                    if ratio < worst_ratio:
                        worst_ratio = ratio
                    if margin <= bound:
                        failures.append(
                            {
                                "point": list(I),
                                "frame": [list(r) for r in fr.basis],
                                "xi": xi,
                                "margin": margin,
                                "bound": bound,
                            }
                        )
    return {
        "passed": not failures and min_freq > 0,
        "worst_ratio": worst_ratio,
        "min_frequency_norm": min_freq,
        "failures": failures,
        "seed": seed,
    }
