"""Built-in benchmark systems and smoothing test families.

These are the fixed, citable systems the acceptance pipelines run against:
a convex n=3 system, the 2-dof system with a resonance whose fast-drift plane
coincides with the resonant manifold (unbounded drift), and a steep
non-convex quartic.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .gridfn import GridFunction, action_axis, angle_axis
from .steepness import FrequencyMap
from .trigpoly import ActionPoly, TrigPoly


def convex3_frequency_map(radius=2.0):
    """h = |I|^2 / 2 in n = 3: omega = I, identity Hessian."""
    n = 3
    return FrequencyMap(
        n=n,
        omega=lambda I: np.asarray(I, dtype=float),
        hessian=lambda I: np.eye(n),
        radius=radius,
        hessian_bound=1.0,
        value=lambda I: 0.5 * float(np.dot(I, I)),
        name="convex3",
    )


def convex3_perturbation():
    """f = cos th1 + cos(th1 - th2) + cos(th2 - th3), unit size."""
    return (
        TrigPoly.cosine(3, (1, 0, 0))
        + TrigPoly.cosine(3, (1, -1, 0))
        + TrigPoly.cosine(3, (0, 1, -1))
    )


def superconductivity_frequency_map(radius=4.0):
    """h = (I1^2 - I2^2)/2: the resonance along (1, -1) is a fast-drift channel."""
    n = 2

    def hess(I):
        return np.diag([1.0, -1.0])

    return FrequencyMap(
        n=n,
        omega=lambda I: np.array([I[0], -I[1]], dtype=float),
        hessian=hess,
        radius=radius,
        hessian_bound=1.0,
        value=lambda I: 0.5 * (I[0] ** 2 - I[1] ** 2),
        name="superconductivity",
    )


def superconductivity_perturbation():
    return TrigPoly.sine(2, (1, -1))


def quartic_steep_frequency_map(radius=2.0):
    """h = I1^2/2 + I2^4/4 + I3^2/2: steep but not convex, index 3 along e2."""
    n = 3

    def omega(I):
        return np.array([I[0], I[1] ** 3, I[2]], dtype=float)

    def hess(I):
        return np.diag([1.0, 3.0 * I[1] ** 2, 1.0])

    return FrequencyMap(
        n=n,
        omega=omega,
        hessian=hess,
        radius=radius,
        hessian_bound=max(1.0, 3.0 * radius**2),
        value=lambda I: 0.5 * I[0] ** 2 + 0.25 * I[1] ** 4 + 0.5 * I[2] ** 2,
        name="quartic-steep",
    )


def steepness_sample_points(name: str, rng, count: int = 6):
    """Designated steepness sample points per benchmark."""
    if name == "convex3":
        pts = rng.normal(size=(count, 3))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        return list(pts * rng.uniform(0.6, 1.0, size=(count, 1)))
    if name == "superconductivity":
        base = np.array([1.0, -1.0])
        return [base + rng.normal(scale=0.05, size=2) * 0 for _ in range(max(1, count // 2))]
    if name == "quartic-steep":
        zs = np.linspace(0.2, 0.6, count)
        return [np.array([1.0, 0.0, z]) for z in zs]
    raise DomainError(f"unknown benchmark {name!r}")


BENCHMARKS = {
    "convex3": (convex3_frequency_map, convex3_perturbation),
    "superconductivity": (superconductivity_frequency_map, superconductivity_perturbation),
    "quartic-steep": (quartic_steep_frequency_map, None),
}


def frequency_map(name: str, radius=None) -> FrequencyMap:
    if name not in BENCHMARKS:
        raise DomainError(f"unknown benchmark {name!r}")
    builder = BENCHMARKS[name][0]
    return builder() if radius is None else builder(radius)


def perturbation(name: str) -> TrigPoly:
    if name not in BENCHMARKS or BENCHMARKS[name][1] is None:
        raise DomainError(f"benchmark {name!r} has no perturbation template")
    return BENCHMARKS[name][1]()


# ---------------------------------------------------------------------------
# smoothing test families of known regularity
# ---------------------------------------------------------------------------

def holder_coefficients(ell: float, band: int) -> np.ndarray:
    """Cosine amplitudes m^{-(ell+1)}, giving Hölder regularity exactly ell."""
    ms = np.arange(1, band + 1, dtype=float)
    return ms ** -(ell + 1.0)


def holder_family_1d(
    ell: float = 2.5,
    band: int = 256,
    action_nodes: int = 512,
    angle_nodes: int = 2048,
    box: float = 6.0,
) -> GridFunction:
    """Angle-rough family on the n=1 annulus: f(I, th) = sum m^{-(ell+1)} cos(m th).

    The action dependence is flat (the cutoff enters during smoothing), so the
    declared regularity is carried entirely by the angle profile.
    """
    ax_I = action_axis(-box, box, action_nodes)
    ax_t = angle_axis(angle_nodes)
    cs = holder_coefficients(ell, band)
    theta = ax_t.nodes()
    profile = np.cos(np.outer(theta, np.arange(1, band + 1))) @ cs
    values = np.broadcast_to(profile[None, :], (action_nodes, angle_nodes)).copy()
    return GridFunction((ax_I, ax_t), values)


def holder_family_2d(
    ell: float = 2.5,
    band: int = 16,
    action_nodes: int = 48,
    angle_nodes: int = 64,
    box: float = 6.0,
) -> GridFunction:
    """n=2 annulus family: axis and diagonal harmonics with m^{-(ell+1)} decay."""
    axes = (
        action_axis(-box, box, action_nodes),
        action_axis(-box, box, action_nodes),
        angle_axis(angle_nodes),
        angle_axis(angle_nodes),
    )
    cs = holder_coefficients(ell, band)
    t = axes[2].nodes()
    t1, t2 = np.meshgrid(t, t, indexing="ij")
    profile = np.zeros_like(t1)
    for m, c in enumerate(cs, start=1):
        profile += c * (np.cos(m * t1) + np.cos(m * t2) + np.cos(m * (t1 + t2)))
    values = np.broadcast_to(
        profile[None, None, :, :], (action_nodes, action_nodes, angle_nodes, angle_nodes)
    ).copy()
    return GridFunction(axes, values)
