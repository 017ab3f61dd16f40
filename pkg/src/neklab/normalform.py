"""Desk-scale resonant normal form via iterated Lie transforms.

Given H = h(I) + f(I, theta) with f a trigonometric polynomial, each step
solves the homological equation {h, chi} = f_nr for the sub-cutoff
non-resonant part of f, then pushes H through the time-1 flow of chi using
exact TrigPoly algebra (Lie series truncated with tail accounting).  The
result is H o Psi = h + g + f* with g supported on the resonance lattice
below the cutoff and f* small.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DivergenceError, DomainError, SmallDivisorError
from .gridfn import DomainSpec
from .lattices import Lattice
from .norms import weighted_fourier_norm
from .trigpoly import ActionPoly, TrigPoly, l1, poisson_bracket


@dataclass(frozen=True)
class Thresholds:
    """Applicability thresholds of the normal-form lemma."""

    eps: float          # Fourier-norm size of the perturbation
    alpha: float        # small-divisor floor
    rho: float          # action width of the domain
    rho_prime: float    # shrunk action width
    sigma: float        # angle width
    K: float            # ultraviolet cutoff
    xi: float = 2.0     # free parameter > 1
    M: float = 1.0      # Hessian bound

    def __post_init__(self):
        if min(self.alpha, self.rho, self.rho_prime, self.sigma, self.K, self.M) <= 0:
            raise DomainError("threshold quantities must be positive")
        if self.eps < 0:
            raise DomainError("perturbation size must be non-negative")
        if self.xi <= 1:
            raise DomainError("xi must exceed 1")


def check_thresholds(t: Thresholds):
    """(ok, margins): margins >= 1 mean the corresponding condition holds.

    Conditions: eps <= alpha rho' / (256 xi K); rho' <= min(rho,
    alpha / (2 xi M K)); K sigma >= 6.
    """
    size_cap = t.alpha * t.rho_prime / (256.0 * t.xi * t.K)
    margins = {
        "size": math.inf if t.eps == 0 else size_cap / t.eps,
        "width": min(t.rho, t.alpha / (2.0 * t.xi * t.M * t.K)) / t.rho_prime,
        "cutoff": t.K * t.sigma / 6.0,
    }
    return all(m >= 1.0 for m in margins.values()), margins


def project_resonant(f: TrigPoly, lat: Lattice, K: float) -> TrigPoly:
    """Keep exactly the harmonics k in the lattice with |k|_1 <= K."""
    return f.filter(lambda k: l1(k) <= K + 1e-12 and lat.contains(k))


def project_cutoff(f: TrigPoly, K: float) -> TrigPoly:
    return f.filter(lambda k: l1(k) <= K + 1e-12)


def _omega_polys(h: ActionPoly):
    return [h.diff(j) for j in range(h.n)]


def _divisor_poly(k, omega_polys):
    n = len(omega_polys)
    out = ActionPoly(n, center=omega_polys[0].center)
    for kj, wj in zip(k, omega_polys):
        if kj:
            out = out + wj.scale(kj)
    return out


def solve_homological(
    h: ActionPoly,
    f_nr: TrigPoly,
    lat: Lattice,
    K: float,
    domain: DomainSpec,
    alpha: float,
    fit_degree: int = 12,
    sample_per_axis: int = 24,
):
    """Solve {h, chi} = f_nr: chi_k = f_k / (i k.omega).

    Constant divisors divide exactly; action-dependent divisors are handled
    by a least-squares polynomial fit on the domain sample, whose residual is
    returned.  Divisors below `alpha` anywhere on the sample raise
    SmallDivisorError with a witness.
    """
    n = f_nr.n
    center = tuple(domain.centered(n))
    h = h.recenter(center)
    f_nr = f_nr.recenter(center)
    omega_polys = _omega_polys(h)
    sample = domain.action_grid(n, sample_per_axis)
    shifted = sample - np.asarray(center)[None, :]
    terms = {}
    fit_residual = 0.0
    min_divisor = math.inf
    for k, poly in f_nr.terms.items():
        if lat.contains(k):
            raise DomainError(f"harmonic {k} is resonant; split it off first")
        if l1(k) > K + 1e-12:
            raise DomainError(f"harmonic {k} lies above the cutoff")
        div = _divisor_poly(k, omega_polys)
        div_vals = div(sample)
        if np.max(np.abs(np.imag(div_vals))) > 1e-12 * max(1.0, np.max(np.abs(div_vals))):
            raise DomainError("divisor polynomial is not real on the sample")
        div_vals = np.real(div_vals)
        worst = float(np.min(np.abs(div_vals)))
        min_divisor = min(min_divisor, worst)
        if worst < alpha:
            idx = int(np.argmin(np.abs(div_vals)))
            raise SmallDivisorError(
                f"divisor |k.omega| = {worst:.3e} below alpha = {alpha:.3e}",
                k=k, point=list(sample[idx]), value=worst,
            )
        if div.degree() == 0:
            c = complex(div.coeffs.get((0,) * n, 0.0))
            terms[k] = poly.scale(1.0 / (1j * c))
            continue
        vals = poly(sample.astype(complex)) / (1j * div_vals)
        basis = _monomials(n, fit_degree)
        V = np.stack(
            [np.prod(shifted ** np.asarray(p, dtype=float), axis=1) for p in basis],
            axis=1,
        )
        sol, *_ = np.linalg.lstsq(V, vals, rcond=None)
        fit_residual = max(fit_residual, float(np.max(np.abs(V @ sol - vals))))
        terms[k] = ActionPoly(
            n, {p: complex(v) for p, v in zip(basis, sol) if v != 0}, center=center
        )
    chi = TrigPoly(n, terms, center=center)
    return chi, {"fit_residual": fit_residual, "min_divisor": min_divisor}


def _monomials(dim, degree):
    out = []

    def rec(prefix, remaining, budget):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for e in range(budget + 1):
            rec(prefix + [e], remaining - 1, budget - e)

    rec([], dim, degree)
    return sorted(out)


def lie_transform(H: TrigPoly, chi: TrigPoly, order_cap: int = 24,
                  degree_cap: int = 40, chop_tol: float = 1e-16):
    """exp(ad_chi) H as a Lie series; returns (result, dropped-tail mass)."""
    scale = max(H.coeff_mass(), 1.0)
    total = H
    term = H
    dropped = 0.0
    for m in range(1, order_cap + 1):
        term = poisson_bracket(chi, term).scale(1.0 / m)
        term, d1 = term.truncate_degree(degree_cap)
        term, d2 = term.chop(chop_tol * scale)
        dropped += d1 + d2
        mass = term.coeff_mass()
        if mass == 0.0:
            break
        total = total + term
        if mass < chop_tol * scale:
            break
    else:
        dropped += term.coeff_mass()
    return total, dropped


@dataclass
class NormalFormResult:
    """g resonant, f* remainder, and the ordered Lie generators of Psi.

    Psi is the composition of the time-1 generator flows applied last
    generator first: Psi = Phi_{chi_1} o ... o Phi_{chi_N}.
    """

    h: ActionPoly
    g: TrigPoly
    remainder: TrigPoly
    generators: list
    lattice: Lattice
    thresholds: Thresholds
    diagnostics: dict = field(default_factory=dict)

    def to_json(self, **kw):
        return json.dumps(
            {
                "g": self.g.to_dict(),
                "remainder": self.remainder.to_dict(),
                "generators": [c.to_dict() for c in self.generators],
                "lattice": self.lattice.to_dict(),
                "diagnostics": _jsonable(self.diagnostics),
            },
            **kw,
        )


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def normalize(
    h: ActionPoly,
    f: TrigPoly,
    lat: Lattice,
    t: Thresholds,
    domain: DomainSpec,
    steps: int | None = None,
    fit_degree: int = 12,
    stop_tol: float = 1e-14,
) -> NormalFormResult:
    """Iterated Lie normalization of H = h + f relative to the lattice.

    Refuses to run when the thresholds fail.  The number of steps defaults to
    ceil(K sigma / 6), mirroring the exponent of the remainder bound.
    """
    ok, margins = check_thresholds(t)
    if not ok:
        raise DomainError(f"thresholds violated: margins {margins}")
    if steps is None:
        steps = max(1, math.ceil(t.K * t.sigma / 6.0))
    center = tuple(domain.centered(f.n))
    h = h.recenter(center)
    f = f.recenter(center)
    H = TrigPoly.from_action_poly(h) + f
    h_trig = TrigPoly.from_action_poly(h)
    generators = []
    history = []
    dropped_total = 0.0
    fit_residual = 0.0
    for step in range(steps):
        f_cur = H - h_trig
        f_low = project_cutoff(f_cur, t.K)
        f_nr = f_low - project_resonant(f_low, lat, t.K)
        nr_mass = f_nr.coeff_mass()
        history.append(nr_mass)
        if nr_mass < stop_tol * max(1.0, f.coeff_mass()):
            break
        if len(history) >= 3 and history[-1] > 0.5 * history[-2] > 0 and history[-2] >= history[-3]:
            raise DivergenceError(
                "non-resonant mass is not contracting", history=history
            )
        chi, diag = solve_homological(
            h, f_nr, lat, t.K, domain, t.alpha, fit_degree=fit_degree
        )
        fit_residual = max(fit_residual, diag["fit_residual"])
        H, dropped = lie_transform(H, chi)
        dropped_total += dropped
        generators.append(chi)
    f_final = H - h_trig
    g = project_resonant(project_cutoff(f_final, t.K), lat, t.K)
    remainder = f_final - g

    norm_domain = DomainSpec(
        radius=domain.radius, r=t.rho_prime / 2.0, s=t.sigma / 6.0,
        center=domain.center,
    )
    rem_norm = weighted_fourier_norm(remainder, norm_domain, t.sigma / 6.0)
    g0 = project_resonant(project_cutoff(f, t.K), lat, t.K)
    g_dev_norm = weighted_fourier_norm(g - g0, norm_domain, t.sigma / 6.0)
    rem_bound = math.exp(-t.K * t.sigma / 6.0) * t.eps
    g_bound = 64.0 * t.K / (t.alpha * t.rho_prime) * t.eps**2
    diagnostics = {
        "steps_run": len(generators),
        "nonresonant_history": history,
        "dropped_tail": dropped_total,
        "fit_residual": fit_residual,
        "remainder_norm": rem_norm,
        "remainder_bound": rem_bound,
        "remainder_ratio": rem_norm / rem_bound if rem_bound > 0 else math.inf,
        "g_deviation_norm": g_dev_norm,
        "g_deviation_bound": g_bound,
        "g_deviation_ratio": g_dev_norm / g_bound if g_bound > 0 else math.inf,
    }
    return NormalFormResult(
        h=h, g=g, remainder=remainder, generators=generators, lattice=lat,
        thresholds=t, diagnostics=diagnostics,
    )


# ---------------------------------------------------------------------------
# numerical transforms and verification
# ---------------------------------------------------------------------------

def generator_flow(chi: TrigPoly, state, time: float = 1.0, rtol: float = 1e-12):
    """Time-`time` Hamiltonian flow of the generator chi from (I, theta)."""
    n = chi.n
    dI = [chi.dtheta(j) for j in range(n)]
    dTh = [chi.dI(j) for j in range(n)]

    def rhs(_t, z):
        I, th = z[:n], z[n:]
        return np.concatenate(
            [
                [-g.evaluate(I, th) for g in dI],
                [g.evaluate(I, th) for g in dTh],
            ]
        )

    sol = solve_ivp(
        rhs, (0.0, time), np.asarray(state, dtype=float), method="DOP853",
        rtol=rtol, atol=1e-14, dense_output=False,
    )
    if not sol.success:
        raise DivergenceError(f"generator flow failed: {sol.message}")
    return sol.y[:, -1]


def apply_transform(result: NormalFormResult, I, theta, rtol: float = 1e-12):
    """Psi(I, theta): compose the generator flows, last generator first."""
    z = np.concatenate([np.asarray(I, dtype=float), np.asarray(theta, dtype=float)])
    for chi in reversed(result.generators):
        z = generator_flow(chi, z, 1.0, rtol=rtol)
    n = result.g.n
    return z[:n], z[n:]


def verify_normalform(
    result: NormalFormResult,
    h: ActionPoly,
    f: TrigPoly,
    t: Thresholds,
    probe_count: int = 12,
    seed: int = 0,
    fd_step: float = 1e-5,
    domain: DomainSpec | None = None,
) -> dict:
    """Pointwise energy identity, near-identity bounds, symplecticity, support.

    All findings are report content; nothing raises.
    """
    n = result.g.n
    rng = np.random.default_rng(seed)
    dom = domain or DomainSpec(radius=0.25, center=(0.0,) * n)
    center = dom.centered(n)
    h = h.recenter(result.h.center)
    f = f.recenter(result.h.center)
    H = TrigPoly.from_action_poly(h) + f
    normal = TrigPoly.from_action_poly(h) + result.g + result.remainder

    energy_defect = 0.0
    disp_I = 0.0
    disp_th = 0.0
    sympl = 0.0
    J = np.block([
        [np.zeros((n, n)), np.eye(n)],
        [-np.eye(n), np.zeros((n, n))],
    ])
    for _ in range(probe_count):
        I = center + rng.uniform(-dom.radius, dom.radius, size=n)
        th = rng.uniform(0, 2 * np.pi, size=n)
        I1, th1 = apply_transform(result, I, th)
        energy_defect = max(
            energy_defect, abs(float(H.evaluate(I1, th1)) - float(normal.evaluate(I, th)))
        )
        disp_I = max(disp_I, float(np.linalg.norm(I1 - I)))
        dth = np.angle(np.exp(1j * (th1 - th)))
        disp_th = max(disp_th, float(np.max(np.abs(dth))))
        if result.generators:
            D = np.zeros((2 * n, 2 * n))
            z0 = np.concatenate([I, th])
            for col in range(2 * n):
                e = np.zeros(2 * n)
                e[col] = fd_step
                zp = np.concatenate(apply_transform(result, *(np.split(z0 + e, 2))))
                zm = np.concatenate(apply_transform(result, *(np.split(z0 - e, 2))))
                D[:, col] = (zp - zm) / (2 * fd_step)
            sympl = max(sympl, float(np.max(np.abs(D.T @ J @ D - J))))

    support_ok = all(
        l1(k) <= t.K + 1e-12 and result.lattice.contains(k) for k in result.g.terms
    )
    return {
        "energy_defect": energy_defect,
        "action_displacement": disp_I,
        "action_displacement_ratio": disp_I / t.rho_prime,
        "action_displacement_bound": 1.0 / (32.0 * t.xi),
        "angle_displacement": disp_th,
        "angle_displacement_ratio": disp_th / t.sigma,
        "angle_displacement_bound": 1.0 / (24.0 * t.xi),
        "symplecticity_defect": sympl,
        "resonant_support_exact": support_ok,
        "probes": probe_count,
        "seed": seed,
        "fd_step": fd_step,
    }
