"""The geography of resonances: parameters, schedules, zones, blocks, discs.

Everything is relative to a ball around a working action I0, an ultraviolet
cutoff K tied to the perturbation size, and per-lattice zone widths.  The
implicit constants of the construction are configuration values; defaults are
calibrated on the convex n=3 benchmark by `calibrate_prefactors`.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetError, CoveringError, DomainError
from .lattices import Lattice, enumerate_lattices

#: calibrated on convex3 (see calibrate_prefactors); c_gap widens zones by
#: dimension so extended blocks clear the zones of neighbouring lattices
DEFAULT_PREFACTORS = {
    "c_s": 1.0,
    "c_r": 0.01,
    "c_R": 1.0,
    "c_delta": 0.125,
    "c_gap": 4.0,
    "c_alpha": 0.05,
    "c_rj": 1.0,
    "c_T0": 100.0,
    "c_TL": 1.0,
}


@dataclass(frozen=True)
class GeographyParams:
    """Steepness-derived exponent ladder and stability exponents."""

    n: int
    alpha: tuple
    ell: float
    p: tuple
    q: tuple
    c: tuple
    a: float
    b: float
    time_exponent: float
    radius_exponent: float

    def to_dict(self):
        return {
            "n": self.n,
            "alpha": list(self.alpha),
            "ell": self.ell,
            "p": list(self.p),
            "q": list(self.q),
            "c": list(self.c),
            "a": self.a,
            "b": self.b,
            "time_exponent": self.time_exponent,
            "radius_exponent": self.radius_exponent,
        }


def geography_params(n: int, alpha, ell: float) -> GeographyParams:
    """Exponent ladder p_j, q_j, c_j and the stability exponents.

    p_j is the product of the steepness indices from j to n-2 (and 1 at the
    top); q_j = n p_j - j; the global exponents are a = 1/(2 n p_1) and
    b = a / alpha_{n-1}.
    """
    if n < 3:
        raise DomainError("the construction needs n >= 3 degrees of freedom")
    alpha = tuple(float(v) for v in alpha)
    if len(alpha) != n - 1:
        raise DomainError(f"need {n - 1} steepness indices, got {len(alpha)}")
    if any(v < 1 for v in alpha):
        raise DomainError("steepness indices must be >= 1")
    if ell < n + 1:
        raise DomainError("regularity ell must be at least n + 1")
    p = []
    for j in range(1, n + 1):
        if j <= n - 2:
            prod = 1.0
            for i in range(j, n - 1):  # alpha_j .. alpha_{n-2}, 1-indexed
                prod *= alpha[i - 1]
            p.append(prod)
        else:
            p.append(1.0)
    q = tuple(n * p[j - 1] - j for j in range(1, n + 1))
    c = tuple(q[j - 1] - q[j] for j in range(1, n))
    a = 1.0 / (2.0 * n * p[0])
    b = a / alpha[n - 2]
    params = GeographyParams(
        n=n,
        alpha=alpha,
        ell=float(ell),
        p=tuple(p),
        q=q,
        c=c,
        a=a,
        b=b,
        time_exponent=a * (ell - 1.0) + 0.5,
        radius_exponent=b,
    )
    assert params.p[n - 2] == 1.0 and params.p[n - 1] == 1.0
    assert abs(params.q[n - 1] - (n * 1.0 - n)) < 1e-12
    return params


def zone_width(lat: Lattice, K: float, params: GeographyParams, prefactors=None) -> float:
    """delta_Lambda = c_delta c_gap^{j-1} / (|Lambda| K^{q_j})."""
    pf = {**DEFAULT_PREFACTORS, **(prefactors or {})}
    j = lat.rank
    if j == 0:
        raise DomainError("the trivial lattice has no zone width")
    return pf["c_delta"] * pf["c_gap"] ** (j - 1) / (lat.covolume * K ** params.q[j - 1])


def small_divisor_floor(lat: Lattice, K: float, params: GeographyParams, prefactors=None) -> float:
    """alpha_Lambda = c_alpha / (|Lambda| K^{q_j - c_j}); alpha_0 for rank 0."""
    pf = {**DEFAULT_PREFACTORS, **(prefactors or {})}
    j = lat.rank
    if j == 0:
        return pf["c_alpha"] / K ** params.q[0]
    cj = params.c[j - 1] if j - 1 < len(params.c) else 0.0
    return pf["c_alpha"] / (lat.covolume * K ** (params.q[j - 1] - cj))


@dataclass
class Schedule:
    """All epsilon-dependent sizes of the construction.

    `s` is clamped into (0, 1] for use as a smoothing width; `s_raw` is the
    unclamped value, which is what enters the normal-form angle width (the
    two coincide in the small-epsilon regime the estimates live in).
    """

    eps: float
    eps0: float
    params: GeographyParams
    M: float
    prefactors: dict
    K: float
    s: float
    s_raw: float
    r: float
    R: float
    rho: float
    clamped: bool = False

    def delta(self, lat: Lattice) -> float:
        return zone_width(lat, self.K, self.params, self.prefactors)

    def r_lat(self, lat: Lattice) -> float:
        return self.delta(lat) / self.M

    def alpha_lat(self, lat: Lattice) -> float:
        return small_divisor_floor(lat, self.K, self.params, self.prefactors)

    def r_j(self, j: int) -> float:
        # diameter bound of a disc around a rank-j block along its drift plane
        alpha_j = self.params.alpha[j - 1]
        return self.prefactors["c_rj"] / self.K ** (self.params.q[j - 1] / alpha_j)

    def stability_time(self) -> float:
        """T0 of the non-resonant lemma, with its calibrated prefactor."""
        ell, a = self.params.ell, self.params.a
        return self.prefactors["c_T0"] / (
            (1.0 + a * ell) * abs(math.log(self.eps)) ** (ell - 1.0)
            * self.eps ** self.params.time_exponent
        )

    def block_time(self, lat: Lattice) -> float:
        """T_Lambda: escape-or-confinement horizon for a resonant block."""
        ell, a = self.params.ell, self.params.a
        logterm = abs(math.log(self.eps ** (6.0 * (1.0 + a * ell))))
        return (
            self.prefactors["c_TL"] * self.r_lat(lat)
            / (logterm ** (ell - 1.0) * self.eps ** (1.0 + a * (ell - 1.0)))
        )

    def to_dict(self):
        return {
            "eps": self.eps,
            "eps0": self.eps0,
            "M": self.M,
            "K": self.K,
            "s": self.s,
            "s_raw": self.s_raw,
            "r": self.r,
            "R": self.R,
            "rho": self.rho,
            "clamped": self.clamped,
            "prefactors": dict(self.prefactors),
            "params": self.params.to_dict(),
        }


def schedule(eps: float, eps0: float, params: GeographyParams, M: float,
             prefactors=None) -> Schedule:
    """Cutoff and widths as functions of the perturbation size.

    K = (eps0/eps)^a, r ~ (eps/eps0)^{1/2}, and the angle width carries the
    logarithmic factor that balances the normal-form remainder against the
    smoothing remainder.
    """
    if not (0 < eps < eps0):
        raise DomainError("need 0 < eps < eps0 (K >= 1 and a nonzero log)")
    pf = {**DEFAULT_PREFACTORS, **(prefactors or {})}
    x = eps / eps0
    a, ell = params.a, params.ell
    K = (eps0 / eps) ** a
    s_raw = pf["c_s"] * x**a * abs(math.log(x ** (6.0 * (1.0 + a * ell))))
    clamped = s_raw > 1.0
    s = min(1.0, s_raw)
    if K < 1.05:
        warnings.warn("eps is close to eps0: K ~ 1 and the widths degenerate")
    r = pf["c_r"] * math.sqrt(x)
    R = pf["c_R"] * x ** params.b
    return Schedule(
        eps=eps, eps0=eps0, params=params, M=M, prefactors=pf,
        K=K, s=s, s_raw=s_raw, r=r, R=R, rho=R / (2.0 * params.n),
        clamped=clamped,
    )


# ---------------------------------------------------------------------------
# zones, blocks, classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockId:
    multiplicity: int
    lattice: Lattice | None = None

    def __post_init__(self):
        if (self.multiplicity == 0) != (self.lattice is None):
            raise DomainError("rank-0 blocks carry no lattice, others must")

    def label(self) -> str:
        return "D0" if self.lattice is None else f"D[{self.lattice.label()}]"


class Geography:
    """Schedule + lattice universe + frequency map around a working point."""

    def __init__(self, sched: Schedule, omega, center, lattice_budget=2_000_000):
        self.sched = sched
        self.omega = omega
        self.center = np.asarray(center, dtype=float)
        n = sched.params.n
        if self.center.size != n:
            raise DomainError("center dimension mismatch")
        self.lattices = {0: [Lattice.trivial(n, sched.K)]}
        for j in range(1, n):
            self.lattices[j] = enumerate_lattices(n, sched.K, j, budget=lattice_budget)
        self._members = {}
        self._deltas = {}
        self._reachable = {}
        omega0 = np.asarray(omega(self.center), dtype=float)
        for j in range(1, n):
            for lat in self.lattices[j]:
                members = lat.members_within(sched.K)
                self._members[lat.key()] = members
                delta = sched.delta(lat)
                self._deltas[lat.key()] = delta
                # |k.omega(I)| >= |k.omega(I0)| - |k|_2 M R on the ball; if that
                # clears delta for some member, the zone misses the ball entirely
                if members.size:
                    lower = np.abs(members.astype(float) @ omega0) - (
                        np.linalg.norm(members, axis=1) * sched.M * sched.R
                    )
                    self._reachable[lat.key()] = bool(np.all(lower < delta))
                else:
                    self._reachable[lat.key()] = True

    @property
    def n(self):
        return self.sched.params.n

    def all_lattices(self, rank=None):
        if rank is None:
            return [l for j in sorted(self.lattices) for l in self.lattices[j]]
        return self.lattices.get(rank, [])

    def omega_of(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.stack([np.asarray(self.omega(p), dtype=float) for p in pts])

    # ------------------------------------------------------------------ zones
    def zone_reachable(self, lat: Lattice) -> bool:
        """False when the zone provably misses the working ball."""
        return lat.rank == 0 or self._reachable[lat.key()]

    def live_lattices(self, rank: int):
        return [l for l in self.lattices.get(rank, []) if self.zone_reachable(l)]

    def zone_mask(self, points, lat: Lattice) -> np.ndarray:
        """Vectorized strict test |k.omega(I)| < delta for all members k."""
        if lat.rank == 0:
            return np.ones(np.atleast_2d(points).shape[0], dtype=bool)
        if not self._reachable[lat.key()]:
            return np.zeros(np.atleast_2d(points).shape[0], dtype=bool)
        om = self.omega_of(points)
        members = self._members[lat.key()]
        if members.size == 0:
            return np.ones(om.shape[0], dtype=bool)
        prods = np.abs(om @ members.T.astype(float))
        return prods.max(axis=1) < self._deltas[lat.key()]

    def zone_membership(self, I, lat: Lattice) -> bool:
        return bool(self.zone_mask(np.asarray(I, dtype=float)[None, :], lat)[0])

    def _rank_zone_mask(self, points, j: int) -> np.ndarray:
        """Points lying in at least one rank-j zone."""
        pts = np.atleast_2d(points)
        mask = np.zeros(pts.shape[0], dtype=bool)
        for lat in self.live_lattices(j):
            mask |= self.zone_mask(pts, lat)
            if mask.all():
                break
        return mask

    def block_membership(self, I, lat: Lattice) -> bool:
        """I in Z_Lambda and in no zone of rank j+1 (for j = n-1, just the zone)."""
        pts = np.asarray(I, dtype=float)[None, :]
        if not self.zone_mask(pts, lat)[0]:
            return False
        j = lat.rank
        if j >= self.n - 1:
            return True
        return not self._rank_zone_mask(pts, j + 1)[0]

    def classify(self, I) -> BlockId:
        """Containing block of smallest multiplicity, canonical tie-break."""
        pts = np.asarray(I, dtype=float)[None, :]
        for j in range(self.n):
            if j == 0:
                if not self._rank_zone_mask(pts, 1)[0]:
                    return BlockId(0, None)
                continue
            in_next = self._rank_zone_mask(pts, j + 1)[0] if j + 1 <= self.n - 1 else False
            if in_next:
                continue
            for lat in self.lattices[j]:  # canonical order
                if self.zone_mask(pts, lat)[0]:
                    return BlockId(j, lat)
        raise CoveringError("no block contains the point", witness=list(np.asarray(I)))

    def classify_many(self, points):
        """Multiplicities and lattice labels for a batch of points."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        N = pts.shape[0]
        mult = np.full(N, -1, dtype=int)
        labels = ["" for _ in range(N)]
        rank_masks = {
            j: self._rank_zone_mask(pts, j) for j in range(1, self.n)
        }
        rank_masks[self.n] = np.zeros(N, dtype=bool)
        for j in range(self.n):
            if j == 0:
                sel = ~rank_masks[1]
                mult[sel] = 0
                for i in np.nonzero(sel)[0]:
                    labels[i] = "0"
                continue
            sel = rank_masks[j] & ~rank_masks[j + 1] & (mult < 0)
            if not sel.any():
                continue
            idx = np.nonzero(sel)[0]
            sub = pts[idx]
            assigned = np.zeros(idx.size, dtype=bool)
            for lat in self.lattices[j]:
                zm = self.zone_mask(sub, lat) & ~assigned
                for local in np.nonzero(zm)[0]:
                    labels[idx[local]] = lat.label()
                assigned |= zm
                mult[idx[np.nonzero(zm)[0]]] = j
                if assigned.all():
                    break
        if (mult < 0).any():
            witness = pts[int(np.nonzero(mult < 0)[0][0])]
            raise CoveringError("covering violation", witness=list(witness))
        return mult, labels

    # --------------------------------------------------------- extended blocks
    def in_working_ball(self, points, shrink=0.0) -> np.ndarray:
        pts = np.atleast_2d(points)
        d = np.linalg.norm(pts - self.center[None, :], axis=1)
        return d <= self.sched.R - shrink + 1e-15

    def extended_block_membership(
        self, I, lat: Lattice, resolution: float, budget: int = 20000
    ) -> bool:
        """Flood-fill along the fast-drift plane through I.

        Passable cells lie in Z_Lambda inside the shrunk ball; success means
        reaching a cell that belongs to the block D_Lambda itself.  The answer
        is resolution-limited by construction.
        """
        if resolution <= 0:
            raise DomainError("resolution must be positive")
        if lat.rank == 0:
            pts = np.asarray(I, dtype=float)[None, :]
            return bool(
                self.in_working_ball(pts, shrink=self.sched.rho)[0]
                and self.block_membership(I, lat)
            )
        I = np.asarray(I, dtype=float)
        span = lat.span_basis()
        rho = self.sched.rho
        r_lat = self.sched.r_lat(lat)

        def passable(P):
            return (
                self.zone_mask(P[None, :], lat)[0]
                and self.in_working_ball(P[None, :], shrink=rho)[0]
            )

        def is_target(P):
            return self.block_membership(P, lat) and bool(
                self.in_working_ball(P[None, :], shrink=rho)[0]
            )

        # find a starting cell within the r_Lambda thickening of the plane set
        start_offsets = [np.zeros(self.n)]
        if r_lat > 0:
            for axis in range(self.n):
                for sign in (1.0, -1.0):
                    off = np.zeros(self.n)
                    off[axis] = sign * r_lat
                    start_offsets.append(off)
        start = None
        for off in start_offsets:
            if passable(I + off):
                start = I + off
                break
        if start is None:
            return False
        frontier = [tuple([0] * lat.rank)]
        seen = {frontier[0]}
        visited = 0
        while frontier:
            cell = frontier.pop()
            P = start + resolution * (np.asarray(cell, dtype=float) @ span)
            visited += 1
            if visited > budget:
                raise BudgetError("flood-fill budget exceeded", attempted=visited)
            if not passable(P):
                continue
            if is_target(P):
                return True
            for axis in range(lat.rank):
                for step in (-1, 1):
                    nxt = list(cell)
                    nxt[axis] += step
                    nxt = tuple(nxt)
                    if nxt not in seen:
                        seen.add(nxt)
                        frontier.append(nxt)
        return False

    # -------------------------------------------------------------- sampling
    def sample_ball(self, rng, count, shrink=0.0):
        """Uniform sample of the working ball B_2(I0, R - shrink)."""
        R = self.sched.R - shrink
        dirs = rng.normal(size=(count, self.n))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        radii = R * rng.uniform(size=(count, 1)) ** (1.0 / self.n)
        return self.center[None, :] + dirs * radii

    def sample_extended_block(self, rng, lat: Lattice, count, resolution=None,
                              tries=40):
        """Points of the extended block, built constructively.

        Draw block points, walk along the drift plane checking the zone and
        ball at `resolution` steps, then thicken by up to r_Lambda.  Every
        accepted point lies in the extended block (path certified at the
        stated resolution).
        """
        j = lat.rank
        if j == 0:
            raise DomainError("extended sampling needs a nontrivial lattice")
        rho = self.sched.rho
        r_lat = self.sched.r_lat(lat)
        span = lat.span_basis()
        resolution = resolution or max(self.sched.r_j(j) / 16.0, 1e-6)
        # seed points: block members inside the shrunk ball
        seeds = []
        batch = max(200, 20 * count)
        for _ in range(tries):
            cand = self.sample_ball(rng, batch, shrink=rho)
            zm = self.zone_mask(cand, lat)
            if not zm.any():
                continue
            sub = cand[zm]
            nxt = (
                self._rank_zone_mask(sub, j + 1)
                if j + 1 <= self.n - 1
                else np.zeros(sub.shape[0], dtype=bool)
            )
            seeds.extend(sub[~nxt])
            if len(seeds) >= count:
                break
        out = []
        for i, seed in enumerate(seeds[: 4 * count]):
            # walk along the plane in a random direction while passable
            d = rng.normal(size=j)
            d /= max(np.linalg.norm(d), 1e-12)
            direction = d @ span
            steps = int(rng.integers(0, 64))
            P = np.asarray(seed, dtype=float)
            ok = True
            for _ in range(steps):
                Q = P + resolution * direction
                if (
                    self.zone_mask(Q[None, :], lat)[0]
                    and self.in_working_ball(Q[None, :], shrink=rho)[0]
                ):
                    P = Q
                else:
                    ok = False
                    break
            if not ok and np.allclose(P, seed):
                continue
            thick = rng.normal(size=self.n)
            thick /= max(np.linalg.norm(thick), 1e-12)
            out.append(P + thick * rng.uniform(0, r_lat))
            if len(out) >= count:
                break
        return np.asarray(out) if out else np.zeros((0, self.n))


# ---------------------------------------------------------------------------
# Monte Carlo checks
# ---------------------------------------------------------------------------

def covering_check(geo: Geography, sample_count: int, seed: int = 0) -> dict:
    """Classify uniform ball samples; the fraction covered must be 1.0."""
    rng = np.random.default_rng(seed)
    pts = geo.sample_ball(rng, sample_count)
    try:
        mult, labels = geo.classify_many(pts)
    except CoveringError as err:
        return {"coverage": 0.0, "witness": err.witness, "samples": sample_count}
    hist = {int(j): int((mult == j).sum()) for j in range(geo.n)}
    assert sum(hist.values()) == sample_count
    return {
        "coverage": 1.0,
        "samples": sample_count,
        "histogram": hist,
        "seed": seed,
    }


def disjointness_check(
    geo: Geography,
    sample_count: int,
    seed: int = 0,
    rank: int | None = None,
    per_lattice: int | None = None,
) -> dict:
    """Extended blocks must avoid the zones of other same-rank lattices.

    Samples each extended block constructively and tests every sampled point
    against all other zones of the same rank; violations carry witnesses.
    """
    rng = np.random.default_rng(seed)
    ranks = [rank] if rank is not None else list(range(1, geo.n))
    violations = []
    tested = 0
    per_block = {}
    for j in ranks:
        lats = geo.live_lattices(j)
        others_all = geo.lattices.get(j, [])
        if not lats:
            continue
        quota = per_lattice or max(1, sample_count // max(len(lats), 1))
        for lat in lats:
            pts = geo.sample_extended_block(rng, lat, quota)
            per_block[lat.label()] = int(pts.shape[0])
            if pts.shape[0] == 0:
                continue
            tested += pts.shape[0]
            for other in others_all:
                if other.key() == lat.key():
                    continue
                hits = geo.zone_mask(pts, other)
                for i in np.nonzero(hits)[0]:
                    violations.append(
                        {
                            "lattice": lat.label(),
                            "other": other.label(),
                            "point": [float(v) for v in pts[i]],
                        }
                    )
    return {
        "violations": violations,
        "violation_count": len(violations),
        "points_tested": tested,
        "per_block_samples": per_block,
        "seed": seed,
        "calibration_flag": bool(violations),
    }


def small_divisor_check(geo: Geography, sample_count: int, seed: int = 0) -> dict:
    """Lemma-5.2-style floor: |k.omega| >= alpha_Lambda off the lattice."""
    rng = np.random.default_rng(seed)
    worst = math.inf
    witness = None
    K = geo.sched.K
    kmax = int(math.floor(K + 1e-12))
    from itertools import product as iproduct

    all_k = np.array(
        [
            k
            for k in iproduct(range(-kmax, kmax + 1), repeat=geo.n)
            if any(k) and sum(abs(v) for v in k) <= kmax
        ],
        dtype=int,
    )
    for j in range(1, geo.n):
        live = geo.live_lattices(j)
        for lat in live:
            pts = geo.sample_extended_block(
                rng, lat, max(1, sample_count // max(len(live), 1))
            )
            if pts.shape[0] == 0:
                continue
            outside = np.array([not lat.contains(k) for k in all_k])
            ks = all_k[outside].astype(float)
            om = geo.omega_of(pts)
            prods = np.abs(om @ ks.T)
            floor = geo.sched.alpha_lat(lat)
            ratio = prods.min() / floor
            if ratio < worst:
                worst = float(ratio)
                i, m = np.unravel_index(np.argmin(prods), prods.shape)
                witness = {
                    "lattice": lat.label(),
                    "point": [float(v) for v in pts[i]],
                    "k": [int(v) for v in ks[m]],
                    "value": float(prods[i, m]),
                    "floor": floor,
                }
    return {"worst_ratio": worst, "witness": witness, "seed": seed}


def calibrate_prefactors(
    fmap,
    params: GeographyParams,
    eps_values,
    eps0: float,
    center,
    base=None,
    samples: int = 1500,
    seed: int = 0,
) -> dict:
    """Tune c_gap (bisection up) and c_alpha (from measured floors).

    The zone-width gap between consecutive multiplicities is scale-free in
    c_delta, so disjointness is enforced by widening higher-rank zones via
    c_gap; the small-divisor constant is set to half the worst measured
    ratio.  Returns the calibrated prefactor dict plus a report.
    """
    pf = {**DEFAULT_PREFACTORS, **(base or {})}
    report = {"gap_trials": []}
    for gap in (1.0, 2.0, 4.0, 6.0, 8.0):
        pf["c_gap"] = gap
        bad = 0
        for eps in eps_values:
            sched = schedule(eps, eps0, params, fmap.hessian_bound, pf)
            geo = Geography(sched, fmap.omega, center)
            rep = disjointness_check(geo, samples, seed=seed)
            bad += rep["violation_count"]
        report["gap_trials"].append({"c_gap": gap, "violations": bad})
        if bad == 0:
            break
    # measured small-divisor floor fixes c_alpha
    pf_probe = dict(pf)
    pf_probe["c_alpha"] = 1.0
    worst = math.inf
    for eps in eps_values:
        sched = schedule(eps, eps0, params, fmap.hessian_bound, pf_probe)
        geo = Geography(sched, fmap.omega, center)
        rep = small_divisor_check(geo, samples, seed=seed)
        if rep["worst_ratio"] < worst:
            worst = rep["worst_ratio"]
    if math.isfinite(worst) and worst > 0:
        pf["c_alpha"] = 0.5 * worst
    report["measured_divisor_ratio"] = worst
    report["prefactors"] = dict(pf)
    return report


def dump_samples_csv(path, points, mults, labels):
    """CSV dump 'I1,...,In,multiplicity,lattice_id' for external plotting."""
    n = points.shape[1]
    header = ",".join(f"I{i + 1}" for i in range(n)) + ",multiplicity,lattice_id"
    lines = [header]
    for row, m, lab in zip(points, mults, labels):
        coords = ",".join(f"{v:.17g}" for v in row)
        lines.append(f"{coords},{m},{lab}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def lattices_to_json(lats, **kw):
    return json.dumps([l.to_dict() for l in lats], **kw)
