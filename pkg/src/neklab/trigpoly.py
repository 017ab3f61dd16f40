"""Trigonometric polynomials with polynomial action dependence.

A :class:`TrigPoly` is a finite sum ``g(I, theta) = sum_k g_k(I) exp(i k.theta)``
where each coefficient ``g_k`` is a multivariate polynomial in the actions
``I`` with complex scalar coefficients.  This is the common representation of
Hamiltonians, perturbations, smoothed functions and normal-form pieces, and it
is closed under addition, multiplication, differentiation and the Poisson
bracket, so all of those are computed exactly (no quadrature).

Harmonics ``k`` and polynomial powers are plain ``tuple[int, ...]``; the
module-level helpers ``l1``, ``l2``, ``linf`` give the integer-vector norms.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import DomainError

MultiIndex = tuple  # integer vector of length n

#: imaginary part tolerated by `evaluate`, relative to the coefficient mass
REALITY_TOL = 1e-12


def as_index(k) -> MultiIndex:
    return tuple(int(v) for v in k)


def l1(k) -> int:
    return int(sum(abs(int(v)) for v in k))


def l2(k) -> float:
    return math.sqrt(sum(int(v) * int(v) for v in k))


def linf(k) -> int:
    return int(max((abs(int(v)) for v in k), default=0))


class ActionPoly:
    """Multivariate polynomial in the actions with complex coefficients.

    Stored as a mapping ``powers -> coefficient`` in powers of (I - center),
    with exact-zero entries absent.  The center keeps coefficients
    well-conditioned on domains away from the origin; binary operations
    require matching centers (use `recenter`).  Immutable by convention: all
    operations return new instances.
    """

    __slots__ = ("n", "coeffs", "center")

    def __init__(self, n, coeffs=None, center=None):
        self.n = int(n)
        if center is None:
            self.center = (0.0,) * self.n
        else:
            self.center = tuple(float(v) for v in center)
            if len(self.center) != self.n:
                raise DomainError("center dimension mismatch")
        table = {}
        for powers, c in (coeffs or {}).items():
            p = as_index(powers)
            if len(p) != self.n:
                raise DomainError(f"power index {p} has length != {self.n}")
            if any(e < 0 for e in p):
                raise DomainError(f"negative power in {p}")
            c = complex(c)
            if c != 0:
                table[p] = table.get(p, 0j) + c
        self.coeffs = {p: c for p, c in table.items() if c != 0}

    def _check_center(self, other):
        if self.center != other.center:
            raise DomainError(
                f"expansion centers differ ({self.center} vs {other.center}); recenter first"
            )

    @classmethod
    def constant(cls, n, value, center=None):
        return cls(n, {(0,) * n: value}, center=center)

    @classmethod
    def monomial(cls, n, powers, value=1.0, center=None):
        return cls(n, {as_index(powers): value}, center=center)

    def recenter(self, new_center):
        """Exact binomial re-expansion around a new center."""
        new_center = tuple(float(v) for v in new_center)
        if new_center == self.center:
            return self
        shift = [o - nc for o, nc in zip(self.center, new_center)]
        out = {}
        for p, c in self.coeffs.items():
            # product over axes of (y_j + shift_j)^{p_j}
            expansions = []
            for e, d in zip(p, shift):
                row = [math.comb(e, i) * d ** (e - i) for i in range(e + 1)]
                expansions.append(row)
            idx = [0] * self.n
            while True:
                q = tuple(idx)
                w = c
                for j in range(self.n):
                    w *= expansions[j][idx[j]]
                if w != 0:
                    out[q] = out.get(q, 0j) + w
                j = 0
                while j < self.n:
                    idx[j] += 1
                    if idx[j] <= p[j]:
                        break
                    idx[j] = 0
                    j += 1
                else:
                    break
        return ActionPoly(self.n, out, center=new_center)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, ActionPoly)
            and self.n == other.n
            and self.center == other.center
            and self.coeffs == other.coeffs
        )

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = ActionPoly.constant(self.n, other, center=self.center)
        self._check_center(other)
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            out[p] = out.get(p, 0j) + c
        return ActionPoly(self.n, out, center=self.center)

    def __neg__(self):
        return ActionPoly(self.n, {p: -c for p, c in self.coeffs.items()}, center=self.center)

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = ActionPoly.constant(self.n, other, center=self.center)
        return self + (-other)

    def scale(self, a):
        return ActionPoly(self.n, {p: a * c for p, c in self.coeffs.items()}, center=self.center)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        self._check_center(other)
        out = {}
        for p1, c1 in self.coeffs.items():
            for p2, c2 in other.coeffs.items():
                p = tuple(a + b for a, b in zip(p1, p2))
                out[p] = out.get(p, 0j) + c1 * c2
        return ActionPoly(self.n, out, center=self.center)

    __rmul__ = __mul__

    def conj(self):
        return ActionPoly(
            self.n, {p: c.conjugate() for p, c in self.coeffs.items()}, center=self.center
        )

    def diff(self, axis):
        out = {}
        for p, c in self.coeffs.items():
            if p[axis] == 0:
                continue
            q = list(p)
            q[axis] -= 1
            out[tuple(q)] = out.get(tuple(q), 0j) + c * p[axis]
        return ActionPoly(self.n, out, center=self.center)

    def degree(self):
        return max((sum(p) for p in self.coeffs), default=0)

    def __call__(self, I):
        """Evaluate at actions `I`; supports an (..., n) array of points."""
        I = np.asarray(I, dtype=complex)
        scalar = I.ndim == 1
        pts = I.reshape(-1, self.n) - np.asarray(self.center, dtype=complex)[None, :]
        val = np.zeros(pts.shape[0], dtype=complex)
        for p, c in self.coeffs.items():
            term = np.ones(pts.shape[0], dtype=complex)
            for j, e in enumerate(p):
                if e:
                    term = term * pts[:, j] ** e
            val += c * term
        return val[0] if scalar else val.reshape(I.shape[:-1])

    def coeff_mass(self):
        return sum(abs(c) for c in self.coeffs.values())

    def sup_bound(self, around, radius):
        """Crude sup bound on the box of half-width `radius` around `around`."""
        around = np.asarray(around, dtype=float)
        total = 0.0
        for p, c in self.coeffs.items():
            m = 1.0
            for j, e in enumerate(p):
                m *= (abs(around[j] - self.center[j]) + radius) ** e
            total += abs(c) * m
        return total

    def chop(self, tol):
        """Drop coefficients with magnitude <= tol; returns (poly, dropped mass)."""
        kept, dropped = {}, 0.0
        for p, c in self.coeffs.items():
            if abs(c) <= tol:
                dropped += abs(c)
            else:
                kept[p] = c
        return ActionPoly(self.n, kept, center=self.center), dropped

    def truncate_degree(self, maxdeg):
        kept, dropped = {}, 0.0
        for p, c in self.coeffs.items():
            if sum(p) <= maxdeg:
                kept[p] = c
            else:
                dropped += abs(c)
        return ActionPoly(self.n, kept, center=self.center), dropped

    def __repr__(self):
        return f"ActionPoly(n={self.n}, {len(self.coeffs)} terms)"


class TrigPoly:
    """Finite Fourier sum in the angles with `ActionPoly` coefficients."""

    __slots__ = ("n", "terms", "center")

    def __init__(self, n, terms=None, center=None):
        self.n = int(n)
        table = {}
        for k, poly in (terms or {}).items():
            k = as_index(k)
            if len(k) != self.n:
                raise DomainError(f"harmonic {k} has length != {self.n}")
            if not isinstance(poly, ActionPoly):
                poly = ActionPoly.constant(self.n, poly, center=center)
            if poly.n != self.n:
                raise DomainError("coefficient dimension mismatch")
            if k in table:
                poly = table[k] + poly
            table[k] = poly
        self.terms = {k: p for k, p in table.items() if p}
        centers = {p.center for p in self.terms.values()}
        if len(centers) > 1:
            raise DomainError("coefficient polynomials have mixed expansion centers")
        self.center = centers.pop() if centers else tuple(
            float(v) for v in (center or (0.0,) * self.n)
        )

    # ------------------------------------------------------------------ build
    @classmethod
    def zero(cls, n, center=None):
        return cls(n, {}, center=center)

    @classmethod
    def constant(cls, n, value, center=None):
        return cls(n, {(0,) * n: ActionPoly.constant(n, value, center=center)})

    @classmethod
    def cosine(cls, n, k, amplitude=1.0, center=None):
        """amplitude * cos(k.theta) as a real TrigPoly."""
        k = as_index(k)
        half = ActionPoly.constant(n, amplitude / 2.0, center=center)
        return cls(n, {k: half, tuple(-v for v in k): half})

    @classmethod
    def sine(cls, n, k, amplitude=1.0, center=None):
        """amplitude * sin(k.theta) as a real TrigPoly."""
        k = as_index(k)
        c = ActionPoly.constant(n, -0.5j * amplitude, center=center)
        return cls(n, {k: c, tuple(-v for v in k): c.conj()})

    def recenter(self, new_center):
        return TrigPoly(
            self.n, {k: p.recenter(new_center) for k, p in self.terms.items()},
            center=new_center,
        )

    @classmethod
    def from_action_poly(cls, poly):
        return cls(poly.n, {(0,) * poly.n: poly})

    # ------------------------------------------------------------- arithmetic
    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = TrigPoly.constant(self.n, other, center=self.center)
        self._check_dim(other)
        out = dict(self.terms)
        for k, p in other.terms.items():
            out[k] = out[k] + p if k in out else p
        return TrigPoly(self.n, out)

    def __neg__(self):
        return TrigPoly(self.n, {k: -p for k, p in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = TrigPoly.constant(self.n, other, center=self.center)
        return self + (-other)

    def scale(self, a):
        return TrigPoly(self.n, {k: p.scale(a) for k, p in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        self._check_dim(other)
        out = {}
        for k1, p1 in self.terms.items():
            for k2, p2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                prod = p1 * p2
                out[k] = out[k] + prod if k in out else prod
        return TrigPoly(self.n, out, center=self.center)

    __rmul__ = __mul__

    def _check_dim(self, other):
        if self.n != other.n:
            raise DomainError(f"dimension mismatch: {self.n} != {other.n}")

    # ---------------------------------------------------------------- queries
    def harmonics(self):
        return sorted(self.terms)

    def max_order(self):
        """Largest harmonic l1-norm present."""
        return max((l1(k) for k in self.terms), default=0)

    def coeff_mass(self):
        return sum(p.coeff_mass() for p in self.terms.values())

    def is_real(self, tol=1e-12):
        """Check the reality invariant g_{-k} = conj(g_k) coefficient-wise."""
        for k, p in self.terms.items():
            q = self.terms.get(tuple(-v for v in k))
            if q is None:
                if p.coeff_mass() > tol:
                    return False
                continue
            diff = p - q.conj()
            if diff.coeff_mass() > tol * max(1.0, p.coeff_mass()):
                return False
        return True

    def real_symmetrize(self):
        """Project onto the real subspace: g_k <- (g_k + conj(g_{-k}))/2."""
        out = {}
        zero = ActionPoly(self.n, center=self.center)
        for k in set(self.terms) | {tuple(-v for v in k) for k in self.terms}:
            p = self.terms.get(k, zero)
            q = self.terms.get(tuple(-v for v in k), zero)
            out[k] = (p + q.conj()).scale(0.5)
        return TrigPoly(self.n, out, center=self.center)

    # ----------------------------------------------------------- differentials
    def dtheta(self, axis):
        return TrigPoly(
            self.n, {k: p.scale(1j * k[axis]) for k, p in self.terms.items()}, center=self.center
        )

    def dI(self, axis):
        return TrigPoly(
            self.n, {k: p.diff(axis) for k, p in self.terms.items()}, center=self.center
        )

    # ---------------------------------------------------------------- evaluate
    def evaluate_complex(self, I, theta):
        """Complex-valued evaluation; `I` and `theta` may be complex arrays."""
        I = np.asarray(I, dtype=complex)
        theta = np.asarray(theta, dtype=complex)
        scalar = theta.ndim == 1
        pts_I = I.reshape(-1, self.n)
        pts_t = theta.reshape(-1, self.n)
        val = np.zeros(pts_t.shape[0], dtype=complex)
        for k in self.harmonics():
            phase = np.exp(1j * (pts_t @ np.asarray(k, dtype=float)))
            val += self.terms[k](pts_I) * phase
        return val[0] if scalar else val.reshape(theta.shape[:-1])

    def evaluate(self, I, theta):
        """Real evaluation at real (I, theta); raises if visibly non-real."""
        val = self.evaluate_complex(I, theta)
        mass = self.coeff_mass()
        imag = np.max(np.abs(np.imag(np.atleast_1d(val))))
        if imag > REALITY_TOL * max(mass, 1.0):
            raise DomainError(
                f"evaluation has imaginary part {imag:.3e}; reality invariant violated"
            )
        return np.real(val)

    __call__ = evaluate

    # ------------------------------------------------------------- projections
    def filter(self, keep):
        """Sub-table of harmonics selected by the predicate `keep(k)`."""
        return TrigPoly(
            self.n, {k: p for k, p in self.terms.items() if keep(k)}, center=self.center
        )

    def chop(self, tol):
        """Drop polynomial coefficients <= tol; returns (poly, dropped mass)."""
        out, dropped = {}, 0.0
        for k, p in self.terms.items():
            q, d = p.chop(tol)
            dropped += d
            if q:
                out[k] = q
        return TrigPoly(self.n, out, center=self.center), dropped

    def truncate_degree(self, maxdeg):
        out, dropped = {}, 0.0
        for k, p in self.terms.items():
            q, d = p.truncate_degree(maxdeg)
            dropped += d
            if q:
                out[k] = q
        return TrigPoly(self.n, out, center=self.center), dropped

    def sup_bound(self, center, radius, s=0.0):
        """Bound sup |g| over the box around `center` times the strip e^{|k|1 s}."""
        return sum(
            p.sup_bound(center, radius) * math.exp(l1(k) * s) for k, p in self.terms.items()
        )

    # ------------------------------------------------------------ serialization
    SCHEMA = "neklab.trigpoly/1"

    def to_dict(self):
        terms = []
        for k in self.harmonics():
            poly = [
                {"powers": list(p), "re": c.real, "im": c.imag}
                for p, c in sorted(self.terms[k].coeffs.items())
            ]
            terms.append({"k": list(k), "poly": poly})
        return {
            "schema": self.SCHEMA,
            "n": self.n,
            "center": list(self.center),
            "terms": terms,
        }

    @classmethod
    def from_dict(cls, data):
        if data.get("schema") != cls.SCHEMA:
            raise DomainError(f"unexpected TrigPoly schema {data.get('schema')!r}")
        n = int(data["n"])
        center = tuple(data.get("center", (0.0,) * n))
        terms = {}
        for entry in data["terms"]:
            coeffs = {
                tuple(item["powers"]): complex(item["re"], item["im"])
                for item in entry["poly"]
            }
            terms[tuple(entry["k"])] = ActionPoly(n, coeffs, center=center)
        return cls(n, terms, center=center)

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def __repr__(self):
        return f"TrigPoly(n={self.n}, harmonics={len(self.terms)}, max|k|1={self.max_order()})"


def poisson_bracket(F: TrigPoly, G: TrigPoly) -> TrigPoly:
    """Poisson bracket {F, G} = dF/dI . dG/dtheta - dF/dtheta . dG/dI.

    The sign convention makes {h, e^{i k.theta}} = i (k.grad h) e^{i k.theta},
    so that dF/dt = {H, F} along the flow of H with Idot = -dH/dtheta,
    thetadot = dH/dI.
    """
    F._check_dim(G)
    out = TrigPoly.zero(F.n)
    for axis in range(F.n):
        out = out + F.dI(axis) * G.dtheta(axis) - F.dtheta(axis) * G.dI(axis)
    return out


def random_real_trigpoly(rng, n, max_k=3, degree=0, harmonics=4, scale=1.0):
    """Seeded random TrigPoly satisfying the reality invariant.

    Used by property tests and by the truncation-exactness acceptance check.
    """
    terms = {}
    for _ in range(harmonics):
        k = tuple(int(v) for v in rng.integers(-max_k, max_k + 1, size=n))
        coeffs = {}
        for _ in range(degree + 1):
            p = tuple(int(v) for v in rng.integers(0, degree + 1, size=n))
            coeffs[p] = scale * complex(rng.normal(), rng.normal())
        terms[k] = ActionPoly(n, coeffs)
    return TrigPoly(n, terms).real_symmetrize()
