"""Exact integer lattice algebra: Hermite forms, saturation, enumeration.

A resonance is identified with a saturated sublattice of Z^n; saturation and
canonical Hermite bases are computed with exact integer arithmetic (Python
ints, no overflow), so deduplication is literal equality of basis tuples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .errors import BudgetError, DomainError


def hermite_normal_form(rows):
    """Row-style HNF over Z with unimodular transform: returns (H, U), H = U A.

    Pivots are positive, entries above each pivot are reduced into [0, pivot),
    zero rows sink to the bottom.
    """
    H = [[int(v) for v in row] for row in rows]
    m = len(H)
    n = len(H[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        # eliminate below the pivot via the Euclidean algorithm on rows
        while True:
            nz = [i for i in range(r, m) if H[i][c] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: abs(H[i][c]))
            j, i = nz[0], nz[1]
            q = H[i][c] // H[j][c]
            H[i] = [a - q * b for a, b in zip(H[i], H[j])]
            U[i] = [a - q * b for a, b in zip(U[i], U[j])]
        nz = [i for i in range(r, m) if H[i][c] != 0]
        if not nz:
            continue
        i = nz[0]
        H[r], H[i] = H[i], H[r]
        U[r], U[i] = U[i], U[r]
        if H[r][c] < 0:
            H[r] = [-a for a in H[r]]
            U[r] = [-a for a in U[r]]
        piv = H[r][c]
        for i in range(r):
            q = H[i][c] // piv
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
        if r == m:
            break
    return H, U


def integer_kernel(rows):
    """Basis rows of {x in Z^q : M x = 0} for the integer matrix M (p x q)."""
    rows = [list(map(int, r)) for r in rows]
    if not rows:
        raise DomainError("empty matrix")
    q = len(rows[0])
    # transpose: zero rows of U M^T = H correspond to kernel vectors of M
    MT = [[rows[i][j] for i in range(len(rows))] for j in range(q)]
    H, U = hermite_normal_form(MT)
    kernel = [U[i] for i in range(q) if all(v == 0 for v in H[i])]
    return kernel


def saturate(rows):
    """Saturation of the lattice spanned by `rows`: span_R(rows)  intersect Z^n."""
    rows = [list(map(int, r)) for r in rows]
    if not rows:
        return []
    ker = integer_kernel(rows)
    if not ker:
        # full rank n: saturation is Z^n
        n = len(rows[0])
        return [[int(i == j) for j in range(n)] for i in range(n)]
    return integer_kernel(ker)


def _gram_det(rows):
    """Exact determinant of the integer Gram matrix via Bareiss elimination."""
    B = [list(map(int, r)) for r in rows]
    j = len(B)
    G = [[sum(a * b for a, b in zip(B[p], B[q])) for q in range(j)] for p in range(j)]
    prev = 1
    for k in range(j - 1):
        if G[k][k] == 0:
            swap = next((i for i in range(k + 1, j) if G[i][k] != 0), None)
            if swap is None:
                return 0
            G[k], G[swap] = G[swap], G[k]
        for i in range(k + 1, j):
            for c in range(k + 1, j):
                G[i][c] = (G[i][c] * G[k][k] - G[i][k] * G[k][c]) // prev
            G[i][k] = 0
        prev = G[k][k]
    return G[-1][-1]


@dataclass(frozen=True)
class Lattice:
    """Saturated integer sublattice with canonical Hermite basis rows."""

    n: int
    basis: tuple  # tuple of integer row tuples, HNF, empty for rank 0
    covolume: float
    generator_bound: float

    @property
    def rank(self) -> int:
        return len(self.basis)

    @classmethod
    def trivial(cls, n, generator_bound=0.0):
        return cls(n=n, basis=(), covolume=1.0, generator_bound=generator_bound)

    @classmethod
    def from_generators(cls, vectors, generator_bound=0.0):
        vectors = [list(map(int, v)) for v in vectors]
        if not vectors:
            raise DomainError("need at least one generator")
        n = len(vectors[0])
        sat = saturate(vectors)
        H, _ = hermite_normal_form(sat)
        rows = tuple(tuple(r) for r in H if any(r))
        if not rows:
            raise DomainError("generators span the zero lattice")
        cov = math.sqrt(_gram_det(rows))
        return cls(n=n, basis=rows, covolume=cov, generator_bound=float(generator_bound))

    def contains(self, k) -> bool:
        """Exact membership by back-substitution against the HNF basis."""
        k = [int(v) for v in k]
        if all(v == 0 for v in k):
            return True
        if not self.basis:
            return False
        residual = list(k)
        pivots = [next(j for j, v in enumerate(row) if v) for row in self.basis]
        for row, pc in zip(self.basis, pivots):
            if residual[pc] % row[pc] != 0:
                return False
            q = residual[pc] // row[pc]
            residual = [a - q * b for a, b in zip(residual, row)]
        return all(v == 0 for v in residual)

    def members_within(self, K: float) -> np.ndarray:
        """All nonzero lattice points with |k|_1 <= K, as an array of rows."""
        if not self.basis:
            return np.zeros((0, self.n), dtype=int)
        B = np.asarray(self.basis, dtype=float)
        pinv = np.linalg.pinv(B)
        bounds = [int(math.floor(K * np.linalg.norm(pinv[:, i]) + 1e-9)) for i in range(self.rank)]
        pts = []
        for combo in product(*(range(-b, b + 1) for b in bounds)):
            if all(c == 0 for c in combo):
                continue
            k = np.array(
                [sum(c * row[j] for c, row in zip(combo, self.basis)) for j in range(self.n)],
                dtype=int,
            )
            if np.abs(k).sum() <= K + 1e-12:
                pts.append(k)
        if not pts:
            return np.zeros((0, self.n), dtype=int)
        return np.unique(np.asarray(pts, dtype=int), axis=0)

    def span_basis(self) -> np.ndarray:
        """Orthonormal real basis of the spanned subspace (fast-drift plane)."""
        if not self.basis:
            return np.zeros((0, self.n))
        q, _ = np.linalg.qr(np.asarray(self.basis, dtype=float).T)
        return q[:, : self.rank].T

    def key(self):
        return self.basis

    def label(self) -> str:
        if not self.basis:
            return "0"
        return ";".join(",".join(str(v) for v in row) for row in self.basis)

    def to_dict(self):
        return {
            "n": self.n,
            "basis": [list(r) for r in self.basis],
            "covolume": self.covolume,
            "generator_bound": self.generator_bound,
        }


def half_space_generators(n: int, K: float):
    """Nonzero integer vectors with |k|_1 <= K, one per antipodal pair."""
    kmax = int(math.floor(K + 1e-12))
    gens = []
    for combo in product(range(-kmax, kmax + 1), repeat=n):
        if all(v == 0 for v in combo):
            continue
        if sum(abs(v) for v in combo) > kmax:
            continue
        first = next(v for v in combo if v != 0)
        if first < 0:
            continue
        gens.append(combo)
    return gens


def enumerate_lattices(n: int, K: float, j: int, budget: int = 2_000_000):
    """All saturated rank-j lattices spanned by j-subsets of Z^n_K.

    Deduplicated by canonical Hermite basis; `budget` caps the number of
    generator subsets visited.
    """
    if not (0 <= j <= n - 1):
        raise DomainError("rank j must satisfy 0 <= j <= n-1")
    if K < 1:
        raise DomainError("cutoff K must be at least 1")
    if j == 0:
        return [Lattice.trivial(n, K)]
    gens = half_space_generators(n, K)
    total = math.comb(len(gens), j)
    if total > budget:
        raise BudgetError(
            f"lattice enumeration needs {total} subsets (budget {budget})",
            attempted=total,
        )
    seen = {}
    for subset in combinations(gens, j):
        H, _ = hermite_normal_form(list(subset))
        rows = [r for r in H if any(r)]
        if len(rows) < j:
            continue  # rank-deficient subset
        lat = Lattice.from_generators(list(subset), generator_bound=K)
        if lat.rank != j:
            continue
        seen.setdefault(lat.key(), lat)
    return sorted(seen.values(), key=lambda L: L.key())
