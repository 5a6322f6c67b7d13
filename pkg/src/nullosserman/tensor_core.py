"""Pseudo-Euclidean linear algebra and algebraic curvature tensors.

Everything here is independent of any f-structure: a metric is a symmetric
nondegenerate matrix in a fixed frame, a curvature tensor is a (0,4) array
in the same frame, and the eigensolver is a cyclic Jacobi rotation method.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import AsymmetricMatrixError, MetricError, NonLorentzError

_EPS = np.finfo(float).eps


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------------------------------
# Eigensolver
# ---------------------------------------------------------------------------

def _round_robin(m: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Tournament schedule: m-1 rounds of disjoint index pairs covering all pairs once."""
    size = m + (m % 2)
    players = list(range(size))
    rounds = []
    for _ in range(size - 1):
        pairs = [(players[i], players[size - 1 - i]) for i in range(size // 2)]
        pairs = [(min(a, b), max(a, b)) for a, b in pairs if a < m and b < m]
        p = np.array([a for a, _ in pairs], dtype=int)
        q = np.array([b for _, b in pairs], dtype=int)
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh(a: np.ndarray, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a stack of symmetric matrices by cyclic Jacobi rotations.

    Each round of the tournament schedule applies up to d/2 disjoint plane
    rotations simultaneously, and the whole batch is rotated at once.

    Returns ``(w, v)`` with eigenvalues ascending along the last axis of ``w``
    and the matching orthonormal eigenvectors as the columns of ``v``.
    """
    a = np.asarray(a, dtype=float)
    batch_shape = a.shape[:-2]
    d = a.shape[-1]
    A = a.reshape((-1, d, d)).copy()
    A = 0.5 * (A + np.swapaxes(A, -1, -2))
    N = A.shape[0]
    V = np.broadcast_to(np.eye(d), (N, d, d)).copy()
    if d > 1 and N > 0:
        rounds = _round_robin(d)
        offmask = ~np.eye(d, dtype=bool)
        scale = np.sqrt(np.sum(A * A, axis=(1, 2)))
        thresh = 4.0 * _EPS * np.maximum(scale, np.finfo(float).tiny)
        for _ in range(max_sweeps):
            off = np.sqrt(np.sum(np.where(offmask, A, 0.0) ** 2, axis=(1, 2)))
            if np.all(off <= thresh):
                break
            for p, q in rounds:
                if p.size == 0:
                    continue
                app = A[:, p, p]
                aqq = A[:, q, q]
                apq = A[:, p, q]
                nonzero = apq != 0.0
                safe = np.where(nonzero, apq, 1.0)
                # subnormal apq sends tau to inf, which correctly gives t = 0
                with np.errstate(over="ignore"):
                    tau = (aqq - app) / (2.0 * safe)
                    sign = np.where(tau >= 0.0, 1.0, -1.0)
                    t = sign / (np.abs(tau) + np.hypot(1.0, tau))
                t = np.where(nonzero, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                G = np.broadcast_to(np.eye(d), (N, d, d)).copy()
                G[:, p, p] = c
                G[:, q, q] = c
                G[:, p, q] = s
                G[:, q, p] = -s
                A = np.swapaxes(G, 1, 2) @ A @ G
                V = V @ G
    w = np.diagonal(A, axis1=1, axis2=2).copy()
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    V = np.take_along_axis(V, order[:, None, :], axis=2)
    return w.reshape(batch_shape + (d,)), V.reshape(batch_shape + (d, d))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue multiset of a self-adjoint operator, clustered by gap."""

    eigenvalues: tuple[float, ...]
    multiplicities: tuple[int, ...]
    tol: float
    values: tuple[float, ...] = field(default=(), compare=False)

    @classmethod
    def from_values(cls, values, tol: float) -> "Spectrum":
        vals = np.sort(np.asarray(values, dtype=float))
        if vals.size == 0:
            return cls((), (), tol, ())
        radius = float(np.max(np.abs(vals)))
        gap = max(tol, 1e-7 * radius)
        clusters: list[list[float]] = [[vals[0]]]
        for v in vals[1:]:
            if v - clusters[-1][-1] < gap:
                clusters[-1].append(v)
            else:
                clusters.append([v])
        return cls(
            tuple(float(np.mean(c)) for c in clusters),
            tuple(len(c) for c in clusters),
            tol,
            tuple(float(v) for v in vals),
        )

    @property
    def dimension(self) -> int:
        return sum(self.multiplicities)

    def expanded(self) -> np.ndarray:
        if self.values:
            return np.array(self.values)
        return np.repeat(self.eigenvalues, self.multiplicities).astype(float)

    def deviation(self, other: "Spectrum") -> float:
        """Max gap between the sorted eigenvalue lists, ``inf`` if dimensions differ."""
        a, b = self.expanded(), other.expanded()
        if a.shape != b.shape:
            return float("inf")
        if a.size == 0:
            return 0.0
        return float(np.max(np.abs(a - b)))

    def as_dict(self) -> dict:
        return {"eigenvalues": list(self.eigenvalues), "multiplicities": list(self.multiplicities)}

    def __str__(self) -> str:
        return "{" + ", ".join(f"{v:.6g}x{m}" for v, m in zip(self.eigenvalues, self.multiplicities)) + "}"


def _check_symmetric(m: np.ndarray, tol: float) -> None:
    asym = float(np.max(np.abs(m - np.swapaxes(m, -1, -2)))) if m.size else 0.0
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if asym > tol * scale:
        raise AsymmetricMatrixError(asym, tol)


def symmetric_eigen(m, tol: float = 1e-9) -> tuple[Spectrum, np.ndarray]:
    """Spectrum and orthonormal eigenbasis (columns, ascending) of a symmetric matrix."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    _check_symmetric(m, tol)
    w, v = jacobi_eigh(m)
    return Spectrum.from_values(w, tol), v


def symmetric_spectra(ms, tol: float = 1e-9) -> list[Spectrum]:
    """Spectra of a stack of equally sized symmetric matrices, solved as one batch."""
    ms = np.asarray(ms, dtype=float)
    if ms.shape[0] == 0:
        return []
    _check_symmetric(ms, tol)
    w, _ = jacobi_eigh(ms)
    return [Spectrum.from_values(row, tol) for row in w]


# ---------------------------------------------------------------------------
# Metrics and tensors
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PseudoMetric:
    matrix: np.ndarray
    dim: int = field(init=False)
    signature: tuple[int, int] = field(init=False)

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise MetricError(f"metric must be a nonempty square matrix, got shape {m.shape}")
        scale = float(np.max(np.abs(m)))
        if scale == 0.0:
            raise MetricError("metric is zero")
        if np.max(np.abs(m - m.T)) > 1e-12 * scale:
            raise MetricError("metric is not symmetric")
        if abs(np.linalg.det(m / scale)) <= 1e-12:
            raise MetricError("metric is degenerate")
        w, _ = jacobi_eigh(m)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dim", m.shape[0])
        object.__setattr__(self, "signature", (int(np.sum(w < 0)), int(np.sum(w > 0))))

    @property
    def is_lorentz(self) -> bool:
        return self.signature[0] == 1 and self.dim >= 2

    @cached_property
    def inverse(self) -> np.ndarray:
        return _frozen(np.linalg.inv(self.matrix))

    def inner(self, x, y) -> float:
        return float(np.asarray(x) @ self.matrix @ np.asarray(y))

    def orthonormal_frame(self) -> tuple[np.ndarray, np.ndarray]:
        """Columns ``e`` with g(e_i, e_j) = sign_i delta_ij, timelike columns first."""
        w, v = jacobi_eigh(self.matrix)
        order = np.argsort(w >= 0, kind="stable")
        w, v = w[order], v[:, order]
        return v / np.sqrt(np.abs(w)), np.sign(w)


def minkowski(dim: int) -> PseudoMetric:
    return PseudoMetric(np.diag([-1.0] + [1.0] * (dim - 1)))


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    """(0,4) tensor, ``entries[i,j,k,l] = R(e_i, e_j, e_k, e_l)`` with R(X,Y,Z,W) = g(R(Z,W)Y, X)."""

    entries: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        e = _frozen(self.entries)
        if e.ndim != 4 or len(set(e.shape)) != 1:
            raise ValueError(f"curvature entries must be d x d x d x d, got {e.shape}")
        object.__setattr__(self, "entries", e)
        object.__setattr__(self, "dim", e.shape[0])

    def __call__(self, x, y, z, w) -> float:
        return float(np.einsum("ijkl,i,j,k,l->", self.entries, x, y, z, w))

    def endomorphism(self, g: PseudoMetric, x, y, v) -> np.ndarray:
        """The vector R(x, y)v, raised with the inverse metric."""
        lowered = np.einsum("bjkl,j,k,l->b", self.entries, v, x, y)
        return g.inverse @ lowered

    def __add__(self, other: "CurvatureTensor") -> "CurvatureTensor":
        return CurvatureTensor(self.entries + other.entries)

    def __sub__(self, other: "CurvatureTensor") -> "CurvatureTensor":
        return CurvatureTensor(self.entries - other.entries)

    def __mul__(self, k: float) -> "CurvatureTensor":
        return CurvatureTensor(k * self.entries)

    __rmul__ = __mul__

    def max_difference(self, other: "CurvatureTensor") -> float:
        return float(np.max(np.abs(self.entries - other.entries)))


@dataclass(frozen=True)
class ViolationReport:
    """Named maximum violations with an overall pass threshold."""

    violations: dict
    tol: float

    @property
    def passed(self) -> bool:
        return all(v < self.tol for v in self.violations.values())

    @property
    def max_violation(self) -> float:
        return max(self.violations.values(), default=0.0)

    def failed(self) -> list[str]:
        return [k for k, v in self.violations.items() if not v < self.tol]

    def as_dict(self) -> dict:
        return {"passed": self.passed, "tol": self.tol, "violations": dict(self.violations)}


def validate_curvature_like(F: CurvatureTensor, tol: float = 1e-9) -> ViolationReport:
    """Max violation of the curvature-like identities (report only)."""
    E = F.entries
    return ViolationReport(
        {
            "antisymmetry_first_pair": float(np.max(np.abs(E + E.transpose(1, 0, 2, 3)))),
            "antisymmetry_second_pair": float(np.max(np.abs(E + E.transpose(0, 1, 3, 2)))),
            "pair_symmetry": float(np.max(np.abs(E - E.transpose(2, 3, 0, 1)))),
            # F(x,y,z,w) + F(x,z,w,y) + F(x,w,y,z)
            "first_bianchi": float(np.max(np.abs(E + E.transpose(0, 3, 1, 2) + E.transpose(0, 2, 3, 1)))),
        },
        tol,
    )


def constant_k_form(k: float, g: PseudoMetric) -> CurvatureTensor:
    """F(x,y,z,w) = k (g(x,z) g(y,w) - g(y,z) g(x,w))."""
    G = g.matrix
    return CurvatureTensor(k * (np.einsum("ik,jl->ijkl", G, G) - np.einsum("jk,il->ijkl", G, G)))


# ---------------------------------------------------------------------------
# Degenerate planes and the constant-curvature test
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DegeneratePlaneSampler:
    """Null directions u = z + x for a Lorentz metric, with an orthonormal basis of u-perp mod u.

    ``z`` is the timelike vector of an orthonormal frame; ``x`` runs over the
    spacelike frame vectors, their normalized pairwise sums, and ``count``
    seeded uniform points of the unit sphere in z-perp.
    """

    count: int = 16
    seed: int = 0

    def directions(self, g: PseudoMetric) -> tuple[np.ndarray, list[np.ndarray]]:
        if not g.is_lorentz:
            raise NonLorentzError(f"expected Lorentz signature, got {g.signature}")
        frame, _ = g.orthonormal_frame()
        z, space = frame[:, 0], frame[:, 1:]
        m = space.shape[1]
        coords = [np.eye(m)[i] for i in range(m)]
        coords += [(np.eye(m)[i] + np.eye(m)[j]) / np.sqrt(2) for i, j in itertools.combinations(range(m), 2)]
        rng = np.random.default_rng(self.seed)
        for p in rng.standard_normal((self.count, m)):
            coords.append(p / np.linalg.norm(p))
        return z, [space @ c for c in coords]

    def planes(self, g: PseudoMetric):
        """Yield ``(u, ys)``: u null and ys (columns) an orthonormal basis of a complement of u in u-perp."""
        z, xs = self.directions(g)
        frame, _ = g.orthonormal_frame()
        space = frame[:, 1:]
        for x in xs:
            u = z + x
            # complement of u in u-perp: spacelike vectors orthogonal to z and x
            c = space.T @ g.matrix @ x
            coords = _orth_complement(c)
            yield u, space @ coords


def _orth_complement(c: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of the Euclidean complement of unit vector c."""
    c = c / np.linalg.norm(c)
    q, _ = np.linalg.qr(np.column_stack([c, np.eye(c.size)]))
    return q[:, 1 : c.size]


@dataclass(frozen=True)
class Lemma21Result:
    vanishes_on_degenerate: bool
    max_degenerate_value: float
    constant_k: float | None = None
    residual: float | None = None
    witness: tuple[np.ndarray, np.ndarray] | None = None


def lemma21_check(
    F: CurvatureTensor,
    g: PseudoMetric,
    sampler: DegeneratePlaneSampler | None = None,
    tol: float = 1e-9,
) -> Lemma21Result:
    """Decide whether F vanishes on degenerate planes and, if so, fit its constant k.

    For each sampled null u the whole quadratic form y -> F(u, y, y, u) on
    u-perp is diagonalized, so a pass covers every y, not only basis vectors.
    On failure the worst (u, y) pair is returned as witness.
    """
    sampler = sampler or DegeneratePlaneSampler()
    worst, witness = 0.0, None
    for u, ys in sampler.planes(g):
        B = np.einsum("ijkl,i,ja,kb,l->ab", F.entries, u, ys, ys, u)
        w, v = jacobi_eigh(B)
        idx = int(np.argmax(np.abs(w)))
        if abs(w[idx]) > worst:
            worst, witness = float(abs(w[idx])), (u, ys @ v[:, idx])
    if worst >= tol:
        return Lemma21Result(False, worst, witness=witness)
    frame, _ = g.orthonormal_frame()
    ks = []
    for i, j in itertools.combinations(range(g.dim), 2):
        x, y = frame[:, i], frame[:, j]
        delta = g.inner(x, x) * g.inner(y, y) - g.inner(x, y) ** 2
        ks.append(F(x, y, x, y) / delta)
    k = float(np.mean(ks))
    residual = float(np.max(np.abs(F.entries - constant_k_form(k, g).entries)))
    return Lemma21Result(True, worst, constant_k=k, residual=residual)
