"""Lorentz globally framed f-structures at a single point.

A :class:`GffPoint` stores the metric, the (1,1) tensor phi, the
characteristic vectors xi_alpha and the 1-forms eta^alpha as arrays in one
fixed frame. Vectors are component arrays in that frame; phi acts on column
vectors; each eta^alpha is a row (covector).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DegeneratePlaneError, GeometryError, StructureShapeError
from .tensor_core import CurvatureTensor, PseudoMetric, ViolationReport, _frozen

STRUCTURE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class GffPoint:
    n: int
    s: int
    g: PseudoMetric
    phi: np.ndarray
    xi: np.ndarray  # shape (s, dim), row alpha is xi_alpha
    eta: np.ndarray  # shape (s, dim), row alpha is eta^alpha
    eps: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.g, PseudoMetric):
            object.__setattr__(self, "g", PseudoMetric(self.g))
        phi, xi, eta = _frozen(self.phi), _frozen(self.xi), _frozen(self.eta)
        if xi.ndim == 1:
            xi = _frozen(xi[None, :])
        if eta.ndim == 1:
            eta = _frozen(eta[None, :])
        if self.n < 1 or self.s < 1:
            raise StructureShapeError(f"n and s must be positive, got n={self.n}, s={self.s}")
        d = 2 * self.n + self.s
        if self.g.dim != d:
            raise StructureShapeError(f"metric is {self.g.dim}-dimensional, expected 2n+s = {d}")
        if phi.shape != (d, d):
            raise StructureShapeError(f"phi has shape {phi.shape}, expected {(d, d)}")
        if xi.shape != (self.s, d) or eta.shape != (self.s, d):
            raise StructureShapeError(f"xi/eta must have shape {(self.s, d)}, got {xi.shape}, {eta.shape}")
        if len(self.eps) != self.s or any(e not in (-1, 1) for e in self.eps):
            raise StructureShapeError(f"eps must be {self.s} signs, got {self.eps}")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "eps", tuple(int(e) for e in self.eps))

    @property
    def dim(self) -> int:
        return 2 * self.n + self.s

    @property
    def G(self) -> np.ndarray:
        return self.g.matrix

    @property
    def epsilon(self) -> int:
        return sum(self.eps)

    @cached_property
    def eta_tilde(self) -> np.ndarray:
        """Covector sum_alpha eps_alpha eta^alpha."""
        return _frozen(np.asarray(self.eps, dtype=float) @ self.eta)

    @cached_property
    def xi_tilde(self) -> np.ndarray:
        return _frozen(self.xi.sum(axis=0))

    @cached_property
    def projector(self) -> np.ndarray:
        """Matrix of v -> v - eta^alpha(v) xi_alpha, the projection onto Im phi."""
        return _frozen(np.eye(self.dim) - self.xi.T @ self.eta)

    @cached_property
    def phi_metric(self) -> np.ndarray:
        """Matrix of (X, Y) -> g(phi X, phi Y)."""
        return _frozen(self.phi.T @ self.G @ self.phi)

    @cached_property
    def sasaki_matrix(self) -> np.ndarray:
        """Matrix of (X, Y) -> g(X, phi Y)."""
        return _frozen(self.G @ self.phi)

    @cached_property
    def im_phi_basis(self) -> np.ndarray:
        """g-orthonormal adapted basis (x_1, phi x_1, ..., x_n, phi x_n) of Im phi, as columns.

        Frame vectors are projected onto Im phi in order; the first one
        independent of the pairs found so far starts the next pair.
        """
        G = self.G
        basis: list[np.ndarray] = []
        for j in range(self.dim):
            if len(basis) == 2 * self.n:
                break
            v = self.projector[:, j].copy()
            for b in basis:
                v = v - (b @ G @ v) * b
            norm2 = float(v @ G @ v)
            if norm2 <= 1e-10 * max(1.0, float(np.abs(self.projector[:, j]).max()) ** 2):
                continue
            x = v / np.sqrt(norm2)
            basis += [x, self.phi @ x]
        if len(basis) != 2 * self.n:
            raise GeometryError(f"Im phi has no positive definite rank-{2 * self.n} basis")
        return _frozen(np.column_stack(basis))

    @cached_property
    def xi1_perp_basis(self) -> np.ndarray:
        """Orthonormal basis of xi_1-perp: the Im phi basis followed by xi_2, ..., xi_s."""
        return _frozen(np.column_stack([self.im_phi_basis] + [self.xi[a] for a in range(1, self.s)]))

    def eta_of(self, v) -> np.ndarray:
        return self.eta @ np.asarray(v, dtype=float)


def reframe(S: GffPoint, E) -> GffPoint:
    """The same structure expressed in the frame whose vectors are the columns of E."""
    E = np.asarray(E, dtype=float)
    Einv = np.linalg.inv(E)
    return GffPoint(
        n=S.n,
        s=S.s,
        g=PseudoMetric(E.T @ S.G @ E),
        phi=Einv @ S.phi @ E,
        xi=(Einv @ S.xi.T).T,
        eta=S.eta @ E,
        eps=S.eps,
    )


def reframe_tensor(R: CurvatureTensor, E) -> CurvatureTensor:
    """(0,4) tensor evaluated on the frame given by the columns of E."""
    E = np.asarray(E, dtype=float)
    return CurvatureTensor(np.einsum("ijkl,ia,jb,kc,ld->abcd", R.entries, E, E, E, E))


def validate_structure(S: GffPoint, tol: float = STRUCTURE_TOL) -> ViolationReport:
    """Max violation of each structure axiom; passes iff all are below ``tol``."""
    d = S.dim
    G = S.G
    eps = np.asarray(S.eps, dtype=float)
    v = {}
    v["phi_squared"] = float(np.max(np.abs(S.phi @ S.phi - (-np.eye(d) + S.xi.T @ S.eta))))
    v["eta_xi_duality"] = float(np.max(np.abs(S.eta @ S.xi.T - np.eye(S.s))))
    compat = G - S.eta.T @ np.diag(eps) @ S.eta
    v["metric_compatibility"] = float(np.max(np.abs(S.phi_metric - compat)))
    v["eta_metric_duality"] = float(np.max(np.abs(S.eta - np.diag(eps) @ S.xi @ G)))
    lorentz = S.g.signature == (1, d - 1) and S.eps[0] == -1 and all(e == 1 for e in S.eps[1:])
    v["lorentz_xi1_timelike"] = 0.0 if lorentz else 1.0
    v["rank_phi"] = float(abs(np.linalg.matrix_rank(S.phi, tol=1e-9) - 2 * S.n))
    # Im phi is orthogonal to ker phi = span(xi)
    v["im_phi_orthogonal_ker"] = float(np.max(np.abs(S.xi @ G @ S.phi)))
    try:
        B = S.im_phi_basis
        gram = B.T @ G @ B
        v["im_phi_positive_definite"] = float(np.max(np.abs(gram - np.eye(2 * S.n))))
    except GeometryError:
        v["im_phi_positive_definite"] = 1.0
    return ViolationReport(v, tol)


def sasaki_form(S: GffPoint, x, y) -> float:
    """Phi(x, y) = g(x, phi y)."""
    return float(np.asarray(x) @ S.sasaki_matrix @ np.asarray(y))


def project_im_phi(S: GffPoint, v) -> np.ndarray:
    return S.projector @ np.asarray(v, dtype=float)


@dataclass(frozen=True)
class PlaneSection:
    x: np.ndarray
    y: np.ndarray
    delta: float = field(init=False)
    g: PseudoMetric = field(repr=False, default=None)

    def __post_init__(self):
        x, y = np.asarray(self.x, dtype=float), np.asarray(self.y, dtype=float)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if self.g is None:
            raise ValueError("PlaneSection needs the metric to compute its Gram determinant")
        g = self.g
        object.__setattr__(self, "delta", g.inner(x, x) * g.inner(y, y) - g.inner(x, y) ** 2)

    def is_degenerate(self, tol: float = 1e-9) -> bool:
        return abs(self.delta) <= tol


def sectional_curvature(R: CurvatureTensor, g: PseudoMetric, plane: PlaneSection | tuple) -> float:
    if not isinstance(plane, PlaneSection):
        plane = PlaneSection(*plane, g=g)
    if plane.is_degenerate():
        raise DegeneratePlaneError(f"plane is degenerate (Gram determinant {plane.delta:.3e})")
    return R(plane.x, plane.y, plane.x, plane.y) / plane.delta


def phi_sectional_curvature(R: CurvatureTensor, S: GffPoint, x) -> float:
    """Sectional curvature of the phi-plane span{x, phi x}."""
    x = np.asarray(x, dtype=float)
    scale = max(1.0, float(np.max(np.abs(x))))
    if np.max(np.abs(S.eta_of(x))) > 1e-9 * scale:
        raise GeometryError("x is not in Im phi")
    if abs(S.g.inner(x, x)) <= 1e-9 * scale**2:
        raise DegeneratePlaneError("x is lightlike")
    return sectional_curvature(R, S.g, PlaneSection(x, S.phi @ x, g=S.g))


def p_tensor(S: GffPoint, x, y, z, w) -> float:
    """P(X,Y;Z,W) = Phi(X,Z)g(Y,W) - Phi(X,W)g(Y,Z) - Phi(Y,Z)g(X,W) + Phi(Y,W)g(X,Z)."""
    Phi = lambda a, b: sasaki_form(S, a, b)  # noqa: E731
    g = S.g.inner
    return Phi(x, z) * g(y, w) - Phi(x, w) * g(y, z) - Phi(y, z) * g(x, w) + Phi(y, w) * g(x, z)


def p_tensor_array(S: GffPoint) -> np.ndarray:
    """All frame values P[i,j,k,l] = P(e_i, e_j; e_k, e_l)."""
    Phi, G = S.sasaki_matrix, S.G
    return (
        np.einsum("ik,jl->ijkl", Phi, G)
        - np.einsum("il,jk->ijkl", Phi, G)
        - np.einsum("jk,il->ijkl", Phi, G)
        + np.einsum("jl,ik->ijkl", Phi, G)
    )
