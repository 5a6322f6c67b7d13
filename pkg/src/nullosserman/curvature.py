"""Curvature tensors from four independent sources.

* :func:`space_form_curvature` evaluates the closed form of an S-space form
  with constant phi-sectional curvature c.
* :func:`reconstructed_curvature` assembles R from the building blocks
  S^*, S_*, R^0 and R^J for two characteristic vectors.
* :func:`lie_group_curvature` runs the Koszul formula on left-invariant frames.
* :func:`coordinate_curvature` differentiates a polynomial chart metric exactly.

Every engine returns a (0,4) :class:`CurvatureTensor` in the structure frame.
(1,3) building blocks are stored as arrays ``T[a, x, y, v]``, the a-th
component of T(e_x, e_y)e_v.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import GeometryError, JacobiIdentityError, NonPolynomialMetricError, ScopeError
from .gff import GffPoint, p_tensor_array, reframe, reframe_tensor
from .polynomial import Polynomial, derivative_array, evaluate_array
from .tensor_core import CurvatureTensor, PseudoMetric, ViolationReport, _frozen

# ---------------------------------------------------------------------------
# Closed form for S-space forms
# ---------------------------------------------------------------------------


def space_form_curvature(S: GffPoint, c: float) -> CurvatureTensor:
    """Curvature of an S-space form with phi-sectional curvature c.

    eps = sum of the eps_alpha is read from the structure.
    """
    A, Phi, t = S.phi_metric, S.sasaki_matrix, S.eta_tilde
    eps = S.epsilon
    first = np.einsum("jk,il->ijkl", A, A) - np.einsum("ik,jl->ijkl", A, A)
    second = (
        np.einsum("li,kj->ijkl", Phi, Phi)
        - np.einsum("ki,lj->ijkl", Phi, Phi)
        + 2.0 * np.einsum("ij,lk->ijkl", Phi, Phi)
    )
    third = (
        np.einsum("l,i,kj->ijkl", t, t, A)
        - np.einsum("l,j,ki->ijkl", t, t, A)
        + np.einsum("j,k,li->ijkl", t, t, A)
        - np.einsum("k,i,lj->ijkl", t, t, A)
    )
    return CurvatureTensor(-(c + 3 * eps) / 4.0 * first - (c - eps) / 4.0 * second - third)


# ---------------------------------------------------------------------------
# Building blocks of the two-eigenvalue reconstruction
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AlmostComplexJ:
    """Almost Hermitian J on Im phi, as a matrix on the structure's Im phi basis."""

    J: np.ndarray

    def __post_init__(self):
        J = _frozen(self.J)
        if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] % 2:
            raise GeometryError(f"J must be an even square matrix, got {J.shape}")
        object.__setattr__(self, "J", J)

    def violations(self) -> dict:
        m = self.J.shape[0]
        return {
            "J_squared": float(np.max(np.abs(self.J @ self.J + np.eye(m)))),
            "J_orthogonal": float(np.max(np.abs(self.J.T @ self.J - np.eye(m)))),
        }

    def is_valid(self, tol: float = 1e-9) -> bool:
        return all(v < tol for v in self.violations().values())

    def operator(self, S: GffPoint) -> np.ndarray:
        """Full dim x dim matrix: J on Im phi, zero on ker phi."""
        B = S.im_phi_basis
        if B.shape[1] != self.J.shape[0]:
            raise GeometryError("J does not match the Im phi dimension of the structure")
        return B @ self.J @ B.T @ S.G

    @classmethod
    def from_phi(cls, S: GffPoint) -> "AlmostComplexJ":
        B = S.im_phi_basis
        return cls(B.T @ S.G @ S.phi @ B)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "AlmostComplexJ":
        """Q J_std Q^T with Q Haar-random orthogonal."""
        q, r = np.linalg.qr(rng.standard_normal((2 * n, 2 * n)))
        q = q * np.sign(np.diag(r))
        std = np.kron(np.eye(n), np.array([[0.0, -1.0], [1.0, 0.0]]))
        return cls(q @ std @ q.T)


def s_star(S: GffPoint, x, y, v) -> np.ndarray:
    """S^*(x,y)v = t(y)t(v)x - t(x)t(v)y + (g(y,v)t(x) - g(x,v)t(y)) xi_tilde, t = eta_tilde."""
    x, y, v = (np.asarray(a, dtype=float) for a in (x, y, v))
    t = S.eta_tilde
    g = S.g.inner
    return (t @ y) * (t @ v) * x - (t @ x) * (t @ v) * y + (g(y, v) * (t @ x) - g(x, v) * (t @ y)) * S.xi_tilde


def s_lower_star(S: GffPoint, x, y, v) -> np.ndarray:
    """S_*(x,y)v = -g(phi y, phi v) phi^2 x + g(phi x, phi v) phi^2 y."""
    x, y, v = (np.asarray(a, dtype=float) for a in (x, y, v))
    A = S.phi_metric
    P2 = S.phi @ S.phi
    return -(y @ A @ v) * (P2 @ x) + (x @ A @ v) * (P2 @ y)


def r_zero(S: GffPoint, x, y, v) -> np.ndarray:
    px, py, pv = (S.projector @ np.asarray(a, dtype=float) for a in (x, y, v))
    g = S.g.inner
    return g(py, pv) * px - g(px, pv) * py


def r_j(S: GffPoint, J: AlmostComplexJ, x, y, v) -> np.ndarray:
    Jf = J.operator(S)
    px, py, pv = (S.projector @ np.asarray(a, dtype=float) for a in (x, y, v))
    g = S.g.inner
    return g(Jf @ py, pv) * (Jf @ px) - g(Jf @ px, pv) * (Jf @ py) + 2.0 * g(px, Jf @ py) * (Jf @ pv)


def _s_star_array(S: GffPoint) -> np.ndarray:
    t, G, xt, I = S.eta_tilde, S.G, S.xi_tilde, np.eye(S.dim)
    return (
        np.einsum("y,v,ax->axyv", t, t, I)
        - np.einsum("x,v,ay->axyv", t, t, I)
        + np.einsum("yv,x,a->axyv", G, t, xt)
        - np.einsum("xv,y,a->axyv", G, t, xt)
    )


def _s_lower_star_array(S: GffPoint) -> np.ndarray:
    A, P2 = S.phi_metric, S.phi @ S.phi
    return -np.einsum("yv,ax->axyv", A, P2) + np.einsum("xv,ay->axyv", A, P2)


def _r_zero_array(S: GffPoint) -> np.ndarray:
    P = S.projector
    gI = P.T @ S.G @ P
    return np.einsum("yv,ax->axyv", gI, P) - np.einsum("xv,ay->axyv", gI, P)


def _r_j_array(S: GffPoint, J: AlmostComplexJ) -> np.ndarray:
    JP = J.operator(S) @ S.projector
    K = JP.T @ S.G @ S.projector  # K[y, v] = g(J pi y, pi v)
    return (
        np.einsum("yv,ax->axyv", K, JP)
        - np.einsum("xv,ay->axyv", K, JP)
        + 2.0 * np.einsum("yx,av->axyv", K, JP)
    )


def lower(S: GffPoint, T: np.ndarray) -> CurvatureTensor:
    """(0,4) lowering: entries[i,j,k,l] = g(e_i, T(e_k, e_l) e_j)."""
    return CurvatureTensor(np.einsum("ia,aklj->ijkl", S.G, T))


def building_blocks(S: GffPoint, J: AlmostComplexJ) -> dict[str, CurvatureTensor]:
    """Lowered S^*, S_*, R^0 and R^J."""
    return {
        "s_star": lower(S, _s_star_array(S)),
        "s_lower_star": lower(S, _s_lower_star_array(S)),
        "r_zero": lower(S, _r_zero_array(S)),
        "r_j": lower(S, _r_j_array(S, J)),
    }


def reconstructed_curvature(S: GffPoint, J: AlmostComplexJ, c1: float, c2: float) -> CurvatureTensor:
    """R(x,y)v = S^*(x,y)v - S_*(x,y)v + c2 R^0(x,y)v + (c1 - c2)/3 R^J(x,y)v, lowered."""
    if S.s != 2:
        raise ScopeError(f"the reconstruction needs exactly two characteristic vectors, got s={S.s}")
    b = building_blocks(S, J)
    return b["s_star"] - b["s_lower_star"] + c2 * b["r_zero"] + ((c1 - c2) / 3.0) * b["r_j"]


def degenerate_plane_tensors(
    R: CurvatureTensor, S: GffPoint, J: AlmostComplexJ, c1: float, c2: float
) -> tuple[CurvatureTensor, CurvatureTensor]:
    """``(F, H)`` with F = R - c2 R^0 - (c1-c2)/3 R^J and H = F - (S^* - S_*), all lowered.

    F is the curvature-like map that should vanish on the degenerate planes
    span{u, y}, u in N_phi(xi_1), y in u-perp and Im phi; H should vanish on
    every degenerate plane and have constant k = 0.
    """
    b = building_blocks(S, J)
    F = R - c2 * b["r_zero"] - ((c1 - c2) / 3.0) * b["r_j"]
    H = F - (b["s_star"] - b["s_lower_star"])
    return F, H


def two_eigenvalue_formula_violations(
    R: CurvatureTensor, S: GffPoint, J: AlmostComplexJ, c1: float, c2: float
) -> dict[str, float]:
    """Max deviation of R from the two explicit formulas on xi_1 and on xi_1-perp frame triples."""
    if S.s != 2:
        raise ScopeError("defined for two characteristic vectors")
    xi1, xi2 = S.xi
    eta1, eta2 = S.eta
    t, xt = S.eta_tilde, S.xi_tilde
    A, P2 = S.phi_metric, S.phi @ S.phi
    g = S.g.inner
    basis = S.xi1_perp_basis.T
    worst1 = 0.0
    for x in basis:
        lhs = R.endomorphism(S.g, x, xi1, xi1)
        rhs = (eta1 @ xi1) ** 2 * (x - (t @ x) * xi2)
        worst1 = max(worst1, float(np.max(np.abs(lhs - rhs))))
    worst2 = 0.0
    tau = (c1 - c2) / 3.0
    for x in basis:
        for y in basis:
            for v in basis:
                lhs = R.endomorphism(S.g, x, y, v)
                rhs = (
                    (eta2 @ v) * ((eta2 @ y) * x - (eta2 @ x) * y)
                    + (g(y, v) * (eta2 @ x) - g(x, v) * (eta2 @ y)) * xt
                    + (y @ A @ v) * (P2 @ x)
                    - (x @ A @ v) * (P2 @ y)
                    + c2 * r_zero(S, x, y, v)
                    + tau * r_j(S, J, x, y, v)
                )
                worst2 = max(worst2, float(np.max(np.abs(lhs - rhs))))
    return {"c1": worst1, "c2": worst2}


# ---------------------------------------------------------------------------
# Koszul oracle for left-invariant structures
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LiePointModel:
    """Left-invariant frame: ``brackets[i, j]`` is the vector [e_i, e_j]."""

    base: GffPoint
    brackets: np.ndarray

    def __post_init__(self):
        C = _frozen(self.brackets)
        d = self.base.dim
        if C.shape != (d, d, d):
            raise GeometryError(f"brackets must have shape {(d, d, d)}, got {C.shape}")
        object.__setattr__(self, "brackets", C)

    def violations(self) -> dict[str, float]:
        C = self.brackets
        # [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]
        jac = (
            np.einsum("ijm,mkp->ijkp", C, C)
            + np.einsum("jkm,mip->ijkp", C, C)
            + np.einsum("kim,mjp->ijkp", C, C)
        )
        return {
            "antisymmetry": float(np.max(np.abs(C + C.transpose(1, 0, 2)))),
            "jacobi_identity": float(np.max(np.abs(jac))),
        }


def koszul_connection(M: LiePointModel) -> np.ndarray:
    """``Gamma[i, j]`` = components of nabla_{e_i} e_j for a left-invariant metric."""
    v = M.violations()
    if v["antisymmetry"] > 1e-10 or v["jacobi_identity"] > 1e-10:
        raise JacobiIdentityError(f"brackets do not define a Lie algebra: {v}")
    G = M.base.G
    Cl = np.einsum("ijm,mk->ijk", M.brackets, G)  # g([e_i, e_j], e_k)
    lowered = 0.5 * (Cl - np.einsum("jki->ijk", Cl) + np.einsum("kij->ijk", Cl))
    return np.einsum("ijk,pk->ijp", lowered, M.base.g.inverse)


def lie_group_curvature(M: LiePointModel) -> CurvatureTensor:
    Gam = koszul_connection(M)
    C = M.brackets
    # R(e_i,e_j)e_k = nabla_i nabla_j e_k - nabla_j nabla_i e_k - nabla_[e_i,e_j] e_k
    Rv = (
        np.einsum("jkm,imp->ijkp", Gam, Gam)
        - np.einsum("ikm,jmp->ijkp", Gam, Gam)
        - np.einsum("ijm,mkp->ijkp", C, Gam)
    )
    return CurvatureTensor(np.einsum("cdbp,pa->abcd", Rv, M.base.G))


def xi_derivative_violation(M: LiePointModel) -> float:
    """Max |nabla_X xi_alpha + eps_alpha phi X| over frame vectors X."""
    S = M.base
    Gam = koszul_connection(M)
    worst = 0.0
    for a in range(S.s):
        xi = S.xi[a]
        for i in range(S.dim):
            nabla = np.einsum("j,jp->p", xi, Gam[i])
            worst = max(worst, float(np.max(np.abs(nabla + S.eps[a] * S.phi[:, i]))))
    return worst


# ---------------------------------------------------------------------------
# Christoffel oracle for polynomial charts
# ---------------------------------------------------------------------------


def _poly_array(a, shape, nvars: int) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    flat = np.asarray(a, dtype=object).reshape(-1)
    if flat.size != out.size:
        raise GeometryError(f"expected {shape} entries, got {flat.size}")
    for idx, p in enumerate(flat):
        if isinstance(p, Polynomial):
            out.flat[idx] = p
        elif isinstance(p, (int, float, np.floating, np.integer)) and not isinstance(p, bool):
            out.flat[idx] = Polynomial.constant(nvars, float(p))
        else:
            raise NonPolynomialMetricError(f"entry {idx} is not a polynomial: {p!r}")
    return out


@dataclass(frozen=True, eq=False)
class ChartPointModel:
    """A g.f.f structure given by polynomial component functions, evaluated at ``point``."""

    n: int
    s: int
    eps: tuple[int, ...]
    point: np.ndarray
    metric_poly: np.ndarray
    phi_poly: np.ndarray
    xi_poly: np.ndarray
    eta_poly: np.ndarray

    def __post_init__(self):
        d = 2 * self.n + self.s
        object.__setattr__(self, "point", _frozen(self.point))
        if self.point.shape != (d,):
            raise GeometryError(f"point must have {d} coordinates")
        object.__setattr__(self, "metric_poly", _poly_array(self.metric_poly, (d, d), d))
        object.__setattr__(self, "phi_poly", _poly_array(self.phi_poly, (d, d), d))
        object.__setattr__(self, "xi_poly", _poly_array(self.xi_poly, (self.s, d), d))
        object.__setattr__(self, "eta_poly", _poly_array(self.eta_poly, (self.s, d), d))
        object.__setattr__(self, "eps", tuple(int(e) for e in self.eps))

    @property
    def dim(self) -> int:
        return 2 * self.n + self.s

    def at(self, point) -> "ChartPointModel":
        return ChartPointModel(
            self.n, self.s, self.eps, point, self.metric_poly, self.phi_poly, self.xi_poly, self.eta_poly
        )

    @cached_property
    def coordinate_point(self) -> GffPoint:
        p = self.point
        return GffPoint(
            n=self.n,
            s=self.s,
            g=PseudoMetric(evaluate_array(self.metric_poly, p)),
            phi=evaluate_array(self.phi_poly, p),
            xi=evaluate_array(self.xi_poly, p),
            eta=evaluate_array(self.eta_poly, p),
            eps=self.eps,
        )

    @cached_property
    def structure_frame(self) -> np.ndarray:
        """Columns (x_1, phi x_1, ..., xi_1, ..., xi_s) in coordinate components."""
        S = self.coordinate_point
        return np.column_stack([S.im_phi_basis] + list(S.xi))

    @cached_property
    def structure_point(self) -> GffPoint:
        return reframe(self.coordinate_point, self.structure_frame)


def coordinate_curvature_chart_frame(M: ChartPointModel) -> CurvatureTensor:
    """Curvature in the coordinate frame from exact first and second metric derivatives."""
    d, p = M.dim, M.point
    if any(not isinstance(q, Polynomial) for q in M.metric_poly.flat):
        raise NonPolynomialMetricError("metric entries must be polynomials")
    g = evaluate_array(M.metric_poly, p)
    ginv = np.linalg.inv(g)
    first = [derivative_array(M.metric_poly, c) for c in range(d)]
    dg = np.array([evaluate_array(f, p) for f in first])  # dg[c,a,b] = d_c g_ab
    ddg = np.array([[evaluate_array(derivative_array(first[c], e), p) for e in range(d)] for c in range(d)])
    # Christoffel symbols of the first kind, Gl[e,i,j] = Gamma_{e,ij}
    Gl = 0.5 * (np.einsum("ije->eij", dg) + np.einsum("jie->eij", dg) - dg)
    Gam = np.einsum("ae,eij->aij", ginv, Gl)
    dGl = 0.5 * (
        np.einsum("cije->ceij", ddg) + np.einsum("cjie->ceij", ddg) - ddg
    )  # dGl[c,e,i,j] = d_c Gamma_{e,ij}
    dGam = -np.einsum("ap,cpq,qe,eij->caij", ginv, dg, ginv, Gl) + np.einsum("ae,ceij->caij", ginv, dGl)
    # R(d_c, d_d) d_b = Rup[a,b,c,d] d_a
    Rup = (
        np.einsum("cadb->abcd", dGam)
        - np.einsum("dacb->abcd", dGam)
        + np.einsum("ace,edb->abcd", Gam, Gam)
        - np.einsum("ade,ecb->abcd", Gam, Gam)
    )
    return CurvatureTensor(np.einsum("ia,ajkl->ijkl", g, Rup))


def coordinate_curvature(M: ChartPointModel) -> CurvatureTensor:
    """Chart curvature converted to the structure frame of :attr:`ChartPointModel.structure_point`."""
    return reframe_tensor(coordinate_curvature_chart_frame(M), M.structure_frame)


# ---------------------------------------------------------------------------
# Identities satisfied by every indefinite S-manifold
# ---------------------------------------------------------------------------


def check_identities_2(R: CurvatureTensor, S: GffPoint, tol: float = 1e-9) -> ViolationReport:
    """Max violation of the five S-manifold curvature identities on Im phi and xi frames."""
    E = R.entries
    B = S.im_phi_basis
    X = S.xi.T
    eps = np.asarray(S.eps, dtype=float)
    contract = lambda a, b, c, d: np.einsum("ijkl,ia,jb,kc,ld->abcd", E, a, b, c, d)  # noqa: E731
    v = {}
    v["R(X,xi,Z,W)=0"] = float(np.max(np.abs(contract(B, X, B, B))))
    gram = B.T @ S.G @ B
    expected = np.einsum("a,b,xy->axby", eps, eps, gram)
    v["R(xi,X,xi,Y)=eps eps g(X,Y)"] = float(np.max(np.abs(contract(X, B, X, B) - expected)))
    v["R(xi,X,xi,xi)=0"] = float(np.max(np.abs(contract(X, B, X, X))))
    v["R(xi,xi,xi,xi)=0"] = float(np.max(np.abs(contract(X, X, X, X))))
    PB = S.phi @ B
    P = np.einsum("ijkl,ia,jb,kc,ld->abcd", p_tensor_array(S), B, B, B, B)
    lhs = contract(B, B, PB, B) + contract(B, B, B, PB)
    v["R(X,Y,phiZ,W)+R(X,Y,Z,phiW)=eps P"] = float(np.max(np.abs(lhs - S.epsilon * P)))
    return ViolationReport(v, tol)
