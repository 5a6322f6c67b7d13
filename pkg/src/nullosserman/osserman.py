"""Null congruences, Jacobi operators on u-perp mod u, and Osserman verdicts.

All null directions are based at the timelike characteristic vector xi_1:
u = xi_1 + x with x a unit vector of xi_1-perp. The quotient u-perp/span{u}
is realized by W = u-perp intersected with xi_1-perp, which is positive
definite, so the Jacobi operator becomes an ordinary symmetric matrix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import EigenvalueNotSimpleError, GeometryError, NullDirectionError, ScopeError
from .gff import GffPoint, phi_sectional_curvature
from .curvature import AlmostComplexJ
from .tensor_core import CurvatureTensor, Spectrum, _orth_complement, jacobi_eigh, symmetric_spectra

NULL_TOL = 1e-10


@dataclass(frozen=True)
class OssermanConfig:
    count: int = 64
    seed: int = 42
    tol: float = 1e-7


@dataclass(frozen=True, eq=False)
class NullDirection:
    u: np.ndarray
    base: np.ndarray
    x: np.ndarray

    @classmethod
    def from_unit(cls, S: GffPoint, x) -> "NullDirection":
        """u = xi_1 + x for a unit x orthogonal to xi_1."""
        x = np.asarray(x, dtype=float)
        z = S.xi[0]
        if abs(S.g.inner(x, z)) > NULL_TOL or abs(S.g.inner(x, x) - 1.0) > NULL_TOL:
            raise NullDirectionError("x must be a unit vector orthogonal to xi_1")
        return cls(z + x, z.copy(), x)

    @classmethod
    def from_vector(cls, S: GffPoint, u) -> "NullDirection":
        u = np.asarray(u, dtype=float)
        z = S.xi[0]
        if abs(S.g.inner(u, u)) > NULL_TOL:
            raise NullDirectionError(f"u is not null: g(u,u) = {S.g.inner(u, u):.3e}")
        if abs(S.g.inner(u, z) + 1.0) > NULL_TOL:
            raise NullDirectionError(f"u is not in N(xi_1): g(u, xi_1) = {S.g.inner(u, z):.6g}")
        return cls(u, z.copy(), u - z)

    def as_dict(self) -> dict:
        return {"u": [float(a) for a in self.u], "x": [float(a) for a in self.x]}


@dataclass(frozen=True, eq=False)
class GeometricRealization:
    basis: np.ndarray  # columns w_i, orthonormal and orthogonal to u
    u: np.ndarray


@dataclass(frozen=True, eq=False)
class JacobiOperator:
    matrix: np.ndarray
    realization: GeometricRealization

    def spectrum(self, tol: float = 1e-9) -> Spectrum:
        return symmetric_spectra(self.matrix[None], tol)[0]

    def coordinates(self, S: GffPoint, v) -> np.ndarray:
        """Coordinates of the class of v (v in u-perp) in the realization basis."""
        return self.realization.basis.T @ S.G @ np.asarray(v, dtype=float)


@dataclass(frozen=True, eq=False)
class OssermanVerdict:
    passed: bool
    reference_spectrum: Spectrum
    samples: int
    worst_deviation: float
    tol: float
    witness: tuple[NullDirection, Spectrum] | None = None

    def as_dict(self) -> dict:
        out = {
            "passed": self.passed,
            "reference_spectrum": self.reference_spectrum.as_dict(),
            "samples": self.samples,
            "worst_deviation": self.worst_deviation,
            "tol": self.tol,
            "witness": None,
        }
        if self.witness is not None:
            nd, spec = self.witness
            out["witness"] = {**nd.as_dict(), "spectrum": spec.as_dict()}
        return out


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def _sphere_coords(m: int, count: int, seed: int) -> list[np.ndarray]:
    if count < 0:
        raise ValueError(f"count must be non-negative, got {count}")
    eye = np.eye(m)
    coords = [eye[i] for i in range(m)]
    coords += [(eye[i] + eye[j]) / np.sqrt(2.0) for i, j in itertools.combinations(range(m), 2)]
    rng = np.random.default_rng(seed)
    for p in rng.standard_normal((count, m)):
        coords.append(p / np.linalg.norm(p))
    return coords


def sample_phi_celestial_sphere(S: GffPoint, count: int, seed: int) -> list[np.ndarray]:
    """Unit x in Im phi: basis vectors, normalized pairwise sums, then ``count`` seeded points."""
    B = S.im_phi_basis
    return [B @ c for c in _sphere_coords(B.shape[1], count, seed)]


def sample_full_celestial_sphere(S: GffPoint, count: int, seed: int) -> list[np.ndarray]:
    """As :func:`sample_phi_celestial_sphere` over all of xi_1-perp (adds xi_2, ..., xi_s)."""
    B = S.xi1_perp_basis
    return [B @ c for c in _sphere_coords(B.shape[1], count, seed)]


# ---------------------------------------------------------------------------
# Jacobi operators
# ---------------------------------------------------------------------------


def _realization_basis(S: GffPoint, x: np.ndarray) -> np.ndarray:
    Q = S.xi1_perp_basis
    return Q @ _orth_complement(Q.T @ S.G @ x)


def geometric_realization(S: GffPoint, u: NullDirection) -> GeometricRealization:
    if np.max(np.abs(u.base - S.xi[0])) > NULL_TOL:
        raise NullDirectionError("the null direction is not based at xi_1")
    if abs(S.g.inner(u.u, u.u)) > NULL_TOL or abs(S.g.inner(u.u, u.base) + 1.0) > NULL_TOL:
        raise NullDirectionError("u is not in the null congruence of xi_1")
    return GeometricRealization(_realization_basis(S, u.x), u.u)


def jacobi_operator(
    R: CurvatureTensor, S: GffPoint, u: NullDirection, realization: GeometricRealization | None = None
) -> JacobiOperator:
    """Matrix M[i, j] = R(w_i, u, w_j, u) = g(R(w_j, u)u, w_i)."""
    W = (realization or geometric_realization(S, u)).basis
    M = np.einsum("ijkl,ia,j,kb,l->ab", R.entries, W, u.u, W, u.u)
    return JacobiOperator(M, realization or GeometricRealization(W, u.u))


def _jacobi_matrices(R: CurvatureTensor, S: GffPoint, xs, restrict_im_phi: bool = False) -> np.ndarray:
    z = S.xi[0]
    Ws, us = [], []
    for x in xs:
        if restrict_im_phi:
            B = S.im_phi_basis
            Ws.append(B @ _orth_complement(B.T @ S.G @ x))
        else:
            Ws.append(_realization_basis(S, x))
        us.append(z + x)
    W, U = np.array(Ws), np.array(us)
    A = np.einsum("ijkl,nj,nl->nik", R.entries, U, U)
    return np.einsum("nia,nik,nkb->nab", W, A, W)


def _verdict(R, S, xs, config: OssermanConfig) -> OssermanVerdict:
    spectra = symmetric_spectra(_jacobi_matrices(R, S, xs), config.tol)
    ref = spectra[0]
    worst, worst_idx = 0.0, None
    for idx, spec in enumerate(spectra):
        dev = ref.deviation(spec)
        if dev > worst:
            worst, worst_idx = dev, idx
    passed = worst < config.tol
    witness = None
    if not passed:
        witness = (NullDirection.from_unit(S, xs[worst_idx]), spectra[worst_idx])
    return OssermanVerdict(passed, ref, len(spectra), worst, config.tol, witness)


def check_phi_null_osserman(R: CurvatureTensor, S: GffPoint, config: OssermanConfig = OssermanConfig()) -> OssermanVerdict:
    """Is the spectrum of the Jacobi operator the same for all sampled u in N_phi(xi_1)?"""
    return _verdict(R, S, sample_phi_celestial_sphere(S, config.count, config.seed), config)


def check_null_osserman(R: CurvatureTensor, S: GffPoint, config: OssermanConfig = OssermanConfig()) -> OssermanVerdict:
    """As :func:`check_phi_null_osserman` over the full null congruence N(xi_1)."""
    return _verdict(R, S, sample_full_celestial_sphere(S, config.count, config.seed), config)


def jacobi_on_im_phi(R: CurvatureTensor, S: GffPoint, x) -> np.ndarray:
    """Jacobi operator of u = xi_1 + x compressed to u-perp and Im phi (= x-perp in Im phi)."""
    return _jacobi_matrices(R, S, [np.asarray(x, dtype=float)], restrict_im_phi=True)[0]


def rx_operator(R: CurvatureTensor, S: GffPoint, x) -> tuple[np.ndarray, np.ndarray]:
    """Matrix of v -> R(v, x)x on x-perp in Im phi, and the basis (columns) it is written in."""
    x = np.asarray(x, dtype=float)
    B = S.im_phi_basis
    W = B @ _orth_complement(B.T @ S.G @ x)
    return np.einsum("ijkl,ia,j,kb,l->ab", R.entries, W, x, W, x), W


# ---------------------------------------------------------------------------
# Recovering J and the single-eigenvalue case
# ---------------------------------------------------------------------------


def _simple_eigenvector(R, S, x, target, tol) -> np.ndarray:
    """Unit eigenvector (Im phi coordinates) of R_x for the simple eigenvalue ``target``."""
    M, W = rx_operator(R, S, x)
    w, V = jacobi_eigh(M)
    spec = Spectrum.from_values(w, tol)
    reps = np.asarray(spec.eigenvalues)
    k = int(np.argmin(np.abs(reps - target)))
    match_tol = max(1e-6, 1e3 * tol) * max(1.0, abs(target))
    if abs(reps[k] - target) > match_tol:
        raise EigenvalueNotSimpleError(x, target, 0)
    if spec.multiplicities[k] != 1:
        raise EigenvalueNotSimpleError(x, target, spec.multiplicities[k])
    idx = int(sum(spec.multiplicities[:k]))
    B = S.im_phi_basis
    return B.T @ S.G @ (W @ V[:, idx])


def recover_J(R: CurvatureTensor, S: GffPoint, c1: float, tol: float = 1e-7) -> AlmostComplexJ:
    """Recover the almost complex structure whose J x spans the (c1 - 1)-eigenspace of R_x.

    J e_1 is the eigenvector for the first Im phi basis vector, signed so its
    largest component is positive. For k > 1 the sign of J e_k is the one for
    which (J e_1 + J e_k)/sqrt(2) spans the eigenline at (e_1 + e_k)/sqrt(2).
    The result is therefore determined up to an overall sign.
    """
    if S.n < 2:
        raise ScopeError("J recovery needs n > 1")
    B = S.im_phi_basis
    m = B.shape[1]
    target = c1 - 1.0
    cols = []
    v1 = _simple_eigenvector(R, S, B[:, 0], target, tol)
    v1 = v1 * np.sign(v1[np.argmax(np.abs(v1))])
    cols.append(v1)
    for k in range(1, m):
        vk = _simple_eigenvector(R, S, B[:, k], target, tol)
        w = _simple_eigenvector(R, S, (B[:, 0] + B[:, k]) / np.sqrt(2.0), target, tol)
        plus = abs(w @ (v1 + vk)) / np.linalg.norm(v1 + vk)
        minus = abs(w @ (v1 - vk)) / np.linalg.norm(v1 - vk)
        cols.append(vk if plus >= minus else -vk)
    J = AlmostComplexJ(np.column_stack(cols))
    bad = {k: v for k, v in J.violations().items() if v >= max(tol, 1e-9) * 10}
    if bad:
        raise GeometryError(f"recovered map is not an almost Hermitian structure: {bad}")
    return J


def remark58_residual(c1: float, c2: float) -> float:
    """c1 - 4 c2 + 3, which vanishes when J = +-phi is compatible with the S-structure."""
    return c1 - 4.0 * c2 + 3.0


@dataclass(frozen=True)
class SingleEigenvalueReport:
    is_single: bool
    lambda_: float | None
    phi_sectional_c: float
    phi_sectional_spread: float
    spectra_agree: bool

    def as_dict(self) -> dict:
        return {
            "is_single": self.is_single,
            "lambda": self.lambda_,
            "phi_sectional_c": self.phi_sectional_c,
            "phi_sectional_spread": self.phi_sectional_spread,
            "spectra_agree": self.spectra_agree,
        }


def classify_single_eigenvalue(
    R: CurvatureTensor, S: GffPoint, config: OssermanConfig = OssermanConfig()
) -> SingleEigenvalueReport:
    """Does the Jacobi operator restricted to u-perp and Im phi have a single eigenvalue?"""
    if S.s != 2 or S.n < 2:
        raise ScopeError(f"needs s = 2 and n > 1, got n={S.n}, s={S.s}")
    xs = sample_phi_celestial_sphere(S, config.count, config.seed)
    spectra = symmetric_spectra(_jacobi_matrices(R, S, xs, restrict_im_phi=True), config.tol)
    agree = all(spectra[0].deviation(sp) < config.tol for sp in spectra)
    single = agree and all(len(sp.eigenvalues) == 1 for sp in spectra)
    H = np.array([phi_sectional_curvature(R, S, x) for x in xs])
    return SingleEigenvalueReport(
        is_single=single,
        lambda_=spectra[0].eigenvalues[0] if single else None,
        phi_sectional_c=float(np.mean(H)),
        phi_sectional_spread=float(np.max(H) - np.min(H)),
        spectra_agree=agree,
    )


def space_form_jacobi_spectrum(n: int, s: int, c: float) -> np.ndarray:
    """Closed-form Jacobi spectrum (sorted, with multiplicity) of an S-space form."""
    vals = [c + 1.0] + [(c + 3.0 * s - 2.0) / 4.0] * (2 * n - 2)
    if s >= 2:
        vals += [float(s - 1)] + [0.0] * (s - 2)
    return np.sort(np.array(vals))
