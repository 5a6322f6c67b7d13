import json

import numpy as np
import pytest

from nullosserman.catalog import build_space_form_model, build_u2_model, canonical_structure
from nullosserman.curvature import AlmostComplexJ, lie_group_curvature, reconstructed_curvature
from nullosserman.errors import EigenvalueNotSimpleError, NullDirectionError, ScopeError
from nullosserman.gff import reframe, reframe_tensor
from nullosserman.osserman import (
    GeometricRealization,
    NullDirection,
    OssermanConfig,
    check_null_osserman,
    check_phi_null_osserman,
    classify_single_eigenvalue,
    geometric_realization,
    jacobi_operator,
    recover_J,
    sample_full_celestial_sphere,
    sample_phi_celestial_sphere,
    space_form_jacobi_spectrum,
)


def _u2():
    M = build_u2_model()
    return M.base, lie_group_curvature(M)


def test_phi_sampler_probes_basis_first_and_is_deterministic():
    S = canonical_structure(2, 2)
    xs = sample_phi_celestial_sphere(S, 10, seed=1)
    assert len(xs) == 4 + 6 + 10
    assert np.allclose(np.column_stack(xs[:4]), S.im_phi_basis)
    for x in xs:
        assert np.allclose(S.eta @ x, 0.0, atol=1e-12)
        assert S.g.inner(x, x) == pytest.approx(1.0)
    again = sample_phi_celestial_sphere(S, 10, seed=1)
    assert all(np.array_equal(a, b) for a, b in zip(xs, again))
    other = sample_phi_celestial_sphere(S, 10, seed=2)
    assert not np.array_equal(xs[-1], other[-1])


def test_full_sampler_covers_xi1_perp():
    S = canonical_structure(1, 3)
    xs = sample_full_celestial_sphere(S, 0, seed=0)
    assert len(xs) == 4 + 6
    assert any(abs(S.eta[1] @ x) > 0.5 for x in xs)
    for x in xs:
        assert abs(S.g.inner(x, S.xi[0])) < 1e-12
        assert S.g.inner(x, x) == pytest.approx(1.0)


def test_realization_is_orthonormal_complement():
    S = canonical_structure(2, 3)
    x = sample_full_celestial_sphere(S, 3, seed=4)[-1]
    nd = NullDirection.from_unit(S, x)
    W = geometric_realization(S, nd).basis
    assert W.shape == (S.dim, S.dim - 2)
    assert np.allclose(W.T @ S.G @ W, np.eye(S.dim - 2), atol=1e-12)
    assert np.allclose(W.T @ S.G @ nd.u, 0.0, atol=1e-12)
    assert np.allclose(W.T @ S.G @ S.xi[0], 0.0, atol=1e-12)


def test_null_direction_guards():
    S = canonical_structure(1, 2)
    with pytest.raises(NullDirectionError):
        NullDirection.from_unit(S, 2 * S.im_phi_basis[:, 0])
    with pytest.raises(NullDirectionError):
        NullDirection.from_vector(S, S.xi[0])
    with pytest.raises(NullDirectionError):
        NullDirection.from_vector(S, -S.xi[0] + S.xi[1])  # null but g(u, xi_1) = +1
    nd = NullDirection.from_vector(S, S.xi[0] + S.xi[1])
    assert np.allclose(nd.x, S.xi[1])


def test_spectrum_does_not_depend_on_realization():
    S, R = _u2()
    x = (np.eye(4)[2] + np.eye(4)[1]) / np.sqrt(2)
    nd = NullDirection.from_unit(S, x)
    M = jacobi_operator(R, S, nd).matrix
    # a realization transverse to another timelike vector, with its own Gram matrix
    t = S.xi[0] + 0.3 * np.eye(4)[3]
    C = np.column_stack([S.G @ nd.u, S.G @ t])
    q, _ = np.linalg.qr(np.column_stack([C, np.eye(4)]))
    V = q[:, 2:4]
    gram = V.T @ S.G @ V
    M2 = np.einsum("ijkl,ia,j,kb,l->ab", R.entries, V, nd.u, V, nd.u)
    assert np.allclose(np.sort(np.linalg.eigvals(np.linalg.solve(gram, M2)).real), np.linalg.eigvalsh(M))
    # shifting the basis by multiples of u changes nothing
    W = geometric_realization(S, nd).basis
    shifted = GeometricRealization(W + np.outer(nd.u, [0.7, -1.1]), nd.u)
    assert np.allclose(jacobi_operator(R, S, nd, shifted).matrix, M, atol=1e-12)


def test_spectrum_scales_quadratically_along_the_null_line():
    S, R = _u2()
    nd = NullDirection.from_unit(S, np.eye(4)[2])
    W = geometric_realization(S, nd).basis
    M = jacobi_operator(R, S, nd).matrix
    for a in (0.5, 3.0):
        Ma = np.einsum("ijkl,ia,j,kb,l->ab", R.entries, W, a * nd.u, W, a * nd.u)
        assert np.allclose(Ma, a * a * M)


def test_u2_witness_and_spectra():
    S, R = _u2()
    null = check_null_osserman(R, S)
    assert not null.passed
    nd, spec = null.witness
    assert np.allclose(nd.u, [1, 1, 0, 0])
    assert spec.eigenvalues == (0.0,) and spec.multiplicities == (2,)
    assert null.worst_deviation == pytest.approx(5.0)
    json.dumps(null.as_dict())


@pytest.mark.parametrize("n,s,c", [(1, 2, 4.0), (2, 2, 1.0), (2, 3, -1.0)])
def test_verdict_is_frame_independent(n, s, c, rng):
    S, R = build_space_form_model(n, s, c)
    base = check_phi_null_osserman(R, S)
    for _ in range(3):
        E = np.eye(S.dim) + 0.3 * rng.standard_normal((S.dim, S.dim))
        S2, R2 = reframe(S, E), reframe_tensor(R, E)
        v = check_phi_null_osserman(R2, S2)
        assert v.passed == base.passed
        assert v.reference_spectrum.deviation(base.reference_spectrum) < 1e-9


def test_u2_failure_is_frame_independent(rng):
    S, R = _u2()
    E = np.eye(4) + 0.2 * rng.standard_normal((4, 4))
    S2, R2 = reframe(S, E), reframe_tensor(R, E)
    assert check_phi_null_osserman(R2, S2).passed
    assert not check_null_osserman(R2, S2).passed


@pytest.mark.parametrize("n,c", [(1, 0.0), (2, 3.0), (3, -1.0)])
def test_sasaki_space_forms_are_null_osserman(n, c):
    # with one characteristic vector xi_1-perp is Im phi, so both checks coincide
    S, R = build_space_form_model(n, 1, c)
    v = check_null_osserman(R, S)
    assert v.passed
    assert np.allclose(v.reference_spectrum.expanded(), space_form_jacobi_spectrum(n, 1, c))


def test_closed_form_spectrum_shapes():
    assert space_form_jacobi_spectrum(1, 1, 2.0).tolist() == [3.0]
    assert space_form_jacobi_spectrum(1, 2, 4.0).tolist() == [1.0, 5.0]
    assert space_form_jacobi_spectrum(2, 3, 0.0).tolist() == [0.0, 1.0, 1.75, 1.75, 2.0]


def test_recover_j_on_space_form():
    S, R = build_space_form_model(2, 2, 4.0)
    J = recover_J(R, S, 5.0)
    phi = AlmostComplexJ.from_phi(S).J
    assert min(np.abs(J.J - phi).max(), np.abs(J.J + phi).max()) < 1e-9


def test_recover_j_rejects_repeated_eigenvalue():
    S, R = build_space_form_model(2, 2, 0.0)
    with pytest.raises(EigenvalueNotSimpleError) as exc:
        recover_J(R, S, 1.0)
    assert exc.value.multiplicity == 3


def test_recover_j_needs_two_pairs():
    S, R = build_space_form_model(1, 2, 4.0)
    with pytest.raises(ScopeError):
        recover_J(R, S, 5.0)


def test_recover_j_in_a_skewed_frame(rng):
    S = canonical_structure(3, 2)
    J0 = AlmostComplexJ.random(3, rng)
    R = reconstructed_curvature(S, J0, 2.0, -1.0)
    E = np.eye(S.dim) + 0.2 * rng.standard_normal((S.dim, S.dim))
    S2, R2 = reframe(S, E), reframe_tensor(R, E)
    J = recover_J(R2, S2, 2.0)
    # compare as operators on the original frame
    back = E @ J.operator(S2) @ np.linalg.inv(E)
    want = J0.operator(S)
    assert min(np.abs(back - want).max(), np.abs(back + want).max()) < 1e-8


def test_single_eigenvalue_classification():
    S, R = build_space_form_model(3, 2, 0.0)
    rep = classify_single_eigenvalue(R, S, OssermanConfig(count=16))
    assert rep.is_single and rep.lambda_ == pytest.approx(1.0) and rep.phi_sectional_spread < 1e-9
    with pytest.raises(ScopeError):
        classify_single_eigenvalue(*reversed(build_space_form_model(2, 3, 0.0)))


def test_config_count_controls_samples():
    S, R = build_space_form_model(1, 2, 1.0)
    assert check_phi_null_osserman(R, S, OssermanConfig(count=5)).samples == 2 + 1 + 5
