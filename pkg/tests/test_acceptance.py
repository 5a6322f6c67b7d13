"""Acceptance criteria, one test per criterion, each at its stated tolerance.

Every test prints a single ``acceptance criterion N: PASS|FAIL`` line; the
lines are collected again in the terminal summary.
"""

import contextlib
import io
import json
import time
from pathlib import Path

import numpy as np

from conftest import criterion, two_eigenvalue_trials
from nullosserman import cli
from nullosserman.catalog import (
    R4_DESCRIPTOR,
    U2_DESCRIPTOR,
    build_r4_model,
    build_space_form_model,
    build_u2_model,
    load_model,
    serialize_model,
)
from nullosserman.curvature import (
    AlmostComplexJ,
    check_identities_2,
    coordinate_curvature,
    degenerate_plane_tensors,
    lie_group_curvature,
    reconstructed_curvature,
    space_form_curvature,
    two_eigenvalue_formula_violations,
    xi_derivative_violation,
)
from nullosserman.gff import validate_structure
from nullosserman.osserman import (
    NullDirection,
    OssermanConfig,
    check_null_osserman,
    check_phi_null_osserman,
    classify_single_eigenvalue,
    jacobi_operator,
    recover_J,
    remark58_residual,
    space_form_jacobi_spectrum,
)
from nullosserman.reproduce import THM44_GRID
from nullosserman.tensor_core import (
    PseudoMetric,
    constant_k_form,
    lemma21_check,
    minkowski,
    validate_curvature_like,
)

MODELS = Path(__file__).resolve().parents[1] / "models"
LAST_IDENTITY = "R(X,Y,phiZ,W)+R(X,Y,Z,phiW)=eps P"


def test_criterion_1_u2_counterexample():
    with criterion(1, "U(2): spectra {5,1},{5,1},0; null fails at xi1+xi2; phi-null passes {1,5}"):
        start = time.perf_counter()
        M = build_u2_model()
        S, R = M.base, lie_group_curvature(M)
        xi1, xi2, X, Y = np.eye(4)
        config = OssermanConfig(tol=1e-7)
        for x in (X, Y):
            spec = jacobi_operator(R, S, NullDirection.from_unit(S, x)).spectrum(1e-7)
            assert np.allclose(spec.expanded(), [1.0, 5.0], atol=1e-7, rtol=0)
        op3 = jacobi_operator(R, S, NullDirection.from_unit(S, xi2))
        assert np.max(np.abs(op3.matrix)) < 1e-9

        null = check_null_osserman(R, S, config)
        assert not null.passed
        assert np.allclose(null.witness[0].u, xi1 + xi2, atol=1e-9)
        phi_null = check_phi_null_osserman(R, S, config)
        assert phi_null.passed
        assert np.allclose(phi_null.reference_spectrum.expanded(), [1.0, 5.0], atol=1e-7, rtol=0)
        assert phi_null.reference_spectrum.multiplicities == (1, 1)
        assert time.perf_counter() - start < 1.0


def _eigenline_residual(op, S, v, lam):
    a = op.coordinates(S, v)
    a = a / np.linalg.norm(a)
    return float(np.max(np.abs(op.matrix @ a - lam * a)))


def test_criterion_2_space_form_spectra_grid():
    with criterion(2, "space-form phi-null spectra over {1,2,3}x{1,2,3}x{-1,0,1,4}"):
        start = time.perf_counter()
        config = OssermanConfig()
        for n, s, c in THM44_GRID:
            S, R = build_space_form_model(n, s, c)
            verdict = check_phi_null_osserman(R, S, config)
            assert verdict.passed, (n, s, c)
            expected = space_form_jacobi_spectrum(n, s, c)
            assert np.max(np.abs(verdict.reference_spectrum.expanded() - expected)) < 1e-9, (n, s, c)

            # eigenvectors of s-1 and 0 in the quotient: sum of xi_beta (beta >= 2) and xi_2 - xi_alpha
            op = jacobi_operator(R, S, NullDirection.from_unit(S, S.im_phi_basis[:, 0]))
            if s >= 2:
                assert _eigenline_residual(op, S, S.xi[1:].sum(axis=0), s - 1.0) < 1e-7
                w, V = np.linalg.eigh(op.matrix)
                if np.sum(np.abs(w - (s - 1.0)) < 1e-9) == 1:
                    a = op.coordinates(S, S.xi[1:].sum(axis=0))
                    v = V[:, np.argmin(np.abs(w - (s - 1.0)))]
                    assert abs(abs(v @ a) / np.linalg.norm(a) - 1.0) < 1e-7
            for alpha in range(2, s):
                assert _eigenline_residual(op, S, S.xi[1] - S.xi[alpha], 0.0) < 1e-7
        assert time.perf_counter() - start < 5.0


def test_criterion_3_cross_engine_oracles():
    with criterion(3, "Koszul(U(2)) = closed form c=4; chart(R^4) = closed form c=0; nabla xi"):
        M = build_u2_model()
        assert lie_group_curvature(M).max_difference(space_form_curvature(M.base, 4.0)) < 1e-9
        assert xi_derivative_violation(M) == 0.0
        for y in (0.0, 0.7, -1.3):
            chart = build_r4_model((0.0, y, 0.0, 0.0))
            S = chart.structure_point
            assert coordinate_curvature(chart).max_difference(space_form_curvature(S, 0.0)) < 1e-6


def test_criterion_4_two_eigenvalue_round_trip():
    with criterion(4, "reconstruction round trip over 20 seeded (J0, c1, c2)"):
        config = OssermanConfig()
        for S, J0, c1, c2 in two_eigenvalue_trials(20):
            R = reconstructed_curvature(S, J0, c1, c2)
            assert validate_curvature_like(R, 1e-9).passed
            spec = check_phi_null_osserman(R, S, config)
            assert spec.passed
            expected = np.sort([c1, c2, c2, 1.0])
            assert np.max(np.abs(spec.reference_spectrum.expanded() - expected)) < 1e-8

            J = recover_J(R, S, c1)
            assert min(np.max(np.abs(J.J - J0.J)), np.max(np.abs(J.J + J0.J))) < 1e-8

            viol = two_eigenvalue_formula_violations(R, S, J0, c1, c2)
            assert viol["c1"] < 1e-9 and viol["c2"] < 1e-9


def test_criterion_5_phi_compatibility_residual():
    with criterion(5, "J = phi: last curvature identity iff c1 - 4 c2 + 3 = 0"):
        for n in (1, 2):
            S, _ = build_space_form_model(n, 2, 0.0)
            Jphi = AlmostComplexJ.from_phi(S)
            for c in (-1.0, 0.0, 1.0, 2.5, 4.0):
                c1, c2 = c + 1.0, (c + 4.0) / 4.0
                assert remark58_residual(c1, c2) == 0.0
                R = reconstructed_curvature(S, Jphi, c1, c2)
                assert check_identities_2(R, S).violations[LAST_IDENTITY] < 1e-9
        # the contrapositive needs n > 1: on a 2-dimensional Im phi only c1 survives
        S, _ = build_space_form_model(2, 2, 0.0)
        R = reconstructed_curvature(S, AlmostComplexJ.from_phi(S), 5.0, 1.0)
        assert remark58_residual(5.0, 1.0) == 4.0
        assert check_identities_2(R, S).violations[LAST_IDENTITY] > 1e-3


def test_criterion_6_single_eigenvalue():
    with criterion(6, "single eigenvalue: c=0 gives lambda=1 and H=0; c=4 is not single"):
        S, R = build_space_form_model(2, 2, 0.0)
        rep = classify_single_eigenvalue(R, S)
        assert rep.is_single
        assert abs(rep.lambda_ - 1.0) < 1e-9
        assert abs(rep.phi_sectional_c) < 1e-9
        S, R = build_space_form_model(2, 2, 4.0)
        assert not classify_single_eigenvalue(R, S).is_single


def test_criterion_7_constant_k_and_degenerate_planes():
    with criterion(7, "constant k recovered; H vanishes on degenerate planes with k = 0"):
        for g in (minkowski(4), minkowski(6), PseudoMetric(np.diag([1.0, 1.0, -1.0, 1.0, 1.0]))):
            for k in (-2.0, 0.0, 1.0, 7.0):
                res = lemma21_check(constant_k_form(k, g), g)
                assert res.vanishes_on_degenerate
                assert abs(res.constant_k - k) < 1e-9
        for S, J0, c1, c2 in two_eigenvalue_trials(20):
            R = reconstructed_curvature(S, J0, c1, c2)
            _, H = degenerate_plane_tensors(R, S, J0, c1, c2)
            res = lemma21_check(H, S.g)
            assert res.vanishes_on_degenerate and res.max_degenerate_value < 1e-9
            assert abs(res.constant_k) < 1e-9


def _run_cli(argv):
    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        code = cli.main(argv)
    report = json.loads(out.getvalue())
    report.pop("wall_time_ms")
    return code, json.dumps(report, sort_keys=True)


def test_criterion_8_validation_and_determinism():
    with criterion(8, "catalog models validate below 1e-10; CLI reports are byte-identical"):
        structures = [build_u2_model().base]
        for y in (0.0, 0.7, -1.3):
            chart = build_r4_model((0.0, y, 0.0, 0.0))
            structures += [chart.coordinate_point, chart.structure_point]
        structures += [build_space_form_model(n, s, c)[0] for n, s, c in THM44_GRID]
        for S in structures:
            rep = validate_structure(S)
            assert rep.passed and rep.max_violation < 1e-10
        assert max(build_u2_model().violations().values()) < 1e-10

        for path in sorted(MODELS.glob("*.json")):
            _, model = load_model(path.read_text())
        # shipped files are exactly what the builders serialize to
        assert (MODELS / "u2.json").read_text() == serialize_model(U2_DESCRIPTOR, build_u2_model())
        assert (MODELS / "r4.json").read_text() == serialize_model(R4_DESCRIPTOR, build_r4_model((0.0, 0.7, 0.0, 0.0)))

        runs = [
            ["check", str(MODELS / "u2.json"), "--engine", "koszul", "--mode", "null", "--seed", "7"],
            ["check", str(MODELS / "r4.json"), "--engine", "chart", "--mode", "phi-null", "--seed", "3"],
            ["reproduce", "--table", "remark58", "--seed", "11"],
            ["validate", str(MODELS / "u2.json")],
        ]
        for argv in runs:
            first, second = _run_cli(argv), _run_cli(argv)
            assert first == second
