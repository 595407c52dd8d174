import math

import numpy as np
import pytest

from cliffvcs.errors import QuadratureError
from cliffvcs.rho_moments import QuadratureSpec, canonical_density, canonical_rho, gaussian_density
from cliffvcs.vcs_states import RepFamily
from cliffvcs.verify import (
    all_passed,
    check_expform,
    check_matrix_moment,
    check_moments,
    check_normalization,
    check_uncertainty,
    identity_operator,
    representation_audit,
    resolve_identity_series,
    spectral_estimate,
    unit_relations,
)

QUAD = QuadratureSpec(radial_points=64)


def by_name(reports):
    return {r.check_name: r for r in reports}


def test_report_passed_is_residual_le_tol():
    r = check_normalization(RepFamily.QUATERNION, [0.5, 0.5, 0.5, 0.5])[0]
    assert r.passed == (r.residual <= r.tolerance)
    d = r.as_dict()
    assert d["name"] == "normalization_sum" and d["passed"] is r.passed


def test_normalization_prefactor_fault_detected():
    good = check_normalization(RepFamily.QUATERNION, [1, 0, 0, 0])
    bad = check_normalization(RepFamily.QUATERNION, [1, 0, 0, 0], fault="prefactor")
    assert all_passed(good)
    assert not all_passed(bad)
    assert bad[0].residual == pytest.approx(1 - math.exp(-1), rel=1e-10)


def test_identity_small_scalar():
    r = resolve_identity_series(RepFamily.SCALAR, canonical_rho(6), canonical_density(), QUAD, 6)
    assert r.residual <= 1e-12


def test_identity_quaternion_small_M():
    r = resolve_identity_series(RepFamily.QUATERNION, canonical_rho(5), canonical_density(), QUAD, 5)
    assert r.passed and r.residual <= 1e-12
    assert r.quadrature["angular_points"] == 12


def test_identity_with_gaussian_density_is_half():
    b = identity_operator(RepFamily.QUATERNION, canonical_rho(4), gaussian_density(), QUAD, 4)
    assert np.allclose(b, 0.5 * np.eye(20), atol=1e-12)


def test_angular_refusal():
    with pytest.raises(QuadratureError):
        resolve_identity_series(RepFamily.QUATERNION, canonical_rho(5), canonical_density(), QUAD, 5,
                                theta_grid_size=11)


def test_spectral_estimate():
    assert spectral_estimate(np.diag([1.0, -3.0, 2.0]).astype(complex)) == pytest.approx(3.0, rel=1e-8)
    assert spectral_estimate(np.zeros((3, 3))) == 0.0


def test_uncertainty_kinds():
    eig = check_uncertainty(RepFamily.QUATERNION, [0.5, 0.5, 0.5, 0.5])
    assert len(eig) == 2 and all_passed(eig)
    vac = check_uncertainty(RepFamily.OCTONION_LEFT, [0.5] * 8, state="vacuum", tol=1e-13)
    assert all_passed(vac)
    series = check_uncertainty(RepFamily.QUATERNION, [1, 1, 1, 1], state="series")
    assert all(r.params["product"] > 0.5 + 1e-6 for r in series)
    with pytest.raises(ValueError):
        check_uncertainty(RepFamily.QUATERNION, [1, 1, 1, 1], state="bogus")


def test_expform_report():
    r = check_expform(RepFamily.OCTONION_RIGHT, [0.2] * 8, 0.3)
    assert r.passed and r.truncation["M"] == 50


def test_matrix_moment_small():
    reports = by_name(check_matrix_moment(RepFamily.QUATERNION, [0.5, 0.1, 0.2, 0.3], M=6))
    assert all_passed(reports.values())
    assert set(reports) == {"matrix_moment_normalization", "matrix_moment_R_condition",
                            "matrix_moment_identity", "matrix_moment_x_independence"}


def test_moments_reports():
    reports = check_moments(canonical_density(), canonical_rho(10), 10)
    assert len(reports) == 11 and all_passed(reports)
    bad = check_moments(gaussian_density(), canonical_rho(3), 3)
    assert all(r.residual == pytest.approx(0.5) for r in bad)


def test_audit_conjugation_link_passes_and_is_deterministic():
    a = representation_audit(samples=50, seed=7)
    b = representation_audit(samples=50, seed=7)
    assert all_passed(a)
    assert [r.as_dict() for r in a] == [r.as_dict() for r in b]


def test_audit_k8_link_fails_only_on_link():
    reports = by_name(representation_audit(samples=50, seed=7, link="minkowski"))
    assert not reports["octonion_link_nu_omega"].passed
    assert all(r.passed for name, r in reports.items() if name != "octonion_link_nu_omega")


def test_audit_fault_injection():
    reports = by_name(representation_audit(samples=20, fault="omega-sign"))
    assert not reports["octonion_left_action"].passed
    assert not reports["octonion_unit_pair_actions"].passed


def test_unit_relations_witness():
    reports = by_name(unit_relations())
    w = reports["octonion_nonassociativity_witness"]
    assert w.passed and w.params["triple"] is not None
    assert w.params["associator_norm"] == pytest.approx(2.0)


def test_audit_validates_arguments():
    with pytest.raises(ValueError):
        representation_audit(samples=0)
    with pytest.raises(ValueError):
        representation_audit(link="other")
