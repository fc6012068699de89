import json
import math

import pytest

import ggexp


def test_basis_params_validation():
    bp = ggexp.BasisParams(1.5, 0.5)
    assert bp.lam == 1.5 and bp.mu == 0.5 and bp.sigma == 1.5
    with pytest.raises(ValueError):
        ggexp.BasisParams(-0.5, 0.0)
    with pytest.raises(ggexp.DomainError):
        ggexp.BasisParams(1.0, -0.1)


def test_degree_one_closed_form():
    bp = ggexp.BasisParams(1.0, 0.5)
    for t in (-1.0, -0.3, 0.0, 0.25, 1.0):
        assert ggexp.gen_gegenbauer_eval(bp, 1, t) == pytest.approx(1.5 / 1.0 * t, abs=1e-15)
    assert ggexp.orthonormal_gg_eval(bp, 1, 0.25) == pytest.approx(
        ggexp.orthonormal_coefficient(bp, 1) * 0.25, rel=1e-15)


def test_rule_integrates_the_weight():
    bp = ggexp.BasisParams(0.5, 0.0)
    nodes, weights, exactness = ggexp.gen_gegenbauer_rule(bp, 3)
    assert exactness == 11
    assert len(nodes) == 6
    assert sum(weights) == pytest.approx(2.0, rel=1e-14)
    # Legendre weight: integral of t^10 over [-1, 1] is 2/11.
    assert sum(w * x**10 for x, w in zip(nodes, weights)) == pytest.approx(2.0 / 11.0, rel=1e-13)
    assert ggexp.certify_rule(bp, 3) <= 1e-12


def test_transform_of_a_python_callable():
    bp = ggexp.BasisParams(0.5, 0.0)
    cv = ggexp.forward_transform(bp, lambda t: t * t, 3, degree_bound=2)
    assert cv.degree == 3
    assert cv.coeffs[0] == pytest.approx(math.sqrt(2.0) / 3.0, rel=1e-14)
    assert cv.coeffs[2] == pytest.approx(2.0 / 3.0 * math.sqrt(2.0 / 5.0), rel=1e-14)
    assert ggexp.partial_sum_eval(cv, 0.3) == pytest.approx(0.09, abs=1e-14)


def test_callable_errors_surface_as_evaluation_errors():
    bp = ggexp.BasisParams(0.5, 0.0)

    def boom(t):
        raise RuntimeError("nope")

    with pytest.raises(ggexp.EvaluationError):
        ggexp.forward_transform(bp, boom, 2, degree_bound=2)


def test_lp_norm_of_the_constant_one():
    bp = ggexp.BasisParams(1.5, 0.5)
    mass = ggexp.weight_total_mass(bp)
    # C_0 is 1 / sqrt(mass), so f = 1 has the single coefficient sqrt(mass).
    one = [math.sqrt(mass)]
    for p in (1.0, 1.5, 2.0, 3.0):
        norm = ggexp.lp_norm(bp, one, p)
        assert norm == pytest.approx(mass ** (1.0 / p), rel=1e-12)


def test_forward_scan_report_fields():
    bp = ggexp.BasisParams(1.0, 0.5)
    rep = ggexp.forward_inequality_scan("HY", bp, 2.0, trials=8, degree_cap=16, seed=3)
    assert set(rep) == {"theorem_id", "direction", "params", "exponents", "trials", "empirical_constant", "pass"}
    assert rep["pass"] is True
    assert all(abs(t["ratio"] - 1.0) < 1e-8 for t in rep["trials"])
    again = ggexp.forward_inequality_scan("HY", bp, 2.0, trials=8, degree_cap=16, seed=3)
    assert again == rep


def test_cli_in_process():
    status, out, err = ggexp.run_cli(["verify", "connection", "--lambda", "1.5", "--mu", "0"])
    assert status == 2 and "mu > 0" in err
    status, out, err = ggexp.run_cli(["verify", "parseval", "--lambda", "0.5", "--mu", "0", "--nmax", "20",
                                      "--trials", "50", "--seed", "0"])
    assert status == 0
    env = json.loads(out)
    assert env["schema"] == 1
    assert env["payload"]["report"]["pass"] is True
