import numpy as np
import pytest

from cstarframes import suite as su
from cstarframes.scenario import emit

N_CASES = 24  # enough to hit every structure/measure/controller combination


def test_derivation_run_is_clean():
    report = su.run_property_suite(seed=3, cases=N_CASES)
    assert not report.failed, report.failures
    for name, (passed, failed) in report.properties.items():
        assert failed == 0, name
        assert passed == N_CASES, name


def test_quoted_run_flags_only_the_conversion():
    report = su.run_property_suite(seed=3, cases=N_CASES, conversion_exponent="quoted")
    assert report.failed
    assert len(report.counterexamples) >= 1
    for name, (_, failed) in report.properties.items():
        if name != "scalar_conversion":
            assert failed == 0, name
    for ce in report.counterexamples:
        assert ce.controller_inv_sqrt_norm > 1.0
        assert ce.claimed_lower > ce.true_lower
        assert ce.violation > 0


def test_case_generation_ignores_the_exponent():
    # same seed and index produce bitwise identical instances
    for i in (0, 3, 7, 10):
        a = su._draw_case(3, i, 4, 3, 64)
        b = su._draw_case(3, i, 4, 3, 64)
        assert np.array_equal(a.s_plain.flat, b.s_plain.flat)
        assert np.array_equal(a.controller.operator.flat, b.controller.operator.flat)
        assert a.spec == b.spec


def test_counterexample_cases_match_derivation_instances():
    quoted = su.run_property_suite(seed=5, cases=16, conversion_exponent="quoted")
    assert quoted.counterexamples
    for ce in quoted.counterexamples:
        replay = su._draw_case(5, ce.case, 4, 3, 64)
        assert replay.spec.label() == ce.label


def test_caps_are_respected():
    report = su.run_property_suite(seed=1, cases=12, max_dim=2, max_rank=2, max_nodes=6)
    assert not report.failed, report.failures
    for i in range(12):
        case = su._draw_case(1, i, 2, 2, 6)
        assert case.spec.dim <= 2 and case.spec.rank <= 2 and case.spec.size <= 6


def test_bad_arguments_rejected():
    with pytest.raises(ValueError):
        su.run_property_suite(cases=0)
    with pytest.raises(ValueError):
        su.run_property_suite(conversion_exponent="statement")
    with pytest.raises(ValueError):
        su.run_property_suite(max_nodes=1)


def test_report_data_and_emission():
    report = su.run_property_suite(seed=2, cases=4)
    data = report.data()
    assert data["all_pass"] is True
    assert data["cases"] == 4
    assert set(data["properties"]) == set(report.properties)
    wrapped = report.to_report()
    assert wrapped.failed is False
    csv_text = emit(wrapped, "csv")
    assert "properties.reconstruction.pass,4" in csv_text
    json_text = emit(wrapped, "json")
    assert '"conversion_exponent": "derivation"' in json_text


def test_scalar_controller_cadence():
    # every fourth case gets the scalar controller below the identity
    for i in range(8):
        case = su._draw_case(9, i, 4, 3, 64)
        if i % 4 == 3:
            assert case.spec.scalar_controller is not None
            assert 0.3 <= case.spec.scalar_controller <= 0.8
        else:
            assert case.spec.scalar_controller is None
