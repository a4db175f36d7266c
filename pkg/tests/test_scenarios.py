import pytest

from fdtsim.graphs import decide, validate_model
from fdtsim.scenarios import SCENARIO_IDS, ScenarioError, ScenarioParams, build, build_scenario

# (scenario, theory) -> expected choice at default parameters
EXPECTED_CHOICES = {
    ("smoking-edt", "edt"): "not-smoke",
    ("smoking-edt", "cdt"): "not-smoke",
    ("smoking-cdt", "edt"): "smoke",
    ("smoking-cdt", "cdt"): "smoke",
    ("smoking-cdt", "fdt"): "smoke",
    ("newcomb", "edt"): "one-box",
    ("newcomb", "cdt"): "two-box",
    ("newcomb", "fdt"): "one-box",
    ("parfit", "edt"): "pay",
    ("parfit", "cdt"): "refuse",
    ("parfit", "fdt"): "pay",
    ("twin-pd", "edt"): "C",
    ("twin-pd", "cdt"): "D",
    ("twin-pd", "fdt"): "C",
}


@pytest.mark.parametrize("scenario,theory", sorted(EXPECTED_CHOICES))
def test_default_choices(scenario, theory):
    report = decide(build(scenario), theory)
    assert report.chosen == EXPECTED_CHOICES[(scenario, theory)]


@pytest.mark.parametrize("scenario", sorted(SCENARIO_IDS))
def test_models_validate_clean(scenario):
    assert validate_model(build(scenario).model) == []


def test_newcomb_values():
    report = decide(build("newcomb"), "fdt")
    assert report.expected_utility["one-box"] == pytest.approx(990_000.0)
    assert report.expected_utility["two-box"] == pytest.approx(11_000.0)
    # A two-boxing disposition makes the prediction causal history concrete.
    report = decide(build("newcomb", two_box_prior=1.0), "cdt")
    assert report.chosen == "two-box"
    assert report.expected_utility["two-box"] == pytest.approx(11_000.0)


def test_parfit_values():
    report = decide(build("parfit"), "fdt")
    assert report.expected_utility["pay"] == pytest.approx(-300_700.0)
    assert report.expected_utility["refuse"] == pytest.approx(-700_000.0)
    report = decide(build("parfit", refuse_prior=1.0), "cdt")
    assert report.chosen == "refuse"
    assert report.expected_utility["refuse"] == pytest.approx(-700_000.0)


def test_twin_pd_rho_sweep_matches_closed_form():
    # EU(C) = rho*CC + (1-rho)*CD; EU(D) = rho*DD + (1-rho)*DC; ties -> C.
    for i in range(0, 1001):
        rho = i / 1000.0
        eu_c = rho * 7 + (1 - rho) * 1
        eu_d = rho * 4 + (1 - rho) * 10
        expected = "C" if eu_c >= eu_d else "D"
        report = decide(build("twin-pd", rho=rho), "fdt")
        assert report.chosen == expected, rho
        assert report.expected_utility["C"] == pytest.approx(eu_c, abs=1e-9)
        assert report.expected_utility["D"] == pytest.approx(eu_d, abs=1e-9)


def test_twin_pd_correlation_threshold():
    assert decide(build("twin-pd", rho=0.8), "fdt").chosen == "C"
    assert decide(build("twin-pd", rho=0.75), "fdt").chosen == "C"  # indifferent
    assert decide(build("twin-pd", rho=0.749), "fdt").chosen == "D"


def test_cdt_defects_for_any_rho():
    for rho in (0.0, 0.5, 0.75, 1.0):
        assert decide(build("twin-pd", rho=rho), "cdt").chosen == "D"


def test_unknown_scenario_rejected():
    with pytest.raises(ScenarioError):
        build("trolley")


def test_unknown_override_rejected():
    with pytest.raises(ScenarioError):
        build("newcomb", box_count=3)


def test_probability_overrides_validated():
    with pytest.raises(ScenarioError):
        build("newcomb", accuracy=1.5)
    with pytest.raises(ScenarioError):
        build("twin-pd", rho=-0.1)


def test_twin_pd_payoff_ordering_enforced():
    with pytest.raises(ScenarioError):
        build("twin-pd", cc=1, cd=7)  # not a dilemma


def test_build_scenario_params_object():
    problem = build_scenario(ScenarioParams("twin-pd", {"rho": 0.9}))
    assert decide(problem, "fdt").chosen == "C"
