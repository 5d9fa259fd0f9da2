import json
from pathlib import Path

import pytest

from src.errors import ScenarioError, SobEscapeError, ValidationError
from src.instruments import Instrument
from src.observables import Observable
from src.scenario import load_scenario, load_scenario_data, parse_scenario_text

IDENTITY = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
HALF = [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]


def minimal(**extra) -> dict:
    data = {
        "dimension": 2,
        "effects": {"h": HALF},
        "states": {"mixed": HALF},
        "observables": {"A": {"x0": "h", "x1": "h"}},
        "instruments": {"L": {"type": "luders", "observable": "A"}},
    }
    data.update(extra)
    return data


def write(tmp_path: Path, data) -> Path:
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(data) if not isinstance(data, str) else data, encoding="utf-8")
    return path


def test_minimal_qubit_scenario_loads(tmp_path):
    scenario = load_scenario(write(tmp_path, minimal(seed=3)))
    assert scenario.dimension == 2
    assert scenario.seed == 3
    assert scenario.trials is None
    assert isinstance(scenario.observables["A"], Observable)
    assert isinstance(scenario.instruments["L"], Instrument)
    assert scenario.instruments["L"].kind == "luders"


def test_bundled_scenarios_load(scenario_dir):
    qubit = load_scenario(scenario_dir / "qubit_luders.json")
    assert set(qubit.instruments) == {"L", "L_sharp"}
    mixed = load_scenario(scenario_dir / "mixed_qubit.json")
    kinds = {name: I.kind for name, I in mixed.instruments.items()}
    assert kinds == {"H": "holevo", "FH": "finite_holevo", "CS": "constant_state",
                     "damping": "kraus", "leaky": "kraus"}
    assert isinstance(mixed.instruments["damping"], Instrument)
    assert not isinstance(mixed.instruments["leaky"], Instrument)
    assert "thm41" in mixed.checks


def test_effect_outside_the_unit_interval_names_the_effect():
    data = minimal()
    data["effects"]["big"] = [[[1.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
    with pytest.raises(ValidationError, match="effect 'big'"):
        load_scenario_data(data)


def test_dangling_observable_reference():
    data = minimal(instruments={"L": {"type": "luders", "observable": "missing"}})
    with pytest.raises(ScenarioError, match="unknown observable 'missing'"):
        load_scenario_data(data)


def test_dangling_effect_reference():
    data = minimal(observables={"A": {"x0": "h", "x1": "nope"}})
    with pytest.raises(ScenarioError, match="unknown effect 'nope'"):
        load_scenario_data(data)


def test_parse_errors_carry_the_position():
    with pytest.raises(ScenarioError, match="line 2, column"):
        parse_scenario_text('{"dimension": 2,\n "effects": }')


def test_non_decimal_literals_are_rejected():
    with pytest.raises(ScenarioError, match="NaN"):
        parse_scenario_text('{"dimension": 2, "tol": NaN}')


def test_schema_violations_name_the_location():
    with pytest.raises(ScenarioError, match="schema violation"):
        load_scenario_data(minimal(colour="blue"))
    with pytest.raises(ScenarioError, match="instruments/L"):
        load_scenario_data(minimal(instruments={"L": {"type": "holevo", "observable": "A"}}))


def test_matrix_of_the_wrong_dimension():
    data = minimal()
    data["states"]["big"] = [[[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]] * 3
    with pytest.raises(ScenarioError, match="3x3"):
        load_scenario_data(data)


def test_luders_instrument_needs_a_full_observable():
    data = minimal(observables={"A": {"x0": "h"}})
    with pytest.raises(ScenarioError, match="does not sum to I"):
        load_scenario_data(data)


def test_observable_above_identity_is_reported():
    data = minimal(effects={"one": IDENTITY}, observables={"A": {"x0": "one", "x1": "one"}}, instruments={})
    with pytest.raises(SobEscapeError, match="observable 'A'"):
        load_scenario_data(data)


def test_constant_state_cycles_are_detected():
    data = minimal(instruments={
        "C": {"type": "constant_state", "source": "D", "state": "mixed"},
        "D": {"type": "constant_state", "source": "C", "state": "mixed"},
    })
    with pytest.raises(ScenarioError, match="cycle"):
        load_scenario_data(data)


def test_constant_state_source_must_be_an_instrument():
    leaky = {"type": "kraus", "kraus": {"k": [HALF]}}
    data = minimal(instruments={"K": leaky, "C": {"type": "constant_state", "source": "K", "state": "mixed"}})
    with pytest.raises(ScenarioError, match="not an instrument"):
        load_scenario_data(data)


def test_unknown_check_name_is_a_schema_error():
    with pytest.raises(ScenarioError):
        load_scenario_data(minimal(checks=["thm99"]))


def test_missing_file():
    with pytest.raises(ScenarioError, match="not found"):
        load_scenario(Path("does/not/exist.json"))
