"""
Dataset Manager Tests
Bundled datasets, schema errors with locations, and spherical consistency
"""

import copy
import json

import pytest

from cyclotomic import real_sqrt
from dataset_manager import DatasetError, DatasetManager, UnknownDatasetError, load_dataset

BUNDLED = ["fib_swap", "fibonacci", "ising_modular", "toric_em_swap", "trivial",
           "z3_inversion", "z3_modular", "z5_inversion"]


@pytest.fixture
def toric_document(manager):
    with open(manager.resolve("toric_em_swap"), 'r', encoding='utf-8') as f:
        return json.load(f)


@pytest.fixture
def fibonacci_document(manager):
    with open(manager.resolve("fibonacci"), 'r', encoding='utf-8') as f:
        return json.load(f)


def test_bundled_datasets_are_listed(manager):
    assert manager.list_bundled() == BUNDLED


@pytest.mark.parametrize("name", BUNDLED)
def test_every_bundled_dataset_loads_with_spherical_data(manager, name):
    dataset = manager.load(name)
    assert dataset.spherical is not None
    assert dataset.name == name


def test_fibonacci_loads(fibonacci):
    assert fibonacci.ring.rank == 2
    assert fibonacci.module_is_regular
    assert fibonacci.ring.coefficient("τ", "τ", "1") == 1


def test_toric_loads(toric):
    assert toric.ring.rank == 4
    assert toric.module.rank == 2
    assert toric.modulus == 2
    assert toric.fixed_labels() == ["1", "ψ"]
    assert toric.spherical.Scross.entry("ψ", "σ−") == -real_sqrt(2)


def test_load_by_path(manager):
    dataset = load_dataset(manager.resolve("trivial"))
    assert dataset.ring.labels == ("1",)


def test_unknown_dataset(manager):
    with pytest.raises(UnknownDatasetError):
        manager.load("no_such_dataset")


def test_negative_structure_constant(manager, fibonacci_document):
    fibonacci_document["ring"]["fusion"]["τ"]["τ"]["τ"] = -1
    with pytest.raises(DatasetError) as raised:
        manager.parse(fibonacci_document)
    assert "negativity" in str(raised.value)
    assert raised.value.location == "ring.fusion.τ.τ.τ"


def test_float_entry_is_rejected(manager, fibonacci_document):
    fibonacci_document["spherical"]["S"][1][1] = -1.0
    with pytest.raises(DatasetError) as raised:
        manager.parse(fibonacci_document)
    assert raised.value.location == "spherical.S[1][1]"


def test_missing_ring(manager, fibonacci_document):
    del fibonacci_document["ring"]
    with pytest.raises(DatasetError, match="missing required key"):
        manager.parse(fibonacci_document)


def test_axiom_violation_reports_its_location(manager, toric_document):
    toric_document["module"]["action"]["e"] = {"σ+": {"σ+": 1}, "σ−": {"σ+": 1}}
    with pytest.raises(DatasetError) as raised:
        manager.parse(toric_document)
    assert raised.value.location == "module"
    assert "associativity" in raised.value.witness


def test_global_dimension_must_match(manager, fibonacci_document):
    fibonacci_document["spherical"]["global_dim"] = 4
    with pytest.raises(DatasetError, match="global_dim"):
        manager.parse(fibonacci_document)


def test_unit_row_must_match_dims(manager, fibonacci_document):
    fibonacci_document["spherical"]["S"][0][1] = 1
    with pytest.raises(DatasetError, match="S row of the unit"):
        manager.parse(fibonacci_document)


def test_supplied_dual_module_is_cross_checked(manager, toric_document):
    dual = copy.deepcopy(toric_document["module"])
    toric_document["dual_module"] = dual
    assert manager.parse(toric_document).supplied_dual is not None

    dual["action"]["ψ"] = {"σ+": {"σ−": 1}, "σ−": {"σ+": 1}}
    with pytest.raises(DatasetError) as raised:
        manager.parse(toric_document)
    assert raised.value.location == "dual_module"


def test_crossed_s_rows_are_reordered(manager, toric_document):
    crossed = toric_document["spherical"]["Scross"]
    crossed["rows"] = ["ψ", "1"]
    crossed["matrix"] = [crossed["matrix"][1], crossed["matrix"][0]]
    dataset = manager.parse(toric_document)
    assert dataset.spherical.Scross.rows == ("1", "ψ")
    assert dataset.spherical.Scross.entry("ψ", "σ−") == -real_sqrt(2)


def test_crossed_s_rows_must_be_fixed_labels(manager, toric_document):
    toric_document["spherical"]["Scross"]["rows"] = ["1", "e"]
    with pytest.raises(DatasetError) as raised:
        manager.parse(toric_document)
    assert raised.value.location == "spherical.Scross.rows"


def test_parse_error_carries_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"ring": ', encoding='utf-8')
    with pytest.raises(DatasetError) as raised:
        DatasetManager(str(tmp_path)).load("broken")
    assert "parse error" in str(raised.value)


@pytest.fixture
def z3_document(manager):
    with open(manager.resolve("z3_modular"), 'r', encoding='utf-8') as f:
        document = json.load(f)
    document["components"] = {"2": {
        "labels": ["g0", "g1", "g2"],
        "action": {
            "1": {"g0": {"g1": 1}, "g1": {"g2": 1}, "g2": {"g0": 1}},
            "2": {"g0": {"g2": 1}, "g1": {"g0": 1}, "g2": {"g1": 1}},
        },
    }}
    return document


def test_graded_components_are_parsed(manager, z3_document):
    dataset = manager.parse(z3_document)
    assert sorted(dataset.components) == [2]
    assert dataset.graded.components[2].labels == ("g0", "g1", "g2")
    assert dataset.summary()['components'] == [2]


def test_broken_component_fails_the_graded_check(manager, z3_document):
    z3_document["components"]["2"]["action"]["1"]["g2"] = {"g2": 1}
    with pytest.raises(DatasetError) as raised:
        manager.parse(z3_document)
    assert raised.value.location == "graded"
    assert "associativity" in raised.value.witness


def test_component_errors_carry_their_grade(manager, z3_document):
    z3_document["components"]["2"]["action"]["1"]["g0"] = {"h": 1}
    with pytest.raises(DatasetError) as raised:
        manager.parse(z3_document)
    assert raised.value.location == "components.2.action.1.g0.h"

    z3_document["components"] = {"3": z3_document["components"]["2"]}
    z3_document["components"]["3"]["action"]["1"]["g0"] = {"g1": 1}
    with pytest.raises(DatasetError) as raised:
        manager.parse(z3_document)
    assert "grade 0" in raised.value.witness
