"""
Fusion Core Tests
Based rings, based modules, the dual module and graded fusion data
"""

import numpy as np
import pytest

from fusion_core import (BasedModule, BasedRing, FusionDataError, GradedFusionDatum,
                         dual_module, fusion_matrix, hermitian_form, regular_module,
                         same_module, validate_based_module, validate_based_ring,
                         validate_graded_datum)

TORIC = ("1", "e", "m", "ψ")
BITS = {"1": (0, 0), "e": (1, 0), "m": (0, 1), "ψ": (1, 1)}


def _klein_constants():
    by_bits = {bits: label for label, bits in BITS.items()}
    return {(a, b): {by_bits[tuple((x + y) % 2 for x, y in zip(BITS[a], BITS[b]))]: 1}
            for a in TORIC for b in TORIC}


def _toric_ring(constants=None):
    return BasedRing(labels=TORIC, unit="1", star={c: c for c in TORIC},
                     constants=constants or _klein_constants())


def _defects(ring, action=None):
    if action is None:
        action = {}
        for c in TORIC:
            for m, flipped in (("σ+", "σ−"), ("σ−", "σ+")):
                action[(c, m)] = {flipped if c in ("e", "m") else m: 1}
    return BasedModule(ring=ring, labels=("σ+", "σ−"), star={"σ+": "σ+", "σ−": "σ−"}, action=action)


def test_fibonacci_ring_passes(fibonacci):
    result = validate_based_ring(fibonacci.ring)
    assert result.passed, result.witnesses
    assert result.details['rank'] == 2


def test_klein_group_ring_passes():
    assert validate_based_ring(_toric_ring()).passed


def test_broken_associativity_is_witnessed():
    constants = _klein_constants()
    constants[("e", "m")] = {"m": 1}
    constants[("m", "e")] = {"m": 1}
    result = validate_based_ring(_toric_ring(constants))
    assert not result.passed
    assert any(w.startswith("associativity (e,m,m,1)") for w in result.witnesses)


def test_negative_constant_is_witnessed():
    constants = _klein_constants()
    constants[("ψ", "ψ")] = {"1": 1, "e": -1}
    result = validate_based_ring(_toric_ring(constants))
    assert any(w.startswith("negativity N[ψ][ψ][e]") for w in result.witnesses)


def test_duality_needs_the_right_star():
    labels = ("0", "1", "2")
    constants = {(a, b): {str((int(a) + int(b)) % 3): 1} for a in labels for b in labels}
    wrong = BasedRing(labels=labels, unit="0", star={c: c for c in labels}, constants=constants)
    right = BasedRing(labels=labels, unit="0", star={"0": "0", "1": "2", "2": "1"}, constants=constants)
    assert any(w.startswith("duality (1,1)") for w in validate_based_ring(wrong).witnesses)
    assert validate_based_ring(right).passed


def test_witness_list_is_capped():
    constants = _klein_constants()
    constants[("e", "m")] = {"m": 1}
    constants[("m", "e")] = {"m": 1}
    result = validate_based_ring(_toric_ring(constants), max_witnesses=2)
    assert len(result.witnesses) == 2


def test_fusion_matrices():
    ring = _toric_ring()
    assert np.array_equal(fusion_matrix(ring, "1"), np.eye(4, dtype=np.int64))
    translation = fusion_matrix(ring, "e")
    assert sorted(translation.sum(axis=0)) == [1, 1, 1, 1]
    # [e]·[m] = [ψ]
    assert translation[ring.index("ψ"), ring.index("m")] == 1
    with pytest.raises(FusionDataError):
        fusion_matrix(ring, "x")


def test_toric_defect_module_passes():
    result = validate_based_module(_defects(_toric_ring()))
    assert result.passed, result.witnesses


def test_corrupted_module_action_is_witnessed():
    ring = _toric_ring()
    action = {(c, m): dict(row) for (c, m), row in _defects(ring).action.items()}
    action[("e", "σ+")] = {"σ+": 1}
    action[("e", "σ−")] = {"σ+": 1}
    result = validate_based_module(_defects(ring, action))
    assert not result.passed
    assert any(w.startswith("associativity (e,e,σ−,") for w in result.witnesses)


def test_regular_module_passes(fibonacci):
    assert validate_based_module(regular_module(fibonacci.ring)).passed


def test_dual_module_follows_the_star_rule():
    module = _defects(_toric_ring())
    dual = dual_module(module)
    assert dual.act({"e": 1}, {"σ+": 1}) == {"σ+": 0, "σ−": 1}
    assert same_module(dual, module) is None
    assert same_module(dual_module(dual), module) is None


def test_dual_of_regular_module_with_nontrivial_star(z3_modular):
    module = z3_modular.module
    dual = dual_module(module)
    assert dual.labels == ("0", "2", "1")
    # A'[1][1][2] = N[2][2][1]
    assert dual.coefficient("1", "1", "2") == module.coefficient("2", "2", "1") == 1
    assert validate_based_module(dual).passed


def test_hermitian_form():
    assert hermitian_form({"σ+": 1, "σ−": 0}, {"σ+": 1, "σ−": 0}) == 1
    assert hermitian_form({"σ+": 1, "σ−": 0}, {"σ+": 0, "σ−": 1}) == 0
    with pytest.raises(FusionDataError):
        hermitian_form({"σ+": 1}, {"σ−": 1})


def test_graded_toric_datum(toric):
    result = validate_graded_datum(toric.graded)
    assert result.passed, result.witnesses
    assert result.details['fixed'] == ["1", "ψ"]


def test_graded_datum_rejects_wrong_modulus(toric):
    datum = GradedFusionDatum(1, toric.ring, toric.module, toric.F)
    assert any("N = 1 requires F = id" in w for w in validate_graded_datum(datum).witnesses)
    datum = GradedFusionDatum(3, toric.ring, toric.module, toric.F)
    assert any(w.startswith("F^3 is not the identity") for w in validate_graded_datum(datum).witnesses)


def test_graded_datum_counts_fixed_points(toric):
    identity = {c: c for c in toric.ring.labels}
    datum = GradedFusionDatum(2, toric.ring, toric.module, identity)
    assert any("|fixed points of F| = 4" in w for w in validate_graded_datum(datum).witnesses)


def test_graded_datum_rejects_non_automorphism(ising):
    F = {"1": "1", "σ": "ψ", "ψ": "σ"}
    datum = GradedFusionDatum(2, ising.ring, regular_module(ising.ring), F)
    result = validate_graded_datum(datum)
    assert any(w.startswith("F-invariance (σ,σ,ψ)") for w in result.witnesses)
