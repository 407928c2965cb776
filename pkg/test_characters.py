"""
Character Table Tests
Exact tables from S-matrices, the numeric backend and orthogonality
"""

import pytest

from characters import (CharacterError, CharacterTable, alpha_and_codegree, characters_from_S,
                        characters_numeric, codegree_spherical_check, match_tables,
                        verify_character_orthogonality, verify_idempotents)
from cyclotomic import CycNum, real_sqrt, zeta
from test_dataset_manager import BUNDLED


def _exact(dataset):
    return characters_from_S(dataset.ring, dataset.spherical.S, dataset.spherical.dims_C)


def test_toric_characters_are_rows_of_s(toric):
    table = _exact(toric)
    assert [ch.label for ch in table.rows] == ["1", "e", "m", "ψ"]
    for character, row in zip(table.rows, toric.spherical.S):
        assert [character(c) for c in table.labels] == list(row)
    assert all(f == 4 for f in table.codegrees())


def test_unit_row_is_the_dimension_character(ising):
    table = _exact(ising)
    assert table.row("1").values["σ"] == real_sqrt(2)
    assert table.row("σ").values == {"1": 1, "σ": 0, "ψ": -1}


def test_fibonacci_codegrees(fibonacci):
    table = _exact(fibonacci)
    root5 = real_sqrt(5)
    assert table.row("1").codegree == (5 + root5) / 2
    assert table.row("τ").codegree == (5 - root5) / 2


def test_ising_codegrees(ising):
    assert _exact(ising).codegrees() == [4, 2, 4]


def test_z3_characters_take_cube_root_values(z3_inversion):
    table = _exact(z3_inversion)
    assert table.row("1").values == {"0": 1, "1": zeta(3), "2": zeta(3, 2)}
    # alpha is indexed by starred labels
    assert table.row("1").alpha == {"0": 1, "2": zeta(3), "1": zeta(3, 2)}
    assert all(f == 3 for f in table.codegrees())


def test_corrupted_s_matrix_is_rejected(fibonacci):
    S = [list(row) for row in fibonacci.spherical.S]
    S[1][1] = CycNum.from_rational(1)
    with pytest.raises(CharacterError, match="not multiplicative"):
        characters_from_S(fibonacci.ring, S, fibonacci.spherical.dims_C)


def test_s_matrix_shape_is_checked(fibonacci):
    with pytest.raises(CharacterError):
        characters_from_S(fibonacci.ring, [fibonacci.spherical.S[0]], fibonacci.spherical.dims_C)


def test_zero_codegree_is_rejected():
    with pytest.raises(CharacterError):
        alpha_and_codegree({"a": 0}, {"a": "a"})


@pytest.mark.parametrize("name", BUNDLED)
def test_exact_tables_pass_every_check(manager, name):
    dataset = manager.load(name)
    table = _exact(dataset)
    assert verify_character_orthogonality(table).passed
    assert verify_idempotents(dataset.ring, table).passed
    check = codegree_spherical_check(table, dataset.spherical.dims_C, dataset.spherical.global_dim)
    assert check.passed, check.witnesses


def test_duplicated_row_fails_orthogonality(toric):
    table = _exact(toric)
    duplicated = CharacterTable([table.rows[0], table.rows[0]] + table.rows[2:], table.labels)
    result = verify_character_orthogonality(duplicated)
    assert not result.passed
    assert any(w.startswith("(1,1)") for w in result.witnesses)


def test_numeric_toric_values_are_signs(toric):
    table = characters_numeric(toric.ring)
    assert not table.exact
    for character in table.rows:
        for value in character.values.values():
            assert min(abs(value - 1), abs(value + 1)) < 1e-9
    assert verify_character_orthogonality(table).passed


@pytest.mark.parametrize("name", BUNDLED)
def test_numeric_and_exact_tables_agree(manager, name):
    dataset = manager.load(name)
    result = match_tables(characters_numeric(dataset.ring, seed=3), _exact(dataset))
    assert result.passed, result.witnesses
    assert result.details['max_deviation'] < 1e-9


def test_numeric_rows_are_sorted_and_labelled(fibonacci):
    table = characters_numeric(fibonacci.ring)
    assert [ch.label for ch in table.rows] == ["ρ0", "ρ1"]
    assert table.rows[0].values["τ"].real < 0 < table.rows[1].values["τ"].real


def test_numeric_backend_gives_up_after_retries(toric):
    with pytest.raises(CharacterError, match="persistent degeneracy"):
        characters_numeric(toric.ring, max_retries=0)


def test_idempotents_need_an_exact_table(toric):
    with pytest.raises(CharacterError):
        verify_idempotents(toric.ring, characters_numeric(toric.ring))


def test_table_frame(fibonacci):
    frame = _exact(fibonacci).to_frame()
    assert list(frame.columns) == ["1", "τ", "codegree"]
    assert list(frame.index) == ["1", "τ"]
