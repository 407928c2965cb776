"""
Twisted Characters - Fixed Characters, Projector Extraction & Crossed S
Extends F-fixed characters of K(C) to the grade-1 module through the
action of alpha_rho / f_rho on K(M⁻¹), and ties the result to the
crossed S-matrix
"""

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from characters import Character, CharacterTable
from cyclotomic import (CycNum, ONE, ZERO, cyclotomic_sqrt, is_algebraic_integer,
                        root_of_unity_exponent, zeta)
from exact_linalg import Matrix, as_cyc, conj_transpose, matmul, nullspace, rank
from fusion_core import BasedModule, CrossedSMatrix, hermitian_form
from reports import CheckResult

logger = logging.getLogger(__name__)


class TwistedCharacterError(Exception):
    """Projector extraction left the setting of a single twisted extension"""


class BridgeError(Exception):
    """Supplied and computed crossed S-matrices are not related by row phases"""


@dataclass
class TwistedCharacter:
    """
    t~alpha_rho in K(M⁻¹) for a fixed character rho; values[M] is the
    coefficient of [M*], the twisted character t~chi_rho([M])
    """
    base: Character
    vector: Dict[str, Any]
    values: Dict[str, Any]
    normalizer: str
    exact: bool = True


def fixed_characters(table: CharacterTable, F: Dict[str, str],
                     module_rank: Optional[int] = None,
                     tolerance: float = 1e-9) -> List[Character]:
    """Characters with rho([F(C)]) = rho([C]) for every C"""
    fixed = []
    for rho in table.rows:
        if table.exact:
            invariant = all(rho.values[F[c]] == rho.values[c] for c in table.labels)
        else:
            invariant = all(abs(rho.values[F[c]] - rho.values[c]) <= tolerance * max(1.0, abs(rho.values[c]))
                            for c in table.labels)
        if invariant:
            fixed.append(rho)
    if module_rank is not None and len(fixed) != module_rank:
        raise TwistedCharacterError(
            f"{len(fixed)} F-fixed characters but the module has rank {module_rank}")
    return fixed


def projector(character: Character, dual: BasedModule) -> Matrix:
    """Matrix of the action of alpha_rho / f_rho on K(M⁻¹), columns indexed by source labels"""
    inverse = character.codegree.inverse()
    columns = []
    for m in dual.labels:
        image = dual.act(character.alpha, {m: 1})
        columns.append([as_cyc(image[x]) * inverse for x in dual.labels])
    return [list(row) for row in zip(*columns)]


def _phase_index(value: complex, modulus: int) -> int:
    """k with arg(value) - 2 pi k / N in [0, 2 pi / N)"""
    turns = (cmath.phase(value) / (2 * math.pi)) % 1.0
    k = math.floor(turns * modulus + 1e-9)
    return k % modulus


def _image_line(P: Matrix, label: str) -> List[CycNum]:
    """Spanning vector of the projector image, the kernel of I - P"""
    n = len(P)
    complement = [[(ONE if i == j else ZERO) - P[i][j] for j in range(n)] for i in range(n)]
    image = nullspace(complement)
    if len(image) != 1:
        raise TwistedCharacterError(
            f"projector image for {label} has dimension {len(image)}, expected 1")
    return image[0]


def extract_twisted_characters(fixed: Sequence[Character], dual: BasedModule,
                               modulus: int, module: Optional[BasedModule] = None) -> List[TwistedCharacter]:
    """
    For each fixed rho: image of the projector must be a line; the spanning
    vector v is normalized to <v, v> = f_rho and rephased by an N-th root of
    unity so its first nonzero coordinate has argument in [0, 2 pi / N).

    Normalization picks a coordinate j whose weight |v_j|^2 = f_rho·P_jj has
    a square root in some cyclotomic field; rational weights take the fast path.
    """
    labels = list(dual.labels)
    module_labels = list(module.labels) if module else [dual.star[x] for x in labels]
    star = module.star if module else {m: x for x, m in dual.star.items()}
    twisted = []
    for rho in fixed:
        P = projector(rho, dual)
        line = _image_line(P, rho.label)
        f = rho.codegree
        vector = None
        weights = [(j, f * P[j][j]) for j in range(len(labels)) if not line[j].is_zero()]
        # rational weights first
        weights.sort(key=lambda item: item[1].rational_value() is None)
        for j, weight in weights:
            s = cyclotomic_sqrt(weight)
            if s is None:
                continue
            vector = [s * x / line[j] for x in line]
            normalizer = labels[j]
            break
        if vector is None:
            raise TwistedCharacterError(
                f"no coordinate of the {rho.label} projector has a cyclotomic norm")

        first = next(x for x in vector if not x.is_zero())
        k = _phase_index(first.to_complex(), modulus)
        if k:
            vector = [zeta(modulus, -k) * x for x in vector]
        coords = dict(zip(labels, vector))
        values = {m: coords[star[m]] for m in module_labels}
        twisted.append(TwistedCharacter(rho, coords, values, normalizer, exact=True))

    _check_completeness(twisted, labels)
    return twisted


def _check_completeness(twisted: List[TwistedCharacter], labels: Sequence[str]):
    vectors = [[as_cyc(t.vector[x]) for x in labels] for t in twisted]
    if vectors and rank(vectors) != len(labels):
        raise TwistedCharacterError(
            f"twisted alpha-elements span {rank(vectors)} dimensions, expected {len(labels)}")


def extract_twisted_characters_numeric(fixed: Sequence[Character], dual: BasedModule,
                                       modulus: int, module: Optional[BasedModule] = None,
                                       tolerance: float = 1e-6) -> List[TwistedCharacter]:
    """Floating-point projector extraction with the same normalization and phase rule"""
    labels = list(dual.labels)
    module_labels = list(module.labels) if module else [dual.star[x] for x in labels]
    star = module.star if module else {m: x for x, m in dual.star.items()}
    n = len(labels)
    twisted = []
    for rho in fixed:
        f = complex(rho.codegree)
        P = np.zeros((n, n), dtype=complex)
        for j, m in enumerate(labels):
            image = dual.act(rho.alpha, {m: 1})
            for i, x in enumerate(labels):
                P[i, j] = complex(image[x]) / f
        dimension = int(np.linalg.matrix_rank(P, tol=tolerance))
        if dimension != 1:
            raise TwistedCharacterError(
                f"numeric projector image for {rho.label} has dimension {dimension}, expected 1")
        j = next(i for i in range(n) if P[i, i].real > tolerance)
        v = f * P[:, j] / np.sqrt(f.real * P[j, j].real)
        first = next(x for x in v if abs(x) > tolerance)
        k = _phase_index(first, modulus)
        v = v * cmath.exp(-2j * math.pi * k / modulus)
        coords = {x: complex(v[i]) for i, x in enumerate(labels)}
        values = {m: coords[star[m]] for m in module_labels}
        twisted.append(TwistedCharacter(rho, coords, values, labels[j], exact=False))
    if twisted:
        stacked = np.array([[t.vector[x] for x in labels] for t in twisted])
        if np.linalg.matrix_rank(stacked, tol=tolerance) != n:
            raise TwistedCharacterError("numeric twisted alpha-elements do not span K(M⁻¹)")
    return twisted


def verify_twisted_characters(table: CharacterTable, twisted: Sequence[TwistedCharacter],
                              dual: BasedModule) -> CheckResult:
    """
    alpha_rho'·t~alpha_rho = delta f_rho t~alpha_rho for every character rho',
    <t~alpha_rho, t~alpha_rho'> = delta f_rho, and completeness
    """
    result = CheckResult("twisted_characters")
    labels = list(dual.labels)
    for t in twisted:
        for other in table.rows:
            image = dual.act(other.alpha, t.vector)
            scale = t.base.codegree if other.label == t.base.label else 0
            bad = [x for x in labels if image[x] != scale * t.vector[x]]
            if bad:
                result.fail(f"alpha_{other.label}·t~alpha_{t.base.label} wrong at {bad[0]}")
        for u in twisted:
            inner = hermitian_form(t.vector, u.vector)
            expected = t.base.codegree if u is t else 0
            if inner != expected:
                result.fail(f"<t~alpha_{t.base.label}, t~alpha_{u.base.label}> = {inner}, expected {expected}")
    vectors = [[as_cyc(t.vector[x]) for x in labels] for t in twisted]
    dimension = rank(vectors) if vectors else 0
    if dimension != len(labels):
        result.fail(f"twisted alpha-elements span {dimension} of {len(labels)} dimensions")
    result.details['normalizers'] = {t.base.label: t.normalizer for t in twisted}
    return result


@dataclass
class BridgeResult:
    computed: CrossedSMatrix
    phases: Dict[str, Fraction]


def crossed_S_bridge(fixed: Sequence[Character], twisted: Sequence[TwistedCharacter],
                     dims: Dict[str, CycNum], module_labels: Sequence[str],
                     supplied: Optional[CrossedSMatrix] = None) -> BridgeResult:
    """
    S(C,M) = dim C · t~chi_C([M]); against a supplied matrix each row may
    differ by one root of unity, reported as a phase in turns
    """
    by_label = {t.base.label: t for t in twisted}
    rows = tuple(rho.label for rho in fixed)
    entries = tuple(tuple(dims[c] * by_label[c].values[m] for m in module_labels) for c in rows)
    computed = CrossedSMatrix(rows, tuple(module_labels), entries)
    phases: Dict[str, Fraction] = {}
    if supplied is None:
        return BridgeResult(computed, phases)

    if set(supplied.rows) != set(rows) or list(supplied.columns) != list(module_labels):
        raise BridgeError(f"supplied crossed S is indexed by {list(supplied.rows)} x "
                          f"{list(supplied.columns)}, computed by {list(rows)} x {list(module_labels)}")
    for c in rows:
        ours = computed.row(c)
        theirs = supplied.row(c)
        pivot = next((i for i, x in enumerate(ours) if not x.is_zero()), None)
        if pivot is None:
            raise BridgeError(f"computed row {c} vanishes")
        ratio = theirs[pivot] / ours[pivot]
        turns = root_of_unity_exponent(ratio)
        if turns is None:
            raise BridgeError(f"row {c}: ratio {ratio} is not a root of unity")
        for m, x, y in zip(module_labels, ours, theirs):
            if y != ratio * x:
                raise BridgeError(f"row {c}, column {m}: supplied {y} != {ratio} · {x}")
        phases[c] = turns
    logger.debug(f"Bridge phases: {phases}")
    return BridgeResult(computed, phases)


def verify_crossed_unitarity(Scross: CrossedSMatrix, global_dim: CycNum) -> CheckResult:
    """X·conj(X)^T = dim C · I and conj(X)^T·X = dim C · I, exactly"""
    result = CheckResult("crossed_unitarity")
    if len(Scross.rows) != len(Scross.columns):
        result.fail(f"crossed S is {len(Scross.rows)}x{len(Scross.columns)}, not square")
        return result
    X = Scross.as_matrix()
    for name, product, labels in (("rows", matmul(X, conj_transpose(X)), Scross.rows),
                                  ("columns", matmul(conj_transpose(X), X), Scross.columns)):
        for i, a in enumerate(labels):
            for j, b in enumerate(labels):
                expected = global_dim if i == j else ZERO
                if product[i][j] != expected:
                    result.fail(f"{name} ({a},{b}): {product[i][j]} != {expected}")
    return result


def verify_integrality_ratios(Scross: CrossedSMatrix, dims_C: Dict[str, CycNum],
                              dims_M: Dict[str, CycNum],
                              global_dim: Optional[CycNum] = None) -> CheckResult:
    """S(C,M)/dim C and S(C,M)/dim M are algebraic integers; dim C = Σ dim_M²"""
    result = CheckResult("integrality_ratios")
    for c in Scross.rows:
        for m in Scross.columns:
            x = Scross.entry(c, m)
            for divisor_name, divisor in ((c, dims_C[c]), (m, dims_M[m])):
                ratio = x / divisor
                if not is_algebraic_integer(ratio):
                    result.fail(f"S({c},{m}) / dim {divisor_name} = {ratio} is not an algebraic integer")
    if global_dim is not None:
        total = sum((dims_M[m] * dims_M[m] for m in Scross.columns), ZERO)
        if total != global_dim:
            result.fail(f"Σ dim_M² = {total} != {global_dim}")
    return result
