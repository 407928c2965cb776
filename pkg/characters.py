"""
Characters - Character Tables of Commutative Based Rings
Exact characters from S-matrices, numeric characters from fusion matrices,
alpha-elements, formal codegrees and orthogonality verification
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.optimize import linear_sum_assignment

from cyclotomic import CycNum, Positivity, integrality_and_positivity
from fusion_core import BasedRing, fusion_matrix
from reports import CheckResult

logger = logging.getLogger(__name__)


class CharacterError(Exception):
    """Character data is inconsistent with the ring"""


@dataclass(frozen=True)
class NumericSettings:
    """Parameters of the floating-point backends"""
    tolerance: float = 1e-9
    max_retries: int = 8
    seed: int = 0
    snap_tolerance: float = 1e-6


@dataclass
class Character:
    """
    A ring homomorphism rho: K -> Q^ab on basis labels

    Exact characters carry CycNum values; numeric ones carry complex values
    and synthetic labels.
    """
    label: str
    values: Dict[str, Any]
    alpha: Dict[str, Any]
    codegree: Any
    exact: bool = True

    def __call__(self, label: str):
        return self.values[label]


@dataclass
class CharacterTable:
    rows: List[Character]
    labels: List[str]
    exact: bool = True

    def __len__(self):
        return len(self.rows)

    def row(self, label: str) -> Character:
        for character in self.rows:
            if character.label == label:
                return character
        raise CharacterError(f"no character labelled {label!r}")

    def matrix(self) -> List[List[Any]]:
        """Ch with Ch[rho][C] = rho([C])"""
        return [[character.values[c] for c in self.labels] for character in self.rows]

    def codegrees(self) -> List[Any]:
        return [character.codegree for character in self.rows]

    def to_frame(self) -> pd.DataFrame:
        def show(value):
            if isinstance(value, complex):
                return f"{value.real:.9f}{value.imag:+.9f}j"
            return str(value)
        data = {c: [show(ch.values[c]) for ch in self.rows] for c in self.labels}
        data['codegree'] = [show(ch.codegree) for ch in self.rows]
        return pd.DataFrame(data, index=[ch.label for ch in self.rows])


def alpha_and_codegree(values: Dict[str, Any], star: Dict[str, str]):
    """alpha = Σ rho([C])[C*] and f = Σ rho([C]) rho([C*])"""
    alpha = {star[c]: v for c, v in values.items()}
    codegree = sum((values[c] * values[star[c]] for c in values), 0)
    if codegree == 0 or (isinstance(codegree, complex) and abs(codegree) < 1e-12):
        raise CharacterError("zero formal codegree; the character is corrupt")
    return alpha, codegree


def _multiplicativity_witness(ring: BasedRing, values: Dict[str, Any],
                              tolerance: Optional[float] = None) -> Optional[str]:
    for a in ring.labels:
        for b in ring.labels:
            lhs = values[a] * values[b]
            rhs = sum((n * values[c] for c, n in ring.product(a, b).items()), 0)
            if tolerance is None:
                if lhs != rhs:
                    return f"({a},{b}): {lhs} != {rhs}"
            elif abs(lhs - rhs) > tolerance * max(1.0, abs(lhs), abs(rhs)):
                return f"({a},{b}): |{lhs} - {rhs}| > {tolerance}"
    return None


def characters_from_S(ring: BasedRing, S: Sequence[Sequence[CycNum]],
                      dims: Dict[str, CycNum]) -> CharacterTable:
    """Row C of the table is phi_C([D]) = S[C][D] / dim C, checked exactly"""
    labels = list(ring.labels)
    r = len(labels)
    if len(S) != r or any(len(row) != r for row in S):
        raise CharacterError(f"S must be {r}x{r} over {labels}")
    unit_row = S[labels.index(ring.unit)]
    for c, value in zip(labels, unit_row):
        if value != dims[c]:
            raise CharacterError(f"S row of the unit differs from dims at {c}: {value} != {dims[c]}")

    rows = []
    for i, c in enumerate(labels):
        if dims[c] == 0:
            raise CharacterError(f"zero dimension for {c}")
        inverse = dims[c].inverse()
        values = {d: S[i][j] * inverse for j, d in enumerate(labels)}
        witness = _multiplicativity_witness(ring, values)
        if witness:
            raise CharacterError(f"row {c} is not multiplicative at {witness}")
        alpha, codegree = alpha_and_codegree(values, ring.star)
        rows.append(Character(c, values, alpha, codegree, exact=True))
    logger.debug(f"Exact character table of {ring.name}: {len(rows)} rows")
    return CharacterTable(rows, labels, exact=True)


def _numeric_matrix(ring: BasedRing, a: str) -> np.ndarray:
    matrix = fusion_matrix(ring, a)
    if ring.is_integral:
        return matrix.astype(complex)
    return np.array([[x.to_complex() if isinstance(x, CycNum) else complex(x) for x in row]
                     for row in matrix], dtype=complex)


def _row_key(values: Dict[str, complex], labels: Sequence[str]):
    return tuple((round(values[c].real, 9), round(values[c].imag, 9)) for c in labels)


def characters_numeric(ring: BasedRing, tolerance: float = 1e-9, seed: int = 0,
                       max_retries: int = 8) -> CharacterTable:
    """
    Common eigenvectors of a seeded random combination of fusion matrices

    Each eigenvector v gives rho(a) = v^H N_a v / v^H v. A near-collision of
    eigenvalues or a non-multiplicative row triggers a retry with a new
    combination; exhausting the retries raises CharacterError.
    """
    labels = list(ring.labels)
    matrices = [_numeric_matrix(ring, a) for a in labels]

    for attempt in range(max_retries):
        rng = np.random.default_rng([seed, attempt])
        weights = rng.integers(1, 1000, size=len(labels)) / rng.integers(1, 97, size=len(labels))
        combined = sum(w * m for w, m in zip(weights, matrices))
        eigenvalues, eigenvectors = np.linalg.eig(combined)
        scale = max(1.0, float(np.max(np.abs(eigenvalues))))
        gaps = [abs(eigenvalues[i] - eigenvalues[j])
                for i in range(len(eigenvalues)) for j in range(i)]
        if gaps and min(gaps) < 1e-6 * scale:
            logger.debug(f"Eigenvalue collision on attempt {attempt}, retrying")
            continue

        rows = []
        for k in range(len(labels)):
            v = eigenvectors[:, k]
            norm = np.vdot(v, v)
            values = {a: complex(np.vdot(v, m @ v) / norm) for a, m in zip(labels, matrices)}
            if _multiplicativity_witness(ring, values, tolerance) is not None:
                break
            rows.append(values)
        else:
            rows.sort(key=lambda values: _row_key(values, labels))
            table = []
            for i, values in enumerate(rows):
                alpha, codegree = alpha_and_codegree(values, ring.star)
                table.append(Character(f"ρ{i}", values, alpha, codegree, exact=False))
            logger.debug(f"Numeric character table of {ring.name} after {attempt + 1} attempt(s)")
            return CharacterTable(table, labels, exact=False)
        logger.debug(f"Non-multiplicative eigenvector on attempt {attempt}, retrying")

    raise CharacterError(f"persistent degeneracy after {max_retries} attempts on {ring.name}")


def verify_character_orthogonality(table: CharacterTable, tolerance: float = 1e-9) -> CheckResult:
    """<alpha_rho, alpha_rho'> = delta f_rho, i.e. Ch · conj(Ch)^T = Codeg"""
    result = CheckResult("character_orthogonality")
    for i, rho in enumerate(table.rows):
        for j, other in enumerate(table.rows):
            inner = sum((rho.values[c] * other.values[c].conjugate() for c in table.labels), 0)
            expected = rho.codegree if i == j else 0
            if table.exact:
                if inner != expected:
                    result.fail(f"({rho.label},{other.label}): {inner} != {expected}")
            elif abs(inner - expected) > tolerance * max(1.0, abs(expected)):
                result.fail(f"({rho.label},{other.label}): {inner:.6g} != {expected}")
    return result


def codegree_spherical_check(table: CharacterTable, dims: Dict[str, CycNum],
                             global_dim: CycNum) -> CheckResult:
    """f_phi_C = dim C / d_C^2 for every row, and dim C = Σ d_C^2"""
    result = CheckResult("codegree_spherical")
    total = sum((dims[c] * dims[c] for c in table.labels), 0)
    if total != global_dim:
        result.fail(f"global dimension {global_dim} != Σ d² = {total}")
    for character in table.rows:
        d = dims[character.label]
        expected = global_dim / (d * d)
        if character.codegree != expected:
            result.fail(f"{character.label}: codegree {character.codegree} != {expected}")
    result.details['codegrees'] = {ch.label: ch.codegree for ch in table.rows}
    return result


def verify_idempotents(ring: BasedRing, table: CharacterTable) -> CheckResult:
    """
    e_rho = alpha_rho / f_rho are orthogonal idempotents, rho'(alpha_rho) =
    delta f_rho, and every exact codegree is a totally positive integer
    """
    result = CheckResult("minimal_idempotents")
    if not table.exact:
        raise CharacterError("idempotent verification needs an exact table")
    idempotents = {}
    for rho in table.rows:
        inverse = rho.codegree.inverse()
        idempotents[rho.label] = {c: rho.alpha.get(c, 0) * inverse for c in ring.labels}
    for rho in table.rows:
        e = idempotents[rho.label]
        for other in table.rows:
            image = sum((other.values[c] * rho.alpha.get(c, 0) for c in ring.labels), 0)
            expected = rho.codegree if other.label == rho.label else 0
            if image != expected:
                result.fail(f"{other.label}(alpha_{rho.label}) = {image}, expected {expected}")
            product = ring.multiply(e, idempotents[other.label])
            target = e if other.label == rho.label else {c: 0 for c in ring.labels}
            bad = [c for c in ring.labels if product[c] != target[c]]
            if bad:
                result.fail(f"e_{rho.label}·e_{other.label} wrong at {bad[0]}")
        profile = integrality_and_positivity(rho.codegree)
        if not profile.is_algebraic_integer:
            result.fail(f"codegree of {rho.label} is not an algebraic integer: {rho.codegree}")
        if profile.is_totally_positive is Positivity.NOT_POSITIVE:
            result.fail(f"codegree of {rho.label} is not totally positive: {rho.codegree}")
        elif profile.is_totally_positive is Positivity.UNDECIDED:
            result.undecided(f"positivity of the codegree of {rho.label} undecided")
    return result


def match_tables(numeric: CharacterTable, exact: CharacterTable,
                 tolerance: float = 1e-9) -> CheckResult:
    """Optimal row matching of a numeric table onto an exact one"""
    result = CheckResult("numeric_exact_coherence")
    if len(numeric) != len(exact) or numeric.labels != exact.labels:
        result.fail(f"tables differ in shape: {len(numeric)} vs {len(exact)} rows")
        return result
    approx = np.array(numeric.matrix(), dtype=complex)
    target = np.array([[v.to_complex() for v in row] for row in exact.matrix()], dtype=complex)
    cost = np.abs(approx[:, None, :] - target[None, :, :]).max(axis=2)
    rows, cols = linear_sum_assignment(cost)
    deviation = float(cost[rows, cols].max()) if len(rows) else 0.0
    result.details['max_deviation'] = deviation
    result.details['matching'] = {numeric.rows[i].label: exact.rows[j].label for i, j in zip(rows, cols)}
    if deviation > tolerance:
        worst = int(np.argmax(cost[rows, cols]))
        result.fail(f"{numeric.rows[rows[worst]].label} ~ {exact.rows[cols[worst]].label} "
                    f"deviates by {deviation:.3g}")
    return result


if __name__ == "__main__":
    from dataset_manager import DatasetManager

    logging.basicConfig(level=logging.INFO)
    ds = DatasetManager().load("fibonacci")
    exact = characters_from_S(ds.ring, ds.spherical.S, ds.spherical.dims_C)
    print(exact.to_frame().to_string())
    print(characters_numeric(ds.ring).to_frame().to_string())
