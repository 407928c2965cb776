"""
Fusion Core - Based Rings, Based Modules & Graded Fusion Data
Grothendieck-level structure constants with exhaustive axiom validation
"""

import logging
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from cyclotomic import CycNum
from reports import CheckResult

logger = logging.getLogger(__name__)

Scalar = Union[int, CycNum]
Vector = Dict[str, Scalar]
Constants = Dict[Tuple[str, str], Dict[str, Scalar]]


class FusionDataError(Exception):
    """Structurally unusable fusion data (unknown labels, shape mismatch)"""


def _is_zero(value) -> bool:
    return value == 0


def _fmt(value) -> str:
    return str(value)


@dataclass(frozen=True)
class BasedRing:
    """
    Commutative ring with a distinguished basis O, unit and duality involution

    constants[(a, b)][c] is the coefficient of [c] in [a]·[b]; absent entries
    are zero. Integer constants describe K(C); CycNum constants describe the
    twisted fusion algebra.
    """
    labels: Tuple[str, ...]
    unit: str
    star: Dict[str, str]
    constants: Constants
    name: str = "K(C)"

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise FusionDataError(f"unknown label {label!r} in {self.name}")

    def coefficient(self, a: str, b: str, c: str) -> Scalar:
        return self.constants.get((a, b), {}).get(c, 0)

    def product(self, a: str, b: str) -> Dict[str, Scalar]:
        return dict(self.constants.get((a, b), {}))

    @property
    def is_integral(self) -> bool:
        return all(isinstance(v, int) for row in self.constants.values() for v in row.values())

    def multiply(self, x: Vector, y: Vector) -> Vector:
        result: Vector = {c: 0 for c in self.labels}
        for a, xa in x.items():
            if _is_zero(xa):
                continue
            for b, yb in y.items():
                if _is_zero(yb):
                    continue
                for c, n in self.constants.get((a, b), {}).items():
                    result[c] = result[c] + xa * yb * n
        return result


@dataclass(frozen=True)
class BasedModule:
    """
    K(M) as a module over a based ring; action[(c, m)][n] is the
    coefficient of [n] in [c]·[m]. star pairs O_M with the labels of K(M⁻¹).
    """
    ring: BasedRing
    labels: Tuple[str, ...]
    star: Dict[str, str]
    action: Constants
    name: str = "K(M)"

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise FusionDataError(f"unknown label {label!r} in {self.name}")

    def coefficient(self, c: str, m: str, n: str) -> Scalar:
        return self.action.get((c, m), {}).get(n, 0)

    def act_label(self, c: str, m: str) -> Dict[str, Scalar]:
        return dict(self.action.get((c, m), {}))

    def act(self, x: Vector, v: Vector) -> Vector:
        """x·v for x in the ring and v in the module, on coefficient vectors"""
        result: Vector = {n: 0 for n in self.labels}
        for c, xc in x.items():
            if _is_zero(xc):
                continue
            for m, vm in v.items():
                if _is_zero(vm):
                    continue
                for n, a in self.action.get((c, m), {}).items():
                    result[n] = result[n] + xc * vm * a
        return result


def _check_labels(result: CheckResult, labels: Sequence[str], unit: Optional[str],
                  star: Dict[str, str], targets: Optional[Iterable[str]] = None):
    if len(set(labels)) != len(labels):
        result.fail(f"duplicate labels in {list(labels)}")
    if unit is not None and unit not in labels:
        result.fail(f"unit {unit!r} is not a label")
    if set(star) != set(labels):
        result.fail(f"star is not defined exactly on {list(labels)}")
        return
    targets = set(labels) if targets is None else set(targets)
    if set(star.values()) != targets or len(set(star.values())) != len(labels):
        result.fail("star is not a bijection onto its target labels")


def validate_based_ring(ring: BasedRing, max_witnesses: int = 20) -> CheckResult:
    """Exhaustive check of every based-ring axiom; violations become witnesses"""
    result = CheckResult(f"based_ring[{ring.name}]")
    fail = partial(result.fail, max_witnesses=max_witnesses)
    _check_labels(result, ring.labels, ring.unit, ring.star)
    if not result.passed:
        return result
    labels = ring.labels
    known = set(labels)
    for (a, b), row in ring.constants.items():
        if a not in known or b not in known or not set(row) <= known:
            fail(f"structure constants mention unknown labels at ({a},{b})")
    if not result.passed:
        return result

    integral = ring.is_integral
    if integral:
        for (a, b), row in ring.constants.items():
            for c, n in row.items():
                if n < 0:
                    fail(f"negativity N[{a}][{b}][{c}] = {n}")

    for a in labels:
        for b in labels:
            expected = 1 if a == b else 0
            if ring.coefficient(ring.unit, a, b) != expected:
                fail(f"unit ({ring.unit},{a},{b}): {_fmt(ring.coefficient(ring.unit, a, b))} != {expected}")
            for c in labels:
                if ring.coefficient(a, b, c) != ring.coefficient(b, a, c):
                    fail(f"commutativity ({a},{b},{c}): "
                         f"{_fmt(ring.coefficient(a, b, c))} != {_fmt(ring.coefficient(b, a, c))}")
            if integral:
                expected = 1 if a == ring.star[b] else 0
                if ring.coefficient(a, b, ring.unit) != expected:
                    fail(f"duality ({a},{b}): N[{a}][{b}][{ring.unit}] = "
                         f"{ring.coefficient(a, b, ring.unit)}, expected {expected}")

    for a in labels:
        if ring.star[ring.star[a]] != a:
            fail(f"star is not an involution at {a}")
    if integral:
        for a in labels:
            for b in labels:
                for c in labels:
                    if ring.coefficient(ring.star[a], ring.star[b], ring.star[c]) != ring.coefficient(a, b, c):
                        fail(f"star compatibility ({a},{b},{c})")

    # (a·b)·c against a·(b·c), coefficient by coefficient
    for a in labels:
        for b in labels:
            ab = ring.product(a, b)
            for c in labels:
                bc = ring.product(b, c)
                for d in labels:
                    lhs = sum((n * ring.coefficient(e, c, d) for e, n in ab.items()), 0)
                    rhs = sum((n * ring.coefficient(a, f, d) for f, n in bc.items()), 0)
                    if lhs != rhs:
                        fail(f"associativity ({a},{b},{c},{d}): {_fmt(lhs)} != {_fmt(rhs)}")
    result.details['rank'] = ring.rank
    return result


def validate_based_module(module: BasedModule, max_witnesses: int = 20) -> CheckResult:
    """Unit action, non-negativity and module associativity, exhaustively"""
    result = CheckResult(f"based_module[{module.name}]")
    fail = partial(result.fail, max_witnesses=max_witnesses)
    ring = module.ring
    if len(set(module.labels)) != len(module.labels):
        fail(f"duplicate labels in {list(module.labels)}")
    if set(module.star) != set(module.labels) or len(set(module.star.values())) != module.rank:
        fail("module star is not a bijection on the module labels")
    known_m, known_c = set(module.labels), set(ring.labels)
    for (c, m), row in module.action.items():
        if c not in known_c or m not in known_m or not set(row) <= known_m:
            fail(f"action constants mention unknown labels at ({c},{m})")
    if not result.passed:
        return result

    for (c, m), row in module.action.items():
        for n, a in row.items():
            if not isinstance(a, int) or isinstance(a, bool):
                fail(f"non-integer action A[{c}][{m}][{n}] = {a}")
            elif a < 0:
                fail(f"negativity A[{c}][{m}][{n}] = {a}")

    for m in module.labels:
        for n in module.labels:
            expected = 1 if m == n else 0
            if module.coefficient(ring.unit, m, n) != expected:
                fail(f"unit action ({m},{n}): {module.coefficient(ring.unit, m, n)} != {expected}")

    for a in ring.labels:
        for b in ring.labels:
            ab = ring.product(a, b)
            for m in module.labels:
                bm = module.act_label(b, m)
                for n in module.labels:
                    lhs = sum((k * module.coefficient(e, m, n) for e, k in ab.items()), 0)
                    rhs = sum((k * module.coefficient(a, p, n) for p, k in bm.items()), 0)
                    if lhs != rhs:
                        fail(f"associativity ({a},{b},{m},{n}): {_fmt(lhs)} != {_fmt(rhs)}")
    result.details['rank'] = module.rank
    return result


def fusion_matrix(ring: BasedRing, a: str) -> np.ndarray:
    """Left multiplication by [a]; entry (c, b) is N[a][b][c]"""
    ring.index(a)
    r = ring.rank
    matrix = np.zeros((r, r), dtype=np.int64 if ring.is_integral else object)
    for j, b in enumerate(ring.labels):
        for c, n in ring.constants.get((a, b), {}).items():
            matrix[ring.index(c), j] = n
    return matrix


def regular_module(ring: BasedRing) -> BasedModule:
    """C as a module over itself (M = C)"""
    return BasedModule(ring=ring, labels=ring.labels, star=dict(ring.star),
                       action=ring.constants, name=f"{ring.name} (regular)")


def dual_module(module: BasedModule) -> BasedModule:
    """
    K(M⁻¹) on the star labels with A'[c][m*][n*] = A[c*][m][n]; the star of
    the dual maps back, so dual_module(dual_module(M)) reproduces M.
    """
    ring = module.ring
    star = module.star
    action: Constants = {}
    for c in ring.labels:
        for m in module.labels:
            row = module.action.get((ring.star[c], m), {})
            if row:
                action[(c, star[m])] = {star[n]: a for n, a in row.items()}
    name = module.name[:-3] if module.name.endswith("^-1") else f"{module.name}^-1"
    return BasedModule(ring=ring, labels=tuple(star[m] for m in module.labels),
                       star={star[m]: m for m in module.labels}, action=action, name=name)


def same_module(a: BasedModule, b: BasedModule) -> Optional[str]:
    """None if both modules have identical labels and constants, else a witness"""
    if tuple(a.labels) != tuple(b.labels):
        return f"labels differ: {list(a.labels)} vs {list(b.labels)}"
    for c in a.ring.labels:
        for m in a.labels:
            for n in a.labels:
                if a.coefficient(c, m, n) != b.coefficient(c, m, n):
                    return (f"A[{c}][{m}][{n}]: {a.coefficient(c, m, n)} "
                            f"!= {b.coefficient(c, m, n)}")
    return None


def hermitian_form(x: Vector, y: Vector) -> Scalar:
    """Standard form Σ x_i conj(y_i); the label basis is orthonormal"""
    if set(x) != set(y):
        raise FusionDataError(f"vectors indexed by different labels: {sorted(x)} vs {sorted(y)}")
    total = 0
    for label, xi in x.items():
        yi = y[label]
        if _is_zero(xi) or _is_zero(yi):
            continue
        total = total + xi * yi.conjugate()
    return total


@dataclass(frozen=True)
class GradedFusionDatum:
    """Grothendieck shadow of a Z/N-graded crossed extension with autoequivalence F"""
    modulus: int
    ring: BasedRing
    module: BasedModule
    F: Dict[str, str]
    components: Dict[int, BasedModule] = field(default_factory=dict)

    @property
    def dual(self) -> BasedModule:
        return dual_module(self.module)

    def fixed_labels(self) -> List[str]:
        return [c for c in self.ring.labels if self.F.get(c) == c]


def validate_graded_datum(datum: GradedFusionDatum, max_witnesses: int = 20) -> CheckResult:
    """F-invariance, fixed-point count and the grade identifications for N = 1, 2"""
    result = CheckResult("graded_datum")
    fail = partial(result.fail, max_witnesses=max_witnesses)
    ring, module, F = datum.ring, datum.module, datum.F
    if datum.modulus < 1:
        fail(f"modulus must be positive, got {datum.modulus}")
        return result
    if module.ring is not ring:
        fail("module is not defined over the grade-0 ring")

    if set(F) != set(ring.labels) or set(F.values()) != set(ring.labels):
        fail("F is not a permutation of the ring labels")
        return result
    if F[ring.unit] != ring.unit:
        fail(f"F moves the unit to {F[ring.unit]}")
    for a in ring.labels:
        if F[ring.star[a]] != ring.star[F[a]]:
            fail(f"F does not commute with star at {a}")
        for b in ring.labels:
            for c in ring.labels:
                if ring.coefficient(F[a], F[b], F[c]) != ring.coefficient(a, b, c):
                    fail(f"F-invariance ({a},{b},{c}): N[F a][F b][F c] = "
                         f"{ring.coefficient(F[a], F[b], F[c])} != {ring.coefficient(a, b, c)}")
    for a in ring.labels:
        image = a
        for _ in range(datum.modulus):
            image = F[image]
        if image != a:
            fail(f"F^{datum.modulus} is not the identity at {a}")

    fixed = datum.fixed_labels()
    if len(fixed) != module.rank:
        fail(f"|fixed points of F| = {len(fixed)} but |O_M| = {module.rank}")

    if datum.modulus == 1:
        if any(F[a] != a for a in ring.labels):
            fail("N = 1 requires F = id")
        witness = same_module(module, regular_module(ring))
        if witness:
            fail(f"N = 1 requires the regular module: {witness}")
    elif datum.modulus == 2:
        # grade -1 equals grade 1: star must land back in O_M
        if set(module.star.values()) != set(module.labels):
            fail("N = 2 requires the module star to stay inside O_M")
        else:
            witness = same_module(dual_module(module), module)
            if witness:
                fail(f"N = 2 requires K(M⁻¹) = K(M) under star: {witness}")

    for grade, component in sorted(datum.components.items()):
        if grade % datum.modulus == 0:
            fail(f"component listed for grade {grade}, which is grade 0")
            continue
        result.merge(validate_based_module(component, max_witnesses))
    result.details.update({'modulus': datum.modulus, 'fixed': fixed})
    return result


# spherical data

@dataclass(frozen=True)
class CrossedSMatrix:
    """Rows indexed by F-fixed labels of O_C, columns by O_M"""
    rows: Tuple[str, ...]
    columns: Tuple[str, ...]
    entries: Tuple[Tuple[CycNum, ...], ...]

    def __post_init__(self):
        if len(self.entries) != len(self.rows) or any(len(r) != len(self.columns) for r in self.entries):
            raise FusionDataError(
                f"crossed S shape does not match {len(self.rows)}x{len(self.columns)}")

    def entry(self, row: str, column: str) -> CycNum:
        return self.entries[self.rows.index(row)][self.columns.index(column)]

    def row(self, label: str) -> Tuple[CycNum, ...]:
        return self.entries[self.rows.index(label)]

    def as_matrix(self) -> List[List[CycNum]]:
        return [list(r) for r in self.entries]

    def rescaled(self, phases: Dict[str, CycNum]) -> "CrossedSMatrix":
        return replace(self, entries=tuple(
            tuple(phases.get(label, 1) * x for x in row) for label, row in zip(self.rows, self.entries)))

    def with_entry(self, row: str, column: str, value: CycNum) -> "CrossedSMatrix":
        i, j = self.rows.index(row), self.columns.index(column)
        entries = [list(r) for r in self.entries]
        entries[i][j] = value
        return replace(self, entries=tuple(tuple(r) for r in entries))


@dataclass(frozen=True)
class SphericalDatum:
    labels: Tuple[str, ...]
    dims_C: Dict[str, CycNum]
    dims_M: Dict[str, CycNum]
    S: Tuple[Tuple[CycNum, ...], ...]
    Scross: CrossedSMatrix
    global_dim: CycNum

    def s(self, a: str, b: str) -> CycNum:
        return self.S[self.labels.index(a)][self.labels.index(b)]

    def with_crossed(self, Scross: CrossedSMatrix) -> "SphericalDatum":
        return replace(self, Scross=Scross)


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO)

    fib = BasedRing(labels=("1", "τ"), unit="1", star={"1": "1", "τ": "τ"},
                    constants={("1", "1"): {"1": 1}, ("1", "τ"): {"τ": 1},
                               ("τ", "1"): {"τ": 1}, ("τ", "τ"): {"1": 1, "τ": 1}},
                    name="Fibonacci")
    print(validate_based_ring(fib).status.value)
    print(fusion_matrix(fib, "τ"))
