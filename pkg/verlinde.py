"""
Verlinde Formulas - Module Multiplicities & Twisted Fusion Algebras
Classical, module (spherical and character) and twisted fusion formulas,
the twisted fusion algebra built from the crossed S-matrix, and its
Frobenius star-algebra checks
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from characters import Character
from cyclotomic import (CycNum, Positivity, ZERO, integrality_and_positivity,
                        is_algebraic_integer, lies_in)
from fusion_core import BasedModule, BasedRing, CrossedSMatrix, SphericalDatum
from reports import CheckResult
from twisted import TwistedCharacter

logger = logging.getLogger(__name__)

Triple = Tuple[str, str, str]


class VerlindeError(Exception):
    """A formula produced a value inconsistent with the input data"""


def _multiplicity(value, context: str, snap_tolerance: float = 1e-6) -> int:
    """Exact values must be non-negative rational integers; numeric ones snap within tolerance"""
    if isinstance(value, CycNum):
        q = value.rational_value()
        if q is None or q.denominator != 1:
            raise VerlindeError(f"{context}: {value} is not a rational integer")
        if q < 0:
            raise VerlindeError(f"{context}: {value} is negative")
        return int(q)
    if isinstance(value, (int, Fraction)):
        if Fraction(value).denominator != 1 or value < 0:
            raise VerlindeError(f"{context}: {value} is not a non-negative integer")
        return int(value)
    nearest = round(complex(value).real)
    if abs(complex(value) - nearest) > snap_tolerance or nearest < 0:
        raise VerlindeError(f"{context}: {complex(value):.9g} is not within {snap_tolerance} "
                            f"of a non-negative integer")
    return int(nearest)


def verlinde_classical(spherical: SphericalDatum, triple: Triple,
                       ring: Optional[BasedRing] = None) -> int:
    """(1/dim C) Σ_D S[D][a] S[D][b] conj(S[D][c]) / d_D, checked against N[a][b][c]"""
    a, b, c = triple
    total = ZERO
    for d in spherical.labels:
        term = spherical.s(d, a) * spherical.s(d, b) * spherical.s(d, c).conj()
        total = total + term * spherical.dims_C[d].inverse()
    n = _multiplicity(total / spherical.global_dim, f"classical {triple}")
    if ring is not None and ring.coefficient(a, b, c) != n:
        raise VerlindeError(f"classical {triple} = {n} but N = {ring.coefficient(a, b, c)}")
    return n


def verlinde_module_spherical(spherical: SphericalDatum, triple: Triple,
                              module: Optional[BasedModule] = None) -> int:
    """
    a_{C,M}^N from S and the crossed S-matrix; both displayed forms of the
    sum are evaluated and must agree before the result is accepted
    """
    c, m, n = triple
    X = spherical.Scross
    direct = ZERO
    conjugate = ZERO
    for d in X.rows:
        s = spherical.s(d, c)
        xm, xn = X.entry(d, m), X.entry(d, n)
        inverse = spherical.dims_C[d].inverse()
        direct = direct + s * xm * xn.conj() * inverse
        conjugate = conjugate + s.conj() * xm.conj() * xn * inverse
    if direct != conjugate:
        raise VerlindeError(f"module {triple}: the two displayed sums differ "
                            f"({direct / spherical.global_dim} vs {conjugate / spherical.global_dim})")
    value = _multiplicity(direct / spherical.global_dim, f"module {triple}")
    if module is not None and module.coefficient(c, m, n) != value:
        raise VerlindeError(f"module {triple} = {value} but A = {module.coefficient(c, m, n)}")
    return value


def verlinde_module_chars(fixed: Sequence[Character], twisted: Sequence[TwistedCharacter],
                          triple: Triple, module: Optional[BasedModule] = None,
                          dual: Optional[BasedModule] = None,
                          snap_tolerance: float = 1e-6) -> int:
    """Σ_rho rho([C]) t~chi_rho([M]) conj(t~chi_rho([N])) / f_rho and its conjugate form"""
    c, m, n = triple
    by_label = {t.base.label: t for t in twisted}
    direct = 0
    conjugate = 0
    for rho in fixed:
        t = by_label[rho.label]
        xm, xn = t.values[m], t.values[n]
        f = rho.codegree
        direct = direct + rho.values[c] * xm * xn.conjugate() / f
        conjugate = conjugate + rho.values[c].conjugate() * xm.conjugate() * xn / f
    exact = all(t.exact for t in twisted)
    if exact and direct != conjugate:
        raise VerlindeError(f"twisted-character {triple}: the two displayed sums differ")
    if not exact and abs(complex(direct) - complex(conjugate)) > snap_tolerance:
        raise VerlindeError(f"twisted-character {triple}: the two displayed sums differ numerically")
    value = _multiplicity(direct, f"twisted-character {triple}", snap_tolerance)
    if module is not None:
        if module.coefficient(c, m, n) != value:
            raise VerlindeError(f"twisted-character {triple} = {value} but A = {module.coefficient(c, m, n)}")
        if dual is not None:
            star_c = module.ring.star[c]
            mirrored = dual.coefficient(star_c, module.star[m], module.star[n])
            if mirrored != value:
                raise VerlindeError(f"twisted-character {triple} = {value} but the dual "
                                    f"constant at ({star_c},{module.star[m]},{module.star[n]}) is {mirrored}")
    return value


def twisted_fusion_coeff_spherical(spherical: SphericalDatum, triple: Triple, modulus: int) -> CycNum:
    """(1/dim C) Σ_M X[C][M] X[C'][M] conj(X[D][M]) / d_M, an integer of Q(zeta_N)"""
    c, c2, d = triple
    X = spherical.Scross
    total = ZERO
    for m in X.columns:
        term = X.entry(c, m) * X.entry(c2, m) * X.entry(d, m).conj()
        total = total + term * spherical.dims_M[m].inverse()
    value = total / spherical.global_dim
    if not is_algebraic_integer(value):
        raise VerlindeError(f"twisted fusion {triple} = {value} is not an algebraic integer")
    if not lies_in(value, modulus):
        raise VerlindeError(f"twisted fusion {triple} = {value} does not lie in Q(ζ{modulus})")
    return value


def algebra_characters(spherical: SphericalDatum, star: Dict[str, str]) -> List[Character]:
    """phi_M([C]) = X[C][M] / d_M with codegree dim C / d_M^2, one per M"""
    X = spherical.Scross
    characters = []
    for m in X.columns:
        d = spherical.dims_M[m]
        inverse = d.inverse()
        values = {c: X.entry(c, m) * inverse for c in X.rows}
        alpha = {star[c]: v for c, v in values.items()}
        codegree = spherical.global_dim / (d * d)
        characters.append(Character(m, values, alpha, codegree, exact=True))
    return characters


def twisted_fusion_coeff_chars(characters: Sequence[Character], triple: Triple):
    """Σ_phi phi([C]) phi([C']) conj(phi([D])) / f_phi"""
    c, c2, d = triple
    total = 0
    for phi in characters:
        total = total + phi.values[c] * phi.values[c2] * phi.values[d].conjugate() / phi.codegree
    return total


@dataclass
class TwistedFusionAlgebra:
    """
    K(C,F) on the F-fixed labels: Z[omega]-valued structure constants,
    trace lambda picking the unit coefficient and the semilinear star
    """
    ring: BasedRing
    modulus: int
    characters: List[Character]
    gauge: Dict[str, Fraction] = field(default_factory=dict)

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.ring.labels

    @property
    def unit(self) -> str:
        return self.ring.unit

    def coefficient(self, c: str, c2: str, d: str):
        return self.ring.coefficient(c, c2, d)

    def multiply(self, x, y):
        return self.ring.multiply(x, y)

    def lam(self, x) -> CycNum:
        return x.get(self.unit, ZERO) + ZERO

    def star_vector(self, x):
        """(Σ x_C [C])* = Σ conj(x_C) [C*]"""
        return {self.ring.star[c]: (v.conjugate() if v != 0 else 0) for c, v in x.items()}

    def form(self, x, y) -> CycNum:
        """<x, y> = lambda(x · y*)"""
        return self.lam(self.multiply(x, self.star_vector(y)))


def build_twisted_fusion_algebra(spherical: SphericalDatum, modulus: int, star: Dict[str, str],
                                 unit: str) -> TwistedFusionAlgebra:
    """All constants via the crossed S-matrix, then the Fourier transform is checked exactly"""
    labels = tuple(spherical.Scross.rows)
    if unit not in labels:
        raise VerlindeError(f"unit {unit} is not among the fixed labels {list(labels)}")
    constants: Dict[Tuple[str, str], Dict[str, CycNum]] = {}
    for c in labels:
        for c2 in labels:
            row = {}
            for d in labels:
                value = twisted_fusion_coeff_spherical(spherical, (c, c2, d), modulus)
                if not value.is_zero():
                    row[d] = value
            if row:
                constants[(c, c2)] = row
    restricted = {c: star[c] for c in labels}
    ring = BasedRing(labels=labels, unit=unit, star=restricted, constants=constants, name="K(C,F)")
    characters = algebra_characters(spherical, restricted)

    for phi in characters:
        for c in labels:
            for c2 in labels:
                lhs = phi.values[c] * phi.values[c2]
                rhs = sum((a * phi.values[d] for d, a in ring.product(c, c2).items()), ZERO)
                if lhs != rhs:
                    raise VerlindeError(f"Fourier transform not multiplicative: phi_{phi.label} at ({c},{c2})")
    logger.debug(f"Twisted fusion algebra on {list(labels)} built and Fourier-checked")
    return TwistedFusionAlgebra(ring, modulus, characters)


def verify_frobenius_star(algebra: TwistedFusionAlgebra,
                          spherical: Optional[SphericalDatum] = None) -> CheckResult:
    """
    (a) lambda-duality of the bases, (b) orthonormality under lambda(x y*),
    (c) phi([C*]) = conj(phi([C])), (d) Ch_F conj(Ch_F)^T = Codeg_F,
    (e) codegrees are totally positive integers equal to dim C / d_M^2
    """
    result = CheckResult("frobenius_star")
    parts = {part: "pass" for part in ("lambda_duality", "orthonormality", "star_characters",
                                       "orthogonality", "codegrees")}

    def fail(part, witness):
        parts[part] = "fail"
        result.fail(f"{part}: {witness}")

    labels = algebra.labels
    star = algebra.ring.star
    basis = {c: {x: (1 if x == c else 0) for x in labels} for c in labels}
    for c in labels:
        for d in labels:
            expected = 1 if c == d else 0
            paired = algebra.lam(algebra.multiply(basis[c], basis[star[d]]))
            if paired != expected:
                fail("lambda_duality", f"lambda([{c}]·[{star[d]}]) = {paired}")
            inner = algebra.form(basis[c], basis[d])
            if inner != expected:
                fail("orthonormality", f"<[{c}], [{d}]> = {inner}")

    for phi in algebra.characters:
        for c in labels:
            if phi.values[star[c]] != phi.values[c].conj():
                fail("star_characters", f"phi_{phi.label}([{star[c]}]) != conj(phi_{phi.label}([{c}]))")

    for phi in algebra.characters:
        for psi in algebra.characters:
            inner = sum((phi.values[c] * psi.values[c].conj() for c in labels), ZERO)
            expected = phi.codegree if phi is psi else ZERO
            if inner != expected:
                fail("orthogonality", f"(Ch·conj(Ch)^T)[{phi.label}][{psi.label}] = {inner}")

    for phi in algebra.characters:
        formal = sum((phi.values[c] * phi.values[star[c]] for c in labels), ZERO)
        if formal != phi.codegree:
            fail("codegrees", f"phi_{phi.label}(alpha) = {formal} != {phi.codegree}")
        profile = integrality_and_positivity(phi.codegree)
        if not profile.is_algebraic_integer:
            fail("codegrees", f"f_{phi.label} = {phi.codegree} is not an algebraic integer")
        if profile.is_totally_positive is Positivity.NOT_POSITIVE:
            fail("codegrees", f"f_{phi.label} = {phi.codegree} is not totally positive")
        elif profile.is_totally_positive is Positivity.UNDECIDED:
            parts["codegrees"] = "undecided"
            result.undecided(f"codegrees: positivity of f_{phi.label} undecided")
        if spherical is not None:
            d = spherical.dims_M[phi.label]
            if phi.codegree != spherical.global_dim / (d * d):
                fail("codegrees", f"f_{phi.label} != dim C / d_{phi.label}^2")
    result.details['parts'] = parts
    result.details['codegrees'] = {phi.label: phi.codegree for phi in algebra.characters}
    return result


def rescale_rows(Scross: CrossedSMatrix, phases: Dict[str, CycNum], unit: str) -> CrossedSMatrix:
    """Multiply each row by a root of unity; the unit row stays fixed"""
    if phases.get(unit, 1) != 1:
        raise VerlindeError(f"the row of the unit {unit} cannot be rescaled")
    for label, r in phases.items():
        if r * r.conj() != 1:
            raise VerlindeError(f"phase for {label} is not of modulus one: {r}")
    return Scross.rescaled(phases)


def module_table(evaluate: Callable[[Triple], object], ring_labels: Sequence[str],
                 module_labels: Sequence[str]) -> Dict[Triple, object]:
    """evaluate over every (C, M, N) in declaration order"""
    return {(c, m, n): evaluate((c, m, n))
            for c in ring_labels for m in module_labels for n in module_labels}


def classical_table(spherical: SphericalDatum, ring: Optional[BasedRing] = None) -> Dict[Triple, int]:
    return module_table(lambda t: verlinde_classical(spherical, t, ring),
                        spherical.labels, spherical.labels)


def table_frame(table: Dict[Triple, object]) -> pd.DataFrame:
    rows = [{'C': c, 'M': m, 'N': n, 'value': str(v)} for (c, m, n), v in table.items()]
    return pd.DataFrame(rows, columns=['C', 'M', 'N', 'value'])
