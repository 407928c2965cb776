"""
Cyclotomic Arithmetic - Exact Numbers in Q(zeta_n)
Power-basis representation modulo the n-th cyclotomic polynomial, Galois
embeddings with rigorous interval bounds, integrality and positivity tests
"""

import cmath
import logging
import math
import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import mpmath
import sympy
from mpmath.ctx_iv import MPIntervalContext
from sympy import Poly, QQ
from sympy.ntheory import factorint, legendre_symbol

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


class CyclotomicError(Exception):
    """Base error for cyclotomic arithmetic"""


class ConductorOverflowError(CyclotomicError):
    """An operation would exceed the configured conductor ceiling"""


class CyclotomicZeroDivisionError(CyclotomicError, ZeroDivisionError):
    """Division by the zero element"""


@dataclass(frozen=True)
class ArithmeticSettings:
    """Limits shared by every CycNum operation"""
    conductor_ceiling: int = 1000      # guards lcm chains
    precision_digits: int = 30         # default decimal digits for embeddings
    max_precision_digits: int = 240    # positivity escalation stops here

    @classmethod
    def from_env(cls, base: Optional["ArithmeticSettings"] = None) -> "ArithmeticSettings":
        """Apply VERLINDE_CONDUCTOR_CEILING / VERLINDE_PRECISION on top of base"""
        base = base or cls()
        ceiling = os.environ.get("VERLINDE_CONDUCTOR_CEILING")
        precision = os.environ.get("VERLINDE_PRECISION")
        return cls(
            conductor_ceiling=int(ceiling) if ceiling else base.conductor_ceiling,
            precision_digits=int(precision) if precision else base.precision_digits,
            max_precision_digits=max(base.max_precision_digits,
                                     int(precision) if precision else 0),
        )


_settings = ArithmeticSettings.from_env()


def get_settings() -> ArithmeticSettings:
    return _settings


def configure(settings: ArithmeticSettings):
    """Swap the active arithmetic settings (the object itself is immutable)"""
    global _settings
    _settings = settings
    logger.debug(f"Arithmetic settings: ceiling={settings.conductor_ceiling}, "
                 f"precision={settings.precision_digits}")


def _check_conductor(n: int) -> int:
    if n > _settings.conductor_ceiling:
        raise ConductorOverflowError(
            f"conductor {n} exceeds ceiling {_settings.conductor_ceiling}")
    return n


@lru_cache(maxsize=None)
def _phi_coeffs(n: int) -> Tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, lowest degree first"""
    x = sympy.Symbol('x')
    poly = sympy.cyclotomic_poly(n, x, polys=True)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


@lru_cache(maxsize=None)
def degree(n: int) -> int:
    """Euler phi(n), the degree of Q(zeta_n)"""
    return int(sympy.totient(n))


@lru_cache(maxsize=None)
def _trace_weight(n: int, k: int) -> Fraction:
    # Tr(zeta_n^k) / phi(n) = mu(m) / phi(m) with m = n / gcd(n, k)
    m = n // math.gcd(n, k)
    return Fraction(int(sympy.mobius(m)), degree(m))


def _reduce(poly: Sequence[Fraction], n: int) -> Tuple[Fraction, ...]:
    """Reduce a polynomial in zeta_n to the power basis of degree phi(n)"""
    folded = [Fraction(0)] * n
    for k, c in enumerate(poly):
        if c:
            folded[k % n] += c
    phi = _phi_coeffs(n)
    d = len(phi) - 1
    for k in range(n - 1, d - 1, -1):
        c = folded[k]
        if not c:
            continue
        folded[k] = Fraction(0)
        shift = k - d
        for i in range(d):
            if phi[i]:
                folded[shift + i] -= c * phi[i]
    return tuple(folded[:d])


def _parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise CyclotomicError(f"boolean {value!r} is not a rational")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if any(ch in text for ch in ".eE"):
            raise CyclotomicError(f"rational {value!r} must be written as p/q, not a decimal")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise CyclotomicError(f"cannot parse rational {value!r}: {e}")
    raise CyclotomicError(f"{type(value).__name__} {value!r} is not an exact rational")


@dataclass(frozen=True, eq=False)
class CycNum:
    """
    Element of Q(zeta_n) as rational coordinates on 1, zeta, ..., zeta^(phi(n)-1)

    Coordinates are canonical at a fixed conductor; equality lifts both sides
    to the lcm of the conductors, so values need not sit at their minimal one.
    """
    conductor: int
    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        if self.conductor < 1:
            raise CyclotomicError(f"conductor must be positive, got {self.conductor}")
        if len(self.coords) != degree(self.conductor):
            raise CyclotomicError(
                f"expected {degree(self.conductor)} coordinates at conductor "
                f"{self.conductor}, got {len(self.coords)}")

    # construction

    @classmethod
    def from_poly(cls, n: int, coeffs: Sequence[Rational]) -> "CycNum":
        """Reduce sum coeffs[k] * zeta_n^k to canonical form"""
        _check_conductor(n)
        return cls(n, _reduce([Fraction(c) for c in coeffs], n))

    @classmethod
    def from_rational(cls, value: Rational, n: int = 1) -> "CycNum":
        return cls.from_poly(n, [value])

    @classmethod
    def from_dict(cls, data: Union[Dict, int, str]) -> "CycNum":
        """Decode { "conductor": n, "coords": { "k": "p/q" } } or a bare rational"""
        if not isinstance(data, dict):
            return cls.from_rational(_parse_rational(data))
        try:
            n = int(data["conductor"])
            raw = data.get("coords", {})
        except (KeyError, TypeError, ValueError) as e:
            raise CyclotomicError(f"malformed cyclotomic entry {data!r}: {e}")
        if n < 1:
            raise CyclotomicError(f"conductor must be positive, got {n}")
        poly: List[Fraction] = []
        for key, value in raw.items():
            k = int(key)
            if k < 0:
                raise CyclotomicError(f"negative exponent {key!r}")
            if k >= len(poly):
                poly.extend([Fraction(0)] * (k + 1 - len(poly)))
            poly[k] += _parse_rational(value)
        return cls.from_poly(n, poly)

    def to_dict(self) -> Dict:
        return {
            'conductor': self.conductor,
            'coords': {str(k): str(c) for k, c in enumerate(self.coords) if c},
        }

    # structure

    def is_zero(self) -> bool:
        return not any(self.coords)

    def rational_value(self) -> Optional[Fraction]:
        """The rational this element equals, or None if irrational"""
        if any(self.coords[1:]):
            return None
        return self.coords[0]

    def lift(self, m: int) -> "CycNum":
        """Same field element at conductor m (a multiple of the current one)"""
        if m % self.conductor:
            raise CyclotomicError(f"cannot lift conductor {self.conductor} to {m}")
        if m == self.conductor:
            return self
        _check_conductor(m)
        step = m // self.conductor
        poly = [Fraction(0)] * (step * (len(self.coords) - 1) + 1)
        for k, c in enumerate(self.coords):
            poly[k * step] = c
        return CycNum(m, _reduce(poly, m))

    def _aligned(self, other: "CycNum") -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...], int]:
        m = _check_conductor(math.lcm(self.conductor, other.conductor))
        return self.lift(m).coords, other.lift(m).coords, m

    # arithmetic

    @staticmethod
    def _coerce(value) -> Optional["CycNum"]:
        if isinstance(value, CycNum):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return CycNum.from_rational(value)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, m = self._aligned(other)
        return CycNum(m, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.conductor, tuple(-c for c in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            scale = Fraction(other)
            return CycNum(self.conductor, tuple(c * scale for c in self.coords))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, m = self._aligned(other)
        product = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    product[i + j] += x * y
        return CycNum(m, _reduce(product, m))

    __rmul__ = __mul__

    @cached_property
    def _inverse(self) -> "CycNum":
        if self.is_zero():
            raise CyclotomicZeroDivisionError("division by zero in Q(zeta_n)")
        value = self.rational_value()
        if value is not None:
            return CycNum.from_rational(1 / value, self.conductor)
        # extended Euclid against Phi_n
        x = sympy.Symbol('x')
        n = self.conductor
        num = Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(self.coords)],
                   x, domain=QQ)
        phi = Poly(list(reversed(_phi_coeffs(n))), x, domain=QQ)
        inv = num.invert(phi)
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(inv.all_coeffs())]
        return CycNum(n, _reduce(coeffs, n))

    def inverse(self) -> "CycNum":
        return self._inverse

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        result = CycNum.from_rational(1, self.conductor)
        e = abs(exponent)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # Galois action

    def galois_conjugate(self, j: int) -> "CycNum":
        """Apply zeta_n -> zeta_n^j for j coprime to n"""
        n = self.conductor
        if math.gcd(j, n) != 1:
            raise CyclotomicError(f"{j} is not coprime to conductor {n}")
        poly = [Fraction(0)] * n
        for k, c in enumerate(self.coords):
            if c:
                poly[(k * j) % n] += c
        return CycNum(n, _reduce(poly, n))

    def conj(self) -> "CycNum":
        return self.galois_conjugate(-1)

    # lets CycNum and complex share code paths
    conjugate = conj

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.conductor == other.conductor:
            return self.coords == other.coords
        a, b, _ = self._aligned(other)
        return a == b

    def __hash__(self):
        n = self.conductor
        return hash(sum((c * _trace_weight(n, k) for k, c in enumerate(self.coords) if c),
                        Fraction(0)))

    def to_complex(self) -> complex:
        """Principal embedding in double precision (no error bound)"""
        n = self.conductor
        return sum((float(c) * cmath.exp(2j * math.pi * k / n)
                    for k, c in enumerate(self.coords) if c), 0j)

    def __repr__(self):
        return f"CycNum({self.conductor}: {self})"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coords):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
                continue
            power = f"ζ{self.conductor}" + (f"^{k}" if k > 1 else "")
            if c == 1:
                terms.append(power)
            elif c == -1:
                terms.append(f"-{power}")
            else:
                terms.append(f"{c}*{power}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")


ZERO = CycNum.from_rational(0)
ONE = CycNum.from_rational(1)


def zeta(n: int, k: int = 1) -> CycNum:
    """The root of unity zeta_n^k = exp(2 pi i k / n)"""
    poly = [Fraction(0)] * (k % n + 1)
    poly[k % n] = Fraction(1)
    return CycNum.from_poly(n, poly)


def field_ops(a: CycNum, b: CycNum, kind: str) -> CycNum:
    """Dispatch add / sub / mul / div by name"""
    operations = {
        'add': lambda: a + b,
        'sub': lambda: a - b,
        'mul': lambda: a * b,
        'div': lambda: a / b,
    }
    if kind not in operations:
        raise CyclotomicError(f"unknown field operation {kind!r}")
    return operations[kind]()


def conj(a: CycNum) -> CycNum:
    return a.conj()


def normalize_conductor(values: Iterable[CycNum]) -> List[CycNum]:
    """Lift every value to the lcm of all conductors"""
    values = list(values)
    if not values:
        return []
    m = _check_conductor(reduce(math.lcm, (v.conductor for v in values), 1))
    return [v.lift(m) for v in values]


# embeddings

@dataclass(frozen=True)
class Embedding:
    """Complex value of a Galois embedding with a rigorous error bound"""
    j: int
    value: mpmath.mpc
    error_bound: mpmath.mpf
    real_interval: Tuple[mpmath.mpf, mpmath.mpf]
    imag_interval: Tuple[mpmath.mpf, mpmath.mpf]
    precision: int

    def __complex__(self):
        return complex(self.value)


@lru_cache(maxsize=16)
def _interval_context(dps: int) -> MPIntervalContext:
    ctx = MPIntervalContext()
    ctx.dps = dps
    return ctx


def _endpoint(x) -> mpmath.mpf:
    return mpmath.mp.make_mpf(x._mpi_[0])


def galois_embed(a: CycNum, j: int = 1, precision: Optional[int] = None) -> Embedding:
    """Evaluate zeta_n -> exp(2 pi i j / n) with interval arithmetic"""
    n = a.conductor
    if math.gcd(j, n) != 1:
        raise CyclotomicError(f"embedding index {j} is not coprime to conductor {n}")
    precision = precision or _settings.precision_digits
    ctx = _interval_context(precision + 10)
    re = ctx.mpf(0)
    im = ctx.mpf(0)
    for k, c in enumerate(a.coords):
        if not c:
            continue
        coefficient = ctx.mpf(c.numerator) / c.denominator
        e = (k * j) % n
        if e == 0:
            re += coefficient
            continue
        theta = ctx.pi * (2 * e) / n
        re += coefficient * ctx.cos(theta)
        im += coefficient * ctx.sin(theta)
    re_lo, re_hi = _endpoint(re.a), _endpoint(re.b)
    im_lo, im_hi = _endpoint(im.a), _endpoint(im.b)
    # midpoint rounding at this precision stays below half the interval width
    with mpmath.workdps(precision + 10):
        value = mpmath.mpc((re_lo + re_hi) / 2, (im_lo + im_hi) / 2)
        bound = (re_hi - re_lo) + (im_hi - im_lo)
    return Embedding(j, value, bound, (re_lo, re_hi), (im_lo, im_hi), precision)


class Positivity(Enum):
    """Outcome of a total-positivity test"""
    POSITIVE = "positive"
    NOT_POSITIVE = "not_positive"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class NumberProfile:
    """Integrality and positivity facts about one CycNum"""
    is_algebraic_integer: bool
    is_totally_real: bool
    is_totally_positive: Positivity
    precision_used: int = 0


def _units(n: int) -> List[int]:
    return [j for j in range(1, n + 1) if math.gcd(j, n) == 1]


def integrality_and_positivity(a: CycNum) -> NumberProfile:
    """
    Integrality from the power basis (Z[zeta_n] is the full ring of integers),
    total reality from conj(a) == a, total positivity from interval embeddings
    with precision escalation; an unresolved sign is reported as UNDECIDED
    """
    integral = all(c.denominator == 1 for c in a.coords)
    real = a.conj() == a
    if not real or a.is_zero():
        return NumberProfile(integral, real, Positivity.NOT_POSITIVE)
    # conj pairs share real parts
    indices = [j for j in _units(a.conductor) if 2 * j <= a.conductor] or [1]
    precision = _settings.precision_digits
    while True:
        undecided = False
        for j in indices:
            low, high = galois_embed(a, j, precision).real_interval
            if high <= 0:
                return NumberProfile(integral, real, Positivity.NOT_POSITIVE, precision)
            if low <= 0:
                undecided = True
        if not undecided:
            return NumberProfile(integral, real, Positivity.POSITIVE, precision)
        if precision * 2 > _settings.max_precision_digits:
            logger.warning(f"Positivity of {a} undecided at {precision} digits")
            return NumberProfile(integral, real, Positivity.UNDECIDED, precision)
        precision *= 2


def is_algebraic_integer(a: CycNum) -> bool:
    return all(c.denominator == 1 for c in a.coords)


def lies_in(a: CycNum, m: int) -> bool:
    """True iff a lies in Q(zeta_m)"""
    n = a.conductor
    g = math.gcd(n, m)
    for j in _units(n):
        if j % g == 1 % g and a.galois_conjugate(j) != a:
            return False
    return True


def root_of_unity_exponent(a: CycNum) -> Optional[Fraction]:
    """Return t with a = exp(2 pi i t), t in [0, 1), or None if a is no root of unity"""
    if a.is_zero() or a * a.conj() != 1:
        return None
    order = math.lcm(2, a.conductor)
    angle = cmath.phase(a.to_complex()) / (2 * math.pi)
    k = round(angle * order) % order
    if zeta(order, k) != a:
        return None
    return Fraction(k, order)


# square roots

def _gauss_sum(p: int) -> CycNum:
    """sum (k/p) zeta_p^k; squares to (-1)^((p-1)/2) p"""
    coeffs = [0] + [legendre_symbol(k, p) for k in range(1, p)]
    return CycNum.from_poly(p, coeffs)


def _positive(value: CycNum) -> CycNum:
    return value if value.to_complex().real > 0 else -value


def real_sqrt(m: int) -> CycNum:
    """Square root of a square-free m, positive under the principal embedding"""
    if m < 1:
        raise CyclotomicError(f"real_sqrt needs a positive integer, got {m}")
    factors = factorint(m)
    if any(e > 1 for e in factors.values()):
        raise CyclotomicError(f"{m} is not square-free")
    if m == 1:
        return ONE
    odd = m // 2 if m % 2 == 0 else m
    root = ONE
    for p in sorted(factors):
        if p != 2:
            root = root * _gauss_sum(p)
    if odd % 4 == 3:
        # the Gauss sum product is i * sqrt(odd)
        root = root * zeta(4, 3)
    if m % 2 == 0:
        root = root * (zeta(8) + zeta(8, 7))
    return _positive(root)


def rational_sqrt(q: Rational) -> CycNum:
    """Positive square root of a positive rational, exact"""
    q = Fraction(q)
    if q <= 0:
        raise CyclotomicError(f"rational_sqrt needs a positive rational, got {q}")
    square, free = 1, 1
    for p, e in factorint(q.numerator * q.denominator).items():
        square *= p ** (e // 2)
        free *= p ** (e % 2)
    return real_sqrt(free) * Fraction(square, q.denominator)


def _norm(a: CycNum) -> Fraction:
    """Product of all Galois conjugates, a rational number"""
    product = reduce(lambda x, j: x * a.galois_conjugate(j), _units(a.conductor), ONE)
    return product.rational_value()


def cyclotomic_sqrt(a: CycNum) -> Optional[CycNum]:
    """
    Square root of a real a > 0 inside a cyclotomic field, positive under the
    principal embedding, or None when none is found below the conductor ceiling.

    Q(sqrt a) can only ramify over primes dividing 2·n·N(a), so the root is
    searched in the real subfield of Q(zeta_M) with M = 4n times the odd primes
    of the norm. PSLQ proposes the coordinates and s·s == a confirms them.
    """
    q = a.rational_value()
    if q is not None:
        return rational_sqrt(q) if q > 0 else None
    if a.conj() != a or a.to_complex().real <= 0:
        return None
    n = a.conductor
    norm = _norm(a)
    primes = set(factorint(norm.numerator)) | set(factorint(norm.denominator))
    m = 4 * n
    for p in sorted(primes):
        if p != 2 and n % p:
            m *= p
    if m > _settings.conductor_ceiling:
        logger.debug(f"square root of {a} would need conductor {m}")
        return None
    half = degree(m) // 2
    dps = max(2 * _settings.precision_digits, 20 + 12 * (half + 1))
    with mpmath.workdps(dps):
        root = mpmath.sqrt(galois_embed(a, 1, dps).value.real)
        # 1, 2cos(2 pi k / m) for 0 < k < half span the real subfield
        basis = [mpmath.mpf(1)] + [2 * mpmath.cos(2 * mpmath.pi * k / m) for k in range(1, half)]
        relation = mpmath.pslq([root] + basis, maxcoeff=10 ** 12, maxsteps=10 ** 5)
    if not relation or not relation[0]:
        return None
    coeffs = [Fraction(0)] * m
    for k, r in enumerate(relation[1:]):
        c = Fraction(-r, relation[0])
        coeffs[k] += c
        if k:
            coeffs[m - k] += c
    candidate = CycNum.from_poly(m, coeffs)
    if candidate * candidate != a:
        return None
    return _positive(candidate)


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO)

    golden = (1 + real_sqrt(5)) / 2
    print(f"φ = {golden}")
    print(f"1/φ = {1 / golden}")
    print(f"√2 · √5 at conductor {(real_sqrt(2) * real_sqrt(5)).conductor}")
    profile = integrality_and_positivity(2 + golden)
    print(f"(5+√5)/2: integer={profile.is_algebraic_integer}, "
          f"real={profile.is_totally_real}, positive={profile.is_totally_positive.value}")
