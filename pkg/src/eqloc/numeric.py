"""Exact scalar, polynomial and Laurent-series arithmetic.

Every quantity the engine produces is a rational number times an integer power
of pi, so the universal value type is :class:`PiScalar`: a finite map from the
pi-exponent k to a rational coefficient,

  PiScalar  ~  { k : Fraction }      e.g.  4*pi  ->  {1: 4}
                                          -4/3*pi^2 + 1/2  ->  {2: -4/3, 0: 1/2}

pi is a formal grading symbol and is never evaluated as a float; equality is
structural, which is what makes exact-identity tests meaningful.

On top of that sit three small structures:

  LinForm       an affine-linear function of the equivariant parameters
                a_1..a_m (fixed-point restrictions of degree-2 classes),
  LaurentSeries a truncated Laurent series in one stage parameter t with
                PiScalar coefficients (per-component localization limits),
  MultiPoly     a sparse polynomial in a_1..a_m with PiScalar coefficients
                (outputs of integration, degree <= 1 in practice).

Polynomials in the parameters are never manipulated symbolically as rational
functions; the engine evaluates at exact sample points and reconstructs the
(low-degree) polynomial, verifying the fit on a held-out sample.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

RationalLike = Union[int, Fraction]


class NegativePole(ArithmeticError):
    """A Laurent series has a nonzero coefficient at negative order where a
    finite limit was required."""


class InconsistentSamples(ArithmeticError):
    """Point evaluations do not agree with any polynomial of the claimed
    degree (wrong homogeneity, or a non-generic sample slipped through)."""


# ---------------------------------------------------------------------------
# PiScalar
# ---------------------------------------------------------------------------

class PiScalar:
    """An exact element of Q[pi, pi^-1]: finite map pi-exponent -> Fraction.

    Instances are immutable by convention; all operations return new values.
    Zero coefficients are never stored, so structural equality is semantic
    equality.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, RationalLike] | None = None):
        clean: dict[int, Fraction] = {}
        if terms:
            for k, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    clean[int(k)] = c
        self._terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def of(cls, value: RationalLike, k: int = 0) -> "PiScalar":
        """The scalar value * pi^k."""
        return cls({k: Fraction(value)})

    @classmethod
    def zero(cls) -> "PiScalar":
        return cls()

    @classmethod
    def one(cls) -> "PiScalar":
        return cls({0: 1})

    @classmethod
    def pi(cls, k: int = 1, coeff: RationalLike = 1) -> "PiScalar":
        return cls({k: Fraction(coeff)})

    # -- queries ------------------------------------------------------------

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def single_grade(self) -> tuple[int, Fraction] | None:
        """(k, coefficient) if this is c*pi^k for a single k, else None.

        The zero scalar counts as grade 0 with coefficient 0.
        """
        if not self._terms:
            return (0, Fraction(0))
        if len(self._terms) == 1:
            ((k, c),) = self._terms.items()
            return (k, c)
        return None

    def rational_part(self) -> Fraction:
        """The pi^0 coefficient, requiring that no other grade is present."""
        g = self.single_grade()
        if g is None or (g[0] != 0 and g[1] != 0):
            raise ValueError(f"not a pure rational: {self}")
        return g[1]

    def float_hint(self) -> float:
        """Advisory float value (never used in any exact comparison)."""
        import math

        return sum(float(c) * math.pi ** k for k, c in self._terms.items())

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "PiScalar") -> "PiScalar":
        if not isinstance(other, PiScalar):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return PiScalar(out)

    def __sub__(self, other: "PiScalar") -> "PiScalar":
        if not isinstance(other, PiScalar):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, Fraction(0)) - c
        return PiScalar(out)

    def __neg__(self) -> "PiScalar":
        return PiScalar({k: -c for k, c in self._terms.items()})

    def __mul__(self, other: "PiScalar | RationalLike") -> "PiScalar":
        if isinstance(other, PiScalar):
            out: dict[int, Fraction] = {}
            for k1, c1 in self._terms.items():
                for k2, c2 in other._terms.items():
                    k = k1 + k2
                    out[k] = out.get(k, Fraction(0)) + c1 * c2
            return PiScalar(out)
        if isinstance(other, (int, Fraction)):
            return PiScalar({k: c * other for k, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: "PiScalar | RationalLike") -> "PiScalar":
        """Division by a rational or by a pi-monomial PiScalar.

        Localization only ever divides by point Euler classes, which are
        pi-monomials; mixed-grade divisors are rejected.
        """
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return PiScalar({k: c / other for k, c in self._terms.items()})
        if isinstance(other, PiScalar):
            g = other.single_grade()
            if g is None:
                raise ValueError(f"cannot divide by mixed-grade scalar {other}")
            k0, c0 = g
            if c0 == 0:
                raise ZeroDivisionError("division by zero")
            return PiScalar({k - k0: c / c0 for k, c in self._terms.items()})
        return NotImplemented

    def inverse(self) -> "PiScalar":
        g = self.single_grade()
        if g is None:
            raise ValueError(f"cannot invert mixed-grade scalar {self}")
        k, c = g
        if c == 0:
            raise ZeroDivisionError("inverse of zero")
        return PiScalar({-k: 1 / c})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PiScalar):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == PiScalar.of(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- rendering ----------------------------------------------------------

    def __str__(self) -> str:
        return render_pi_scalar(self)

    def __repr__(self) -> str:
        return f"PiScalar({self})"


def render_pi_scalar(x: PiScalar) -> str:
    """Canonical exact string: terms in descending pi-power, 'p/q*pi^k' each.

    Examples: '4*pi', '-4/3*pi^2', '2*pi^3 - 1/2', '0'.  Unit coefficients
    print as bare 'pi^k'.
    """
    if x.is_zero():
        return "0"
    parts: list[str] = []
    for k in sorted(x.terms, reverse=True):
        c = x.terms[k]
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            power = "pi" if k == 1 else f"pi^{k}"
            body = power if mag == 1 else f"{mag}*{power}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def _as_pi(value: "PiScalar | RationalLike") -> PiScalar:
    if isinstance(value, PiScalar):
        return value
    return PiScalar.of(value)


# ---------------------------------------------------------------------------
# LinForm
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinForm:
    """An affine-linear function  constant + sum_i coeffs[i] * a_i  of the
    equivariant parameters, with PiScalar values."""

    constant: PiScalar
    coeffs: tuple[PiScalar, ...]

    @classmethod
    def zero(cls, m: int) -> "LinForm":
        return cls(PiScalar.zero(), tuple(PiScalar.zero() for _ in range(m)))

    @classmethod
    def from_vector(cls, vec: Sequence[RationalLike],
                    constant: "PiScalar | RationalLike" = 0) -> "LinForm":
        return cls(_as_pi(constant), tuple(PiScalar.of(v) for v in vec))

    @classmethod
    def axis(cls, m: int, i: int, scale: "PiScalar | RationalLike" = 1) -> "LinForm":
        coeffs = [PiScalar.zero()] * m
        coeffs[i] = _as_pi(scale)
        return cls(PiScalar.zero(), tuple(coeffs))

    @property
    def m(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "LinForm") -> "LinForm":
        if len(self.coeffs) != len(other.coeffs):
            raise ValueError("parameter count mismatch")
        return LinForm(self.constant + other.constant,
                       tuple(c + d for c, d in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "LinForm":
        return LinForm(-self.constant, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "LinForm") -> "LinForm":
        return self + (-other)

    def scale(self, s: "PiScalar | RationalLike") -> "LinForm":
        s = _as_pi(s)
        return LinForm(self.constant * s, tuple(c * s for c in self.coeffs))

    def __call__(self, a: Sequence[RationalLike]) -> PiScalar:
        if len(a) != len(self.coeffs):
            raise ValueError("parameter count mismatch")
        out = self.constant
        for c, ai in zip(self.coeffs, a):
            out = out + c * Fraction(ai)
        return out

    def gradient(self, direction: Sequence[RationalLike]) -> PiScalar:
        """The purely linear part evaluated on a direction vector."""
        out = PiScalar.zero()
        for c, gi in zip(self.coeffs, direction):
            out = out + c * Fraction(gi)
        return out


# ---------------------------------------------------------------------------
# LaurentSeries
# ---------------------------------------------------------------------------

class LaurentSeries:
    """Truncated Laurent series sum_k c_k t^k with PiScalar coefficients.

    `trunc` is the largest order that is represented; orders above it are
    unknown and silently dropped by arithmetic (both operands' truncation
    orders are honored).  Orders below `floor` may never carry a nonzero
    coefficient — a pole deeper than any point Euler class can produce means
    the computation is wrong, and construction fails fast.
    """

    __slots__ = ("_coeffs", "trunc", "floor")

    def __init__(self, coeffs: Mapping[int, PiScalar], trunc: int,
                 floor: int | None = None):
        self.trunc = int(trunc)
        self.floor = floor
        clean: dict[int, PiScalar] = {}
        for k, c in coeffs.items():
            k = int(k)
            if k > self.trunc or c.is_zero():
                continue
            if floor is not None and k < floor:
                raise NegativePole(
                    f"coefficient at order {k} below the pole floor {floor}")
            clean[k] = c
        self._coeffs = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c: "PiScalar | RationalLike", trunc: int) -> "LaurentSeries":
        return cls({0: _as_pi(c)}, trunc)

    @classmethod
    def linear(cls, c0: "PiScalar | RationalLike", c1: "PiScalar | RationalLike",
               trunc: int) -> "LaurentSeries":
        """The polynomial c0 + c1*t."""
        return cls({0: _as_pi(c0), 1: _as_pi(c1)}, trunc)

    @classmethod
    def inverse_linear(cls, c0: RationalLike, c1: RationalLike,
                       trunc: int) -> "LaurentSeries":
        """(c0 + c1*t)^-1 as a Laurent series up to order `trunc`.

        Rational coefficients suffice: the only series ever inverted are
        products of weight pairings <w, a(t)>, which are rational-linear in t.
        """
        c0 = Fraction(c0)
        c1 = Fraction(c1)
        if c0 == 0:
            if c1 == 0:
                raise ZeroDivisionError("inverse of the zero polynomial")
            # 1/(c1 t) = (1/c1) t^-1
            return cls({-1: PiScalar.of(1 / c1)}, trunc)
        # 1/(c0 (1 + (c1/c0) t)) = (1/c0) sum_j (-(c1/c0))^j t^j
        ratio = -c1 / c0
        coeffs: dict[int, PiScalar] = {}
        power = Fraction(1)
        for j in range(0, trunc + 1):
            coeffs[j] = PiScalar.of(power / c0)
            power *= ratio
        return cls(coeffs, trunc)

    # -- queries ------------------------------------------------------------

    def coefficient(self, k: int) -> PiScalar:
        return self._coeffs.get(k, PiScalar.zero())

    @property
    def coeffs(self) -> dict[int, PiScalar]:
        return dict(self._coeffs)

    def lowest_order(self) -> int | None:
        """Smallest order with nonzero coefficient (None for the zero series)."""
        return min(self._coeffs) if self._coeffs else None

    def is_zero(self) -> bool:
        return not self._coeffs

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        trunc = min(self.trunc, other.trunc)
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, PiScalar.zero()) + c
        return LaurentSeries(out, trunc)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + other.scale(-1)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        trunc = min(self.trunc, other.trunc)
        out: dict[int, PiScalar] = {}
        for k1, c1 in self._coeffs.items():
            for k2, c2 in other._coeffs.items():
                k = k1 + k2
                if k > trunc:
                    continue
                out[k] = out.get(k, PiScalar.zero()) + c1 * c2
        return LaurentSeries(out, trunc)

    def scale(self, s: "PiScalar | RationalLike") -> "LaurentSeries":
        s = _as_pi(s)
        return LaurentSeries({k: c * s for k, c in self._coeffs.items()}, self.trunc)

    def shift(self, j: int) -> "LaurentSeries":
        """Multiply by t^j (j may be negative: exact cancellation of poles)."""
        return LaurentSeries({k + j: c for k, c in self._coeffs.items()},
                             self.trunc + j)

    def divide_by_monomial(self, c: "PiScalar | RationalLike", j: int) -> "LaurentSeries":
        """Divide by c * t^j."""
        c = _as_pi(c)
        return self.shift(-j).scale(c.inverse())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __repr__(self) -> str:
        if not self._coeffs:
            return "LaurentSeries(0)"
        body = " + ".join(f"({self._coeffs[k]})*t^{k}"
                          for k in sorted(self._coeffs))
        return f"LaurentSeries({body}; O(t^{self.trunc + 1}))"


def laurent_constant_term(s: LaurentSeries) -> PiScalar:
    """The order-0 coefficient of a series with no pole.

    Raises NegativePole if any negative order carries a nonzero coefficient —
    for a grouped fixed-point sum this signals that the grouping does not
    follow the fixed components of the circle action.
    """
    low = s.lowest_order()
    if low is not None and low < 0:
        raise NegativePole(
            f"nonzero coefficient at order {low}: {s.coefficient(low)}")
    return s.coefficient(0)


# ---------------------------------------------------------------------------
# MultiPoly
# ---------------------------------------------------------------------------

Exponent = tuple[int, ...]


class MultiPoly:
    """Sparse polynomial in a_1..a_m with PiScalar coefficients."""

    __slots__ = ("_terms", "m")

    def __init__(self, m: int, terms: Mapping[Exponent, PiScalar] | None = None):
        self.m = int(m)
        clean: dict[Exponent, PiScalar] = {}
        if terms:
            for mono, c in terms.items():
                mono = tuple(int(e) for e in mono)
                if len(mono) != self.m:
                    raise ValueError("exponent length mismatch")
                if not c.is_zero():
                    clean[mono] = c
        self._terms = clean

    @classmethod
    def constant(cls, m: int, c: "PiScalar | RationalLike") -> "MultiPoly":
        return cls(m, {(0,) * m: _as_pi(c)})

    @classmethod
    def linear(cls, constant: PiScalar, coeffs: Sequence[PiScalar]) -> "MultiPoly":
        m = len(coeffs)
        terms: dict[Exponent, PiScalar] = {(0,) * m: constant}
        for i, c in enumerate(coeffs):
            mono = tuple(1 if j == i else 0 for j in range(m))
            terms[mono] = c
        return cls(m, terms)

    @property
    def terms(self) -> dict[Exponent, PiScalar]:
        return dict(self._terms)

    def degree(self) -> int:
        return max((sum(mono) for mono in self._terms), default=0)

    def constant_term(self) -> PiScalar:
        return self._terms.get((0,) * self.m, PiScalar.zero())

    def linear_coefficient(self, i: int) -> PiScalar:
        mono = tuple(1 if j == i else 0 for j in range(self.m))
        return self._terms.get(mono, PiScalar.zero())

    def linear_part(self) -> LinForm:
        return LinForm(self.constant_term(),
                       tuple(self.linear_coefficient(i) for i in range(self.m)))

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        if self.m != other.m:
            raise ValueError("variable count mismatch")
        out = dict(self._terms)
        for mono, c in other._terms.items():
            out[mono] = out.get(mono, PiScalar.zero()) + c
        return MultiPoly(self.m, out)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + other.scale(-1)

    def scale(self, s: "PiScalar | RationalLike") -> "MultiPoly":
        s = _as_pi(s)
        return MultiPoly(self.m, {mono: c * s for mono, c in self._terms.items()})

    def __call__(self, a: Sequence[RationalLike]) -> PiScalar:
        if len(a) != self.m:
            raise ValueError("parameter count mismatch")
        vals = [Fraction(x) for x in a]
        out = PiScalar.zero()
        for mono, c in self._terms.items():
            factor = Fraction(1)
            for e, v in zip(mono, vals):
                if e:
                    factor *= v ** e
            out = out + c * factor
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.m == other.m and self._terms == other._terms

    def __repr__(self) -> str:
        if not self._terms:
            return "MultiPoly(0)"
        def mono_str(mono: Exponent) -> str:
            factors = [f"a{i + 1}" + (f"^{e}" if e > 1 else "")
                       for i, e in enumerate(mono) if e]
            return "*".join(factors) if factors else "1"
        body = " + ".join(f"({c})*{mono_str(mono)}"
                          for mono, c in sorted(self._terms.items()))
        return f"MultiPoly({body})"


# ---------------------------------------------------------------------------
# Polynomial reconstruction from exact samples
# ---------------------------------------------------------------------------

def _solve_linear_system(rows: list[list[Fraction]],
                         rhs: list[PiScalar]) -> list[PiScalar]:
    """Solve A x = b exactly (A rational, b PiScalar) by Gaussian elimination.

    Raises InconsistentSamples when A is singular — for reconstruction this
    means the sample points were not affinely independent.
    """
    n = len(rows)
    a = [list(r) for r in rows]
    b = list(rhs)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise InconsistentSamples("sample points are not affinely independent")
        a[col], a[pivot] = a[pivot], a[col]
        b[col], b[pivot] = b[pivot], b[col]
        for r in range(n):
            if r == col or a[r][col] == 0:
                continue
            factor = a[r][col] / a[col][col]
            a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
            b[r] = b[r] - b[col] * factor
    return [b[i] / a[i][i] for i in range(n)]


def reconstruct_polynomial(samples: Sequence[tuple[Sequence[RationalLike], PiScalar]],
                           degree: int) -> MultiPoly:
    """Recover the unique polynomial of the stated degree (0 or 1) from exact
    point evaluations, verifying the fit on every sample not used for it.

    degree 0 needs at least 3 samples; degree 1 needs at least m + 2 samples
    at affinely independent points.  A held-out sample that disagrees raises
    InconsistentSamples: the evaluations did not come from a polynomial of the
    claimed degree.
    """
    if degree not in (0, 1):
        raise ValueError("only degrees 0 and 1 are supported")
    if not samples:
        raise ValueError("no samples")
    pts = [tuple(Fraction(x) for x in a) for a, _ in samples]
    vals = [v for _, v in samples]
    m = len(pts[0])
    if any(len(p) != m for p in pts):
        raise ValueError("inconsistent sample dimensions")

    if degree == 0:
        if len(samples) < 3:
            raise ValueError("degree 0 needs at least 3 samples")
        fit = MultiPoly.constant(m, vals[0])
    else:
        if len(samples) < m + 2:
            raise ValueError(f"degree 1 needs at least {m + 2} samples")
        rows = [[Fraction(1), *p] for p in pts[: m + 1]]
        solution = _solve_linear_system(rows, vals[: m + 1])
        fit = MultiPoly.linear(solution[0], solution[1:])

    for p, v in zip(pts, vals):
        if fit(p) != v:
            raise InconsistentSamples(
                f"held-out sample at {tuple(map(str, p))} disagrees: "
                f"expected {fit(p)}, got {v}")
    return fit
