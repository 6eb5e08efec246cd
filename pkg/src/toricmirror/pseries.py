"""Exact sparse truncated multivariate formal power series.

Series live in Q[[q_1, ..., q_l]] truncated at a fixed *total* degree: a
series keeps exactly the coefficients of the monomials q^d with
|d| = d_1 + ... + d_l <= cutoff, as arbitrary-precision rationals.  Nothing in
this module (or package) ever rounds: equality of series is equality of exact
coefficient maps.

Design rules enforced throughout:

* two series can be combined only if they agree on variable count *and*
  cutoff -- a mismatch raises instead of silently truncating;
* zero coefficients are never stored, so structural equality coincides with
  mathematical equality of truncations;
* all values are immutable after construction.

Besides ring operations the module provides the transcendental operations
exp / log(1+s) / (1+s)^e for rational e, formal composition, and the graded
fixed-point inversion of maps of the shape q_a = qc_a * exp(f_a(qc)) -- the
shape in which mirror maps arrive.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .errors import (
    CutoffMismatch,
    NegativeIndex,
    NonUnitConstantTerm,
    NonzeroConstantTerm,
    VarCountMismatch,
)

#: Exact rational scalar type used everywhere in the package.
Rational = Fraction

Index = tuple[int, ...]


def grlex_key(index: Index) -> tuple[int, Index]:
    """Sort key for graded-lexicographic monomial order (q1 before q2 within
    a degree, so series print the way they are usually written)."""
    return (sum(index), tuple(-e for e in index))


def format_rational(value: Rational) -> str:
    """Serialize a rational exactly, as 'p' or 'p/q'."""
    return str(Fraction(value))


def parse_rational(text) -> Rational:
    """Parse an int, or a 'p' / 'p/q' string, into an exact rational."""
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text)
    raise ValueError(f"not an exact rational literal: {text!r}")


class MultiSeries:
    """A truncated formal power series with exact rational coefficients.

    Attributes:
        num_vars: number of variables l.
        cutoff: maximal retained total degree T.
        terms: mapping from multi-index d (tuple of l non-negative ints with
            |d| <= T) to a non-zero Fraction.
    """

    __slots__ = ("num_vars", "cutoff", "terms")

    def __init__(self, num_vars: int, cutoff: int, terms=None):
        if num_vars < 0:
            raise ValueError("num_vars must be >= 0")
        if cutoff < 0:
            raise ValueError("cutoff must be >= 0")
        clean: dict[Index, Fraction] = {}
        for index, coeff in (terms or {}).items():
            index = tuple(int(e) for e in index)
            if len(index) != num_vars:
                raise VarCountMismatch(f"index {index} has wrong arity for {num_vars} variables")
            if any(e < 0 for e in index):
                raise NegativeIndex(f"negative exponent in {index}")
            value = Fraction(coeff)
            if value == 0 or sum(index) > cutoff:
                continue
            clean[index] = value
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "cutoff", cutoff)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MultiSeries is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, num_vars: int, cutoff: int) -> "MultiSeries":
        return cls(num_vars, cutoff, {})

    @classmethod
    def constant(cls, value, num_vars: int, cutoff: int) -> "MultiSeries":
        return cls(num_vars, cutoff, {(0,) * num_vars: Fraction(value)})

    @classmethod
    def one(cls, num_vars: int, cutoff: int) -> "MultiSeries":
        return cls.constant(1, num_vars, cutoff)

    @classmethod
    def variable(cls, i: int, num_vars: int, cutoff: int) -> "MultiSeries":
        if not 0 <= i < num_vars:
            raise VarCountMismatch(f"variable index {i} out of range for {num_vars} variables")
        index = tuple(1 if j == i else 0 for j in range(num_vars))
        return cls(num_vars, cutoff, {index: Fraction(1)})

    @classmethod
    def monomial(cls, coeff, index: Index, num_vars: int, cutoff: int) -> "MultiSeries":
        return cls(num_vars, cutoff, {tuple(index): Fraction(coeff)})

    # -- basic queries -----------------------------------------------------

    def coefficient(self, index: Index) -> Fraction:
        return self.terms.get(tuple(index), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.num_vars, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def graded_items(self):
        """Terms in graded-lexicographic order (the canonical order)."""
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return (
            self.num_vars == other.num_vars
            and self.cutoff == other.cutoff
            and self.terms == other.terms
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"MultiSeries({self.to_str()!r}, vars={self.num_vars}, cutoff={self.cutoff})"

    # -- ring structure ----------------------------------------------------

    def _check_compatible(self, other: "MultiSeries") -> None:
        if self.num_vars != other.num_vars:
            raise VarCountMismatch(
                f"{self.num_vars} != {other.num_vars} variables")
        if self.cutoff != other.cutoff:
            raise CutoffMismatch(f"{self.cutoff} != {other.cutoff}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiSeries.constant(other, self.num_vars, self.cutoff)
        if not isinstance(other, MultiSeries):
            return NotImplemented
        self._check_compatible(other)
        terms = dict(self.terms)
        for index, coeff in other.terms.items():
            value = terms.get(index, Fraction(0)) + coeff
            if value == 0:
                terms.pop(index, None)
            else:
                terms[index] = value
        return MultiSeries(self.num_vars, self.cutoff, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiSeries(
            self.num_vars, self.cutoff,
            {index: -coeff for index, coeff in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiSeries.constant(other, self.num_vars, self.cutoff)
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            scalar = Fraction(other)
            if scalar == 0:
                return MultiSeries.zero(self.num_vars, self.cutoff)
            return MultiSeries(
                self.num_vars, self.cutoff,
                {index: coeff * scalar for index, coeff in self.terms.items()})
        if not isinstance(other, MultiSeries):
            return NotImplemented
        self._check_compatible(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        result: dict[Index, Fraction] = {}
        cutoff = self.cutoff
        for ia, ca in a.items():
            da = sum(ia)
            for ib, cb in b.items():
                if da + sum(ib) > cutoff:
                    continue
                index = tuple(x + y for x, y in zip(ia, ib))
                value = result.get(index, Fraction(0)) + ca * cb
                if value == 0:
                    result.pop(index, None)
                else:
                    result[index] = value
        return MultiSeries(self.num_vars, self.cutoff, result)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (Fraction(1) / Fraction(scalar))

    def __pow__(self, exponent: int):
        """Integer power by repeated multiplication (negative via reciprocal)."""
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.reciprocal() ** (-exponent)
        result = MultiSeries.one(self.num_vars, self.cutoff)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def truncate(self, cutoff: int) -> "MultiSeries":
        """Lower the cutoff (raising it would invent unknown coefficients)."""
        if cutoff > self.cutoff:
            raise CutoffMismatch(
                f"cannot extend a series truncated at {self.cutoff} to {cutoff}")
        return MultiSeries(self.num_vars, cutoff, self.terms)

    # -- transcendental operations ----------------------------------------

    def exp(self) -> "MultiSeries":
        """exp(s) for s with zero constant term: sum_{k<=T} s^k / k!."""
        if self.constant_term != 0:
            raise NonzeroConstantTerm("exp needs vanishing constant term")
        result = MultiSeries.one(self.num_vars, self.cutoff)
        power = MultiSeries.one(self.num_vars, self.cutoff)
        for k in range(1, self.cutoff + 1):
            power = power * self
            if power.is_zero():
                break
            result = result + power / factorial(k)
        return result

    def log1p(self) -> "MultiSeries":
        """log(1+s) for s with zero constant term (Mercator series)."""
        if self.constant_term != 0:
            raise NonzeroConstantTerm("log1p needs vanishing constant term")
        result = MultiSeries.zero(self.num_vars, self.cutoff)
        power = MultiSeries.one(self.num_vars, self.cutoff)
        for k in range(1, self.cutoff + 1):
            power = power * self
            if power.is_zero():
                break
            result = result + power * Fraction((-1) ** (k + 1), k)
        return result

    def pow_rational(self, exponent) -> "MultiSeries":
        """(1+u)^e for self = 1+u and rational e, via exp(e*log(1+u)).

        For integer e this agrees with repeated multiplication; for fractional
        e it picks the branch with constant term 1 (the only formal branch).
        """
        if self.constant_term != 1:
            raise NonUnitConstantTerm("pow_rational needs constant term 1")
        e = Fraction(exponent)
        if e == 0:
            return MultiSeries.one(self.num_vars, self.cutoff)
        u = self - 1
        return (u.log1p() * e).exp()

    def reciprocal(self) -> "MultiSeries":
        """1/s for s with unit constant term (scales to constant term 1 first)."""
        c = self.constant_term
        if c == 0:
            raise NonUnitConstantTerm("reciprocal needs non-zero constant term")
        return (self / c).pow_rational(-1) / c

    # -- composition and map inversion --------------------------------------

    def substitute(self, args: list["MultiSeries"]) -> "MultiSeries":
        """Formal composition s(args[0], ..., args[l-1]), truncated at T.

        Every argument must have zero constant term (so the composition is
        well defined on truncations) and the same cutoff as `self`.
        """
        if len(args) != self.num_vars:
            raise VarCountMismatch(
                f"need {self.num_vars} arguments, got {len(args)}")
        if not args:
            return MultiSeries(0, self.cutoff, dict(self.terms))
        result_vars = args[0].num_vars
        for arg in args:
            if arg.num_vars != result_vars:
                raise VarCountMismatch("substitution arguments disagree on variables")
            if arg.cutoff != self.cutoff:
                raise CutoffMismatch("substitution arguments must share the cutoff")
            if arg.constant_term != 0:
                raise NonzeroConstantTerm("substitution needs arguments without constant term")
        powers: list[list[MultiSeries]] = [[MultiSeries.one(result_vars, self.cutoff)] for _ in args]
        result = MultiSeries.zero(result_vars, self.cutoff)
        for index, coeff in self.graded_items():
            term = MultiSeries.constant(coeff, result_vars, self.cutoff)
            for i, e in enumerate(index):
                while len(powers[i]) <= e:
                    powers[i].append(powers[i][-1] * args[i])
                if e:
                    term = term * powers[i][e]
            result = result + term
        return result

    # -- rendering / serialization ------------------------------------------

    def to_str(self, names=None) -> str:
        """Canonical plain-text form, terms in graded-lexicographic order."""
        names = names or default_variable_names(self.num_vars)
        if not self.terms:
            return "0"
        chunks: list[str] = []
        for index, coeff in self.graded_items():
            factors = []
            for name, e in zip(names, index):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            magnitude = abs(coeff)
            if not factors:
                body = format_rational(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([format_rational(magnitude)] + factors)
            if not chunks:
                chunks.append(body if coeff > 0 else f"-{body}")
            else:
                chunks.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(chunks)

    def to_latex(self, names=None) -> str:
        names = names or default_variable_names(self.num_vars, latex=True)
        if not self.terms:
            return "0"
        chunks: list[str] = []
        for index, coeff in self.graded_items():
            factors = []
            for name, e in zip(names, index):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{{{e}}}")
            magnitude = abs(coeff)
            mag = (f"\\tfrac{{{magnitude.numerator}}}{{{magnitude.denominator}}}"
                   if magnitude.denominator != 1 else str(magnitude.numerator))
            if not factors:
                body = mag
            elif magnitude == 1:
                body = " ".join(factors)
            else:
                body = " ".join([mag] + factors)
            if not chunks:
                chunks.append(body if coeff > 0 else f"-{body}")
            else:
                chunks.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(chunks)

    def to_document(self) -> dict:
        """Structured exact form: coefficients as 'p/q' strings."""
        return {
            "num_vars": self.num_vars,
            "cutoff": self.cutoff,
            "terms": [
                {"index": list(index), "coeff": format_rational(coeff)}
                for index, coeff in self.graded_items()
            ],
        }

    @classmethod
    def from_document(cls, doc: dict) -> "MultiSeries":
        terms = {tuple(t["index"]): parse_rational(t["coeff"]) for t in doc["terms"]}
        return cls(doc["num_vars"], doc["cutoff"], terms)


def default_variable_names(num_vars: int, base: str = "q", latex: bool = False) -> list[str]:
    """q for one variable, q1, q2, ... otherwise (q_1, ... in LaTeX)."""
    if num_vars == 1:
        return [base]
    if latex:
        return [f"{base}_{{{i + 1}}}" for i in range(num_vars)]
    return [f"{base}{i + 1}" for i in range(num_vars)]


def indices_up_to(num_vars: int, max_degree: int):
    """All multi-indices d >= 0 with |d| <= max_degree, in graded-lex order."""
    out: list[Index] = []
    for degree in range(max_degree + 1):
        out.extend(sorted(_indices_of_degree(num_vars, degree), key=grlex_key))
    return out


def _indices_of_degree(num_vars: int, degree: int):
    if num_vars == 0:
        return [()] if degree == 0 else []
    if num_vars == 1:
        return [(degree,)]
    result = []
    for first in range(degree + 1):
        for rest in _indices_of_degree(num_vars - 1, degree - first):
            result.append((first,) + rest)
    return result


class LogSeries:
    """A series with logarithmic parts: s_0 + sum_b s_b * log(q_b).

    All components share the variable count and cutoff.  These arise as
    solutions of regular-singular differential systems at a large complex
    structure point; Euler operators act on them componentwise plus a shift
    (theta_a picks up the coefficient series of log q_a).
    """

    __slots__ = ("plain", "log_parts")

    def __init__(self, plain: MultiSeries, log_parts):
        log_parts = list(log_parts)
        for part in log_parts:
            if part.num_vars != plain.num_vars:
                raise VarCountMismatch("log parts disagree with plain part on variables")
            if part.cutoff != plain.cutoff:
                raise CutoffMismatch("log parts disagree with plain part on cutoff")
        object.__setattr__(self, "plain", plain)
        object.__setattr__(self, "log_parts", tuple(log_parts))

    def __setattr__(self, name, value):
        raise AttributeError("LogSeries is immutable")

    @property
    def num_vars(self) -> int:
        return self.plain.num_vars

    @property
    def cutoff(self) -> int:
        return self.plain.cutoff

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogSeries):
            return NotImplemented
        return self.plain == other.plain and self.log_parts == other.log_parts

    __hash__ = None

    def is_zero(self) -> bool:
        return self.plain.is_zero() and all(part.is_zero() for part in self.log_parts)

    def __add__(self, other: "LogSeries") -> "LogSeries":
        return LogSeries(
            self.plain + other.plain,
            [a + b for a, b in zip(self.log_parts, other.log_parts)])

    def __sub__(self, other: "LogSeries") -> "LogSeries":
        return LogSeries(
            self.plain - other.plain,
            [a - b for a, b in zip(self.log_parts, other.log_parts)])

    def scale(self, value) -> "LogSeries":
        return LogSeries(self.plain * value, [p * value for p in self.log_parts])

    def __repr__(self) -> str:
        logs = ", ".join(p.to_str() for p in self.log_parts)
        return f"LogSeries(plain={self.plain.to_str()!r}, logs=[{logs}])"


def invert_map(components: list[MultiSeries]) -> list[MultiSeries]:
    """Invert the formal map q_a = qc_a * exp(f_a(qc)), a = 1..l.

    Input: the exponent series f_a (zero constant term, l variables each).
    Output: the series g_a with qc_a = q_a * exp(g_a(q)), characterized by the
    fixed point g = -f o (q * exp(g)).  Iterating the fixed-point map freezes
    the coefficients of total degree k after k rounds, so `cutoff` rounds give
    the exact truncated inverse; the loop exits early once stable.
    """
    l = len(components)
    if l == 0:
        return []
    cutoff = components[0].cutoff
    for f in components:
        if f.num_vars != l:
            raise VarCountMismatch(f"map component has {f.num_vars} variables, expected {l}")
        if f.cutoff != cutoff:
            raise CutoffMismatch("map components must share the cutoff")
        if f.constant_term != 0:
            raise NonzeroConstantTerm("map components must vanish at the origin")
    g = [MultiSeries.zero(l, cutoff) for _ in range(l)]
    for _ in range(cutoff):
        args = [MultiSeries.variable(a, l, cutoff) * g[a].exp() for a in range(l)]
        new_g = [-(f.substitute(args)) for f in components]
        if new_g == g:
            break
        g = new_g
    return g
