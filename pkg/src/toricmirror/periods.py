"""Single-logarithm period series and the differential operators that test them.

The complex-structure moduli of the mirror of a toric Calabi-Yau carry an
A-hypergeometric (GKZ) system determined by the charge matrix Q.  Near the
large complex structure point its solution space contains, besides the
constant, l independent solutions with a single logarithm,

    Phi_a(qc) = -log(qc_a) - f_a(qc),        a = 1..l,

whose exponentials define the mirror map q_a = qc_a * exp(f_a).  The series
f_a are produced here by the Frobenius method applied to the Gamma-series
solution: differentiate the Gamma-series in the exponent direction of row a
and read off coefficients at the integral points of the charge lattice.

For a multi-index d >= 0 put ell_i(d) = sum_a Q^a_i d_a (one value per ray
column i).  The Calabi-Yau condition sum_i Q^a_i = 0 forces
sum_i ell_i(d) = 0, so for d != 0 at least one column is negative, and the
coefficient of qc^d in f_a is

    0                                   if two or more columns are negative,
    Q^a_i* (-1)^(k-1) (k-1)! / prod_{i != i*} ell_i(d)!
                                        if exactly one column i* is negative,
                                        with k = -ell_i*(d),
    0                                   if none is (only d = 0).

The middle case is the derivative of 1/Gamma at the non-positive integer
1 - k, where 1/Gamma has a simple zero with slope (-1)^(k-1) (k-1)!; when two
columns sit at poles of Gamma the product of reciprocals has a double zero and
the derivative vanishes, which is the first case.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import (
    NegativeIndex,
    OperatorParseError,
    VarCountMismatch,
)
from .pseries import LogSeries, MultiSeries, indices_up_to
from .toric import ChargeMatrix


@dataclass(frozen=True)
class LogPeriod:
    """The single-logarithm solution Phi_a = -log(qc_a) - f_a.

    `index` is the 1-based row label a of the charge matrix; `f` has zero
    constant term.
    """

    index: int
    f: MultiSeries


def gamma_log_coefficient(charge: ChargeMatrix, d, a: int) -> Fraction:
    """Coefficient of qc^d in f_a, by the single-negative-column rule above.

    `d` is a multi-index over the l curve classes; `a` is the 1-based row.
    """
    d = tuple(int(x) for x in d)
    if len(d) != charge.l:
        raise VarCountMismatch(f"index {d} has wrong arity for l={charge.l}")
    if any(x < 0 for x in d):
        raise NegativeIndex(f"multi-index {d} has a negative entry")
    if not 1 <= a <= charge.l:
        raise VarCountMismatch(f"row label {a} out of range 1..{charge.l}")
    m = charge.num_rays
    ell = [sum(charge.entries[r][i] * d[r] for r in range(charge.l))
           for i in range(m)]
    negative = [i for i, value in enumerate(ell) if value < 0]
    if len(negative) != 1:
        return Fraction(0)
    i_star = negative[0]
    k = -ell[i_star]
    numerator = charge.entries[a - 1][i_star] * (-1) ** (k - 1) * factorial(k - 1)
    denominator = 1
    for i, value in enumerate(ell):
        if i != i_star:
            denominator *= factorial(value)
    return Fraction(numerator, denominator)


def single_log_periods(charge: ChargeMatrix, cutoff: int) -> list[LogPeriod]:
    """All l single-logarithm periods, with f_a truncated at total degree `cutoff`."""
    l = charge.l
    periods = []
    for a in range(1, l + 1):
        terms = {}
        for d in indices_up_to(l, cutoff):
            if sum(d) == 0:
                continue
            coeff = gamma_log_coefficient(charge, d, a)
            if coeff != 0:
                terms[d] = coeff
        periods.append(LogPeriod(index=a, f=MultiSeries(l, cutoff, terms)))
    return periods


def mirror_map_series(periods: list[LogPeriod]) -> list[MultiSeries]:
    """Exponential factors exp(f_a) of the mirror map q_a = qc_a * exp(f_a)."""
    return [period.f.exp() for period in periods]


def log_solution(period: LogPeriod, num_vars: int, cutoff: int) -> LogSeries:
    """Phi_a = -log(qc_a) - f_a as a LogSeries (for operator application)."""
    minus_one = MultiSeries.constant(-1, num_vars, cutoff)
    zero = MultiSeries.zero(num_vars, cutoff)
    parts = [minus_one if b == period.index - 1 else zero for b in range(num_vars)]
    return LogSeries(-period.f.truncate(cutoff), parts)


# ---------------------------------------------------------------------------
# Differential operators
# ---------------------------------------------------------------------------

def euler_derivative(series: MultiSeries, b: int) -> MultiSeries:
    """theta_b s = q_b d(s)/d(q_b): weights each term by its b-th exponent."""
    return MultiSeries(
        series.num_vars, series.cutoff,
        {index: coeff * index[b] for index, coeff in series.terms.items()})


def monomial_shift(series: MultiSeries, exponent) -> MultiSeries:
    """Multiply by q^exponent, discarding terms pushed beyond the cutoff."""
    exponent = tuple(exponent)
    return MultiSeries(
        series.num_vars, series.cutoff,
        {tuple(a + b for a, b in zip(index, exponent)): coeff
         for index, coeff in series.terms.items()
         if sum(index) + sum(exponent) <= series.cutoff})


@dataclass(frozen=True)
class DiffOperator:
    """A polynomial in the Euler operators theta_b with monomial coefficients.

    Stored as expanded terms (coeff, qexp, texp) acting as
    coeff * q^qexp * prod_b theta_b^texp[b].  In every term the monomial acts
    on the left of the theta product; operator literals are normalized to this
    convention when parsed, so `3*q1*T1^2` and any rearrangement of its factors
    denote the same operator.
    """

    num_vars: int
    terms: tuple[tuple[Fraction, tuple[int, ...], tuple[int, ...]], ...]

    def apply(self, phi: LogSeries) -> LogSeries:
        """Apply the operator to a log-augmented series.

        theta_b acts on s0 + sum_c s_c log(q_c) by the product rule:
        the plain part picks up s_b, the log coefficients differentiate.
        """
        if phi.num_vars != self.num_vars:
            raise VarCountMismatch(
                f"operator in {self.num_vars} variables applied to series in {phi.num_vars}")
        zero = MultiSeries.zero(phi.num_vars, phi.cutoff)
        total = LogSeries(zero, [zero] * phi.num_vars)
        for coeff, qexp, texp in self.terms:
            current = phi
            for b, power in enumerate(texp):
                for _ in range(power):
                    plain = euler_derivative(current.plain, b) + current.log_parts[b]
                    logs = [euler_derivative(part, b) for part in current.log_parts]
                    current = LogSeries(plain, logs)
            shifted = LogSeries(
                monomial_shift(current.plain, qexp) * coeff,
                [monomial_shift(part, qexp) * coeff for part in current.log_parts])
            total = total + shifted
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for coeff, qexp, texp in sorted(self.terms, key=lambda t: (t[1], t[2])):
            factors = []
            for i, e in enumerate(qexp):
                name = f"q{i + 1}"
                factors.append(name if e == 1 else f"{name}^{e}" if e else "")
            for i, e in enumerate(texp):
                name = f"T{i + 1}"
                factors.append(name if e == 1 else f"{name}^{e}" if e else "")
            factors = [f for f in factors if f]
            magnitude = abs(coeff)
            if not factors or magnitude != 1:
                factors.insert(0, str(magnitude))
            body = "*".join(factors)
            chunks.append(("- " if coeff < 0 else "+ ") + body if chunks
                          else ("-" + body if coeff < 0 else body))
        return " ".join(chunks)

    @classmethod
    def parse(cls, text: str, num_vars: int) -> "DiffOperator":
        """Parse an operator literal like `T1^3 + 3*q1*T1*(3*T1 + 1)*(3*T1 + 2)`.

        Grammar: sums/differences of products of powers of atoms, where an
        atom is an integer, a rational `p/q`, a variable `qk`, an Euler symbol
        `Tk`, or a parenthesized expression.  For a single curve class the
        bare names `q` and `T` are accepted as `q1` / `T1`.
        """
        poly = _OperatorParser(text, num_vars).parse()
        terms = tuple(
            (coeff, qexp, texp)
            for (qexp, texp), coeff in sorted(poly.items())
            if coeff != 0)
        return cls(num_vars=num_vars, terms=terms)


apply_operator = DiffOperator.apply  # operator application as a free function


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z]+\d*)|([()+\-*/^]))")


class _OperatorParser:
    """Recursive-descent parser for operator literals.

    Produces a dict {(qexp, texp): Fraction}; the q/theta ordering convention
    of :class:`DiffOperator` makes the expansion well defined.
    """

    def __init__(self, text: str, num_vars: int):
        self.text = text
        self.num_vars = num_vars
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str):
        tokens = []
        pos = 0
        while pos < len(text):
            match = _TOKEN_RE.match(text, pos)
            if not match or match.end() == match.start():
                stripped = text[pos:].strip()
                if not stripped:
                    break
                raise OperatorParseError(f"unexpected input at: {stripped[:20]!r}")
            if match.group(1):
                tokens.append(("num", int(match.group(1))))
            elif match.group(2):
                tokens.append(("name", match.group(2)))
            else:
                tokens.append(("sym", match.group(3)))
            pos = match.end()
        return tokens

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def _next(self):
        token = self._peek()
        self.pos += 1
        return token

    def parse(self):
        poly = self._expr()
        if self.pos != len(self.tokens):
            raise OperatorParseError(f"trailing tokens at position {self.pos}")
        return poly

    # polynomial helpers ----------------------------------------------------

    def _const(self, value) -> dict:
        zero = ((0,) * self.num_vars, (0,) * self.num_vars)
        return {zero: Fraction(value)}

    def _add(self, a, b, sign=1):
        out = dict(a)
        for key, coeff in b.items():
            value = out.get(key, Fraction(0)) + sign * coeff
            if value == 0:
                out.pop(key, None)
            else:
                out[key] = value
        return out

    def _mul(self, a, b):
        out: dict = {}
        for (qa, ta), ca in a.items():
            for (qb, tb), cb in b.items():
                key = (tuple(x + y for x, y in zip(qa, qb)),
                       tuple(x + y for x, y in zip(ta, tb)))
                value = out.get(key, Fraction(0)) + ca * cb
                if value == 0:
                    out.pop(key, None)
                else:
                    out[key] = value
        return out

    # grammar ---------------------------------------------------------------

    def _expr(self):
        sign = 1
        kind, value = self._peek()
        if kind == "sym" and value in "+-":
            self._next()
            sign = -1 if value == "-" else 1
        poly = self._term()
        if sign < 0:
            poly = self._add(self._const(0), poly, sign=-1)
        while True:
            kind, value = self._peek()
            if kind == "sym" and value in "+-":
                self._next()
                poly = self._add(poly, self._term(), sign=-1 if value == "-" else 1)
            else:
                return poly

    def _term(self):
        poly = self._factor()
        while True:
            kind, value = self._peek()
            if kind == "sym" and value == "*":
                self._next()
                poly = self._mul(poly, self._factor())
            elif kind == "sym" and value == "/":
                self._next()
                divisor = self._factor()
                if len(divisor) != 1:
                    raise OperatorParseError("can only divide by a constant")
                (key, coeff), = divisor.items()
                if any(key[0]) or any(key[1]) or coeff == 0:
                    raise OperatorParseError("can only divide by a non-zero constant")
                poly = {k: c / coeff for k, c in poly.items()}
            else:
                return poly

    def _factor(self):
        base = self._atom()
        kind, value = self._peek()
        if kind == "sym" and value == "^":
            self._next()
            kind, exponent = self._next()
            if kind != "num":
                raise OperatorParseError("exponent must be a non-negative integer")
            poly = self._const(1)
            for _ in range(exponent):
                poly = self._mul(poly, base)
            return poly
        return base

    def _atom(self):
        kind, value = self._next()
        if kind == "num":
            return self._const(value)
        if kind == "name":
            return self._variable(value)
        if kind == "sym" and value == "(":
            poly = self._expr()
            kind, value = self._next()
            if (kind, value) != ("sym", ")"):
                raise OperatorParseError("missing closing parenthesis")
            return poly
        if kind == "sym" and value == "-":
            return self._add(self._const(0), self._atom(), sign=-1)
        raise OperatorParseError(f"unexpected token {value!r}")

    def _variable(self, name: str):
        match = re.fullmatch(r"([qT])(\d*)", name)
        if not match:
            raise OperatorParseError(f"unknown symbol {name!r}")
        label, digits = match.groups()
        if digits:
            index = int(digits) - 1
        elif self.num_vars == 1:
            index = 0
        else:
            raise OperatorParseError(
                f"bare {label!r} is ambiguous with {self.num_vars} variables")
        if not 0 <= index < self.num_vars:
            raise OperatorParseError(f"{name!r} out of range for {self.num_vars} variables")
        qexp = [0] * self.num_vars
        texp = [0] * self.num_vars
        if label == "q":
            qexp[index] = 1
        else:
            texp[index] = 1
        return {(tuple(qexp), tuple(texp)): Fraction(1)}
