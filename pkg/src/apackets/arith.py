"""Exact arithmetic foundations.

Half-integers are stored as doubled integers, so all comparisons and sums
are integer arithmetic.  Local factors live in the rational function field
Q(u, t, c1, c2, ...) where q = u**2 (so q**x is a monomial in u for any
half-integer x), t stands for q**(-s), and the c-variables are symbolic
coefficients attached to unramified exponent pairs.  Unknown epsilon-factor
constants are carried as opaque tags with integer exponents; a value with
surviving tags cannot be evaluated.

Rational functions are kept in a multiplicative normal form
    coeff * monomial * prod(base_i ** e_i)
with each base a content-free polynomial whose leading coefficient is 1.
Products, quotients and powers never need polynomial gcd; sums expand to a
numerator/denominator pair which is reduced by exact trial division against
the tracked factor bases.  Equality is decided by cross multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class PoleAtOne(ArithmeticError):
    """The value has a pole at t = 1; `order` is the positive pole order."""

    def __init__(self, order):
        super().__init__(f"pole of order {order} at t = 1")
        self.order = order


class UnknownConstantResidue(ArithmeticError):
    """Abstract constant tags did not cancel, so no value can be produced."""


# ---------------------------------------------------------------------------
# half-integers


@dataclass(frozen=True, order=False)
class HalfInt:
    """An element of (1/2)Z, stored as twice its value."""

    twice: int

    @staticmethod
    def of(n):
        return HalfInt(2 * n)

    @staticmethod
    def halves(k):
        return HalfInt(k)

    @staticmethod
    def parse(text):
        text = text.strip()
        if text.endswith("/2"):
            return HalfInt(int(text[:-2]))
        return HalfInt(2 * int(text))

    @property
    def is_integer(self):
        return self.twice % 2 == 0

    def as_int(self):
        if not self.is_integer:
            raise ValueError(f"{self} is not an integer")
        return self.twice // 2

    def congruent_mod_1(self, other):
        return (self.twice - other.twice) % 2 == 0

    def __add__(self, other):
        return HalfInt(self.twice + other.twice)

    def __sub__(self, other):
        return HalfInt(self.twice - other.twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __abs__(self):
        return HalfInt(abs(self.twice))

    def __lt__(self, other):
        return self.twice < other.twice

    def __le__(self, other):
        return self.twice <= other.twice

    def __gt__(self, other):
        return self.twice > other.twice

    def __ge__(self, other):
        return self.twice >= other.twice

    def __str__(self):
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    __repr__ = __str__


ZERO = HalfInt(0)
HALF = HalfInt(1)
ONE = HalfInt(2)


def half_range(lo, hi):
    """All x with lo <= x <= hi and x = lo mod 1, as HalfInts."""
    return [HalfInt(k) for k in range(lo.twice, hi.twice + 1, 2)]


def ladder(n):
    """The exponents (n-1)/2, (n-3)/2, ..., -(n-1)/2 of an n-dimensional block."""
    return [HalfInt(n - 1 - 2 * i) for i in range(n)]


def as_sign(x):
    if x not in (1, -1):
        raise ValueError(f"not a sign: {x!r}")
    return x


def sign_pow(s, n):
    return 1 if n % 2 == 0 else as_sign(s)


# ---------------------------------------------------------------------------
# sparse Laurent polynomials

# A monomial is a sorted tuple of (variable, exponent) with nonzero integer
# exponents; variables are strings ("u", "t", "c:<tag>").

EMPTY = ()


def mono_mul(m1, m2):
    d = dict(m1)
    for v, e in m2:
        e2 = d.get(v, 0) + e
        if e2:
            d[v] = e2
        else:
            del d[v]
    return tuple(sorted(d.items()))


def mono_pow(m, n):
    return tuple((v, e * n) for v, e in m) if n else EMPTY


def mono_of(**vars_):
    return tuple(sorted((v, e) for v, e in vars_.items() if e))


@dataclass(frozen=True)
class Poly:
    """Sparse polynomial with Fraction coefficients, exponents in Z."""

    terms: tuple  # sorted ((mono, coeff), ...), no zero coefficients

    @staticmethod
    def from_dict(d):
        return Poly(tuple(sorted((m, c) for m, c in d.items() if c)))

    @staticmethod
    def const(c):
        c = Fraction(c)
        return Poly(((EMPTY, c),)) if c else Poly(())

    @staticmethod
    def term(c, **vars_):
        c = Fraction(c)
        return Poly(((mono_of(**vars_), c),)) if c else Poly(())

    def is_zero(self):
        return not self.terms

    def is_const(self):
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == EMPTY)

    def const_value(self):
        if not self.terms:
            return Fraction(0)
        return self.terms[0][1]

    def is_monomial(self):
        return len(self.terms) == 1

    def __add__(self, other):
        d = dict(self.terms)
        for m, c in other.terms:
            d[m] = d.get(m, Fraction(0)) + c
        return Poly.from_dict(d)

    def __neg__(self):
        return Poly(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        d = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = mono_mul(m1, m2)
                d[m] = d.get(m, Fraction(0)) + c1 * c2
        return Poly.from_dict(d)

    def scale(self, c, mono=EMPTY):
        c = Fraction(c)
        if not c:
            return Poly(())
        return Poly(tuple(sorted((mono_mul(m, mono), cc * c) for m, cc in self.terms)))

    def __pow__(self, n):
        out = Poly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def lead(self):
        return max(self.terms)

    def canonical(self):
        """Split off a unit: returns (coeff, mono, normalized poly).

        The normalized poly has nonnegative exponents, no common monomial
        factor, and leading coefficient 1: self == coeff * mono * normalized.
        """
        if not self.terms:
            return Fraction(0), EMPTY, Poly(())
        # content exponent per variable: min over terms, absent counts as 0
        vars_all = {v for m, _ in self.terms for v, _ in m}
        mins = {}
        for v in vars_all:
            mins[v] = min(dict(m).get(v, 0) for m, _ in self.terms)
        content = tuple(sorted((v, e) for v, e in mins.items() if e))
        inv = mono_pow(content, -1)
        shifted = Poly(tuple(sorted((mono_mul(m, inv), c) for m, c in self.terms)))
        lead_mono, lead_coeff = shifted.lead()
        normal = shifted.scale(Fraction(1) / lead_coeff)
        return lead_coeff, content, normal

    def subs_one(self, var):
        """Substitute var = 1."""
        d = {}
        for m, c in self.terms:
            m2 = tuple((v, e) for v, e in m if v != var)
            d[m2] = d.get(m2, Fraction(0)) + c
        return Poly.from_dict(d)

    def substitute(self, values):
        """Full numeric substitution; every variable must be assigned."""
        total = Fraction(0)
        for m, c in self.terms:
            val = c
            for v, e in m:
                if v not in values:
                    raise KeyError(f"no value for {v}")
                val *= Fraction(values[v]) ** e
            total += val
        return total

    def divide_exact(self, divisor):
        """Exact polynomial division; returns the quotient or None."""
        if divisor.is_zero():
            raise ZeroDivisionError
        rem = self
        quo = {}
        lead_d, coeff_d = divisor.lead()
        while not rem.is_zero():
            lead_r, coeff_r = rem.lead()
            m = mono_mul(lead_r, mono_pow(lead_d, -1))
            if any(e < 0 for _, e in m):
                return None
            c = coeff_r / coeff_d
            quo[m] = quo.get(m, Fraction(0)) + c
            rem = rem - divisor.scale(c, m)
            if not rem.is_zero() and rem.lead() >= (lead_r, coeff_r):
                return None
        return Poly.from_dict(quo)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms, reverse=True):
            factors = [f"{v}^{e}" if e != 1 else v for v, e in m]
            if c == 1 and factors:
                parts.append("*".join(factors))
            elif c == -1 and factors:
                parts.append("-" + "*".join(factors))
            else:
                parts.append("*".join([str(c)] + factors))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


T_MINUS_ONE = Poly.from_dict({mono_of(t=1): Fraction(1), EMPTY: Fraction(-1)})


# ---------------------------------------------------------------------------
# rational functions in multiplicative normal form


def _merge(d, key, exp):
    e = d.get(key, 0) + exp
    if e:
        d[key] = e
    elif key in d:
        del d[key]


@dataclass(frozen=True)
class RatFunc:
    """coeff * mono * prod(base**exp) * prod(tag**exp), exact over Q."""

    coeff: Fraction
    mono: tuple  # monomial
    factors: tuple  # sorted ((Poly, int), ...), bases normalized, non-constant
    consts: tuple  # sorted ((tag, int), ...) opaque constant tags

    @staticmethod
    def build(coeff, mono=EMPTY, factors=None, consts=None):
        coeff = Fraction(coeff)
        if not coeff:
            return RatFunc(Fraction(0), EMPTY, (), ())
        mono_d = dict(mono)
        fac = {}
        for base, e in (factors or {}).items() if isinstance(factors, dict) else (factors or ()):
            if not e:
                continue
            c, m, normal = base.canonical()
            if normal.is_zero():
                raise ZeroDivisionError("zero factor base")
            coeff *= c**e
            for v, k in mono_pow(m, e):
                _merge(mono_d, v, k)
            if normal.is_const():
                coeff *= normal.const_value() ** e
            elif normal.is_monomial():
                lm, lc = normal.lead()
                coeff *= lc**e
                for v, k in mono_pow(lm, e):
                    _merge(mono_d, v, k)
            else:
                _merge(fac, normal, e)
        cons = {}
        for tag, e in (consts or {}).items() if isinstance(consts, dict) else (consts or ()):
            if e:
                _merge(cons, tag, e)
        return RatFunc(
            coeff,
            tuple(sorted(mono_d.items())),
            tuple(sorted(fac.items(), key=lambda kv: kv[0].terms)),
            tuple(sorted(cons.items())),
        )

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero():
        return RatFunc(Fraction(0), EMPTY, (), ())

    @staticmethod
    def const(c):
        return RatFunc.build(c)

    @staticmethod
    def q_power(x):
        """q**x = u**(2x) for a half-integer x."""
        return RatFunc.build(1, mono_of(u=x.twice))

    @staticmethod
    def t_power(n):
        return RatFunc.build(1, mono_of(t=n))

    @staticmethod
    def var_power(var, n):
        return RatFunc.build(1, ((var, n),) if n else EMPTY)

    @staticmethod
    def tag_power(tag, n):
        return RatFunc.build(1, EMPTY, None, {tag: n})

    @staticmethod
    def from_poly(p):
        return RatFunc.build(1, EMPTY, {p: 1})

    @staticmethod
    def from_num_den(num, den):
        return RatFunc.build(1, EMPTY, {num: 1}) / RatFunc.build(1, EMPTY, {den: 1})

    def is_zero(self):
        return not self.coeff

    # -- ring/field operations ---------------------------------------------

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.const(other)
        if self.is_zero() or other.is_zero():
            return RatFunc.zero()
        fac = dict(self.factors)
        for b, e in other.factors:
            _merge(fac, b, e)
        cons = dict(self.consts)
        for tag, e in other.consts:
            _merge(cons, tag, e)
        return RatFunc.build(
            self.coeff * other.coeff, mono_mul(self.mono, other.mono), fac, cons
        )

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError
        return RatFunc(
            Fraction(1) / self.coeff,
            mono_pow(self.mono, -1),
            tuple((b, -e) for b, e in self.factors),
            tuple((tag, -e) for tag, e in self.consts),
        )

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.const(other)
        return self * other.inverse()

    def __pow__(self, n):
        if n == 0:
            return RatFunc.const(1)
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(
            self.coeff**n,
            mono_pow(self.mono, n),
            tuple((b, e * n) for b, e in self.factors),
            tuple((tag, e * n) for tag, e in self.consts),
        )

    def __neg__(self):
        return self * -1

    def expand(self):
        """Return (num, den) as honest polynomials with den != 0."""
        num = Poly.const(self.coeff)
        den = Poly.const(1)
        for v, e in self.mono:
            p = Poly.term(1, **{v: abs(e)})
            if e > 0:
                num = num * p
            else:
                den = den * p
        for b, e in self.factors:
            if e > 0:
                num = num * b**e
            else:
                den = den * b ** (-e)
        return num, den

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.const(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.consts != other.consts:
            raise UnknownConstantResidue(
                "cannot add values with different abstract constants"
            )
        na, da = self.expand()
        nb, db = other.expand()
        num = na * db + nb * da
        if num.is_zero():
            return RatFunc.zero()
        den_fac = {}
        for part in (self, other):
            for v, e in part.mono:
                if e < 0:
                    _merge(den_fac, Poly.term(1, **{v: 1}), -e)
            for b, e in part.factors:
                if e < 0:
                    _merge(den_fac, b, -e)
        # cancel tracked denominator bases out of the numerator where possible
        reduced = {}
        for b, e in den_fac.items():
            while e > 0:
                q = num.divide_exact(b)
                if q is None:
                    break
                num, e = q, e - 1
            if e:
                _merge(reduced, b, -e)
        _merge(reduced, num, 1)
        return RatFunc.build(1, EMPTY, reduced, dict(self.consts))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.const(other)
        return self + (-other)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.const(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if self.consts != other.consts:
            return False
        na, da = self.expand()
        nb, db = other.expand()
        return na * db == nb * da

    def __hash__(self):
        # weak but consistent: hash the constant tags only
        return hash(self.consts)

    # -- evaluation ---------------------------------------------------------

    def order_at_one(self):
        """Order of vanishing at t = 1 (negative for a pole)."""
        order = 0
        for b, e in self.factors:
            k = 0
            rem = b
            while True:
                q = rem.divide_exact(T_MINUS_ONE)
                if q is None:
                    break
                rem, k = q, k + 1
            order += e * k
        return order

    def eval_at_one(self):
        """Value at t = 1 as an exact element of Q(u, c...).

        Returns zero when the value vanishes at t = 1; raises PoleAtOne on a
        pole and UnknownConstantResidue if opaque tags survive.
        """
        if self.consts:
            raise UnknownConstantResidue(
                f"uncancelled constants: {dict(self.consts)}"
            )
        if self.is_zero():
            return RatFunc.zero()
        order = 0
        coeff = self.coeff
        mono = tuple((v, e) for v, e in self.mono if v != "t")
        fac = {}
        for b, e in self.factors:
            rem = b
            k = 0
            while True:
                q = rem.divide_exact(T_MINUS_ONE)
                if q is None:
                    break
                rem, k = q, k + 1
            order += e * k
            _merge(fac, rem.subs_one("t"), e)
        if order < 0:
            raise PoleAtOne(-order)
        if order > 0:
            return RatFunc.zero()
        return RatFunc.build(coeff, mono, fac)

    def substitute(self, values):
        """Exact numeric evaluation; all variables must be assigned."""
        if self.consts:
            raise UnknownConstantResidue(
                f"uncancelled constants: {dict(self.consts)}"
            )
        val = self.coeff
        for v, e in self.mono:
            val *= Fraction(values[v]) ** e
        for b, e in self.factors:
            bv = b.substitute(values)
            if not bv and e < 0:
                raise ZeroDivisionError("pole at the substitution point")
            val *= bv**e
        return val

    def as_rational(self):
        """The value as a Fraction, if it is constant."""
        if self.is_zero():
            return Fraction(0)
        if self.mono or self.factors or self.consts:
            raise ValueError(f"not a constant: {self}")
        return self.coeff

    def as_sign(self):
        val = self.as_rational()
        if val not in (1, -1):
            raise ValueError(f"not a sign: {val}")
        return int(val)

    def fraction_str(self):
        num, den = self.expand()
        q = num.divide_exact(den)
        if q is not None:
            return str(q)
        return f"({num}) / ({den})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        if self.coeff != 1 or (not self.mono and not self.factors and not self.consts):
            parts.append(str(self.coeff))
        for v, e in self.mono:
            parts.append(f"{v}^{e}" if e != 1 else v)
        for b, e in self.factors:
            parts.append(f"({b})^{e}" if e != 1 else f"({b})")
        for tag, e in self.consts:
            parts.append(f"[{tag}]^{e}" if e != 1 else f"[{tag}]")
        return " * ".join(parts)

    __repr__ = __str__


def ratfunc_mul(a, b):
    """Exact product; abstract constant multisets merge additively."""
    return a * b


def eval_at_one(r):
    """Cancel (1-t)-type factors and substitute t = 1."""
    return r.eval_at_one()


ONE_RF = RatFunc.const(1)
