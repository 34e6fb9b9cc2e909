"""Exact local L-, epsilon- and gamma-factors as rational functions.

A Weil unit is (key, twist, d): an irreducible Weil-line block tensored
with the d-dimensional SL2 representation, twisted by a half-integer
exponent.  Its unramified content is a declared multiset of mu-classes:
`zero` (coefficient q**0 = 1), `mu0` (the self-inverse class, q**-mu0 = -1)
and `pair:tag` (a generic pair mu, -mu kept as a symbolic coefficient c and
its inverse).  Epsilon constants are never assigned values: each unit
contributes opaque tags which must cancel before evaluation.

With t = q**(-s) and q = u**2:
    L(s, unit)     = prod_mu 1 / (1 - C_mu * u**(-2w) * t),   w = mu + twist + (d-1)/2
    gamma(s, unit) = tags * prod_mu (-q**(1/2 - s - mu - twist))**(d-1)
                          * zeta(s + mu + twist + (d+1)/2) / zeta(... + (d-1)/2)
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .arith import (
    EMPTY,
    HalfInt,
    Poly,
    RatFunc,
    UnknownConstantResidue,
    ladder,
    mono_of,
)
from .params import AParameter, Summand, clebsch_gordan


@dataclass(frozen=True)
class MuClass:
    kind: str  # "zero", "mu0", "pair"
    tag: str = ""

    def __post_init__(self):
        if self.kind not in ("zero", "mu0", "pair"):
            raise ValueError(f"bad mu class {self.kind!r}")
        if (self.kind == "pair") != bool(self.tag):
            raise ValueError("exactly pair classes carry a tag")

    def members(self):
        """(coefficient sign, {cvar: exp}) for each member of the class."""
        if self.kind == "zero":
            return ((Fraction(1), {}),)
        if self.kind == "mu0":
            return ((Fraction(-1), {}),)
        v = f"c:{self.tag}"
        return ((Fraction(1), {v: 1}), (Fraction(1), {v: -1}))

    def __str__(self):
        return self.kind if self.kind != "pair" else f"pair:{self.tag}"


MU_ZERO = MuClass("zero")
MU_SELF = MuClass("mu0")


@dataclass(frozen=True)
class WeilUnit:
    key: str  # fingerprint of the Weil-line block
    twist: HalfInt
    d: int
    xdata: tuple  # multiset of MuClass

    def __str__(self):
        return f"{self.key}@{self.twist} x S_{self.d} {{{','.join(map(str, self.xdata))}}}"


def pair_key(rho1, rho2):
    return "(x)".join(sorted((rho1, rho2)))


class PairXModel:
    """Declared unramified content X(c(rho) (x) rho') per unordered pair.

    Default rule: the class `zero` with multiplicity one exactly when rho'
    is the conjugate-dual class of rho; everything else empty.  Declared
    entries replace the default for their pair and must respect the
    mu <-> -mu pairing, which the atom classes do by construction.
    """

    def __init__(self, reg, declared=None):
        self.reg = reg
        self.declared = {}
        for (a, b), classes in (declared or {}).items():
            self.declared[frozenset((a, b))] = tuple(classes)

    def x_of(self, rho1, rho2):
        k = frozenset((rho1, rho2))
        if k in self.declared:
            return self.declared[k]
        if self.reg.dual(rho1) == rho2:
            return (MU_ZERO,)
        return ()

    def unit(self, rho1, rho2, twist, d):
        return WeilUnit(pair_key(rho1, rho2), twist, d, self.x_of(rho1, rho2))


def parse_xmodel(reg, lines):
    """Lines `rho,rho': class(mult), ...` with class in {zero, mu0, pair:tag}."""
    declared = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, body = line.partition(":")
        rho1, _, rho2 = head.partition(",")
        rho1, rho2 = rho1.strip(), rho2.strip()
        if not rho1 or not rho2:
            raise ValueError(f"line {lineno}: expected `rho,rho': classes`")
        classes = []
        for item in body.split(","):
            item = item.strip()
            if not item:
                continue
            mult = 1
            if item.endswith(")") and "(" in item:
                item, _, count = item[:-1].rpartition("(")
                mult = int(count)
            if item == "zero":
                cls = MU_ZERO
            elif item == "mu0":
                cls = MU_SELF
            elif item.startswith("pair:"):
                cls = MuClass("pair", item[5:])
            else:
                raise ValueError(f"line {lineno}: unknown class {item!r}")
            classes.extend([cls] * mult)
        declared[(rho1, rho2)] = tuple(classes)
    return PairXModel(reg, declared)


# ---------------------------------------------------------------------------
# factor construction


def _zeta_inverse_base(twice_w, sign, cvars, power=1):
    """The polynomial 1 - sign * c^power * u^(-twice_w) * t."""
    mono = dict(cvars)
    mono = {v: e * power for v, e in mono.items()}
    mono["t"] = 1
    if twice_w:
        mono["u"] = -twice_w
    m = tuple(sorted((v, e) for v, e in mono.items() if e))
    return Poly.from_dict({EMPTY: Fraction(1), m: -Fraction(sign) ** power})


def L_factor(units):
    """Product of zeta factors; returns an exact rational function."""
    fac = {}
    for unit, mult in _with_mult(units):
        for cls in unit.xdata:
            for sign, cvars in cls.members():
                tw = unit.twist.twice + unit.d - 1
                base = _zeta_inverse_base(tw, sign, cvars)
                fac[base] = fac.get(base, 0) - mult
    return RatFunc.build(1, EMPTY, fac)


def _with_mult(units):
    for item in units:
        if isinstance(item, tuple):
            yield item
        else:
            yield item, 1


def gamma_A(units):
    """gamma = epsilon * L(1+s)/L(s) with abstract epsilon-constant tags.

    Tags per unit: ("eps", key)**d and ("chs", key)**d for the constant and
    its q**(c(1/2-s)) companion, plus ("qc", key) to the power -2*twist*d
    recording the twist shift eps(unit|.|^x) = eps(unit) * q**(-c x).
    """
    coeff = Fraction(1)
    mono = {}
    fac = {}
    consts = {}

    def bump_mono(var, e):
        if e:
            mono[var] = mono.get(var, 0) + e

    for unit, mult in _with_mult(units):
        d, tw2 = unit.d, unit.twist.twice
        for tag, e in (
            (("eps", unit.key), d * mult),
            (("chs", unit.key), d * mult),
            (("qc", unit.key), -tw2 * d * mult),
        ):
            if e:
                consts[tag] = consts.get(tag, 0) + e
        for cls in unit.xdata:
            for sign, cvars in cls.members():
                # (-q^(1/2 - s - mu - twist))^(d-1)
                e = (d - 1) * mult
                coeff *= (-Fraction(sign)) ** e
                bump_mono("u", (1 - tw2) * e)
                bump_mono("t", e)
                for v, k in cvars.items():
                    bump_mono(v, k * e)
                # zeta(s + mu + twist + (d+1)/2) / zeta(s + mu + twist + (d-1)/2)
                up = _zeta_inverse_base(tw2 + d + 1, sign, cvars)
                dn = _zeta_inverse_base(tw2 + d - 1, sign, cvars)
                fac[up] = fac.get(up, 0) - mult
                fac[dn] = fac.get(dn, 0) + mult
    return RatFunc.build(coeff, tuple(sorted(mono.items())), fac, consts)


def units_lambda(units):
    """Weil-line restriction of a unit list, for matching checks."""
    out = Counter()
    for unit, mult in _with_mult(units):
        for cls in unit.xdata:
            for x in ladder(unit.d):
                out[(unit.key, str(cls), (unit.twist + x).twice)] += mult
    return out


def gamma_quotient_at_zero(num_units, den_units):
    """gamma(num)/gamma(den) at the centre, as an exact value.

    When the two unit lists have matching Weil-line restrictions this is a
    sign; a mismatch surfaces as PoleAtOne or UnknownConstantResidue.
    """
    quotient = gamma_A(num_units) / gamma_A(den_units)
    return quotient.eval_at_one()


# ---------------------------------------------------------------------------
# the one-variable closed forms


def f_symbolic(cls, a, beta):
    """(-q^(-(1/2-s-mu-a)))^(2*beta) * zeta(s+mu-a+beta)/zeta(s+mu+a-beta).

    For the pair class this is the product over both members.
    """
    out = RatFunc.const(1)
    e = beta.twice
    for sign, cvars in cls.members():
        coeff = (-Fraction(sign) ** -1) ** e
        mono = {"u": (a.twice - 1) * e, "t": -e}
        for v, k in cvars.items():
            mono[v] = mono.get(v, 0) - k * e
        fac = {}
        up = _zeta_inverse_base(-a.twice + beta.twice, sign, cvars)
        dn = _zeta_inverse_base(a.twice - beta.twice, sign, cvars)
        fac[up] = fac.get(up, 0) - 1
        fac[dn] = fac.get(dn, 0) + 1
        out = out * RatFunc.build(
            coeff, tuple(sorted((v, k) for v, k in mono.items() if k)), fac
        )
    return out


def f_closed_form(cls, a, beta):
    """Value of f at the centre: the three-case table.

    pair -> q^(2a(2b-1)); mu0 -> q^(a(2b-1));
    zero -> (-1)^(2b) q^(a(2b-1)) if a = b, else (-1)^(2b+1) q^(a(2b-1)).
    """
    uexp = a.twice * (beta.twice - 1)  # u-exponent of q^(a(2*beta-1))
    if cls.kind == "pair":
        return RatFunc.build(1, mono_of(u=2 * uexp))
    if cls.kind == "mu0":
        return RatFunc.build(1, mono_of(u=uexp))
    sign = (-1) ** beta.twice if a == beta else (-1) ** (beta.twice + 1)
    return RatFunc.build(sign, mono_of(u=uexp))


# ---------------------------------------------------------------------------
# tensor expansion of formal parameters into units


def tensor_units(p1, p2, xmodel):
    """Units of c(p1) (x) p2 for two formal parameters.

    First SL2 slots multiply by Clebsch-Gordan; second slots restrict to
    the Weil line as twist ladders.  Conjugation is absorbed into the
    unordered pair keys of the X model.
    """
    units = []
    for s1, m1 in p1.summands:
        for s2, m2 in p2.summands:
            for d in clebsch_gordan(s1.a, s2.a):
                for x in ladder(s1.b):
                    for y in ladder(s2.b):
                        tw = s1.twist + s2.twist + x + y
                        units.append(
                            (xmodel.unit(s1.rho, s2.rho, tw, d), m1 * m2)
                        )
    return units


def gamma_quotient_of_spec(spec, xmodel):
    """Evaluate a deferred quotient gamma(n1 (x) c n2)/gamma(d1 (x) c d2)."""
    if spec.is_trivially_one():
        return RatFunc.const(1)
    num = tensor_units(spec.num[0], spec.num[1], xmodel)
    den = tensor_units(spec.den[0], spec.den[1], xmodel)
    return gamma_quotient_at_zero(num, den)
