"""Derivative calculus on enhanced tempered parameters.

An enhanced parameter is a tempered good-parity parameter phi together
with a packet character on its component group.  The same data serves two
packets: the tempered one attached to phi and the dual packet attached to
the parameter with the SL2 slots swapped.  All vanishing and alternation
conditions used here compare values at classes of equal block-width
parity, which makes them insensitive to which of the two coordinate
systems the character came from; the conversion between the systems is
`convert_char` (its own inverse).

Functions that produce absolute pairing values document their convention:
characters of dual-packet members are indexed by the tempered classes, so
eps[(rho, d)] means the pairing at the mirrored basis element e(rho, 1, d).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .arith import ZERO, HalfInt
from .compgroup import PacketCharacter
from .params import AParameter, Summand
from .zelevinsky import Multisegment, Segment


class MultiplicityMismatch(ValueError):
    pass


class NotVanishing(ValueError):
    pass


class NotAlmostSC(ValueError):
    pass


@dataclass(frozen=True)
class EnhancedParameter:
    phi: AParameter  # tempered, good parity
    eps: PacketCharacter

    def __post_init__(self):
        if not self.phi.is_tempered():
            raise ValueError("enhanced parameters are built on tempered data")
        if not self.eps.is_valid(self.phi):
            raise ValueError("character does not kill the central relation")

    def value(self, rho, d):
        return self.eps.value(Summand(rho, d, 1))

    def mult(self, rho, d):
        return self.phi.mult(Summand(rho, d, 1))

    def symbols(self):
        return sorted({s.rho for s, _ in self.phi.summands})

    def rho_count(self, rho):
        """Constituents with symbol rho, counted with multiplicity."""
        return sum(m for s, m in self.phi.summands if s.rho == rho)

    def blocks(self, rho):
        """Sorted block widths d with rho x S_d present."""
        return sorted(s.a for s, m in self.phi.summands if s.rho == rho)

    def replace(self, removals, additions, values):
        """New enhanced parameter; `values` assigns characters to new classes."""
        counts = self.phi.counter()
        for s, k in removals:
            counts[s] -= k
            if counts[s] < 0:
                raise ValueError(f"cannot remove {k} copies of {s}")
        for s, k in additions:
            counts[s] += k
        phi = AParameter.of(counts.items(), self.phi.group)
        vals = {}
        for s, _ in phi.summands:
            if s in values:
                vals[s] = values[s]
            else:
                vals[s] = self.eps.value(s)
        return EnhancedParameter(phi, PacketCharacter.of(vals))

    def __str__(self):
        return f"({self.phi}; {self.eps})"


def conversion_ratio(d, m_rho):
    """Mirrored-over-tempered pairing ratio at a width-d class."""
    return 1 if d % 2 == 0 else -((-1) ** m_rho)


def convert_char(e):
    """Swap the character between the two coordinate systems."""
    vals = {}
    for s, _ in e.phi.summands:
        vals[s] = e.value(s.rho, s.a) * conversion_ratio(s.a, e.rho_count(s.rho))
    return EnhancedParameter(e.phi, PacketCharacter.of(vals))


# ---------------------------------------------------------------------------
# derivatives


def derivative(e, rho, x, k):
    """k-fold stripping at exponent x > 0; returns None when it vanishes.

    k must be the exact multiplicity of rho x S_(2x+1).  Nonzero result:
    the k blocks drop to width 2x-1 and the character follows the
    surjection e(rho, 2x+1) -> e(rho, 2x-1).
    """
    if x <= ZERO:
        raise ValueError("exponent must be positive")
    d = x.twice + 1
    m = e.mult(rho, d)
    if k != m or k <= 0:
        raise MultiplicityMismatch(f"multiplicity of {rho} x S_{d} is {m}, not {k}")
    if x >= HalfInt.of(1):
        low_present = e.mult(rho, d - 2) > 0
        if low_present and e.value(rho, d) != e.value(rho, d - 2):
            return None
    else:  # x = 1/2, d = 2
        if e.value(rho, 2) == -1:
            return None
    removals = [(Summand(rho, d, 1), k)]
    additions = [(Summand(rho, d - 2, 1), k)] if d - 2 >= 1 else []
    values = {Summand(rho, d - 2, 1): e.value(rho, d)} if d - 2 >= 1 else {}
    return e.replace(removals, additions, values)


@dataclass(frozen=True)
class OddReduction:
    result: EnhancedParameter


@dataclass(frozen=True)
class EvenReduction:
    datum: "LanglandsDatum"


def highest_derivative_after_vanishing(e, rho, x):
    """Shape of the highest derivative when the k-th one vanishes.

    k odd: an enhanced parameter again, with k-1 blocks dropped and the
    character unchanged.  k even: a non-tempered quotient recorded as a
    Langlands datum with a single segment [-(x-1), x].
    """
    d = x.twice + 1
    k = e.mult(rho, d)
    if derivative(e, rho, x, k) is not None:
        raise NotVanishing(f"derivative at {rho}, x={x} does not vanish")
    if k % 2 == 1:
        removals = [(Summand(rho, d, 1), k - 1)]
        additions = [(Summand(rho, d - 2, 1), k - 1)] if d - 2 >= 1 else []
        return OddReduction(e.replace(removals, additions, {}))
    removals = [(Summand(rho, d, 1), k)]
    additions = [(Summand(rho, d - 2, 1), k - 2)] if d - 2 >= 1 else []
    reduced = e.replace(removals, additions, {})
    seg = Segment(rho, HalfInt(-x.twice + 2), x)
    return EvenReduction(LanglandsDatum(Multisegment.of([seg]), reduced))


def max_zero_derivative(e, rho, reg):
    """Strip pairs at exponent zero: phi = phi0 + (rho + dual)^k.

    Only self-dual symbols occur inside good-parity parameters; the
    reported multiplicity is 2**k for those.  See strip_zero_pairs for
    the raw partnered-pair variant.
    """
    if reg.sign(rho) is None:
        return 0, e, 1
    m = e.mult(rho, 1)
    k = m // 2
    if k == 0:
        return 0, e, 1
    e0 = e.replace([(Summand(rho, 1, 1), 2 * k)], [], {})
    return k, e0, 2**k


def strip_zero_pairs(phi, rho, reg):
    """(k, phi0) for a bare parameter; handles partnered symbols too."""
    if reg.sign(rho) is not None:
        m = phi.mult(Summand(rho, 1, 1))
        k = m // 2
        return k, phi.remove(Summand(rho, 1, 1), 2 * k)
    mate = reg.dual(rho)
    k = min(phi.mult(Summand(rho, 1, 1)), phi.mult(Summand(mate, 1, 1)))
    out = phi.remove(Summand(rho, 1, 1), k).remove(Summand(mate, 1, 1), k)
    return k, out


# ---------------------------------------------------------------------------
# supercuspidality


def _chain_ok(e, rho):
    """Alternating-chain conditions for one symbol, multiplicities aside."""
    for s, m in e.phi.summands:
        if s.rho != rho or s.a < 2:
            continue
        d = s.a
        if m > 1:
            return False
        if d == 2:
            if e.value(rho, 2) != -1:
                return False
        elif d > 2:
            if e.mult(rho, d - 2) < 1:
                return False
            if e.value(rho, d) != -e.value(rho, d - 2):
                return False
    return True


def is_almost_supercuspidal(e):
    return all(_chain_ok(e, rho) for rho in e.symbols())


def is_supercuspidal(e):
    if not e.phi.is_multiplicity_free():
        return False
    return is_almost_supercuspidal(e)


# ---------------------------------------------------------------------------
# the reduction classifier


@dataclass(frozen=True)
class Reduction:
    case: str  # "asc", "a", "b", "c"
    rho1: str = ""
    x: HalfInt = ZERO
    y: HalfInt = ZERO
    m: int = 0


def _witness_exponents(e, rho):
    """Exponents x > 0 where a single stripping is possible."""
    out = []
    for s, m in e.phi.summands:
        if s.rho != rho or s.a < 2:
            continue
        d = s.a
        x = HalfInt(d - 1)
        if m >= 2:
            out.append(x)
            continue
        if d == 2:
            if e.value(rho, 2) == 1:
                out.append(x)
        else:
            if e.mult(rho, d - 2) < 1 or e.value(rho, d) == e.value(rho, d - 2):
                out.append(x)
    return out


def classify_reduction(e, reg):
    """Locate the canonical reduction witness, or report almost-cuspidality.

    The symbol is chosen by registry order, then the maximal strippable
    exponent x; y is the top block of that symbol and m the multiplicity
    at 2x+1.  The case tag follows the boundary behaviour at 2x-1.
    """
    order = {name: i for i, name in enumerate(reg.names())}
    best = None
    for rho in sorted(e.symbols(), key=lambda r: order.get(r, len(order))):
        xs = _witness_exponents(e, rho)
        if xs:
            best = (rho, max(xs))
            break
    if best is None:
        return Reduction("asc")
    rho1, x = best
    d = x.twice + 1
    m = e.mult(rho1, d)
    y = HalfInt(max(e.blocks(rho1)) - 1)
    if x == HalfInt(1):  # x = 1/2: the width-0 block is formally present
        low_present, opposite = True, e.value(rho1, 2) == -1
    else:
        low_present = e.mult(rho1, d - 2) > 0
        opposite = low_present and e.value(rho1, d) == -e.value(rho1, d - 2)
    if not low_present or not opposite:
        return Reduction("a", rho1, x, y, m)
    if m % 2 == 1:
        return Reduction("b", rho1, x, y, m)
    return Reduction("c", rho1, x, y, m)


# ---------------------------------------------------------------------------
# Langlands data


@dataclass(frozen=True)
class LanglandsDatum:
    mm: Multisegment  # all midpoints strictly positive
    tempered: EnhancedParameter  # character in tempered coordinates
    choice: str | None = None  # tag for the two-summand ambiguity

    def __post_init__(self):
        for s in self.mm:
            if s.twice_midpoint <= 0:
                raise ValueError(f"segment {s} has nonpositive midpoint")

    def __str__(self):
        tag = f" [{self.choice}]" if self.choice else ""
        return f"I({self.mm}) x| ({self.tempered}){tag}"


def std_module_almost_sc(e, reg):
    """Langlands data and L-parameter of an almost supercuspidal member.

    The even-multiplicity width-one classes rho' with top block 2y+1 > 1
    contribute a segment [0, y] and swap one (S_1 + S_(2y+1))-pair for a
    twisted pair of width y+1; the tempered part flips the character on
    every rho'-class.  Input character is in dual-packet coordinates; the
    tempered part's character is converted to tempered coordinates.
    """
    if not is_almost_supercuspidal(e):
        raise NotAlmostSC(str(e.phi))
    primes = []
    for s, m in e.phi.summands:
        if s.a == 1 and m % 2 == 0:
            y = (max(e.blocks(s.rho)) - 1) // 2
            primes.append((s.rho, y))
    segs = []
    removals = []
    lparam = Counter()
    for rho, y in primes:
        if y == 0:
            continue
        segs.append(Segment(rho, ZERO, HalfInt.of(y)))
        removals.append((Summand(rho, 1, 1), 1))
        removals.append((Summand(rho, 2 * y + 1, 1), 1))
        lparam[Summand(rho, y + 1, 1, HalfInt(y))] += 1
        lparam[Summand(rho, y + 1, 1, HalfInt(-y))] += 1
    tau_phi = e.phi
    for s, k in removals:
        tau_phi = tau_phi.remove(s, k)
    # tempered-coordinate character of the full parameter, then flip on primes
    tempered_now = convert_char(e)
    prime_set = {rho for rho, _ in primes}
    vals = {}
    for s, _ in tau_phi.summands:
        v = tempered_now.value(s.rho, s.a)
        vals[s] = -v if s.rho in prime_set else v
    tau = EnhancedParameter(tau_phi, PacketCharacter.of(vals))
    for s, m in tau_phi.summands:
        lparam[s] += m
    datum = LanglandsDatum(Multisegment.of(segs), tau)
    return datum, AParameter.of(lparam.items())


# ---------------------------------------------------------------------------
# the recursive L-parameter computation


@dataclass(frozen=True)
class TraceStep:
    case: str
    rho1: str
    x: HalfInt
    y: HalfInt
    m: int
    before: EnhancedParameter


@dataclass(frozen=True)
class LTrace:
    steps: tuple  # TraceStep entries for cases a/b
    stop_kind: str  # "asc" or "c"
    stop: EnhancedParameter  # coordinates at the stop
    stop_step: TraceStep | None  # the terminal case-c step, if any
    datum: LanglandsDatum | None  # Langlands data at an almost-sc stop


def _apply_case_a(e, rho1, x, y, m):
    d = x.twice + 1
    removals = [(Summand(rho1, d, 1), m - 1), (Summand(rho1, y.twice + 1, 1), 1)]
    additions = [(Summand(rho1, d - 2, 1), m)] if d - 2 >= 1 else []
    values = {}
    i = x
    while i <= y:
        di = i.twice + 1
        if di - 2 >= 1:
            values[Summand(rho1, di - 2, 1)] = e.value(rho1, di)
        i = i + HalfInt.of(1)
    return e.replace(removals, additions, values)


def _apply_case_b(e, rho1, x, m):
    d = x.twice + 1
    removals = [(Summand(rho1, d, 1), m - 1)]
    additions = [(Summand(rho1, d - 2, 1), m - 1)] if d - 2 >= 1 else []
    return e.replace(removals, additions, {})


def _case_c_stop(e, rho1, x, y, m):
    """Terminal shape after a case-c step: a tempered dual member.

    The target is the dual of the Langlands quotient attached to the
    segment [-(x-1), x]; it is tempered with parameter
    phi(sigma') + rho1 x (S_(2x+1) + S_(2x-1)), i.e. the diagonal
    restriction of the target.  Values on untouched classes pass through
    and the chain above x shifts down; the one class the restriction does
    not determine (the reattached width-(2x+1) block) is completed by the
    central relation, which pins it uniquely when its multiplicity is odd.
    """
    d = x.twice + 1
    counts = e.phi.counter()
    counts[Summand(rho1, d, 1)] -= m - 1
    counts[Summand(rho1, y.twice + 1, 1)] -= 1
    counts[Summand(rho1, d, 1)] += 1
    if d - 2 >= 1:
        counts[Summand(rho1, d - 2, 1)] += m - 1
    phi = AParameter.of(counts.items(), e.phi.group)
    vals = {}
    for s, _ in phi.summands:
        vals[s] = e.value(s.rho, s.a) if e.mult(s.rho, s.a) else 1
    i = x + HalfInt.of(1)
    while i <= y:
        di = i.twice + 1
        vals[Summand(rho1, di - 2, 1)] = e.value(rho1, di)
        i = i + HalfInt.of(1)
    prod = 1
    for s, k in phi.summands:
        prod *= vals[s] ** (k % 2)
    if prod == -1:
        tag = Summand(rho1, d, 1)
        if phi.mult(tag) % 2 == 0:
            raise AssertionError("cannot complete the character at the stop")
        vals[tag] = -vals[tag]
    return EnhancedParameter(phi, PacketCharacter.of(vals))


def compute_L_parameter_with_trace(e, reg):
    """L-parameter of the dual-packet member, with the reduction trace."""
    acc = Counter()
    steps = []
    cur = e
    while True:
        red = classify_reduction(cur, reg)
        if red.case == "asc":
            datum, lp = std_module_almost_sc(cur, reg)
            for s, m in lp.summands:
                acc[s] += m
            trace = LTrace(tuple(steps), "asc", cur, None, datum)
            return AParameter.of(acc.items()), trace
        rho1, x, y, m = red.rho1, red.x, red.y, red.m
        half_sum = HalfInt((x.twice + y.twice) // 2)  # (x+y)/2, an element of (1/2)Z
        if red.case == "a":
            acc[Summand(rho1, (y - x).twice // 2 + 1, 1, half_sum)] += 1
            acc[Summand(rho1, (y - x).twice // 2 + 1, 1, -half_sum)] += 1
            acc[Summand(rho1, 1, 1, x)] += m - 1
            acc[Summand(rho1, 1, 1, -x)] += m - 1
            steps.append(TraceStep("a", rho1, x, y, m, cur))
            cur = _apply_case_a(cur, rho1, x, y, m)
        elif red.case == "b":
            acc[Summand(rho1, 1, 1, x)] += m - 1
            acc[Summand(rho1, 1, 1, -x)] += m - 1
            steps.append(TraceStep("b", rho1, x, y, m, cur))
            cur = _apply_case_b(cur, rho1, x, m)
        else:  # case c: terminal
            acc[Summand(rho1, (y - x).twice // 2 + 1, 1, half_sum)] += 1
            acc[Summand(rho1, (y - x).twice // 2 + 1, 1, -half_sum)] += 1
            acc[Summand(rho1, 1, 1, x)] += m - 2
            acc[Summand(rho1, 1, 1, -x)] += m - 2
            stop = _case_c_stop(cur, rho1, x, y, m)
            for s, mm in stop.phi.summands:
                acc[s] += mm
            step = TraceStep("c", rho1, x, y, m, cur)
            trace = LTrace(tuple(steps), "c", stop, step, None)
            return AParameter.of(acc.items()), trace


def compute_L_parameter(e, reg):
    lp, _ = compute_L_parameter_with_trace(e, reg)
    return lp


def lparam_to_json(lp):
    return [
        {"rho": s.rho, "twist": str(s.twist), "d": s.a, "mult": m}
        for s, m in lp.summands
    ]


# ---------------------------------------------------------------------------
# highly non-tempered summands


def hnt_langlands_data(psi_gl, datum0, reg):
    """Langlands data of the distinguished summand(s).

    psi_gl = (rho, 2a+1, 2b+1) irreducible self-dual; datum0 the data of
    the classical factor.  The multisegment gains the doubled segments
    [-a+c, a+c] for c from kappa to b, and the tempered part is tau0
    (kappa = 1/2) or a constituent of Delta([-a,a]) x| tau0 (kappa = 1,
    at most two, tagged by choice when genuinely ambiguous).
    """
    rho = psi_gl.rho
    if reg.sign(rho) is None:
        raise ValueError("the GL block must be self-dual")
    alpha = HalfInt(psi_gl.a - 1)
    beta = HalfInt(psi_gl.b - 1)
    kappa = HalfInt.of(1) if beta.is_integer else HalfInt(1)
    segs = list(datum0.mm)
    c = kappa
    while c <= beta:
        seg = Segment(rho, c - alpha, c + alpha)
        segs.extend([seg, seg])
        c = c + HalfInt.of(1)
    mm = Multisegment.of(segs)
    tau0 = datum0.tempered
    if kappa == HalfInt(1):  # kappa = 1/2
        return [LanglandsDatum(mm, tau0, datum0.choice)]
    new_class = Summand(rho, alpha.twice + 1, 1)
    if tau0.phi.mult(new_class) > 0:
        tau = tau0.replace([], [(new_class, 2)], {})
        return [LanglandsDatum(mm, tau, datum0.choice)]
    out = []
    for sign, tag in ((1, "+"), (-1, "-")):
        tau = tau0.replace([], [(new_class, 2)], {new_class: sign})
        out.append(LanglandsDatum(mm, tau, tag))
    return out
