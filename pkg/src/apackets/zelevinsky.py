"""Segment combinatorics for general linear blocks.

Segments [x,y]_rho, multisegments, the comultiplication m* on Steinberg
units, its twisted companion M*, and the structure formula
mu*(tau x| pi) = M*(tau) x| mu*(pi) on formal words.  Everything is a
finite integer combination of canonically sorted words, so equality of
expansions is syntactic.  This module is the brute-force side of the
derivative calculus: the closed forms elsewhere are checked against full
expansions computed here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import HalfInt


@dataclass(frozen=True)
class Segment:
    rho: str
    x: HalfInt
    y: HalfInt

    def __post_init__(self):
        if self.x > self.y:
            raise ValueError(f"empty or reversed segment [{self.x},{self.y}]")
        if not self.x.congruent_mod_1(self.y):
            raise ValueError("segment endpoints must differ by an integer")

    @property
    def length(self):
        return (self.y.twice - self.x.twice) // 2 + 1

    @property
    def twice_midpoint(self):
        return (self.x.twice + self.y.twice) // 2

    def key(self):
        return (self.rho, self.x.twice, self.y.twice)

    def contains(self, other):
        return self.rho == other.rho and self.x <= other.x and other.y <= self.y

    def conj_dual(self, reg):
        """[x,y]_rho -> [-y,-x] on the conjugate-dual symbol class."""
        return Segment(reg.dual(self.rho), -self.y, -self.x)

    def __str__(self):
        return f"{self.rho}[{self.x}..{self.y}]"


def make_segment(rho, x, y):
    """Segment constructor honouring the empty convention [x, x-1] -> None."""
    if y.twice == x.twice - 2:
        return None
    return Segment(rho, x, y)


def linked(s1, s2):
    """Same symbol, union a segment, neither containing the other."""
    if s1.rho != s2.rho or not s1.x.congruent_mod_1(s2.x):
        return False
    if s1.contains(s2) or s2.contains(s1):
        return False
    lo, hi = min(s1.x, s2.x), max(s1.y, s2.y)
    # union is a segment iff the two intervals overlap or abut
    return (hi.twice - lo.twice) // 2 + 1 <= s1.length + s2.length


@dataclass(frozen=True)
class Multisegment:
    segments: tuple  # sorted by key

    @staticmethod
    def of(items):
        return Multisegment(tuple(sorted(items, key=lambda s: s.key())))

    def __add__(self, other):
        return Multisegment.of(self.segments + other.segments)

    def __len__(self):
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def __str__(self):
        return " + ".join(map(str, self.segments)) if self.segments else "0"


def standard_order(m):
    """Sort by decreasing midpoint; ties by decreasing length, then symbol."""
    return sorted(
        m, key=lambda s: (-s.twice_midpoint, -s.length, s.rho, s.x.twice)
    )


# ---------------------------------------------------------------------------
# formal words and sums


@dataclass(frozen=True)
class ClassicalToken:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class ClassicalWord:
    gl: tuple  # sorted Segments induced onto the token
    token: ClassicalToken

    @staticmethod
    def of(segments, token):
        return ClassicalWord(tuple(sorted(segments, key=lambda s: s.key())), token)

    def __str__(self):
        if not self.gl:
            return str(self.token)
        return " x ".join(map(str, self.gl)) + f" |x {self.token}"


def word(*segments):
    """A commutative GL word: canonically sorted tuple of segments."""
    return tuple(sorted(segments, key=lambda s: s.key()))


def word_mul(w1, w2):
    return tuple(sorted(w1 + w2, key=lambda s: s.key()))


class FormalSum:
    """Finite integer combination of hashable keys."""

    def __init__(self, terms=None):
        self.terms = {}
        for k, c in (terms or {}).items():
            if c:
                self.terms[k] = c

    @staticmethod
    def single(key, coeff=1):
        return FormalSum({key: coeff})

    @staticmethod
    def zero():
        return FormalSum()

    def __add__(self, other):
        d = dict(self.terms)
        for k, c in other.terms.items():
            d[k] = d.get(k, 0) + c
        return FormalSum(d)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return FormalSum({k: v * c for k, v in self.terms.items()})

    def map_keys(self, fn):
        d = {}
        for k, c in self.terms.items():
            k2 = fn(k)
            d[k2] = d.get(k2, 0) + c
        return FormalSum(d)

    def combine(self, other, fn):
        """Bilinear extension of fn(key1, key2) -> key."""
        d = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = fn(k1, k2)
                d[k] = d.get(k, 0) + c1 * c2
        return FormalSum(d)

    def __eq__(self, other):
        return isinstance(other, FormalSum) and self.terms == other.terms

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: repr(kv[0])))

    def __len__(self):
        return len(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for k, c in sorted(self.terms.items(), key=lambda kv: repr(kv[0])):
            bits.append(f"{c}*{_key_str(k)}" if c != 1 else _key_str(k))
        return " + ".join(bits)


def _key_str(k):
    if isinstance(k, tuple) and k and all(
        isinstance(p, (tuple, ClassicalWord)) for p in k
    ):
        return "(" + " (x) ".join(_key_str(p) for p in k) + ")"
    if isinstance(k, tuple):
        return "*".join(map(str, k)) if k else "1"
    return str(k)


# ---------------------------------------------------------------------------
# comultiplications


def m_star_segment(seg):
    """m*(Delta([x,y])) = sum_i Delta([x+i,y]) (x) Delta([x,x+i-1])."""
    out = {}
    n = seg.length
    for i in range(n + 1):
        left = make_segment(seg.rho, HalfInt(seg.x.twice + 2 * i), seg.y)
        right = make_segment(seg.rho, seg.x, HalfInt(seg.x.twice + 2 * (i - 1)))
        key = (word(*([left] if left else [])), word(*([right] if right else [])))
        out[key] = out.get(key, 0) + 1
    return FormalSum(out)


def m_star_word(w):
    """Multiplicative extension of m* to a GL word."""
    out = FormalSum.single((word(), word()))
    for seg in w:
        out = out.combine(
            m_star_segment(seg),
            lambda k1, k2: (word_mul(k1[0], k2[0]), word_mul(k1[1], k2[1])),
        )
    return out


def conj_dual_word(w, reg):
    return word(*(s.conj_dual(reg) for s in w))


def M_star(w, reg):
    """(m (x) id) o (conj-dual (x) m*) o swap o m* on a GL word."""
    first = m_star_word(w)
    out = {}
    for (w1, w2), c in first.terms.items():
        dual = conj_dual_word(w2, reg)
        for (w11, w12), c2 in m_star_word(w1).terms.items():
            key = (word_mul(dual, w11), w12)
            out[key] = out.get(key, 0) + c * c2
    return FormalSum(out)


def M_star_closed(seg, reg):
    """Closed form of M* on a single Steinberg unit."""
    out = {}
    x2, y2 = seg.x.twice, seg.y.twice
    for z2 in range(x2 - 2, y2 + 1, 2):
        for w2 in range(z2 + 2, y2 + 3, 2):
            left1 = make_segment(reg.dual(seg.rho), HalfInt(-z2), -seg.x)
            left2 = make_segment(seg.rho, HalfInt(w2), seg.y)
            mid = make_segment(seg.rho, HalfInt(z2 + 2), HalfInt(w2 - 2))
            lw = word(*[s for s in (left1, left2) if s])
            key = (lw, word(*([mid] if mid else [])))
            out[key] = out.get(key, 0) + 1
    return FormalSum(out)


def supercuspidal_expansion(token):
    """mu* of a supercuspidal token: 1 (x) token."""
    return FormalSum.single((word(), ClassicalWord.of((), token)))


def mu_star(tau, pi_token, reg, pi_expansion=None):
    """Structure formula mu*(tau x| pi) = M*(tau) x| mu*(pi).

    tau is a GL word, pi a classical token with a declared finite
    expansion; tokens without one are treated as supercuspidal.
    """
    if pi_expansion is None:
        pi_expansion = supercuspidal_expansion(pi_token)
    mstar = M_star(tau, reg)

    def glue(k1, k2):
        (gl_out, gl_down) = k1
        (gl_pi, cls) = k2
        return (
            word_mul(gl_out, gl_pi),
            ClassicalWord.of(word_mul(gl_down, cls.gl), cls.token),
        )

    return mstar.combine(pi_expansion, glue)


# ---------------------------------------------------------------------------
# central exponent classification


def casselman_classify(mu_expansion, reg):
    """Classify from the proper terms of a mu*-expansion.

    Every term is (gl_word, classical_word); the trivial term (empty GL
    part) is skipped.  All central exponents positive: 'discrete'; all
    nonnegative: 'tempered'; otherwise 'neither'.
    """
    strict = True
    weak = True
    for (gl, _cls), coeff in mu_expansion.terms.items():
        if not gl or not coeff:
            continue
        weight = sum(reg.dim(s.rho) * s.length * s.twice_midpoint for s in gl)
        if weight <= 0:
            strict = False
        if weight < 0:
            weak = False
    if strict:
        return "discrete"
    if weak:
        return "tempered"
    return "neither"
