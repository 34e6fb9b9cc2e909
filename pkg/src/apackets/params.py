"""Formal parameters: multisets of triples (rho, a, b) with group context.

A summand (rho, a, b) stands for rho x S_a x S_b, optionally twisted by an
unramified exponent.  Tempered means all b = 1; the dual swaps the two SL2
slots.  The lambda multiset collects the restriction to the Weil line, one
entry (rho, x + y) per ladder point, and r() counts the dual pairs in it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .arith import ZERO, HalfInt, ladder


class MalformedDual(ValueError):
    """Summands of the wrong type do not pair off into dual pairs."""


@dataclass(frozen=True)
class Summand:
    rho: str
    a: int
    b: int
    twist: HalfInt = ZERO

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise ValueError("block sizes must be positive")

    def key(self):
        return (self.rho, self.a, self.b, self.twist.twice)

    def swap(self):
        return Summand(self.rho, self.b, self.a, self.twist)

    def __str__(self):
        core = f"{self.rho}[{self.a},{self.b}]"
        if self.twist != ZERO:
            core += f"@{self.twist}"
        return core


GROUP_KINDS = ("so-odd", "sp", "o-even", "u")


@dataclass(frozen=True)
class GroupType:
    kind: str
    rank: int  # N, the dimension of the standard representation of the dual
    eta: str = "1"  # discriminant character label, o-even only; opaque

    def __post_init__(self):
        if self.kind not in GROUP_KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")

    @property
    def required_sign(self):
        if self.kind == "so-odd":
            return -1
        if self.kind in ("sp", "o-even"):
            return 1
        return 1 if self.rank % 2 else -1  # unitary: (-1)**(n-1)

    def __str__(self):
        return f"{self.kind}({self.rank})"


@dataclass(frozen=True)
class AParameter:
    summands: tuple  # sorted ((Summand, mult), ...)
    group: GroupType | None = None

    @staticmethod
    def of(items, group=None):
        """Build from an iterable of Summand or (Summand, mult)."""
        counts = Counter()
        for item in items:
            if isinstance(item, tuple):
                s, m = item
                counts[s] += m
            else:
                counts[item] += 1
        if any(m < 0 for m in counts.values()):
            raise ValueError("negative multiplicity")
        return AParameter(
            tuple(sorted(((s, m) for s, m in counts.items() if m), key=lambda p: p[0].key())),
            group,
        )

    def classes(self):
        return self.summands

    def expanded(self):
        out = []
        for s, m in self.summands:
            out.extend([s] * m)
        return out

    def mult(self, s):
        for t, m in self.summands:
            if t == s:
                return m
        return 0

    def counter(self):
        return Counter(dict(self.summands))

    def add(self, s, k=1):
        c = self.counter()
        c[s] += k
        return AParameter.of(c.items(), self.group)

    def remove(self, s, k=1):
        c = self.counter()
        c[s] -= k
        if c[s] < 0:
            raise ValueError(f"cannot remove {k} copies of {s}")
        return AParameter.of(c.items(), self.group)

    def with_group(self, group):
        return AParameter(self.summands, group)

    def dim(self, reg):
        return sum(m * reg.dim(s.rho) * s.a * s.b for s, m in self.summands)

    def is_tempered(self):
        return all(s.b == 1 for s, _ in self.summands)

    def is_cotempered(self):
        return all(s.a == 1 for s, _ in self.summands)

    def is_multiplicity_free(self):
        return all(m == 1 for _, m in self.summands)

    def __str__(self):
        if not self.summands:
            return "0"
        return " + ".join(
            (f"{m}*{s}" if m > 1 else str(s)) for s, m in self.summands
        )


# ---------------------------------------------------------------------------
# operations


def type_of(s, reg):
    """Self-duality type of rho x S_a x S_b: +1, -1, or None."""
    sign = reg.sign(s.rho)
    if sign is None or s.twist != ZERO:
        return None
    return sign * (-1) ** (s.a + s.b)


def dual_summand(s, reg):
    return Summand(reg.dual(s.rho), s.a, s.b, -s.twist)


def good_parity(psi, reg):
    if psi.group is None:
        raise ValueError("good parity needs a group context")
    want = psi.group.required_sign
    return all(type_of(s, reg) == want for s, _ in psi.summands)


def good_bad_split(psi, reg):
    """Split psi = bad + good + dual(bad); returns (good, bad_half)."""
    want = psi.group.required_sign if psi.group else None
    good, rest = Counter(), Counter()
    for s, m in psi.summands:
        if type_of(s, reg) == want:
            good[s] += m
        else:
            rest[s] += m
    bad = Counter()
    for s in sorted(rest, key=lambda x: x.key()):
        if not rest[s]:
            continue
        d = dual_summand(s, reg)
        if d == s:
            if rest[s] % 2:
                raise MalformedDual(f"{s} is self-paired with odd multiplicity")
            bad[s] = rest[s] // 2
            rest[s] = 0
        else:
            if rest[s] != rest.get(d, 0):
                raise MalformedDual(f"{s} and {d} have unequal multiplicities")
            bad[s] = rest[s]
            rest[s] = rest[d] = 0
    return AParameter.of(good.items(), psi.group), AParameter.of(bad.items())


def aubert_dual(psi):
    """Swap the two SL2 slots of every summand: an involution."""
    return AParameter.of(((s.swap(), m) for s, m in psi.summands), psi.group)


def clebsch_gordan(a, b):
    """S_a (x) S_b = sum of S_(a+b-1-2k), k = 0..min(a,b)-1."""
    return [a + b - 1 - 2 * k for k in range(min(a, b))]


def sl2_diag(psi, which):
    """Restrict to one diagonal SL2: 'D' keeps slot one, 'A' keeps slot two."""
    if which not in ("D", "A"):
        raise ValueError("which must be 'D' or 'A'")
    out = Counter()
    for s, m in psi.summands:
        for c in clebsch_gordan(s.a, s.b):
            t = Summand(s.rho, c, 1, s.twist) if which == "D" else Summand(s.rho, 1, c, s.twist)
            out[t] += m
    return AParameter.of(out.items(), psi.group)


def lambda_exponents(psi, reg):
    """The Weil-line restriction as a Counter {(symbol, 2*exponent): mult}."""
    out = Counter()
    for s, m in psi.summands:
        for x in ladder(s.a):
            for y in ladder(s.b):
                e = s.twist + x + y
                out[(s.rho, e.twice)] += m
    return out


def r_of(psi, reg):
    """Number of dual pairs extractable from the lambda multiset."""
    lam = lambda_exponents(psi, reg)
    r = 0
    seen = set()
    for (rho, e2), m in sorted(lam.items()):
        if (rho, e2) in seen:
            continue
        drho = reg.dual(rho)
        mate = (drho, -e2)
        if mate == (rho, e2):
            # conjugate-self-dual line: pairs with itself
            r += m // 2
            seen.add((rho, e2))
        else:
            m2 = lam.get(mate, 0)
            if m2 != m:
                raise MalformedDual(
                    f"lambda multiset is not self-dual at {rho}|.|^({e2}/2)"
                )
            r += m
            seen.add((rho, e2))
            seen.add(mate)
    return r


def r_of_brute(psi, reg):
    """Greedy pairing oracle over the expanded lambda multiset."""
    entries = []
    for (rho, e2), m in lambda_exponents(psi, reg).items():
        entries.extend([(rho, e2)] * m)
    used = [False] * len(entries)
    r = 0
    for i, (rho, e2) in enumerate(entries):
        if used[i]:
            continue
        mate = (reg.dual(rho), -e2)
        for j in range(i + 1, len(entries)):
            if not used[j] and entries[j] == mate:
                used[i] = used[j] = True
                r += 1
                break
    return r
