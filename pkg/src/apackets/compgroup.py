"""Component groups of good-parity parameters and their characters.

A_psi is the free F2-module on the summands counted with multiplicity; an
element is a bitmask over those slots.  A0 is spanned by duplicate-pair
sums, A+ is the kernel of the mod-2 dimension map, z is the all-ones
vector, and the packet quotient is A/(A0 + <z>).  Characters are stored on
the distinct constituent classes with the z-relation checked up front, so
they automatically kill A0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .params import AParameter, Summand, good_parity, r_of, sl2_diag, aubert_dual


class BadParity(ValueError):
    """The parameter has a summand that fails good parity."""


def _row_reduce(rows):
    """F2 Gaussian elimination on int bitmasks; returns pivot-sorted basis."""
    basis = []
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
            basis.sort(reverse=True)
    return basis


def _reduce(x, basis):
    for b in basis:
        x = min(x, x ^ b)
    return x


@dataclass(frozen=True)
class ComponentGroupData:
    psi: AParameter
    slots: tuple  # slot i -> (class_index, copy_index)
    dims: tuple  # slot i -> dim(rho)*a*b mod 2
    a0_basis: tuple  # bitmasks spanning A0
    rel_basis: tuple  # row-reduced span of A0 and z

    @property
    def size(self):
        return len(self.slots)

    @property
    def classes(self):
        return self.psi.summands

    def slot_class(self, i):
        return self.classes[self.slots[i][0]][0]

    @property
    def z(self):
        return (1 << self.size) - 1 if self.size else 0

    @property
    def s_psi(self):
        out = 0
        for i in range(self.size):
            if self.slot_class(i).b % 2 == 0:
                out |= 1 << i
        return out

    @property
    def a0_rank(self):
        return len(self.a0_basis)

    @property
    def aplus_rank(self):
        if self.size == 0:
            return 0
        odd = [i for i in range(self.size) if self.dims[i] % 2]
        return self.size - (1 if odd else 0)

    @property
    def quotient_order(self):
        """|A/(A0 + <z>)|, the number of packet characters."""
        return 1 << (self.size - len(self.rel_basis))

    def small_quotient_order(self, kind):
        """|S| for the given group kind (the connected-group quotient)."""
        if kind in ("so-odd", "u"):
            return self.quotient_order
        if kind == "sp":
            return 1 << (self.aplus_rank - len(_row_reduce(list(self.a0_basis))))
        if kind == "o-even":
            return 1 << (self.aplus_rank - len(self.rel_basis))
        raise ValueError(f"unknown group kind {kind!r}")

    def quotient_image(self, x):
        """Canonical representative of x in A/(A0 + <z>)."""
        return _reduce(x, self.rel_basis)

    def element_of(self, picks):
        """Bitmask selecting `count` copies of each (summand, count) pick."""
        out = 0
        for s, count in picks:
            idx = [i for i in range(self.size) if self.slot_class(i) == s]
            if count > len(idx):
                raise ValueError(f"{s} has multiplicity {len(idx)} < {count}")
            for i in idx[:count]:
                out |= 1 << i
        return out

    def split_by_element(self, s):
        """(psi_plus, psi_minus): selected slots go to the minus part."""
        minus = []
        for i in range(self.size):
            if s >> i & 1:
                minus.append(self.slot_class(i))
        plus = self.psi.counter()
        for t in minus:
            plus[t] -= 1
        return (
            AParameter.of(plus.items(), self.psi.group),
            AParameter.of(minus, self.psi.group),
        )

    def to_json_dict(self):
        return {
            "basis": [str(self.slot_class(i)) for i in range(self.size)],
            "a0_rank": self.a0_rank,
            "aplus_rank": self.aplus_rank,
            "z": [i for i in range(self.size) if self.z >> i & 1],
            "s_psi": [i for i in range(self.size) if self.s_psi >> i & 1],
            "quotient_order": self.quotient_order,
        }


def build_component_group(psi, reg):
    if psi.group is not None and not good_parity(psi, reg):
        raise BadParity(f"{psi} is not of good parity")
    slots = []
    dims = []
    for ci, (s, m) in enumerate(psi.summands):
        for k in range(m):
            slots.append((ci, k))
            dims.append(reg.dim(s.rho) * s.a * s.b % 2)
    a0 = []
    i = 0
    for s, m in psi.summands:
        for k in range(m - 1):
            a0.append((1 << (i + k)) | (1 << (i + k + 1)))
        i += m
    z = (1 << len(slots)) - 1 if slots else 0
    rel = _row_reduce(a0 + ([z] if slots else []))
    return ComponentGroupData(psi, tuple(slots), tuple(dims), tuple(a0), tuple(rel))


def s_psi(psi, reg):
    """The distinguished element: sum of slots with even second-SL2 block."""
    return build_component_group(psi, reg).s_psi


# ---------------------------------------------------------------------------
# packet characters


@dataclass(frozen=True)
class PacketCharacter:
    values: tuple  # sorted ((Summand, +-1), ...), one per distinct class

    @staticmethod
    def of(mapping):
        return PacketCharacter(tuple(sorted(mapping.items(), key=lambda p: p[0].key())))

    def value(self, s):
        for t, v in self.values:
            if t == s:
                return v
        raise KeyError(f"no value for class {s}")

    def as_dict(self):
        return dict(self.values)

    def is_valid(self, psi):
        """The induced character of A kills z: prod over classes of v**mult."""
        if {s for s, _ in self.values} != {s for s, _ in psi.summands}:
            return False
        prod = 1
        for s, m in psi.summands:
            prod *= self.value(s) ** (m % 2)
        return prod == 1

    def evaluate(self, cg, element):
        out = 1
        for i in range(cg.size):
            if element >> i & 1:
                out *= self.value(cg.slot_class(i))
        return out

    def __str__(self):
        return ", ".join(f"{s}={'+1' if v == 1 else '-1'}" for s, v in self.values)


def enumerate_characters(psi, reg):
    """All packet characters; their number equals the quotient order."""
    cg = build_component_group(psi, reg)
    classes = [s for s, _ in psi.summands]
    out = []
    for mask in range(1 << len(classes)):
        vals = {s: (-1 if mask >> i & 1 else 1) for i, s in enumerate(classes)}
        ch = PacketCharacter.of(vals)
        if ch.is_valid(psi):
            out.append(ch)
    seen = set()
    unique = []
    for ch in out:
        key = tuple(
            ch.evaluate(cg, cg.quotient_image(1 << i)) for i in range(cg.size)
        )
        if key not in seen:
            seen.add(key)
            unique.append(ch)
    return unique


# ---------------------------------------------------------------------------
# character transfer under duality


def dual_transfer_character(phi, eps, element, reg):
    """Value of the dual character at the mirrored element.

    phi is tempered of good parity, eps its packet character, element a
    bitmask in A_phi; returns (-1)**(r(phi)-r(phi+)-r(phi-)) * eps(element).
    """
    cg = build_component_group(phi, reg)
    plus, minus = cg.split_by_element(element)
    sign = (-1) ** (r_of(phi, reg) - r_of(plus, reg) - r_of(minus, reg))
    return sign * eps.evaluate(cg, element)


def transfer_sign(phi, element, reg):
    """The bare factor (-1)**(r(phi)-r(phi+)-r(phi-))."""
    cg = build_component_group(phi, reg)
    plus, minus = cg.split_by_element(element)
    return (-1) ** (r_of(phi, reg) - r_of(plus, reg) - r_of(minus, reg))


def dual_transfer_simple(phi, rho, d, reg):
    """Closed form of the transfer factor at a single basis element.

    For element e(rho, d, 1): 1 when d is even, else -(-1)**m with m the
    number of constituents of phi with symbol rho (with multiplicity).
    """
    if phi.mult(Summand(rho, d, 1)) < 1:
        raise ValueError(f"{rho} x S_{d} is not a constituent")
    if d % 2 == 0:
        return 1
    m = sum(mult for s, mult in phi.summands if s.rho == rho)
    return -((-1) ** m)


@dataclass(frozen=True)
class GammaQuotientSpec:
    """Deferred request for gamma(num1 (x) c(num2)) / gamma(den1 (x) c(den2))."""

    num: tuple  # (AParameter, AParameter)
    den: tuple  # (AParameter, AParameter)

    def is_trivially_one(self):
        return (not self.num[0].summands or not self.num[1].summands) and (
            not self.den[0].summands or not self.den[1].summands
        )


def cotemp_quotient_general(psi, element, reg):
    """Transfer data for parameters with second-SL2 blocks of size at most 2.

    Returns (sign, spec): the sign (-1)**(r-r+-r-) and a deferred gamma
    quotient  gamma(psi+^A (x) c(psi-^A)) / gamma(dual(psi+) (x) c(dual(psi-)))
    to be evaluated at the centre by the factors module.
    """
    if any(s.b > 2 for s, _ in psi.summands):
        raise ValueError("shape error: a second-SL2 block exceeds 2")
    cg = build_component_group(psi, reg)
    plus, minus = cg.split_by_element(element)
    sign = (-1) ** (r_of(psi, reg) - r_of(plus, reg) - r_of(minus, reg))
    spec = GammaQuotientSpec(
        (sl2_diag(plus, "A"), sl2_diag(minus, "A")),
        (aubert_dual(plus), aubert_dual(minus)),
    )
    return sign, spec
