"""Cuspidal symbols and their registry.

A symbol is an abstract irreducible unit: a name, a dimension, and a
conjugate-self-duality sign (+1 orthogonal, -1 symplectic, None with an
explicit partner for the non-self-dual case).  Partnering is an involution
so that duals of exponent data are decidable without any representation
theory.  The registry is append-only.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CuspidalSymbol:
    id: str
    dim: int
    selfdual: int | None  # +1, -1 or None
    partner: str | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if self.selfdual is None:
            if self.partner is None:
                raise ValueError(f"{self.id}: non-self-dual symbol needs a partner")
        else:
            if self.selfdual not in (1, -1):
                raise ValueError(f"{self.id}: bad sign {self.selfdual}")
            if self.partner is not None:
                raise ValueError(f"{self.id}: self-dual symbol cannot have a partner")
            if self.selfdual == -1 and self.dim % 2:
                raise ValueError(f"{self.id}: symplectic symbols have even dimension")


class SymbolRegistry:
    def __init__(self):
        self._symbols = {}

    def add(self, id, dim, selfdual, partner=None):
        if id in self._symbols:
            raise ValueError(f"duplicate symbol {id!r}")
        sym = CuspidalSymbol(id, dim, selfdual, partner)
        self._symbols[id] = sym
        return sym

    def add_pair(self, id, partner_id, dim):
        """Register a non-self-dual symbol together with its conjugate-dual."""
        a = self.add(id, dim, None, partner_id)
        b = self.add(partner_id, dim, None, id)
        return a, b

    def __getitem__(self, id):
        return self._symbols[id]

    def __contains__(self, id):
        return id in self._symbols

    def __iter__(self):
        return iter(self._symbols.values())

    def names(self):
        return list(self._symbols)

    def dim(self, id):
        return self._symbols[id].dim

    def sign(self, id):
        return self._symbols[id].selfdual

    def dual(self, id):
        """The class of the conjugate-dual: the symbol itself if self-dual."""
        sym = self._symbols[id]
        return sym.id if sym.selfdual is not None else sym.partner

    def validate(self):
        for sym in self:
            if sym.partner is not None:
                if sym.partner not in self._symbols:
                    raise ValueError(f"{sym.id}: unknown partner {sym.partner}")
                mate = self._symbols[sym.partner]
                if mate.partner != sym.id:
                    raise ValueError(f"partnering of {sym.id} is not an involution")
                if mate.dim != sym.dim:
                    raise ValueError(f"{sym.id}: partner dimension mismatch")
        return self


SIGN_CHARS = {"+": 1, "-": -1, "0": None}


def load_registry(lines):
    """Parse `name dim sign[ partner]` lines, sign in {+,-,0}; '#' comments."""
    reg = SymbolRegistry()
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (3, 4):
            raise ValueError(f"line {lineno}: expected `name dim sign [partner]`")
        name, dim, sign = parts[0], int(parts[1]), parts[2]
        if sign not in SIGN_CHARS:
            raise ValueError(f"line {lineno}: sign must be one of + - 0")
        partner = parts[3] if len(parts) == 4 else None
        reg.add(name, dim, SIGN_CHARS[sign], partner)
    return reg.validate()


def dump_registry(reg):
    lines = []
    inv = {v: k for k, v in SIGN_CHARS.items()}
    for sym in reg:
        tail = f" {sym.partner}" if sym.partner else ""
        lines.append(f"{sym.id} {sym.dim} {inv[sym.selfdual]}{tail}")
    return "\n".join(lines) + "\n"


def default_registry():
    """A small registry with the symbols used by the demos and generators."""
    reg = SymbolRegistry()
    reg.add("chi", 1, 1)
    reg.add("chi2", 1, 1)
    reg.add("chi3", 1, 1)
    reg.add("rho", 2, 1)
    reg.add("sigma", 2, -1)
    reg.add_pair("mu", "mubar", 1)
    return reg.validate()
