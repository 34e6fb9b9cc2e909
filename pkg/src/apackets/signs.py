"""Duality sign invariants and the sign-compatibility identity.

beta of a parameter is (-1)**r for tempered, co-tempered and irreducible
shapes; for the mixed shape with second-SL2 blocks of width at most two it
acquires a gamma-quotient correction resolved by the factors module.

beta of a packet member is computed operationally: strip the member down
to a supercuspidal one through the four reduction moves, multiplying the
recorded sign contributions; the base contributes +1.  The identity under
test equates beta(parameter) * beta(member) with the character value at
the distinguished element supported on the even-width classes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import HalfInt
from .compgroup import build_component_group, GammaQuotientSpec
from .factors import PairXModel, gamma_quotient_of_spec
from .params import AParameter, Summand, aubert_dual, r_of, sl2_diag
from .derivatives import EnhancedParameter, is_supercuspidal


class UnsupportedShape(ValueError):
    """The parameter is outside the computed range of shapes."""


def beta_parameter(psi, reg, xmodel=None):
    """The duality sign of a parameter, for the covered shapes."""
    if psi.is_tempered() or psi.is_cotempered():
        return (-1) ** r_of(psi, reg)
    if len(psi.summands) == 1 and psi.summands[0][1] == 1:
        return (-1) ** r_of(psi, reg)
    if all(s.b <= 2 for s, _ in psi.summands):
        sign = (-1) ** r_of(psi, reg)
        if xmodel is None:
            xmodel = PairXModel(reg)
        pieces = psi.expanded()
        value = 1
        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces)):
                pi = AParameter.of([pieces[i]])
                pj = AParameter.of([pieces[j]])
                spec = GammaQuotientSpec(
                    (sl2_diag(pi, "A"), sl2_diag(pj, "A")),
                    (aubert_dual(pi), aubert_dual(pj)),
                )
                value *= gamma_quotient_of_spec(spec, xmodel).as_sign()
        return sign * value
    raise UnsupportedShape(str(psi))


# ---------------------------------------------------------------------------
# the reduction pipeline for members


@dataclass(frozen=True)
class TraceEntry:
    kind: str  # StripDualPair, StripLinkedPair, StripHalfIntBottom, GapShift
    rho: str
    data: tuple
    sign: int  # common contribution to both duality signs


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple
    base: EnhancedParameter

    @property
    def member_sign(self):
        out = 1
        for step in self.steps:
            out *= step.sign
        return out

    def to_json(self):
        return {
            "steps": [
                {"kind": s.kind, "rho": s.rho, "data": list(map(str, s.data)), "sign": s.sign}
                for s in self.steps
            ],
            "base": str(self.base.phi),
            "member_sign": self.member_sign,
        }


def _applicable_moves(e, reg):
    """All reduction moves available right now, tagged by priority."""
    order = {name: i for i, name in enumerate(reg.names())}
    moves = []
    dup = set()
    for s, m in e.phi.summands:
        if m >= 2:
            moves.append((1, order[s.rho], s.a, ("StripDualPair", s.rho, s.a)))
            dup.add(s.rho)
    per_rho = {}
    for s, _ in e.phi.summands:
        per_rho.setdefault(s.rho, []).append(s.a)
    for rho, blocks in per_rho.items():
        if rho in dup:
            # the linked/bottom/gap moves presume a multiplicity-free symbol
            continue
        blocks.sort()
        for lo, hi in zip(blocks, blocks[1:]):
            if e.value(rho, hi) == e.value(rho, lo):
                moves.append((2, order[rho], hi, ("StripLinkedPair", rho, lo, hi)))
        if blocks[0] % 2 == 0 and e.value(rho, blocks[0]) == 1:
            moves.append((3, order[rho], blocks[0], ("StripHalfIntBottom", rho, blocks[0])))
        prev = 0  # formal width below the bottom block (a_0 = -1/2)
        for d in blocks:
            if d - prev > 2:
                moves.append((4, order[rho], d, ("GapShift", rho, d)))
            prev = d
    return sorted(moves)


def _apply_move(e, move):
    kind = move[0]
    if kind == "StripDualPair":
        _, rho, d = move
        out = e.replace([(Summand(rho, d, 1), 2)], [], {})
        return out, TraceEntry(kind, rho, (d,), (-1) ** d)
    if kind == "StripLinkedPair":
        _, rho, lo, hi = move
        out = e.replace([(Summand(rho, lo, 1), 1), (Summand(rho, hi, 1), 1)], [], {})
        return out, TraceEntry(kind, rho, (lo, hi), (-1) ** ((lo + hi) // 2))
    if kind == "StripHalfIntBottom":
        _, rho, d = move
        out = e.replace([(Summand(rho, d, 1), 1)], [], {})
        return out, TraceEntry(kind, rho, (d,), (-1) ** (d // 2))
    if kind == "GapShift":
        _, rho, d = move
        out = e.replace(
            [(Summand(rho, d, 1), 1)],
            [(Summand(rho, d - 2, 1), 1)],
            {Summand(rho, d - 2, 1): e.value(rho, d)},
        )
        return out, TraceEntry(kind, rho, (d,), -1)
    raise ValueError(kind)


def beta_representation(e, reg, picker=None):
    """The member's duality sign, with a replayable trace.

    Moves are applied in priority order with canonical witnesses; a
    `picker(moves)` callback may select any applicable move instead, and
    the outcome is independent of that choice.
    """
    steps = []
    cur = e
    while not is_supercuspidal(cur):
        moves = _applicable_moves(cur, reg)
        if not moves:
            raise AssertionError(f"stuck: {cur.phi} is not supercuspidal")
        chosen = moves[0][3] if picker is None else picker(moves)[3]
        cur, entry = _apply_move(cur, chosen)
        steps.append(entry)
    trace = ReductionTrace(tuple(steps), cur)
    return trace.member_sign, trace


# ---------------------------------------------------------------------------
# the identity


def hat_s_hat_phi(phi, reg):
    """Bitmask of the distinguished element: all even-width slots."""
    cg = build_component_group(phi, reg)
    out = 0
    for i in range(cg.size):
        if cg.slot_class(i).a % 2 == 0:
            out |= 1 << i
    return out


@dataclass(frozen=True)
class AstReport:
    holds: bool
    lhs: int
    rhs: int
    beta_phi: int
    beta_member: int
    trace: ReductionTrace

    def to_json(self):
        return {
            "holds": self.holds,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "beta_parameter": self.beta_phi,
            "beta_member": self.beta_member,
            "trace": self.trace.to_json(),
        }


def verify_ast(e, reg, picker=None):
    """Check beta(phi) * beta(member) = eps(distinguished element).

    Both sides are computed by independent code paths: the left through
    r() and the reduction trace, the right by evaluating the character on
    the even-width slots.  The report carries the full witness.
    """
    phi = e.phi
    beta_phi = (-1) ** r_of(phi, reg)
    beta_member, trace = beta_representation(e, reg, picker)
    lhs = beta_phi * beta_member
    rhs = 1
    for s, m in phi.summands:
        if s.a % 2 == 0:
            rhs *= e.value(s.rho, s.a) ** (m % 2)
    # consistency: the trace must account for beta(phi) as well
    base_beta = (-1) ** r_of(trace.base.phi, reg)
    if beta_phi != trace.member_sign * base_beta:
        raise AssertionError("trace does not reproduce the parameter sign")
    return AstReport(lhs == rhs, lhs, rhs, beta_phi, beta_member, trace)
