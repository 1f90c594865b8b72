"""Equational rewriting of path sums and normalization to unique forms.

The rule set splits a sum's amplitude into an exact constant, a phase
polynomial (monomials weighted by eighth-root-of-unity residues), and
residual factors.  Variable-elimination rules match on that view:

  E     drop a summed variable that occurs nowhere, factor 2
  H     interference: eliminate the pair y, x from (-1)^(y(x+f)), factor 2
  omega eliminate y from i^y (-1)^(y f), factor omega*sqrt(2)
  Hgen  generalized interference with a partial substitution solution
  Hrel  merge two independent sign constraints into one, factor 2
  Z     a bare (-1)^y saturates the sum to zero
  S     replace a sum over y by the two-point amplitude sum (full mode)
  A     average a paired power (a^y b^(not y))^f into ((a+b)/2)^f, factor 2
  O     split one summed variable across an exponent-orthogonal product,
        factor 1/2 (the directed form used by field-mode normalization)

Ring-mode normalization eliminates every internal variable with S and
tabulates the residue; field-mode normalization tabulates first and then
eliminates internal variables pairwise through O and A with exact scalar
bookkeeping.  Equal operators always produce identical serialized forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from . import rexpr
from .boolexpr import BoolExpr, Var, sorted_monomials
from .rexpr import Add, Const, Mul, Pow, RExpr, TableSizeError
from .rings import Ring, RingElem
from .sums import PathSum, to_state

Monomial = frozenset[Var]

RULE_IDS = ("E", "H", "omega", "Hgen", "Hrel", "Z", "S", "O", "A")

STRATEGIES = {
    "none": (),
    "cliff": ("E", "H", "omega"),
    "th": ("E", "H", "Hgen", "Hrel", "Z"),
    "cliff+th": ("E", "H", "omega", "Hgen", "Hrel", "Z"),
}


@dataclass(frozen=True)
class RewriteStep:
    """One replayable rule application: the rule, where, and size change."""

    rule: str
    site: tuple[str, ...]
    bound_before: int
    bound_after: int
    size_before: int
    size_after: int

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "site": list(self.site),
            "bound": [self.bound_before, self.bound_after],
            "size": [self.size_before, self.size_after],
        }


def _step(rule: str, site: tuple, before: PathSum, after: PathSum) -> RewriteStep:
    return RewriteStep(
        rule,
        tuple(str(s) for s in site),
        len(before.bound),
        len(after.bound),
        rexpr.node_count(before.amplitude),
        rexpr.node_count(after.amplitude),
    )


# ---------------------------------------------------------------------------
# Amplitude factorization into constant, phase polynomial, residual factors


@dataclass
class Factored:
    const: RingElem
    phase: dict[Monomial, int]
    residual: list[RExpr]

    def monomials_with(self, v: Var) -> list[Monomial]:
        return [m for m in self.phase if v in m]

    def residual_vars(self) -> frozenset[Var]:
        out: frozenset[Var] = frozenset()
        for r in self.residual:
            out |= rexpr.free_vars(r)
        return out


def _root_residue(c: RingElem, ring: Ring) -> Optional[int]:
    """Express c as a power of the primitive eighth root, if possible."""
    if c == ring.one:
        return 0
    if c == ring.from_int(-1):
        return 4
    if ring.has_omega:
        w = ring.omega()
        acc = w
        for j in range(1, 8):
            if c == acc:
                return j
            acc = acc * w
    return None


def _residue_const(j: int, ring: Ring) -> RingElem:
    if j % 8 == 0:
        return ring.one
    if j % 8 == 4:
        return ring.from_int(-1)
    return ring.pow(ring.omega(), j % 8)


def _phase_add(phase: dict[Monomial, int], j: int, f: BoolExpr) -> None:
    """Fold (zeta^j)^f into the phase polynomial.

    XOR exponents decompose through the lifting: the two parts get weight j
    and their product weight -2j, so weight-4 terms stay linear in the
    number of monomials.
    """
    j %= 8
    if j == 0 or f.is_zero:
        return
    monos = sorted_monomials(f)
    if len(monos) == 1:
        m = monos[0]
        new = (phase.get(m, 0) + j) % 8
        if new:
            phase[m] = new
        else:
            phase.pop(m, None)
        return
    f1 = BoolExpr([monos[0]])
    f2 = BoolExpr(monos[1:])
    _phase_add(phase, j, f1)
    _phase_add(phase, j, f2)
    _phase_add(phase, -2 * j, f1 * f2)


def factorize(amp: RExpr, ring: Ring) -> Factored:
    """Split an amplitude into constant, phase polynomial and residual."""
    const = ring.one
    phase: dict[Monomial, int] = {}
    residual: list[RExpr] = []
    for f in rexpr.factors(amp):
        if isinstance(f, Const):
            const = const * f.value
        elif isinstance(f, Pow) and isinstance(f.base, Const):
            j = _root_residue(f.base.value, ring)
            if j is None:
                residual.append(f)
            else:
                _phase_add(phase, j, f.exp)
        else:
            residual.append(f)
    return Factored(const, phase, residual)


def rebuild(fact: Factored, ring: Ring) -> RExpr:
    """Reassemble a factored amplitude deterministically."""
    parts: list[RExpr] = [Const(fact.const)]
    for m in sorted(fact.phase, key=lambda m: tuple(sorted(v.id for v in m))):
        parts.append(Pow(Const(_residue_const(fact.phase[m], ring)), BoolExpr([m])))
    parts.extend(fact.residual)
    return rexpr.mul_chain(parts, ring)


def _outputs_vars(psi: PathSum) -> frozenset[Var]:
    out: frozenset[Var] = frozenset()
    for f in psi.outputs:
        out |= f.free_vars()
    return out


def _with(psi: PathSum, *, bound=None, amplitude=None, outputs=None) -> PathSum:
    return PathSum(
        psi.ring,
        psi.inputs,
        psi.bound if bound is None else tuple(bound),
        psi.amplitude if amplitude is None else amplitude,
        psi.outputs if outputs is None else tuple(outputs),
        psi.pool,
    )


def _substituted(psi: PathSum, fact: Factored, x: Var, image: BoolExpr,
                 new_bound: tuple[Var, ...]) -> PathSum:
    """Rebuild a sum after consuming phase terms, substituting x := image."""
    ring = psi.ring
    phase: dict[Monomial, int] = {}
    for m, j in fact.phase.items():
        if x in m:
            _phase_add(phase, j, BoolExpr([m - {x}]) * image)
        else:
            _phase_add(phase, j, BoolExpr([m]))
    residual = [rexpr.substitute(r, x, image) for r in fact.residual]
    amp = rebuild(Factored(fact.const, phase, residual), ring)
    outputs = tuple(f.substitute(x, image) for f in psi.outputs)
    return _with(psi, bound=new_bound, amplitude=amp, outputs=outputs)


# ---------------------------------------------------------------------------
# Individual rules


def _xor_residues(fact: Factored, y: Var) -> Optional[BoolExpr]:
    """XOR of the y-cofactors when every y-monomial carries a bare sign."""
    g = BoolExpr.zero()
    for m in fact.monomials_with(y):
        if fact.phase[m] != 4:
            return None
        g = g ^ BoolExpr([m - {y}])
    return g


def _apply_e(psi: PathSum, y: Var, fact: Factored) -> Optional[PathSum]:
    if fact.monomials_with(y) or y in fact.residual_vars() or y in _outputs_vars(psi):
        return None
    fact2 = Factored(fact.const * psi.ring.from_int(2), dict(fact.phase), fact.residual)
    bound = tuple(v for v in psi.bound if v != y)
    return _with(psi, bound=bound, amplitude=rebuild(fact2, psi.ring))


def _apply_z(psi: PathSum, y: Var, fact: Factored) -> Optional[PathSum]:
    if y in fact.residual_vars() or y in _outputs_vars(psi):
        return None
    if fact.monomials_with(y) != [frozenset([y])]:
        return None
    if fact.phase[frozenset([y])] != 4:
        return None
    bound = tuple(v for v in psi.bound if v != y)
    return _with(psi, bound=bound, amplitude=Const(psi.ring.zero))


def _apply_h(psi: PathSum, y: Var, x: Var, fact: Factored) -> Optional[PathSum]:
    if x == y or x not in psi.bound or y not in psi.bound:
        return None
    if y in fact.residual_vars() or y in _outputs_vars(psi):
        return None
    g = _xor_residues(fact, y)
    if g is None:
        return None
    mono_x = frozenset([x])
    if mono_x not in g.monomials:
        return None
    f = g ^ BoolExpr.var(x)
    if x in f.free_vars() or y in g.free_vars():
        return None
    consumed = dict(fact.phase)
    for m in fact.monomials_with(y):
        del consumed[m]
    fact2 = Factored(fact.const * psi.ring.from_int(2), consumed, fact.residual)
    bound = tuple(v for v in psi.bound if v not in (x, y))
    return _substituted(psi, fact2, x, f, bound)


def _apply_omega(psi: PathSum, y: Var, fact: Factored) -> Optional[PathSum]:
    ring = psi.ring
    if not ring.has_omega:
        return None
    if y in fact.residual_vars() or y in _outputs_vars(psi):
        return None
    mono_y = frozenset([y])
    j = fact.phase.get(mono_y)
    if j not in (2, 6):
        return None
    f = BoolExpr.zero()
    for m in fact.monomials_with(y):
        if m == mono_y:
            continue
        if fact.phase[m] != 4:
            return None
        f = f ^ BoolExpr([m - {y}])
    if y in f.free_vars():
        return None
    phase = {m: r for m, r in fact.phase.items() if y not in m}
    # sum_y i^y (-1)^(y f) = (1 + i) (-i)^f and conjugate for (-i)^y.
    if j == 2:
        scale = ring.one + ring.imag_unit()
        _phase_add(phase, 6, f)
    else:
        scale = ring.one - ring.imag_unit()
        _phase_add(phase, 2, f)
    fact2 = Factored(fact.const * scale, phase, fact.residual)
    bound = tuple(v for v in psi.bound if v != y)
    return _with(psi, bound=bound, amplitude=rebuild(fact2, ring))


def _apply_hgen(psi: PathSum, y: Var, x: Var, fact: Factored) -> Optional[PathSum]:
    if x == y or x not in psi.bound or y not in psi.bound:
        return None
    if y in fact.residual_vars() or y in _outputs_vars(psi):
        return None
    big = _xor_residues(fact, y)
    if big is None:
        return None
    # Split the cofactor as x*g xor c with both parts x-free.
    g = BoolExpr.zero()
    c = BoolExpr.zero()
    for m in big.monomials:
        if x in m:
            g = g ^ BoolExpr([m - {x}])
        else:
            c = c ^ BoolExpr([m])
    if g.is_zero or y in g.free_vars() or y in c.free_vars():
        return None
    # Solvability of g*f = c xor 1: equivalent to (g xor 1)(c xor 1) = 0.
    if not ((g ^ BoolExpr.one()) * (c ^ BoolExpr.one())).is_zero:
        return None
    consumed = dict(fact.phase)
    for m in fact.monomials_with(y):
        del consumed[m]
    _phase_add(consumed, 4, BoolExpr.var(y) * (g ^ BoolExpr.one()))
    fact2 = Factored(fact.const, consumed, fact.residual)
    bound = tuple(v for v in psi.bound if v != x)
    # The substituted value 1 xor f is exactly c.
    return _substituted(psi, fact2, x, c, bound)


def _apply_hrel(psi: PathSum, y: Var, x: Var, fact: Factored) -> Optional[PathSum]:
    if x == y or x not in psi.bound or y not in psi.bound:
        return None
    blocked = fact.residual_vars() | _outputs_vars(psi)
    if y in blocked or x in blocked:
        return None
    f = _xor_residues(fact, y)
    g = _xor_residues(fact, x)
    if f is None or g is None:
        return None
    if x in f.free_vars() or y in g.free_vars():
        return None
    phase = {m: r for m, r in fact.phase.items() if x not in m and y not in m}
    _phase_add(phase, 4, BoolExpr.var(y) * (f ^ g ^ (f * g)))
    fact2 = Factored(fact.const * psi.ring.from_int(2), phase, fact.residual)
    bound = tuple(v for v in psi.bound if v != x)
    return _with(psi, bound=bound, amplitude=rebuild(fact2, psi.ring))


def _apply_s(psi: PathSum, y: Var) -> Optional[PathSum]:
    if y not in psi.bound or y in _outputs_vars(psi):
        return None
    amp0 = rexpr.substitute(psi.amplitude, y, BoolExpr.zero())
    amp1 = rexpr.substitute(psi.amplitude, y, BoolExpr.one())
    bound = tuple(v for v in psi.bound if v != y)
    return _with(psi, bound=bound, amplitude=Add(amp0, amp1))


def _paired_power(f: RExpr, y: Var, ring: Ring):
    """Match Pow(a^y * b^(not y), f) and return (a, b, f)."""
    if not isinstance(f, Pow) or not isinstance(f.base, Mul):
        return None
    parts = rexpr.factors(f.base)
    if len(parts) != 2:
        return None
    p, q = parts
    if not (isinstance(p, Pow) and isinstance(q, Pow)):
        return None
    if not (isinstance(p.base, Const) and isinstance(q.base, Const)):
        return None
    ey, eny = BoolExpr.var(y), ~BoolExpr.var(y)
    if p.exp == ey and q.exp == eny:
        return p.base.value, q.base.value, f.exp
    if p.exp == eny and q.exp == ey:
        return q.base.value, p.base.value, f.exp
    return None


def _apply_a(psi: PathSum, y: Var) -> Optional[PathSum]:
    ring = psi.ring
    if not ring.has_half:
        return None
    if y not in psi.bound or y in _outputs_vars(psi):
        return None
    parts = rexpr.factors(psi.amplitude)
    hit = None
    for i, f in enumerate(parts):
        if y in rexpr.free_vars(f):
            if hit is not None:
                return None
            m = _paired_power(f, y, ring)
            if m is None:
                return None
            hit = (i, m)
    if hit is None:
        return None
    i, (a, b, exp) = hit
    if y in exp.free_vars():
        return None
    avg = (a + b) * ring.half()
    parts = parts[:i] + [Pow(Const(avg), exp)] + parts[i + 1:]
    amp = rexpr.mul_chain([Const(ring.from_int(2))] + parts, ring)
    bound = tuple(v for v in psi.bound if v != y)
    return _with(psi, bound=bound, amplitude=amp)


def _divisible(e: BoolExpr, x: Var, polarity: int) -> bool:
    """Whether the exponent vanishes when x is fixed to 1 - polarity."""
    return e.substitute(x, BoolExpr.const(1 - polarity)).is_zero


def _apply_o(psi: PathSum, y: Var, x: Var) -> Optional[PathSum]:
    """Directed ortho split: duplicate y across an x / not-x factored
    amplitude, inserting the 1/2 factor."""
    ring = psi.ring
    if not ring.has_half:
        return None
    if x == y or y not in psi.bound or y in _outputs_vars(psi):
        return None
    if x not in psi.bound and x not in psi.inputs:
        return None
    parts = rexpr.factors(psi.amplitude)
    keep: list[RExpr] = []
    move: list[RExpr] = []
    touched = False
    for f in parts:
        if y not in rexpr.free_vars(f):
            keep.append(f)
            continue
        touched = True
        if not isinstance(f, Pow):
            return None
        if _divisible(f.exp, x, 1):
            keep.append(f)
        elif _divisible(f.exp, x, 0):
            move.append(f)
        else:
            return None
    if not touched or not move:
        return None
    z = psi.pool.fresh(f"{y.name}'")
    moved = [rexpr.substitute(f, y, BoolExpr.var(z)) for f in move]
    amp = rexpr.mul_chain([Const(ring.half())] + keep + moved, ring)
    at = psi.bound.index(y)
    bound = psi.bound[: at + 1] + (z,) + psi.bound[at + 1:]
    return _with(psi, bound=bound, amplitude=amp)


def apply_rule(rule: str, psi: PathSum, site: tuple[Var, ...]) -> Optional[PathSum]:
    """Apply one rule at an explicit site; None when the pattern fails."""
    if rule in ("E", "H", "omega", "Hgen", "Hrel", "Z"):
        fact = factorize(psi.amplitude, psi.ring)
        if rule == "E":
            return _apply_e(psi, site[0], fact)
        if rule == "Z":
            return _apply_z(psi, site[0], fact)
        if rule == "omega":
            return _apply_omega(psi, site[0], fact)
        if rule == "H":
            return _apply_h(psi, site[0], site[1], fact)
        if rule == "Hgen":
            return _apply_hgen(psi, site[0], site[1], fact)
        return _apply_hrel(psi, site[0], site[1], fact)
    if rule == "S":
        return _apply_s(psi, site[0])
    if rule == "A":
        return _apply_a(psi, site[0])
    if rule == "O":
        return _apply_o(psi, site[0], site[1])
    raise ValueError(f"unknown rule {rule!r}")


def find_rule(rule: str, psi: PathSum) -> Optional[tuple[PathSum, RewriteStep]]:
    """First applicable site in bound-variable order, applied."""
    pair_rules = {"H", "Hgen", "Hrel", "O"}
    for y in psi.bound:
        if rule in pair_rules:
            others = psi.bound if rule != "O" else psi.bound + psi.inputs
            for x in others:
                if x == y:
                    continue
                out = apply_rule(rule, psi, (y, x))
                if out is not None:
                    return out, _step(rule, (y, x), psi, out)
        else:
            out = apply_rule(rule, psi, (y,))
            if out is not None:
                return out, _step(rule, (y,), psi, out)
    return None


def reduce_rewrite_first(
    psi: PathSum, strategy: str = "cliff", trace: Optional[list[RewriteStep]] = None
) -> PathSum:
    """Apply the strategy's rules to a fixpoint, cheapest eliminations first.

    Every rule in the loop strictly decreases the number of summed
    variables, so the loop terminates.
    """
    try:
        rules = STRATEGIES[strategy]
    except KeyError:
        raise ValueError(f"unknown strategy {strategy!r}") from None
    rules = tuple(r for r in rules if r != "omega" or psi.ring.has_omega)
    progress = True
    while progress:
        progress = False
        for rule in rules:
            hit = find_rule(rule, psi)
            if hit is not None:
                psi, step = hit
                if trace is not None:
                    trace.append(step)
                progress = True
                break
    return psi


# ---------------------------------------------------------------------------
# Normal forms


@dataclass(frozen=True)
class NormalForm:
    """Dense amplitude vector of a closed sum; index bits follow wire order."""

    n_bits: int
    entries: tuple[RingElem, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != 1 << self.n_bits:
            raise ValueError("entry count must be 2^n_bits")

    def bits(self, index: int) -> str:
        return format(index, f"0{self.n_bits}b") if self.n_bits else ""

    def nonzero(self, ring: Ring) -> list[tuple[str, RingElem]]:
        z = ring.zero
        return [
            (self.bits(i), e) for i, e in enumerate(self.entries) if e != z
        ]

    def serialize(self, ring: Ring) -> str:
        body = ",".join(ring.format(e) for e in self.entries)
        return f"[{self.n_bits}]{body}"

    def to_json(self, ring: Ring) -> dict:
        return {
            "bits": self.n_bits,
            "entries": [ring.format(e) for e in self.entries],
        }


def _closed_with_fresh_outputs(psi: PathSum) -> tuple[PathSum, tuple[Var, ...]]:
    """Rewrite the ket over fresh variables, filtered by equality indicators.

    Each output expression f becomes a summed variable z with the lifted
    indicator 0^(z xor f) in the amplitude, which is exact over every ring;
    an interference pair would smuggle in a factor of 2 per output that
    rings without 1/2 cannot cancel.
    """
    ring = psi.ring
    zs = tuple(psi.pool.fresh(f"z{i}") for i in range(psi.n_out))
    zero = Const(ring.zero)
    parts = [psi.amplitude]
    for z, f in zip(zs, psi.outputs):
        parts.append(Pow(zero, BoolExpr.var(z) ^ f))
    amp = rexpr.mul_chain(parts, ring)
    out = PathSum(
        ring,
        (),
        psi.bound + zs,
        amp,
        tuple(BoolExpr.var(z) for z in zs),
        psi.pool,
    )
    return out, zs


def normalize_ring(
    psi: PathSum,
    max_bits: int = 20,
    trace: Optional[list[RewriteStep]] = None,
) -> NormalForm:
    """Unique normal form of a closed sum over any commutative ring.

    Fresh output variables are introduced through interference pairs, every
    internal variable is evaluated away by the two-point sum rule, and the
    residual amplitude is tabulated over the output variables.
    """
    if not psi.is_closed:
        raise ValueError("normal forms are defined on closed sums")
    closed, zs = _closed_with_fresh_outputs(psi)
    internals = tuple(v for v in closed.bound if v not in zs)
    if len(internals) + len(zs) > max_bits:
        raise TableSizeError(
            f"{len(internals) + len(zs)} variables exceed the cap of {max_bits}"
        )
    current = closed
    for v in internals:
        nxt = _apply_s(current, v)
        if trace is not None:
            trace.append(_step("S", (v,), current, nxt))
        current = nxt
    table = rexpr.normalize(current.amplitude, zs, psi.ring, mode="full",
                            max_bits=max_bits)
    return NormalForm(len(zs), table.entries)


def normalize_field(
    psi: PathSum,
    max_bits: int = 20,
    trace: Optional[list[RewriteStep]] = None,
) -> NormalForm:
    """Unique normal form of a closed multiplicative sum over a field.

    The amplitude is tabulated over all variables first; each internal
    variable is then eliminated pairwise: one ortho split per pair minus
    one, one averaging per pair, and the 2^P / 2^(P-1) scalars folded
    exactly.
    """
    ring = psi.ring
    if not psi.is_closed:
        raise ValueError("normal forms are defined on closed sums")
    if not ring.is_field or ring.char == 2:
        raise ValueError("field-mode normalization needs a field of odd or zero characteristic")
    if not psi.is_multiplicative():
        raise rexpr.MultiplicativeModeError("sum node in multiplicative mode")
    closed, zs = _closed_with_fresh_outputs(psi)
    all_vars = tuple(sorted(closed.bound, key=lambda v: v.id))
    if len(all_vars) > max_bits:
        raise TableSizeError(f"{len(all_vars)} variables exceed the cap of {max_bits}")
    table = rexpr.normalize(closed.amplitude, all_vars, ring,
                            mode="multiplicative", max_bits=max_bits)
    vars_left = list(all_vars)
    entries = list(table.entries)
    half = ring.half()
    two = ring.from_int(2)
    internals = [v for v in all_vars if v not in zs]
    for v in reversed(internals):
        pos = vars_left.index(v)
        m = len(vars_left)
        pairs = len(entries) // 2
        # P - 1 ortho splits each emit 1/2; P averages each emit 2.
        scalar = ring.pow(two, pairs) * ring.pow(half, pairs - 1)
        lo = m - 1 - pos
        merged: list[RingElem] = []
        for idx in range(pairs):
            high, low = idx >> lo, idx & ((1 << lo) - 1)
            i0 = (high << (lo + 1)) | low
            i1 = i0 | (1 << lo)
            merged.append(scalar * ((entries[i0] + entries[i1]) * half))
        entries = merged
        vars_left.pop(pos)
        if trace is not None:
            trace.append(
                RewriteStep(
                    "O/A", (str(v), f"pairs={pairs}"),
                    m, m - 1, 2 * pairs, pairs,
                )
            )
    # Output variables were allocated in wire order, so ascending id order
    # already matches the wire order of the closed sum.
    assert vars_left == sorted(zs, key=lambda v: v.id)
    return NormalForm(len(zs), tuple(entries))


# ---------------------------------------------------------------------------
# Equivalence decision


@dataclass
class EquivalenceConfig:
    theory: str = "ring"
    strategy: str = "none"
    max_bits: int = 20


@dataclass
class EquivalenceResult:
    equal: bool
    n_bits: int
    counterexample: Optional[tuple[int, str, str]] = None
    steps: list[RewriteStep] = field(default_factory=list)

    def to_json(self) -> dict:
        out: dict = {"equal": self.equal, "bits": self.n_bits}
        if self.counterexample is not None:
            index, lhs, rhs = self.counterexample
            out["counterexample"] = {
                "index": format(index, f"0{self.n_bits}b"),
                "left": lhs,
                "right": rhs,
            }
        out["trace"] = [s.to_json() for s in self.steps]
        return out


def normal_form_of(
    psi: PathSum, config: EquivalenceConfig, trace: Optional[list[RewriteStep]] = None
) -> NormalForm:
    """Reduce, close and normalize one operator under the configuration."""
    if config.strategy != "none":
        psi = reduce_rewrite_first(psi, config.strategy, trace)
    if not psi.is_closed:
        psi = to_state(psi)
    if config.theory == "field":
        return normalize_field(psi, config.max_bits, trace)
    if config.theory == "ring":
        return normalize_ring(psi, config.max_bits, trace)
    raise ValueError(f"unknown theory {config.theory!r}")


def equivalent(
    psi: PathSum, phi: PathSum, config: Optional[EquivalenceConfig] = None
) -> EquivalenceResult:
    """Decide operator equality by comparing unique normal forms."""
    config = config or EquivalenceConfig()
    if psi.ring is not phi.ring:
        raise ValueError("operators live over different rings")
    if (psi.n_in, psi.n_out) != (phi.n_in, phi.n_out):
        raise ValueError(
            f"arity mismatch: {psi.n_in}->{psi.n_out} vs {phi.n_in}->{phi.n_out}"
        )
    steps: list[RewriteStep] = []
    lhs = normal_form_of(psi, config, steps)
    rhs = normal_form_of(phi, config, steps)
    ring = psi.ring
    for i, (a, b) in enumerate(zip(lhs.entries, rhs.entries)):
        if a != b:
            return EquivalenceResult(
                False, lhs.n_bits, (i, ring.format(a), ring.format(b)), steps
            )
    return EquivalenceResult(True, lhs.n_bits, None, steps)


# ---------------------------------------------------------------------------
# Canonical syntactic keys for reduced sums


def _var_signature(v: Var, psi: PathSum, fact: Factored) -> tuple:
    outs = tuple(
        i for i, f in enumerate(psi.outputs) if v in f.free_vars()
    )
    phases = tuple(
        sorted((fact.phase[m], len(m)) for m in fact.phase if v in m)
    )
    return (outs, phases)


def canonical_key(psi: PathSum) -> str:
    """Serialization of a sum that is stable under bound-variable renaming,
    bound-list order, and product-tree shape.

    Structurally symmetric bound variables are resolved by taking the
    lexicographically least labelling among their permutations.
    """
    ring = psi.ring
    fact = factorize(psi.amplitude, ring)
    labels: dict[Var, str] = {v: f"i{k}" for k, v in enumerate(psi.inputs)}
    groups: dict[tuple, list[Var]] = {}
    for v in psi.bound:
        groups.setdefault(_var_signature(v, psi, fact), []).append(v)

    def render(label_of: dict[Var, str]) -> str:
        def mono_str(m: Monomial) -> str:
            return "*".join(sorted(label_of[v] for v in m)) or "1"

        def poly_str(f: BoolExpr) -> str:
            return "+".join(sorted(mono_str(m) for m in f.monomials)) or "0"

        phase = sorted(f"{j}:{mono_str(m)}" for m, j in fact.phase.items())
        outs = [poly_str(f) for f in psi.outputs]
        residual = sorted(str(r) for r in fact.residual)
        return "|".join(
            [ring.format(fact.const), ";".join(phase), ";".join(outs),
             ";".join(residual)]
        )

    ordered_groups = sorted(groups.items(), key=lambda kv: kv[0])
    fixed: list[list[Var]] = [vs for _, vs in ordered_groups]
    total = 1
    for vs in fixed:
        for k in range(2, len(vs) + 1):
            total *= k
    best: Optional[str] = None
    if total > 5040:
        # Too symmetric to disambiguate exhaustively; settle for one labelling.
        perm_sets = [tuple(tuple(vs) for vs in fixed)]
    else:
        perm_sets = itertools.product(
            *(itertools.permutations(vs) if len(vs) > 1 else [tuple(vs)] for vs in fixed)
        )
    for perm_set in perm_sets:
        label_of = dict(labels)
        counter = 0
        for group in perm_set:
            for v in group:
                label_of[v] = f"b{counter}"
                counter += 1
        s = render(label_of)
        if best is None or s < best:
            best = s
    return best if best is not None else render(labels)
