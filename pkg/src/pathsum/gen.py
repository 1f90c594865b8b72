"""Seeded random builders: expressions, sums, and rule-shaped instances.

Everything takes an explicit random.Random so failures replay exactly.
The rule instance builders return a sum together with the site the rule
fires at; soundness is then checked against the matrix oracle.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import rexpr
from .boolexpr import BoolExpr, Var, VarPool
from .rexpr import Add, Const, Mul, Pow, RExpr
from .rings import CYC8_FIELD, DOmega, DYADIC_CYC8, INT, QOmega, RATIONAL, Ring
from .sums import PathSum


def random_elem(rng: random.Random, ring: Ring):
    if ring is INT:
        return rng.randint(-4, 4)
    if ring is RATIONAL:
        return Fraction(rng.randint(-4, 4), rng.randint(1, 4))
    if ring is DYADIC_CYC8:
        return DOmega.make(*(rng.randint(-2, 2) for _ in range(4)), k=rng.randint(0, 2))
    if ring is CYC8_FIELD:
        return QOmega.make(
            *(Fraction(rng.randint(-2, 2), rng.randint(1, 2)) for _ in range(4))
        )
    return ring.from_int(rng.randint(0, ring.char - 1))


def random_boolexpr(
    rng: random.Random, vars: tuple[Var, ...], max_monomials: int = 3
) -> BoolExpr:
    out = BoolExpr.zero()
    for _ in range(rng.randint(0, max_monomials)):
        degree = rng.randint(0, min(3, len(vars)))
        out = out ^ BoolExpr.monomial(rng.sample(vars, degree))
    return out


def random_nonzero_boolexpr(
    rng: random.Random, vars: tuple[Var, ...], max_monomials: int = 3
) -> BoolExpr:
    while True:
        f = random_boolexpr(rng, vars, max_monomials)
        if not f.is_zero:
            return f


def random_rexpr(
    rng: random.Random,
    ring: Ring,
    vars: tuple[Var, ...],
    depth: int = 3,
    mode: str = "full",
) -> RExpr:
    roll = rng.random()
    if depth == 0 or roll < 0.35:
        return Const(random_elem(rng, ring))
    if roll < 0.65:
        if rng.random() < 0.8:
            base: RExpr = Const(random_elem(rng, ring))
        else:
            base = random_rexpr(rng, ring, vars, depth - 1, mode)
        return Pow(base, random_boolexpr(rng, vars))
    if roll < 0.85 or mode != "full":
        return Mul(
            random_rexpr(rng, ring, vars, depth - 1, mode),
            random_rexpr(rng, ring, vars, depth - 1, mode),
        )
    return Add(
        random_rexpr(rng, ring, vars, depth - 1, mode),
        random_rexpr(rng, ring, vars, depth - 1, mode),
    )


def random_pathsum(
    rng: random.Random,
    ring: Ring,
    pool: VarPool,
    n_in: int = 0,
    n_out: int = 2,
    n_bound: int = 2,
    mode: str = "full",
    depth: int = 3,
) -> PathSum:
    inputs = pool.fresh_many(n_in)
    bound = tuple(pool.fresh(f"y{i}") for i in range(n_bound))
    vars = inputs + bound
    amp = random_rexpr(rng, ring, vars, depth, mode)
    outputs = tuple(random_boolexpr(rng, vars) for _ in range(n_out))
    return PathSum(ring, inputs, bound, amp, outputs, pool)


def _base_instance(rng: random.Random, ring: Ring, pool: VarPool) -> PathSum:
    return random_pathsum(
        rng,
        ring,
        pool,
        n_in=rng.randint(0, 2),
        n_out=rng.randint(1, 3),
        n_bound=rng.randint(0, 3),
        mode="full",
        depth=2,
    )


def _mul_amp(psi: PathSum, *extra: RExpr) -> RExpr:
    amp = psi.amplitude
    for e in extra:
        amp = Mul(amp, e)
    return amp


def _neg(ring: Ring) -> Const:
    return Const(ring.from_int(-1))


def _sprinkle(
    rng: random.Random, psi: PathSum, x: Var, extra: list[RExpr]
) -> tuple[tuple[BoolExpr, ...], list[RExpr]]:
    """Let the substituted variable x appear in outputs and amplitude."""
    outputs = list(psi.outputs)
    if rng.random() < 0.7:
        i = rng.randrange(len(outputs))
        outputs[i] = outputs[i] ^ BoolExpr.var(x)
    if rng.random() < 0.4:
        others = psi.inputs + psi.bound
        mono = BoolExpr.var(x) * random_boolexpr(rng, others, 1)
        extra = extra + [Pow(_neg(psi.ring), mono)]
    return tuple(outputs), extra


def rule_instance(
    rule: str, rng: random.Random, ring: Ring, pool: VarPool
) -> tuple[PathSum, tuple[Var, ...]]:
    """A random sum guaranteed to match the rule at the returned site."""
    psi = _base_instance(rng, ring, pool)
    others = psi.inputs + psi.bound
    y = pool.fresh("y")
    if rule == "E":
        return PathSum(ring, psi.inputs, psi.bound + (y,), psi.amplitude,
                       psi.outputs, pool), (y,)
    if rule == "Z":
        amp = _mul_amp(psi, Pow(_neg(ring), BoolExpr.var(y)))
        return PathSum(ring, psi.inputs, psi.bound + (y,), amp,
                       psi.outputs, pool), (y,)
    if rule == "S":
        extra = Pow(
            Const(random_elem(rng, ring)),
            BoolExpr.var(y) * random_boolexpr(rng, others, 2),
        )
        amp = _mul_amp(psi, extra)
        if rng.random() < 0.3:
            amp = Add(amp, rexpr.substitute(amp, y, ~BoolExpr.var(y)))
        return PathSum(ring, psi.inputs, psi.bound + (y,), amp,
                       psi.outputs, pool), (y,)
    if rule == "omega":
        f = random_boolexpr(rng, others, 2)
        i_unit = Const(ring.imag_unit())
        amp = _mul_amp(
            psi,
            Pow(i_unit, BoolExpr.var(y)),
            Pow(_neg(ring), BoolExpr.var(y) * f),
        )
        return PathSum(ring, psi.inputs, psi.bound + (y,), amp,
                       psi.outputs, pool), (y,)
    if rule == "H":
        x = pool.fresh("x")
        f = random_boolexpr(rng, others, 2)
        extra = [Pow(_neg(ring), BoolExpr.var(y) * (BoolExpr.var(x) ^ f))]
        outputs, extra = _sprinkle(rng, psi, x, extra)
        amp = _mul_amp(psi, *extra)
        return PathSum(ring, psi.inputs, psi.bound + (x, y), amp,
                       outputs, pool), (y, x)
    if rule == "Hgen":
        x = pool.fresh("x")
        g = random_nonzero_boolexpr(rng, others, 2)
        f = random_boolexpr(rng, others, 2)
        pattern = (BoolExpr.var(x) * g) ^ (g * f) ^ BoolExpr.one()
        extra = [Pow(_neg(ring), BoolExpr.var(y) * pattern)]
        outputs, extra = _sprinkle(rng, psi, x, extra)
        amp = _mul_amp(psi, *extra)
        return PathSum(ring, psi.inputs, psi.bound + (x, y), amp,
                       outputs, pool), (y, x)
    if rule == "Hrel":
        x = pool.fresh("x")
        f = random_boolexpr(rng, others, 2)
        g = random_boolexpr(rng, others, 2)
        amp = _mul_amp(
            psi,
            Pow(_neg(ring), BoolExpr.var(y) * f),
            Pow(_neg(ring), BoolExpr.var(x) * g),
        )
        return PathSum(ring, psi.inputs, psi.bound + (x, y), amp,
                       psi.outputs, pool), (y, x)
    if rule == "A":
        a, b = random_elem(rng, ring), random_elem(rng, ring)
        f = random_boolexpr(rng, others, 2)
        paired = Pow(
            Mul(Pow(Const(a), BoolExpr.var(y)), Pow(Const(b), ~BoolExpr.var(y))),
            f,
        )
        amp = _mul_amp(psi, paired)
        return PathSum(ring, psi.inputs, psi.bound + (y,), amp,
                       psi.outputs, pool), (y,)
    if rule == "O":
        if others:
            x = rng.choice(others)
            bound_extra: tuple[Var, ...] = (y,)
        else:
            x = pool.fresh("x")
            bound_extra = (x, y)
        ex, ey = BoolExpr.var(x), BoolExpr.var(y)
        mvars = tuple(v for v in others if v != x)
        a, b = random_elem(rng, ring), random_elem(rng, ring)
        c, d = random_elem(rng, ring), random_elem(rng, ring)
        keep_side = Pow(
            Mul(Pow(Const(a), ey), Pow(Const(b), ~ey)),
            ex * random_boolexpr(rng, mvars, 1),
        )
        move_side = Pow(
            Mul(Pow(Const(c), ey), Pow(Const(d), ~ey)),
            ~ex * random_nonzero_boolexpr(rng, mvars, 1),
        )
        amp = _mul_amp(psi, keep_side, move_side)
        return PathSum(ring, psi.inputs, psi.bound + bound_extra, amp,
                       psi.outputs, pool), (y, x)
    raise ValueError(f"unknown rule {rule!r}")


CLIFFORD_GATES = ("H", "S", "CX")


def random_clifford_lines(
    rng: random.Random, n_qubits: int = 4, n_gates: int = 30
) -> list[str]:
    lines = []
    for _ in range(rng.randint(1, n_gates)):
        name = rng.choice(CLIFFORD_GATES)
        if name == "CX":
            a, b = rng.sample(range(n_qubits), 2)
            lines.append(f"CX {a} {b}")
        else:
            lines.append(f"{name} {rng.randrange(n_qubits)}")
    return lines


def pad_clifford_lines(rng: random.Random, lines: list[str], n_qubits: int = 4,
                       n_insertions: int = 4) -> list[str]:
    """Insert identity gates and self-inverse pairs without changing the
    operator."""
    out = list(lines)
    for _ in range(n_insertions):
        at = rng.randint(0, len(out))
        kind = rng.random()
        if kind < 0.3:
            block = [f"I {rng.randrange(n_qubits)}"]
        elif kind < 0.6:
            q = rng.randrange(n_qubits)
            block = [f"H {q}", f"H {q}"]
        elif kind < 0.8:
            a, b = rng.sample(range(n_qubits), 2)
            block = [f"CX {a} {b}", f"CX {a} {b}"]
        else:
            q = rng.randrange(n_qubits)
            block = [f"S {q}"] * 4
        out[at:at] = block
    return out
