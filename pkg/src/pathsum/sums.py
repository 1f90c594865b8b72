"""Sums-over-paths: bound variables, one amplitude, and output bit-vectors.

A PathSum represents a linear operator on qubit registers symbolically:
free input variables, a list of summed (bound) variables, an amplitude
expression, and one Boolean polynomial per output wire.  Operators compose
by substituting outputs into inputs, tensor by concatenation, and close
into states by bending inputs onto fresh summed wires (channel-state
duality).  The gate library carries the standard generators in their
path-sum forms; arbitrary matrices embed directly via indicator powers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

from . import rexpr
from .boolexpr import BoolExpr, Var, VarPool
from .rexpr import Add, Const, Mul, Pow, RExpr
from .rings import Ring, RingElem


class ArityError(ValueError):
    """Operator arities do not line up for the requested operation."""


@dataclass(frozen=True)
class PathSum:
    ring: Ring
    inputs: tuple[Var, ...]
    bound: tuple[Var, ...]
    amplitude: RExpr
    outputs: tuple[BoolExpr, ...]
    pool: VarPool = field(compare=False, repr=False, default_factory=VarPool)

    def __post_init__(self) -> None:
        seen = set(self.inputs) | set(self.bound)
        if len(seen) != len(self.inputs) + len(self.bound):
            raise ValueError("input and bound variables must be distinct")
        used = rexpr.free_vars(self.amplitude)
        for f in self.outputs:
            used |= f.free_vars()
        if not used <= seen:
            raise ValueError(f"unscoped variables: {used - seen}")

    @property
    def n_in(self) -> int:
        return len(self.inputs)

    @property
    def n_out(self) -> int:
        return len(self.outputs)

    @property
    def is_closed(self) -> bool:
        return not self.inputs

    def is_multiplicative(self) -> bool:
        return rexpr.is_multiplicative(self.amplitude)

    def __str__(self) -> str:
        head = ""
        if self.bound:
            head = "sum[" + ",".join(str(v) for v in self.bound) + "] "
        ket = ", ".join(str(f) for f in self.outputs)
        return f"{head}|{ket}> on ({', '.join(str(v) for v in self.inputs)})"


def _rename(ps: PathSum, pool: VarPool) -> PathSum:
    """Freshen every variable of a sum using the given pool."""
    mapping = {v: pool.fresh(v.name) for v in ps.inputs + ps.bound}
    amp = ps.amplitude
    outs = list(ps.outputs)
    for old, new in mapping.items():
        g = BoolExpr.var(new)
        amp = rexpr.substitute(amp, old, g)
        outs = [f.substitute(old, g) for f in outs]
    return PathSum(
        ps.ring,
        tuple(mapping[v] for v in ps.inputs),
        tuple(mapping[v] for v in ps.bound),
        amp,
        tuple(outs),
        pool,
    )


def compose(phi: PathSum, psi: PathSum) -> PathSum:
    """Sequential composition phi after psi via output substitution."""
    if phi.ring is not psi.ring:
        raise ValueError("cannot compose sums over different rings")
    if phi.n_in != psi.n_out:
        raise ArityError(f"{psi.n_out} outputs fed into {phi.n_in} inputs")
    phi = _rename(phi, psi.pool)
    amp = phi.amplitude
    outs = list(phi.outputs)
    for x, f in zip(phi.inputs, psi.outputs):
        amp = rexpr.substitute(amp, x, f)
        outs = [o.substitute(x, f) for o in outs]
    return PathSum(
        psi.ring,
        psi.inputs,
        psi.bound + phi.bound,
        Mul(psi.amplitude, amp),
        tuple(outs),
        psi.pool,
    )


def tensor(psi: PathSum, phi: PathSum) -> PathSum:
    """Parallel composition: amplitudes multiply, outputs concatenate."""
    if phi.ring is not psi.ring:
        raise ValueError("cannot tensor sums over different rings")
    phi = _rename(phi, psi.pool)
    return PathSum(
        psi.ring,
        psi.inputs + phi.inputs,
        psi.bound + phi.bound,
        Mul(psi.amplitude, phi.amplitude),
        psi.outputs + phi.outputs,
        psi.pool,
    )


def to_state(psi: PathSum) -> PathSum:
    """Close all inputs by bending them onto fresh summed output wires.

    The resulting closed sum is the vectorization of the operator with
    index order input bits then output bits.
    """
    fresh = tuple(psi.pool.fresh(f"in{i}") for i in range(psi.n_in))
    amp = psi.amplitude
    outs = list(psi.outputs)
    for x, y in zip(psi.inputs, fresh):
        g = BoolExpr.var(y)
        amp = rexpr.substitute(amp, x, g)
        outs = [o.substitute(x, g) for o in outs]
    return PathSum(
        psi.ring,
        (),
        fresh + psi.bound,
        amp,
        tuple(BoolExpr.var(y) for y in fresh) + tuple(outs),
        psi.pool,
    )


# ---------------------------------------------------------------------------
# Gate library


def identity(n: int, ring: Ring, pool: VarPool) -> PathSum:
    xs = pool.fresh_many(n)
    return PathSum(
        ring, xs, (), Const(ring.one), tuple(BoolExpr.var(x) for x in xs), pool
    )


def x_gate(ring: Ring, pool: VarPool) -> PathSum:
    x = pool.fresh()
    return PathSum(ring, (x,), (), Const(ring.one), (~BoolExpr.var(x),), pool)


def z_gate(ring: Ring, pool: VarPool) -> PathSum:
    x = pool.fresh()
    amp = Pow(Const(ring.from_int(-1)), BoolExpr.var(x))
    return PathSum(ring, (x,), (), amp, (BoolExpr.var(x),), pool)


def s_gate(ring: Ring, pool: VarPool) -> PathSum:
    x = pool.fresh()
    amp = Pow(Const(ring.imag_unit()), BoolExpr.var(x))
    return PathSum(ring, (x,), (), amp, (BoolExpr.var(x),), pool)


def t_gate(ring: Ring, pool: VarPool) -> PathSum:
    x = pool.fresh()
    amp = Pow(Const(ring.omega()), BoolExpr.var(x))
    return PathSum(ring, (x,), (), amp, (BoolExpr.var(x),), pool)


def h_gate(ring: Ring, pool: VarPool) -> PathSum:
    x, y = pool.fresh(), pool.fresh("y")
    xy = BoolExpr.var(x) * BoolExpr.var(y)
    amp = Mul(Const(ring.inv_sqrt2()), Pow(Const(ring.from_int(-1)), xy))
    return PathSum(ring, (x,), (y,), amp, (BoolExpr.var(y),), pool)


def cx_gate(ring: Ring, pool: VarPool) -> PathSum:
    c, t = pool.fresh(), pool.fresh()
    return PathSum(
        ring,
        (c, t),
        (),
        Const(ring.one),
        (BoolExpr.var(c), BoolExpr.var(c) ^ BoolExpr.var(t)),
        pool,
    )


def ccx_gate(ring: Ring, pool: VarPool) -> PathSum:
    a, b, c = pool.fresh(), pool.fresh(), pool.fresh()
    out = BoolExpr.var(c) ^ (BoolExpr.var(a) * BoolExpr.var(b))
    return PathSum(
        ring,
        (a, b, c),
        (),
        Const(ring.one),
        (BoolExpr.var(a), BoolExpr.var(b), out),
        pool,
    )


def controlled_h(ring: Ring, pool: VarPool) -> PathSum:
    """Controlled Hadamard as an unbalanced sum with a zero-power filter."""
    x1, x2, y = pool.fresh(), pool.fresh(), pool.fresh("y")
    e1, e2, ey = BoolExpr.var(x1), BoolExpr.var(x2), BoolExpr.var(y)
    amp = Mul(
        Mul(
            Pow(Const(ring.zero), ~e1 * (e2 ^ ey)),
            Pow(Const(ring.inv_sqrt2()), e1),
        ),
        Pow(Const(ring.from_int(-1)), e1 * e2 * ey),
    )
    return PathSum(ring, (x1, x2), (y,), amp, (e1, ey), pool)


def controlled_h_balanced(ring: Ring, pool: VarPool) -> PathSum:
    """Controlled Hadamard as a balanced sum with interfering paths.

    The control in the 0 state makes the two paths interfere to weight
    sqrt(2); expanded into Boolean powers of omega the phase exponent
    (1 - x1)(2y - 1) becomes 2y - 1 - 2 x1 y + x1.
    """
    x1, x2, y = pool.fresh(), pool.fresh(), pool.fresh("y")
    e1, e2, ey = BoolExpr.var(x1), BoolExpr.var(x2), BoolExpr.var(y)
    w = ring.omega()
    scale = ring.inv_sqrt2() * ring.pow(w, 7)
    amp = rexpr.mul_chain(
        [
            Const(scale),
            Pow(Const(ring.pow(w, 2)), ey),
            Pow(Const(ring.pow(w, 6)), e1 * ey),
            Pow(Const(w), e1),
            Pow(Const(ring.from_int(-1)), e1 * e2 * ey),
        ],
        ring,
    )
    out2 = (~e1 * e2) ^ (e1 * ey)
    return PathSum(ring, (x1, x2), (y,), amp, (e1, out2), pool)


def z_spider(alpha: RingElem, n: int, m: int, ring: Ring, pool: VarPool) -> PathSum:
    """Z spider with n input and m output legs and amplitude parameter."""
    xs = pool.fresh_many(n)
    ys = tuple(pool.fresh(f"y{i}") for i in range(n))
    z = pool.fresh("z")
    ez = BoolExpr.var(z)
    factors: list[RExpr] = []
    if n:
        factors.append(Const(ring.pow(ring.half(), n)))
    for x, y in zip(xs, ys):
        factors.append(
            Pow(Const(ring.from_int(-1)), BoolExpr.var(y) * (BoolExpr.var(x) ^ ez))
        )
    factors.append(Pow(Const(alpha), ez))
    amp = rexpr.mul_chain(factors, ring)
    return PathSum(ring, xs, ys + (z,), amp, (ez,) * m, pool)


def x_spider(alpha: RingElem, n: int, m: int, ring: Ring, pool: VarPool) -> PathSum:
    """X spider: the color-changed Z spider, written as a direct sum."""
    xs = pool.fresh_many(n)
    y = pool.fresh("y")
    zs = tuple(pool.fresh(f"z{i}") for i in range(m))
    ey = BoolExpr.var(y)
    neg = Const(ring.from_int(-1))
    factors: list[RExpr] = [
        Const(ring.pow(ring.inv_sqrt2(), n + m)),
        Pow(Const(alpha), ey),
    ]
    factors += [Pow(neg, BoolExpr.var(x) * ey) for x in xs]
    factors += [Pow(neg, ey * BoolExpr.var(z)) for z in zs]
    amp = rexpr.mul_chain(factors, ring)
    return PathSum(ring, xs, (y,) + zs, amp, tuple(BoolExpr.var(z) for z in zs), pool)


def h_box(alpha: RingElem, n: int, m: int, ring: Ring, pool: VarPool) -> PathSum:
    """H box: amplitude alpha raised to the product of all leg variables."""
    xs = pool.fresh_many(n)
    ys = tuple(pool.fresh(f"y{i}") for i in range(m))
    mono = BoolExpr.monomial(xs + ys)
    return PathSum(
        ring, xs, ys, Pow(Const(alpha), mono), tuple(BoolExpr.var(y) for y in ys), pool
    )


def cup(ring: Ring, pool: VarPool) -> PathSum:
    y = pool.fresh("y")
    e = BoolExpr.var(y)
    return PathSum(ring, (), (y,), Const(ring.one), (e, e), pool)


def cap(ring: Ring, pool: VarPool) -> PathSum:
    x1, x2, z = pool.fresh(), pool.fresh(), pool.fresh("z")
    amp = Mul(
        Const(ring.half()),
        Pow(Const(ring.from_int(-1)), BoolExpr.var(z) * (BoolExpr.var(x1) ^ BoolExpr.var(x2))),
    )
    return PathSum(ring, (x1, x2), (z,), amp, (), pool)


GATE_BUILDERS = {
    "I": (1, lambda ring, pool: identity(1, ring, pool)),
    "X": (1, x_gate),
    "Z": (1, z_gate),
    "S": (1, s_gate),
    "T": (1, t_gate),
    "H": (1, h_gate),
    "CX": (2, cx_gate),
    "CH": (2, controlled_h),
    "CCX": (3, ccx_gate),
}

# Ring capabilities each named gate draws on.
GATE_NEEDS = {
    "I": set(),
    "X": set(),
    "Z": set(),
    "S": {"omega"},
    "T": {"omega"},
    "H": {"omega", "half"},
    "CX": set(),
    "CH": {"omega", "half"},
    "CCX": set(),
    "ZSPIDER": {"half"},
    "HBOX": set(),
}


def gate(name: str, ring: Ring, pool: VarPool, *, alpha: RingElem | None = None,
         legs: tuple[int, int] | None = None) -> PathSum:
    """Build a library generator by name."""
    name = name.upper()
    if name in GATE_BUILDERS:
        return GATE_BUILDERS[name][1](ring, pool)
    if name == "ZSPIDER":
        return z_spider(alpha, *legs, ring, pool)
    if name == "XSPIDER":
        return x_spider(alpha, *legs, ring, pool)
    if name == "HBOX":
        return h_box(alpha, *legs, ring, pool)
    if name == "CUP":
        return cup(ring, pool)
    if name == "CAP":
        return cap(ring, pool)
    raise ValueError(f"unknown gate {name!r}")


def from_matrix(rows, ring: Ring, pool: VarPool) -> PathSum:
    """Directly represent a matrix of ring entries as a multiplicative sum.

    rows[w][v] is the amplitude from input basis state v to output state w;
    both dimensions must be powers of two.
    """
    n_rows = len(rows)
    n_cols = len(rows[0]) if n_rows else 0
    if any(len(r) != n_cols for r in rows):
        raise ValueError("matrix rows have unequal lengths")
    if n_rows & (n_rows - 1) or n_cols & (n_cols - 1) or not n_rows or not n_cols:
        raise ValueError("matrix dimensions must be powers of two")
    n_in = n_cols.bit_length() - 1
    n_out = n_rows.bit_length() - 1
    xs = pool.fresh_many(n_in)
    ys = tuple(pool.fresh(f"y{i}") for i in range(n_out))
    entries = []
    for idx in range(1 << (n_in + n_out)):
        col, row = idx >> n_out, idx & ((1 << n_out) - 1)
        entries.append(ring.check(rows[row][col]))
    table = rexpr.NormalTable(xs + ys, tuple(entries))
    amp = rexpr.from_table(table, ring)
    return PathSum(ring, xs, ys, amp, tuple(BoolExpr.var(y) for y in ys), pool)


def embed(g: PathSum, positions: tuple[int, ...], width: int) -> PathSum:
    """Place an arity-preserving gate on the listed wires of a register."""
    if g.n_in != g.n_out:
        raise ArityError("embed requires equal input and output arity")
    if len(positions) != g.n_in:
        raise ArityError(f"gate wants {g.n_in} wires, got {len(positions)}")
    if len(set(positions)) != len(positions):
        raise ValueError("repeated qubit index")
    if any(p < 0 or p >= width for p in positions):
        raise ValueError("qubit index out of range")
    pool = g.pool
    xs = pool.fresh_many(width)
    amp = g.amplitude
    outs = list(g.outputs)
    for v, p in zip(g.inputs, positions):
        e = BoolExpr.var(xs[p])
        amp = rexpr.substitute(amp, v, e)
        outs = [o.substitute(v, e) for o in outs]
    full_outs: list[BoolExpr] = [BoolExpr.var(x) for x in xs]
    for o, p in zip(outs, positions):
        full_outs[p] = o
    return PathSum(g.ring, xs, g.bound, amp, tuple(full_outs), pool)


def embed_rect(g: PathSum, positions: tuple[int, ...], width: int) -> PathSum:
    """Place a width-changing generator; its outputs replace the consumed
    wires contiguously at the first consumed slot."""
    if not positions:
        raise ArityError("width-changing embedding needs at least one wire")
    if len(positions) != g.n_in:
        raise ArityError(f"gate wants {g.n_in} wires, got {len(positions)}")
    if len(set(positions)) != len(positions):
        raise ValueError("repeated qubit index")
    if any(p < 0 or p >= width for p in positions):
        raise ValueError("qubit index out of range")
    pool = g.pool
    xs = pool.fresh_many(width)
    amp = g.amplitude
    outs = list(g.outputs)
    for v, p in zip(g.inputs, positions):
        e = BoolExpr.var(xs[p])
        amp = rexpr.substitute(amp, v, e)
        outs = [o.substitute(v, e) for o in outs]
    rest = [i for i in range(width) if i not in positions]
    insert_at = sum(1 for i in rest if i < min(positions))
    full_outs = [BoolExpr.var(xs[i]) for i in rest]
    full_outs[insert_at:insert_at] = outs
    return PathSum(g.ring, xs, g.bound, amp, tuple(full_outs), pool)


def compose_all(sums: list[PathSum]) -> PathSum:
    """Compose a pipeline, first element applied first."""
    return reduce(lambda acc, nxt: compose(nxt, acc), sums)
