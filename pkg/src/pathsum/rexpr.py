"""Amplitude expression trees and their normalization to dense tables.

An amplitude is a tree of ring constants, Boolean-exponent powers,
products and (in full mode) sums.  Normalization over an ordered variable
list produces the unique dense table of values, one ring element per
assignment, by structural recursion: constants extend pointwise, products
multiply entrywise, sums recurse along the last variable, and powers
recurse on the ANF structure of the exponent.  The multiplicative mode
forbids sum nodes and uses inverse-square factors (hence a field) to
decompose XOR exponents.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping, Union

from .boolexpr import BoolExpr, Var, sorted_monomials
from .rings import Ring, RingElem, UnsupportedConstantError


@dataclass(frozen=True)
class Const:
    value: RingElem


@dataclass(frozen=True)
class Pow:
    base: "RExpr"
    exp: BoolExpr


@dataclass(frozen=True)
class Mul:
    left: "RExpr"
    right: "RExpr"


@dataclass(frozen=True)
class Add:
    left: "RExpr"
    right: "RExpr"


RExpr = Union[Const, Pow, Mul, Add]


class MultiplicativeModeError(ValueError):
    """A sum node appeared where the multiplicative fragment was required."""


class TableSizeError(ValueError):
    """The requested table would exceed the variable cap."""


def free_vars(r: RExpr) -> frozenset[Var]:
    if isinstance(r, Const):
        return frozenset()
    if isinstance(r, Pow):
        return free_vars(r.base) | r.exp.free_vars()
    return free_vars(r.left) | free_vars(r.right)


def is_multiplicative(r: RExpr) -> bool:
    if isinstance(r, Const):
        return True
    if isinstance(r, Pow):
        return is_multiplicative(r.base)
    if isinstance(r, Add):
        return False
    return is_multiplicative(r.left) and is_multiplicative(r.right)


def node_count(r: RExpr) -> int:
    if isinstance(r, Const):
        return 1
    if isinstance(r, Pow):
        return 1 + node_count(r.base)
    return 1 + node_count(r.left) + node_count(r.right)


def mul_chain(factors: Iterable[RExpr], ring: Ring) -> RExpr:
    """Left-associated product, dropping unit factors."""
    out: RExpr | None = None
    for f in factors:
        if isinstance(f, Const) and f.value == ring.one:
            continue
        out = f if out is None else Mul(out, f)
    return out if out is not None else Const(ring.one)


def factors(r: RExpr) -> list[RExpr]:
    """Flatten a product tree into its factor list."""
    if isinstance(r, Mul):
        return factors(r.left) + factors(r.right)
    return [r]


def evaluate(r: RExpr, assignment: Mapping[Var, int], ring: Ring) -> RingElem:
    """Value of the expression at a 0/1 assignment covering its variables.

    Powers use the 0^0 = 1 convention: a zero exponent bit yields 1
    regardless of the base.
    """
    if isinstance(r, Const):
        return r.value
    if isinstance(r, Pow):
        if r.exp.evaluate(assignment):
            return evaluate(r.base, assignment, ring)
        return ring.one
    if isinstance(r, Mul):
        return evaluate(r.left, assignment, ring) * evaluate(r.right, assignment, ring)
    return evaluate(r.left, assignment, ring) + evaluate(r.right, assignment, ring)


def substitute(r: RExpr, x: Var, g: BoolExpr) -> RExpr:
    """Replace `x` by `g` inside every exponent; constants are untouched."""
    if isinstance(r, Const):
        return r
    if isinstance(r, Pow):
        return Pow(substitute(r.base, x, g), r.exp.substitute(x, g))
    if isinstance(r, Mul):
        return Mul(substitute(r.left, x, g), substitute(r.right, x, g))
    return Add(substitute(r.left, x, g), substitute(r.right, x, g))


def substitute_many(r: RExpr, mapping: Mapping[Var, BoolExpr]) -> RExpr:
    out = r
    for x, g in mapping.items():
        out = substitute(out, x, g)
    return out


def lift(f: BoolExpr, ring: Ring) -> RExpr:
    """Embed a Boolean value into the ring as the power 0^(NOT f).

    Evaluates to 1 where f holds and 0 elsewhere, staying inside the
    multiplicative fragment.
    """
    return Pow(Const(ring.zero), ~f)


def phase_to_amplitude(
    terms: Iterable[tuple[int, Iterable[Var]]], k: int, ring: Ring
) -> RExpr:
    """Convert a phase polynomial mod 2^k into a product of root powers.

    Each (coefficient, monomial) term becomes (zeta^c)^monomial for zeta a
    primitive 2^k-th root of unity; k <= 3.
    """
    if k == 1:
        zeta = ring.from_int(-1)
    elif k == 2:
        zeta = ring.imag_unit()
    elif k == 3:
        zeta = ring.omega()
    else:
        raise UnsupportedConstantError(f"no primitive 2^{k}-th root available")
    out: list[RExpr] = []
    for coeff, mono in terms:
        c = coeff % (1 << k)
        if c == 0:
            continue
        out.append(Pow(Const(ring.pow(zeta, c)), BoolExpr.monomial(mono)))
    return mul_chain(out, ring)


# ---------------------------------------------------------------------------
# Dense normal tables


@dataclass(frozen=True)
class NormalTable:
    """Dense table of 2^m values over an ordered variable tuple.

    Index bit order follows the variable order, first variable most
    significant, so index bitstrings read left to right as the variables.
    """

    vars: tuple[Var, ...]
    entries: tuple[RingElem, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != 1 << len(self.vars):
            raise ValueError("entry count must be 2^(number of variables)")

    def assignment(self, index: int) -> dict[Var, int]:
        m = len(self.vars)
        return {v: (index >> (m - 1 - i)) & 1 for i, v in enumerate(self.vars)}

    def bits(self, index: int) -> str:
        return format(index, f"0{len(self.vars)}b") if self.vars else ""

    def to_json(self, ring: Ring) -> dict:
        return {
            "vars": [str(v) for v in self.vars],
            "entries": [ring.format(e) for e in self.entries],
        }


def _poly_values(f: BoolExpr, vars: tuple[Var, ...]) -> list[int]:
    """Evaluate f on every assignment of vars, indexed as in NormalTable."""
    m = len(vars)
    pos = {v: m - 1 - i for i, v in enumerate(vars)}
    out = [0] * (1 << m)
    for mono in f.monomials:
        mask = 0
        for v in mono:
            mask |= 1 << pos[v]
        for idx in range(1 << m):
            if idx & mask == mask:
                out[idx] ^= 1
    return out


def _interleave(even: tuple, odd: tuple) -> tuple:
    out = [None] * (2 * len(even))
    out[0::2] = even
    out[1::2] = odd
    return tuple(out)


def _add_entries(a: tuple, b: tuple) -> tuple:
    # Sum case: split both tables along the last variable, add the halves,
    # and stitch back together; the base case is a plain ring sum.
    if len(a) == 1:
        return (a[0] + b[0],)
    return _interleave(
        _add_entries(a[0::2], b[0::2]), _add_entries(a[1::2], b[1::2])
    )


def _pow_entries(
    base: tuple, f: BoolExpr, vars: tuple[Var, ...], ring: Ring, mode: str
) -> tuple:
    one = ring.one
    if f.is_zero:
        return (one,) * len(base)
    if f.is_one:
        return base
    monos = sorted_monomials(f)
    if len(monos) == 1:
        # Single monomial: iterated (r^f1)^f2 selection on its variables.
        m = len(vars)
        mask = 0
        for v in monos[0]:
            mask |= 1 << (m - 1 - vars.index(v))
        return tuple(
            e if idx & mask == mask else one for idx, e in enumerate(base)
        )
    f1 = BoolExpr([monos[0]])
    f2 = BoolExpr(monos[1:])
    f12 = f1 * f2
    t1 = _pow_entries(base, f1, vars, ring, mode)
    t2 = _pow_entries(base, f2, vars, ring, mode)
    if mode == "full":
        # r^(f1 xor f2) = r^f1 + r^f2 - (2r)^(f1 f2) + 0^(not f1 f2)
        doubled = tuple(e + e for e in base)
        t3 = _pow_entries(doubled, f12, vars, ring, mode)
        sup = _poly_values(f12, vars)
        corr = tuple(one if s else ring.zero for s in sup)
        acc = _add_entries(t1, t2)
        acc = _add_entries(acc, tuple(-e for e in t3))
        return _add_entries(acc, corr)
    # Multiplicative mode: a^(f1 xor f2) = a^f1 a^f2 (a^-2)^(f1 f2).
    if not ring.is_field:
        raise UnsupportedConstantError(
            "inverse squares in exponent decomposition need a field"
        )
    sup = _poly_values(f12, vars)
    if any(sup[i] and base[i] == ring.zero for i in range(len(base))):
        # Zero base entries have no inverse; fall back to the disjoint
        # indicator-product decomposition of the exponent, which stays in
        # the multiplicative fragment.
        vals = _poly_values(f, vars)
        return tuple(e if v else one for e, v in zip(base, vals))
    t3 = tuple(
        ring.pow(ring.inv(e), 2) if s else one for e, s in zip(base, sup)
    )
    return tuple(a * b * c for a, b, c in zip(t1, t2, t3))


def normalize(
    r: RExpr,
    vars: Iterable[Var],
    ring: Ring,
    mode: str = "full",
    max_bits: int = 20,
) -> NormalTable:
    """Bring an expression to its dense table over the given variables.

    The table satisfies entries[sigma] = evaluate(r, sigma) for every
    assignment; semantically equal expressions over the same variables
    yield identical tables.
    """
    vars = tuple(vars)
    if len(set(vars)) != len(vars):
        raise ValueError("duplicate variables in table order")
    if len(vars) > max_bits:
        raise TableSizeError(f"{len(vars)} variables exceed the cap of {max_bits}")
    missing = free_vars(r) - set(vars)
    if missing:
        raise ValueError(f"variables not covered by table order: {missing}")
    return NormalTable(vars, _norm_entries(r, vars, ring, mode))


def _norm_entries(
    r: RExpr, vars: tuple[Var, ...], ring: Ring, mode: str
) -> tuple:
    if isinstance(r, Const):
        return (r.value,) * (1 << len(vars))
    if isinstance(r, Mul):
        a = _norm_entries(r.left, vars, ring, mode)
        b = _norm_entries(r.right, vars, ring, mode)
        return tuple(x * y for x, y in zip(a, b))
    if isinstance(r, Add):
        if mode != "full":
            raise MultiplicativeModeError("sum node in multiplicative mode")
        a = _norm_entries(r.left, vars, ring, mode)
        b = _norm_entries(r.right, vars, ring, mode)
        return _add_entries(a, b)
    return _pow_entries(_norm_entries(r.base, vars, ring, mode), r.exp, vars, ring, mode)


def from_table(table: NormalTable, ring: Ring) -> RExpr:
    """Rebuild the product-of-indicator-powers expression of a table.

    The result is multiplicative and normalizes back to the same table.
    """
    from .boolexpr import eq_indicator

    var_exprs = [BoolExpr.var(v) for v in table.vars]
    m = len(table.vars)
    out: list[RExpr] = []
    for idx, entry in enumerate(table.entries):
        bits = [BoolExpr.const((idx >> (m - 1 - i)) & 1) for i in range(m)]
        out.append(Pow(Const(entry), eq_indicator(bits, var_exprs)))
    return reduce(Mul, out) if out else Const(ring.one)
