"""Multilinear Boolean polynomials over Z2 in algebraic normal form.

A polynomial is stored as a set of monomials, each monomial a set of
variables; the empty monomial is the constant 1 and the empty set of
monomials is 0.  XOR-cancellation and idempotence are applied on
construction, so two values are semantically equal exactly when they are
structurally identical.  Equality, hashing and serialization are all O(1)
or linear in the stored form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Mapping

Monomial = frozenset["Var"]


@dataclass(frozen=True, order=True)
class Var:
    """An interned Boolean variable, identified by ordinal id."""

    id: int
    name: str = field(default="", compare=False, repr=False)

    def __str__(self) -> str:
        return self.name or f"x{self.id}"


class VarPool:
    """Monotone fresh-variable allocator; one per engine context."""

    def __init__(self, start: int = 0) -> None:
        self._next = start

    def fresh(self, base: str = "x") -> Var:
        v = Var(self._next, f"{base}{self._next}")
        self._next += 1
        return v

    def fresh_many(self, count: int, base: str = "x") -> tuple[Var, ...]:
        return tuple(self.fresh(base) for _ in range(count))


class BoolExpr:
    """Canonical ANF polynomial: XOR of AND-monomials over `Var`s."""

    __slots__ = ("monomials", "_hash")

    monomials: frozenset[Monomial]

    def __init__(self, monomials: Iterable[Monomial] = ()) -> None:
        object.__setattr__(self, "monomials", frozenset(monomials))
        object.__setattr__(self, "_hash", hash(self.monomials))

    # -- constructors ------------------------------------------------

    @staticmethod
    def zero() -> BoolExpr:
        return _ZERO

    @staticmethod
    def one() -> BoolExpr:
        return _ONE

    @staticmethod
    def var(v: Var) -> BoolExpr:
        return BoolExpr([frozenset([v])])

    @staticmethod
    def const(bit: int) -> BoolExpr:
        return _ONE if bit & 1 else _ZERO

    @staticmethod
    def monomial(vs: Iterable[Var]) -> BoolExpr:
        return BoolExpr([frozenset(vs)])

    # -- structure ---------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BoolExpr) and self.monomials == other.monomials

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.monomials)

    @property
    def is_zero(self) -> bool:
        return not self.monomials

    @property
    def is_one(self) -> bool:
        return self.monomials == _ONE.monomials

    def free_vars(self) -> frozenset[Var]:
        return frozenset(v for m in self.monomials for v in m)

    # -- arithmetic --------------------------------------------------

    def __xor__(self, other: BoolExpr) -> BoolExpr:
        return BoolExpr(self.monomials ^ other.monomials)

    def __mul__(self, other: BoolExpr) -> BoolExpr:
        # Distribute and cancel pairs mod 2; union of var-sets applies
        # idempotence for free.
        acc: set[Monomial] = set()
        for m1 in self.monomials:
            for m2 in other.monomials:
                m = m1 | m2
                if m in acc:
                    acc.remove(m)
                else:
                    acc.add(m)
        return BoolExpr(acc)

    def __invert__(self) -> BoolExpr:
        return _ONE ^ self

    def substitute(self, x: Var, g: BoolExpr) -> BoolExpr:
        """Replace every occurrence of `x` by `g` and re-canonicalize."""
        untouched: set[Monomial] = set()
        acc = _ZERO
        for m in self.monomials:
            if x not in m:
                untouched.add(m)
            else:
                acc = acc ^ (BoolExpr.monomial(m - {x}) * g)
        return acc ^ BoolExpr(untouched)

    def substitute_many(self, mapping: Mapping[Var, BoolExpr]) -> BoolExpr:
        """Simultaneous substitution (domain vars must not occur in images)."""
        out = self
        for x, g in mapping.items():
            out = out.substitute(x, g)
        return out

    def evaluate(self, assignment: Mapping[Var, int]) -> int:
        """Value of the polynomial at a 0/1 assignment of its variables."""
        acc = 0
        for m in self.monomials:
            bit = 1
            for v in m:
                try:
                    bit &= assignment[v] & 1
                except KeyError:
                    raise UnassignedVariableError(v) from None
                if not bit:
                    break
            acc ^= bit
        return acc

    # -- display -----------------------------------------------------

    def __str__(self) -> str:
        if not self.monomials:
            return "0"
        keys = sorted(tuple(sorted(v.id for v in m)) for m in self.monomials)
        parts = []
        by_key = {tuple(sorted(v.id for v in m)): m for m in self.monomials}
        for k in keys:
            m = by_key[k]
            parts.append("1" if not m else "*".join(str(v) for v in sorted(m)))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"BoolExpr({self})"


_ZERO = BoolExpr.__new__(BoolExpr)
object.__setattr__(_ZERO, "monomials", frozenset())
object.__setattr__(_ZERO, "_hash", hash(frozenset()))
_ONE = BoolExpr.__new__(BoolExpr)
object.__setattr__(_ONE, "monomials", frozenset([frozenset()]))
object.__setattr__(_ONE, "_hash", hash(frozenset([frozenset()])))


class UnassignedVariableError(KeyError):
    def __init__(self, v: Var) -> None:
        super().__init__(f"no value assigned to {v}")
        self.var = v


def sorted_monomials(f: BoolExpr) -> list[Monomial]:
    """Monomials in the canonical order: lexicographic on sorted var ids."""
    return sorted(f.monomials, key=lambda m: tuple(sorted(v.id for v in m)))


def eq_indicator(u: list[BoolExpr], v: list[BoolExpr]) -> BoolExpr:
    """Bitwise-equality indicator: product of (u_i XOR NOT v_i).

    Evaluates to 1 exactly when the two bit-vectors agree pointwise.
    """
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    return reduce(lambda acc, p: acc * (p[0] ^ ~p[1]), zip(u, v), BoolExpr.one())
