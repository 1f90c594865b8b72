"""Brute-force matrix semantics of path sums, independent of all rewriting.

Every matrix entry is computed by enumerating the bound-variable
assignments and summing exact amplitude values, so this module gives the
ground truth every rewrite and normalization result is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import rexpr
from .rings import Ring, RingElem
from .sums import PathSum


class CapExceededError(ValueError):
    """Enumeration would touch more variables than the configured cap."""


@dataclass(frozen=True)
class DenseMatrix:
    """Row-major 2^n_out by 2^n_in matrix; wire 0 is the most significant bit."""

    n_out: int
    n_in: int
    rows: tuple[tuple[RingElem, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return (1 << self.n_out, 1 << self.n_in)

    def column(self) -> tuple[RingElem, ...]:
        if self.n_in != 0:
            raise ValueError("not a column vector")
        return tuple(r[0] for r in self.rows)

    def to_json(self, ring: Ring) -> dict:
        return {
            "rows": 1 << self.n_out,
            "cols": 1 << self.n_in,
            "entries": [[ring.format(e) for e in row] for row in self.rows],
        }


def dense_matrix(psi: PathSum, cap: int = 22) -> DenseMatrix:
    """Evaluate a sum to its exact matrix by path enumeration."""
    ring = psi.ring
    k = len(psi.bound)
    if psi.n_in + k > cap:
        raise CapExceededError(
            f"{psi.n_in + k} enumeration variables exceed the cap of {cap}"
        )
    n_in, n_out = psi.n_in, psi.n_out
    zero = ring.zero
    out = [[zero] * (1 << n_in) for _ in range(1 << n_out)]
    assignment: dict = {}
    for col in range(1 << n_in):
        for i, x in enumerate(psi.inputs):
            assignment[x] = (col >> (n_in - 1 - i)) & 1
        for tau in range(1 << k):
            for i, y in enumerate(psi.bound):
                assignment[y] = (tau >> (k - 1 - i)) & 1
            row = 0
            for f in psi.outputs:
                row = (row << 1) | f.evaluate(assignment)
            amp = rexpr.evaluate(psi.amplitude, assignment, ring)
            out[row][col] = out[row][col] + amp
    return DenseMatrix(n_out, n_in, tuple(tuple(r) for r in out))


def matrices_equal(a: DenseMatrix, b: DenseMatrix) -> bool:
    """Exact entrywise equality, dimensions included."""
    return (
        a.n_out == b.n_out
        and a.n_in == b.n_in
        and all(x == y for ra, rb in zip(a.rows, b.rows) for x, y in zip(ra, rb))
    )


def mat_mul(a: DenseMatrix, b: DenseMatrix, ring: Ring) -> DenseMatrix:
    if a.n_in != b.n_out:
        raise ValueError("inner dimensions differ")
    rows = []
    for i in range(1 << a.n_out):
        row = []
        for j in range(1 << b.n_in):
            acc = ring.zero
            for t in range(1 << a.n_in):
                acc = acc + a.rows[i][t] * b.rows[t][j]
            row.append(acc)
        rows.append(tuple(row))
    return DenseMatrix(a.n_out, b.n_in, tuple(rows))


def kron(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    rows = []
    for i1 in range(1 << a.n_out):
        for i2 in range(1 << b.n_out):
            row = []
            for j1 in range(1 << a.n_in):
                for j2 in range(1 << b.n_in):
                    row.append(a.rows[i1][j1] * b.rows[i2][j2])
            rows.append(tuple(row))
    return DenseMatrix(a.n_out + b.n_out, a.n_in + b.n_in, tuple(rows))


def vectorize(a: DenseMatrix) -> tuple[RingElem, ...]:
    """Flatten columns-first: index bits are input bits then output bits."""
    out = []
    for col in range(1 << a.n_in):
        for row in range(1 << a.n_out):
            out.append(a.rows[row][col])
    return tuple(out)
