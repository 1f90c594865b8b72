"""Built-in correctness battery: golden values plus sampled property checks.

This is the fast, in-package mirror of the full pytest suite; the CLI
exposes it as the selftest command so an installed binary can vouch for
itself without a source checkout.
"""

from __future__ import annotations

import random
from typing import Callable

from . import gen, oracle, rewriting, rexpr
from .boolexpr import VarPool
from .rings import CYC8_FIELD, DYADIC_CYC8, INT, PrimeField, RATIONAL
from .sums import (
    compose,
    controlled_h,
    controlled_h_balanced,
    h_gate,
    identity,
    t_gate,
    tensor,
    to_state,
    x_gate,
    x_spider,
    z_spider,
)


def check_golden_controlled_h() -> None:
    ring = DYADIC_CYC8
    pool = VarPool()
    nf = rewriting.normalize_ring(to_state(controlled_h(ring, pool)))
    isq = ring.inv_sqrt2()
    expected = {
        0b0000: ring.one,
        0b0101: ring.one,
        0b1010: isq,
        0b1011: isq,
        0b1110: isq,
        0b1111: -isq,
    }
    assert nf.n_bits == 4
    for idx in range(16):
        want = expected.get(idx, ring.zero)
        got = nf.entries[idx]
        assert got == want, f"entry {nf.bits(idx)}: {got} != {want}"


def check_golden_t_after_x() -> None:
    ring = DYADIC_CYC8
    pool = VarPool()
    tx = compose(t_gate(ring, pool), x_gate(ring, pool))
    w = ring.omega()
    # Amplitude is omega^(1 xor x): omega at x=0, one at x=1.
    for bit, want in ((0, w), (1, ring.one)):
        sigma = {tx.inputs[0]: bit}
        assert rexpr.evaluate(tx.amplitude, sigma, ring) == want
        assert tx.outputs[0].evaluate(sigma) == 1 - bit
    mat = oracle.dense_matrix(tx)
    assert mat.rows[1][0] == w and mat.rows[0][1] == ring.one
    assert mat.rows[0][0] == ring.zero and mat.rows[1][1] == ring.zero


def check_verify_matches_oracle() -> None:
    ring = DYADIC_CYC8
    pool = VarPool()
    hh = compose(h_gate(ring, pool), h_gate(ring, pool))
    ident = identity(1, ring, pool)
    res = rewriting.equivalent(hh, ident)
    agree = oracle.matrices_equal(oracle.dense_matrix(hh), oracle.dense_matrix(ident))
    assert res.equal and agree, "H H should equal the identity"

    tx = compose(t_gate(ring, pool), x_gate(ring, pool))
    xt = compose(x_gate(ring, pool), t_gate(ring, pool))
    res = rewriting.equivalent(tx, xt)
    agree = oracle.matrices_equal(oracle.dense_matrix(tx), oracle.dense_matrix(xt))
    assert not res.equal and not agree, "TX should differ from XT"
    assert res.counterexample is not None


def check_rule_soundness_sample() -> None:
    rng = random.Random(7)
    per_rule = {
        "E": (INT, RATIONAL, DYADIC_CYC8),
        "H": (INT, DYADIC_CYC8),
        "omega": (DYADIC_CYC8, CYC8_FIELD),
        "Hgen": (INT, DYADIC_CYC8),
        "Hrel": (INT, DYADIC_CYC8),
        "Z": (INT, DYADIC_CYC8),
        "S": (INT, RATIONAL),
        "A": (RATIONAL, DYADIC_CYC8),
        "O": (RATIONAL, CYC8_FIELD),
    }
    for rule, rings in per_rule.items():
        for ring in rings:
            for _ in range(5):
                pool = VarPool()
                psi, site = gen.rule_instance(rule, rng, ring, pool)
                out = rewriting.apply_rule(rule, psi, site)
                assert out is not None, f"{rule} failed to match its own instance"
                before = oracle.dense_matrix(psi)
                after = oracle.dense_matrix(out)
                assert oracle.matrices_equal(before, after), (
                    f"{rule} unsound over {ring.name}"
                )


def check_theories_agree() -> None:
    rng = random.Random(11)
    for ring in (RATIONAL, CYC8_FIELD, PrimeField(7)):
        for _ in range(5):
            pool = VarPool()
            psi = gen.random_pathsum(
                rng, ring, pool, n_in=0, n_out=2, n_bound=2, mode="multiplicative"
            )
            nf_ring = rewriting.normalize_ring(psi)
            nf_field = rewriting.normalize_field(psi)
            assert nf_ring.entries == nf_field.entries
            vec = oracle.dense_matrix(psi).column()
            assert nf_ring.entries == vec


def check_balanced_unbalanced_ch() -> None:
    ring = DYADIC_CYC8
    pool = VarPool()
    a = oracle.dense_matrix(controlled_h(ring, pool))
    b = oracle.dense_matrix(controlled_h_balanced(ring, pool))
    assert oracle.matrices_equal(a, b)


def check_color_change() -> None:
    ring = DYADIC_CYC8
    alpha = DYADIC_CYC8.parse("(1,1,0,0)/2^0")
    for n in (1, 2):
        for m in (1, 2):
            pool = VarPool()
            spider = z_spider(alpha, n, m, ring, pool)
            h_in = identity(0, ring, pool)
            for _ in range(n):
                h_in = tensor(h_in, h_gate(ring, pool)) if h_in.n_in else h_gate(ring, pool)
            h_out = identity(0, ring, pool)
            for _ in range(m):
                h_out = tensor(h_out, h_gate(ring, pool)) if h_out.n_in else h_gate(ring, pool)
            lhs = compose(h_out, compose(spider, h_in))
            rhs = x_spider(alpha, n, m, ring, pool)
            assert oracle.matrices_equal(
                oracle.dense_matrix(lhs), oracle.dense_matrix(rhs)
            ), f"color change failed for n={n}, m={m}"


def check_serialization_deterministic() -> None:
    ring = DYADIC_CYC8
    outs = set()
    for _ in range(3):
        pool = VarPool()
        nf = rewriting.normalize_ring(to_state(controlled_h(ring, pool)))
        outs.add(nf.serialize(ring))
    assert len(outs) == 1


CHECKS: tuple[tuple[str, Callable[[], None]], ...] = (
    ("golden controlled-H normal form", check_golden_controlled_h),
    ("golden T-after-X composition", check_golden_t_after_x),
    ("verify verdicts match the matrix oracle", check_verify_matches_oracle),
    ("rule soundness sample", check_rule_soundness_sample),
    ("ring and field normalization agree", check_theories_agree),
    ("balanced and unbalanced controlled-H agree", check_balanced_unbalanced_ch),
    ("spider color change", check_color_change),
    ("serialized normal forms are deterministic", check_serialization_deterministic),
)


def run_selftest(verbose: bool = True) -> bool:
    ok = True
    for name, fn in CHECKS:
        try:
            fn()
            if verbose:
                print(f"ok   - {name}")
        except Exception as exc:  # noqa: BLE001 - report and keep going
            ok = False
            if verbose:
                print(f"FAIL - {name}: {exc}")
    return ok
