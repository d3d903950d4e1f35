import math

import pytest

from treeshift.blocks import Block, parse_block
from treeshift.dynamics import (
    NotIrreducibleError,
    PeriodicTreeCertificate,
    TreePattern,
    build_periodic_tree,
    chaos_report,
    dense_orbit_prefix,
    entropy_estimate,
    verify_periodic,
)
from treeshift.graphs import VertexTsft
from treeshift.words import CompletePrefixSet


# ---------------------------------------------------------------------------
# Tree patterns


def test_pattern_requires_prefix_closed_support():
    with pytest.raises(ValueError):
        TreePattern.from_map(2, {"": 0, "01": 1})
    p = TreePattern.from_map(2, {"": 0, "0": 1, "1": 0})
    assert p.depth == 1
    assert p.as_map() == {"": 0, "0": 1, "1": 0}


def test_pattern_contains_block():
    p = TreePattern.from_map(2, {"": 0, "0": 1, "1": 0, "00": 0, "01": 1})
    hit = parse_block("1(0,1)", 2)
    assert p.contains_block(hit) == ("0",)
    assert p.contains_block(parse_block("1(1,1)", 2)) == ()


# ---------------------------------------------------------------------------
# Periodic trees


def test_constant_certificate_on_full_shift(full_2sym):
    cert = PeriodicTreeCertificate(
        cps=CompletePrefixSet(("0", "1"), 2),
        seed=TreePattern.from_map(2, {"": 0}),
    )
    ok, why = verify_periodic(cert, full_2sym, depth=5)
    assert ok, why


def test_build_periodic_tree(irreducible_2sym):
    cert = build_periodic_tree(irreducible_2sym, Block(2, 1, (0,)))
    ok, why = verify_periodic(cert, irreducible_2sym, depth=6)
    assert ok, why


def test_build_periodic_tree_from_2block(even_sum_4sym):
    seed = parse_block("2(1,2)", 2)
    cert = build_periodic_tree(even_sum_4sym, seed)
    ok, why = verify_periodic(cert, even_sum_4sym, depth=6)
    assert ok, why
    # The certificate's unrolling agrees with the seed block.
    tree = cert.unroll(1)
    assert tree[""] == 2 and tree["0"] == 1 and tree["1"] == 2


def test_build_refused_without_irreducibility(identity_2sym):
    with pytest.raises(NotIrreducibleError):
        build_periodic_tree(identity_2sym, Block(2, 1, (0,)))


def test_corrupted_seed_fails_verification(irreducible_2sym):
    cert = build_periodic_tree(irreducible_2sym, Block(2, 1, (0,)))
    labels = cert.seed.as_map()
    # Flip one interior label; some check must fail and name a node.
    key = sorted(labels)[-1]
    labels[key] = 1 - labels[key]
    bad = PeriodicTreeCertificate(
        cps=cert.cps, seed=TreePattern.from_map(2, labels)
    )
    ok, why = verify_periodic(bad, irreducible_2sym, depth=6)
    assert not ok
    assert why  # names the first violating node


def test_unrolled_truncations_are_allowed(even_sum_4sym):
    cert = build_periodic_tree(even_sum_4sym, Block(2, 1, (3,)))
    tree = cert.unroll(5)
    for w, v in tree.items():
        for k in range(2):
            child = w + str(k)
            if child in tree:
                assert even_sum_4sym.allows_edge(k, v, tree[child])


# ---------------------------------------------------------------------------
# Dense orbit prefixes


def test_dense_prefix_single_target(irreducible_2sym):
    block = parse_block("0(0,1)", 2)
    pattern = dense_orbit_prefix(irreducible_2sym, [block])
    assert pattern.contains_block(block)


def test_dense_prefix_both_1blocks(irreducible_2sym):
    targets = [Block(2, 1, (a,)) for a in range(2)]
    pattern = dense_orbit_prefix(irreducible_2sym, targets)
    assert pattern.depth <= 3
    for t in targets:
        assert pattern.contains_block(t)


def test_dense_prefix_all_four_1blocks(even_sum_4sym):
    targets = [Block(2, 1, (a,)) for a in range(4)]
    pattern = dense_orbit_prefix(even_sum_4sym, targets)
    assert pattern.depth <= 4
    for t in targets:
        assert pattern.contains_block(t)
    # All edges inside the pattern are admissible.
    labels = pattern.as_map()
    for w, v in labels.items():
        for k in range(2):
            if w + str(k) in labels:
                assert even_sum_4sym.allows_edge(k, v, labels[w + str(k)])


def test_dense_prefix_refusals(identity_2sym, irreducible_2sym):
    with pytest.raises(NotIrreducibleError):
        dense_orbit_prefix(identity_2sym, [Block(2, 1, (0,))])
    with pytest.raises(ValueError):
        dense_orbit_prefix(irreducible_2sym, [])
    with pytest.raises(ValueError):
        dense_orbit_prefix(irreducible_2sym, [parse_block("0(1,0)", 2)])


# ---------------------------------------------------------------------------
# Entropy


def test_entropy_even_sum_closed_form(even_sum_4sym):
    est = entropy_estimate(even_sum_4sym, 12)
    for m, h in zip(est.ms, est.h_values):
        if m >= 2:
            assert abs(h - (math.log(2) + math.log(math.log(2)) / m)) < 1e-6
    assert abs(est.limit - math.log(2)) < 1e-6
    assert not est.degenerate


def test_entropy_full_shift(full_2sym):
    # |B_m| = 2^(2^m - 1): all labelings of the depth-(m-1) support.
    est = entropy_estimate(full_2sym, 10)
    for m, logc in zip(est.ms, est.log_counts):
        assert abs(logc - (2**m - 1) * math.log(2)) < 1e-6 * max(1.0, logc)
    assert abs(est.limit - math.log(2)) < 1e-3


def test_entropy_degenerate_single_tree():
    one = VertexTsft.from_matrices([[[1]], [[1]]])
    est = entropy_estimate(one, 5)
    assert est.degenerate
    assert est.limit == 0.0
    assert all(h == 0.0 for h in est.h_values)


def test_entropy_log_space_agrees_with_exact(even_sum_4sym):
    exact = entropy_estimate(even_sum_4sym, 8)
    assert exact.exact_through == 8
    # Force the log-space recursion almost immediately.
    forced = entropy_estimate(even_sum_4sym, 8, exact_digit_cap=1)
    for a, b in zip(exact.h_values[2:], forced.h_values[2:]):
        assert abs(a - b) < 1e-10 * max(1.0, abs(a))


def test_entropy_monotone_counts(irreducible_2sym):
    est = entropy_estimate(irreducible_2sym, 8)
    for a, b in zip(est.log_counts, est.log_counts[1:]):
        assert b >= a
    # Upper bound: all labelings of the support.
    for m, logc in zip(est.ms, est.log_counts):
        assert logc <= (2 ** (m + 1) - 1) * math.log(2) + 1e-9


def test_entropy_rejects_tiny_range(full_2sym):
    with pytest.raises(ValueError):
        entropy_estimate(full_2sym, 1)


# ---------------------------------------------------------------------------
# Chaos reports


def test_chaos_mixing_clause(mixing_2sym):
    report = chaos_report(mixing_2sym)
    assert report.chaotic is True
    assert report.clause == "mixing"
    assert report.periodic_certificate is not None
    assert report.dense_prefix is not None
    assert report.sensitive and report.sensitivity_delta == 0.5


def test_chaos_irreducible_clause(irreducible_2sym):
    report = chaos_report(irreducible_2sym)
    assert report.chaotic is True
    assert report.clause == "irreducible-finite-type"
    assert not report.mixing.verdict
    ok, why = verify_periodic(
        report.periodic_certificate, irreducible_2sym, depth=6
    )
    assert ok, why
    for t in report.dense_targets:
        assert report.dense_prefix.contains_block(t)


def test_chaos_not_established(identity_2sym):
    report = chaos_report(identity_2sym)
    assert report.chaotic is None
    assert report.clause is None
    assert report.periodic_certificate is None
    assert report.irreducibility.counterexample is not None
