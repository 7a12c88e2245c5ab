"""Partition refinement: goldens, mode agreement, traces, complexity bounds."""

import math

import pytest

from coalgcert.coalgebra import Coalgebra, parse_coalgebra
from coalgcert.functor import parse_functor
from coalgcert.oracle import (
    GeneratorSpec, generate, naive_bisimilarity, partition_key,
)
from coalgcert.refiner import RefineError, refine, replay_trace
from conftest import CANCELLATIVE_FUNCTORS, FUNCTORS, random_instances


def canon(blocks):
    return partition_key(blocks)


def test_ts1_golden(ts1):
    res = refine(ts1)
    # x alone; x1 and y equivalent; z the deadlock
    assert canon(res.blocks) == canon([[0], [1, 2], [3]])


def test_mc1_golden_all_modes(mc1):
    expected = canon(naive_bisimilarity(mc1))
    for mode in ("generic", "cancellative", "naive"):
        res = refine(mc1, mode=mode, audit=True)
        assert canon(res.blocks) == expected, mode


def test_modes_agree_with_oracle():
    for label, c in random_instances(seeds=range(6), n=14):
        expected = canon(naive_bisimilarity(c))
        for mode in ("generic", "naive"):
            res = refine(c, mode=mode)
            assert canon(res.blocks) == expected, (label, mode)
    for label, c in random_instances(CANCELLATIVE_FUNCTORS,
                                     seeds=range(6), n=14):
        res = refine(c, mode="cancellative")
        assert canon(res.blocks) == canon(naive_bisimilarity(c)), label


def test_cancellative_rejected_on_powerset(ts1):
    with pytest.raises(RefineError):
        refine(ts1, mode="cancellative")


def test_unknown_mode(ts1):
    with pytest.raises(RefineError):
        refine(ts1, mode="bogus")


def test_replay_trace_reproduces_partition():
    for label, c in random_instances(seeds=range(4), n=10):
        for mode in ("generic", "naive"):
            res = refine(c, mode=mode)
            assert replay_trace(res.trace) == res.block_of, (label, mode)


def test_block_of_consistent():
    for label, c in random_instances(seeds=range(3), n=10):
        res = refine(c)
        for bid, states in zip(res.block_ids, res.blocks):
            assert all(res.block_of[s] == bid for s in states), label


def test_splitter_occurrence_bound():
    """No state enters a splitter more than log2(n) + 1 times."""
    for label, c in random_instances(seeds=range(4), n=32, density=0.15):
        res = refine(c)
        assert res.stats["max_in_splitter"] <= math.log2(max(c.n, 2)) + 1, label


def test_edge_cases():
    empty = Coalgebra(parse_functor("P"), (), ())
    res = refine(empty)
    assert res.blocks == [] and res.block_of == []
    one = parse_coalgebra("functor: P\nstates: a\na -> {a}")
    res = refine(one)
    assert res.blocks == [[0]]
    # constant functor: everything equivalent immediately
    const = parse_coalgebra("functor: C{k}\nstates: a, b\na -> k\nb -> k")
    res = refine(const)
    assert res.blocks == [[0, 1]]
    assert res.trace.splits == []


def test_stats_counters_present():
    res = refine(generate(GeneratorSpec(functor="P", n=20, seed=1,
                                        density=0.2)))
    st = res.stats
    for key in ("iterations", "new_blocks", "refined_parents",
                "visited_edges", "splitter_states", "max_in_splitter"):
        assert key in st and st[key] >= 0
    assert st["new_blocks"] == len(res.blocks) - len(res.trace.init.blocks)
