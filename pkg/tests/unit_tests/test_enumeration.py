import itertools
import math

import pytest

from fuglede.enumeration import (
    CaseSpec,
    FreeTuple,
    accepts_first,
    accepts_later,
    count_enumeration,
    count_prefix,
    enumerate_tuples,
    orbit_min,
    orbit_min_check,
    parse_slice,
    passes_heuristics,
    sample_tuples,
    shard_id,
    shard_keys,
    subset_for,
)
from fuglede.errors import InvalidCaseError
from fuglede.spectile import from_coords


def word(*bits):
    return from_coords(bits)


def test_case_spec_defaults():
    small = CaseSpec(6, 8)
    assert small.prefix == (0, 1, 2, 4, 8, 16, 32)
    assert len(small.pool) == 57
    assert small.free_count == 1
    assert not small.heuristics
    assert CaseSpec(6, 16).heuristics
    assert CaseSpec(6, 16).label == "d6-s16-pruned"
    assert CaseSpec(5, 8).label == "d5-s8-all"
    assert len(CaseSpec(5, 8).pool) == 26


@pytest.mark.parametrize("d, size", [(1, 2), (6, 7), (3, 9)])
def test_case_spec_rejects_invalid(d, size):
    with pytest.raises(InvalidCaseError):
        CaseSpec(d, size)


def test_unpruned_counts_are_binomials():
    assert count_enumeration(CaseSpec(6, 8)) == 57
    assert count_enumeration(CaseSpec(5, 8)) == 325
    assert count_enumeration(CaseSpec(6, 16, heuristics=False)) == math.comb(57, 9)
    assert math.comb(57, 9) > 10**9


def test_stream_is_lexicographic():
    spec = CaseSpec(5, 8)
    tuples = [t.points for t in enumerate_tuples(spec)]
    assert len(tuples) == 325
    assert tuples == sorted(tuples)
    assert len(set(tuples)) == 325
    assert all(a < b for a, b in tuples)
    assert [t.points for t in enumerate_tuples(CaseSpec(6, 8))] == [(x,) for x in CaseSpec(6, 8).pool]


def test_subset_for_adds_prefix():
    spec = CaseSpec(6, 8)
    e = subset_for(spec, FreeTuple(6, (3,)))
    assert e.points == (0, 1, 2, 3, 4, 8, 16, 32)


def test_free_tuple_rejects_prefix_points():
    with pytest.raises(ValueError):
        FreeTuple(6, (4, 7))
    with pytest.raises(ValueError):
        FreeTuple(6, (7, 5))


def test_rule_examples():
    assert not accepts_first(word(0, 0, 1, 0, 1, 1), 6)
    assert accepts_first(word(0, 0, 0, 1, 1, 1), 6)
    assert not passes_heuristics(FreeTuple(6, (word(0, 0, 1, 0, 1, 1),)))
    x1 = word(0, 0, 0, 1, 1, 1)
    x2 = word(1, 0, 1, 0, 1, 1)
    assert not passes_heuristics(FreeTuple(6, (x1, x2)))
    chain = (
        word(0, 0, 0, 0, 1, 1),
        word(0, 0, 0, 1, 1, 1),
        word(0, 0, 1, 1, 1, 1),
        word(0, 1, 1, 1, 1, 1),
        word(1, 1, 1, 1, 1, 1),
    )
    assert passes_heuristics(FreeTuple(6, chain))


def test_rule_for_leading_zeros_of_second_point():
    x1, x2 = word(0, 0, 0, 0, 1, 1), word(0, 0, 0, 1, 1, 1)
    x3 = word(0, 0, 1, 1, 1, 1)
    # x_2 starts with three zeros, so x_i needs at least as many 1s there as x_3
    assert accepts_later(x1, x2, x3, word(0, 1, 0, 1, 1, 1), 6)
    assert not accepts_later(x1, x2, word(0, 1, 1, 0, 1, 1), word(1, 0, 0, 1, 1, 1), 6)


def test_orbit_examples():
    assert not orbit_min_check(FreeTuple(6, (word(0, 0, 1, 0, 1, 1),)))
    assert orbit_min_check(FreeTuple(6, (63,)))
    assert orbit_min(FreeTuple(6, (word(1, 1, 0, 0, 0, 0),))).points == (3,)


def test_pruning_never_drops_an_orbit():
    spec = CaseSpec(6, 16, heuristics=False)
    for t in sample_tuples(spec, 10_000, seed=42):
        canonical = orbit_min(t)
        assert passes_heuristics(canonical), (t.points, canonical.points)
        if not passes_heuristics(t):
            assert canonical.points != t.points, t.points


def test_pruned_stream_equals_filtered_stream():
    for d, size in [(5, 8), (5, 10), (4, 9)]:
        spec = CaseSpec(d, size, heuristics=True)
        raw = CaseSpec(d, size, heuristics=False)
        expected = [
            t.points for t in enumerate_tuples(raw) if passes_heuristics(t)
        ]
        streamed = [t.points for t in enumerate_tuples(spec)]
        assert streamed == expected
        assert count_enumeration(spec) == len(expected)


def test_every_orbit_reaches_the_pruned_stream():
    spec = CaseSpec(5, 8, heuristics=True)
    streamed = {t.points for t in enumerate_tuples(spec)}
    for t in enumerate_tuples(CaseSpec(5, 8)):
        assert orbit_min(t).points in streamed


def test_sampled_orbits_reach_their_shard():
    spec = CaseSpec(6, 16)
    for t in sample_tuples(spec, 25, seed=3):
        canonical = orbit_min(t)
        shard = list(enumerate_tuples(spec, canonical.points[:6]))
        assert canonical in shard


def test_pruning_factor():
    pruned = count_enumeration(CaseSpec(6, 16))
    factor = math.comb(57, 9) / pruned
    assert 15 <= factor <= 60


def test_count_prefix_matches_stream():
    spec = CaseSpec(6, 16)
    key = next(shard_keys(spec))
    assert key == (3, 5)
    chosen = next(enumerate_tuples(spec, key)).points[:6]
    assert count_prefix(spec, chosen) == sum(1 for _ in enumerate_tuples(spec, chosen))


def test_invalid_prefix_streams_nothing():
    spec = CaseSpec(6, 16)
    assert list(enumerate_tuples(spec, (word(0, 0, 1, 0, 1, 1),))) == []
    assert list(enumerate_tuples(CaseSpec(6, 8), (4,))) == []


def test_parse_slice():
    spec = CaseSpec(6, 16)
    assert parse_slice(spec, "x1=first") == range(3, 4)
    assert parse_slice(spec, "x1=7") == range(7, 8)
    assert parse_slice(spec, "x1=3:16") == range(3, 16)
    with pytest.raises(InvalidCaseError):
        parse_slice(spec, "x2=3")
    with pytest.raises(InvalidCaseError):
        parse_slice(spec, "x1=abc")


def test_slice_counts_add_up():
    spec = CaseSpec(6, 16)
    whole = count_enumeration(spec)
    parts = sum(count_enumeration(spec, range(x, x + 1)) for x in (3, 7, 15, 31, 63))
    assert parts == whole
    assert count_enumeration(spec, range(5, 7)) == 0


def test_shard_keys():
    keys = list(shard_keys(CaseSpec(5, 8)))
    assert len(keys) == 325
    assert keys[0] == (3, 5)
    assert shard_id((3, 7)) == "3-7"
    assert list(shard_keys(CaseSpec(6, 8))) == [(x,) for x in CaseSpec(6, 8).pool]


def test_sample_tuples_is_deterministic():
    spec = CaseSpec(6, 16, heuristics=False)
    first = sample_tuples(spec, 50, seed=1)
    assert first == sample_tuples(spec, 50, seed=1)
    assert first != sample_tuples(spec, 50, seed=2)
    assert all(len(t.points) == 9 for t in first)


def test_orbit_min_is_in_orbit():
    spec = CaseSpec(5, 10, heuristics=False)
    for t in itertools.islice(enumerate_tuples(spec), 0, 2000, 37):
        canonical = orbit_min(t)
        assert canonical.points <= t.points
        assert orbit_min(canonical) == canonical
