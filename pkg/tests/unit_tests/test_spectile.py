import itertools

import numpy as np
import pytest

from fuglede.errors import PointOutOfRangeError
from fuglede.spectile import (
    ConnectionSet,
    SubsetZ2d,
    check_equivalence,
    coords,
    embed,
    fourier_value,
    fourier_values,
    from_coords,
    has_k_clique,
    is_spectral,
    is_tile,
    spectral_connection_set,
    tiling_connection_set,
    verify_spectrum,
    verify_tiling,
    xor_translate,
)

CROSS = SubsetZ2d.of([0, 1, 2, 4], 3)


def mask_of(points):
    return sum(1 << p for p in points)


def test_coordinates_are_msb_first():
    assert coords(1, 6) == (0, 0, 0, 0, 0, 1)
    assert coords(32, 6) == (1, 0, 0, 0, 0, 0)
    assert from_coords((0, 0, 1, 0, 1, 1)) == 11


def test_subset_validation():
    with pytest.raises(PointOutOfRangeError):
        SubsetZ2d.of([0, 1, 2, 5], 2)
    with pytest.raises(ValueError):
        SubsetZ2d.of([1, 1], 2)
    assert SubsetZ2d.of([4, 0, 2], 3).points == (0, 2, 4)


def test_fourier_value_examples():
    assert fourier_value(SubsetZ2d.of([0], 4), 9) == 1
    assert fourier_value(SubsetZ2d.full(2), 3) == 0
    assert fourier_value(CROSS, 3) == 0
    assert fourier_value(CROSS, 7) == -2


def test_fourier_values_match_pointwise():
    rng = np.random.default_rng(3)
    for _ in range(20):
        pts = rng.choice(64, size=int(rng.integers(1, 20)), replace=False)
        e = SubsetZ2d.of(pts.tolist(), 6)
        assert fourier_values(e).tolist() == [fourier_value(e, t) for t in range(64)]


def test_fourier_values_in_large_dimension():
    d = 14
    rng = np.random.default_rng(12)
    e = SubsetZ2d.of(rng.choice(1 << d, size=8, replace=False).tolist(), d)
    values = fourier_values(e)
    assert values.shape == (1 << d,)
    assert values[0] == 8
    for t in rng.integers(0, 1 << d, size=200).tolist():
        assert values[t] == fourier_value(e, t)

    subgroup = SubsetZ2d.of(range(8), d)
    expected = sum(1 << t for t in range(1 << d) if t & 7)
    assert spectral_connection_set(subgroup).mask == expected


def test_spectral_connection_set_examples():
    assert spectral_connection_set(CROSS).points() == [3, 5, 6]
    assert spectral_connection_set(SubsetZ2d.full(3)).points() == list(range(1, 8))
    assert spectral_connection_set(SubsetZ2d.of([0], 3)).mask == 0


def test_tiling_connection_set_examples():
    assert tiling_connection_set(CROSS).points() == [7]
    assert tiling_connection_set(SubsetZ2d.of([0], 3)).points() == list(range(1, 8))
    assert tiling_connection_set(SubsetZ2d.full(3)).mask == 0


def test_connection_set_rejects_self_loop():
    with pytest.raises(ValueError):
        ConnectionSet(3, 1)


def test_xor_translate_matches_direct_translation():
    rng = np.random.default_rng(5)
    for d in (1, 3, 6):
        for _ in range(30):
            pts = set(rng.choice(1 << d, size=int(rng.integers(0, 1 << d)), replace=False).tolist())
            v = int(rng.integers(0, 1 << d))
            assert xor_translate(mask_of(pts), v, d) == mask_of({p ^ v for p in pts})


def test_has_k_clique():
    conn = ConnectionSet(3, mask_of([3, 5, 6]))
    assert has_k_clique(conn, 0) == []
    assert has_k_clique(conn, 3) == [3, 5, 6]
    assert has_k_clique(conn, 4) is None
    complete = ConnectionSet(4, mask_of(range(1, 16)))
    assert has_k_clique(complete, 15) == list(range(1, 16))


def test_has_k_clique_result_is_a_clique():
    rng = np.random.default_rng(9)
    for _ in range(100):
        pts = rng.choice(np.arange(1, 64), size=int(rng.integers(5, 40)), replace=False)
        conn = ConnectionSet(6, mask_of(pts.tolist()))
        for k in (2, 3, 4):
            clique = has_k_clique(conn, k)
            if clique is None:
                continue
            assert len(clique) == k
            assert all(x in conn for x in clique)
            assert all(a ^ b in conn for a, b in itertools.combinations(clique, 2))


def test_is_spectral_examples():
    result = is_spectral(SubsetZ2d.of([0, 1], 2))
    assert result.holds and result.witness.points == (0, 1)
    assert not is_spectral(SubsetZ2d.of([0, 1, 2], 2)).holds
    result = is_spectral(CROSS)
    assert result.holds and result.witness.points == (0, 3, 5, 6)


def test_is_tile_examples():
    result = is_tile(SubsetZ2d.of([0, 1], 2))
    assert result.holds and result.witness.points == (0, 2)
    assert not is_tile(SubsetZ2d.of([0, 1, 2], 2)).holds
    result = is_tile(CROSS)
    assert result.holds and result.witness.points == (0, 7)


def test_degenerate_sizes():
    single = SubsetZ2d.of([5], 3)
    full = SubsetZ2d.full(3)
    for e in (single, full):
        record = check_equivalence(e)
        assert record.spectral and record.tile
        assert verify_spectrum(e, record.spectrum)
        assert verify_tiling(e, record.tiling)
    with pytest.raises(ValueError):
        is_spectral(SubsetZ2d(3, ()))


def test_check_equivalence_examples():
    record = check_equivalence(CROSS)
    assert record.spectral and record.tile and record.agree
    record = check_equivalence(SubsetZ2d.of([0, 1, 2], 2))
    assert not record.spectral and not record.tile and record.agree


def test_size_eight_sets_in_dimension_six_agree():
    prefix = [0, 1, 2, 4, 8, 16, 32]
    extras = [x for x in range(64) if x not in prefix]
    assert len(extras) == 57
    for x in extras:
        assert check_equivalence(SubsetZ2d.of(prefix + [x], 6)).agree


def test_translation_and_permutation_invariance():
    rng = np.random.default_rng(13)
    for _ in range(40):
        size = int(rng.choice([4, 8, 16]))
        e = SubsetZ2d.of(rng.choice(64, size=size, replace=False).tolist(), 6)
        base = check_equivalence(e)
        shifted = check_equivalence(e.translate(int(rng.integers(0, 64))))
        permuted = check_equivalence(e.permute(rng.permutation(6).tolist()))
        assert (shifted.spectral, shifted.tile) == (base.spectral, base.tile)
        assert (permuted.spectral, permuted.tile) == (base.spectral, base.tile)


def test_witnesses_recheck():
    rng = np.random.default_rng(17)
    for _ in range(60):
        size = int(rng.choice([2, 4, 8]))
        e = SubsetZ2d.of(rng.choice(32, size=size, replace=False).tolist(), 5)
        record = check_equivalence(e)
        if record.spectral:
            assert 0 in record.spectrum.points
            assert verify_spectrum(e, record.spectrum)
        if record.tile:
            assert 0 in record.tiling.points
            assert verify_tiling(e, record.tiling)


def random_coset(rng, d, k):
    """A translate of the span of k random independent words."""
    basis = []
    span = {0}
    while len(basis) < k:
        v = int(rng.integers(1, 1 << d))
        if v not in span:
            basis.append(v)
            span |= {s ^ v for s in span}
    shift = int(rng.integers(0, 1 << d))
    return SubsetZ2d.of((s ^ shift for s in span), d)


def test_spectrum_duality():
    rng = np.random.default_rng(19)
    for _ in range(30):
        e = random_coset(rng, 5, 3)
        result = is_spectral(e)
        assert result.holds
        assert verify_spectrum(result.witness, e)
        assert is_spectral(result.witness).holds


def test_embed_preserves_decisions():
    e = embed(CROSS, 5)
    assert e.points == (0, 4, 8, 16)
    assert all(x & 0b11 == 0 for x in e.points)
    record = check_equivalence(e)
    assert record.spectral and record.tile
    with pytest.raises(ValueError):
        embed(e, 3)
