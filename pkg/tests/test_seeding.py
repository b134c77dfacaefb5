"""Seed-derivation and stream determinism."""

from weak_tt.seeding import Stream, derive, stream


def test_derive_deterministic():
    assert derive(7, "a", 1) == derive(7, "a", 1)


def test_sibling_labels_distinct():
    # ~1.4k derived seeds give over 10^6 distinct pairs; all must differ.
    seeds = {derive(7, "trial", i) for i in range(1415)}
    assert len(seeds) == 1415


def test_empty_label_path_is_defined():
    assert len(derive(7, nbytes=16)) == 16
    assert derive(7) != derive(8)


def test_label_types_do_not_collide():
    assert derive(0, "1") != derive(0, 1)
    assert derive(0, "a", "b") != derive(0, "ab")


def test_stream_replay():
    a, b = Stream(b"s"), Stream(b"s")
    assert [a.below(10) for _ in range(20)] == [b.below(10) for _ in range(20)]
    assert a.bytes(8) == b.bytes(8)
    assert a.gauss(2.0) == b.gauss(2.0)


def test_stream_below_is_in_range():
    st = stream(3, "bounds")
    for n in (1, 2, 3, 7, 100, 2**20):
        for _ in range(50):
            assert 0 <= st.below(n) < n


def test_stream_bits_bias_sanity():
    st = stream(11, "bits")
    ones = sum(st.bit() for _ in range(4000))
    assert abs(ones / 4000 - 0.5) < 0.05
