"""Random stream contract: fixed splitmix64 seeding, xoshiro256** draws."""

import pytest

from zeroe.rng import RandomStream, derive_stream, splitmix64

M64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def _ref_splitmix64_outputs(x, count):
    """Straight-line reference, kept independent of the implementation."""
    outs = []
    for _ in range(count):
        x = (x + GOLDEN) & M64
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
        outs.append(z ^ (z >> 31))
    return x, outs


def _ref_xoshiro_draws(state, count):
    def rotl(v, k):
        return ((v << k) | (v >> (64 - k))) & M64

    s = list(state)
    outs = []
    for _ in range(count):
        result = (rotl((s[1] * 5) & M64, 7) * 9) & M64
        t = (s[1] << 17) & M64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = rotl(s[3], 45)
        outs.append(result)
    return outs


def _ref_stream_draws(seed, index, count):
    x = (seed ^ ((index * GOLDEN) & M64)) & M64
    _, state = _ref_splitmix64_outputs(x, 4)
    return _ref_xoshiro_draws(state, count)


def test_splitmix64_known_vectors():
    # first outputs for state 0, widely published for this mixer
    _, outs = _ref_splitmix64_outputs(0, 4)
    assert outs == [
        0xE220A8397B1DCDAF,
        0x6E789E6AA1B965F4,
        0x06C45D188009454F,
        0xF88BB8A8724C81EC,
    ]
    x, out = splitmix64(0)
    assert out == 0xE220A8397B1DCDAF
    _, out2 = splitmix64(x)
    assert out2 == 0x6E789E6AA1B965F4


@pytest.mark.parametrize("seed,index", [(0, 0), (42, 0), (42, 1), (2**64 - 1, 77)])
def test_matches_reference_arithmetic(seed, index):
    stream = derive_stream(seed, index)
    got = [stream.next_raw() for _ in range(200)]
    assert got == _ref_stream_draws(seed, index, 200)


def test_determinism_first_1000_draws():
    a = derive_stream(7, 11)
    b = derive_stream(7, 11)
    assert [a.next_raw() for _ in range(1000)] == [b.next_raw() for _ in range(1000)]


def test_distinct_sample_indices_differ():
    assert derive_stream(42, 0).next_raw() != derive_stream(42, 1).next_raw()


def test_zero_seed_gives_nonzero_state():
    assert any(derive_stream(0, 0).state)


def test_uniform_range_and_determinism():
    stream = derive_stream(3, 4)
    values = [stream.uniform() for _ in range(10_000)]
    assert all(0.0 <= v < 1.0 for v in values)
    again = derive_stream(3, 4)
    assert [again.uniform() for _ in range(10_000)] == values


def test_uniform_construction_uses_top_53_bits():
    raws = _ref_stream_draws(5, 6, 50)
    stream = derive_stream(5, 6)
    for raw in raws:
        assert stream.uniform() == (raw >> 11) * 2.0**-53


def test_uniform_mean_over_1e6_draws():
    stream = derive_stream(123, 0)
    n = 1_000_000
    mean = sum(stream.uniform() for _ in range(n)) / n
    assert 0.499 <= mean <= 0.501


def test_below_n1_is_zero_and_consumes_a_draw():
    stream = derive_stream(9, 9)
    other = derive_stream(9, 9)
    other.next_raw()
    assert stream.below(1) == 0
    assert stream.next_raw() == other.next_raw()


def test_below_two_outcome_frequencies():
    stream = derive_stream(17, 0)
    n = 1_000_000
    ones = sum(stream.below(2) for _ in range(n))
    assert 0.498 <= ones / n <= 0.502
    assert 0.498 <= (n - ones) / n <= 0.502


def test_below_rejection_matches_reference():
    # n=3: threshold floor(2^64/3)*3; rejected draws are skipped, kept mod 3
    n = 3
    threshold = ((1 << 64) // n) * n
    raws = _ref_stream_draws(21, 2, 5000)
    expected = [v % n for v in raws if v < threshold][:1000]
    stream = derive_stream(21, 2)
    assert [stream.below(n) for _ in range(1000)] == expected


def test_below_zero_rejected():
    with pytest.raises(ValueError):
        derive_stream(0, 0).below(0)


def test_state_property_reflects_logical_position():
    # buffered generation must not leak into the reported state mid-block
    stream = derive_stream(4, 4)
    for _ in range(5):
        stream.next_raw()
    fresh = RandomStream(stream.state, origin=(4, 4))
    assert [stream.next_raw() for _ in range(100)] == [
        fresh.next_raw() for _ in range(100)
    ]
