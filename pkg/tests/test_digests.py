import pytest

from chainstamp.digests import ZERO32, Digest20, Digest32


def test_digest32_round_trip():
    d = Digest32.from_hex("ab" * 32)
    assert d.raw == b"\xab" * 32
    assert d.hex == "ab" * 32
    assert bytes(d) == d.raw


def test_digest32_accepts_mixed_case():
    upper = Digest32.from_hex("AB" * 32)
    lower = Digest32.from_hex("ab" * 32)
    assert upper == lower
    assert upper.hex == "ab" * 32  # rendering is always lowercase


@pytest.mark.parametrize(
    "bad",
    [
        "ab" * 31,  # 62 chars
        "ab" * 32 + "a",  # 65 chars
        "zz" * 32,  # not hex
        " " + "ab" * 31 + "a",  # whitespace
        "ab" * 32 + "\n",
    ],
)
def test_digest32_rejects_malformed_hex(bad):
    with pytest.raises(ValueError):
        Digest32.from_hex(bad)


def test_digest32_rejects_wrong_length_bytes():
    with pytest.raises(ValueError):
        Digest32(b"\x00" * 31)
    with pytest.raises(ValueError):
        Digest32(b"\x00" * 33)


def test_digest32_rejects_non_bytes():
    with pytest.raises(TypeError):
        Digest32("00" * 32)  # type: ignore[arg-type]


def test_digest32_orders_by_raw_bytes():
    a = Digest32(b"\x00" * 31 + b"\x01")
    b = Digest32(b"\x00" * 31 + b"\x02")
    assert a < b
    assert sorted([b, a]) == [a, b]


def test_digest32_is_hashable_and_frozen():
    d = Digest32(bytes(32))
    assert d in {d}
    with pytest.raises(AttributeError):
        d.raw = b"\x01" * 32  # type: ignore[misc]


def test_zero32_constant():
    assert ZERO32.raw == bytes(32)


def test_digest20_round_trip_and_validation():
    d = Digest20.from_hex("cd" * 20)
    assert d.raw == b"\xcd" * 20
    with pytest.raises(ValueError):
        Digest20(bytes(19))
    with pytest.raises(ValueError):
        Digest20.from_hex("cd" * 19)
    with pytest.raises(TypeError):
        Digest20(bytearray(20))  # type: ignore[arg-type]


def test_repr_contains_hex():
    assert "Digest32(" in repr(Digest32(bytes(32)))
    assert "00" * 20 in repr(Digest20(bytes(20)))
