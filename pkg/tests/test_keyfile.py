import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import KeyFormatError
from keys.generator import keygen
from keys.keyfile import KeyFile, load_key, save_key


@pytest.mark.parametrize("method", ["shuffle", "flip", "rom"])
@pytest.mark.parametrize("dims", [1, 2])
def test_save_load_is_identity(tmp_path, method, dims):
    key = keygen(method, 4, dims, seed=99)
    path = tmp_path / f"{method}.key"
    save_key(key, path)
    loaded = load_key(path)
    assert loaded.equals(key)
    assert (loaded.method, loaded.M, loaded.dims, loaded.seed) == (method, 4, dims, 99)


def test_rom_values_survive_bit_exactly(tmp_path):
    key = keygen('rom', 5, seed=7)
    save_key(key, tmp_path / "rom.key")
    np.testing.assert_array_equal(load_key(tmp_path / "rom.key").matrix, key.matrix)


def test_printed_value_survives_text_round_trip():
    keyfile = KeyFile(method='rom', block_size=1, dims=1, n=1, payload=[0.9898])
    assert KeyFile.loads(keyfile.dumps()).payload[0] == 0.9898


def test_fields_are_exact(tmp_path):
    save_key(keygen('flip', 3, seed=1), tmp_path / "k.key")
    data = json.loads((tmp_path / "k.key").read_text(encoding='utf-8'))
    assert set(data) == {"version", "method", "block_size", "dims", "n", "seed", "payload"}
    assert data["payload"] == [int(b) for b in keygen('flip', 3, seed=1).bits]


def test_truncated_file(tmp_path):
    save_key(keygen('shuffle', 5, seed=2), tmp_path / "k.key")
    text = (tmp_path / "k.key").read_text(encoding='utf-8')
    (tmp_path / "k.key").write_text(text[:len(text) // 2], encoding='utf-8')
    with pytest.raises(KeyFormatError):
        load_key(tmp_path / "k.key")


def _valid():
    return json.loads(KeyFile.from_key(keygen('shuffle', 3, seed=4)).dumps())


@pytest.mark.parametrize("change,field", [
    (lambda d: d.update(extra=1), "extra"),
    (lambda d: d.pop("seed"), "seed"),
    (lambda d: d.update(version=2), "version"),
    (lambda d: d.update(method="xor"), "method"),
    (lambda d: d.update(block_size=0), "block_size"),
    (lambda d: d.update(dims=3), "dims"),
    (lambda d: d.update(n=4), "n"),
    (lambda d: d.update(seed=-1), "seed"),
    (lambda d: d.update(payload=[0, 1]), "payload"),
    (lambda d: d.update(payload=[0, 1, 2.5]), "payload"),
    (lambda d: d.update(payload=[0, 1, 10**30]), r"payload\[2\]"),
    (lambda d: d.update(payload=[0, 1, 3]), r"payload\[2\]"),
    (lambda d: d.update(payload=[-1, 0, 1]), r"payload\[0\]"),
])
def test_malformed_fields_are_named(change, field):
    data = _valid()
    change(data)
    with pytest.raises(KeyFormatError, match=field):
        KeyFile.loads(json.dumps(data))


def test_payload_must_form_a_valid_key():
    data = _valid()
    data["payload"] = [0, 0, 1]
    with pytest.raises(KeyFormatError):
        KeyFile.loads(json.dumps(data)).to_key()


def test_non_orthogonal_rom_payload_rejected():
    keyfile = KeyFile(method='rom', block_size=2, dims=1, n=2, payload=[1.0, 0.5, 0.0, 1.0])
    with pytest.raises(KeyFormatError):
        KeyFile.loads(keyfile.dumps()).to_key()


def test_not_utf8(tmp_path):
    (tmp_path / "k.key").write_bytes(b"\xff\xfe\x00")
    with pytest.raises(KeyFormatError):
        load_key(tmp_path / "k.key")


def test_flip_bit_out_of_range():
    data = json.loads(KeyFile.from_key(keygen('flip', 3, seed=4)).dumps())
    data["payload"] = [0, 2, 1]
    with pytest.raises(KeyFormatError, match=r"payload\[1\]"):
        KeyFile.loads(json.dumps(data))


@pytest.mark.parametrize("value", [10**400, -10**400])
def test_rom_entry_beyond_float_range(value):
    data = {"version": 1, "method": "rom", "block_size": 1, "dims": 1, "n": 1, "seed": None, "payload": [value]}
    with pytest.raises(KeyFormatError, match=r"payload\[0\]"):
        KeyFile.loads(json.dumps(data))


def test_rom_overflowing_literal_rejected():
    text = '{"version": 1, "method": "rom", "block_size": 1, "dims": 1, "n": 1, "seed": null, "payload": [1e400]}'
    with pytest.raises(KeyFormatError, match=r"payload\[0\]"):
        KeyFile.loads(text)


ROM_ENTRIES = st.one_of(
    st.floats(allow_nan=False, allow_infinity=False),
    st.sampled_from([-0.0, 0.0, 5e-324, -5e-324, 2.2250738585072014e-308, 1.1125369292536007e-308]),
)


@settings(max_examples=1000, deadline=None)
@given(payload=st.lists(ROM_ENTRIES, min_size=4, max_size=4))
def test_rom_payload_text_round_trip_is_bit_exact(payload):
    keyfile = KeyFile(method='rom', block_size=2, dims=1, n=2, payload=payload, seed=3)
    loaded = KeyFile.loads(keyfile.dumps())
    assert np.array(loaded.payload).tobytes() == np.array(payload, dtype=np.float64).tobytes()
