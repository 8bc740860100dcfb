"""JSON serialization of behavior tables.

Format: {"round": k, "probs": {"xyz;abc": value, ...}} with one entry per
input/outcome combination, keys as two 3-bit strings.  Floats serialize as
shortest round-trip decimals, so export -> import -> export is byte-identical.
"""

from __future__ import annotations

import json
import os
import tempfile
from itertools import product

from .engine import ENTRY_FLOOR, NORMALIZATION_ATOL, BehaviorTable

_ALL_KEYS = tuple(
    f"{x}{y}{z};{a}{b}{c}" for x, y, z, a, b, c in product((0, 1), repeat=6)
)


def atomic_write_text(path: str, text: str) -> None:
    """Write-then-rename so readers never observe a partial file."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def export_behavior(table: BehaviorTable, path: str) -> None:
    probs = {}
    flat = table.probs.reshape(64)
    for key, value in zip(_ALL_KEYS, flat):
        probs[key] = float(value)
    payload = {"round": int(table.round_index), "probs": probs}
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def import_behavior(path: str) -> BehaviorTable:
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, dict) or "probs" not in data:
        raise ValueError(f"{path}: expected an object with a 'probs' mapping")
    round_index = data.get("round", 1)
    if not isinstance(round_index, int) or round_index < 1:
        raise ValueError(f"{path}: 'round' must be a positive integer, got {round_index!r}")
    probs = data["probs"]
    if not isinstance(probs, dict):
        raise ValueError(f"{path}: 'probs' must be a mapping")
    for key in probs:
        if key not in _ALL_KEYS:
            raise ValueError(f"{path}: unknown probability key {key!r}")
    values = []
    for key in _ALL_KEYS:
        if key not in probs:
            raise ValueError(f"{path}: missing probability for ({key})")
        value = probs[key]
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ValueError(f"{path}: probability ({key}) is not a number: {value!r}")
        if value < ENTRY_FLOOR:
            raise ValueError(f"{path}: probability ({key}) = {value!r} is negative")
        values.append(float(value))

    # locate the first non-normalized block before handing off to the table type
    for x, y, z in product((0, 1), repeat=3):
        offset = (4 * x + 2 * y + z) * 8
        block_sum = sum(values[offset:offset + 8])
        if abs(block_sum - 1.0) > NORMALIZATION_ATOL:
            raise ValueError(
                f"{path}: block (xyz)=({x}{y}{z}) sums to {block_sum!r}, expected 1"
            )
    table = BehaviorTable.from_vector(values, round_index=round_index)
    return table
