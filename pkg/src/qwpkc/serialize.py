"""File formats: QWS1 state files and JSON key/config objects.

A QWS1 file is plain text with LF line endings: a header line
``QWS1 N=<decimal>`` followed by exactly ``2N`` lines of ``<re> <im>`` in
flat-index order.  Values are written with 18 significant digits so a
write/read cycle reproduces every double bit-for-bit.

Secret keys serialize as a single JSON object carrying both the public
parameters and the private tuple: ``{n, N, d, t_min, t_max, k, t, l, s}``
with ``s`` spelled "L" or "R".  Public-key and cipher state files get a JSON
sidecar with just the public parameters ``{n, N, d, t_min, t_max}``.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .protocol import SecretKey, WalkConfig
from .walk import QuantumState

__all__ = [
    "StateFormatError",
    "state_to_text",
    "parse_state",
    "write_state",
    "read_state",
    "config_to_dict",
    "config_from_dict",
    "secret_key_to_dict",
    "secret_key_from_dict",
    "write_secret_key",
    "read_secret_key",
    "write_sidecar",
    "read_sidecar",
    "sidecar_path",
]

_HEADER_RE = re.compile(r"^QWS1 N=(\d+)$")


class StateFormatError(Exception):
    """A state or key file is malformed, truncated, or inconsistent."""


def state_to_text(state: QuantumState) -> str:
    lines = [f"QWS1 N={state.n_positions}"]
    for amp in state.amplitudes:
        lines.append(f"{amp.real:.17e} {amp.imag:.17e}")
    return "\n".join(lines) + "\n"


def parse_state(text: str) -> QuantumState:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise StateFormatError("empty state file")
    header = _HEADER_RE.match(lines[0])
    if header is None:
        raise StateFormatError(f"bad header line: {lines[0]!r}")
    n_positions = int(header.group(1))
    body = lines[1:]
    if len(body) != 2 * n_positions:
        raise StateFormatError(
            f"expected {2 * n_positions} amplitude lines, found {len(body)}"
        )
    amps = np.empty(2 * n_positions, dtype=np.complex128)
    for i, line in enumerate(body):
        parts = line.split()
        if len(parts) != 2:
            raise StateFormatError(f"amplitude line {i + 2} is not '<re> <im>': {line!r}")
        try:
            amps[i] = complex(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise StateFormatError(f"bad number on line {i + 2}: {line!r}") from exc
    try:
        return QuantumState(n_positions, amps)
    except ValueError as exc:
        raise StateFormatError(f"state file fails validation: {exc}") from exc


def write_state(state: QuantumState, path: str | Path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(state_to_text(state))


def read_state(path: str | Path) -> QuantumState:
    with open(path, "r") as fh:
        return parse_state(fh.read())


def _dump_json(obj: dict, path: str | Path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _load_json(path: str | Path) -> dict:
    with open(path, "r") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise StateFormatError(f"{path}: expected a JSON object")
    return obj


def config_to_dict(config: WalkConfig) -> dict:
    return {
        "n": config.message_bits,
        "N": config.circle_size,
        "d": config.coin_divisor,
        "t_min": config.t_min,
        "t_max": config.t_max,
    }


def _int_field(obj: dict, name: str) -> int:
    try:
        return int(obj[name])
    except (TypeError, ValueError) as exc:
        raise StateFormatError(f"field {name!r} is not an integer: {obj[name]!r}") from exc


def config_from_dict(obj: dict) -> WalkConfig:
    if "n" not in obj:
        raise StateFormatError("config object is missing field 'n'")
    # structural problems raise StateFormatError; out-of-range values are
    # left to WalkConfig validation
    return WalkConfig(
        message_bits=_int_field(obj, "n"),
        circle_size=_int_field(obj, "N") if "N" in obj else None,
        coin_divisor=_int_field(obj, "d") if "d" in obj else None,
        t_min=_int_field(obj, "t_min") if "t_min" in obj else None,
        t_max=_int_field(obj, "t_max") if "t_max" in obj else None,
    )


def secret_key_to_dict(sk: SecretKey, config: WalkConfig) -> dict:
    obj = config_to_dict(config)
    obj.update(
        {
            "k": sk.coin_index,
            "t": sk.steps,
            "l": sk.start_position,
            "s": sk.start_coin,
        }
    )
    return obj


def secret_key_from_dict(obj: dict) -> tuple[SecretKey, WalkConfig]:
    config = config_from_dict(obj)
    missing = [name for name in ("k", "t", "l", "s") if name not in obj]
    if missing:
        raise StateFormatError(f"secret key object is missing {missing}")
    try:
        sk = SecretKey(
            coin_index=_int_field(obj, "k"),
            steps=_int_field(obj, "t"),
            start_position=_int_field(obj, "l"),
            start_coin=str(obj["s"]),
        )
    except (TypeError, ValueError) as exc:
        raise StateFormatError(f"malformed secret key object: {exc}") from exc
    return sk, config


def write_secret_key(sk: SecretKey, config: WalkConfig, path: str | Path) -> None:
    _dump_json(secret_key_to_dict(sk, config), path)


def read_secret_key(path: str | Path) -> tuple[SecretKey, WalkConfig]:
    return secret_key_from_dict(_load_json(path))


def sidecar_path(state_path: str | Path) -> Path:
    """Path of the JSON parameter sidecar belonging to a state file."""
    return Path(f"{state_path}.json")


def write_sidecar(config: WalkConfig, state_path: str | Path) -> None:
    _dump_json(config_to_dict(config), sidecar_path(state_path))


def read_sidecar(state_path: str | Path) -> WalkConfig:
    return config_from_dict(_load_json(sidecar_path(state_path)))
