"""Self-describing binary checkpoint container.

Layout: the 8-byte magic ``PIMCKPT1``, the header length as little-endian
uint64, a UTF-8 JSON header, then every tensor as raw little-endian float64 in
header order. The header lists name, shape, byte offset and byte count per
tensor and carries free-form metadata.
"""

import json
import struct
from pathlib import Path
from typing import Any, Dict, Tuple

import jsonschema
import numpy as np

from pim_har.errors import CheckpointError

MAGIC = b"PIMCKPT1"
FORMAT_VERSION = 1
_DTYPE = np.dtype("<f8")

HEADER_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["version", "tensors", "metadata"],
    "properties": {
        "version": {"const": FORMAT_VERSION},
        "tensors": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "shape", "offset", "nbytes"],
                "properties": {
                    "name": {"type": "string"},
                    "shape": {
                        "type": "array",
                        "items": {"type": "integer", "minimum": 0},
                    },
                    "offset": {"type": "integer", "minimum": 0},
                    "nbytes": {"type": "integer", "minimum": 0},
                },
            },
        },
        "metadata": {"type": "object"},
    },
}


def write_checkpoint(
    path: Path, tensors: Dict[str, np.ndarray], metadata: Dict[str, Any]
) -> None:
    """Write ``tensors`` (in insertion order) and JSON-serializable ``metadata``.

    Raises:
        CheckpointError: If the file cannot be written
    """
    entries = []
    blocks = []
    offset = 0
    for name, tensor in tensors.items():
        block = np.ascontiguousarray(tensor, dtype=_DTYPE).tobytes()
        entries.append(
            {
                "name": name,
                "shape": list(tensor.shape),
                "offset": offset,
                "nbytes": len(block),
            }
        )
        blocks.append(block)
        offset += len(block)
    header = json.dumps(
        {"version": FORMAT_VERSION, "tensors": entries, "metadata": metadata},
        sort_keys=True,
    ).encode("utf-8")

    try:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<Q", len(header)))
            fh.write(header)
            for block in blocks:
                fh.write(block)
    except OSError as e:
        raise CheckpointError(f"Error writing checkpoint {path}: {e}") from e


def read_checkpoint(path: Path) -> Tuple[Dict[str, np.ndarray], Dict[str, Any]]:
    """Read a container written by :func:`write_checkpoint`.

    Returns:
        The tensors by name (float64) and the metadata

    Raises:
        CheckpointError: If the file is missing, truncated or not a checkpoint
    """
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise CheckpointError(f"Error reading checkpoint {path}: {e}") from e
    if raw[: len(MAGIC)] != MAGIC:
        raise CheckpointError(f"{path} is not a checkpoint (bad magic)")

    start = len(MAGIC) + 8
    if len(raw) < start:
        raise CheckpointError(f"{path} is truncated")
    (header_len,) = struct.unpack("<Q", raw[len(MAGIC) : start])
    try:
        header = json.loads(raw[start : start + header_len].decode("utf-8"))
        jsonschema.validate(header, HEADER_SCHEMA)
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CheckpointError(f"{path} has a corrupt header: {e}") from e
    except jsonschema.ValidationError as e:
        raise CheckpointError(f"{path} has an unsupported header: {e.message}") from e

    body = raw[start + header_len :]
    tensors: Dict[str, np.ndarray] = {}
    for entry in header["tensors"]:
        end = entry["offset"] + entry["nbytes"]
        if end > len(body):
            raise CheckpointError(f"{path} is truncated in tensor {entry['name']!r}")
        flat = np.frombuffer(body[entry["offset"] : end], dtype=_DTYPE)
        try:
            tensors[entry["name"]] = flat.reshape(entry["shape"]).astype(np.float64)
        except ValueError as e:
            raise CheckpointError(f"{path}: tensor {entry['name']!r}: {e}") from e
    return tensors, header["metadata"]
