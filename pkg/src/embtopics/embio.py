"""emb-v1 interchange format for precomputed sentence embeddings.

Layout: one UTF-8 JSON header line
    {"format":"emb-v1","count":N,"dim":D,"dtype":"f32le","model":"<name>"}
terminated by a single LF, then N*D little-endian IEEE-754 binary32 values
in row-major order. Row i corresponds to line i of the corpus TSV; the
corpus file is the id authority.

Loading is strict: any header/payload inconsistency or non-finite value is
a hard error, never a silent reinterpretation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DataError

FORMAT_NAME = "emb-v1"
DTYPE_NAME = "f32le"
_MAX_HEADER_BYTES = 1 << 16


class EmbIOError(DataError):
    pass


@dataclass
class EmbeddingMatrix:
    """Dense n x d float32 matrix, row i aligned with corpus example i."""

    data: np.ndarray
    model_name: str = ""

    def __post_init__(self):
        self.data = np.ascontiguousarray(self.data, dtype=np.float32)
        if self.data.ndim != 2:
            raise EmbIOError(f"embedding matrix must be 2-D, got ndim={self.data.ndim}")

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]


def _header_bytes(count: int, dim: int, model: str) -> bytes:
    header = {"format": FORMAT_NAME, "count": count, "dim": dim,
              "dtype": DTYPE_NAME, "model": model}
    return json.dumps(header, separators=(",", ":"), ensure_ascii=False).encode("utf-8") + b"\n"


def save_embeddings(matrix: EmbeddingMatrix, path) -> None:
    n, d = matrix.data.shape
    if n < 1 or d < 1:
        raise EmbIOError(f"refusing to save empty matrix (n={n}, d={d})")
    if not np.isfinite(matrix.data).all():
        raise EmbIOError("matrix contains non-finite values")
    payload = matrix.data.astype("<f4", copy=False)
    try:
        with open(path, "wb") as fh:
            fh.write(_header_bytes(n, d, matrix.model_name))
            fh.write(payload.tobytes(order="C"))
    except OSError as exc:
        raise EmbIOError(f"cannot write embeddings to {path}: {exc}") from exc


def write_embeddings_stream(path, count: int, dim: int, model: str, blocks) -> None:
    """Write emb-v1 from an iterable of row blocks without densifying all rows.

    Each block is a 2-D array with dim columns; blocks must sum to exactly
    `count` rows.
    """
    if count < 1 or dim < 1:
        raise EmbIOError(f"refusing to write empty matrix (n={count}, d={dim})")
    written = 0
    try:
        with open(path, "wb") as fh:
            fh.write(_header_bytes(count, dim, model))
            for block in blocks:
                block = np.ascontiguousarray(block, dtype="<f4")
                if block.ndim != 2 or block.shape[1] != dim:
                    raise EmbIOError(f"block shape {block.shape} does not match dim={dim}")
                if not np.isfinite(block).all():
                    bad = int(np.argmin(np.isfinite(block).ravel()))
                    raise EmbIOError(f"non-finite value at row {written + bad // dim}, col {bad % dim}")
                fh.write(block.tobytes(order="C"))
                written += block.shape[0]
    except OSError as exc:
        raise EmbIOError(f"cannot write embeddings to {path}: {exc}") from exc
    if written != count:
        raise EmbIOError(f"wrote {written} rows but header declares count={count}")


def _parse_header(line: bytes, path) -> tuple[int, int, str]:
    if not line.endswith(b"\n"):
        raise EmbIOError(f"{path}: missing header line terminator")
    try:
        header = json.loads(line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise EmbIOError(f"{path}: header is not valid JSON: {exc}") from exc
    if not isinstance(header, dict):
        raise EmbIOError(f"{path}: header must be a JSON object")
    for key in ("format", "count", "dim", "dtype"):
        if key not in header:
            raise EmbIOError(f"{path}: header missing field {key!r}")
    if header["format"] != FORMAT_NAME:
        raise EmbIOError(f"{path}: unknown format {header['format']!r}, expected {FORMAT_NAME!r}")
    if header["dtype"] != DTYPE_NAME:
        raise EmbIOError(f"{path}: unsupported dtype {header['dtype']!r}, expected {DTYPE_NAME!r}")
    count, dim = header["count"], header["dim"]
    if not isinstance(count, int) or isinstance(count, bool) or count < 1:
        raise EmbIOError(f"{path}: count must be a positive integer, got {count!r}")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise EmbIOError(f"{path}: dim must be a positive integer, got {dim!r}")
    model = header.get("model", "")
    if not isinstance(model, str):
        raise EmbIOError(f"{path}: model must be a string")
    return count, dim, model


def load_embeddings(path, expected_n: int | None = None) -> EmbeddingMatrix:
    try:
        with open(path, "rb") as fh:
            line = fh.readline(_MAX_HEADER_BYTES)
            if len(line) >= _MAX_HEADER_BYTES and not line.endswith(b"\n"):
                raise EmbIOError(f"{path}: header line exceeds {_MAX_HEADER_BYTES} bytes")
            count, dim, model = _parse_header(line, path)
            payload = fh.read()
    except OSError as exc:
        raise EmbIOError(f"cannot read embeddings from {path}: {exc}") from exc

    expected_bytes = count * dim * 4
    if len(payload) != expected_bytes:
        raise EmbIOError(
            f"{path}: payload length mismatch: header declares {count}x{dim} "
            f"({expected_bytes} bytes), found {len(payload)} bytes"
        )
    values = np.frombuffer(payload, dtype="<f4").reshape(count, dim)
    finite = np.isfinite(values)
    if not finite.all():
        flat = int(np.argmin(finite.ravel()))
        raise EmbIOError(f"{path}: non-finite value at row {flat // dim}, col {flat % dim}")
    if expected_n is not None and count != expected_n:
        raise EmbIOError(
            f"{path}: corpus alignment mismatch: file has {count} rows, corpus has {expected_n}"
        )
    return EmbeddingMatrix(data=values.copy(), model_name=model)
