"""Dataset I/O: +-1 CSV matrices and IDX-format image ingestion."""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .model import Dataset

__all__ = ["save_dataset_csv", "load_dataset_csv", "import_mnist_idx"]

_IDX_IMAGES_MAGIC = 0x00000803
_IDX_LABELS_MAGIC = 0x00000801


def save_dataset_csv(dataset: Dataset, path) -> None:
    samples = dataset.samples
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in samples:
            fh.write(",".join(str(int(v)) for v in row))
            fh.write("\n")


def load_dataset_csv(path) -> Dataset:
    """Parse an M x N CSV of +-1 entries; errors carry row/column (1-based)."""
    rows: list[list[int]] = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise ValueError(
                    f"{path}: row {lineno} has {len(fields)} entries, expected {width}"
                )
            row = []
            for col, tok in enumerate(fields, start=1):
                tok = tok.strip()
                try:
                    v = int(tok)
                except ValueError:
                    raise ValueError(
                        f"{path}: row {lineno}, column {col}: not an integer: {tok!r}"
                    ) from None
                if v not in (1, -1):
                    raise ValueError(
                        f"{path}: row {lineno}, column {col}: entry {v} outside {{+1,-1}}"
                    )
                row.append(v)
            rows.append(row)
    if not rows:
        raise ValueError(f"{path}: empty dataset file")
    return Dataset(np.array(rows, dtype=np.int8))


def _read_idx_header(fh, path, expected_magic: int, n_dims: int) -> tuple[int, ...]:
    head = fh.read(4 * (1 + n_dims))
    if len(head) < 4 * (1 + n_dims):
        raise ValueError(f"{path}: truncated IDX header")
    magic = struct.unpack(">i", head[:4])[0]
    if magic != expected_magic:
        raise ValueError(
            f"{path}: bad IDX magic 0x{magic:08x}, expected 0x{expected_magic:08x}"
        )
    return struct.unpack(f">{n_dims}i", head[4:])


def import_mnist_idx(
    images_path,
    labels_path,
    digits=(0, 1),
    limit: int | None = None,
    threshold: int = 127,
) -> Dataset:
    """Load IDX image/label files, keep the requested digits, binarize.

    Pixels > threshold map to +1, the rest to -1 (threshold 127 = midpoint
    of the byte range). Rows are flattened 28x28 images, N = 784.
    """
    images_path, labels_path = Path(images_path), Path(labels_path)
    digits = {int(d) for d in digits}
    with open(labels_path, "rb") as fh:
        (n_labels,) = _read_idx_header(fh, labels_path, _IDX_LABELS_MAGIC, 1)
        labels = np.frombuffer(fh.read(n_labels), dtype=np.uint8)
        if labels.size != n_labels:
            raise ValueError(f"{labels_path}: truncated label payload")
    with open(images_path, "rb") as fh:
        n_images, n_rows, n_cols = _read_idx_header(
            fh, images_path, _IDX_IMAGES_MAGIC, 3
        )
        if n_images != n_labels:
            raise ValueError(
                f"label/image count mismatch: {n_images} images, {n_labels} labels"
            )
        n_pix = n_rows * n_cols
        raw = np.frombuffer(fh.read(n_images * n_pix), dtype=np.uint8)
        if raw.size != n_images * n_pix:
            raise ValueError(f"{images_path}: truncated image payload")
    images = raw.reshape(n_images, n_pix)
    keep = np.isin(labels, sorted(digits))
    images = images[keep]
    if limit is not None:
        images = images[: int(limit)]
    if images.shape[0] == 0:
        raise ValueError(f"no images with labels in {sorted(digits)}")
    return Dataset(np.where(images > threshold, 1, -1).astype(np.int8))
