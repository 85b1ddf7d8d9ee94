"""
Weight files: numpy .npz archives holding a format version, the weight kind, the
initialization seed and one named array per parameter ("gru.w", "head.b", ...).
"""
import dataclasses
import logging
from pathlib import Path

import numpy as np

from deskvln.errors import SchemaMismatch

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
_RESERVED = ("format_version", "kind", "seed")


def weight_kinds() -> dict[str, type]:
    """Weight classes by kind name."""
    from deskvln.policy.cma import CmaWeights
    from deskvln.policy.seq2seq import Seq2SeqWeights
    from deskvln.rdp.model import RdpWeights

    return {cls.KIND: cls for cls in (Seq2SeqWeights, CmaWeights, RdpWeights)}


def weights_to_arrays(weights, prefix: str = "") -> dict[str, np.ndarray]:
    """Flatten nested weight dataclasses into {dotted.name: array}."""
    arrays = {}
    for f in dataclasses.fields(weights):
        value = getattr(weights, f.name)
        if dataclasses.is_dataclass(value):
            arrays.update(weights_to_arrays(value, f"{prefix}{f.name}."))
        elif isinstance(value, np.ndarray):
            arrays[f"{prefix}{f.name}"] = value
    return arrays


def weights_from_arrays(cls: type, arrays: dict[str, np.ndarray], prefix: str = ""):
    """Inverse of weights_to_arrays for the weight class cls."""
    kwargs = {}
    for f in dataclasses.fields(cls):
        name = f"{prefix}{f.name}"
        if dataclasses.is_dataclass(f.type):
            kwargs[f.name] = weights_from_arrays(f.type, arrays, f"{name}.")
        elif f.type is np.ndarray:
            if name not in arrays:
                raise SchemaMismatch(f"weight file is missing {name!r}")
            kwargs[f.name] = np.array(arrays[name], dtype=float)
    return cls(**kwargs)


def save_weights(path: str | Path, weights) -> Path:
    """Write weights to path (an .npz archive) and return the path."""
    path = Path(path)
    seed = -1 if weights.seed is None else int(weights.seed)
    with open(path, "wb") as f:
        np.savez(
            f,
            format_version=np.array(FORMAT_VERSION),
            kind=np.array(weights.KIND),
            seed=np.array(seed),
            **weights_to_arrays(weights),
        )
    logger.debug("saved %s weights to %s", weights.KIND, path)
    return path


def load_weights(path: str | Path, kind: str | None = None):
    """
    Args:
        path: Weight file
        kind: Expected kind; any registered kind when None

    Raises:
        SchemaMismatch: unknown format version or kind, missing arrays
        DimensionMismatch: arrays of inconsistent shapes
    """
    with np.load(Path(path), allow_pickle=False) as data:
        arrays = {name: data[name] for name in data.files}
    for name in _RESERVED:
        if name not in arrays:
            raise SchemaMismatch(f"weight file has no {name!r} entry")
    version = int(arrays["format_version"])
    if version != FORMAT_VERSION:
        raise SchemaMismatch(f"weight format {version} is not supported, expected {FORMAT_VERSION}")
    found = str(arrays["kind"])
    if kind is not None and found != kind:
        raise SchemaMismatch(f"expected {kind} weights, found {found}")
    kinds = weight_kinds()
    if found not in kinds:
        raise SchemaMismatch(f"unknown weight kind {found!r}")
    seed = int(arrays["seed"])
    weights = weights_from_arrays(kinds[found], arrays)
    return dataclasses.replace(weights, seed=None if seed < 0 else seed)
