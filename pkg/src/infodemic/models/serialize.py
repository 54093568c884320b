"""Versioned binary model container.

Layout: 5-byte magic, 8-byte little-endian header length, JSON header,
then raw little-endian C-order array bytes in header-declared order.
The header carries everything a reader needs without touching the
payload (kind, hyperparameters, seed, vectorizer fingerprint, creation
time, array manifest), plus the fitted vectorizer and thresholds so a
saved model can score bare text on its own.

Creation time follows the reproducible-build convention: an explicit
argument wins, else SOURCE_DATE_EPOCH, else wall clock.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from ..errors import DataError
from ..preprocess import Thresholds
from ..vectorize import Vectorizer, vectorizer_from_json, vectorizer_to_json
from .common import ModelSpec, TrainedModel

MAGIC = b"IFDM\x01"
SCHEMA = "infodemic.model/1"


@dataclass(slots=True)
class LoadedModel:
    model: TrainedModel
    vectorizer: Vectorizer | None
    thresholds: Thresholds | None
    created_at: str


def resolve_created_at(created_at: str | None = None) -> str:
    if created_at is not None:
        return created_at
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        moment = datetime.fromtimestamp(int(epoch), tz=timezone.utc)
    else:
        moment = datetime.now(timezone.utc)
    return moment.replace(microsecond=0).isoformat()


def _collect_arrays(model: TrainedModel) -> dict[str, np.ndarray]:
    arrays: dict[str, np.ndarray] = {}
    for name, value in model.params.items():
        if name == "trees":
            for i, tree in enumerate(value):
                for part, arr in tree.items():
                    arrays[f"tree{i}/{part}"] = arr
        elif isinstance(value, np.ndarray):
            arrays[name] = value
    return arrays


def save_model(
    model: TrainedModel,
    path: str | Path,
    vectorizer: Vectorizer | None = None,
    thresholds: Thresholds | None = None,
    created_at: str | None = None,
) -> None:
    arrays = _collect_arrays(model)
    manifest = []
    offset = 0
    payload = []
    for name in arrays:
        arr = np.ascontiguousarray(arrays[name])
        data = arr.astype(arr.dtype.newbyteorder("<")).tobytes()
        manifest.append(
            {"name": name, "dtype": str(arr.dtype), "shape": list(arr.shape), "offset": offset}
        )
        payload.append(data)
        offset += len(data)

    scalars = {
        name: float(value)
        for name, value in model.params.items()
        if isinstance(value, (int, float)) and not isinstance(value, bool)
    }
    header = {
        "schema": SCHEMA,
        "kind": model.spec.kind,
        "hyperparameters": model.spec.hyperparameters,
        "seed": model.spec.seed,
        "vectorizer_fingerprint": model.vectorizer_fingerprint,
        "created_at": resolve_created_at(created_at),
        "n_sparse": model.n_sparse,
        "n_dense": model.n_dense,
        "n_trees": len(model.params["trees"]) if "trees" in model.params else None,
        "scalars": scalars,
        "arrays": manifest,
        "vectorizer": vectorizer_to_json(vectorizer) if vectorizer is not None else None,
        "thresholds": dataclasses.asdict(thresholds) if thresholds is not None else None,
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    with Path(path).open("wb") as fh:
        fh.write(MAGIC)
        fh.write(len(header_bytes).to_bytes(8, "little"))
        fh.write(header_bytes)
        for data in payload:
            fh.write(data)


def read_header(path: str | Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"model file not found: {path}")
    with path.open("rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise DataError(f"not a model container: {path}")
        length = int.from_bytes(fh.read(8), "little")
        header = json.loads(fh.read(length).decode("utf-8"))
    if header.get("schema") != SCHEMA:
        raise DataError(f"unsupported model schema: {header.get('schema')!r}")
    return header


def load_model(path: str | Path) -> LoadedModel:
    path = Path(path)
    header = read_header(path)
    base = len(MAGIC) + 8 + len(json.dumps(header, sort_keys=True).encode("utf-8"))
    raw = path.read_bytes()

    arrays: dict[str, np.ndarray] = {}
    for entry in header["arrays"]:
        dtype = np.dtype(entry["dtype"]).newbyteorder("<")
        shape = tuple(entry["shape"])
        start = base + entry["offset"]
        count = int(np.prod(shape)) if shape else 1
        arr = np.frombuffer(raw, dtype=dtype, count=count, offset=start)
        arrays[entry["name"]] = arr.reshape(shape).astype(np.dtype(entry["dtype"]))

    params: dict = dict(header.get("scalars", {}))
    if header.get("n_trees") is not None:
        trees = []
        for i in range(header["n_trees"]):
            trees.append(
                {part: arrays[f"tree{i}/{part}"] for part in ("feature", "threshold", "left", "right", "counts")}
            )
        params["trees"] = trees
    else:
        params.update({k: v for k, v in arrays.items()})

    model = TrainedModel(
        spec=ModelSpec(
            kind=header["kind"],
            hyperparameters=header["hyperparameters"],
            seed=header["seed"],
        ),
        n_sparse=header["n_sparse"],
        n_dense=header["n_dense"],
        params=params,
        vectorizer_fingerprint=header["vectorizer_fingerprint"],
    )
    vectorizer = (
        vectorizer_from_json(header["vectorizer"]) if header.get("vectorizer") else None
    )
    thresholds = (
        Thresholds(**header["thresholds"]) if header.get("thresholds") else None
    )
    return LoadedModel(
        model=model,
        vectorizer=vectorizer,
        thresholds=thresholds,
        created_at=header["created_at"],
    )
