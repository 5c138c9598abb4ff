"""Checkpoint container and on-disk format.

Layout: an 8-byte magic, a little-endian uint64 header length, a JSON header
(config echo, shape, full vocabulary, fingerprint, step, metadata, tensor
directory with name/shape/dtype/offset), then the raw tensor payloads,
little-endian, in directory order. Save -> load is bit-identical, including
optimizer moments and the step counter.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

from ..codec import Vocabulary
from ..errors import IncompatibleVocab
from .config import TrainConfig, TransformerShape
from .transformer import TransformerModel, init_parameters

_MAGIC = b"CHMT0001"

_DTYPES = {
    "float32": "<f4",
    "float64": "<f8",
    "int64": "<i8",
    "uint8": "|u1",
}


@dataclass
class Checkpoint:
    """Model parameters plus optimizer moments, step counter, and vocabulary.

    `extras` holds auxiliary tensors (e.g. generator states for exact
    training resumption); `meta` holds small JSON-safe metadata.
    """

    params: dict[str, torch.Tensor]
    optim: dict[str, torch.Tensor]
    step: int
    vocab: Vocabulary
    shape: TransformerShape
    config: TrainConfig | None = None
    meta: dict = field(default_factory=dict)
    extras: dict[str, torch.Tensor] = field(default_factory=dict)

    def fingerprint(self) -> str:
        return self.vocab.fingerprint()


def _tensor_bytes(t: torch.Tensor) -> tuple[str, bytes]:
    arr = t.detach().cpu().contiguous().numpy()
    dtype = str(arr.dtype)
    if dtype not in _DTYPES:
        raise ValueError(f"unsupported tensor dtype {dtype}")
    return dtype, arr.astype(_DTYPES[dtype], copy=False).tobytes()


def save_checkpoint(ckpt: Checkpoint, path: str | Path) -> None:
    directory = []
    payloads = []
    offset = 0
    entries = [(f"model.{k}", v) for k, v in sorted(ckpt.params.items())]
    entries += [(f"optim.{k}", v) for k, v in sorted(ckpt.optim.items())]
    entries += [(f"extras.{k}", v) for k, v in sorted(ckpt.extras.items())]
    for name, tensor in entries:
        dtype, raw = _tensor_bytes(tensor)
        directory.append(
            {
                "name": name,
                "shape": list(tensor.shape),
                "dtype": dtype,
                "offset": offset,
                "nbytes": len(raw),
            }
        )
        payloads.append(raw)
        offset += len(raw)
    header = {
        "format": 1,
        "step": ckpt.step,
        "config": ckpt.config.to_json_obj() if ckpt.config else None,
        "shape": ckpt.shape.to_json_obj(),
        "vocab": ckpt.vocab.to_json_obj(),
        "vocab_fingerprint": ckpt.vocab.fingerprint(),
        "meta": ckpt.meta,
        "tensors": directory,
    }
    header_bytes = json.dumps(header, ensure_ascii=False, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<Q", len(header_bytes)))
        fh.write(header_bytes)
        for raw in payloads:
            fh.write(raw)


def load_checkpoint(
    path: str | Path, expect_vocab: Vocabulary | None = None
) -> Checkpoint:
    data = Path(path).read_bytes()
    if data[:8] != _MAGIC:
        raise ValueError(f"{path} is not a checkpoint file")
    (header_len,) = struct.unpack("<Q", data[8:16])
    header = json.loads(data[16 : 16 + header_len].decode("utf-8"))
    body = data[16 + header_len :]
    vocab = Vocabulary.from_json_obj(header["vocab"])
    if vocab.fingerprint() != header["vocab_fingerprint"]:
        raise IncompatibleVocab(f"{path}: stored vocabulary does not match its fingerprint")
    if expect_vocab is not None and expect_vocab.fingerprint() != vocab.fingerprint():
        raise IncompatibleVocab(f"{path}: checkpoint vocabulary differs from the expected one")
    params: dict[str, torch.Tensor] = {}
    optim: dict[str, torch.Tensor] = {}
    extras: dict[str, torch.Tensor] = {}
    for entry in header["tensors"]:
        raw = body[entry["offset"] : entry["offset"] + entry["nbytes"]]
        arr = np.frombuffer(raw, dtype=_DTYPES[entry["dtype"]]).reshape(entry["shape"])
        tensor = torch.from_numpy(arr.astype(entry["dtype"], copy=True))
        name = entry["name"]
        if name.startswith("model."):
            params[name[len("model.") :]] = tensor
        elif name.startswith("optim."):
            optim[name[len("optim.") :]] = tensor
        elif name.startswith("extras."):
            extras[name[len("extras.") :]] = tensor
        else:
            raise ValueError(f"unknown tensor section in {name!r}")
    config = TrainConfig.from_json_obj(header["config"]) if header["config"] else None
    return Checkpoint(
        params=params,
        optim=optim,
        step=header["step"],
        vocab=vocab,
        shape=TransformerShape.from_json_obj(header["shape"]),
        config=config,
        meta=header.get("meta", {}),
        extras=extras,
    )


def init_random(
    shape: TransformerShape,
    vocab: Vocabulary,
    seed: int,
    config: TrainConfig | None = None,
) -> Checkpoint:
    """A fresh, seeded, reproducible checkpoint (the random-init baseline)."""
    model = TransformerModel(shape, len(vocab), vocab.pad_id)
    init_parameters(model, seed)
    params = {k: v.detach().clone() for k, v in model.named_parameters()}
    return Checkpoint(
        params=params, optim={}, step=0, vocab=vocab, shape=shape, config=config,
        meta={"init_seed": seed},
    )


def model_from_checkpoint(ckpt: Checkpoint, dropout: float = 0.0) -> TransformerModel:
    model = TransformerModel(ckpt.shape, len(ckpt.vocab), ckpt.vocab.pad_id, dropout)
    model.load_state_dict(ckpt.params, strict=True)
    return model


def extend_embeddings(
    ckpt: Checkpoint,
    new_vocab: Vocabulary,
    noise_std: float = 0.01,
    seed: int = 0,
) -> Checkpoint:
    """Grow the shared embedding matrix to a vocabulary that extends the old one.

    Existing rows (and their optimizer moments) are copied bit-exact; new rows
    are the mean of the existing rows plus seeded Gaussian noise of scale
    noise_std (zero gives exactly the mean row). New moment rows start at zero.
    """
    old_vocab = ckpt.vocab
    if len(new_vocab) < len(old_vocab) or new_vocab.symbols[: len(old_vocab)] != old_vocab.symbols:
        raise IncompatibleVocab("new vocabulary must extend the checkpoint's (old ids stable)")
    n_new = len(new_vocab) - len(old_vocab)
    if n_new == 0:
        return ckpt
    params = dict(ckpt.params)
    optim = dict(ckpt.optim)
    old_embed = params["embed.weight"]
    mean_row = old_embed.mean(dim=0, keepdim=True)
    gen = torch.Generator().manual_seed(seed)
    noise = noise_std * torch.randn(
        n_new, old_embed.size(1), generator=gen, dtype=old_embed.dtype
    )
    params["embed.weight"] = torch.cat([old_embed, mean_row.expand(n_new, -1) + noise])
    for key, tensor in list(optim.items()):
        if key.startswith("embed.weight.") and tensor.dim() == 2:
            zeros = torch.zeros(n_new, tensor.size(1), dtype=tensor.dtype)
            optim[key] = torch.cat([tensor, zeros])
    return Checkpoint(
        params=params,
        optim=optim,
        step=ckpt.step,
        vocab=new_vocab,
        shape=ckpt.shape,
        config=ckpt.config,
        meta=dict(ckpt.meta),
    )
