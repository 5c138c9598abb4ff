"""Small transformer encoder-decoder over a character vocabulary.

Pre-norm layers, sinusoidal positions, and a single embedding table shared
between encoder input, decoder input, and the output projection (tied), so
vocabulary extension touches exactly one matrix.
"""

from __future__ import annotations

import math

import torch
from torch import nn

from ..errors import ShapeMismatch
from .config import TransformerShape


def sinusoidal_positions(max_positions: int, dim: int) -> torch.Tensor:
    pos = torch.arange(max_positions, dtype=torch.float32).unsqueeze(1)
    inv = torch.exp(
        torch.arange(0, dim, 2, dtype=torch.float32) * (-math.log(10000.0) / dim)
    )
    table = torch.zeros(max_positions, dim)
    table[:, 0::2] = torch.sin(pos * inv)
    table[:, 1::2] = torch.cos(pos * inv)
    return table


def causal_mask(size: int, device=None) -> torch.Tensor:
    return torch.triu(torch.ones(size, size, dtype=torch.bool, device=device), 1)


class TransformerModel(nn.Module):
    def __init__(
        self,
        shape: TransformerShape,
        vocab_size: int,
        pad_id: int,
        dropout: float = 0.0,
    ):
        super().__init__()
        self.shape = shape
        self.vocab_size = vocab_size
        self.pad_id = pad_id
        d = shape.model_dim
        self.embed = nn.Embedding(vocab_size, d, padding_idx=pad_id)
        self.embed_scale = math.sqrt(d)
        self.register_buffer(
            "positions", sinusoidal_positions(shape.max_positions, d), persistent=False
        )
        self.dropout = nn.Dropout(dropout)
        enc_layer = nn.TransformerEncoderLayer(
            d, shape.heads, shape.ff_dim, dropout,
            activation="relu", batch_first=True, norm_first=True,
        )
        self.encoder = nn.TransformerEncoder(
            enc_layer, shape.encoder_layers, norm=nn.LayerNorm(d),
            enable_nested_tensor=False,
        )
        dec_layer = nn.TransformerDecoderLayer(
            d, shape.heads, shape.ff_dim, dropout,
            activation="relu", batch_first=True, norm_first=True,
        )
        self.decoder = nn.TransformerDecoder(
            dec_layer, shape.decoder_layers, norm=nn.LayerNorm(d)
        )

    def _embed(self, ids: torch.Tensor) -> torch.Tensor:
        if ids.size(1) > self.shape.max_positions:
            raise ShapeMismatch(
                f"sequence length {ids.size(1)} exceeds max_positions "
                f"{self.shape.max_positions}"
            )
        x = self.embed(ids) * self.embed_scale
        x = x + self.positions[: ids.size(1)].to(x.dtype)
        return self.dropout(x)

    def encode(
        self, src: torch.Tensor, src_pad_mask: torch.Tensor | None = None
    ) -> tuple[torch.Tensor, torch.Tensor]:
        """Returns (memory, memory key padding mask).

        Padding marks may be passed explicitly (the batch is authoritative);
        by default they are derived from the pad id.
        """
        self._check_ids(src)
        if src_pad_mask is None:
            src_pad_mask = src.eq(self.pad_id)
        elif src_pad_mask.shape != src.shape:
            raise ShapeMismatch("source padding mask does not match source ids")
        memory = self.encoder(self._embed(src), src_key_padding_mask=src_pad_mask)
        return memory, src_pad_mask

    def decode(
        self,
        memory: torch.Tensor,
        memory_pad_mask: torch.Tensor,
        tgt_in: torch.Tensor,
        tgt_pad_mask: torch.Tensor | None = None,
    ) -> torch.Tensor:
        """Hidden states over the target prefix (causally masked)."""
        self._check_ids(tgt_in)
        if tgt_pad_mask is None:
            tgt_pad_mask = tgt_in.eq(self.pad_id)
        elif tgt_pad_mask.shape != tgt_in.shape:
            raise ShapeMismatch("target padding mask does not match target ids")
        hidden = self.decoder(
            self._embed(tgt_in),
            memory,
            tgt_mask=causal_mask(tgt_in.size(1), device=tgt_in.device),
            tgt_key_padding_mask=tgt_pad_mask,
            memory_key_padding_mask=memory_pad_mask,
        )
        return hidden

    def output_logits(self, hidden: torch.Tensor) -> torch.Tensor:
        return hidden @ self.embed.weight.t()

    def forward(
        self,
        src: torch.Tensor,
        tgt_in: torch.Tensor,
        src_pad_mask: torch.Tensor | None = None,
        tgt_pad_mask: torch.Tensor | None = None,
    ) -> torch.Tensor:
        """Logits over the vocabulary per target position: (B, T, V)."""
        if src.size(0) != tgt_in.size(0):
            raise ShapeMismatch(
                f"source batch {src.size(0)} != target batch {tgt_in.size(0)}"
            )
        memory, memory_pad_mask = self.encode(src, src_pad_mask)
        return self.output_logits(
            self.decode(memory, memory_pad_mask, tgt_in, tgt_pad_mask)
        )

    def _check_ids(self, ids: torch.Tensor) -> None:
        if ids.dim() != 2:
            raise ShapeMismatch(f"expected (batch, length) ids, got {tuple(ids.shape)}")
        if ids.numel() and (ids.min() < 0 or ids.max() >= self.vocab_size):
            raise ShapeMismatch("token ids outside the vocabulary")


def init_parameters(model: TransformerModel, seed: int) -> None:
    """Seeded, reproducible initialization with documented scale bounds.

    Embedding rows ~ U(-sqrt(3/d), sqrt(3/d)); other matrices Xavier-uniform;
    LayerNorm weights 1; all biases 0.
    """
    gen = torch.Generator().manual_seed(seed)
    bound = math.sqrt(3.0 / model.shape.model_dim)
    for name, param in model.named_parameters():
        with torch.no_grad():
            if name == "embed.weight":
                param.uniform_(-bound, bound, generator=gen)
            elif param.dim() >= 2:
                nn.init.xavier_uniform_(param, generator=gen)
            elif name.endswith("weight"):
                param.fill_(1.0)
            else:
                param.zero_()


def init_bound(model: TransformerModel, name: str, param: torch.Tensor) -> float:
    """The documented |value| bound for a freshly initialized parameter."""
    if name == "embed.weight":
        return math.sqrt(3.0 / model.shape.model_dim)
    if param.dim() >= 2:
        fan_in, fan_out = nn.init._calculate_fan_in_and_fan_out(param)
        return math.sqrt(6.0 / (fan_in + fan_out))
    return 1.0
