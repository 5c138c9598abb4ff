"""Label-smoothed cross-entropy.

The smoothing mass is spread uniformly over the whole vocabulary except the
pad symbol:

    L = (1 - eps) * NLL(gold) + eps * mean_{i != pad} (-log p_i)

averaged over non-pad target positions.
"""

from __future__ import annotations

import torch
import torch.nn.functional as F


def label_smoothed_loss(
    logits: torch.Tensor,
    targets: torch.Tensor,
    eps: float,
    pad_id: int,
    mask: torch.Tensor | None = None,
) -> torch.Tensor:
    """Mean label-smoothed loss over unmasked positions.

    `mask` marks real (non-pad) positions; when omitted it is derived from
    the pad id. Passing the batch's own mask keeps the loss invariant to
    whatever ids sit in padded slots.
    """
    if not 0 <= eps < 1:
        raise ValueError("eps must be in [0, 1)")
    if logits.shape[:-1] != targets.shape:
        raise ValueError(
            f"logits {tuple(logits.shape)} do not align with targets {tuple(targets.shape)}"
        )
    if mask is None:
        mask = targets.ne(pad_id)
    vocab = logits.size(-1)
    logp = F.log_softmax(logits, dim=-1)
    gather_idx = targets.masked_fill(~mask, 0).unsqueeze(-1)
    nll = -logp.gather(-1, gather_idx).squeeze(-1)
    smooth = (-logp.sum(dim=-1) + logp[..., pad_id]) / (vocab - 1)
    per_token = (1.0 - eps) * nll + eps * smooth
    denom = mask.sum()
    if denom.item() == 0:
        raise ValueError("no non-pad target positions to average over")
    return (per_token * mask).sum() / denom
