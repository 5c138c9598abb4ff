"""Beam-search generation with multi-model ensembling.

Ensembling averages per-token log-probabilities across members (geometric
mean of probabilities) and renormalizes; averaging probabilities instead is
available as the 'mean_prob' combination. Hypothesis scores are pure
cumulative log-probability, no length normalization. A hypothesis ends at
eos (scored, eos allowed once at least min_len tokens were emitted and only
while it ranks within the beam) or unterminated at max_len. Ties between
equal-scoring hypotheses go to the lowest token-id sequence.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np
import torch

from .codec import Vocabulary, decode_ids, encode_source
from .corpus.normalize import czn_restore
from .errors import IncompatibleMembers
from .model.checkpoint import Checkpoint, load_checkpoint, model_from_checkpoint
from .model.transformer import TransformerModel

_COMBINATIONS = ("mean_logprob", "mean_prob")


class Scorer(Protocol):
    """Anything that can score next tokens for a source sequence."""

    vocab: Vocabulary

    def start(self, src_ids: Sequence[int]) -> object: ...

    def step_logprobs_batch(self, ctx: object, prefixes: np.ndarray) -> np.ndarray: ...


class ModelScorer:
    """Stepwise decoding interface over a transformer checkpoint."""

    def __init__(self, model: TransformerModel, vocab: Vocabulary):
        self.model = model.eval()
        self.vocab = vocab

    @classmethod
    def from_checkpoint(cls, ckpt: Checkpoint) -> "ModelScorer":
        return cls(model_from_checkpoint(ckpt, dropout=0.0), ckpt.vocab)

    @classmethod
    def from_path(cls, path: str | Path) -> "ModelScorer":
        return cls.from_checkpoint(load_checkpoint(path))

    def start(self, src_ids: Sequence[int]):
        src = torch.tensor([list(src_ids)], dtype=torch.long)
        with torch.no_grad():
            memory, pad_mask = self.model.encode(src)
        return memory, pad_mask

    def step_logprobs_batch(self, ctx, prefixes: np.ndarray) -> np.ndarray:
        memory, pad_mask = ctx
        n = len(prefixes)
        tgt_in = torch.as_tensor(np.asarray(prefixes), dtype=torch.long)
        with torch.no_grad():
            hidden = self.model.decode(
                memory.expand(n, -1, -1), pad_mask.expand(n, -1), tgt_in
            )
            logits = self.model.output_logits(hidden[:, -1])
            logp = torch.log_softmax(logits.double(), dim=-1)
        return logp.numpy()


def _logsumexp(x: np.ndarray) -> np.ndarray:
    m = np.max(x, axis=-1, keepdims=True)
    return m + np.log(np.exp(x - m).sum(axis=-1, keepdims=True))


def ensemble_step_logprobs(
    step_logprobs: Sequence[np.ndarray], combination: str = "mean_logprob"
) -> np.ndarray:
    """Combine per-member log-probability vectors for one decoding step.

    A single member passes through untouched; otherwise the combination is
    renormalized to sum to one in probability space. Works on (V,) vectors
    or (beams, V) matrices.
    """
    if combination not in _COMBINATIONS:
        raise ValueError(f"unknown combination rule {combination!r}")
    if not step_logprobs:
        raise IncompatibleMembers("ensemble needs at least one member")
    vecs = [np.asarray(v, dtype=np.float64) for v in step_logprobs]
    if any(v.shape != vecs[0].shape for v in vecs):
        raise IncompatibleMembers("members disagree on vocabulary size")
    if len(vecs) == 1:
        return vecs[0]
    stacked = np.stack(vecs)
    if combination == "mean_logprob":
        combined = stacked.mean(axis=0)
    else:
        combined = _logsumexp(np.moveaxis(stacked, 0, -1)).squeeze(-1) - np.log(len(vecs))
    return combined - _logsumexp(combined)


def _check_members(scorers: Sequence[Scorer]) -> Vocabulary:
    if not scorers:
        raise IncompatibleMembers("ensemble needs at least one member")
    fp = scorers[0].vocab.fingerprint()
    for s in scorers[1:]:
        if s.vocab.fingerprint() != fp:
            raise IncompatibleMembers("ensemble members use different vocabularies")
    return scorers[0].vocab


def _suppressed_ids(vocab: Vocabulary) -> list[int]:
    # pad/bos/unk and language tags are never generated; eos is handled by min_len.
    return sorted({vocab.pad_id, vocab.bos_id, vocab.unk_id} | set(vocab.tag_ids()))


def _effective_max_len(scorers: Sequence[Scorer], max_len: int) -> int:
    # The decoder prefix carries bos plus the generated tokens.
    for s in scorers:
        model = getattr(s, "model", None)
        if model is not None:
            max_len = min(max_len, model.shape.max_positions - 1)
    return max_len


def beam_search(
    scorers: Sequence[Scorer],
    src_ids: Sequence[int],
    beam_size: int = 5,
    max_len: int = 200,
    min_len: int = 1,
    combination: str = "mean_logprob",
) -> tuple[list[int], float]:
    """Best hypothesis token ids (eos excluded) and its cumulative log-probability."""
    if beam_size < 1:
        raise ValueError("beam_size must be >= 1")
    vocab = _check_members(scorers)
    eos = vocab.eos_id
    suppressed = _suppressed_ids(vocab)
    max_len = _effective_max_len(scorers, max_len)
    ctxs = [s.start(src_ids) for s in scorers]

    active: list[tuple[tuple[int, ...], float]] = [((), 0.0)]
    finished: list[tuple[tuple[int, ...], float]] = []
    for t in range(max_len):
        prefixes = np.array(
            [[vocab.bos_id, *ids] for ids, _ in active], dtype=np.int64
        )
        rows = ensemble_step_logprobs(
            [s.step_logprobs_batch(ctx, prefixes) for s, ctx in zip(scorers, ctxs)],
            combination,
        )
        rows = np.array(np.atleast_2d(rows))  # copy: scorers may hand out cached rows
        rows[:, suppressed] = -np.inf
        if t < min_len:
            rows[:, eos] = -np.inf
        pool = []
        for (ids, score), row in zip(active, rows):
            for v in np.flatnonzero(np.isfinite(row)):
                pool.append((score + row[v], ids + (int(v),)))
        pool.sort(key=lambda item: (-item[0], item[1]))
        top = pool[:beam_size]
        active = []
        for score, ids in top:
            if ids[-1] == eos:
                finished.append((ids[:-1], score))
            else:
                active.append((ids, score))
        if not active:
            break
        if finished:
            best_finished = max(score for _, score in finished)
            if best_finished > active[0][1]:
                break
    else:
        finished.extend(active)  # length cap reached without eos
    if not finished:
        finished.extend(active)
    best = sorted(finished, key=lambda h: (-h[1], h[0]))[0]
    return list(best[0]), best[1]


def greedy_decode(
    scorers: Sequence[Scorer],
    src_ids: Sequence[int],
    max_len: int = 200,
    min_len: int = 1,
    combination: str = "mean_logprob",
) -> tuple[list[int], float]:
    """Follow the argmax token at every step (ties to the lowest id)."""
    vocab = _check_members(scorers)
    eos = vocab.eos_id
    suppressed = _suppressed_ids(vocab)
    max_len = _effective_max_len(scorers, max_len)
    ctxs = [s.start(src_ids) for s in scorers]
    ids: list[int] = []
    score = 0.0
    for t in range(max_len):
        prefix = np.array([[vocab.bos_id, *ids]], dtype=np.int64)
        row = ensemble_step_logprobs(
            [s.step_logprobs_batch(ctx, prefix) for s, ctx in zip(scorers, ctxs)],
            combination,
        )
        row = np.array(np.atleast_2d(row)[0])
        row[suppressed] = -np.inf
        if t < min_len:
            row[eos] = -np.inf
        v = int(np.argmax(row))
        score += float(row[v])
        if v == eos:
            break
        ids.append(v)
    return ids, score


@dataclass(frozen=True)
class EnsembleSpec:
    """Which checkpoints combine, and how to decode with them."""

    checkpoints: tuple[str, ...]
    combination: str = "mean_logprob"
    beam_size: int = 5
    max_len: int = 200
    min_len: int = 1
    length_policy: str = "none"

    def __post_init__(self) -> None:
        if len(self.checkpoints) < 1:
            raise ValueError("an ensemble needs at least one checkpoint")
        if self.beam_size < 1:
            raise ValueError("beam_size must be >= 1")
        if self.combination not in _COMBINATIONS:
            raise ValueError(f"unknown combination rule {self.combination!r}")
        if self.length_policy != "none":
            raise ValueError("only the 'none' length policy is supported")

    def to_json_obj(self) -> dict:
        obj = asdict(self)
        obj["checkpoints"] = list(self.checkpoints)
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "EnsembleSpec":
        obj = dict(obj)
        obj["checkpoints"] = tuple(obj["checkpoints"])
        return cls(**obj)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json_obj(), indent=2) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> "EnsembleSpec":
        return cls.from_json_obj(json.loads(Path(path).read_text(encoding="utf-8")))


def load_scorers(spec: EnsembleSpec) -> list[ModelScorer]:
    scorers = [ModelScorer.from_path(p) for p in spec.checkpoints]
    _check_members(scorers)
    return scorers


@dataclass
class TranslationResult:
    hypotheses: list[str]
    errors: list[tuple[int, str]] = field(default_factory=list)


def translate_corpus(
    scorers: Sequence[Scorer],
    segments: Sequence[str],
    tgt_lang: str,
    beam_size: int = 5,
    max_len: int = 200,
    min_len: int = 1,
    combination: str = "mean_logprob",
    jobs: int = 1,
) -> TranslationResult:
    """One hypothesis per input segment, order-preserving; a failed segment
    yields an empty placeholder plus an error entry, never an aborted batch.

    Word-final tone marks are restored when the target language is czn.
    """
    vocab = _check_members(scorers)
    vocab.tag_id(tgt_lang)  # raises MissingTag up front

    def one(item: tuple[int, str]) -> tuple[str, tuple[int, str] | None]:
        i, text = item
        try:
            ids, _ = beam_search(
                scorers,
                encode_source(text, tgt_lang, vocab),
                beam_size=beam_size,
                max_len=max_len,
                min_len=min_len,
                combination=combination,
            )
            hyp = decode_ids(ids, vocab)
            if tgt_lang == "czn":
                hyp = czn_restore(hyp)
            return hyp, None
        except Exception as exc:  # per-segment isolation
            return "", (i, f"{type(exc).__name__}: {exc}")

    items = list(enumerate(segments))
    if jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, items))
    else:
        results = [one(item) for item in items]
    hyps = [hyp for hyp, _ in results]
    errors = [err for _, err in results if err is not None]
    return TranslationResult(hypotheses=hyps, errors=errors)


def translate_with_spec(
    spec: EnsembleSpec, segments: Sequence[str], tgt_lang: str, jobs: int = 1
) -> TranslationResult:
    return translate_corpus(
        load_scorers(spec),
        segments,
        tgt_lang,
        beam_size=spec.beam_size,
        max_len=spec.max_len,
        min_len=spec.min_len,
        combination=spec.combination,
        jobs=jobs,
    )


def greedy_translate_batch(
    scorer: ModelScorer,
    segments: Sequence[str],
    tgt_lang: str,
    max_len: int = 200,
) -> list[str]:
    """Fast batched greedy decoding (used for validation during training)."""
    vocab = scorer.vocab
    if not segments:
        return []
    max_len = _effective_max_len([scorer], max_len)
    encoded = [encode_source(text, tgt_lang, vocab) for text in segments]
    width = max(len(e) for e in encoded)
    src = torch.full((len(encoded), width), vocab.pad_id, dtype=torch.long)
    for i, seq in enumerate(encoded):
        src[i, : len(seq)] = torch.tensor(seq, dtype=torch.long)
    with torch.no_grad():
        memory, pad_mask = scorer.model.encode(src, src.eq(vocab.pad_id))
        suppressed = _suppressed_ids(vocab)
        prefix = torch.full((len(encoded), 1), vocab.bos_id, dtype=torch.long)
        done = torch.zeros(len(encoded), dtype=torch.bool)
        outputs: list[list[int]] = [[] for _ in encoded]
        for t in range(max_len):
            hidden = scorer.model.decode(memory, pad_mask, prefix)
            logits = scorer.model.output_logits(hidden[:, -1])
            logits[:, suppressed] = -torch.inf
            if t < 1:
                logits[:, vocab.eos_id] = -torch.inf
            nxt = logits.argmax(dim=-1)
            nxt = torch.where(done, torch.full_like(nxt, vocab.pad_id), nxt)
            for i in range(len(encoded)):
                if not done[i] and int(nxt[i]) != vocab.eos_id:
                    outputs[i].append(int(nxt[i]))
            done |= nxt.eq(vocab.eos_id)
            if bool(done.all()):
                break
            prefix = torch.cat([prefix, nxt.unsqueeze(1)], dim=1)
    hyps = [decode_ids(ids, vocab) for ids in outputs]
    if tgt_lang == "czn":
        hyps = [czn_restore(h) for h in hyps]
    return hyps
