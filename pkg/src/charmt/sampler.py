"""Temperature-based language-pair sampling for multilingual batches.

Pair probabilities follow p_l = n_l^(1/T) / sum_k n_k^(1/T): T=1 is
proportional to corpus size, large T approaches uniform. One pair is drawn
per batch; examples are drawn uniformly with replacement within that pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus.types import Corpus, Manifest, SentencePair
from .errors import EmptyManifest, MissingCorpus, ZeroSize


@dataclass(frozen=True)
class PairDistribution:
    pairs: tuple[str, ...]
    probs: tuple[float, ...]
    temperature: float
    sizes: tuple[int, ...]

    def prob_of(self, pair: str) -> float:
        return self.probs[self.pairs.index(pair)]

    def to_json_obj(self) -> dict:
        return {
            "temperature": self.temperature,
            "pairs": {
                label: {"size": n, "prob": p}
                for label, n, p in zip(self.pairs, self.sizes, self.probs)
            },
        }


def pair_distribution(manifest: Manifest, temperature: float) -> PairDistribution:
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    totals = manifest.totals()
    if not totals:
        raise EmptyManifest("manifest has no language pairs")
    labels = sorted(totals)
    sizes = [totals[l] for l in labels]
    if min(sizes) <= 0:
        raise ZeroSize("every sampled pair needs a positive example count")
    weights = np.array(sizes, dtype=np.float64) ** (1.0 / temperature)
    probs = weights / weights.sum()
    return PairDistribution(
        pairs=tuple(labels),
        probs=tuple(float(p) for p in probs),
        temperature=float(temperature),
        sizes=tuple(sizes),
    )


def draw_pair(rng: np.random.Generator, dist: PairDistribution) -> str:
    return dist.pairs[rng.choice(len(dist.pairs), p=np.array(dist.probs))]


def draw_batch(
    rng: np.random.Generator,
    corpora: dict[str, Corpus],
    dist: PairDistribution,
    batch_size: int,
) -> list[SentencePair]:
    """One language pair for the whole batch; uniform with-replacement examples."""
    for label in dist.pairs:
        if label not in corpora or len(corpora[label]) == 0:
            raise MissingCorpus(f"no corpus for sampled pair {label}")
    label = draw_pair(rng, dist)
    corpus = corpora[label]
    idx = rng.integers(0, len(corpus), size=batch_size)
    return [corpus[int(i)] for i in idx]
