"""Core corpus data types: sentence pairs, corpora, manifests, audit reports."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from ..errors import PairMismatch

# Spanish plus the eleven task languages. The registry is extensible so
# synthetic or additional languages can be added at runtime.
_DEFAULT_LANGUAGES = {
    "es", "aym", "bzd", "cni", "czn", "gn", "hch", "nah", "oto", "quy", "shp", "tar",
}

_REGISTRY: set[str] = set(_DEFAULT_LANGUAGES)

# Well-known data-source tags. Arbitrary user-defined tags are also accepted.
PROVENANCE_TAGS = ("anlp23", "helsinki", "repucs", "nllb", "bibles", "backtrans")


def register_language(code: str) -> str:
    """Add a language code to the registry and return it."""
    if not code or not code.islower() or not code.isalnum():
        raise ValueError(f"language code must be short lowercase alphanumeric, got {code!r}")
    _REGISTRY.add(code)
    return code


def registered_languages() -> frozenset[str]:
    return frozenset(_REGISTRY)


def ensure_language(code: str) -> str:
    if code not in _REGISTRY:
        raise ValueError(f"unregistered language code {code!r}; call register_language first")
    return code


def pair_label(pair: tuple[str, str]) -> str:
    """Canonical 'src-tgt' label used in manifests and reports."""
    return f"{pair[0]}-{pair[1]}"


def parse_pair_label(label: str) -> tuple[str, str]:
    src, sep, tgt = label.partition("-")
    if not sep or not src or not tgt:
        raise ValueError(f"malformed pair label {label!r}, expected 'src-tgt'")
    return ensure_language(src), ensure_language(tgt)


@dataclass(frozen=True)
class SentencePair:
    """One aligned segment with its language pair and data-source tag."""

    source: str
    target: str
    pair: tuple[str, str]
    provenance: str

    def __post_init__(self) -> None:
        if not self.source.strip() or not self.target.strip():
            raise ValueError("sentence pair sides must be nonempty after trimming")
        if not self.provenance:
            raise ValueError("provenance must be set")
        ensure_language(self.pair[0])
        ensure_language(self.pair[1])

    def key(self) -> tuple[str, str]:
        """Equality key for deduplication: exact (source, target) after NFC."""
        return (
            unicodedata.normalize("NFC", self.source),
            unicodedata.normalize("NFC", self.target),
        )


@dataclass
class Corpus:
    """An ordered sequence of sentence pairs sharing one language pair."""

    pair: tuple[str, str]
    pairs: list[SentencePair] = field(default_factory=list)

    def __post_init__(self) -> None:
        ensure_language(self.pair[0])
        ensure_language(self.pair[1])
        for sp in self.pairs:
            if sp.pair != self.pair:
                raise PairMismatch(
                    f"pair {pair_label(sp.pair)} does not match corpus {pair_label(self.pair)}"
                )

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[SentencePair]:
        return iter(self.pairs)

    def __getitem__(self, i: int) -> SentencePair:
        return self.pairs[i]

    @property
    def label(self) -> str:
        return pair_label(self.pair)

    def sources(self) -> list[str]:
        return [sp.source for sp in self.pairs]

    def targets(self) -> list[str]:
        return [sp.target for sp in self.pairs]


@dataclass
class Manifest:
    """Per (language pair, provenance) example counts, with per-pair totals."""

    counts: dict[str, dict[str, int]] = field(default_factory=dict)

    @classmethod
    def from_corpora(cls, corpora: Sequence[Corpus]) -> "Manifest":
        counts: dict[str, dict[str, int]] = {}
        for corpus in corpora:
            per_prov = counts.setdefault(corpus.label, {})
            for sp in corpus:
                per_prov[sp.provenance] = per_prov.get(sp.provenance, 0) + 1
        return cls(counts)

    def totals(self) -> dict[str, int]:
        return {label: sum(per.values()) for label, per in self.counts.items()}

    def total(self) -> int:
        return sum(self.totals().values())

    def to_json_obj(self) -> dict:
        entries = [
            {"language": label, "provenance": prov, "count": n}
            for label in sorted(self.counts)
            for prov, n in sorted(self.counts[label].items())
        ]
        return {"entries": entries, "totals": dict(sorted(self.totals().items()))}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Manifest":
        counts: dict[str, dict[str, int]] = {}
        for entry in obj["entries"]:
            per = counts.setdefault(entry["language"], {})
            per[entry["provenance"]] = int(entry["count"])
        return cls(counts)


@dataclass
class AuditReport:
    """Within-corpus duplicate counts and pairwise cross-corpus overlaps."""

    duplicates: list[int]
    overlaps: dict[tuple[int, int], int]

    def overlap(self, a: int, b: int) -> int:
        if a == b:
            raise ValueError("overlap is defined between distinct corpora")
        i, j = min(a, b), max(a, b)
        return self.overlaps[(i, j)]

    def to_json_obj(self) -> dict:
        return {
            "duplicates": [
                {"corpus": i, "count": n} for i, n in enumerate(self.duplicates)
            ],
            "overlaps": [
                {"a": i, "b": j, "count": n}
                for (i, j), n in sorted(self.overlaps.items())
            ],
        }
