"""Character vocabulary with specials and language tags; sequence encode/decode.

The target-language tag is prepended to the *source* sequence, so a single
decoder can serve all directions:

    source ids = [__tgt__] + source chars + [eos]
    target ids = [bos] + target chars + [eos]
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from pathlib import Path
from typing import Iterable, Sequence

from .corpus.types import Corpus, SentencePair
from .errors import EmptyCorpus, InvalidId, MissingTag

PAD, BOS, EOS, UNK = "<pad>", "<bos>", "<eos>", "<unk>"
SPECIALS = (PAD, BOS, EOS, UNK)


def tag_symbol(lang: str) -> str:
    return f"__{lang}__"


def _is_tag(symbol: str) -> bool:
    return len(symbol) > 4 and symbol.startswith("__") and symbol.endswith("__")


class Vocabulary:
    """Immutable dense id <-> symbol table."""

    def __init__(self, symbols: Sequence[str]):
        self._symbols = tuple(symbols)
        self._index = {s: i for i, s in enumerate(self._symbols)}
        if len(self._index) != len(self._symbols):
            raise ValueError("vocabulary symbols must be distinct")
        for special in SPECIALS:
            if special not in self._index:
                raise ValueError(f"vocabulary is missing special symbol {special}")
        self._tag_ids = frozenset(
            i for i, s in enumerate(self._symbols) if _is_tag(s)
        )

    @property
    def symbols(self) -> tuple[str, ...]:
        return self._symbols

    def __len__(self) -> int:
        return len(self._symbols)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Vocabulary) and self._symbols == other._symbols

    def id_of(self, symbol: str) -> int:
        return self._index[symbol]

    def get_id(self, symbol: str, default: int | None = None) -> int | None:
        return self._index.get(symbol, default)

    def symbol_of(self, idx: int) -> str:
        if not 0 <= idx < len(self._symbols):
            raise InvalidId(f"id {idx} outside vocabulary of size {len(self._symbols)}")
        return self._symbols[idx]

    @property
    def pad_id(self) -> int:
        return self._index[PAD]

    @property
    def bos_id(self) -> int:
        return self._index[BOS]

    @property
    def eos_id(self) -> int:
        return self._index[EOS]

    @property
    def unk_id(self) -> int:
        return self._index[UNK]

    def has_tag(self, lang: str) -> bool:
        return tag_symbol(lang) in self._index

    def tag_id(self, lang: str) -> int:
        try:
            return self._index[tag_symbol(lang)]
        except KeyError:
            raise MissingTag(f"no tag for language {lang!r} in vocabulary") from None

    def tag_ids(self) -> frozenset[int]:
        return self._tag_ids

    def chars(self) -> set[str]:
        return {s for s in self._symbols if len(s) == 1}

    def fingerprint(self) -> str:
        payload = json.dumps(list(self._symbols), ensure_ascii=False).encode("utf-8")
        return hashlib.sha256(payload).hexdigest()

    def to_json_obj(self) -> dict:
        return {
            "symbols": list(self._symbols),
            "specials": {
                "pad": self.pad_id, "bos": self.bos_id,
                "eos": self.eos_id, "unk": self.unk_id,
            },
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Vocabulary":
        return cls(obj["symbols"])

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json_obj(), ensure_ascii=False, indent=2) + "\n",
            encoding="utf-8",
        )

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        return cls.from_json_obj(json.loads(Path(path).read_text(encoding="utf-8")))


def build_vocab(corpora: Sequence[Corpus], min_count: int = 1) -> Vocabulary:
    """Specials, then tags for every language seen, then characters by frequency.

    Characters below min_count are dropped; ties in frequency break by
    codepoint so the result is deterministic.
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    if not any(len(c) for c in corpora):
        raise EmptyCorpus("cannot build a vocabulary from empty corpora")
    freq: Counter = Counter()
    langs: set[str] = set()
    for corpus in corpora:
        langs.update(corpus.pair)
        for sp in corpus:
            freq.update(sp.source)
            freq.update(sp.target)
    chars = sorted(
        (c for c, n in freq.items() if n >= min_count),
        key=lambda c: (-freq[c], c),
    )
    symbols = list(SPECIALS) + [tag_symbol(l) for l in sorted(langs)] + chars
    return Vocabulary(symbols)


def extend_with_tags(vocab: Vocabulary, langs: Iterable[str]) -> Vocabulary:
    """Append tags for new languages; existing ids are untouched."""
    new = [tag_symbol(l) for l in sorted(set(langs)) if not vocab.has_tag(l)]
    if not new:
        return vocab
    return Vocabulary(vocab.symbols + tuple(new))


def encode_text(text: str, vocab: Vocabulary) -> list[int]:
    # Single characters can only collide with character symbols, never with
    # multi-char specials or tags, so the plain index lookup is safe.
    unk = vocab.unk_id
    return [vocab.get_id(c, unk) for c in text]


def encode_source(text: str, tgt_lang: str, vocab: Vocabulary) -> list[int]:
    return [vocab.tag_id(tgt_lang)] + encode_text(text, vocab) + [vocab.eos_id]


def encode_target(text: str, vocab: Vocabulary) -> list[int]:
    return [vocab.bos_id] + encode_text(text, vocab) + [vocab.eos_id]


def encode_pair(sp: SentencePair, vocab: Vocabulary) -> tuple[list[int], list[int]]:
    """Encode one sentence pair; requires tags for both languages of the pair."""
    for lang in sp.pair:
        vocab.tag_id(lang)  # raises MissingTag
    return (
        encode_source(sp.source, sp.pair[1], vocab),
        encode_target(sp.target, vocab),
    )


def decode_ids(ids: Sequence[int], vocab: Vocabulary) -> str:
    """Strip specials and tags, concatenate the remaining characters."""
    special_ids = {vocab.pad_id, vocab.bos_id, vocab.eos_id, vocab.unk_id}
    tag_ids = vocab.tag_ids()
    chars = []
    for idx in ids:
        symbol = vocab.symbol_of(int(idx))
        if int(idx) in special_ids or int(idx) in tag_ids:
            continue
        chars.append(symbol)
    return "".join(chars)
