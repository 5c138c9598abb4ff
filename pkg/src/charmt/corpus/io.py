"""File formats: aligned parallel text, two-column TSV tables, corpus sidecars.

Parallel text is two aligned UTF-8 files, one segment per line, '\\n' newlines.
Unicode NFC is applied at load so equality-based deduplication and overlap
checks are stable; writing back is byte-identical modulo that normalization.
"""

from __future__ import annotations

import json
import unicodedata
from pathlib import Path

from ..errors import AlignmentMismatch, EncodingError
from .types import Corpus, SentencePair, ensure_language


def _read_lines(path: str | Path) -> list[str]:
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise EncodingError(f"{path}: {exc}") from exc
    text = unicodedata.normalize("NFC", text)
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def load_parallel(
    src_path: str | Path,
    tgt_path: str | Path,
    pair: tuple[str, str],
    provenance: str,
) -> Corpus:
    """Load an aligned file pair into a corpus, one sentence pair per line."""
    src_lines = _read_lines(src_path)
    tgt_lines = _read_lines(tgt_path)
    if len(src_lines) != len(tgt_lines):
        raise AlignmentMismatch(
            f"{src_path} has {len(src_lines)} lines but {tgt_path} has {len(tgt_lines)}"
        )
    pairs = []
    for i, (src, tgt) in enumerate(zip(src_lines, tgt_lines)):
        try:
            pairs.append(SentencePair(src, tgt, pair, provenance))
        except ValueError as exc:
            raise ValueError(f"line {i + 1}: {exc}") from exc
    return Corpus(pair=pair, pairs=pairs)


def save_parallel(corpus: Corpus, src_path: str | Path, tgt_path: str | Path) -> None:
    Path(src_path).write_text(
        "".join(sp.source + "\n" for sp in corpus), encoding="utf-8"
    )
    Path(tgt_path).write_text(
        "".join(sp.target + "\n" for sp in corpus), encoding="utf-8"
    )


def save_corpus(corpus: Corpus, prefix: str | Path) -> None:
    """Write a corpus as <prefix>.src.txt / <prefix>.tgt.txt / <prefix>.meta.json.

    Provenance is stored once when uniform, otherwise per line.
    """
    prefix = Path(prefix)
    save_parallel(corpus, f"{prefix}.src.txt", f"{prefix}.tgt.txt")
    tags = [sp.provenance for sp in corpus]
    meta = {
        "pair": list(corpus.pair),
        "provenance": tags[0] if len(set(tags)) <= 1 else tags,
    }
    if not tags:
        meta["provenance"] = "user"
    Path(f"{prefix}.meta.json").write_text(
        json.dumps(meta, ensure_ascii=False) + "\n", encoding="utf-8"
    )


def load_corpus(prefix: str | Path) -> Corpus:
    prefix = Path(prefix)
    meta = json.loads(Path(f"{prefix}.meta.json").read_text(encoding="utf-8"))
    pair = (ensure_language(meta["pair"][0]), ensure_language(meta["pair"][1]))
    src_lines = _read_lines(f"{prefix}.src.txt")
    tgt_lines = _read_lines(f"{prefix}.tgt.txt")
    if len(src_lines) != len(tgt_lines):
        raise AlignmentMismatch(f"{prefix}: corpus sides are misaligned")
    prov = meta["provenance"]
    tags = prov if isinstance(prov, list) else [prov] * len(src_lines)
    if len(tags) != len(src_lines):
        raise AlignmentMismatch(f"{prefix}: provenance list is misaligned")
    pairs = [
        SentencePair(s, t, pair, p) for s, t, p in zip(src_lines, tgt_lines, tags)
    ]
    return Corpus(pair=pair, pairs=pairs)


def load_table(path: str | Path) -> dict[str, str]:
    """Read a two-column TSV (from-char, to-char) mapping table."""
    table = {}
    for i, line in enumerate(_read_lines(path)):
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ValueError(f"{path}:{i + 1}: expected two tab-separated columns")
        table[cols[0]] = cols[1]
    return table
