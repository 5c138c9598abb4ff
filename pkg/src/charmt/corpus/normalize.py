"""Text normalization: detokenization, punctuation mapping, word-final tone marks.

The detokenizer applies a fixed, documented rule list over space-separated
tokens:

  * a token made only of closing punctuation  . , ; : ! ? ) ] } »  attaches
    to the preceding token;
  * a token made only of opening punctuation  ¿ ¡ ( [ { «  attaches to the
    following token;
  * a straight double quote '"' alternates: the first of a pair attaches
    right, the second attaches left.

The straight single quote is deliberately left untouched: several of the
target orthographies use it as a letter (glottal stop), not as punctuation.

Tone handling converts maximal word-final runs of superscript characters to
standard counterparts and back. The shipped table covers superscript digits
and modifier capital letters and can be replaced by any injective table.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

_CLOSING = set(".,;:!?)]}»")
_OPENING = set("¿¡([{«")

_WORD_RE = re.compile(r"\S+")


def detokenize(text: str) -> str:
    """Join tokenized text so punctuation attaches to its neighboring words."""
    out: list[str] = []
    glue_next = False
    quote_open = False
    for tok in text.split():
        if tok == '"':
            attach_left, glue_after = quote_open, not quote_open
            quote_open = not quote_open
        elif all(c in _CLOSING for c in tok):
            attach_left, glue_after = True, False
        elif all(c in _OPENING for c in tok):
            attach_left, glue_after = False, True
        else:
            attach_left, glue_after = False, False
        if out and not attach_left and not glue_next:
            out.append(" ")
        out.append(tok)
        glue_next = glue_after
    return "".join(out)


@dataclass
class ReplacementReport:
    """What map_unsupported_punct did: replacement counts and flagged leftovers."""

    replaced: dict[str, int] = field(default_factory=dict)
    unmapped: dict[str, int] = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "replaced": dict(sorted(self.replaced.items())),
            "unmapped": dict(sorted(self.unmapped.items())),
        }


def map_unsupported_punct(
    text: str, vocab, mapping: dict[str, str]
) -> tuple[str, ReplacementReport]:
    """Replace mapped characters; pass through and flag unmapped out-of-vocab ones.

    `vocab` is either a character set or an object with a chars() method
    (e.g. codec.Vocabulary). Characters outside the vocabulary with no
    mapping entry are left intact and counted, mirroring a hands-off policy
    for scripts the model never saw.
    """
    charset = vocab if isinstance(vocab, (set, frozenset)) else vocab.chars()
    report = ReplacementReport()
    out: list[str] = []
    for ch in text:
        if ch in mapping:
            out.append(mapping[ch])
            report.replaced[ch] = report.replaced.get(ch, 0) + 1
        else:
            out.append(ch)
            if ch not in charset:
                report.unmapped[ch] = report.unmapped.get(ch, 0) + 1
    return "".join(out), report


def _build_default_table() -> dict[str, str]:
    table: dict[str, str] = {}
    superscripts = [chr(cp) for cp in range(0x2070, 0x207A)]  # ⁰ ⁴..⁹ block
    superscripts += ["¹", "²", "³"]  # ¹ ² ³
    superscripts += [chr(cp) for cp in range(0x1D2C, 0x1D43)]  # modifier capitals
    used = set()
    for ch in superscripts:
        std = unicodedata.normalize("NFKC", ch)
        if len(std) == 1 and std != ch and std not in used:
            table[ch] = std
            used.add(std)
    return table


_DEFAULT_TABLE = _build_default_table()


def default_superscript_table() -> dict[str, str]:
    """Superscript -> standard character table shipped with the toolkit."""
    return dict(_DEFAULT_TABLE)


def _check_injective(table: dict[str, str]) -> None:
    if len(set(table.values())) != len(table):
        raise ValueError("superscript table must be injective")


def _convert_word_final(word: str, charmap: dict[str, str]) -> str:
    i = len(word)
    while i > 0 and word[i - 1] in charmap:
        i -= 1
    if i == len(word):
        return word
    return word[:i] + "".join(charmap[c] for c in word[i:])


def czn_normalize(text: str, table: dict[str, str] | None = None) -> str:
    """Replace maximal word-final superscript runs with standard characters."""
    table = _DEFAULT_TABLE if table is None else table
    _check_injective(table)
    return _WORD_RE.sub(lambda m: _convert_word_final(m.group(0), table), text)


def czn_restore(text: str, table: dict[str, str] | None = None) -> str:
    """Superscript maximal word-final runs of standard characters (inverse op)."""
    table = _DEFAULT_TABLE if table is None else table
    _check_injective(table)
    inverse = {v: k for k, v in table.items()}
    return _WORD_RE.sub(lambda m: _convert_word_final(m.group(0), inverse), text)
