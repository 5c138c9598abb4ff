"""Synthetic cipher languages for desk-scale experiments.

A 'language' is a character-substitution cipher over a Spanish-like alphabet:
translation from Spanish is then a deterministic charwise mapping a small
model can learn from a few hundred pairs, while ciphers sharing most of
their table give a controllable transfer-learning signal.
"""

from __future__ import annotations

import numpy as np

from charmt.corpus.types import Corpus, SentencePair, register_language

ALPHABET = "abcdefghijklmnopqrstuvwxyzáéíóúñ"

WORDS = [
    "casa", "perro", "agua", "cielo", "tierra", "fuego", "viento", "luna",
    "sol", "mar", "montaña", "río", "árbol", "flor", "piedra", "camino",
    "noche", "día", "tiempo", "vida", "niño", "mujer", "hombre", "pueblo",
    "canto", "lluvia", "nube", "estrella", "pájaro", "pez", "maíz", "semilla",
]


def spanish_line(rng: np.random.Generator, min_words: int = 2, max_words: int = 5) -> str:
    n = int(rng.integers(min_words, max_words + 1))
    return " ".join(WORDS[int(i)] for i in rng.integers(0, len(WORDS), n))


def make_cipher(seed: int) -> dict[str, str]:
    """A random permutation of the alphabet; whitespace stays fixed."""
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(ALPHABET))
    return {a: ALPHABET[int(p)] for a, p in zip(ALPHABET, perm)}


def derive_cipher(base: dict[str, str], shared_fraction: float, seed: int) -> dict[str, str]:
    """A cipher agreeing with `base` on a fraction of the alphabet.

    The remaining keys have their images cyclically shifted among themselves,
    so every non-shared key genuinely disagrees with `base`.
    """
    rng = np.random.default_rng(seed)
    keys = list(base)
    n_change = max(2, round(len(keys) * (1.0 - shared_fraction)))
    changed = [keys[int(i)] for i in rng.choice(len(keys), size=n_change, replace=False)]
    images = [base[k] for k in changed]
    rotated = images[1:] + images[:1]
    table = dict(base)
    table.update(dict(zip(changed, rotated)))
    return table


def apply_cipher(text: str, table: dict[str, str]) -> str:
    return "".join(table.get(c, c) for c in text)


def cipher_corpus(
    lang: str,
    table: dict[str, str],
    n_pairs: int,
    seed: int,
    provenance: str = "anlp23",
) -> Corpus:
    register_language(lang)
    rng = np.random.default_rng(seed)
    pairs = []
    for _ in range(n_pairs):
        src = spanish_line(rng)
        pairs.append(SentencePair(src, apply_cipher(src, table), ("es", lang), provenance))
    return Corpus(pair=("es", lang), pairs=pairs)


def dev_set(
    lang_table: dict[str, str], n_rows: int, seed: int
) -> tuple[list[str], list[str]]:
    rng = np.random.default_rng(seed)
    srcs = [spanish_line(rng) for _ in range(n_rows)]
    return srcs, [apply_cipher(s, lang_table) for s in srcs]


def multiparallel_dev(
    tables: dict[str, dict[str, str]], n_rows: int, seed: int
) -> dict[str, list[str]]:
    """Aligned rows across 'es' plus every cipher language."""
    rng = np.random.default_rng(seed)
    base = [spanish_line(rng) for _ in range(n_rows)]
    columns: dict[str, list[str]] = {"es": base}
    for lang, table in tables.items():
        columns[lang] = [apply_cipher(s, table) for s in base]
    return columns
