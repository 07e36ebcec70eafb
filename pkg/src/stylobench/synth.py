"""Synthetic tagged corpora with tunable lexical and grammatical authorial signal.

Every author mixes a shared generative process with a private one:

* stems are drawn from ``(1 - lambda_lex) * shared + lambda_lex * private``
  Zipfian distributions (one per part of speech);
* the part-of-speech chain walks a ``(1 - lambda_gram) * shared +
  lambda_gram * private`` transition matrix.

All transition matrices are reversible with one common stationary
distribution, so authors differ in POS *sequences* but not in how often each
part of speech occurs. The grammatical state of a token (which fixes its
suffix and tag segments) is drawn from a distribution shared by all authors.

Randomness comes from numpy's PCG64 bit generator, seeded through
``SeedSequence(seed)``; child sequences are spawned in a fixed order, so the
output depends on the configuration alone.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Union

import numpy as np

from .corpus import Corpus, Document, PositionalTag, Token, PUNCT_TAG

CONSONANTS = "bcdfghklmnprstwz"
VOWELS = "aeiouy"
PUNCT_MARKS = (",", ".", "?", "!", ";", ":")
PUNCT_WEIGHTS = (0.45, 0.35, 0.06, 0.05, 0.05, 0.04)

_CASES7 = ("nom", "gen", "dat", "acc", "inst", "loc", "voc")
_NOUN_SUFFIXES = ("a", "y", "ie", "ę", "ą", "ze", "o", "y", "ach", "om", "i", "ami", "ach", "owie")
_ADJ_SUFFIXES = ("y", "ego", "emu", "ą", "ym", "im", "e", "ych", "ym", "e", "ymi", "ich")
_VERB_SUFFIXES = ("ę", "esz", "e", "emy", "ecie", "ą")


def _default_paradigm() -> dict[str, tuple[tuple[str, str], ...]]:
    noun = tuple(
        (suf, f"{num}:{case}")
        for suf, (num, case) in zip(
            _NOUN_SUFFIXES, [(n, c) for n in ("sg", "pl") for c in _CASES7]
        )
    )
    adj = tuple(
        (suf, f"{num}:{case}:pos")
        for suf, (num, case) in zip(
            _ADJ_SUFFIXES, [(n, c) for n in ("sg", "pl") for c in _CASES7[:6]]
        )
    )
    verb = tuple(
        (suf, f"{num}:{person}")
        for suf, (num, person) in zip(
            _VERB_SUFFIXES, [(n, p) for n in ("sg", "pl") for p in ("pri", "sec", "ter")]
        )
    )
    return {"subst": noun, "adj": adj, "fin": verb}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SynthConfig:
    authors: int = 10
    docs_per_author: int = 3
    tokens_per_doc: int = 5000
    lambda_lex: float = 0.0
    lambda_gram: float = 0.0
    stems: int = 400
    seed: int = 0
    zipf: float = 1.0
    # POS -> ((suffix, grammatical-state segments), ...); "interp" is implicit
    paradigm: dict = field(default_factory=_default_paradigm)

    def __post_init__(self):
        for name in ("authors", "docs_per_author", "tokens_per_doc", "stems"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be >= 1")
        for name in ("lambda_lex", "lambda_gram"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {v}")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.zipf < 0:
            raise ConfigError("zipf exponent must be non-negative")
        if not self.paradigm or PUNCT_TAG in self.paradigm:
            raise ConfigError("paradigm needs at least one non-punctuation class")
        for pos, entries in self.paradigm.items():
            state_names = [st for _, st in entries]
            if not entries or len(set(state_names)) != len(state_names):
                raise ConfigError(f"paradigm for {pos!r} needs distinct grammatical states")
            for _, state in entries:
                if not state or any(not seg or seg.strip() != seg for seg in state.split(":")):
                    raise ConfigError(f"paradigm for {pos!r}: bad state {state!r}")


def read_config(path: Union[str, Path]) -> SynthConfig:
    """Parse a ``key=value`` file (``#`` starts a comment).

    Paradigm overrides look like ``paradigm.subst = a/sg:nom, y/sg:gen``.
    """
    types = {f.name: f.type for f in fields(SynthConfig)}
    kwargs: dict = {}
    paradigm: dict = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise ConfigError(f"line {lineno}: expected key=value")
        if key.startswith("paradigm."):
            entries = []
            for item in value.split(","):
                suffix, slash, state = item.strip().partition("/")
                if not slash:
                    raise ConfigError(f"line {lineno}: paradigm entries look like suffix/state")
                entries.append((suffix, state))
            paradigm[key.split(".", 1)[1]] = tuple(entries)
            continue
        if key not in types or key == "paradigm":
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            kwargs[key] = float(value) if types[key] == "float" else int(value)
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from None
    if paradigm:
        kwargs["paradigm"] = paradigm
    return SynthConfig(**kwargs)


def _zipf(n: int, s: float) -> np.ndarray:
    w = 1.0 / np.arange(1, n + 1) ** s
    return w / w.sum()


def _make_stems(rng: np.random.Generator, count: int, taken: set) -> list[str]:
    out = []
    syllables = 2
    attempts = 0
    while len(out) < count:
        stem = "".join(rng.choice(list(CONSONANTS)) + rng.choice(list(VOWELS)) for _ in range(syllables))
        stem += rng.choice(list(CONSONANTS))
        if stem not in taken:
            taken.add(stem)
            out.append(stem)
        attempts += 1
        if attempts > 20 * count:
            syllables += 1
            attempts = 0
    return out


@dataclass
class _Profile:
    """Per-author sampling tables (cumulative probabilities)."""

    stem_cdf: dict
    transition_cdf: np.ndarray
    start_cdf: np.ndarray


def _cdf(p: np.ndarray) -> np.ndarray:
    c = np.cumsum(p, axis=-1)
    c[..., -1] = 1.0
    return c


def _reversible_chain(rng: np.random.Generator, stationary: np.ndarray, shape: float) -> np.ndarray:
    """Random transition matrix whose stationary distribution is ``stationary``.

    A random symmetric affinity matrix is scaled to ``diag(d) A diag(d)`` with
    row sums equal to ``stationary`` and then row-normalized; small ``shape``
    values give peaky, strongly author-specific chains.
    """
    n = len(stationary)
    g = rng.gamma(shape, size=(n, n)) + 1e-3
    a = g + g.T
    d = np.sqrt(stationary / a.sum(axis=1))
    for _ in range(10_000):
        nxt = np.sqrt(d * stationary / (a @ d))
        if np.max(np.abs(nxt - d)) < 1e-15:
            d = nxt
            break
        d = nxt
    w = d[:, None] * a * d[None, :]
    return w / w.sum(axis=1, keepdims=True)


def generate_corpus(cfg: SynthConfig) -> Corpus:
    root = np.random.SeedSequence(cfg.seed)
    shared_seq, authors_seq, docs_seq = root.spawn(3)
    rng = np.random.Generator(np.random.PCG64(shared_seq))

    pos_classes = list(cfg.paradigm)
    states = {p: list(cfg.paradigm[p]) for p in pos_classes}
    labels = pos_classes + [PUNCT_TAG]
    n_pos = len(labels)

    taken: set = set()
    stems = {p: _make_stems(rng, cfg.stems, taken) for p in pos_classes}
    zipf = _zipf(cfg.stems, cfg.zipf)

    shared_stem = {p: zipf[np.argsort(rng.permutation(cfg.stems))] for p in pos_classes}
    state_cdf = {p: _cdf(rng.dirichlet(np.full(len(states[p]), 5.0))) for p in pos_classes}
    stationary = rng.dirichlet(np.full(n_pos, 10.0))
    shared_trans = _reversible_chain(rng, stationary, 2.0)
    punct_cdf = _cdf(np.asarray(PUNCT_WEIGHTS) / sum(PUNCT_WEIGHTS))

    profiles = []
    for seq in authors_seq.spawn(cfg.authors):
        arng = np.random.Generator(np.random.PCG64(seq))
        lam, gam = cfg.lambda_lex, cfg.lambda_gram
        stem_cdf = {}
        for p in pos_classes:
            own = zipf[np.argsort(arng.permutation(cfg.stems))]
            stem_cdf[p] = _cdf((1 - lam) * shared_stem[p] + lam * own)
        own_trans = _reversible_chain(arng, stationary, 0.3)
        trans = (1 - gam) * shared_trans + gam * own_trans
        profiles.append(_Profile(stem_cdf, _cdf(trans), _cdf(stationary)))

    doc_seqs = docs_seq.spawn(cfg.authors * cfg.docs_per_author)
    width = len(str(cfg.authors))
    documents = []
    for a, profile in enumerate(profiles):
        author = f"author{a + 1:0{width}d}"
        for j in range(cfg.docs_per_author):
            drng = np.random.Generator(np.random.PCG64(doc_seqs[a * cfg.docs_per_author + j]))
            tokens = _walk(drng, cfg.tokens_per_doc, profile, labels, stems, states, state_cdf, punct_cdf)
            documents.append(Document(author, f"text{j + 1:02d}", tokens))
    return Corpus(tuple(documents))


def _walk(rng, length, profile, labels, stems, states, state_cdf, punct_cdf) -> tuple[Token, ...]:
    u = rng.random(length)
    seq = np.empty(length, dtype=int)
    cur = bisect.bisect_right(profile.start_cdf.tolist(), u[0])
    seq[0] = cur
    rows = [row.tolist() for row in profile.transition_cdf]
    for i in range(1, length):
        cur = min(bisect.bisect_right(rows[cur], u[i]), len(labels) - 1)
        seq[i] = cur

    out: list = [None] * length
    for code, pos in enumerate(labels):
        where = np.flatnonzero(seq == code)
        if where.size == 0:
            continue
        if pos == PUNCT_TAG:
            marks = np.searchsorted(punct_cdf, rng.random(where.size), side="right")
            for i, m in zip(where, marks):
                out[i] = Token.punct(PUNCT_MARKS[min(m, len(PUNCT_MARKS) - 1)])
            continue
        stem_idx = np.searchsorted(profile.stem_cdf[pos], rng.random(where.size), side="right")
        state_idx = np.searchsorted(state_cdf[pos], rng.random(where.size), side="right")
        pos_stems, pos_states = stems[pos], states[pos]
        tags = [PositionalTag((pos, *state.split(":"))) for _, state in pos_states]
        for i, s, g in zip(where, stem_idx, state_idx):
            stem = pos_stems[min(s, len(pos_stems) - 1)]
            g = min(g, len(pos_states) - 1)
            out[i] = Token(stem + pos_states[g][0], stem, tags[g])
    return tuple(out)


def write_config(cfg: SynthConfig, path: Union[str, Path]) -> None:
    lines = [f"{f.name}={getattr(cfg, f.name)}" for f in fields(cfg) if f.name != "paradigm"]
    for pos, entries in cfg.paradigm.items():
        lines.append(f"paradigm.{pos}=" + ", ".join(f"{s}/{st}" for s, st in entries))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
