"""Tagged-corpus ingestion.

Documents arrive as vertical files: one token per line, ``form<TAB>lemma<TAB>tag``,
UTF-8, blank lines ignored. Author and title are carried by the file name
(``author_title.tsv``, split on the first underscore).
"""

from __future__ import annotations

import csv
import io
import logging
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)

PUNCT_TAG = "interp"


class CorpusError(ValueError):
    """Base class for ingestion problems."""


class MalformedTagError(CorpusError):
    pass


class FormatError(CorpusError):
    pass


class ValidationError(CorpusError):
    pass


@dataclass(frozen=True)
class PositionalTag:
    segments: tuple[str, ...]

    @property
    def raw(self) -> str:
        return ":".join(self.segments)

    @property
    def pos(self) -> str:
        return self.segments[0]

    def __str__(self) -> str:
        return self.raw


def parse_tag(raw: str) -> PositionalTag:
    """Split a positional tag such as ``adj:sg:dat:m1:pos`` into its segments."""
    if not raw or any(c.isspace() for c in raw):
        raise MalformedTagError(f"malformed tag {raw!r}: empty or contains whitespace")
    segments = tuple(raw.split(":"))
    if any(s == "" for s in segments):
        raise MalformedTagError(f"malformed tag {raw!r}: empty segment")
    return PositionalTag(segments)


def truncate_tag(tag: PositionalTag, k: int) -> str:
    """Keep the first ``k`` segments of ``tag`` (short tags come back whole)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return ":".join(tag.segments[:k])


@dataclass(frozen=True)
class Token:
    form: str
    lemma: str
    tag: PositionalTag

    def __post_init__(self):
        if not self.form or not self.lemma:
            raise FormatError("token form and lemma must be non-empty")

    @classmethod
    def punct(cls, mark: str) -> "Token":
        return cls(mark, mark, PositionalTag((PUNCT_TAG,)))


@dataclass(frozen=True)
class Document:
    author: str
    title: str
    tokens: tuple[Token, ...]

    def __post_init__(self):
        if not self.author:
            raise ValidationError("document author must be non-empty")
        if not self.tokens:
            raise FormatError(f"document {self.doc_id!r} has no tokens")

    @property
    def doc_id(self) -> str:
        return f"{self.author}_{self.title}"

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]

    def __post_init__(self):
        docs = tuple(sorted(self.documents, key=lambda d: (d.author, d.title)))
        object.__setattr__(self, "documents", docs)
        validate_labels([d.author for d in docs])
        ids = [d.doc_id for d in docs]
        dupes = sorted(i for i, c in Counter(ids).items() if c > 1)
        if dupes:
            raise ValidationError(f"duplicate documents: {', '.join(dupes)}")

    @property
    def authors(self) -> list[str]:
        return sorted({d.author for d in self.documents})

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)


def validate_labels(authors: Sequence[str]) -> None:
    """Check that leave-one-out attribution is answerable for these labels."""
    counts = Counter(authors)
    if len(counts) < 2:
        found = ", ".join(sorted(counts)) or "none"
        raise ValidationError(f">=2 authors required (found: {found})")
    lonely = sorted(a for a, c in counts.items() if c < 2)
    if lonely:
        raise ValidationError(
            "every author needs >=2 documents; offending authors: " + ", ".join(lonely)
        )


def _read_lines(stream) -> Iterable[str]:
    if isinstance(stream, (bytes, bytearray)):
        return stream.decode("utf-8").splitlines()
    data = stream.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data.splitlines()


def parse_vertical_document(stream: Union[IO, bytes], author: str, title: str) -> Document:
    """Read one vertical-format document from a byte or text stream."""
    tokens = []
    for lineno, line in enumerate(_read_lines(stream), start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise FormatError(f"line {lineno}: expected 3 tab-separated fields, got {len(fields)}")
        form, lemma, raw_tag = fields
        try:
            tag = parse_tag(raw_tag)
            tokens.append(Token(form, lemma, tag))
        except CorpusError as exc:
            raise type(exc)(f"line {lineno}: {exc}") from None
    if not tokens:
        raise FormatError(f"empty document {author}_{title}")
    return Document(author, title, tuple(tokens))


def serialize_vertical(doc: Document) -> bytes:
    return "".join(f"{t.form}\t{t.lemma}\t{t.tag.raw}\n" for t in doc.tokens).encode("utf-8")


def split_doc_id(name: str) -> tuple[str, str]:
    author, sep, title = name.partition("_")
    if not sep or not author or not title:
        raise ValidationError(f"{name!r} does not follow the author_title naming convention")
    return author, title


def load_document(path: Union[str, Path]) -> Document:
    path = Path(path)
    author, title = split_doc_id(path.stem)
    try:
        with open(path, "rb") as fh:
            return parse_vertical_document(fh, author, title)
    except OSError as exc:
        raise CorpusError(f"cannot read {path}: {exc}") from exc
    except CorpusError as exc:
        raise type(exc)(f"{path.name}: {exc}") from None


def load_corpus(directory: Union[str, Path], pattern: str = "*.tsv") -> Corpus:
    directory = Path(directory)
    if not directory.is_dir():
        raise CorpusError(f"{directory} is not a directory")
    files = list(directory.glob(pattern))
    if not files:
        raise ValidationError(f"no {pattern} files in {directory}")
    docs = [load_document(p) for p in files]
    logger.info("loaded %d documents from %s", len(docs), directory)
    return Corpus(tuple(docs))


def write_corpus(corpus: Corpus, directory: Union[str, Path]) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for doc in corpus:
        path = directory / f"{doc.doc_id}.tsv"
        path.write_bytes(serialize_vertical(doc))
        paths.append(path)
    return paths


# --- precomputed frequency tables -----------------------------------------

def load_frequency_matrix(stream: Union[IO, str, Path]):
    """Read a documents x features table of relative frequencies.

    The header row lists feature identifiers in rank order (its first cell is
    ignored); every following row starts with an ``author_title`` document id.
    """
    from .features import FrequencyMatrix

    if isinstance(stream, (str, Path)):
        with open(stream, encoding="utf-8", newline="") as fh:
            return load_frequency_matrix(fh)
    text = stream.read()
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]
    if len(rows) < 2:
        raise FormatError("frequency table needs a header row and at least one document row")
    features = tuple(rows[0][1:])
    if not features:
        raise FormatError("frequency table has no feature columns")
    doc_ids, authors, values = [], [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(features) + 1:
            raise FormatError(f"line {lineno}: expected {len(features) + 1} cells, got {len(row)}")
        doc_id = row[0]
        if doc_id in doc_ids:
            raise ValidationError(f"line {lineno}: duplicate document id {doc_id!r}")
        author, _ = split_doc_id(doc_id)
        vals = []
        for cell in row[1:]:
            try:
                v = float(cell)
            except ValueError:
                raise ValidationError(f"line {lineno}: non-numeric cell {cell!r}") from None
            if not np.isfinite(v) or v < 0:
                raise ValidationError(f"line {lineno}: invalid frequency {cell!r}")
            vals.append(v)
        doc_ids.append(doc_id)
        authors.append(author)
        values.append(vals)
    return FrequencyMatrix(
        doc_ids=tuple(doc_ids),
        authors=tuple(authors),
        features=features,
        values=np.asarray(values, dtype=float),
        spec=None,
        k=len(features),
    )
