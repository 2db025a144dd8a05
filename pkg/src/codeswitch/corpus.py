"""Data model and I/O for word-level language-tagged labeled corpora.

File format (one utterance per line, UTF-8, LF):

    <label> TAB <surface>_<tag> <surface>_<tag> ...

where label is 0 or 1 and tag is one of hi / en / rest.  The *last*
underscore in each token delimits the tag, so surfaces may themselves
contain underscores.  Blank lines are skipped.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator, Union

LANG_TAGS = frozenset({"hi", "en", "rest"})

POSITIVE = 1
NEGATIVE = 0


class CorpusFormatError(ValueError):
    """Raised when a tagged-corpus line or stream cannot be parsed."""


@dataclass(frozen=True)
class Token:
    """A surface word plus its language tag (hi / en / rest)."""

    surface: str
    tag: str

    def __post_init__(self) -> None:
        if not self.surface:
            raise ValueError("token surface must be non-empty")
        if any(c.isspace() for c in self.surface):
            raise ValueError(f"token surface contains whitespace: {self.surface!r}")
        if self.tag not in LANG_TAGS:
            raise ValueError(f"unknown language tag: {self.tag!r}")


@dataclass(frozen=True)
class LabeledUtterance:
    """An ordered token sequence with a binary task label.

    label is 1 (positive class) or 0 (negative class).  id is an opaque
    identifier, unique within a corpus.
    """

    tokens: tuple[Token, ...]
    label: int
    id: str

    def __post_init__(self) -> None:
        if len(self.tokens) == 0:
            raise ValueError("utterance must contain at least one token")
        if self.label not in (POSITIVE, NEGATIVE):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")


@dataclass(frozen=True)
class LabeledCorpus:
    """An ordered, immutable collection of labeled utterances."""

    utterances: tuple[LabeledUtterance, ...]
    task_name: str = ""

    def __post_init__(self) -> None:
        ids = [u.id for u in self.utterances]
        if len(set(ids)) != len(ids):
            raise ValueError("utterance ids must be unique within a corpus")

    def __len__(self) -> int:
        return len(self.utterances)

    def __iter__(self) -> Iterator[LabeledUtterance]:
        return iter(self.utterances)

    def __getitem__(self, i: int) -> LabeledUtterance:
        return self.utterances[i]

    @property
    def positives(self) -> tuple[LabeledUtterance, ...]:
        return tuple(u for u in self.utterances if u.label == POSITIVE)

    @property
    def negatives(self) -> tuple[LabeledUtterance, ...]:
        return tuple(u for u in self.utterances if u.label == NEGATIVE)

    def subset(self, utterances: Iterable[LabeledUtterance]) -> "LabeledCorpus":
        return LabeledCorpus(tuple(utterances), self.task_name)


def parse_tagged_line(line: str, line_number: int | None = None,
                      uid: str | None = None) -> LabeledUtterance:
    """Parse one `<label> TAB <token>_<tag> ...` line into an utterance.

    Raises CorpusFormatError naming the line number (when given) and the
    offending token on malformed input.
    """
    where = f"line {line_number}: " if line_number is not None else ""
    if "\t" not in line:
        raise CorpusFormatError(f"{where}expected '<label> TAB <tokens>', got {line!r}")
    label_part, _, token_part = line.rstrip("\n").partition("\t")
    if label_part == "1":
        label = POSITIVE
    elif label_part == "0":
        label = NEGATIVE
    else:
        raise CorpusFormatError(f"{where}malformed label {label_part!r} (must be 0 or 1)")

    raw_tokens = token_part.split()
    if not raw_tokens:
        raise CorpusFormatError(f"{where}empty token list")

    tokens = []
    for raw in raw_tokens:
        surface, sep, tag = raw.rpartition("_")
        if not sep:
            raise CorpusFormatError(f"{where}token without underscore tag: {raw!r}")
        if tag not in LANG_TAGS:
            raise CorpusFormatError(f"{where}unknown tag {tag!r} in token {raw!r}")
        if not surface:
            raise CorpusFormatError(f"{where}empty surface in token {raw!r}")
        tokens.append(Token(surface, tag))

    if uid is None:
        uid = "0" if line_number is None else str(line_number)
    return LabeledUtterance(tuple(tokens), label, uid)


def serialize_tagged_line(utterance: LabeledUtterance) -> str:
    """Inverse of parse_tagged_line (modulo the id)."""
    body = " ".join(f"{t.surface}_{t.tag}" for t in utterance.tokens)
    return f"{utterance.label}\t{body}"


def load_corpus(source: Union[str, Path, IO[str]], task_name: str = "") -> LabeledCorpus:
    """Load a tagged-line corpus from a path or open text stream.

    Ids are assigned as 0-based ordinals over non-blank lines; blank lines
    are skipped.  An empty corpus is an error.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return load_corpus(fh, task_name)

    utterances = []
    for line_number, line in enumerate(source, start=1):
        if not line.strip():
            continue
        utterances.append(parse_tagged_line(line, line_number=line_number,
                                            uid=str(len(utterances))))
    if not utterances:
        raise CorpusFormatError("empty corpus")
    return LabeledCorpus(tuple(utterances), task_name)


def save_corpus(corpus: LabeledCorpus, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for u in corpus:
            fh.write(serialize_tagged_line(u) + "\n")


def split_train_test(corpus: LabeledCorpus, train_fraction: float,
                     seed: int) -> tuple[LabeledCorpus, LabeledCorpus]:
    """Deterministic uniform-random train/test partition.

    Train size is floor(train_fraction * N).  Not stratified.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    if len(corpus) == 0:
        raise ValueError("cannot split an empty corpus")

    order = list(range(len(corpus)))
    random.Random(seed).shuffle(order)
    n_train = int(train_fraction * len(corpus))
    train_idx = sorted(order[:n_train])
    test_idx = sorted(order[n_train:])
    return (corpus.subset(corpus[i] for i in train_idx),
            corpus.subset(corpus[i] for i in test_idx))


def kfold(corpus: LabeledCorpus, k: int,
          seed: int) -> list[tuple[LabeledCorpus, LabeledCorpus]]:
    """Deterministic k-fold split; test folds partition the corpus and
    their sizes differ by at most one."""
    n = len(corpus)
    if not 2 <= k <= n:
        raise ValueError(f"k must satisfy 2 <= k <= {n}, got {k}")

    order = list(range(n))
    random.Random(seed).shuffle(order)

    folds = []
    base, extra = divmod(n, k)
    start = 0
    for fold in range(k):
        size = base + (1 if fold < extra else 0)
        test_idx = set(order[start:start + size])
        start += size
        train = corpus.subset(corpus[i] for i in range(n) if i not in test_idx)
        test = corpus.subset(corpus[i] for i in range(n) if i in test_idx)
        folds.append((train, test))
    return folds
