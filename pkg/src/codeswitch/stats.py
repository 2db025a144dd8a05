"""Label/switching correlation statistics over a labeled corpus.

Builds the 2x2 contingency table of (label, embedding property) and
reports conditional positive rates, class-conditional average switching
(mean total switches V), and the phi coefficient, i.e. the Pearson
correlation of the two binary indicators.  Rates whose conditioning cell
is empty are reported as None rather than 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from codeswitch.corpus import LabeledCorpus, POSITIVE
from codeswitch.switching import has_embedding_property, switch_counts


@dataclass(frozen=True)
class ContingencyTable:
    """Counts over label x Q: n11 = positive & Q ... n00 = negative & ~Q."""

    n11: int
    n10: int
    n01: int
    n00: int

    @property
    def total(self) -> int:
        return self.n11 + self.n10 + self.n01 + self.n00


@dataclass(frozen=True)
class SwitchTaskSummary:
    task_name: str
    p_pos_given_q: float | None
    p_pos_given_not_q: float | None
    avg_switch_pos: float | None
    avg_switch_neg: float | None
    phi: float | None
    counts: ContingencyTable


def contingency(corpus: LabeledCorpus) -> ContingencyTable:
    n11 = n10 = n01 = n00 = 0
    for u in corpus:
        q = has_embedding_property(u.tokens)
        if u.label == POSITIVE:
            if q:
                n11 += 1
            else:
                n10 += 1
        else:
            if q:
                n01 += 1
            else:
                n00 += 1
    return ContingencyTable(n11, n10, n01, n00)


def conditional_positive_rates(corpus: LabeledCorpus) -> tuple[float | None, float | None]:
    """(p(positive | Q), p(positive | ~Q)); None when a cell is empty."""
    t = contingency(corpus)
    p_q = t.n11 / (t.n11 + t.n01) if (t.n11 + t.n01) > 0 else None
    p_not_q = t.n10 / (t.n10 + t.n00) if (t.n10 + t.n00) > 0 else None
    return p_q, p_not_q


def average_switching(corpus: LabeledCorpus) -> tuple[float | None, float | None]:
    """Mean total switches V over positives and over negatives."""
    pos = [switch_counts(u.tokens)[2] for u in corpus if u.label == POSITIVE]
    neg = [switch_counts(u.tokens)[2] for u in corpus if u.label != POSITIVE]
    avg_pos = sum(pos) / len(pos) if pos else None
    avg_neg = sum(neg) / len(neg) if neg else None
    return avg_pos, avg_neg


def phi_from_table(t: ContingencyTable) -> float | None:
    denom = ((t.n11 + t.n10) * (t.n01 + t.n00) * (t.n11 + t.n01) * (t.n10 + t.n00))
    if denom == 0:
        return None
    return (t.n11 * t.n00 - t.n10 * t.n01) / math.sqrt(denom)


def phi_correlation(corpus: LabeledCorpus) -> float | None:
    """Pearson correlation between the binary label and the embedding
    property, via the closed-form 2x2 expression.  None when a marginal
    is zero (correlation undefined)."""
    return phi_from_table(contingency(corpus))


def summarize(corpus: LabeledCorpus) -> SwitchTaskSummary:
    t = contingency(corpus)
    p_q, p_not_q = conditional_positive_rates(corpus)
    avg_pos, avg_neg = average_switching(corpus)
    return SwitchTaskSummary(
        task_name=corpus.task_name,
        p_pos_given_q=p_q,
        p_pos_given_not_q=p_not_q,
        avg_switch_pos=avg_pos,
        avg_switch_neg=avg_neg,
        phi=phi_from_table(t),
        counts=t,
    )
