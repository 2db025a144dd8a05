"""Logistic classifier over sparse feature vectors, macro-F1 evaluation,
cross-validation with per-fold feature fitting, and confidence-based
negative sub-sampling.

Training is full-batch gradient descent on the mean binary cross-entropy
with an L2 penalty on the weights (bias unpenalized), initialized at zero
so results are exactly reproducible.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from codeswitch.corpus import LabeledCorpus, LabeledUtterance, POSITIVE, kfold
from codeswitch.textfeat import (
    DEFAULT_N_VALUES,
    DEFAULT_NEGATION_WORDS,
    IndicativeLexicon,
    SparseVector,
    Vocabulary,
    build_vocabulary,
    chi2_select,
    indicative_scores,
    vector_dim,
    vectorize,
)

MODEL_FORMAT_VERSION = 1
MODEL_MAGIC = "codeswitch-linear-model"


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 300
    learning_rate: float = 0.1
    l2: float = 1e-3
    seed: int = 13


@dataclass(frozen=True)
class LinearModel:
    weights: np.ndarray
    bias: float
    training_meta: TrainConfig

    @property
    def dim(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class EvalReport:
    macro_f1: float
    per_class_f1: tuple[float, float]  # (positive-class F1, negative-class F1)
    confusion: tuple[int, int, int, int]  # (tp, fp, fn, tn) w.r.t. positive
    degenerate_classes: tuple[int, ...] = ()


def to_dense(vectors: Sequence[SparseVector]) -> np.ndarray:
    if not vectors:
        raise ValueError("no vectors given")
    dim = vectors[0].dim
    if any(v.dim != dim for v in vectors):
        raise ValueError("inconsistent vector dimensions")
    X = np.zeros((len(vectors), dim))
    for row, vec in enumerate(vectors):
        for i, v in vec.entries:
            X[row, i] = v
    return X


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def loss_and_grad(weights: np.ndarray, bias: float, X: np.ndarray,
                  y: np.ndarray, l2: float) -> tuple[float, np.ndarray, float]:
    """Mean binary cross-entropy plus (l2/2)||w||^2, with its gradient."""
    z = X @ weights + bias
    # -log p(y|z) = logaddexp(0, z) - y*z, stable for large |z|
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z)) \
        + 0.5 * l2 * float(weights @ weights)
    residual = sigmoid(z) - y
    grad_w = X.T @ residual / len(y) + l2 * weights
    grad_b = float(np.mean(residual))
    return loss, grad_w, grad_b


def train(vectors: Sequence[SparseVector], labels: Sequence[int],
          hyper: TrainConfig = TrainConfig()) -> LinearModel:
    """Fit logistic regression by full-batch gradient descent.

    Deterministic (zero initialization); raises on single-class input or
    inconsistent dimensions.
    """
    if len(vectors) != len(labels):
        raise ValueError("vectors and labels must have equal length")
    y = np.asarray(labels, dtype=np.float64)
    if not (np.any(y == 1) and np.any(y == 0)):
        raise ValueError("training data must contain both classes")
    X = to_dense(vectors)

    w = np.zeros(X.shape[1])
    b = 0.0
    prev_loss = np.inf
    for _ in range(hyper.epochs):
        loss, grad_w, grad_b = loss_and_grad(w, b, X, y, hyper.l2)
        if loss > prev_loss + 1e-9:
            warnings.warn("training loss increased; consider a lower learning rate")
        prev_loss = loss
        w = w - hyper.learning_rate * grad_w
        b = b - hyper.learning_rate * grad_b
    return LinearModel(w, b, hyper)


def decision_score(model: LinearModel, x: SparseVector) -> float:
    if x.dim != model.dim:
        raise ValueError(f"vector dim {x.dim} != model dim {model.dim}")
    return float(sum(model.weights[i] * v for i, v in x.entries) + model.bias)


def predict_proba(model: LinearModel, x: SparseVector) -> float:
    """Probability of the positive class: sigmoid of the linear score."""
    return float(sigmoid(decision_score(model, x)))


def predict(model: LinearModel, x: SparseVector) -> int:
    return 1 if predict_proba(model, x) >= 0.5 else 0


def _f1(tp: int, fp: int, fn: int) -> float:
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom > 0 else 0.0


def macro_f1(predictions: Sequence[int], gold: Sequence[int]) -> EvalReport:
    """Unweighted mean of per-class F1 scores.

    A class with zero predicted and zero actual instances contributes
    F1 = 0 and is flagged in degenerate_classes.
    """
    if len(predictions) != len(gold):
        raise ValueError("predictions and gold must have equal length")
    if not predictions:
        raise ValueError("empty prediction sequence")

    tp = sum(1 for p, g in zip(predictions, gold) if p == 1 and g == 1)
    fp = sum(1 for p, g in zip(predictions, gold) if p == 1 and g == 0)
    fn = sum(1 for p, g in zip(predictions, gold) if p == 0 and g == 1)
    tn = sum(1 for p, g in zip(predictions, gold) if p == 0 and g == 0)

    f1_pos = _f1(tp, fp, fn)
    f1_neg = _f1(tn, fn, fp)
    degenerate = tuple(cls for cls, (predicted, actual)
                       in ((1, (tp + fp, tp + fn)), (0, (tn + fn, tn + fp)))
                       if predicted == 0 and actual == 0)
    return EvalReport(
        macro_f1=(f1_pos + f1_neg) / 2,
        per_class_f1=(f1_pos, f1_neg),
        confusion=(tp, fp, fn, tn),
        degenerate_classes=degenerate,
    )


def subsample_negatives(corpus: LabeledCorpus,
                        scorer: Callable[[LabeledUtterance], float],
                        tau: float = 0.001) -> LabeledCorpus:
    """Drop negatives the scorer finds easy (probability < tau).

    All positives are kept; order is preserved; idempotent for a fixed
    scorer.
    """
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must be in (0, 1), got {tau}")
    kept = [u for u in corpus
            if u.label == POSITIVE or scorer(u) >= tau]
    return corpus.subset(kept)


# --------------------------------------------------------------------
# End-to-end pipeline: feature fitting + training + evaluation
# --------------------------------------------------------------------

@dataclass(frozen=True)
class PipelineConfig:
    kinds: frozenset[str] = frozenset({"bow"})
    n_values: Mapping[str, tuple[int, ...]] = field(
        default_factory=lambda: dict(DEFAULT_N_VALUES))
    min_count: int = 1
    chi2_k: int | None = 500
    use_indicative: bool = True
    lexicon_floor: float = 0.0
    negation_words: frozenset[str] = DEFAULT_NEGATION_WORDS
    with_switching: bool = False
    train_config: TrainConfig = TrainConfig()


@dataclass(frozen=True)
class FittedPipeline:
    config: PipelineConfig
    vocab: Vocabulary
    lexicons: tuple[IndicativeLexicon, ...]
    model: LinearModel

    def vectorize(self, utterance: LabeledUtterance) -> SparseVector:
        return vectorize(utterance, self.vocab, self.lexicons,
                         self.config.negation_words,
                         self.config.with_switching)

    def predict_proba(self, utterance: LabeledUtterance) -> float:
        return predict_proba(self.model, self.vectorize(utterance))

    def predict(self, utterance: LabeledUtterance) -> int:
        return 1 if self.predict_proba(utterance) >= 0.5 else 0


def fit_pipeline(train_corpus: LabeledCorpus, cfg: PipelineConfig) -> FittedPipeline:
    """Fit vocabulary, chi-squared selection and lexicon on the training
    corpus only, then train the classifier."""
    vocab = build_vocabulary(train_corpus, cfg.kinds, cfg.n_values, cfg.min_count)
    if cfg.chi2_k is not None:
        vocab = chi2_select(train_corpus, vocab, cfg.chi2_k)
    lexicons: tuple[IndicativeLexicon, ...] = ()
    if cfg.use_indicative:
        lexicons = (indicative_scores(train_corpus, cfg.lexicon_floor,
                                      train_corpus.task_name),)
    vectors = [vectorize(u, vocab, lexicons, cfg.negation_words,
                         cfg.with_switching) for u in train_corpus]
    model = train(vectors, [u.label for u in train_corpus], cfg.train_config)
    return FittedPipeline(cfg, vocab, lexicons, model)


def evaluate(pipeline: FittedPipeline, test_corpus: LabeledCorpus) -> EvalReport:
    predictions = [pipeline.predict(u) for u in test_corpus]
    return macro_f1(predictions, [u.label for u in test_corpus])


@dataclass(frozen=True)
class CVResult:
    reports: tuple[EvalReport, ...]
    mean_macro_f1: float
    skipped_folds: tuple[int, ...]


def cross_validate(corpus: LabeledCorpus, cfg: PipelineConfig,
                   k: int = 10, seed: int = 13) -> CVResult:
    """k-fold cross-validation with all feature fitting on train folds.

    Folds whose train or test part contains a single class are skipped
    with a warning and excluded from the aggregate.
    """
    reports: list[EvalReport] = []
    skipped: list[int] = []
    for fold_index, (train_part, test_part) in enumerate(kfold(corpus, k, seed)):
        def single_class(part):
            labels = {u.label for u in part}
            return len(labels) < 2
        if single_class(train_part) or single_class(test_part):
            warnings.warn(f"fold {fold_index} has a single class; excluded")
            skipped.append(fold_index)
            continue
        pipeline = fit_pipeline(train_part, cfg)
        reports.append(evaluate(pipeline, test_part))
    if not reports:
        raise ValueError("every fold was degenerate; cannot aggregate")
    mean = sum(r.macro_f1 for r in reports) / len(reports)
    return CVResult(tuple(reports), mean, tuple(skipped))


# --------------------------------------------------------------------
# Model persistence: versioned flat text file
# --------------------------------------------------------------------

def save_model(model: LinearModel, path: Union[str, Path]) -> None:
    """Header (magic + version, dim, hyperparameters), then bias, then one
    weight per line, all as decimal text."""
    meta = model.training_meta
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{MODEL_MAGIC} v{MODEL_FORMAT_VERSION}\n")
        fh.write(f"dim {model.dim}\n")
        fh.write(f"epochs {meta.epochs} learning_rate {meta.learning_rate!r} "
                 f"l2 {meta.l2!r} seed {meta.seed}\n")
        fh.write(f"{model.bias!r}\n")
        for w in model.weights:
            fh.write(f"{float(w)!r}\n")


def load_model(path: Union[str, Path],
               expected_dim: int | None = None) -> LinearModel:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith(MODEL_MAGIC):
        raise ValueError(f"not a model file: {path}")
    version = lines[0].split()[-1]
    if version != f"v{MODEL_FORMAT_VERSION}":
        raise ValueError(f"unsupported model format version {version}")
    dim = int(lines[1].split()[1])
    if expected_dim is not None and dim != expected_dim:
        raise ValueError(f"model dim {dim} does not match expected {expected_dim}")
    h = lines[2].split()
    meta = TrainConfig(epochs=int(h[1]), learning_rate=float(h[3]),
                       l2=float(h[5]), seed=int(h[7]))
    bias = float(lines[3])
    weights = np.array([float(x) for x in lines[4:4 + dim]])
    if weights.shape[0] != dim:
        raise ValueError("model file truncated")
    return LinearModel(weights, bias, meta)
