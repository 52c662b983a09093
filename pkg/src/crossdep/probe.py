"""Span-selection probe over pluggable contextual embeddings.

Phrase vectors are built by attentive pooling: a learned score vector maps
each subword vector to a scalar, scores are softmaxed within the (possibly
discontinuous) span, and the weighted sum gives one vector per phrase.
Verb and noun vectors are projected to a low dimension and compared by
dot-product attention, masked so only same-sentence pairs compete;
softmaxing each verb row over the noun dimension yields a trainable
subject selection.

All gradients are written out by hand (float64 throughout) and checked
against central finite differences by :func:`grad_check`.  Training is
deterministic given the seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import AnnotatedSample
from .embeddings import EmbeddingRecord, EmbeddingStore, SENTINEL_WORD_ID
from .errors import AlignmentError, DataError, TrainingError


@dataclass
class ProbeParams:
    """Learned parameters: two pooling score vectors (D,) and two
    projections (D, k)."""

    pool_score_verb: np.ndarray
    pool_score_noun: np.ndarray
    proj_verb: np.ndarray
    proj_noun: np.ndarray
    k: int
    dropout_rate: float

    @property
    def dim(self) -> int:
        return int(self.proj_verb.shape[0])

    def copy(self) -> "ProbeParams":
        return ProbeParams(
            self.pool_score_verb.copy(),
            self.pool_score_noun.copy(),
            self.proj_verb.copy(),
            self.proj_noun.copy(),
            self.k,
            self.dropout_rate,
        )

    def arrays(self) -> dict[str, np.ndarray]:
        return {
            "pool_score_verb": self.pool_score_verb,
            "pool_score_noun": self.pool_score_noun,
            "proj_verb": self.proj_verb,
            "proj_noun": self.proj_noun,
        }

    def save(self, path) -> None:
        np.savez(
            path,
            k=self.k,
            dropout_rate=self.dropout_rate,
            **self.arrays(),
        )

    @staticmethod
    def load(path) -> "ProbeParams":
        with np.load(path) as data:
            return ProbeParams(
                pool_score_verb=data["pool_score_verb"],
                pool_score_noun=data["pool_score_noun"],
                proj_verb=data["proj_verb"],
                proj_noun=data["proj_noun"],
                k=int(data["k"]),
                dropout_rate=float(data["dropout_rate"]),
            )


@dataclass(frozen=True)
class Hyperparams:
    learning_rate: float = 1e-4
    batch_size: int = 32
    dropout: float = 0.15
    epochs: int = 80
    k: int = 64
    weight_decay: float = 0.01
    val_split: float = 0.2
    seed: int = 0


def init_probe_params(dim: int, hyper: Hyperparams) -> ProbeParams:
    # Projections break symmetry (uniform, scaled by 1/sqrt(D)); score
    # vectors start at zero so pooling begins as a plain span average.
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(hyper.seed)))
    bound = 1.0 / np.sqrt(dim)
    return ProbeParams(
        pool_score_verb=np.zeros(dim),
        pool_score_noun=np.zeros(dim),
        proj_verb=rng.uniform(-bound, bound, size=(dim, hyper.k)),
        proj_noun=rng.uniform(-bound, bound, size=(dim, hyper.k)),
        k=hyper.k,
        dropout_rate=hyper.dropout,
    )


def _softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max()
    e = np.exp(shifted)
    return e / e.sum()


def pool_spans(
    rec: EmbeddingRecord,
    masks: list[list[int]] | list[set[int]],
    score_vector: np.ndarray,
) -> list[np.ndarray]:
    """Attentive pooling: one vector per mask, weights softmaxed over
    exactly the masked positions."""
    X = np.asarray(rec.vectors, dtype=np.float64)
    out = []
    for mask in masks:
        idx = sorted(mask)
        if not idx:
            raise AlignmentError(f"{rec.sentence_id}: empty pooling mask")
        if idx[0] < 0 or idx[-1] >= X.shape[0]:
            raise AlignmentError(
                f"{rec.sentence_id}: mask {idx} out of range for {X.shape[0]} subwords"
            )
        sub = X[idx]
        weights = _softmax(sub @ np.asarray(score_vector, dtype=np.float64))
        out.append(weights @ sub)
    return out


def score_pairs(
    verbs: list[np.ndarray] | np.ndarray,
    nouns: list[np.ndarray] | np.ndarray,
    p: ProbeParams,
    sentence_mask: np.ndarray,
) -> np.ndarray:
    """Masked dot-product attention between projected verb and noun vectors.

    Returns a (n_verbs, n_nouns) matrix whose rows are softmaxed over the
    unmasked entries; masked entries are exactly zero.
    """
    V = np.atleast_2d(np.asarray(verbs, dtype=np.float64))
    U = np.atleast_2d(np.asarray(nouns, dtype=np.float64))
    mask = np.asarray(sentence_mask, dtype=bool)
    if mask.shape != (V.shape[0], U.shape[0]):
        raise DataError(
            f"sentence mask shape {mask.shape} does not match "
            f"{(V.shape[0], U.shape[0])}"
        )
    if not mask.any(axis=1).all():
        bad = int(np.flatnonzero(~mask.any(axis=1))[0])
        raise DataError(f"verb row {bad} has no unmasked noun candidates")
    logits = (V @ p.proj_verb) @ (U @ p.proj_noun).T
    return _masked_row_softmax(logits, mask)


def _masked_row_softmax(logits: np.ndarray, mask: np.ndarray) -> np.ndarray:
    masked = np.where(mask, logits, -np.inf)
    shifted = masked - masked.max(axis=1, keepdims=True)
    e = np.where(mask, np.exp(shifted), 0.0)
    return e / e.sum(axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# Prepared data and the forward/backward core


@dataclass
class PreparedSample:
    sentence_id: str
    X: np.ndarray  # (T, D) float64
    verb_masks: list[list[int]]
    noun_masks: list[list[int]]
    gold: tuple[int, ...]
    tree_id: int
    depth: int
    n_nouns: int
    verb_rules: tuple[str, ...]
    verb_scopes: tuple[str, ...]


def masks_from_spans(
    rec: EmbeddingRecord, spans: tuple[tuple[int, ...], ...]
) -> list[list[int]]:
    """Expand word-level spans to subword masks via the alignment; sentinel
    subwords never enter masks."""
    out = []
    for span in spans:
        members = set(span)
        mask = [
            t
            for t, w in enumerate(rec.word_ids)
            if w != SENTINEL_WORD_ID and w in members
        ]
        if not mask:
            raise AlignmentError(
                f"{rec.sentence_id}: span {tuple(span)} has no aligned subwords"
            )
        out.append(mask)
    return out


def prepare_samples(
    samples: list[AnnotatedSample], store: EmbeddingStore
) -> list[PreparedSample]:
    prepared = []
    for s in samples:
        if s.sentence_id not in store:
            raise DataError(f"embedding provider is missing sentence {s.sentence_id!r}")
        rec = store.get(s.sentence_id)
        rec.check(n_words=len(s.words))
        prepared.append(
            PreparedSample(
                sentence_id=s.sentence_id,
                X=np.asarray(rec.vectors, dtype=np.float64),
                verb_masks=masks_from_spans(rec, s.verb_spans),
                noun_masks=masks_from_spans(rec, s.noun_spans),
                gold=s.subject_map,
                tree_id=s.tree_id,
                depth=s.depth,
                n_nouns=s.n_nouns,
                verb_rules=s.verb_rules,
                verb_scopes=s.verb_scopes,
            )
        )
    return prepared


def _pool_forward(X: np.ndarray, masks: list[list[int]], w: np.ndarray):
    pooled = np.empty((len(masks), X.shape[1]))
    caches = []
    for i, mask in enumerate(masks):
        sub = X[mask]
        weights = _softmax(sub @ w)
        pooled[i] = weights @ sub
        caches.append((sub, weights))
    return pooled, caches


def _pool_backward(caches, d_pooled: np.ndarray, dim: int) -> np.ndarray:
    dw = np.zeros(dim)
    for (sub, weights), dp in zip(caches, d_pooled):
        d_weights = sub @ dp
        d_scores = weights * (d_weights - weights @ d_weights)
        dw += sub.T @ d_scores
    return dw


def _forward_backward(
    params: ProbeParams,
    batch: list[PreparedSample],
    rng: np.random.Generator | None = None,
    compute_grads: bool = True,
):
    """Mean cross-entropy over the batch's verb instances, its gradients,
    and per-verb probabilities.

    ``rng`` enables inverted dropout on the token vectors (training only).
    """
    Xs = []
    for s in batch:
        X = s.X
        if rng is not None and params.dropout_rate > 0.0:
            keep = 1.0 - params.dropout_rate
            X = X * (rng.random(X.shape) < keep) / keep
        Xs.append(X)

    verb_pooled, verb_caches, noun_pooled, noun_caches = [], [], [], []
    verb_owner, noun_owner = [], []
    gold_cols = []
    noun_offsets = []
    offset = 0
    for si, s in enumerate(batch):
        pv, cv = _pool_forward(Xs[si], s.verb_masks, params.pool_score_verb)
        pn, cn = _pool_forward(Xs[si], s.noun_masks, params.pool_score_noun)
        verb_pooled.append(pv)
        noun_pooled.append(pn)
        verb_caches.extend(cv)
        noun_caches.extend(cn)
        verb_owner.extend([si] * len(s.verb_masks))
        noun_owner.extend([si] * len(s.noun_masks))
        noun_offsets.append(offset)
        gold_cols.extend(offset + g for g in s.gold)
        offset += len(s.noun_masks)

    V = np.concatenate(verb_pooled, axis=0)
    U = np.concatenate(noun_pooled, axis=0)
    verb_owner = np.asarray(verb_owner)
    noun_owner = np.asarray(noun_owner)
    mask = verb_owner[:, None] == noun_owner[None, :]
    gold_cols = np.asarray(gold_cols)

    Q = V @ params.proj_verb
    N = U @ params.proj_noun
    logits = Q @ N.T
    probs = _masked_row_softmax(logits, mask)
    nv = V.shape[0]
    gold_probs = probs[np.arange(nv), gold_cols]
    loss = float(-np.log(np.maximum(gold_probs, 1e-300)).mean())

    grads = None
    if compute_grads:
        d_logits = probs.copy()
        d_logits[np.arange(nv), gold_cols] -= 1.0
        d_logits /= nv
        dQ = d_logits @ N
        dN = d_logits.T @ Q
        grads = {
            "proj_verb": V.T @ dQ,
            "proj_noun": U.T @ dN,
            "pool_score_verb": _pool_backward(
                verb_caches, dQ @ params.proj_verb.T, params.dim
            ),
            "pool_score_noun": _pool_backward(
                noun_caches, dN @ params.proj_noun.T, params.dim
            ),
        }

    return loss, grads, probs, mask, gold_cols, noun_offsets


class AdamW:
    """Adaptive-moment optimizer with decoupled weight decay."""

    def __init__(self, params: ProbeParams, lr: float, weight_decay: float,
                 betas=(0.9, 0.999), eps=1e-8):
        self.lr = lr
        self.weight_decay = weight_decay
        self.betas = betas
        self.eps = eps
        self.step_count = 0
        self.m = {k: np.zeros_like(v) for k, v in params.arrays().items()}
        self.v = {k: np.zeros_like(v) for k, v in params.arrays().items()}

    def step(self, params: ProbeParams, grads: dict[str, np.ndarray]) -> None:
        self.step_count += 1
        b1, b2 = self.betas
        for name, value in params.arrays().items():
            g = grads[name]
            self.m[name] = b1 * self.m[name] + (1 - b1) * g
            self.v[name] = b2 * self.v[name] + (1 - b2) * g * g
            m_hat = self.m[name] / (1 - b1**self.step_count)
            v_hat = self.v[name] / (1 - b2**self.step_count)
            value -= self.lr * (
                m_hat / (np.sqrt(v_hat) + self.eps) + self.weight_decay * value
            )


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    train_loss: float
    val_accuracy: float | None


def _batch_accuracy(params: ProbeParams, prepared: list[PreparedSample]) -> float | None:
    total = correct = 0
    for s in prepared:
        _, _, probs, _, gold_cols, _ = _forward_backward(
            params, [s], rng=None, compute_grads=False
        )
        pred = probs.argmax(axis=1)
        correct += int((pred == gold_cols).sum())
        total += len(gold_cols)
    return correct / total if total else None


def split_train_val(
    prepared: list[PreparedSample], val_split: float, rng: np.random.Generator
) -> tuple[list[PreparedSample], list[PreparedSample]]:
    order = rng.permutation(len(prepared))
    n_val = int(round(val_split * len(prepared)))
    val_idx = set(order[:n_val].tolist())
    train = [prepared[i] for i in range(len(prepared)) if i not in val_idx]
    val = [prepared[i] for i in sorted(val_idx)]
    return train, val


def train_probe(
    samples: list[AnnotatedSample],
    store: EmbeddingStore,
    hyper: Hyperparams,
) -> tuple[ProbeParams, list[EpochStats]]:
    """Train the probe head; the provider's vectors are never updated.

    Model selection keeps the parameters with the best validation accuracy
    over individual verb predictions (earlier epoch wins ties).  Fully
    deterministic given ``hyper.seed``.
    """
    prepared = prepare_samples(samples, store)
    if not prepared:
        raise TrainingError("empty training dataset")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(hyper.seed, spawn_key=(1,))))
    train, val = split_train_val(prepared, hyper.val_split, rng)
    if not train:
        raise TrainingError("validation split leaves no training data")

    params = init_probe_params(store.dim, hyper)
    best = params.copy()
    best_acc = -1.0
    optimizer = AdamW(params, hyper.learning_rate, hyper.weight_decay)
    history: list[EpochStats] = []

    for epoch in range(hyper.epochs):
        order = rng.permutation(len(train))
        losses = []
        for start in range(0, len(order), hyper.batch_size):
            batch = [train[i] for i in order[start : start + hyper.batch_size]]
            loss, grads, *_ = _forward_backward(params, batch, rng=rng)
            if not np.isfinite(loss):
                raise TrainingError(f"non-finite loss at epoch {epoch}, step {start}")
            optimizer.step(params, grads)
            losses.append(loss)
        val_acc = _batch_accuracy(params, val) if val else None
        history.append(EpochStats(epoch, float(np.mean(losses)), val_acc))
        if val_acc is not None and val_acc > best_acc:
            best_acc = val_acc
            best = params.copy()

    if best_acc < 0:  # no validation set (or zero epochs): keep final params
        best = params.copy()
    return best, history


def predict(
    p: ProbeParams, sample: AnnotatedSample, store: EmbeddingStore
) -> "PredictionRecord":
    """Run the probe on one sample with dropout disabled.

    Argmax ties break toward the lowest noun index; the gold index comes
    from the sample's subject map.
    """
    (prepared,) = prepare_samples([sample], store)
    _, _, probs, _, _, _ = _forward_backward(p, [prepared], rng=None, compute_grads=False)
    verbs = tuple(
        VerbPrediction(
            probs=tuple(float(x) for x in probs[i]),
            predicted=int(probs[i].argmax()),
            gold=int(sample.subject_map[i]),
            rule=sample.verb_rules[i],
            scope=sample.verb_scopes[i],
        )
        for i in range(len(sample.verb_spans))
    )
    return PredictionRecord(
        sentence_id=sample.sentence_id,
        tree_id=sample.tree_id,
        depth=sample.depth,
        n_nouns=sample.n_nouns,
        verbs=verbs,
    )


def predict_all(
    p: ProbeParams, samples: list[AnnotatedSample], store: EmbeddingStore
) -> list["PredictionRecord"]:
    return [predict(p, s, store) for s in samples]


@dataclass(frozen=True)
class VerbPrediction:
    """Probability vector over the sentence's noun occurrences plus the
    predicted (argmax) and gold indices."""

    probs: tuple[float, ...]
    predicted: int
    gold: int
    rule: str
    scope: str

    def check(self) -> None:
        total = sum(self.probs)
        if any(p < 0 for p in self.probs) or abs(total - 1.0) > 1e-6:
            raise DataError(f"probability vector sums to {total}, not 1")


@dataclass(frozen=True)
class PredictionRecord:
    sentence_id: str
    tree_id: int
    depth: int
    n_nouns: int
    verbs: tuple[VerbPrediction, ...]


def grad_check(
    p: ProbeParams,
    samples: list[AnnotatedSample],
    store: EmbeddingStore,
    epsilon: float = 1e-4,
) -> float:
    """Max relative error between analytic gradients and central finite
    differences, over every scalar parameter.  Dropout is disabled."""
    prepared = prepare_samples(samples, store)

    def loss_at(q: ProbeParams) -> float:
        loss, *_ = _forward_backward(q, prepared, rng=None, compute_grads=False)
        return loss

    _, grads, *_ = _forward_backward(p, prepared, rng=None, compute_grads=True)
    worst = 0.0
    for name, arr in p.arrays().items():
        flat = arr.reshape(-1)
        analytic = grads[name].reshape(-1)
        numeric = np.empty_like(analytic)
        for i in range(flat.size):
            keep = flat[i]
            flat[i] = keep + epsilon
            up = loss_at(p)
            flat[i] = keep - epsilon
            down = loss_at(p)
            flat[i] = keep
            numeric[i] = (up - down) / (2 * epsilon)
        diff = float(np.linalg.norm(analytic - numeric))
        scale = max(float(np.linalg.norm(analytic)), float(np.linalg.norm(numeric)))
        # Per-field relative error; absolute when the field's gradient
        # vanishes (zero learning signal).
        worst = max(worst, diff / scale if scale >= 1e-9 else diff)
    return worst


def gradient_norm(
    p: ProbeParams, samples: list[AnnotatedSample], store: EmbeddingStore
) -> float:
    prepared = prepare_samples(samples, store)
    _, grads, *_ = _forward_backward(p, prepared, rng=None, compute_grads=True)
    return float(np.sqrt(sum(float((g * g).sum()) for g in grads.values())))
