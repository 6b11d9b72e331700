"""Two-view co-training with confidence pools and human conflict review.

Round structure: both classifiers score the unlabeled pool; the top-k ids
above the confidence threshold tau form positive/negative pools per view.
Ids confidently agreed on are auto-labeled, confident disagreements go to a
human review queue, ids confident under only one view wait, and everything
else stays unlabeled. After the labeled set grows, both classifiers refit.
The loop stops on pool depletion, a validation plateau, or a round cap;
whatever is still unlabeled then is discarded, never labeled.

All of it is deterministic given (config.seed, the resolver's answers).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

from .corpus import LabelSet
from .features import ViewPair
from .learners import (EvalReport, ForestModel, ForestParams, LogRegModel,
                       evaluate, fit_forest, fit_logreg,
                       predict_proba_forest, predict_proba_logreg)

__all__ = [
    "CoTrainConfig", "CoTrainState", "ReviewItem", "RoundReport",
    "ResolverError", "init_state", "select_pools", "commit_round",
    "resolve_review", "should_stop", "run",
    "save_checkpoint", "load_checkpoint", "write_audit_log",
]

POSITIVE, NEGATIVE = "high", "low"


class CoTrainError(ValueError):
    pass


class ResolverError(RuntimeError):
    """Raised when a review resolver fails; carries the checkpoint path if saved."""

    def __init__(self, message: str, checkpoint_path: Optional[str] = None):
        super().__init__(message)
        self.checkpoint_path = checkpoint_path


@dataclass
class CoTrainConfig:
    target: str = "MED"              # which axis this engine instance labels
    k_pos: int = 10
    k_neg: int = 10
    tau: float = 0.9
    epsilon: float = 0.002           # minimum validation macro-F1 gain per round
    patience: int = 3                # rounds of sub-epsilon gain before stopping
    max_rounds: int = 50
    seed: int = 0
    logreg_l2: float = 1e-2
    logreg_tol: float = 1e-6
    logreg_max_iter: int = 100
    n_trees: int = 25
    max_depth: int = 8
    min_leaf: int = 2
    mtry: Optional[int] = None

    def __post_init__(self):
        if self.target not in ("MED", "UND"):
            raise CoTrainError("target must be MED or UND")
        if self.k_pos < 1 or self.k_neg < 1:
            raise CoTrainError("pool sizes must be >= 1")
        if not 0.5 < self.tau < 1.0:
            raise CoTrainError("tau must be in (0.5, 1)")
        if self.epsilon < 0:
            raise CoTrainError("epsilon must be >= 0")
        if self.patience < 1:
            raise CoTrainError("patience must be >= 1")

    def forest_params(self) -> ForestParams:
        return ForestParams(n_trees=self.n_trees, max_depth=self.max_depth,
                            mtry=self.mtry, min_leaf=self.min_leaf, seed=self.seed)

    def to_json_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}

    @classmethod
    def from_json_dict(cls, d: dict) -> "CoTrainConfig":
        return cls(**d)


@dataclass
class ReviewItem:
    video_id: str
    dimension: str
    f1_proba: float
    f2_proba: float
    created_round: int
    status: str = "pending"                 # pending | resolved
    resolved_label: Optional[str] = None
    resolver: Optional[str] = None
    revision: int = 0

    def to_json_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}

    @classmethod
    def from_json_dict(cls, d: dict) -> "ReviewItem":
        return cls(**d)


@dataclass
class RoundEntry:
    video_id: str
    disposition: str        # auto_high | auto_low | review | single_pool_wait | low_confidence
    f1_proba: float
    f2_proba: float


@dataclass
class RoundReport:
    round: int
    entries: list[RoundEntry]
    n_auto_high: int
    n_auto_low: int
    n_review: int
    n_waiting: int
    n_low_confidence: int


@dataclass
class CoTrainState:
    config: CoTrainConfig
    views: dict[str, ViewPair]
    labeled: dict[str, str]                       # id -> high|low
    label_meta: dict[str, tuple[str, Optional[int]]]  # id -> (source, round)
    unlabeled: set[str]
    f1: Optional[LogRegModel] = None
    f2: Optional[ForestModel] = None
    round: int = 0
    pools: Optional[tuple[tuple[str, ...], tuple[str, ...],
                          tuple[str, ...], tuple[str, ...]]] = None
    pool_probas: dict[str, tuple[float, float]] = field(default_factory=dict)
    review_queue: list[ReviewItem] = field(default_factory=list)
    history: list[EvalReport] = field(default_factory=list)
    discarded: set[str] = field(default_factory=set)
    validation: list[tuple[ViewPair, str]] = field(default_factory=list)
    needs_refit: bool = False        # review resolutions since the last refit

    def pending_items(self) -> list[ReviewItem]:
        items = [it for it in self.review_queue if it.status == "pending"]
        return sorted(items, key=lambda it: (it.created_round, it.video_id))

    def find_item(self, video_id: str) -> Optional[ReviewItem]:
        for it in self.review_queue:
            if it.video_id == video_id:
                return it
        return None

    def all_ids(self) -> set[str]:
        return (set(self.labeled) | self.unlabeled | self.discarded
                | {it.video_id for it in self.review_queue if it.status == "pending"})

    def check_partition(self) -> None:
        """L, U, pending review, and discarded must partition the id universe."""
        pending = {it.video_id for it in self.review_queue if it.status == "pending"}
        groups = [set(self.labeled), self.unlabeled, pending, self.discarded]
        total = sum(len(g) for g in groups)
        union = set().union(*groups)
        if total != len(union):
            raise CoTrainError("L/U/pending/discarded sets overlap")
        if union != set(self.views):
            raise CoTrainError("L/U/pending/discarded do not cover the corpus ids")


def _proba_pair(state: CoTrainState, vid: str) -> tuple[float, float]:
    vp = state.views[vid]
    return (predict_proba_logreg(state.f1, vp.metadata_view),
            predict_proba_forest(state.f2, vp.content_view))


def _combined_scores(state: CoTrainState,
                     pairs: Sequence[tuple[ViewPair, str]]) -> tuple[list[float], list[int]]:
    scores, labels = [], []
    for vp, label in pairs:
        p1 = predict_proba_logreg(state.f1, vp.metadata_view)
        p2 = predict_proba_forest(state.f2, vp.content_view)
        scores.append((p1 + p2) / 2.0)
        labels.append(1 if label == POSITIVE else 0)
    return scores, labels


def _refit(state: CoTrainState) -> None:
    ids = sorted(state.labeled)
    meta = [state.views[i].metadata_view for i in ids]
    content = [state.views[i].content_view for i in ids]
    y = [1 if state.labeled[i] == POSITIVE else 0 for i in ids]
    cfg = state.config
    state.f1 = fit_logreg(meta, y, l2_lambda=cfg.logreg_l2,
                          tol=cfg.logreg_tol, max_iter=cfg.logreg_max_iter)
    state.f2 = fit_forest(content, y, params=cfg.forest_params())


def _record_validation(state: CoTrainState) -> None:
    if not state.validation:
        return
    scores, labels = _combined_scores(state, state.validation)
    state.history.append(evaluate(scores, labels))


def init_state(labeled: Sequence[tuple[ViewPair, str]],
               unlabeled: Sequence[ViewPair],
               config: CoTrainConfig,
               validation: Sequence[tuple[ViewPair, str]] = (),
               ) -> CoTrainState:
    """Train both view classifiers on the seed labels and set round 0.

    ``validation`` is an optional held-out set; when present, each round
    (including round 0) records the combined classifier's metrics, which
    drives the plateau stopping rule.
    """
    if not labeled:
        raise CoTrainError("need seed labels")
    seen_labels = {lab for _, lab in labeled}
    if seen_labels - {POSITIVE, NEGATIVE}:
        raise CoTrainError(f"labels must be high/low, got {seen_labels}")
    if len(seen_labels) < 2:
        raise CoTrainError("degenerate seed labels: need both classes")
    views: dict[str, ViewPair] = {}
    for vp, _ in labeled:
        if vp.video_id in views:
            raise CoTrainError(f"duplicate id: {vp.video_id}")
        views[vp.video_id] = vp
    for vp in unlabeled:
        if vp.video_id in views:
            raise CoTrainError(f"duplicate id: {vp.video_id}")
        views[vp.video_id] = vp

    state = CoTrainState(
        config=config,
        views=views,
        labeled={vp.video_id: lab for vp, lab in labeled},
        label_meta={vp.video_id: ("human", None) for vp, _ in labeled},
        unlabeled={vp.video_id for vp in unlabeled},
        validation=list(validation),
    )
    _refit(state)
    _record_validation(state)
    state.check_partition()
    return state


def select_pools(state: CoTrainState) -> tuple[tuple[str, ...], tuple[str, ...],
                                               tuple[str, ...], tuple[str, ...]]:
    """Pick each view's top-k confident positive and negative candidate ids.

    A candidate enters a positive pool when its positive probability is at
    least tau, a negative pool when it is at most 1-tau; within a pool, ids
    rank by confidence with video_id as the deterministic tie-break. Pools
    may come back empty.
    """
    if state.f1 is None or state.f2 is None:
        raise CoTrainError("classifiers not trained")
    cfg = state.config
    ids = sorted(state.unlabeled)
    probas = {vid: _proba_pair(state, vid) for vid in ids}

    def top(by: Callable[[str], float], threshold_ok: Callable[[str], bool],
            k: int) -> tuple[str, ...]:
        eligible = [vid for vid in ids if threshold_ok(vid)]
        eligible.sort(key=lambda vid: (-by(vid), vid))
        return tuple(eligible[:k])

    p1 = top(lambda v: probas[v][0], lambda v: probas[v][0] >= cfg.tau, cfg.k_pos)
    n1 = top(lambda v: 1 - probas[v][0], lambda v: probas[v][0] <= 1 - cfg.tau, cfg.k_neg)
    p2 = top(lambda v: probas[v][1], lambda v: probas[v][1] >= cfg.tau, cfg.k_pos)
    n2 = top(lambda v: 1 - probas[v][1], lambda v: probas[v][1] <= 1 - cfg.tau, cfg.k_neg)

    state.pools = (p1, n1, p2, n2)
    state.pool_probas = probas
    return state.pools


def commit_round(state: CoTrainState) -> tuple[CoTrainState, RoundReport]:
    """Apply the selected pools: auto-label agreements, queue conflicts, refit.

    Ids in both positive pools (or both negative pools) move to L with an
    auto label; ids confidently positive under one view and negative under
    the other leave U for the review queue; ids in exactly one pool wait in
    U for a later round.
    """
    if state.pools is None:
        raise CoTrainError("select_pools must run before commit_round")
    p1, n1, p2, n2 = (set(s) for s in state.pools)
    new_round = state.round + 1

    auto_pos = p1 & p2
    auto_neg = n1 & n2
    conflicts = (p1 & n2) | (n1 & p2)
    in_any = p1 | n1 | p2 | n2
    waiting = in_any - auto_pos - auto_neg - conflicts

    entries = []
    for vid in sorted(state.unlabeled):
        f1p, f2p = state.pool_probas[vid]
        if vid in auto_pos:
            disposition = "auto_high"
        elif vid in auto_neg:
            disposition = "auto_low"
        elif vid in conflicts:
            disposition = "review"
        elif vid in waiting:
            disposition = "single_pool_wait"
        else:
            disposition = "low_confidence"
        entries.append(RoundEntry(vid, disposition, f1p, f2p))

    for vid in sorted(auto_pos):
        state.labeled[vid] = POSITIVE
        state.label_meta[vid] = ("auto_cotrain", new_round)
        state.unlabeled.discard(vid)
    for vid in sorted(auto_neg):
        state.labeled[vid] = NEGATIVE
        state.label_meta[vid] = ("auto_cotrain", new_round)
        state.unlabeled.discard(vid)
    for vid in sorted(conflicts):
        f1p, f2p = state.pool_probas[vid]
        state.review_queue.append(ReviewItem(
            video_id=vid, dimension=state.config.target,
            f1_proba=f1p, f2_proba=f2p, created_round=new_round))
        state.unlabeled.discard(vid)

    if auto_pos or auto_neg or state.needs_refit:
        _refit(state)
        state.needs_refit = False
    state.round = new_round
    _record_validation(state)
    state.pools = None
    state.pool_probas = {}
    state.check_partition()

    report = RoundReport(
        round=new_round, entries=entries,
        n_auto_high=len(auto_pos), n_auto_low=len(auto_neg),
        n_review=len(conflicts), n_waiting=len(waiting),
        n_low_confidence=len(entries) - len(in_any),
    )
    return state, report


def resolve_review(state: CoTrainState, video_id: str, label: str,
                   resolver: str) -> CoTrainState:
    """Apply a human decision to a queued conflict; idempotent per item.

    Re-resolving with the same label is a no-op; a different label is an
    error, never a silent overwrite.
    """
    if label not in (POSITIVE, NEGATIVE):
        raise CoTrainError(f"label must be high/low, got {label!r}")
    item = state.find_item(video_id)
    if item is None:
        raise CoTrainError(f"no review item for video_id {video_id!r}")
    if item.status == "resolved":
        if item.resolved_label != label:
            raise CoTrainError(
                f"conflicting resolution for {video_id}: "
                f"already {item.resolved_label}, got {label}")
        return state
    item.status = "resolved"
    item.resolved_label = label
    item.resolver = resolver
    item.revision += 1
    state.labeled[video_id] = label
    state.label_meta[video_id] = ("human", item.created_round)
    state.needs_refit = True
    state.check_partition()
    return state


def should_stop(state: CoTrainState) -> tuple[bool, str]:
    """Stopping test; the reason names every rule that fired."""
    reasons = []
    pending = state.pending_items()
    if not state.unlabeled and not pending:
        reasons.append("depleted")
    cfg = state.config
    if len(state.history) >= cfg.patience + 1:
        recent = [r.macro_f1() for r in state.history[-(cfg.patience + 1):]]
        gains = [b - a for a, b in zip(recent, recent[1:])]
        if all(g < cfg.epsilon for g in gains):
            reasons.append("plateau")
    if state.round >= cfg.max_rounds:
        reasons.append("max_rounds")
    return (bool(reasons), ",".join(reasons))


def run(state: CoTrainState,
        resolver: Callable[[ReviewItem], str],
        resolver_name: str = "resolver",
        checkpoint_dir: Optional[str] = None,
        audit_path: Optional[str] = None,
        ) -> tuple[list[LabelSet], list[EvalReport], list[RoundReport]]:
    """Drive rounds until a stop rule fires, draining the queue each round.

    With a checkpoint directory, every committed round snapshots the full
    state, and a resolver exception checkpoints before raising ResolverError
    (which carries the path), so an interactive session can resume. Ids
    still unlabeled at the stop are discarded and reported, never labeled.
    """

    def checkpoint() -> Optional[str]:
        if checkpoint_dir is None:
            return None
        path = str(Path(checkpoint_dir) /
                   f"cotrain-{state.config.target}-r{state.round}.json")
        save_checkpoint(state, path)
        return path

    reports: list[RoundReport] = []
    audit_fh = open(audit_path, "a", encoding="utf-8") if audit_path else None
    try:
        while True:
            # drain the queue first so resumed checkpoints pick up where
            # the interrupted session left off
            for item in state.pending_items():
                try:
                    label = resolver(item)
                except Exception as e:
                    raise ResolverError(
                        f"resolver failed on {item.video_id}: {e}",
                        checkpoint_path=checkpoint()) from e
                resolve_review(state, item.video_id, label, resolver_name)
            stop, _reason = should_stop(state)
            if stop:
                break
            select_pools(state)
            state, report = commit_round(state)
            reports.append(report)
            checkpoint()
            if audit_fh is not None:
                _write_audit_lines(audit_fh, report)
    finally:
        if audit_fh is not None:
            audit_fh.close()

    state.discarded |= state.unlabeled
    state.unlabeled = set()
    state.check_partition()
    return final_labels(state), state.history, reports


def final_labels(state: CoTrainState) -> list[LabelSet]:
    """LabelSets for every labeled id on this engine's target dimension."""
    out = []
    dim_field = "med" if state.config.target == "MED" else "und"
    for vid in sorted(state.labeled):
        source, rnd = state.label_meta[vid]
        out.append(LabelSet(video_id=vid, source=source, round=rnd,
                            **{dim_field: state.labeled[vid]}))
    return out


def _write_audit_lines(fh, report: RoundReport) -> None:
    for e in report.entries:
        fh.write(json.dumps({
            "video_id": e.video_id, "round": report.round,
            "disposition": e.disposition,
            "f1_proba": e.f1_proba, "f2_proba": e.f2_proba,
        }, sort_keys=True) + "\n")


def write_audit_log(path, reports: Sequence[RoundReport]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for report in reports:
            _write_audit_lines(fh, report)


# ---------------------------------------------------------------------------
# checkpointing: full-state snapshot, resumable and replayable


def state_to_json_dict(state: CoTrainState) -> dict:
    return {
        "format": "vidcurate-cotrain-checkpoint v1",
        "config": state.config.to_json_dict(),
        "round": state.round,
        "labeled": {vid: {"label": lab,
                          "source": state.label_meta[vid][0],
                          "round": state.label_meta[vid][1]}
                    for vid, lab in sorted(state.labeled.items())},
        "unlabeled": sorted(state.unlabeled),
        "discarded": sorted(state.discarded),
        "review_queue": [it.to_json_dict() for it in state.review_queue],
        "history": [r.to_json_dict() for r in state.history],
        "views": {vid: vp.to_json_dict() for vid, vp in sorted(state.views.items())},
        "validation": [[vp.to_json_dict(), lab] for vp, lab in state.validation],
        "needs_refit": state.needs_refit,
        "f1": _serialize_logreg(state.f1),
        "f2": _serialize_forest(state.f2),
    }


def _serialize_logreg(model: Optional[LogRegModel]) -> Optional[dict]:
    if model is None:
        return None
    return {"weights": [float(w).hex() for w in model.weights],
            "bias": model.bias.hex(), "l2_lambda": model.l2_lambda.hex(),
            "converged": model.converged, "n_iter": model.n_iter}


def _deserialize_logreg(d: Optional[dict]) -> Optional[LogRegModel]:
    if d is None:
        return None
    return LogRegModel(weights=[float.fromhex(w) for w in d["weights"]],
                       bias=float.fromhex(d["bias"]),
                       l2_lambda=float.fromhex(d["l2_lambda"]),
                       converged=d["converged"], n_iter=d["n_iter"])


def _node_to_list(node) -> list:
    if node.is_leaf:
        return ["leaf", node.proba[0].hex(), node.proba[1].hex()]
    return ["node", node.feature, node.threshold.hex(),
            _node_to_list(node.left), _node_to_list(node.right)]


def _node_from_list(lst):
    from .learners.forest import TreeNode
    if lst[0] == "leaf":
        return TreeNode(proba=(float.fromhex(lst[1]), float.fromhex(lst[2])))
    return TreeNode(feature=lst[1], threshold=float.fromhex(lst[2]),
                    left=_node_from_list(lst[3]), right=_node_from_list(lst[4]))


def _serialize_forest(model: Optional[ForestModel]) -> Optional[dict]:
    if model is None:
        return None
    p = model.params
    return {"dimension": model.dimension,
            "params": {"n_trees": p.n_trees, "max_depth": p.max_depth,
                       "mtry": p.mtry, "min_leaf": p.min_leaf, "seed": p.seed},
            "trees": [_node_to_list(t) for t in model.trees]}


def _deserialize_forest(d: Optional[dict]) -> Optional[ForestModel]:
    if d is None:
        return None
    return ForestModel(trees=[_node_from_list(t) for t in d["trees"]],
                       params=ForestParams(**d["params"]),
                       dimension=d["dimension"])


def state_from_json_dict(d: dict) -> CoTrainState:
    if d.get("format") != "vidcurate-cotrain-checkpoint v1":
        raise CoTrainError("not a vidcurate co-training checkpoint")
    state = CoTrainState(
        config=CoTrainConfig.from_json_dict(d["config"]),
        views={vid: ViewPair.from_json_dict(v) for vid, v in d["views"].items()},
        labeled={vid: entry["label"] for vid, entry in d["labeled"].items()},
        label_meta={vid: (entry["source"], entry["round"])
                    for vid, entry in d["labeled"].items()},
        unlabeled=set(d["unlabeled"]),
        discarded=set(d["discarded"]),
        review_queue=[ReviewItem.from_json_dict(it) for it in d["review_queue"]],
        history=[EvalReport.from_json_dict(r) for r in d["history"]],
        validation=[(ViewPair.from_json_dict(v), lab) for v, lab in d["validation"]],
        round=d["round"],
        needs_refit=d.get("needs_refit", False),
    )
    state.f1 = _deserialize_logreg(d["f1"])
    state.f2 = _deserialize_forest(d["f2"])
    state.check_partition()
    return state


def save_checkpoint(state: CoTrainState, path) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", encoding="utf-8") as fh:
        json.dump(state_to_json_dict(state), fh, sort_keys=True)


def load_checkpoint(path) -> CoTrainState:
    with open(path, encoding="utf-8") as fh:
        return state_from_json_dict(json.load(fh))
