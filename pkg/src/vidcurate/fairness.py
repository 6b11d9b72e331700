"""Representativeness statistics and parity-constrained recommendation.

Covers the descriptive breakdowns, correlation and regression analyses of
view counts against presenter attributes (face visibility, gender), and the
post-processing side: group parity reports and a greedy re-ranker that keeps
every recommendation prefix demographically representative when feasible.

Coding conventions: Gender is 1 = male, 0 = female (flippable upstream);
FV is 1 when the presenter's face is visible; the regression outcome is
ln(viewCount) under a Gaussian identity link (Poisson log link available).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .corpus import ActorAnnotation, LabelSet, VideoRecord, merge_labels

__all__ = [
    "RegressionFrame", "FitResult", "FairnessConfig", "Recommendation",
    "build_frame", "crosstab", "pearson_matrix", "fit_glm", "fit_lasso",
    "simple_slopes", "split", "parity_report", "recommend",
    "hypothesis_report", "group_of", "FRAME_COLUMNS",
]

FRAME_COLUMNS = ("FV", "Gender", "MED", "UND", "viewCount")

EXCLUSION_ORDER = ("multi_actor", "off_topic", "unreadable", "no_narration",
                   "zero_view")


class FairnessError(ValueError):
    pass


@dataclass
class RegressionFrame:
    """Per-video analysis rows restricted to zero/one-actor narrated videos."""

    video_ids: list[str]
    fv: np.ndarray          # {0,1}
    gender: np.ndarray      # 1 = male, 0 = female
    med: np.ndarray         # {0,1}
    und: np.ndarray         # {0,1}
    view_count: np.ndarray  # positive integers
    age_bracket: list[str]  # carried for parity reports, not a predictor
    exclusions: list[tuple[str, int]] = field(default_factory=list)

    def __post_init__(self):
        self.fv = np.asarray(self.fv, dtype=int)
        self.gender = np.asarray(self.gender, dtype=int)
        self.med = np.asarray(self.med, dtype=int)
        self.und = np.asarray(self.und, dtype=int)
        self.view_count = np.asarray(self.view_count, dtype=np.int64)
        if (self.view_count <= 0).any():
            raise FairnessError("zero-view rows must be excluded before framing")

    def __len__(self) -> int:
        return len(self.video_ids)

    @property
    def y(self) -> np.ndarray:
        """ln(viewCount), the regression outcome."""
        return np.log(self.view_count.astype(float))

    def column(self, name: str) -> np.ndarray:
        return {"FV": self.fv, "Gender": self.gender, "MED": self.med,
                "UND": self.und, "viewCount": self.view_count.astype(float),
                "y": self.y}[name]

    def subset(self, indices: Sequence[int]) -> "RegressionFrame":
        idx = list(indices)
        return RegressionFrame(
            video_ids=[self.video_ids[i] for i in idx],
            fv=self.fv[idx], gender=self.gender[idx], med=self.med[idx],
            und=self.und[idx], view_count=self.view_count[idx],
            age_bracket=[self.age_bracket[i] for i in idx])


def build_frame(records: Sequence[VideoRecord], labels: Sequence[LabelSet],
                annotations: Sequence[ActorAnnotation]) -> RegressionFrame:
    """Assemble the analysis frame, applying exclusions in a fixed order.

    Rows start from videos labeled on both axes. Exclusions, each counted in
    ``frame.exclusions``: more than one actor; an ``off_topic`` flag in the
    record's extra fields; no annotation (the demographic pipeline could not
    read the video); unknown gender (nothing to narrate or detect from); and
    zero views.
    """
    by_id = {r.video_id: r for r in records}
    ann_by_id: dict[str, ActorAnnotation] = {}
    for ann in annotations:
        if ann.video_id not in by_id:
            raise FairnessError(f"annotation references unknown video_id: {ann.video_id}")
        ann_by_id[ann.video_id] = ann
    for lab in labels:
        if lab.video_id not in by_id:
            raise FairnessError(f"label references unknown video_id: {lab.video_id}")
    lab_by_id = merge_labels(labels)

    candidates = [vid for vid in (r.video_id for r in records)
                  if vid in lab_by_id
                  and lab_by_id[vid].med != "unlabeled"
                  and lab_by_id[vid].und != "unlabeled"]

    counts = dict.fromkeys(EXCLUSION_ORDER, 0)
    rows = []
    for vid in candidates:
        rec = by_id[vid]
        ann = ann_by_id.get(vid)
        if ann is not None and ann.actor_count > 1:
            counts["multi_actor"] += 1
            continue
        if rec.extra.get("off_topic"):
            counts["off_topic"] += 1
            continue
        if ann is None:
            counts["unreadable"] += 1
            continue
        if ann.gender == "unknown":
            counts["no_narration"] += 1
            continue
        if rec.view_count == 0:
            counts["zero_view"] += 1
            continue
        lab = lab_by_id[vid]
        rows.append((vid,
                     1 if ann.face_visible else 0,
                     1 if ann.gender == "male" else 0,
                     1 if lab.med == "high" else 0,
                     1 if lab.und == "high" else 0,
                     rec.view_count,
                     ann.age_bracket))
    if not rows:
        raise FairnessError("no rows survive the exclusion funnel")
    vids, fv, gender, med, und, views, ages = zip(*rows)
    return RegressionFrame(
        video_ids=list(vids), fv=np.array(fv), gender=np.array(gender),
        med=np.array(med), und=np.array(und), view_count=np.array(views),
        age_bracket=list(ages),
        exclusions=[(name, counts[name]) for name in EXCLUSION_ORDER])


def crosstab(frame: RegressionFrame) -> dict[tuple[int, int, int, int], int]:
    """Counts keyed by (MED, UND, Gender, FV); cells sum to len(frame)."""
    if len(frame) == 0:
        raise FairnessError("frame is empty")
    table: dict[tuple[int, int, int, int], int] = {}
    for m in (0, 1):
        for u in (0, 1):
            for g in (0, 1):
                for f in (0, 1):
                    table[(m, u, g, f)] = 0
    for i in range(len(frame)):
        table[(int(frame.med[i]), int(frame.und[i]),
               int(frame.gender[i]), int(frame.fv[i]))] += 1
    return table


def _pearson(x: np.ndarray, z: np.ndarray) -> tuple[float, float]:
    n = len(x)
    xm, zm = x - x.mean(), z - z.mean()
    denom = math.sqrt(float(xm @ xm) * float(zm @ zm))
    r = float(xm @ zm) / denom
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return r, 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    p = 2.0 * float(stats.t.sf(abs(t), n - 2))
    return r, p


def pearson_matrix(frame: RegressionFrame,
                   ) -> dict[tuple[str, str], Optional[tuple[float, float]]]:
    """Pairwise Pearson r with two-tailed p over the five analysis columns.

    p comes from t = r sqrt((n-2)/(1-r^2)) against Student-t with n-2 df.
    Pairs touching a zero-variance column are reported as None rather than
    silently zeroed.
    """
    n = len(frame)
    if n < 3:
        raise FairnessError("need at least 3 rows for correlations")
    cols = {name: frame.column(name).astype(float) for name in FRAME_COLUMNS}
    degenerate = {name for name, v in cols.items() if np.ptp(v) == 0}
    out: dict[tuple[str, str], Optional[tuple[float, float]]] = {}
    for a in FRAME_COLUMNS:
        for b in FRAME_COLUMNS:
            if a in degenerate or b in degenerate:
                out[(a, b)] = None
            elif a == b:
                out[(a, b)] = (1.0, 0.0)
            else:
                out[(a, b)] = _pearson(cols[a], cols[b])
    return out


# ---------------------------------------------------------------------------
# regressions


@dataclass
class FitResult:
    kind: str                        # "glm" | "lasso"
    formula: str
    names: list[str]
    coefficients: np.ndarray
    n: int
    # GLM
    standard_errors: Optional[np.ndarray] = None
    p_values: Optional[np.ndarray] = None
    covariance: Optional[np.ndarray] = None
    df_resid: Optional[int] = None
    family: str = "gaussian"
    # LASSO
    lambda_path: Optional[list[float]] = None
    cv_mse: Optional[list[float]] = None
    best_lambda: Optional[float] = None
    path_coefficients: Optional[dict[float, np.ndarray]] = None
    split_descriptor: str = ""
    seed: Optional[int] = None

    def coefficient(self, name: str) -> float:
        return float(self.coefficients[self.names.index(name)])


def _parse_formula(formula: str) -> tuple[str, list[str]]:
    """Parse ``y ~ A + B + A:B`` into the outcome and term list.

    ``y ~ 1`` is the pure-intercept model; the intercept is always included.
    """
    if "~" not in formula:
        raise FairnessError(f"formula needs '~': {formula!r}")
    lhs, rhs = (side.strip() for side in formula.split("~", 1))
    terms = [t.strip() for t in rhs.split("+") if t.strip()]
    if not terms:
        raise FairnessError(f"formula has no right-hand side: {formula!r}")
    terms = [t for t in terms if t != "1"]
    valid = set(FRAME_COLUMNS) | {"y"}
    for term in terms:
        for part in term.split(":"):
            if part not in valid:
                raise FairnessError(f"unknown term {part!r} in formula")
    return lhs, terms


def _design_matrix(frame: RegressionFrame, terms: list[str],
                   intercept: bool = True) -> tuple[np.ndarray, list[str]]:
    columns, names = [], []
    if intercept:
        columns.append(np.ones(len(frame)))
        names.append("(Intercept)")
    for term in terms:
        parts = term.split(":")
        col = frame.column(parts[0]).astype(float)
        for part in parts[1:]:
            col = col * frame.column(part).astype(float)
        columns.append(col)
        names.append(term)
    return np.column_stack(columns), names


def _check_rank(X: np.ndarray, names: list[str]) -> None:
    rank = np.linalg.matrix_rank(X)
    if rank == X.shape[1]:
        return
    # name the offending columns: those whose removal restores full rank
    collinear = []
    for j in range(X.shape[1]):
        reduced = np.delete(X, j, axis=1)
        if np.linalg.matrix_rank(reduced) == rank:
            collinear.append(names[j])
    raise FairnessError(f"design matrix rank deficient; collinear columns: "
                        f"{', '.join(collinear)}")


def fit_glm(frame: RegressionFrame,
            formula: str = "y ~ FV + Gender + FV:Gender",
            family: str = "gaussian") -> FitResult:
    """GLM of ln(viewCount) on presenter/content terms.

    Gaussian identity link solves least squares; standard errors come from
    sigma^2 (X'X)^-1 and p-values from two-tailed t-tests. The Poisson
    log-link alternative runs IRLS on the raw counts with Wald z-tests.
    """
    outcome, terms = _parse_formula(formula)
    X, names = _design_matrix(frame, terms)
    n, p = X.shape
    if n <= p:
        raise FairnessError(f"need more rows ({n}) than parameters ({p})")
    _check_rank(X, names)

    if family == "gaussian":
        yv = frame.column(outcome)
        beta, *_ = np.linalg.lstsq(X, yv, rcond=None)
        resid = yv - X @ beta
        df = n - p
        sigma2 = float(resid @ resid) / df
        cov = sigma2 * np.linalg.inv(X.T @ X)
        se = np.sqrt(np.diag(cov))
        tstat = beta / se
        pvals = 2.0 * stats.t.sf(np.abs(tstat), df)
    elif family == "poisson":
        yv = frame.view_count.astype(float)
        beta = np.zeros(p)
        beta[0] = math.log(yv.mean())
        for _ in range(100):
            mu = np.exp(X @ beta)
            W = mu
            z = X @ beta + (yv - mu) / mu
            XtW = X.T * W
            new = np.linalg.solve(XtW @ X, XtW @ z)
            if np.abs(new - beta).max() < 1e-10:
                beta = new
                break
            beta = new
        mu = np.exp(X @ beta)
        cov = np.linalg.inv((X.T * mu) @ X)
        se = np.sqrt(np.diag(cov))
        zstat = beta / se
        pvals = 2.0 * stats.norm.sf(np.abs(zstat))
        df = n - p
    else:
        raise FairnessError(f"unknown family {family!r}")

    return FitResult(kind="glm", formula=formula, names=names,
                     coefficients=beta, n=n, standard_errors=se,
                     p_values=pvals, covariance=cov, df_resid=df,
                     family=family)


def _soft_threshold(value: float, threshold: float) -> float:
    if value > threshold:
        return value - threshold
    if value < -threshold:
        return value + threshold
    return 0.0


def _lasso_cd(X: np.ndarray, y: np.ndarray, lam: float,
              beta0: Optional[np.ndarray] = None,
              tol: float = 1e-10, max_iter: int = 100_000,
              ) -> tuple[np.ndarray, bool]:
    """Cyclic coordinate descent on (1/2n)||y - Xb||^2 + lam ||b||_1.

    Convergence is declared on the KKT conditions directly: every zero
    coefficient must satisfy |x_j'r/n| <= lam + tol and every active one
    x_j'r/n = lam sign(b_j) within tol.
    """
    n, p = X.shape
    col_sq = (X * X).sum(axis=0) / n
    beta = np.zeros(p) if beta0 is None else beta0.copy()
    r = y - X @ beta
    for _ in range(max_iter):
        for j in range(p):
            if col_sq[j] == 0.0:
                continue
            old = beta[j]
            rho = (X[:, j] @ r) / n + col_sq[j] * old
            new = _soft_threshold(rho, lam) / col_sq[j]
            if new != old:
                r += X[:, j] * (old - new)
                beta[j] = new
        grad = X.T @ r / n
        violation = 0.0
        for j in range(p):
            if beta[j] == 0.0:
                violation = max(violation, abs(grad[j]) - lam)
            else:
                violation = max(violation, abs(grad[j] - lam * np.sign(beta[j])))
        if violation <= tol:
            return beta, True
    return beta, False


def _standardize(X: np.ndarray, allow_constant: bool = False,
                 ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    mean = X.mean(axis=0)
    sd = X.std(axis=0)        # population sd, ddof=0
    if (sd == 0).any():
        if not allow_constant:
            bad = [str(j) for j in np.where(sd == 0)[0]]
            raise FairnessError(f"constant predictor column(s): {', '.join(bad)}")
        # a CV fold may lose all variation in a binary column; the centered
        # column is then all zeros and its coefficient stays at zero
        sd = np.where(sd == 0, 1.0, sd)
    return (X - mean) / sd, mean, sd


def fit_lasso(frame: RegressionFrame, lambda_grid: Sequence[float],
              cv_folds: int = 5, seed: int = 0,
              formula: str = "y ~ FV + Gender + FV:Gender") -> FitResult:
    """L1-penalized least squares over a lambda grid with CV selection.

    Predictors are standardized internally (mean 0, variance 1) and the
    outcome centered; coefficients are reported on the standardized scale.
    ``best_lambda`` minimizes the cv_folds-fold mean squared error, ties
    resolved toward the larger (sparser) lambda.
    """
    if len(lambda_grid) == 0:
        raise FairnessError("lambda grid is empty")
    if any(l < 0 for l in lambda_grid):
        raise FairnessError("lambda values must be >= 0")
    outcome, terms = _parse_formula(formula)
    X_raw, names = _design_matrix(frame, terms, intercept=False)
    yv = frame.column(outcome)
    n = len(yv)
    if cv_folds < 2 or cv_folds > n:
        raise FairnessError(f"cv_folds must be in [2, {n}]")

    grid = sorted(set(float(l) for l in lambda_grid), reverse=True)

    # full-data path with warm starts down the grid
    Xs, _, _ = _standardize(X_raw)
    yc = yv - yv.mean()
    path: dict[float, np.ndarray] = {}
    warm: Optional[np.ndarray] = None
    for lam in grid:
        beta, ok = _lasso_cd(Xs, yc, lam, beta0=warm)
        if not ok:
            raise FairnessError(
                f"coordinate descent failed to converge at lambda={lam!r}")
        path[lam] = beta
        warm = beta

    # seeded fold assignment by permuted contiguous chunks
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    folds = [perm[k::cv_folds] for k in range(cv_folds)]
    cv_mse = []
    for lam in grid:
        total, count = 0.0, 0
        for fold in folds:
            mask = np.ones(n, dtype=bool)
            mask[fold] = False
            X_tr, mean, sd = _standardize(X_raw[mask], allow_constant=True)
            y_tr = yv[mask]
            beta, ok = _lasso_cd(X_tr, y_tr - y_tr.mean(), lam)
            if not ok:
                raise FairnessError(
                    f"coordinate descent failed to converge in CV at lambda={lam!r}")
            X_te = (X_raw[fold] - mean) / sd
            pred = X_te @ beta + y_tr.mean()
            err = yv[fold] - pred
            total += float(err @ err)
            count += len(fold)
        cv_mse.append(total / count)

    best_idx = int(np.argmin(cv_mse))   # grid is descending: ties pick larger lambda
    best_lambda = grid[best_idx]
    return FitResult(kind="lasso", formula=formula, names=names,
                     coefficients=path[best_lambda], n=n,
                     lambda_path=grid, cv_mse=cv_mse, best_lambda=best_lambda,
                     path_coefficients=path,
                     split_descriptor=f"{cv_folds}-fold cv", seed=seed)


def simple_slopes(fit: FitResult) -> dict[int, tuple[float, Optional[float]]]:
    """Slope of FV on the outcome at Gender = 0 and Gender = 1.

    slope(g) = b_FV + g * b_FV:Gender; standard errors combine the two
    coefficients' variances and covariance when the fit provides them.
    """
    if "FV" not in fit.names or "FV:Gender" not in fit.names:
        raise FairnessError("fit lacks FV and FV:Gender terms")
    i, j = fit.names.index("FV"), fit.names.index("FV:Gender")
    b_fv = float(fit.coefficients[i])
    b_int = float(fit.coefficients[j])
    out = {}
    for g in (0, 1):
        slope = b_fv + g * b_int
        se = None
        if fit.covariance is not None:
            var = (fit.covariance[i, i] + g * g * fit.covariance[j, j]
                   + 2 * g * fit.covariance[i, j])
            se = math.sqrt(var)
        out[g] = (slope, se)
    return out


def split(frame: RegressionFrame, train_fraction: float = 0.7,
          seed: int = 0) -> tuple[RegressionFrame, RegressionFrame]:
    """Seeded permutation split; train gets ceil(fraction * n) rows."""
    if not 0.0 < train_fraction < 1.0:
        raise FairnessError("train_fraction must be in (0, 1)")
    n = len(frame)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    n_train = math.ceil(train_fraction * n)
    return frame.subset(perm[:n_train].tolist()), frame.subset(perm[n_train:].tolist())


# ---------------------------------------------------------------------------
# parity and recommendation


def group_of(frame: RegressionFrame, idx: int, attribute: str) -> Optional[str]:
    if attribute == "Gender":
        return "male" if frame.gender[idx] == 1 else "female"
    if attribute == "FV":
        return "visible" if frame.fv[idx] == 1 else "not_visible"
    if attribute == "age_bracket":
        bracket = frame.age_bracket[idx]
        return None if bracket == "unknown" else bracket
    raise FairnessError(f"unknown attribute {attribute!r}")


def _population_shares(frame: RegressionFrame, attribute: str) -> dict[str, float]:
    counts: dict[str, int] = {}
    for i in range(len(frame)):
        g = group_of(frame, i, attribute)
        if g is not None:
            counts[g] = counts.get(g, 0) + 1
    total = sum(counts.values())
    if total == 0:
        raise FairnessError(f"no known {attribute} groups in the population")
    return {g: c / total for g, c in sorted(counts.items())}


def parity_report(recommended: set[str], frame: RegressionFrame,
                  attribute: str) -> dict[str, tuple[float, float, float]]:
    """Per-group (population share, recommended share, ratio).

    Shares are over known groups and sum to 1 per column; the ratio is the
    recommended share over the population share.
    """
    if not recommended:
        raise FairnessError("recommendation set is empty")
    ids = set(frame.video_ids)
    missing = recommended - ids
    if missing:
        raise FairnessError(f"recommended ids not in population: {sorted(missing)}")
    pop = _population_shares(frame, attribute)
    rec_counts = dict.fromkeys(pop, 0)
    rec_total = 0
    index = {vid: i for i, vid in enumerate(frame.video_ids)}
    for vid in recommended:
        g = group_of(frame, index[vid], attribute)
        if g is not None:
            rec_counts[g] += 1
            rec_total += 1
    if rec_total == 0:
        raise FairnessError("no recommended video belongs to a known group")
    return {g: (pop[g], rec_counts[g] / rec_total,
                (rec_counts[g] / rec_total) / pop[g])
            for g in pop}


@dataclass
class FairnessConfig:
    attribute: str = "Gender"
    max_ratio_gap: float = 0.2      # delta; math.inf disables the constraint

    def __post_init__(self):
        if self.max_ratio_gap < 0:
            raise FairnessError("max_ratio_gap must be >= 0")


@dataclass
class Recommendation:
    ranked_ids: list[str]
    base_order: list[str]
    infeasible_prefixes: list[int]
    reason: Optional[str] = None

    @property
    def feasible(self) -> bool:
        return not self.infeasible_prefixes


def _prefix_ok(counts: dict[str, int], m: int, shares: dict[str, float],
               delta: float) -> bool:
    """Integer-rounded parity window for a prefix of length m.

    Real-valued ratio bounds are unattainable for short prefixes (a length-1
    prefix of a two-group population cannot hold 0.8 of each), so the
    constraint rounds outward: floor((1-d) s m) <= count <= ceil((1+d) s m).
    """
    if math.isinf(delta):
        return True
    for g, s in shares.items():
        lo = math.floor((1.0 - delta) * s * m)
        hi = math.ceil((1.0 + delta) * s * m)
        if not lo <= counts.get(g, 0) <= hi:
            return False
    return True


def recommend(labels: Sequence[LabelSet], annotations: Sequence[ActorAnnotation],
              frame: RegressionFrame, fairness_config: FairnessConfig, k: int,
              scores: Optional[dict[str, tuple[float, float]]] = None,
              ) -> Recommendation:
    """Rank high-MED, high-UND videos under a prefix parity constraint.

    The base order descends by understandability score, then medical score,
    then view count, with video_id as the final tie-break (binary labels
    stand in when no scores are supplied). Greedy re-ranking then picks, at
    each position, the earliest base-order candidate that keeps the prefix
    inside the parity window; when none does, the earliest candidate is
    taken and the prefix recorded as infeasible, never silently violated.
    """
    if k < 1:
        raise FairnessError("k must be >= 1")
    high_ids = set()
    med_ok, und_ok = {}, {}
    for lab in labels:
        if lab.med == "high":
            med_ok[lab.video_id] = True
        if lab.und == "high":
            und_ok[lab.video_id] = True
    high_ids = set(med_ok) & set(und_ok)

    index = {vid: i for i, vid in enumerate(frame.video_ids)}
    candidates = [vid for vid in high_ids if vid in index]
    if not candidates:
        return Recommendation(ranked_ids=[], base_order=[], infeasible_prefixes=[],
                              reason="no high-MED, high-UND candidates in the population")

    def sort_key(vid: str):
        und_s, med_s = 1.0, 1.0
        if scores is not None and vid in scores:
            med_s, und_s = scores[vid]
        return (-und_s, -med_s, -int(frame.view_count[index[vid]]), vid)

    base = sorted(candidates, key=sort_key)
    shares = _population_shares(frame, fairness_config.attribute)
    delta = fairness_config.max_ratio_gap

    ranked: list[str] = []
    counts: dict[str, int] = {}
    infeasible: list[int] = []
    remaining = list(base)
    while remaining and len(ranked) < k:
        m = len(ranked) + 1
        chosen = None
        for vid in remaining:
            g = group_of(frame, index[vid], fairness_config.attribute)
            trial = dict(counts)
            if g is not None:
                trial[g] = trial.get(g, 0) + 1
            if _prefix_ok(trial, m, shares, delta):
                chosen = vid
                break
        if chosen is None:
            chosen = remaining[0]
            infeasible.append(m)
        remaining.remove(chosen)
        ranked.append(chosen)
        g = group_of(frame, index[chosen], fairness_config.attribute)
        if g is not None:
            counts[g] = counts.get(g, 0) + 1

    return Recommendation(ranked_ids=ranked, base_order=base,
                          infeasible_prefixes=infeasible)


def hypothesis_report(fit: FitResult, alpha: float = 0.05) -> dict[str, dict]:
    """Supported/not-supported verdicts for the three presenter hypotheses.

    H1: face visibility affects views; H2: presenter gender affects views;
    H3: gender moderates the face-visibility effect. Each verdict is just
    the two-tailed test of the matching coefficient at ``alpha`` on the
    supplied fit; it describes this data, not a general finding.
    """
    if fit.p_values is None:
        raise FairnessError("hypothesis report needs a GLM fit with p-values")
    mapping = {"H1": "FV", "H2": "Gender", "H3": "FV:Gender"}
    out = {}
    for hyp, term in mapping.items():
        if term not in fit.names:
            continue
        i = fit.names.index(term)
        p = float(fit.p_values[i])
        out[hyp] = {"term": term, "coefficient": float(fit.coefficients[i]),
                    "p_value": p, "supported": p < alpha}
    return out
