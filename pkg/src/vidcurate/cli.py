"""Command-line driver for the curation pipeline.

Subcommands run the stages end to end: ingest, measure, featurize,
cotrain run/resume, review serve, evaluate, fairness audit, recommend.
Every stochastic stage takes an explicit seed, and two runs with the same
config, seed, and resolver transcript produce byte-identical artifacts.

Exit codes: 0 success, 1 usage error, 2 data error. Errors print one
machine-parseable line: ``error: <kind>: <message>``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import cotrain as ct
from . import fairness as fr
from .corpus import (CorpusError, FixtureCatalogClient, LiveCatalogClient,
                     dedupe, filter_language, ingest_search, read_annotations,
                     read_corpus, read_labels, summarize, write_corpus,
                     write_labels)
from .features import (ViewPair, build_content_view, build_metadata_view,
                       fit_vocab, read_transcripts, read_visual_features)
from .learners import evaluate
from .textmeasure import (classify_med, classify_und, extract_terms,
                          load_lexicon, med_score, pemat_score, read_rubrics)

__all__ = ["main"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(x) -> str:
    """Stable float formatting for report files."""
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".10g")
    return str(x)


def _write_csv(path, header: list[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _load_config(args) -> dict:
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            return json.load(fh)
    return {}


def _setting(args, config: dict, name: str, default=None):
    """Flag value if given, else config-file key, else default."""
    value = getattr(args, name, None)
    if value is not None:
        return value
    return config.get(name, default)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_ingest(args) -> int:
    config = _load_config(args)
    if args.terms:
        terms = [t.strip() for t in args.terms.split(",") if t.strip()]
    elif args.terms_file:
        terms = [line.strip() for line in
                 Path(args.terms_file).read_text(encoding="utf-8").splitlines()
                 if line.strip()]
    else:
        terms = config.get("terms", [])
    if not terms:
        raise UsageError("no search terms given (--terms/--terms-file/config)")
    client = (FixtureCatalogClient(args.fixture_dir) if args.fixture_dir
              else LiveCatalogClient())
    records, report = ingest_search(terms, args.per_term, client)
    deduped = dedupe(records)
    kept = filter_language(deduped, args.keep_language)
    write_corpus(args.out, kept)
    print(f"terms={report.requested_terms} fetched={report.fetched} "
          f"failures={len(report.failures)} deduped={len(deduped)} kept={len(kept)}")
    for term, message in report.failures:
        print(f"warn: term {term!r} failed: {message}", file=sys.stderr)
    return 0


def _cmd_measure(args) -> int:
    records = read_corpus(args.corpus)
    lexicon = load_lexicon(args.lexicon)
    rubrics = read_rubrics(args.rubrics) if args.rubrics else {}
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    with open(out_dir / "hits.jsonl", "w", encoding="utf-8") as hits_fh:
        for rec in records:
            hits = extract_terms(rec.text, lexicon)
            score = med_score(hits, rec.text)
            med_label = classify_med(score, args.threshold_med)
            und_score, und_label = None, ""
            if rec.video_id in rubrics:
                und_score = pemat_score(rubrics[rec.video_id])
                und_label = classify_und(und_score, args.threshold_und)
            rows.append((rec.video_id, len(hits), score, med_label,
                         und_score, und_label))
            hits_fh.write(json.dumps({
                "video_id": rec.video_id,
                "hits": [{"span": list(h.char_span), "surface": h.surface,
                          "canonical": h.canonical, "semtype": h.semtype}
                         for h in hits],
            }, ensure_ascii=False, sort_keys=True) + "\n")
    _write_csv(out_dir / "scores.csv",
               ["video_id", "n_hits", "med_score", "med_label",
                "und_score", "und_label"], rows)
    print(f"measured={len(rows)} rubric_scored={len(rubrics)}")
    return 0


def _cmd_featurize(args) -> int:
    records = read_corpus(args.corpus)
    transcripts = read_transcripts(args.transcripts) if args.transcripts else {}
    visual = read_visual_features(args.visual) if args.visual else {}
    visual_dim = next(iter(visual.values())).dimension if visual else 0

    vocab_meta = fit_vocab([r.text for r in records], min_df=args.min_df)
    vocab_content = fit_vocab([transcripts.get(r.video_id, "") for r in records],
                              min_df=args.min_df)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    vocab_meta.save(out_dir / "vocab_meta.tsv")
    vocab_content.save(out_dir / "vocab_content.tsv")

    include_views = not args.exclude_view_count
    with open(out_dir / "views.jsonl", "w", encoding="utf-8") as fh:
        for rec in records:
            transcript = transcripts.get(rec.video_id)
            vis = visual.get(rec.video_id)
            if transcript is None and vis is None:
                transcript = ""   # content view falls back to empty text block
            pair = ViewPair(
                video_id=rec.video_id,
                metadata_view=build_metadata_view(rec, vocab_meta,
                                                  include_view_count=include_views),
                content_view=build_content_view(transcript, vis, vocab_content,
                                                visual_dim=visual_dim))
            fh.write(json.dumps(pair.to_json_dict(), sort_keys=True) + "\n")
    print(f"featurized={len(records)} meta_dim={len(vocab_meta) + 4} "
          f"content_dim={len(vocab_content) + visual_dim}")
    return 0


def _read_views(path) -> dict[str, ViewPair]:
    views = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                pair = ViewPair.from_json_dict(json.loads(line))
                views[pair.video_id] = pair
    return views


def _scripted_resolver(path):
    answers = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("video_id,"):
                continue
            vid, dim, label = [p.strip() for p in line.split(",")]
            answers[(vid, dim)] = label

    def resolver(item: ct.ReviewItem) -> str:
        key = (item.video_id, item.dimension)
        if key not in answers:
            raise KeyError(f"resolver script has no answer for {key}")
        return answers[key]

    return resolver


def _dimension_field(dimension: str) -> str:
    return "med" if dimension == "MED" else "und"


def _assemble_cotrain_inputs(views: dict, labels_path, dim: str,
                             validation_path=None):
    """Split views into (seed-labeled, unlabeled, validation) for one axis."""
    field = _dimension_field(dim)
    labeled, labeled_ids = [], set()
    for lab in read_labels(labels_path):
        value = getattr(lab, field)
        if value != "unlabeled":
            if lab.video_id not in views:
                raise CorpusError(f"seed label for unknown video: {lab.video_id}")
            labeled.append((views[lab.video_id], value))
            labeled_ids.add(lab.video_id)
    validation = []
    if validation_path:
        for lab in read_labels(validation_path):
            value = getattr(lab, field)
            if value != "unlabeled":
                if lab.video_id not in views:
                    raise CorpusError(
                        f"validation label for unknown video: {lab.video_id}")
                validation.append((views[lab.video_id], value))
                labeled_ids.add(lab.video_id)   # held out of the pool
    unlabeled = [vp for vid, vp in sorted(views.items())
                 if vid not in labeled_ids]
    return labeled, unlabeled, validation


def _cotrain_outputs(out_dir: Path, labels, history, reports, state) -> None:
    write_labels(out_dir / "labels_out.jsonl", labels)
    ct.write_audit_log(out_dir / "audit.jsonl", reports)
    _write_csv(out_dir / "history.csv",
               ["round", "macro_f1", "accuracy", "auc"],
               [(i, r.macro_f1(), r.accuracy, r.auc)
                for i, r in enumerate(history)])
    _write_csv(out_dir / "discarded.csv", ["video_id"],
               [(vid,) for vid in sorted(state.discarded)])
    ct.save_checkpoint(state, out_dir / "final_state.json")


def _cotrain_config(args, config: dict, dim: str) -> ct.CoTrainConfig:
    return ct.CoTrainConfig(
        target=dim,
        k_pos=_setting(args, config, "k_pos", 10),
        k_neg=_setting(args, config, "k_neg", 10),
        tau=_setting(args, config, "tau", 0.9),
        epsilon=_setting(args, config, "epsilon", 0.002),
        patience=_setting(args, config, "patience", 3),
        max_rounds=_setting(args, config, "max_rounds", 50),
        seed=_setting(args, config, "seed", 0),
        n_trees=_setting(args, config, "n_trees", 25),
        max_depth=_setting(args, config, "max_depth", 8),
    )


def _cmd_cotrain_run(args) -> int:
    config = _load_config(args)
    views = _read_views(args.views)
    dim = args.dimension
    labeled, unlabeled, validation = _assemble_cotrain_inputs(
        views, args.labels, dim, args.validation_labels)
    cfg = _cotrain_config(args, config, dim)
    state = ct.init_state(labeled, unlabeled, cfg, validation=validation)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    resolver = _scripted_resolver(args.resolver_script)
    try:
        labels, history, reports = ct.run(state, resolver, resolver_name="script",
                                          checkpoint_dir=str(out_dir))
    except ct.ResolverError as e:
        print(f"error: resolver: {e} (checkpoint: {e.checkpoint_path})",
              file=sys.stderr)
        return 2
    _cotrain_outputs(out_dir, labels, history, reports, state)
    print(f"rounds={state.round} labeled={len(state.labeled)} "
          f"discarded={len(state.discarded)}")
    return 0


def _cmd_cotrain_resume(args) -> int:
    state = ct.load_checkpoint(args.checkpoint)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    resolver = _scripted_resolver(args.resolver_script)
    try:
        labels, history, reports = ct.run(state, resolver, resolver_name="script",
                                          checkpoint_dir=str(out_dir))
    except ct.ResolverError as e:
        print(f"error: resolver: {e} (checkpoint: {e.checkpoint_path})",
              file=sys.stderr)
        return 2
    _cotrain_outputs(out_dir, labels, history, reports, state)
    print(f"rounds={state.round} labeled={len(state.labeled)} "
          f"discarded={len(state.discarded)}")
    return 0


def _prepare_review_store(args):
    """Load or initialize the session store behind ``review serve``."""
    from .service import SessionStore

    records = ({r.video_id: r for r in read_corpus(args.corpus)}
               if args.corpus else {})
    lexicon = load_lexicon(args.lexicon) if args.lexicon else None
    store = SessionStore(args.state_dir, records=records, lexicon=lexicon)
    config = _load_config(args)
    views = _read_views(args.views) if args.views else None
    for dim in args.dimension:
        snap = store.state_dir / f"snapshot-{dim}.json"
        if snap.exists():
            store.load_dimension(dim)
        elif views is not None and args.labels:
            labeled, unlabeled, validation = _assemble_cotrain_inputs(
                views, args.labels, dim, args.validation_labels)
            state = ct.init_state(labeled, unlabeled,
                                  _cotrain_config(args, config, dim),
                                  validation=validation)
            store.init_dimension(dim, state)
        else:
            raise CorpusError(
                f"no session snapshot for {dim} in {store.state_dir}; pass "
                f"--views and --labels to initialize a fresh session")
    return store


def _cmd_review_serve(args) -> int:
    from .service import serve

    store = _prepare_review_store(args)
    host, _, port = args.bind.partition(":")
    serve(store, host=host or "127.0.0.1", port=int(port or 8321))
    return 0


def _cmd_evaluate(args) -> int:
    scores, y = [], []
    by_id = {}
    with open(args.scores, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        vid_col, score_col = header.index("video_id"), header.index(args.score_column)
        for line in fh:
            parts = line.strip().split(",")
            if len(parts) > max(vid_col, score_col) and parts[score_col]:
                by_id[parts[vid_col]] = float(parts[score_col])
    field = _dimension_field(args.dimension)
    for lab in read_labels(args.labels):
        value = getattr(lab, field)
        if value != "unlabeled" and lab.video_id in by_id:
            scores.append(by_id[lab.video_id])
            y.append(1 if value == "high" else 0)
    if not scores:
        raise CorpusError("no overlapping scored+labeled videos")
    report = evaluate(scores, y, threshold=args.threshold)
    out_rows = [
        ("n", report.n), ("threshold", report.threshold),
        ("accuracy", report.accuracy),
        ("precision_high", report.positive.precision),
        ("recall_high", report.positive.recall),
        ("f1_high", report.positive.f1),
        ("precision_low", report.negative.precision),
        ("recall_low", report.negative.recall),
        ("f1_low", report.negative.f1),
        ("auc", report.auc),
    ]
    if args.out:
        _write_csv(args.out, ["metric", "value"], out_rows)
    for name, value in out_rows:
        print(f"{name}={_fmt(value)}")
    return 0


def _read_all_labels(paths) -> list:
    labels = []
    for path in paths:
        labels.extend(read_labels(path))
    return labels


def _cmd_fairness_audit(args) -> int:
    records = read_corpus(args.corpus)
    labels = _read_all_labels(args.labels)
    annotations = read_annotations(args.annotations)
    frame = fr.build_frame(records, labels, annotations)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    _write_csv(out_dir / "funnel.csv", ["exclusion", "count"],
               frame.exclusions + [("analyzed", len(frame))])

    table = fr.crosstab(frame)
    _write_csv(out_dir / "crosstab.csv",
               ["med", "und", "gender", "fv", "count"],
               [(m, u, g, f, table[(m, u, g, f)])
                for m in (0, 1) for u in (0, 1) for g in (0, 1) for f in (0, 1)])

    corr = fr.pearson_matrix(frame)
    corr_rows = []
    for a in fr.FRAME_COLUMNS:
        for b in fr.FRAME_COLUMNS:
            cell = corr[(a, b)]
            corr_rows.append((a, b, None if cell is None else cell[0],
                              None if cell is None else cell[1]))
    _write_csv(out_dir / "correlations.csv", ["var_a", "var_b", "r", "p"], corr_rows)

    lambda_grid = [float(v) for v in args.lambda_grid.split(",")]
    specs = {
        "base": "y ~ FV + Gender + FV:Gender",
        "full": "y ~ FV + Gender + FV:Gender + MED + UND",
    }
    glm_fits = {}
    for tag, formula in specs.items():
        fit = fr.fit_glm(frame, formula=formula)
        glm_fits[tag] = fit
        _write_csv(out_dir / f"glm_{tag}.csv",
                   ["term", "coefficient", "std_error", "p_value"],
                   [(name, fit.coefficients[i], fit.standard_errors[i],
                     fit.p_values[i]) for i, name in enumerate(fit.names)])
        lasso = fr.fit_lasso(frame, lambda_grid, cv_folds=args.cv_folds,
                             seed=args.seed, formula=formula)
        _write_csv(out_dir / f"lasso_{tag}.csv",
                   ["term", "coefficient_std", "best_lambda"],
                   [(name, lasso.coefficients[i], lasso.best_lambda)
                    for i, name in enumerate(lasso.names)])

    slopes = fr.simple_slopes(glm_fits["base"])
    _write_csv(out_dir / "slopes.csv", ["gender", "slope", "std_error"],
               [("female", slopes[0][0], slopes[0][1]),
                ("male", slopes[1][0], slopes[1][1])])

    hyp = fr.hypothesis_report(glm_fits["base"])
    _write_csv(out_dir / "hypotheses.csv",
               ["hypothesis", "term", "coefficient", "p_value", "supported"],
               [(h, d["term"], d["coefficient"], d["p_value"],
                 str(d["supported"]).lower()) for h, d in sorted(hyp.items())])

    _write_text_report(out_dir / "report.txt", frame, table, corr, glm_fits, slopes, hyp)
    print(f"analyzed={len(frame)} " +
          " ".join(f"{name}={count}" for name, count in frame.exclusions))
    return 0


def _write_text_report(path, frame, table, corr, glm_fits, slopes, hyp) -> None:
    lines = []
    lines.append("Exclusion funnel")
    for name, count in frame.exclusions:
        lines.append(f"  {name:<14} {count}")
    lines.append(f"  {'analyzed':<14} {len(frame)}")
    lines.append("")
    lines.append("Counts by MED x UND x Gender x FV")
    lines.append("  med und gender fv  count")
    for key in sorted(table):
        m, u, g, f = key
        lines.append(f"  {m:>3} {u:>3} {g:>6} {f:>2}  {table[key]}")
    lines.append("")
    lines.append("Correlations (r / two-tailed p)")
    header = "          " + "".join(f"{c:>12}" for c in fr.FRAME_COLUMNS)
    lines.append(header)
    for a in fr.FRAME_COLUMNS:
        row = [f"{a:<10}"]
        for b in fr.FRAME_COLUMNS:
            cell = corr[(a, b)]
            row.append(" " * 12 if cell is None else f"{cell[0]:>12.3f}")
        lines.append("".join(row))
    lines.append("")
    for tag, fit in glm_fits.items():
        lines.append(f"GLM ({tag}): {fit.formula}   n={fit.n}")
        for i, name in enumerate(fit.names):
            lines.append(f"  {name:<14} {fit.coefficients[i]:>10.4f} "
                         f"(se {fit.standard_errors[i]:.4f}, p {fit.p_values[i]:.4g})")
        lines.append("")
    lines.append("Simple slopes of FV on ln(views)")
    lines.append(f"  female {slopes[0][0]:.4f}  male {slopes[1][0]:.4f}")
    lines.append("")
    lines.append("Hypotheses")
    for h, d in sorted(hyp.items()):
        verdict = "supported" if d["supported"] else "not supported"
        lines.append(f"  {h}: {d['term']} coef {d['coefficient']:.4f} "
                     f"p {d['p_value']:.4g} -> {verdict}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _cmd_recommend(args) -> int:
    records = read_corpus(args.corpus)
    labels = _read_all_labels(args.labels)
    annotations = read_annotations(args.annotations)
    frame = fr.build_frame(records, labels, annotations)

    scores = None
    if args.scores:
        scores = {}
        with open(args.scores, encoding="utf-8") as fh:
            header = fh.readline().strip().split(",")
            cols = {name: header.index(name) for name in
                    ("video_id", "med_score", "und_score")}
            for line in fh:
                parts = line.strip().split(",")
                if len(parts) <= max(cols.values()):
                    continue
                med_s = float(parts[cols["med_score"]]) if parts[cols["med_score"]] else 0.0
                und_s = float(parts[cols["und_score"]]) if parts[cols["und_score"]] else 0.0
                scores[parts[cols["video_id"]]] = (med_s, und_s)

    delta = math.inf if args.delta.lower() in ("inf", "infinity") else float(args.delta)
    cfg = fr.FairnessConfig(attribute=args.attribute, max_ratio_gap=delta)
    rec = fr.recommend(labels, annotations, frame, cfg, k=args.top_k, scores=scores)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    index = {vid: i for i, vid in enumerate(frame.video_ids)}
    _write_csv(out_dir / "recommendations.csv", ["rank", "video_id", "group"],
               [(i + 1, vid, fr.group_of(frame, index[vid], args.attribute) or "unknown")
                for i, vid in enumerate(rec.ranked_ids)])
    if rec.ranked_ids:
        parity = fr.parity_report(set(rec.ranked_ids), frame, args.attribute)
        _write_csv(out_dir / "parity.csv",
                   ["group", "population_share", "recommended_share", "ratio"],
                   [(g, *parity[g]) for g in sorted(parity)])
    _write_csv(out_dir / "infeasible.csv", ["prefix_length"],
               [(m,) for m in rec.infeasible_prefixes])
    if rec.reason:
        print(f"note: {rec.reason}")
    print(f"recommended={len(rec.ranked_ids)} "
          f"infeasible_prefixes={len(rec.infeasible_prefixes)}")
    return 0


def _cmd_summarize(args) -> int:
    records = read_corpus(args.corpus)
    labels = _read_all_labels(args.labels)
    table = summarize(records, labels)
    rows = [(s.axis, s.level, s.n_videos, s.mean_views, s.mean_subscribers)
            for s in table.strata]
    if args.out:
        _write_csv(args.out, ["axis", "level", "n_videos", "mean_views",
                              "mean_subscribers"], rows)
    for row in rows:
        print(" ".join(_fmt(v) for v in row))
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="vidcurate", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="search the catalog and build a corpus file")
    p.add_argument("--config")
    p.add_argument("--terms")
    p.add_argument("--terms-file")
    p.add_argument("--per-term", type=int, default=50)
    p.add_argument("--fixture-dir")
    p.add_argument("--keep-language", default="en")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("measure", help="extract terms and score each video")
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--rubrics")
    p.add_argument("--threshold-med", type=float, default=0.05)
    p.add_argument("--threshold-und", type=float, default=0.7)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_measure)

    p = sub.add_parser("summarize", help="per-stratum corpus summary table")
    p.add_argument("--corpus", required=True)
    p.add_argument("--labels", action="append", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_summarize)

    p = sub.add_parser("featurize", help="build the two feature views per video")
    p.add_argument("--corpus", required=True)
    p.add_argument("--transcripts")
    p.add_argument("--visual")
    p.add_argument("--min-df", type=int, default=1)
    p.add_argument("--exclude-view-count", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_featurize)

    p = sub.add_parser("cotrain", help="co-training engine")
    ct_sub = p.add_subparsers(dest="cotrain_command", required=True)

    pr = ct_sub.add_parser("run", help="run rounds with a scripted resolver")
    pr.add_argument("--config")
    pr.add_argument("--views", required=True)
    pr.add_argument("--labels", required=True)
    pr.add_argument("--validation-labels")
    pr.add_argument("--dimension", choices=("MED", "UND"), required=True)
    pr.add_argument("--resolver-script", required=True)
    pr.add_argument("--seed", type=int)
    pr.add_argument("--tau", dest="tau", type=float)
    pr.add_argument("--k-pos", dest="k_pos", type=int)
    pr.add_argument("--k-neg", dest="k_neg", type=int)
    pr.add_argument("--epsilon", dest="epsilon", type=float)
    pr.add_argument("--patience", dest="patience", type=int)
    pr.add_argument("--max-rounds", dest="max_rounds", type=int)
    pr.add_argument("--n-trees", dest="n_trees", type=int)
    pr.add_argument("--max-depth", dest="max_depth", type=int)
    pr.add_argument("--out", required=True)
    pr.set_defaults(func=_cmd_cotrain_run)

    pz = ct_sub.add_parser("resume", help="resume from a checkpoint")
    pz.add_argument("--checkpoint", required=True)
    pz.add_argument("--resolver-script", required=True)
    pz.add_argument("--out", required=True)
    pz.set_defaults(func=_cmd_cotrain_resume)

    p = sub.add_parser("review", help="human review service")
    rv_sub = p.add_subparsers(dest="review_command", required=True)
    ps = rv_sub.add_parser("serve", help="serve the review API")
    ps.add_argument("--state-dir", required=True)
    ps.add_argument("--corpus")
    ps.add_argument("--lexicon")
    ps.add_argument("--config")
    ps.add_argument("--views", help="initialize a fresh session from these views")
    ps.add_argument("--labels", help="seed labels for a fresh session")
    ps.add_argument("--validation-labels")
    ps.add_argument("--dimension", action="append", default=None,
                    help="repeatable; defaults to MED")
    ps.add_argument("--bind", default="127.0.0.1:8321")
    ps.add_argument("--seed", type=int)
    ps.add_argument("--tau", dest="tau", type=float)
    ps.add_argument("--k-pos", dest="k_pos", type=int)
    ps.add_argument("--k-neg", dest="k_neg", type=int)
    ps.add_argument("--epsilon", dest="epsilon", type=float)
    ps.add_argument("--patience", dest="patience", type=int)
    ps.add_argument("--max-rounds", dest="max_rounds", type=int)
    ps.add_argument("--n-trees", dest="n_trees", type=int)
    ps.add_argument("--max-depth", dest="max_depth", type=int)
    ps.set_defaults(func=_cmd_review_serve)

    p = sub.add_parser("evaluate", help="score predictions against labels")
    p.add_argument("--scores", required=True)
    p.add_argument("--score-column", default="med_score")
    p.add_argument("--labels", required=True)
    p.add_argument("--dimension", choices=("MED", "UND"), required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("fairness", help="representativeness analyses")
    fa_sub = p.add_subparsers(dest="fairness_command", required=True)
    pa = fa_sub.add_parser("audit", help="funnel, crosstab, correlations, regressions")
    pa.add_argument("--corpus", required=True)
    pa.add_argument("--labels", action="append", required=True)
    pa.add_argument("--annotations", required=True)
    pa.add_argument("--lambda-grid", default="0.5,0.2,0.1,0.05,0.02,0.01,0.005,0.001")
    pa.add_argument("--cv-folds", type=int, default=5)
    pa.add_argument("--seed", type=int, default=0)
    pa.add_argument("--out", required=True)
    pa.set_defaults(func=_cmd_fairness_audit)

    p = sub.add_parser("recommend", help="parity-constrained recommendation list")
    p.add_argument("--corpus", required=True)
    p.add_argument("--labels", action="append", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--scores")
    p.add_argument("--attribute", default="Gender",
                   choices=("Gender", "age_bracket", "FV"))
    p.add_argument("--delta", default="0.2",
                   help="max parity ratio gap; 'inf' disables the constraint")
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_recommend)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"error: usage: {e}", file=sys.stderr)
        return 1
    if getattr(args, "command", None) == "review" and not args.dimension:
        args.dimension = ["MED"]
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: usage: {e}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError) as e:
        print(f"error: data: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
