"""Command-line entry point: train, eval, predict, split-zero-shot, grad-check.

Every subcommand is deterministic given its flags and seed. The predict
loop works from schemas alone; row data is loaded only by eval, which needs
it for execution accuracy.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import decode, heads, synth
from .corpus import (
    CorpusError,
    build_zero_shot_split,
    load_examples,
    load_schemas,
    load_tables,
    write_examples,
)
from .encoder import (
    SOURCE_PRECOMPUTED,
    EmbeddingFormatError,
    load_embedding_file,
)
from .evaluate import evaluate
from .heads import TrainConfig, featurize, load_checkpoint, save_checkpoint, train
from .sketch import AGGREGATE_SQL, OPERATOR_SQL, serialize


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def cmd_train(args) -> int:
    try:
        tables = load_tables(args.tables)
        examples, stats = load_examples(args.examples, tables)
    except (OSError, CorpusError) as e:
        return _fail(str(e))
    if stats.n_skipped_unknown_table:
        print(f"skipped {stats.n_skipped_unknown_table} examples with unknown tables")
    print(f"loaded {stats.n_loaded} examples (max conditions {stats.max_conditions_seen})")
    pre = None
    source = "trainable"
    if args.embeddings:
        try:
            pre = load_embedding_file(args.embeddings)
        except (OSError, EmbeddingFormatError) as e:
            return _fail(str(e))
        source = SOURCE_PRECOMPUTED
    cfg = TrainConfig(
        embed_dim=args.embed_dim,
        hidden_dim=args.hidden_dim,
        epochs=args.epochs,
        lr=args.lr,
        batch_size=args.batch_size,
        momentum=args.momentum,
        seed=args.seed,
        source=source,
        log_every=args.log_every,
    )
    schemas = {tid: schema for tid, (schema, _) in tables.items()}
    result = train(examples, schemas, cfg, pre=pre)
    if result.n_missing_spans:
        print(f"{result.n_missing_spans} conditions lacked a question span (wv skipped)")
    save_checkpoint(args.checkpoint, result.params, result.vocab, result.config)
    loss_log = Path(args.checkpoint).with_suffix(".loss.txt")
    loss_log.write_text("".join(f"{x:.6f}\n" for x in result.loss_curve), encoding="utf-8")
    if result.loss_curve:
        print(f"final mean loss {result.loss_curve[-1]:.4f} after {len(result.loss_curve)} epochs")
    print(f"checkpoint written to {args.checkpoint}")
    print(f"loss log written to {loss_log}")
    return 0


def _load_model(args):
    params, vocab, config = load_checkpoint(args.checkpoint)
    pre = None
    if getattr(args, "embeddings", None):
        pre = load_embedding_file(args.embeddings)
    if config.source == SOURCE_PRECOMPUTED:
        if pre is None:
            raise ValueError("checkpoint was trained on precomputed embeddings; pass --embeddings")
        if pre.dim != config.precomputed_dim:
            raise ValueError(
                f"embedding dimension mismatch: checkpoint expects "
                f"{config.precomputed_dim}, file provides {pre.dim}"
            )
    return params, vocab, config, pre


def cmd_eval(args) -> int:
    try:
        tables = load_tables(args.tables)
        examples, stats = load_examples(args.examples, tables)
    except (OSError, CorpusError) as e:
        return _fail(str(e))
    if stats.n_skipped_unknown_table:
        print(f"skipped {stats.n_skipped_unknown_table} examples with unknown tables")
    schemas = {tid: schema for tid, (schema, _) in tables.items()}
    if args.self_test:
        predictions = [ex.gold for ex in examples]
        greedy_predictions = None
    else:
        if not args.checkpoint:
            return _fail("--checkpoint is required unless --self-test is given")
        try:
            params, vocab, config, pre = _load_model(args)
        except (OSError, ValueError) as e:
            return _fail(str(e))
        limits = decode.PruneLimits(args.prune_columns, args.prune_spans)
        predictions = []
        greedy_predictions = [] if args.beam_width > 1 else None
        for i, ex in enumerate(examples):
            feats = featurize(ex, schemas[ex.table_id], vocab, str(i), with_gold=False)
            dists = heads.forward(params, config, feats, None, pre)
            predictions.append(
                decode.beam(dists, feats.question, feats.tokens, args.beam_width, limits)
            )
            if greedy_predictions is not None:
                greedy_predictions.append(
                    decode.beam(dists, feats.question, feats.tokens, 1, limits)
                )
    report = evaluate(
        predictions, examples, tables, strict_values=args.strict_values, label=args.label
    )
    if greedy_predictions is not None:
        greedy_report = evaluate(
            greedy_predictions, examples, tables, strict_values=args.strict_values
        )
        report.extra["beam_width"] = args.beam_width
        report.extra["acc_lf_greedy"] = round(greedy_report.acc_lf, 6)
        report.extra["beam_minus_greedy_lf"] = round(
            report.acc_lf - greedy_report.acc_lf, 6
        )
    print(report.to_text())
    if args.report_out:
        report.write(args.report_out)
        print(f"report written to {args.report_out}")
    return 0


def cmd_predict(args) -> int:
    try:
        schemas = load_schemas(args.tables)
        params, vocab, config, pre = _load_model(args)
    except (OSError, ValueError, CorpusError) as e:
        return _fail(str(e))
    if config.source == SOURCE_PRECOMPUTED:
        return _fail("predict needs a trainable-encoder checkpoint (embeddings are per-example)")
    table_id = args.table_id or next(iter(schemas))
    if table_id not in schemas:
        return _fail(f"table {table_id!r} not found")
    schema = schemas[table_id]
    print(f"schema {table_id}: {', '.join(schema.headers)}")
    for line in sys.stdin:
        question = line.strip()
        if not question:
            print("(empty question, try again)")
            continue
        try:
            feats = heads.featurize_question(question, schema, vocab, "interactive")
        except ValueError:
            print("(question tokenizes to nothing, try again)")
            continue
        dists = heads.forward(params, config, feats, None, None)
        limits = decode.PruneLimits(args.prune_columns, args.prune_spans)
        query = decode.beam(dists, feats.question, feats.tokens, args.beam_width, limits)
        hyp = decode.best_hypothesis(dists, args.beam_width, limits)
        print(serialize(query, schema))
        agg = int(np.argmax(dists.p_sa))
        sel = int(np.argmax(dists.p_sc))
        wn = int(np.argmax(dists.p_wn))
        agg_name = AGGREGATE_SQL[agg] or "NONE"
        print(f"  sa: {agg_name} (p={dists.p_sa[agg]:.3f})")
        print(f"  sc: {schema.headers[sel]} (p={dists.p_sc[sel]:.3f})")
        print(f"  wn: {wn} (p={dists.p_wn[wn]:.3f})")
        for cond, (col, op, s, e) in zip(query.conds, hyp.clauses):
            span_p = float(np.exp(dists.wv_start_logp[col, op, s] + dists.wv_end_logp[col, op, e]))
            print(
                f"  wc: {schema.headers[cond.col]} (p={dists.p_wc[cond.col]:.3f})"
                f"  wo: {OPERATOR_SQL[cond.op]} (p={dists.p_wo[cond.col][cond.op]:.3f})"
                f"  wv: {cond.value!r} (p={span_p:.3f})"
            )
    return 0


def cmd_split_zero_shot(args) -> int:
    try:
        tables = load_tables(args.tables)
        train_examples, _ = load_examples(args.train_examples, tables)
        test_examples, _ = load_examples(args.examples, tables)
        kept = build_zero_shot_split(train_examples, test_examples)
        write_examples(kept, args.out)
    except (OSError, CorpusError) as e:
        return _fail(str(e))
    print(f"retained {len(kept)} of {len(test_examples)} examples "
          f"({len(test_examples) - len(kept)} dropped)")
    print(f"train tables {len({e.table_id for e in train_examples})}, "
          f"retained tables {len({e.table_id for e in kept})}")
    print(f"written to {args.out}")
    return 0


def cmd_grad_check(args) -> int:
    from .corpus import Example
    from .encoder import EncoderConfig, Vocabulary
    from .sketch import Aggregate, Condition, Operator, SQLQuery

    schema = synth.build_tables()["players"][0]
    example = Example(
        "points when rank is 2",
        "players",
        SQLQuery(Aggregate.NONE, 2, (Condition(3, Operator.EQ, "2"),)),
    )
    vocab = Vocabulary.build(
        [["points", "when", "rank", "is", "2"], *[h.split() for h in schema.headers]]
    )
    config = EncoderConfig(
        vocab_size=len(vocab), embed_dim=8, hidden_dim=8, seed=args.seed
    )
    params = heads.init_params(config)
    feats = featurize(example, schema, vocab, "0")
    report = heads.GradCheckReport()
    worst = heads.grad_check(params, config, feats, step=args.step, report=report)
    print(f"max relative gradient error: {worst:.3e} (step {args.step:g})")
    print(
        f"worst coordinate: {report.worst_parameter}[{report.worst_index}] "
        f"analytic {report.analytic:.6e} vs numeric {report.numeric:.6e}"
    )
    return 0 if worst < 1e-4 else 1


def cmd_export_demo_corpus(args) -> int:
    tables_path, train_path, dev_path = synth.write_corpus(
        args.out_dir, args.n_train, args.n_dev, args.seed
    )
    print(f"tables: {tables_path}")
    print(f"train: {train_path}")
    print(f"dev: {dev_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqlsketch",
        description="Schema-only natural-language-to-SQL sketch filling",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model and write a checkpoint")
    p.add_argument("--tables", required=True)
    p.add_argument("--examples", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--embeddings", help="precomputed embedding file (frozen encoder)")
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--momentum", type=float, default=0.9)
    p.add_argument("--embed-dim", type=int, default=24)
    p.add_argument("--hidden-dim", type=int, default=24)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--log-every", type=int, default=10)
    p.set_defaults(func=cmd_train)

    def add_decode_flags(p):
        p.add_argument("--beam-width", type=int, default=8)
        p.add_argument("--prune-columns", type=int, default=16,
                       help="candidate columns kept per clause")
        p.add_argument("--prune-spans", type=int, default=16,
                       help="candidate value spans kept per column-operator pair")

    p = sub.add_parser("eval", help="evaluate a checkpoint on an example file")
    p.add_argument("--tables", required=True)
    p.add_argument("--examples", required=True)
    p.add_argument("--checkpoint")
    p.add_argument("--embeddings")
    add_decode_flags(p)
    p.add_argument("--strict-values", action="store_true")
    p.add_argument("--report-out")
    p.add_argument("--label", default="")
    p.add_argument("--self-test", action="store_true",
                   help="score gold annotations against themselves")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("predict", help="interactive question-to-SQL loop")
    p.add_argument("--tables", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--table-id", help="schema to query (default: first in file)")
    add_decode_flags(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("split-zero-shot", help="drop test examples whose tables occur in training")
    p.add_argument("--tables", required=True)
    p.add_argument("--train-examples", required=True)
    p.add_argument("--examples", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_split_zero_shot)

    p = sub.add_parser("grad-check", help="finite-difference check on a tiny model")
    p.add_argument("--step", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_grad_check)

    p = sub.add_parser("export-demo-corpus", help="write the synthetic demo corpus")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--n-train", type=int, default=32)
    p.add_argument("--n-dev", type=int, default=16)
    p.add_argument("--seed", type=int, default=13)
    p.set_defaults(func=cmd_export_demo_corpus)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
