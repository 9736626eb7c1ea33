"""Command-line pipeline: label, train, simulate, report, serve.

Exit codes: 0 success, 1 validation error (bad flags, missing files,
out-of-range parameters, unusable data), 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from genstop import classifier, controller, corpus, labeling, report, semantic, serve, simulate

PROG = "genstop"


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we map usage errors to 1
        raise UsageError(message)


def _build_parser() -> tuple[_Parser, dict[str, argparse.ArgumentParser]]:
    parser = _Parser(prog=PROG, description=__doc__)
    parser.add_argument("--config", help="JSON file supplying defaults for any flag")
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers: dict[str, argparse.ArgumentParser] = {}

    def add_parser(name, **kw):
        subparsers[name] = sub.add_parser(name, **kw)
        return subparsers[name]

    p = add_parser("label", help="split generations into expected/excess and emit token labels")
    p.add_argument("--prompts", required=True)
    p.add_argument("--generations", required=True)
    p.add_argument("--labels", help="output labels.jsonl (requires hidden states)")
    p.add_argument("--label-report", help="output label_report.jsonl")
    p.add_argument("--no-semantic", action="store_true",
                   help="disable the semantic fallback even if configured")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)

    p = add_parser("train", help="train the stop classifier on labeled tokens")
    p.add_argument("--labels", required=True)
    p.add_argument("--model", required=True, help="output model file")
    p.add_argument("--lr", type=float, default=5e-4)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--weight-decay", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--validation-fraction", type=float, default=0.1)
    p.add_argument("--bias", action="store_true", help="add a bias column")
    p.add_argument("--class-weighted", action="store_true")

    p = add_parser("simulate", help="replay generations with early stopping and report metrics")
    p.add_argument("--generations", required=True)
    p.add_argument("--model")
    p.add_argument("--oracle-labels", help="labels.jsonl driving ground-truth votes instead of a model")
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--max-new-tokens", type=int, default=300)
    p.add_argument("--mode", choices=["line", "token"], default="line")
    p.add_argument("--trim", action=argparse.BooleanOptionalAction, default=True,
                   help="remove the voted stop line from final output")
    p.add_argument("--latency", type=float, default=1.0, help="proxy seconds per token")
    p.add_argument("--report-json", default="report.json")
    p.add_argument("--report-txt")

    p = add_parser("report", help="re-render an existing report.json")
    p.add_argument("--json", dest="json_path", required=True)
    p.add_argument("--txt", help="output path; prints to stdout when omitted")

    p = add_parser("serve", help="speak the stdio step protocol")
    p.add_argument("--model", required=True)

    return parser, subparsers


def _apply_config(parser: _Parser, subparsers, argv: list[str]) -> argparse.Namespace:
    # first parse finds --config; its values become defaults, flags override
    args = parser.parse_args(argv)
    if not args.config:
        return args
    path = Path(args.config)
    if not path.exists():
        raise UsageError(f"config file {path} does not exist")
    try:
        overrides = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(overrides, dict):
        raise UsageError("config file must hold a JSON object")
    known = set(vars(args))
    for sp in subparsers.values():
        known.update(a.dest for a in sp._actions)
    for key in overrides:
        if key not in known:
            raise UsageError(f"config key {key!r} matches no known flag")
    # subcommands parse into a fresh namespace, so defaults must reach them
    parser.set_defaults(**overrides)
    command_sp = subparsers.get(args.command)
    if command_sp is not None:
        valid = {a.dest for a in command_sp._actions}
        command_sp.set_defaults(**{k: v for k, v in overrides.items() if k in valid})
    return parser.parse_args(argv)


def _require_file(path: str, what: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"{what} file {path!r} does not exist")
    return p


def _controller_config(args) -> controller.ControllerConfig:
    mode = controller.MODE_LINE_VOTING if args.mode == "line" else controller.MODE_TOKEN_VOTING
    return controller.ControllerConfig(
        stop_threshold=args.theta,
        max_new_tokens=args.max_new_tokens,
        mode=mode,
        trim_stop_line=args.trim,
    )


def _cmd_label(args) -> int:
    prompts = corpus.read_prompts(_require_file(args.prompts, "prompts"))
    records = corpus.read_generation_records(_require_file(args.generations, "generations"))
    client = None
    if not args.no_semantic:
        try:
            client = semantic.SemanticClient(backend=semantic.HttpChatBackend())
        except semantic.TransportError:
            print("note: no semantic backend configured; syntax-only labeling", file=sys.stderr)
    dataset, outcomes, entries = labeling.label_corpus(
        prompts, records, semantic=client, jobs=max(1, args.jobs)
    )
    if args.labels:
        if dataset is None:
            raise UsageError(
                "--labels requested but no record carries hidden states"
            )
        corpus.write_labeled_dataset(args.labels, dataset)
    report_path = args.label_report or "label_report.jsonl"
    with open(report_path, "w", encoding="utf-8") as fh:
        for entry in entries:
            fh.write(json.dumps(entry.to_json()) + "\n")
    n_labeled = sum(1 for o in outcomes if o.labeled)
    er, pgwe = simulate.compute_er_pgwe(records, outcomes)
    print(
        f"labeled {n_labeled}/{len(records)} records "
        f"({sum(o.status == labeling.STATUS_SEMANTIC for o in outcomes)} semantic), "
        f"ER {100 * er:.1f}%, PGWE {100 * pgwe:.1f}%"
    )
    if dataset is not None:
        print(f"dataset: {dataset.n_continue} continue / {dataset.n_stop} stop tokens")
    return 0


def _cmd_train(args) -> int:
    dataset = corpus.read_labeled_dataset(_require_file(args.labels, "labels"))
    config = classifier.TrainConfig(
        learning_rate=args.lr,
        epochs=args.epochs,
        batch_size=args.batch_size,
        weight_decay=args.weight_decay,
        seed=args.seed,
        validation_fraction=args.validation_fraction,
        use_bias=args.bias,
        class_weighted=args.class_weighted,
    )
    try:
        model = classifier.train(dataset, config)
    except classifier.SingleClassError as exc:
        raise UsageError(str(exc))
    classifier.save_model(model, args.model)
    print(
        f"trained d={model.feature_dim} classifier: validation accuracy "
        f"{model.metadata['validation_accuracy']:.4f} "
        f"(best epoch {model.metadata['best_epoch']}), saved to {args.model}"
    )
    return 0


def _oracle_from_labels(path: str) -> simulate.OracleVotes:
    dataset = corpus.read_labeled_dataset(_require_file(path, "oracle labels"))
    stops: dict[str, set[int]] = {}
    for i in range(len(dataset)):
        if dataset.labels[i] == 1:
            stops.setdefault(dataset.record_ids[i], set()).add(dataset.token_indices[i])
        else:
            stops.setdefault(dataset.record_ids[i], set())
    return simulate.OracleVotes(stops)


def _cmd_simulate(args) -> int:
    records = corpus.read_generation_records(_require_file(args.generations, "generations"))
    if not records:
        raise UsageError("generations file holds no records")
    if args.oracle_labels:
        votes = _oracle_from_labels(args.oracle_labels)
    elif args.model:
        votes = classifier.load_model(_require_file(args.model, "model"))
    else:
        raise UsageError("simulate needs --model or --oracle-labels")
    config = _controller_config(args)
    results, treated = simulate.replay(records, votes, config, latency_per_token=args.latency)
    baseline = simulate.baseline_metrics_from(results, records, latency_per_token=args.latency)
    report.emit_report(
        baseline,
        treated,
        args.report_json,
        args.report_txt,
        latency_per_token=args.latency,
        config={
            "theta": args.theta,
            "max_new_tokens": args.max_new_tokens,
            "mode": config.mode,
            "trim_stop_line": args.trim,
            "vote_source": "oracle" if args.oracle_labels else "model",
        },
    )
    print(report.render_table(baseline, treated), end="")
    return 0


def _cmd_report(args) -> int:
    baseline, treated, _doc = report.read_report(_require_file(args.json_path, "report"))
    table = report.render_table(baseline, treated)
    if args.txt:
        Path(args.txt).write_text(table, encoding="utf-8")
    else:
        print(table, end="")
    return 0


def _cmd_serve(args) -> int:
    model = classifier.load_model(_require_file(args.model, "model"))
    return serve.run(model)


_COMMANDS = {
    "label": _cmd_label,
    "train": _cmd_train,
    "simulate": _cmd_simulate,
    "report": _cmd_report,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = _build_parser()
    try:
        args = _apply_config(parser, subparsers, argv)
        return _COMMANDS[args.command](args)
    except (UsageError, corpus.SchemaError, classifier.ModelFormatError, ValueError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"{PROG}: i/o error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - unexpected
        print(f"{PROG}: internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
