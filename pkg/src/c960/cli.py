"""Command-line entry point.

Every flag can also be set through the environment as C960_<FLAG>
(dashes become underscores); explicit flags win. Exit codes: 0 on
success, 1 when a run produced nothing usable, 2 for bad options,
3 for I/O failures, 4 for malformed input files.
"""

from __future__ import annotations

import argparse
import os
import sys

from .board import FenError
from .datasets import (
    DS3_MOVES,
    SNAPSHOT_MOVE,
    TableFormatError,
    build_ds1,
    build_ds2,
    build_ds3,
    read_table,
    read_tables,
    write_table,
    write_tables,
)
from .learners import ConfigError, ModelConfig, evaluate
from .pgn import load_corpus
from .reports import (
    dump_json,
    eval_report_dict,
    positions_text,
    render_eval_text,
    render_theme_appendix_text,
    render_theme_frequencies_text,
    theme_report_dict,
)
from .synth import LABEL_RULES, SynthConfig, gen_corpus, write_pgn_dir
from .themes import SNAPSHOT_MOVES, theme_report

EXIT_OK = 0
EXIT_EMPTY = 1
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_FORMAT = 4

ENV_PREFIX = "C960_"

DEFAULT_K = {"ds1": 31, "ds2": 23, "ds3": 23}


def _env(name: str, fallback):
    return os.environ.get(ENV_PREFIX + name.replace("-", "_").upper(), fallback)


def _env_flag(name: str) -> bool:
    return str(_env(name, "")).lower() in ("1", "true", "yes", "on")


def _parse_int_list(text: str) -> list:
    """Accept '3', '1,6,11', and 'a-b' range pieces, e.g. '0-4,17'."""
    out: list = []
    for piece in str(text).split(","):
        piece = piece.strip()
        if not piece:
            continue
        if "-" in piece[1:]:
            lo, hi = piece.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(piece))
    if not out:
        raise ConfigError(f"empty integer list: {text!r}")
    return out


def _out_dir(args) -> str:
    os.makedirs(args.out, exist_ok=True)
    return args.out


def cmd_positions(args) -> int:
    text = positions_text()
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_synth(args) -> int:
    cfg = SynthConfig(
        seed=args.seed,
        sps=tuple(_parse_int_list(args.sps)),
        games_per_sp=args.games_per_sp,
        label_rule=args.label_rule,
        min_moves=args.min_moves,
        max_moves=args.max_moves,
    )
    corpus, diagnostics = gen_corpus(cfg)
    out = _out_dir(args)
    paths = write_pgn_dir(corpus, out)
    manifest = {
        "seed": cfg.seed,
        "label_rule": cfg.label_rule,
        "games_per_sp": cfg.games_per_sp,
        "min_moves": cfg.min_moves,
        "max_moves": cfg.max_moves,
        "games": corpus.total_games(),
        "per_sp": {str(sp): n for sp, n in corpus.counts().items()},
        "files": [os.path.basename(p) for p in paths],
        "diagnostics": [d.as_dict() for d in diagnostics],
    }
    dump_json(manifest, os.path.join(out, "synth_manifest.json"))
    print(f"wrote {corpus.total_games()} games over {len(paths)} files to {out}")
    return EXIT_OK if corpus.total_games() else EXIT_EMPTY


def cmd_ingest(args) -> int:
    result = load_corpus(args.paths)
    out = _out_dir(args)
    manifest = {
        "total_kept": result.total_kept(),
        "total_skipped": len(result.diagnostics),
        "per_file": result.per_file,
        "per_sp": {str(sp): n for sp, n in result.corpus.counts().items()},
        "diagnostics": [d.as_dict() for d in result.diagnostics],
    }
    dump_json(manifest, os.path.join(out, "manifest.json"))
    for diagnostic in result.diagnostics:
        print(f"skip\t{diagnostic.path}\t{diagnostic.ordinal}\t{diagnostic.reason}", file=sys.stderr)
    print(f"kept {result.total_kept()} games, skipped {len(result.diagnostics)}")
    return EXIT_OK if result.total_kept() else EXIT_EMPTY


def _single_move(args) -> int:
    moves = _parse_int_list(args.move) if args.move is not None else [SNAPSHOT_MOVE]
    if len(moves) != 1:
        raise ConfigError(f"{args.dataset} takes a single snapshot move, got {moves}")
    return moves[0]


def cmd_dataset(args) -> int:
    corpus = load_corpus(args.paths).corpus
    out = _out_dir(args)
    if args.dataset == "ds1":
        table = build_ds1(corpus, seed=args.seed, move=_single_move(args))
        write_table(table, os.path.join(out, "ds1.csv"))
        manifest = {"kind": "ds1", "file": "ds1.csv", "rows": len(table.rows), "skipped": table.skipped}
        dump_json(manifest, os.path.join(out, "index.json"))
        print(f"ds1: {len(table.rows)} rows ({table.skipped} starts skipped) -> {out}")
        return EXIT_OK if table.rows else EXIT_EMPTY
    if args.dataset == "ds2":
        tables = build_ds2(corpus, move=_single_move(args))
    else:
        moves = _parse_int_list(args.move) if args.move is not None else list(DS3_MOVES)
        tables = build_ds3(corpus, moves=moves)
    index = write_tables(tables, out, args.dataset)
    total = sum(entry["rows"] for entry in index["tables"])
    print(f"{args.dataset}: {len(tables)} tables, {total} rows -> {out}")
    return EXIT_OK if total else EXIT_EMPTY


def _load_eval_tables(args):
    if args.dataset == "ds1":
        path = args.path
        if os.path.isdir(path):
            path = os.path.join(path, "ds1.csv")
        return read_table(path, "ds1")
    return read_tables(args.path)


def cmd_eval(args) -> int:
    k = args.k if args.k is not None else DEFAULT_K[args.dataset]
    cfg = ModelConfig(
        kind=args.model,
        k=k,
        n_trees=args.trees,
        max_depth=args.max_depth,
        features_per_split=args.features_per_split,
        n_rounds=args.rounds,
        learning_rate=args.learning_rate,
        tree_depth=args.tree_depth,
        seed=args.seed,
    )
    tables = _load_eval_tables(args)
    report = evaluate(tables, cfg, folds=args.folds)
    out = _out_dir(args)
    dump_json(eval_report_dict(report, args.dataset), os.path.join(out, "eval_report.json"))
    text = render_eval_text(report, args.dataset)
    with open(os.path.join(out, "eval_report.txt"), "w") as handle:
        handle.write(text)
    if not args.no_figures:
        from .figures import save_eval_figure

        save_eval_figure(report, os.path.join(out, "eval_accuracy.png"))
    sys.stdout.write(text)
    return EXIT_OK if report.per_table else EXIT_EMPTY


def cmd_themes(args) -> int:
    corpus = load_corpus(args.paths).corpus
    moves = _parse_int_list(args.snapshot_moves)
    report = theme_report(corpus, moves)
    out = _out_dir(args)
    dump_json(theme_report_dict(report, moves), os.path.join(out, "themes.json"))
    frequencies_text = render_theme_frequencies_text(report)
    with open(os.path.join(out, "theme_frequencies.txt"), "w") as handle:
        handle.write(frequencies_text)
    with open(os.path.join(out, "theme_appendix.txt"), "w") as handle:
        handle.write(render_theme_appendix_text(report))
    if not args.no_figures and report.assignments:
        from .figures import save_theme_figure

        save_theme_figure(report, os.path.join(out, "theme_frequencies.png"))
    sys.stdout.write(frequencies_text)
    return EXIT_OK if report.assignments else EXIT_EMPTY


def _add_common(sub, out_default="out"):
    sub.add_argument("--seed", type=int, default=_env("seed", "0"),
                     help="base RNG seed (default 0)")
    sub.add_argument("--out", default=_env("out", out_default),
                     help=f"output directory (default {out_default!r})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="c960",
        description="Chess960 corpora, region features, classifiers, and theme reports.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    p = subparsers.add_parser("positions", help="list all 960 start positions")
    p.add_argument("--out", default=_env("out", None), help="write the listing here instead of stdout")
    p.set_defaults(func=cmd_positions)

    p = subparsers.add_parser("synth", help="generate a synthetic PGN corpus")
    _add_common(p)
    p.add_argument("--sps", default=_env("sps", "0-959"),
                   help="start positions, e.g. '0-959' or '3,17,100-104'")
    p.add_argument("--games-per-sp", type=int, default=_env("games-per-sp", "1"))
    p.add_argument("--label-rule", choices=LABEL_RULES, default=_env("label-rule", "from-play"))
    p.add_argument("--min-moves", type=int, default=_env("min-moves", "20"))
    p.add_argument("--max-moves", type=int, default=_env("max-moves", "60"))
    p.set_defaults(func=cmd_synth)

    p = subparsers.add_parser("ingest", help="parse PGN files and report what survived")
    _add_common(p)
    p.add_argument("paths", nargs="+", help="PGN files")
    p.set_defaults(func=cmd_ingest)

    p = subparsers.add_parser("dataset", help="build feature CSVs from PGN files")
    _add_common(p)
    p.add_argument("--dataset", choices=("ds1", "ds2", "ds3"), default=_env("dataset", "ds2"))
    p.add_argument("--move", default=_env("move", None),
                   help="snapshot move(s): single int for ds1/ds2, list or range for ds3")
    p.add_argument("paths", nargs="+", help="PGN files")
    p.set_defaults(func=cmd_dataset)

    p = subparsers.add_parser("eval", help="cross-validate a model over feature tables")
    _add_common(p)
    p.add_argument("--dataset", choices=("ds1", "ds2", "ds3"), default=_env("dataset", "ds2"))
    p.add_argument("--model", choices=("knn", "rf", "gbt"), default=_env("model", "knn"))
    p.add_argument("--k", type=int, default=_env("k", None),
                   help="neighbours for knn (default 31 for ds1, 23 otherwise)")
    p.add_argument("--folds", type=int, default=_env("folds", "5"))
    p.add_argument("--trees", type=int, default=_env("trees", "100"))
    p.add_argument("--max-depth", type=int, default=_env("max-depth", "12"))
    p.add_argument("--features-per-split", type=int, default=_env("features-per-split", "3"))
    p.add_argument("--rounds", type=int, default=_env("rounds", "100"))
    p.add_argument("--learning-rate", type=float, default=_env("learning-rate", "0.1"))
    p.add_argument("--tree-depth", type=int, default=_env("tree-depth", "3"))
    p.add_argument("--no-figures", action="store_true", default=_env_flag("no-figures"))
    p.add_argument("path", help="ds1.csv for ds1, or a dataset directory / index.json")
    p.set_defaults(func=cmd_eval)

    p = subparsers.add_parser("themes", help="assign development regions and report categories")
    _add_common(p)
    p.add_argument("--snapshot-moves", default=_env("snapshot-moves", "1,6,11,16"),
                   help="comma-separated snapshot move numbers")
    p.add_argument("--no-figures", action="store_true", default=_env_flag("no-figures"))
    p.add_argument("paths", nargs="+", help="PGN files")
    p.set_defaults(func=cmd_themes)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FenError, TableFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
