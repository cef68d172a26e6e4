"""End-to-end acceptance gate.

Each test covers one shipping criterion and prints a single
PASS/FAIL verdict line with capture suspended, so a plain pytest run
always shows the full scorecard. Checks accumulate into the verdict
instead of asserting mid-flight; the final assert carries the same
detail.
"""

import itertools
import sys
import time
from collections import Counter

import numpy as np
import pytest

from c960.board import initial_position, parse_fen, emit_fen, sp_backrank
from c960.datasets import build_ds2
from c960.learners import (
    CLASSES,
    ModelConfig,
    canonical_order,
    class_indices,
    evaluate,
    gbt_fit,
    gbt_predict,
    knn_classify,
    knn_predict,
    rf_fit,
    rf_predict,
    softmax,
)
from c960.movegen import apply_move, legal_moves, perft
from c960.records import Corpus, GameRecord
from c960.regions import REGION_ORDER, REGION_SQUARES
from c960.reports import render_eval_text, render_theme_frequencies_text
from c960.synth import SynthConfig, gen_corpus
from c960.themes import (
    Region,
    assign_region,
    phase_deltas,
    snapshot_counts,
    theme_report,
)


class _Criterion:
    """Collects failed checks so the verdict line always prints."""

    def __init__(self, name: str, budget_s: float, capsys):
        self.name = name
        self.budget_s = budget_s
        self.capsys = capsys
        self.problems = []
        self.started = time.monotonic()

    def check(self, ok: bool, message: str) -> None:
        if not ok:
            self.problems.append(message)

    def finish(self, detail: str = "") -> None:
        elapsed = time.monotonic() - self.started
        self.check(
            elapsed < self.budget_s,
            f"took {elapsed:.1f}s, budget {self.budget_s:.0f}s",
        )
        ok = not self.problems
        note = detail if ok else "; ".join(self.problems)
        with self.capsys.disabled():
            print(f"ACCEPTANCE {'PASS' if ok else 'FAIL'} {self.name} [{elapsed:.1f}s] {note}")
            sys.stdout.flush()
        assert ok, f"{self.name}: {note}"


def test_region_partition_tiles_the_board(capsys):
    c = _Criterion("region partition", budget_s=1, capsys=capsys)
    sizes = [len(REGION_SQUARES[r]) for r in REGION_ORDER]
    c.check(sizes == [12, 13, 13, 13, 13], f"block sizes {sizes}")
    union = set()
    total = 0
    for r in REGION_ORDER:
        union |= REGION_SQUARES[r]
        total += len(REGION_SQUARES[r])
    c.check(union == set(range(64)), "union is not the whole board")
    c.check(total == 64, f"overlap: sizes sum to {total}")
    c.finish("five disjoint blocks of 12/13/13/13/13 tile all 64 squares")


def _brute_force_backranks():
    found = set()
    for perm in set(itertools.permutations("RRNNBBQK")):
        b1, b2 = (i for i, p in enumerate(perm) if p == "B")
        if b1 % 2 == b2 % 2:
            continue
        r1, k, r2 = (i for i, p in enumerate(perm) if p in "RK")
        if perm[k] != "K":
            continue
        found.add("".join(perm))
    return found


def test_start_position_enumeration_matches_brute_force(capsys):
    c = _Criterion("start-position enumeration", budget_s=1, capsys=capsys)
    enumerated = [sp_backrank(i).backrank for i in range(960)]
    c.check(len(set(enumerated)) == 960, "enumeration has duplicates")
    oracle = _brute_force_backranks()
    c.check(set(enumerated) == oracle, "mismatch against brute-force filter")
    c.check("BBNNQRKR" in oracle, "BBNNQRKR missing")
    c.check("RNBQKBNR" in oracle, "RNBQKBNR missing")
    c.check(sp_backrank(518).backrank == "RNBQKBNR", "index 518 is not the standard array")
    c.finish("960 distinct backranks equal the brute-force set")


def test_perft_from_standard_start(capsys):
    c = _Criterion("move-generation soundness", budget_s=30, capsys=capsys)
    p = initial_position(sp_backrank(518))
    got = [perft(p, d) for d in (1, 2, 3, 4)]
    want = [20, 400, 8902, 197281]
    c.check(got == want, f"perft {got} != {want}")
    c.finish(f"perft depths 1-4 = {got}")


def test_fen_round_trip_on_random_playouts(capsys):
    c = _Criterion("fen round-trip", budget_s=10, capsys=capsys)
    rng = np.random.default_rng(20260822)
    positions = 0
    bad = 0
    for sp in range(0, 960, 89):
        for _ in range(4):
            p = initial_position(sp_backrank(sp))
            for _ply in range(26):
                moves = legal_moves(p)
                if not moves:
                    break
                p = apply_move(p, moves[rng.integers(len(moves))])
                positions += 1
                if parse_fen(emit_fen(p)) != p:
                    bad += 1
    c.check(positions >= 1000, f"only {positions} playout positions")
    c.check(bad == 0, f"{bad} positions fail parse(emit(p)) == p")
    c.finish(f"{positions} playout positions survive parse(emit(p)) == p")


def _knn_oracle(train_X, train_y, query, k):
    order = sorted(
        (float(np.sum((train_X[i] - query) ** 2)), i) for i in range(len(train_X))
    )
    votes = Counter(train_y[i] for _, i in order[:k])
    return max(CLASSES, key=lambda cls: (votes[cls], -CLASSES.index(cls)))


def test_knn_matches_exhaustive_oracle(capsys):
    c = _Criterion("knn oracle equivalence", budget_s=10, capsys=capsys)
    rng = np.random.default_rng(7)
    instances = 0
    mismatches = 0
    for k in (1, 23, 31):
        for _ in range(20):
            n = int(rng.integers(120, 301))
            # small integer grid forces frequent distance and vote ties
            X = rng.integers(0, 6, size=(n, 10)).astype(float)
            y = np.array([CLASSES[i] for i in rng.integers(0, 3, size=n)])
            query = rng.integers(0, 6, size=10).astype(float)
            instances += 1
            if knn_classify(X, y, query, k) != _knn_oracle(X, y, query, k):
                mismatches += 1
    c.check(instances >= 50, f"only {instances} instances")
    c.check(mismatches == 0, f"{mismatches}/{instances} disagree with the oracle")
    c.finish(f"{instances} instances across k=1/23/31, all match")


def _blobs(rng, per_class=200, spread=4):
    X = np.concatenate(
        [rng.integers(c, c + spread, size=(per_class, 10)) for c in (0, 10, 20)]
    ).astype(float)
    y = np.array([1.0] * per_class + [0.5] * per_class + [0.0] * per_class)
    perm = rng.permutation(len(y))
    return X[perm], y[perm]


def test_learners_separate_blobs_and_flatline_on_shuffled_labels(capsys):
    c = _Criterion("learner sanity", budget_s=120, capsys=capsys)
    rng = np.random.default_rng(99)
    X, y = _blobs(rng)
    tr_X, te_X, tr_y, te_y = X[:300], X[300:], y[:300], y[300:]

    rf_acc = float(
        np.mean(rf_predict(rf_fit(tr_X, tr_y, ModelConfig(kind="rf", seed=1)), te_X) == te_y)
    )
    gbt_acc = float(
        np.mean(gbt_predict(gbt_fit(tr_X, tr_y, ModelConfig(kind="gbt", seed=1)), te_X) == te_y)
    )
    c.check(rf_acc >= 0.95, f"rf holdout {rf_acc:.3f} < 0.95")
    c.check(gbt_acc >= 0.95, f"gbt holdout {gbt_acc:.3f} < 0.95")

    majority = max(Counter(y).values()) / len(y)
    sums = {"knn": 0.0, "rf": 0.0, "gbt": 0.0}
    reps = 30
    for rep in range(reps):
        rep_rng = np.random.default_rng(1000 + rep)
        ys = y[rep_rng.permutation(len(y))]
        str_y, ste_y = ys[:300], ys[300:]
        sums["knn"] += float(np.mean(knn_predict(tr_X, str_y, te_X, 23) == ste_y))
        model = rf_fit(tr_X, str_y, ModelConfig(kind="rf", seed=rep))
        sums["rf"] += float(np.mean(rf_predict(model, te_X) == ste_y))
        model = gbt_fit(tr_X, str_y, ModelConfig(kind="gbt", seed=rep))
        sums["gbt"] += float(np.mean(gbt_predict(model, te_X) == ste_y))
    means = {kind: total / reps for kind, total in sums.items()}
    for kind, mean in means.items():
        c.check(
            abs(mean - majority) <= 0.10,
            f"{kind} shuffled-label mean {mean:.3f} vs majority rate {majority:.3f}",
        )
    noise = ", ".join(f"{kind} {mean:.3f}" for kind, mean in means.items())
    c.finish(
        f"separable holdout rf {rf_acc:.3f} gbt {gbt_acc:.3f}; "
        f"shuffled-label means ({noise}) within 0.10 of {majority:.3f}"
    )


def test_gbt_fitted_targets_are_softmax_residuals(capsys):
    c = _Criterion("gbt gradient check", budget_s=10, capsys=capsys)
    rng = np.random.default_rng(5)
    worst = 0.0
    for trial in range(4):
        n = int(rng.integers(30, 80))
        X = rng.integers(0, 8, size=(n, 5)).astype(float)
        y = np.array([CLASSES[i] for i in rng.integers(0, 3, size=n)])
        cfg = ModelConfig(kind="gbt", n_rounds=12, tree_depth=2, seed=trial)
        model = gbt_fit(X, y, cfg, record_targets=True)
        # fitted targets follow the model's canonical row order
        order = canonical_order(X, class_indices(y))
        Xs, yidx = X[order], class_indices(y)[order]
        onehot = np.zeros((n, len(CLASSES)))
        onehot[np.arange(n), yidx] = 1.0
        staged = model.staged_scores(Xs)
        for r in range(cfg.n_rounds):
            probs = (
                np.full((n, len(CLASSES)), 1.0 / len(CLASSES))
                if r == 0
                else softmax(staged[r - 1])
            )
            worst = max(worst, float(np.max(np.abs(model.fitted_targets[r] - (onehot - probs)))))
    c.check(worst < 1e-9, f"residual mismatch {worst:.2e} >= 1e-9")
    c.finish(f"targets equal one-hot minus softmax, max |diff| {worst:.1e}")


PIPELINE_SPS = tuple(range(0, 960, 48))  # 20 start positions


def _material_label(features):
    diff = sum(features[:5]) - sum(features[5:])
    return 1.0 if diff > 0 else (0.0 if diff < 0 else 0.5)


def test_pipeline_recovers_planted_material_signal(capsys):
    c = _Criterion("pipeline signal recovery", budget_s=300, capsys=capsys)
    model_cfgs = (
        ("knn", ModelConfig(kind="knn", k=23, seed=0)),
        ("rf", ModelConfig(kind="rf", seed=0)),
        ("gbt", ModelConfig(kind="gbt", seed=0)),
    )

    cfg = SynthConfig(
        seed=4242, sps=PIPELINE_SPS, games_per_sp=50, label_rule="material-at-20"
    )
    corpus, _ = gen_corpus(cfg)
    tables = build_ds2(corpus)
    c.check(len(tables) == 20, f"{len(tables)} feature tables")
    rows = [r for t in tables.values() for r in t.rows]
    c.check(len(rows) == 1000, f"{len(rows)} rows")
    off_rule = sum(1 for r in rows if r.label != _material_label(r.features))
    c.check(off_rule == 0, f"{off_rule} labels break the count-difference rule")

    signal = {}
    for kind, mc in model_cfgs:
        signal[kind] = evaluate(tables, mc, folds=5).summary["mean"]
        c.check(signal[kind] > 0.90, f"{kind} mean CV {signal[kind]:.3f} <= 0.90")

    ucfg = SynthConfig(
        seed=4242, sps=PIPELINE_SPS, games_per_sp=50, label_rule="uniform-random"
    )
    ucorpus, _ = gen_corpus(ucfg)
    utables = build_ds2(ucorpus)
    chance = {}
    for kind, mc in model_cfgs:
        chance[kind] = evaluate(utables, mc, folds=5).summary["mean"]
        c.check(
            abs(chance[kind] - 1 / 3) <= 0.10,
            f"{kind} uniform-label mean {chance[kind]:.3f} outside 1/3 +/- 0.10",
        )

    fmt = lambda d: ", ".join(f"{k} {v:.3f}" for k, v in d.items())
    c.finish(f"deterministic labels ({fmt(signal)}); uniform labels ({fmt(chance)})")


# Ten filler moves with zero region deltas (the f3/f6 hops stay inside
# each side's kingside block), then a final phase that walks White's b1
# knight to b5 and Black's g8 knight to g4.
STEERED = ("Nf3", "Nf6", "Ng1", "Ng8") * 5 + (
    "Nc3", "Nf6",
    "Nb5", "Ng4",
    "Nf3", "Nc6",
    "Ng1", "Nb8",
    "Nf3", "Nc6",
)


@pytest.fixture(scope="module")
def small_corpus():
    cfg = SynthConfig(seed=11, sps=(0, 297, 518, 959), games_per_sp=6)
    corpus, _ = gen_corpus(cfg)
    return corpus


def test_theme_deltas_anchor_and_steered_assignment(small_corpus, capsys):
    c = _Criterion("theme step correctness", budget_s=60, capsys=capsys)
    games = 0
    broken = 0
    for sp_games in small_corpus.games_by_sp.values():
        for game in sp_games:
            games += 1
            snapshots = snapshot_counts(game)
            for color in ("w", "b"):
                deltas = phase_deltas(snapshots, color)
                summed = tuple(sum(d[i] for d in deltas) for i in range(5))
                first, last = snapshots[0].of(color), snapshots[-1].of(color)
                if summed != tuple(last[i] - first[i] for i in range(5)):
                    broken += 1
    c.check(games == 24, f"{games} games generated")
    c.check(broken == 0, f"telescoping identity broken for {broken} game-colors")

    anchor = assign_region((810, -366, -834, 50, 17))
    c.check(
        anchor == (Region.CENTRE, False),
        f"anchor totals assigned {anchor[0].value}, degenerate={anchor[1]}",
    )

    steered = GameRecord(sp=sp_backrank(518), san_moves=STEERED, result=1.0)
    report = theme_report(Corpus(games_by_sp={518: (steered, steered, steered)}))
    c.check(len(report.assignments) == 1, "steered start position not assigned")
    white_final = report.assignments[0].white[-1]
    c.check(
        white_final is Region.BLACK_QUEENSIDE,
        f"steered White final phase assigned {white_final.value}",
    )
    c.finish(
        f"telescoping holds on {games} games; anchor totals pick Centre; "
        "steered White final phase is Black Q Side"
    )


def test_report_shapes(small_corpus, capsys):
    themes = theme_report(small_corpus)
    tables = build_ds2(small_corpus, move=16)
    eval_report = evaluate(tables, ModelConfig(kind="knn", k=3, seed=0), folds=5)

    c = _Criterion("report shape parity", budget_s=1, capsys=capsys)
    freqs = themes.frequencies()
    c.check(
        sum(freqs.values()) == len(themes.assignments),
        f"frequency counts sum {sum(freqs.values())} != {len(themes.assignments)} assigned",
    )
    text = render_theme_frequencies_text(themes)
    total_line = next(line for line in text.splitlines() if line.startswith("Total"))
    c.check(
        total_line.split()[-1] == str(len(themes.assignments)),
        f"rendered total row {total_line!r}",
    )

    eval_text = render_eval_text(eval_report, "ds2")
    for row in ("Mean", "Median", "Maximum"):
        c.check(
            any(row in line.split() for line in eval_text.splitlines()),
            f"eval text missing {row} row",
        )
    c.finish(
        f"{sum(freqs.values())} category counts cover {len(themes.assignments)} "
        "start positions; eval text carries Mean/Median/Maximum"
    )
