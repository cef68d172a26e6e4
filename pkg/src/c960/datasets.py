"""Feature tables built from game corpora, and their CSV form.

Three shapes share one row type: a sampled one-game-per-start table, a
per-start table at a single move, and a per-start table with one row
per move of a mid-game window, all labelled by the game result.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .records import Corpus, GameRecord, LABELS, positions_at_moves
from .regions import count_regions, feature_vector

HEADER = (
    "sp",
    "game",
    "move",
    "wC",
    "wWK",
    "wWQ",
    "wBK",
    "wBQ",
    "bC",
    "bWK",
    "bWQ",
    "bBK",
    "bBQ",
    "result",
)

DS3_MOVES = (10, 11, 12, 13, 14, 15)
SNAPSHOT_MOVE = 20


class TableFormatError(ValueError):
    """CSV contents rejected; `row` is the offending 1-based line."""

    def __init__(self, path, row: int, message: str):
        super().__init__(f"{path}:{row}: {message}")
        self.path = str(path)
        self.row = row


@dataclass(frozen=True)
class FeatureRow:
    """Ten region counts for one position, plus the game's result."""

    sp_index: int
    game_ordinal: int
    move_number: int
    features: tuple
    label: float


@dataclass(frozen=True)
class FeatureTable:
    kind: str  # "ds1" | "ds2" | "ds3"
    rows: tuple
    skipped: int = 0  # games (DS1: starts) dropped for being too short


def _feature_rows(sp_index: int, ordinal: int, game: GameRecord, moves: Sequence[int]) -> list:
    positions = positions_at_moves(game, list(moves))
    return [
        FeatureRow(
            sp_index=sp_index,
            game_ordinal=ordinal,
            move_number=move,
            features=feature_vector(count_regions(p)),
            label=game.result,
        )
        for move, p in zip(moves, positions)
    ]


def build_ds1(corpus: Corpus, seed: int, move: int = SNAPSHOT_MOVE) -> FeatureTable:
    """One uniformly drawn game per start position, snapshotted at `move`.

    The draw is over the games long enough to reach the snapshot;
    `skipped` counts start positions where none qualify.
    """
    rows = []
    skipped = 0
    for sp_index, games in sorted(corpus.games_by_sp.items()):
        eligible = [
            (ordinal, game)
            for ordinal, game in enumerate(games)
            if game.last_move_number() >= move
        ]
        if not eligible:
            skipped += 1
            continue
        rng = np.random.default_rng([seed & 0xFFFFFFFF, sp_index])
        ordinal, game = eligible[int(rng.integers(len(eligible)))]
        rows.extend(_feature_rows(sp_index, ordinal, game, [move]))
    return FeatureTable("ds1", tuple(rows), skipped)


def _per_sp_tables(corpus: Corpus, kind: str, moves: Sequence[int]) -> dict:
    tables = {}
    for sp_index, games in sorted(corpus.games_by_sp.items()):
        rows = []
        skipped = 0
        for ordinal, game in enumerate(games):
            if game.last_move_number() < max(moves):
                skipped += 1
                continue
            rows.extend(_feature_rows(sp_index, ordinal, game, moves))
        tables[sp_index] = FeatureTable(kind, tuple(rows), skipped)
    return tables


def build_ds2(corpus: Corpus, move: int = SNAPSHOT_MOVE) -> dict:
    """Per-start tables with one row per game, snapshotted at `move`."""
    return _per_sp_tables(corpus, "ds2", [move])


def build_ds3(corpus: Corpus, moves: Sequence[int] = DS3_MOVES) -> dict:
    """Per-start tables with one row per game per window move.

    A game too short for the full window contributes nothing.
    """
    if list(moves) != sorted(set(moves)):
        raise ValueError(f"window moves must be strictly increasing: {moves}")
    return _per_sp_tables(corpus, "ds3", list(moves))


def _format_label(label: float) -> str:
    return {1.0: "1.0", 0.5: "0.5", 0.0: "0.0"}[label]


def write_table(table: FeatureTable, path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(HEADER)
        for row in table.rows:
            writer.writerow(
                [row.sp_index, row.game_ordinal, row.move_number]
                + list(row.features)
                + [_format_label(row.label)]
            )


def read_table(path, kind: str = "ds2") -> FeatureTable:
    """Parse a feature CSV, strictly: exact header, ints, known labels."""
    rows = []
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise TableFormatError(path, 1, "missing header") from None
        if tuple(header) != HEADER:
            raise TableFormatError(path, 1, f"bad header {header!r}")
        for line, cells in enumerate(reader, start=2):
            if not cells:
                continue
            if len(cells) != len(HEADER):
                raise TableFormatError(path, line, f"expected {len(HEADER)} cells, got {len(cells)}")
            try:
                ints = [int(cell) for cell in cells[:13]]
            except ValueError:
                raise TableFormatError(path, line, f"non-integer cell in {cells[:13]!r}") from None
            if any(v < 0 for v in ints[3:]):
                raise TableFormatError(path, line, "negative region count")
            try:
                label = float(cells[13])
            except ValueError:
                raise TableFormatError(path, line, f"bad label {cells[13]!r}") from None
            if label not in LABELS:
                raise TableFormatError(path, line, f"label {cells[13]!r} not in {sorted(LABELS)}")
            rows.append(
                FeatureRow(ints[0], ints[1], ints[2], tuple(ints[3:13]), label)
            )
    return FeatureTable(kind, tuple(rows), 0)


def write_tables(tables: dict, out_dir, kind: str) -> dict:
    """Write per-start CSVs plus an index.json; returns the index."""
    os.makedirs(out_dir, exist_ok=True)
    index = {"kind": kind, "tables": []}
    for sp_index, table in sorted(tables.items()):
        name = f"sp{sp_index:03d}.csv"
        write_table(table, os.path.join(out_dir, name))
        index["tables"].append(
            {"sp": sp_index, "file": name, "rows": len(table.rows), "skipped": table.skipped}
        )
    with open(os.path.join(out_dir, "index.json"), "w") as handle:
        json.dump(index, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return index


def read_tables(path) -> dict:
    """Load a write_tables directory (or its index.json) back."""
    if os.path.isdir(path):
        path = os.path.join(path, "index.json")
    with open(path) as handle:
        index = json.load(handle)
    base = os.path.dirname(path)
    return {
        entry["sp"]: read_table(os.path.join(base, entry["file"]), index["kind"])
        for entry in index["tables"]
    }
