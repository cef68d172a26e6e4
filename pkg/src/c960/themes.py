"""Where each army migrates: per-phase region flow and its aggregate.

For snapshot moves (m1, .., mk) a game yields k-1 phase deltas per
color, each the change in that color's five region counts. Summing a
start position's games phase-wise and taking the most positive region
names where the army was heading; the final phase pair is the start
position's category.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .board import BLACK, WHITE, sp_backrank
from .records import Corpus, GameRecord, GameTooShortError, positions_at_moves
from .regions import REGION_ORDER, Region, RegionCounts, count_regions

SNAPSHOT_MOVES = (1, 6, 11, 16)


class NoUsableGamesError(ValueError):
    """Every game of a start position was too short to snapshot."""


@dataclass(frozen=True)
class PhaseTotals:
    """Summed per-region deltas for one color, one phase."""

    color: str
    phase: int  # 1-based
    totals: tuple  # five ints in REGION_ORDER


@dataclass(frozen=True)
class ThemeAssignment:
    """Per-phase region picks for one start position."""

    sp_index: int
    backrank: str
    white: tuple  # Region per phase
    black: tuple
    white_degenerate: tuple  # True where no region total was positive
    black_degenerate: tuple
    games_used: int
    games_skipped: int

    @property
    def category(self) -> tuple:
        """(White final-phase region, Black final-phase region)."""
        return (self.white[-1], self.black[-1])


def snapshot_counts(game: GameRecord, moves: Sequence[int] = SNAPSHOT_MOVES) -> list:
    """RegionCounts at each snapshot move, from one replay pass."""
    return [count_regions(p) for p in positions_at_moves(game, list(moves))]


def phase_deltas(snapshots: Sequence[RegionCounts], color: str) -> list:
    """Per-phase change of one color's region counts."""
    out = []
    for earlier, later in zip(snapshots, snapshots[1:]):
        a, b = earlier.of(color), later.of(color)
        out.append(tuple(b[i] - a[i] for i in range(5)))
    return out


def aggregate_sp(games: Sequence[GameRecord], moves: Sequence[int] = SNAPSHOT_MOVES) -> tuple:
    """Sum phase deltas over a start position's games.

    Returns (white PhaseTotals list, black PhaseTotals list, used,
    skipped); games too short for the last snapshot are skipped.
    """
    phases = len(moves) - 1
    white = [[0] * 5 for _ in range(phases)]
    black = [[0] * 5 for _ in range(phases)]
    used = 0
    skipped = 0
    for game in games:
        try:
            snapshots = snapshot_counts(game, moves)
        except GameTooShortError:
            skipped += 1
            continue
        used += 1
        for phase, delta in enumerate(phase_deltas(snapshots, WHITE)):
            for i in range(5):
                white[phase][i] += delta[i]
        for phase, delta in enumerate(phase_deltas(snapshots, BLACK)):
            for i in range(5):
                black[phase][i] += delta[i]
    if used == 0:
        raise NoUsableGamesError(f"no game reaches move {max(moves)}")
    white_totals = [PhaseTotals(WHITE, p + 1, tuple(white[p])) for p in range(phases)]
    black_totals = [PhaseTotals(BLACK, p + 1, tuple(black[p])) for p in range(phases)]
    return white_totals, black_totals, used, skipped


def assign_region(totals: Sequence[int]) -> tuple:
    """(region with the largest total, degenerate flag).

    Ties break toward the earlier region in REGION_ORDER. When no
    total is positive the least-negative region is still named, with
    the degenerate flag set.
    """
    best = 0
    for i in range(1, 5):
        if totals[i] > totals[best]:
            best = i
    return REGION_ORDER[best], totals[best] <= 0


def classify_sp(
    sp_index: int, games: Sequence[GameRecord], moves: Sequence[int] = SNAPSHOT_MOVES
) -> ThemeAssignment:
    white_totals, black_totals, used, skipped = aggregate_sp(games, moves)
    white_regions, white_degenerate = zip(*(assign_region(t.totals) for t in white_totals))
    black_regions, black_degenerate = zip(*(assign_region(t.totals) for t in black_totals))
    return ThemeAssignment(
        sp_index=sp_index,
        backrank=sp_backrank(sp_index).backrank,
        white=white_regions,
        black=black_regions,
        white_degenerate=white_degenerate,
        black_degenerate=black_degenerate,
        games_used=used,
        games_skipped=skipped,
    )


def classify_corpus(corpus: Corpus, moves: Sequence[int] = SNAPSHOT_MOVES) -> tuple:
    """(assignments sorted by start position, skipped (sp, reason) pairs)."""
    assignments = []
    skipped = []
    for sp_index, games in sorted(corpus.games_by_sp.items()):
        try:
            assignments.append(classify_sp(sp_index, games, moves))
        except NoUsableGamesError as exc:
            skipped.append((sp_index, str(exc)))
    return assignments, skipped


@dataclass(frozen=True)
class ThemeReport:
    assignments: tuple
    skipped: tuple  # (sp_index, reason)

    def frequencies(self) -> dict:
        """Category -> count, in REGION_ORDER pair order, zeros dropped."""
        counts: dict = {}
        for white in REGION_ORDER:
            for black in REGION_ORDER:
                counts[(white, black)] = 0
        for assignment in self.assignments:
            counts[assignment.category] += 1
        return {pair: n for pair, n in counts.items() if n > 0}

    def appendix(self) -> dict:
        """Category -> backranks, categories in REGION_ORDER pair order."""
        groups: dict = {}
        for assignment in self.assignments:
            groups.setdefault(assignment.category, []).append(assignment.backrank)
        ordered = {}
        for white in REGION_ORDER:
            for black in REGION_ORDER:
                if (white, black) in groups:
                    ordered[(white, black)] = groups[(white, black)]
        return ordered


def theme_report(corpus: Corpus, moves: Sequence[int] = SNAPSHOT_MOVES) -> ThemeReport:
    assignments, skipped = classify_corpus(corpus, moves)
    return ThemeReport(tuple(assignments), tuple(skipped))
