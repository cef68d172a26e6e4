"""Game records, grouped corpora, and move-number snapshots.

"Move n" always means the position in which White is about to play the
n-th move: fullmove number n, White to move. Move 1 is the start.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .board import WHITE, Position, StartPosition, initial_position
from .movegen import apply_san

WHITE_WIN = 1.0
DRAW = 0.5
BLACK_WIN = 0.0
LABELS = (BLACK_WIN, DRAW, WHITE_WIN)


class GameTooShortError(ValueError):
    """Requested snapshot lies past the end of the game.

    `last_move` is the highest move number the game does reach.
    """

    def __init__(self, wanted: int, last_move: int):
        super().__init__(f"move {wanted} not reached; game ends at move {last_move}")
        self.wanted = wanted
        self.last_move = last_move


@dataclass(frozen=True)
class GameRecord:
    """One parsed game: start position, SAN tokens, result label."""

    sp: StartPosition
    san_moves: tuple
    result: float
    tags: Mapping[str, str] = field(default_factory=dict)

    def last_move_number(self) -> int:
        """Highest n for which the move-n snapshot exists."""
        return len(self.san_moves) // 2 + 1


@dataclass(frozen=True)
class Corpus:
    """Games grouped by start-position index."""

    games_by_sp: Mapping[int, tuple]

    def total_games(self) -> int:
        return sum(len(games) for games in self.games_by_sp.values())

    def counts(self) -> dict:
        return {sp: len(games) for sp, games in sorted(self.games_by_sp.items())}


def replay(game: GameRecord) -> Iterator[Position]:
    """Positions of the game in order, starting with the initial one."""
    p = initial_position(game.sp)
    yield p
    for san in game.san_moves:
        p = apply_san(p, san)
        yield p


def positions_at_moves(game: GameRecord, moves: Sequence[int]) -> list:
    """Snapshots for several move numbers out of a single replay pass."""
    if not moves:
        return []
    if sorted(moves) != list(moves) or len(set(moves)) != len(moves):
        raise ValueError(f"move numbers must be strictly increasing: {moves}")
    if moves[0] < 1:
        raise ValueError(f"move numbers start at 1: {moves}")
    wanted = list(moves)
    out: list = []
    for p in replay(game):
        if p.side_to_move == WHITE and p.fullmove_number == wanted[0]:
            out.append(p)
            wanted.pop(0)
            if not wanted:
                return out
    raise GameTooShortError(wanted[0], game.last_move_number())


def position_at_move(game: GameRecord, n: int) -> Position:
    """The position just before White's n-th move."""
    return positions_at_moves(game, [n])[0]
