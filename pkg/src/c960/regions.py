"""The five-region board partition and per-color occupancy counts.

Region membership is a fixed square list, not a formula: the centre
block is 12 squares and each flank block is 13, and together they tile
the board exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .board import WHITE, Position, parse_square


class Region(Enum):
    """Board zones, in the fixed order used everywhere downstream."""

    CENTRE = "Centre"
    WHITE_KINGSIDE = "WhiteKingside"
    WHITE_QUEENSIDE = "WhiteQueenside"
    BLACK_KINGSIDE = "BlackKingside"
    BLACK_QUEENSIDE = "BlackQueenside"

    @property
    def display(self) -> str:
        return _DISPLAY[self]


REGION_ORDER = tuple(Region)

_DISPLAY = {
    Region.CENTRE: "Centre",
    Region.WHITE_KINGSIDE: "White K Side",
    Region.WHITE_QUEENSIDE: "White Q Side",
    Region.BLACK_KINGSIDE: "Black K Side",
    Region.BLACK_QUEENSIDE: "Black Q Side",
}

_SQUARES = {
    Region.CENTRE: "c4 c5 d3 d4 d5 d6 e3 e4 e5 e6 f4 f5",
    Region.WHITE_KINGSIDE: "h1 h2 h3 h4 g1 g2 g3 g4 f1 f2 f3 e1 e2",
    Region.WHITE_QUEENSIDE: "a1 a2 a3 a4 b1 b2 b3 b4 c1 c2 c3 d1 d2",
    Region.BLACK_KINGSIDE: "h8 h7 h6 h5 g8 g7 g6 g5 f8 f7 f6 e8 e7",
    Region.BLACK_QUEENSIDE: "a8 a7 a6 a5 b8 b7 b6 b5 c8 c7 c6 d8 d7",
}

REGION_SQUARES = {
    region: frozenset(parse_square(name) for name in names.split())
    for region, names in _SQUARES.items()
}

_REGION_BY_SQUARE = [None] * 64
for _region, _squares in REGION_SQUARES.items():
    for _sq in _squares:
        _REGION_BY_SQUARE[_sq] = _region


def region_of(sq: int) -> Region:
    """The unique region containing a square."""
    return _REGION_BY_SQUARE[sq]


@dataclass(frozen=True)
class RegionCounts:
    """Men per region for each army, kings and pawns included.

    Both tuples follow REGION_ORDER.
    """

    white: tuple
    black: tuple

    def of(self, color: str) -> tuple:
        return self.white if color == WHITE else self.black

    def total(self, color: str) -> int:
        return sum(self.of(color))


def count_regions(p: Position) -> RegionCounts:
    """Count every man of each color in each region."""
    white = [0] * 5
    black = [0] * 5
    for sq, piece in enumerate(p.board):
        if piece is None:
            continue
        idx = _REGION_INDEX[sq]
        if piece.isupper():
            white[idx] += 1
        else:
            black[idx] += 1
    return RegionCounts(tuple(white), tuple(black))


_REGION_INDEX = [REGION_ORDER.index(r) for r in _REGION_BY_SQUARE]


def feature_vector(counts: RegionCounts) -> tuple:
    """White's five region counts then Black's, in REGION_ORDER."""
    return counts.white + counts.black
