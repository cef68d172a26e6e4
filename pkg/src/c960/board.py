"""Board state, Chess960 start positions, and FEN serialization.

Squares are ints in little-endian rank-file order: a1=0, b1=1, ..., h8=63.
Pieces are FEN letters: uppercase white ("PNBRQK"), lowercase black.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, replace
from typing import Optional, TypeAlias

Square: TypeAlias = int
Piece: TypeAlias = str

WHITE = "w"
BLACK = "b"

FILE_NAMES = "abcdefgh"
RANK_NAMES = "12345678"

WHITE_PIECES = "PNBRQK"
BLACK_PIECES = "pnbrqk"

SQUARE_NAMES = [f + r for r in RANK_NAMES for f in FILE_NAMES]


def square(file: int, rank: int) -> Square:
    return rank * 8 + file


def file_of(sq: Square) -> int:
    return sq & 7


def rank_of(sq: Square) -> int:
    return sq >> 3


def square_name(sq: Square) -> str:
    return SQUARE_NAMES[sq]


def parse_square(name: str) -> Square:
    if len(name) != 2 or name[0] not in FILE_NAMES or name[1] not in RANK_NAMES:
        raise ValueError(f"bad square name: {name!r}")
    return square(FILE_NAMES.index(name[0]), RANK_NAMES.index(name[1]))


def color_of(piece: Piece) -> str:
    return WHITE if piece.isupper() else BLACK


def kind_of(piece: Piece) -> str:
    """Piece kind as an uppercase letter, color stripped."""
    return piece.upper()


class FenError(ValueError):
    """FEN text rejected; `field` names the offending FEN field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True, slots=True)
class Position:
    """Immutable game state, one ply.

    `board` holds 64 entries (piece letter or None). Castling rights are
    kept per color as the files of the still-eligible rooks, which pins
    down the rook identity in Chess960 where letter pairs cannot.
    """

    board: tuple
    side_to_move: str
    castling_white: frozenset
    castling_black: frozenset
    en_passant: Optional[Square]
    halfmove_clock: int
    fullmove_number: int

    def piece_at(self, sq: Square) -> Optional[Piece]:
        return self.board[sq]

    def castling(self, color: str) -> frozenset:
        return self.castling_white if color == WHITE else self.castling_black

    def king_square(self, color: str) -> Square:
        target = "K" if color == WHITE else "k"
        return self.board.index(target)


@dataclass(frozen=True, slots=True)
class StartPosition:
    """One of the 960 legal first-rank arrangements, with its index."""

    index: int
    backrank: str


def validate_backrank(backrank: str) -> None:
    """Reject strings that are not a legal Chess960 first rank."""
    if sorted(backrank) != sorted("RNBQKBNR"):
        raise ValueError(f"bad piece multiset: {backrank!r}")
    bishops = [i for i, p in enumerate(backrank) if p == "B"]
    if bishops[0] % 2 == bishops[1] % 2:
        raise ValueError(f"bishops on same color: {backrank!r}")
    rooks = [i for i, p in enumerate(backrank) if p == "R"]
    king = backrank.index("K")
    if not rooks[0] < king < rooks[1]:
        raise ValueError(f"king not between rooks: {backrank!r}")


# Knight pair placements among the five squares left after bishops and
# queen, in canonical numbering order.
_KNIGHT_PAIRS = (
    (0, 1), (0, 2), (0, 3), (0, 4), (1, 2),
    (1, 3), (1, 4), (2, 3), (2, 4), (3, 4),
)


def sp_backrank(index: int) -> StartPosition:
    """Backrank for a canonical Chess960 number.

    Bishops come from the two base-4 digits (light file 2d+1, then dark
    file 2d), the queen from the base-6 digit over free files, knights
    from the residual pair index, and R, K, R fill what remains.
    """
    if not 0 <= index <= 959:
        raise ValueError(f"start position index out of range: {index}")
    rest, light = divmod(index, 4)
    rest, dark = divmod(rest, 4)
    pair, queen = divmod(rest, 6)

    rank: list = [None] * 8
    rank[2 * light + 1] = "B"
    rank[2 * dark] = "B"

    free = [f for f in range(8) if rank[f] is None]
    rank[free[queen]] = "Q"

    free = [f for f in range(8) if rank[f] is None]
    n1, n2 = _KNIGHT_PAIRS[pair]
    rank[free[n1]] = "N"
    rank[free[n2]] = "N"

    for f, piece in zip((f for f in range(8) if rank[f] is None), "RKR"):
        rank[f] = piece
    return StartPosition(index, "".join(rank))


@functools.lru_cache(maxsize=1)
def backrank_index_table() -> dict:
    """Map every legal backrank string to its canonical index."""
    return {sp_backrank(i).backrank: i for i in range(960)}


def start_position_for_backrank(backrank: str) -> StartPosition:
    validate_backrank(backrank)
    return StartPosition(backrank_index_table()[backrank], backrank)


def initial_position(sp: StartPosition) -> Position:
    """Both armies on their home ranks, full castling rights, White to move."""
    board: list = [None] * 64
    for f, piece in enumerate(sp.backrank):
        board[square(f, 0)] = piece
        board[square(f, 7)] = piece.lower()
    for f in range(8):
        board[square(f, 1)] = "P"
        board[square(f, 6)] = "p"
    rooks = frozenset(f for f, p in enumerate(sp.backrank) if p == "R")
    return Position(
        board=tuple(board),
        side_to_move=WHITE,
        castling_white=rooks,
        castling_black=rooks,
        en_passant=None,
        halfmove_clock=0,
        fullmove_number=1,
    )


STANDARD_SP_INDEX = 518  # RNBQKBNR under the canonical numbering


def _parse_placement(field: str) -> tuple:
    board: list = [None] * 64
    ranks = field.split("/")
    if len(ranks) != 8:
        raise FenError("piece placement", f"expected 8 ranks, got {len(ranks)}")
    for i, row in enumerate(ranks):
        rank = 7 - i
        f = 0
        for ch in row:
            if ch.isdigit():
                if ch == "0" or ch == "9":
                    raise FenError("piece placement", f"bad skip count {ch!r}")
                f += int(ch)
            elif ch in WHITE_PIECES or ch in BLACK_PIECES:
                if f > 7:
                    raise FenError("piece placement", f"rank {rank + 1} too wide")
                board[square(f, rank)] = ch
                f += 1
            else:
                raise FenError("piece placement", f"bad piece letter {ch!r}")
        if f != 8:
            raise FenError("piece placement", f"rank {rank + 1} has {f} squares")
    return tuple(board)


def _rook_files(board: tuple, color: str, rank: int) -> list:
    rook = "R" if color == WHITE else "r"
    return [f for f in range(8) if board[square(f, rank)] == rook]


def _parse_castling(field: str, board: tuple) -> tuple:
    if field == "-":
        return frozenset(), frozenset()
    white: set = set()
    black: set = set()
    for ch in field:
        color = WHITE if ch.isupper() else BLACK
        rank = 0 if color == WHITE else 7
        rights = white if color == WHITE else black
        king = "K" if color == WHITE else "k"
        try:
            king_sq = board.index(king)
        except ValueError:
            raise FenError("castling", f"no {color} king on the board") from None
        if rank_of(king_sq) != rank:
            raise FenError("castling", f"{color} king off its back rank")
        rooks = _rook_files(board, color, rank)
        upper = ch.upper()
        if upper in "ABCDEFGH":
            f = ord(upper) - ord("A")
            if f not in rooks:
                raise FenError("castling", f"no rook on {FILE_NAMES[f]}{rank + 1}")
        elif upper == "K":
            outside = [f for f in rooks if f > file_of(king_sq)]
            if not outside:
                raise FenError("castling", f"no {color} rook kingside of the king")
            f = max(outside)
        elif upper == "Q":
            outside = [f for f in rooks if f < file_of(king_sq)]
            if not outside:
                raise FenError("castling", f"no {color} rook queenside of the king")
            f = min(outside)
        else:
            raise FenError("castling", f"bad castling letter {ch!r}")
        if f in rights:
            raise FenError("castling", f"duplicate right {ch!r}")
        rights.add(f)
    return frozenset(white), frozenset(black)


def _validate(p: Position) -> None:
    for king in ("K", "k"):
        if p.board.count(king) != 1:
            raise FenError("piece placement", f"expected exactly one {king!r}")
    for sq in range(8):
        if p.board[sq] in ("P", "p") or p.board[sq + 56] in ("P", "p"):
            raise FenError("piece placement", "pawn on a back rank")
    if p.en_passant is not None:
        expected = 5 if p.side_to_move == WHITE else 2
        if rank_of(p.en_passant) != expected:
            raise FenError("en passant", "target on the wrong rank for the mover")


def parse_fen(text: str) -> Position:
    """Build a Position from a 6-field FEN string.

    Accepts classical (KQkq) and file-letter castling tokens; rights are
    normalized to rook files either way.
    """
    fields = text.split()
    if len(fields) != 6:
        raise FenError("field count", f"expected 6 fields, got {len(fields)}")
    placement, side, castling, ep, halfmove, fullmove = fields

    board = _parse_placement(placement)
    if side not in (WHITE, BLACK):
        raise FenError("side to move", f"expected 'w' or 'b', got {side!r}")
    white_rights, black_rights = _parse_castling(castling, board)
    if ep == "-":
        ep_square: Optional[Square] = None
    else:
        try:
            ep_square = parse_square(ep)
        except ValueError:
            raise FenError("en passant", f"bad square {ep!r}") from None
        if rank_of(ep_square) not in (2, 5):
            raise FenError("en passant", f"square {ep!r} not on rank 3 or 6")
    if not halfmove.isdigit():
        raise FenError("halfmove clock", f"expected a non-negative int, got {halfmove!r}")
    if not fullmove.isdigit() or int(fullmove) < 1:
        raise FenError("fullmove number", f"expected a positive int, got {fullmove!r}")

    p = Position(
        board=board,
        side_to_move=side,
        castling_white=white_rights,
        castling_black=black_rights,
        en_passant=ep_square,
        halfmove_clock=int(halfmove),
        fullmove_number=int(fullmove),
    )
    _validate(p)
    return p


def emit_fen(p: Position) -> str:
    """Serialize with file-letter castling tokens (h-side first per color)."""
    rows = []
    for rank in range(7, -1, -1):
        row = ""
        empty = 0
        for f in range(8):
            piece = p.board[square(f, rank)]
            if piece is None:
                empty += 1
            else:
                if empty:
                    row += str(empty)
                    empty = 0
                row += piece
        if empty:
            row += str(empty)
        rows.append(row)

    castling = ""
    for f in sorted(p.castling_white, reverse=True):
        castling += FILE_NAMES[f].upper()
    for f in sorted(p.castling_black, reverse=True):
        castling += FILE_NAMES[f]
    ep = square_name(p.en_passant) if p.en_passant is not None else "-"
    return " ".join(
        (
            "/".join(rows),
            p.side_to_move,
            castling or "-",
            ep,
            str(p.halfmove_clock),
            str(p.fullmove_number),
        )
    )


def start_position_of(p: Position) -> Optional[StartPosition]:
    """Identify `p` as an untouched Chess960 start, or return None."""
    rank1 = "".join(p.board[square(f, 0)] or "." for f in range(8))
    table = backrank_index_table()
    if rank1 not in table:
        return None
    sp = StartPosition(table[rank1], rank1)
    reference = initial_position(sp)
    if replace(p, halfmove_clock=0, fullmove_number=1) == reference:
        return sp
    return None
