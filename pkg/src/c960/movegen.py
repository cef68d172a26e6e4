"""Legal move generation, SAN round-tripping, and perft.

Castling is encoded king-takes-own-rook so the four Chess960 corner
cases (king or rook already standing on its destination file) stay
unambiguous.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from .board import (
    BLACK,
    WHITE,
    Piece,
    Position,
    Square,
    color_of,
    file_of,
    rank_of,
    square,
    square_name,
)


class IllegalMoveError(ValueError):
    """SAN token has no legal interpretation in the given position."""

    def __init__(self, token: str):
        super().__init__(f"illegal move: {token!r}")
        self.token = token


class AmbiguousSanError(ValueError):
    """SAN token matches more than one legal move."""

    def __init__(self, token: str):
        super().__init__(f"ambiguous move: {token!r}")
        self.token = token


@dataclass(frozen=True, slots=True)
class Move:
    """From/to squares; castling carries the rook's square in `to_sq`."""

    from_sq: Square
    to_sq: Square
    promotion: Optional[str] = None
    castle: Optional[str] = None  # "K" h-side, "Q" a-side


# Direction vectors as (dfile, drank); the first four are diagonal.
_DIRECTIONS = ((1, 1), (-1, 1), (1, -1), (-1, -1), (0, 1), (0, -1), (1, 0), (-1, 0))
_KNIGHT_OFFSETS = ((1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2))


def _build_rays() -> tuple:
    rays = []
    for sq in range(64):
        f, r = file_of(sq), rank_of(sq)
        per_dir = []
        for df, dr in _DIRECTIONS:
            ray = []
            nf, nr = f + df, r + dr
            while 0 <= nf <= 7 and 0 <= nr <= 7:
                ray.append(square(nf, nr))
                nf += df
                nr += dr
            per_dir.append(tuple(ray))
        rays.append(tuple(per_dir))
    return tuple(rays)


def _build_jumps(offsets) -> tuple:
    table = []
    for sq in range(64):
        f, r = file_of(sq), rank_of(sq)
        targets = [
            square(f + df, r + dr)
            for df, dr in offsets
            if 0 <= f + df <= 7 and 0 <= r + dr <= 7
        ]
        table.append(tuple(targets))
    return tuple(table)


RAYS = _build_rays()
KNIGHT_TARGETS = _build_jumps(_KNIGHT_OFFSETS)
KING_TARGETS = _build_jumps(_DIRECTIONS)

_DIAG_SLIDERS = {WHITE: ("B", "Q"), BLACK: ("b", "q")}
_ORTH_SLIDERS = {WHITE: ("R", "Q"), BLACK: ("r", "q")}
_PROMOTION_KINDS = ("Q", "R", "B", "N")


def attacked(board, sq: Square, by: str) -> bool:
    """True if any piece of color `by` attacks `sq` on this board."""
    f, r = file_of(sq), rank_of(sq)
    pawn, dr = ("P", -1) if by == WHITE else ("p", 1)
    pr = r + dr
    if 0 <= pr <= 7:
        if f > 0 and board[square(f - 1, pr)] == pawn:
            return True
        if f < 7 and board[square(f + 1, pr)] == pawn:
            return True
    knight = "N" if by == WHITE else "n"
    for t in KNIGHT_TARGETS[sq]:
        if board[t] == knight:
            return True
    king = "K" if by == WHITE else "k"
    for t in KING_TARGETS[sq]:
        if board[t] == king:
            return True
    diag = _DIAG_SLIDERS[by]
    orth = _ORTH_SLIDERS[by]
    rays = RAYS[sq]
    for d in range(8):
        sliders = diag if d < 4 else orth
        for t in rays[d]:
            piece = board[t]
            if piece is not None:
                if piece in sliders:
                    return True
                break
    return False


def is_check(p: Position) -> bool:
    them = BLACK if p.side_to_move == WHITE else WHITE
    return attacked(p.board, p.king_square(p.side_to_move), them)


def _pawn_moves(p: Position, sq: Square, out: list) -> None:
    board = p.board
    white = p.side_to_move == WHITE
    step = 8 if white else -8
    start_rank = 1 if white else 6
    last_rank = 7 if white else 0
    f, r = file_of(sq), rank_of(sq)

    def emit(to: Square) -> None:
        if rank_of(to) == last_rank:
            for kind in _PROMOTION_KINDS:
                out.append(Move(sq, to, promotion=kind))
        else:
            out.append(Move(sq, to))

    ahead = sq + step
    if board[ahead] is None:
        emit(ahead)
        if r == start_rank and board[ahead + step] is None:
            out.append(Move(sq, ahead + step))
    for df in (-1, 1):
        nf = f + df
        if not 0 <= nf <= 7:
            continue
        to = ahead + df
        target = board[to]
        if target is not None and color_of(target) != p.side_to_move:
            emit(to)
        elif to == p.en_passant:
            out.append(Move(sq, to))


def _pseudo_moves(p: Position) -> list:
    board = p.board
    us = p.side_to_move
    out: list = []
    for sq in range(64):
        piece = board[sq]
        if piece is None or color_of(piece) != us:
            continue
        kind = piece.upper()
        if kind == "P":
            _pawn_moves(p, sq, out)
        elif kind == "N":
            for t in KNIGHT_TARGETS[sq]:
                target = board[t]
                if target is None or color_of(target) != us:
                    out.append(Move(sq, t))
        elif kind == "K":
            for t in KING_TARGETS[sq]:
                target = board[t]
                if target is None or color_of(target) != us:
                    out.append(Move(sq, t))
        else:
            dirs = range(0, 4) if kind == "B" else range(4, 8) if kind == "R" else range(8)
            rays = RAYS[sq]
            for d in dirs:
                for t in rays[d]:
                    target = board[t]
                    if target is None:
                        out.append(Move(sq, t))
                        continue
                    if color_of(target) != us:
                        out.append(Move(sq, t))
                    break
    return out


def _pins(board, king_sq: Square, us: str) -> dict:
    them = BLACK if us == WHITE else WHITE
    pins: dict = {}
    for d in range(8):
        sliders = _DIAG_SLIDERS[them] if d < 4 else _ORTH_SLIDERS[them]
        ray = RAYS[king_sq][d]
        blocker: Optional[Square] = None
        for t in ray:
            piece = board[t]
            if piece is None:
                continue
            if blocker is None:
                if color_of(piece) != us:
                    break
                blocker = t
            else:
                if piece in sliders:
                    pins[blocker] = frozenset(ray)
                break
    return pins


def _is_en_passant(p: Position, m: Move) -> bool:
    piece = p.board[m.from_sq]
    return (
        piece is not None
        and piece.upper() == "P"
        and m.to_sq == p.en_passant
        and file_of(m.from_sq) != file_of(m.to_sq)
    )


def _leaves_king_safe(p: Position, m: Move, us: str) -> bool:
    q = apply_move(p, m)
    return not attacked(q.board, q.king_square(us), q.side_to_move)


def _between_files(a: int, b: int) -> range:
    return range(min(a, b), max(a, b) + 1)


def _castle_moves(p: Position, king_sq: Square) -> Iterable[Move]:
    us = p.side_to_move
    them = BLACK if us == WHITE else WHITE
    back = 0 if us == WHITE else 7
    board = p.board
    for rook_file in sorted(p.castling(us)):
        rook_sq = square(rook_file, back)
        side = "K" if rook_file > file_of(king_sq) else "Q"
        king_dest = square(6 if side == "K" else 2, back)
        rook_dest = square(5 if side == "K" else 3, back)
        needed = {square(f, back) for f in _between_files(file_of(king_sq), 6 if side == "K" else 2)}
        needed |= {square(f, back) for f in _between_files(rook_file, 5 if side == "K" else 3)}
        needed -= {king_sq, rook_sq}
        if any(board[t] is not None for t in needed):
            continue
        lo, hi = min(king_sq, king_dest), max(king_sq, king_dest)
        transit = [t for t in range(lo + 1, hi) if t != king_sq]
        if transit:
            scratch = list(board)
            scratch[king_sq] = None
            if any(attacked(scratch, t, them) for t in transit):
                continue
        m = Move(king_sq, rook_sq, castle=side)
        q = apply_move(p, m)
        if not attacked(q.board, king_dest, them):
            yield m


def legal_moves(p: Position) -> list:
    """All legal moves, in a canonical (from, to, promotion) order."""
    us = p.side_to_move
    them = BLACK if us == WHITE else WHITE
    board = p.board
    king_sq = p.king_square(us)
    pseudo = _pseudo_moves(p)
    out: list = []
    if attacked(board, king_sq, them):
        out = [m for m in pseudo if _leaves_king_safe(p, m, us)]
    else:
        pins = _pins(board, king_sq, us)
        scratch = list(board)
        scratch[king_sq] = None
        for m in pseudo:
            if m.from_sq == king_sq:
                if not attacked(scratch, m.to_sq, them):
                    out.append(m)
            elif _is_en_passant(p, m):
                # The captured pawn leaves the rank too; only a replay
                # catches the discovered check along it.
                if _leaves_king_safe(p, m, us):
                    out.append(m)
            elif m.from_sq in pins:
                if m.to_sq in pins[m.from_sq]:
                    out.append(m)
            else:
                out.append(m)
        out.extend(_castle_moves(p, king_sq))
    out.sort(key=lambda m: (m.from_sq, m.to_sq, m.promotion or "", m.castle or ""))
    return out


def apply_move(p: Position, m: Move) -> Position:
    """Successor position; `m` must come from legal_moves."""
    board = list(p.board)
    us = p.side_to_move
    them = BLACK if us == WHITE else WHITE
    back = 0 if us == WHITE else 7
    enemy_back = 7 - back
    piece = board[m.from_sq]
    kind = piece.upper()
    captured = board[m.to_sq]

    our_rights = set(p.castling(us))
    their_rights = set(p.castling(them))
    en_passant: Optional[Square] = None
    is_capture = captured is not None

    if m.castle:
        king_dest = square(6 if m.castle == "K" else 2, back)
        rook_dest = square(5 if m.castle == "K" else 3, back)
        board[m.from_sq] = None
        board[m.to_sq] = None
        board[king_dest] = "K" if us == WHITE else "k"
        board[rook_dest] = "R" if us == WHITE else "r"
        our_rights.clear()
        is_capture = False
    else:
        if kind == "P" and m.to_sq == p.en_passant and file_of(m.from_sq) != file_of(m.to_sq):
            behind = m.to_sq - 8 if us == WHITE else m.to_sq + 8
            board[behind] = None
            is_capture = True
        board[m.from_sq] = None
        if m.promotion:
            board[m.to_sq] = m.promotion if us == WHITE else m.promotion.lower()
        else:
            board[m.to_sq] = piece
        if kind == "K":
            our_rights.clear()
        elif kind == "R" and rank_of(m.from_sq) == back:
            our_rights.discard(file_of(m.from_sq))
        if kind == "P" and abs(m.to_sq - m.from_sq) == 16:
            en_passant = (m.from_sq + m.to_sq) // 2

    if captured is not None and rank_of(m.to_sq) == enemy_back:
        their_rights.discard(file_of(m.to_sq))

    white_rights = frozenset(our_rights if us == WHITE else their_rights)
    black_rights = frozenset(their_rights if us == WHITE else our_rights)
    return Position(
        board=tuple(board),
        side_to_move=them,
        castling_white=white_rights,
        castling_black=black_rights,
        en_passant=en_passant,
        halfmove_clock=0 if kind == "P" or is_capture else p.halfmove_clock + 1,
        fullmove_number=p.fullmove_number + (1 if us == BLACK else 0),
    )


def perft(p: Position, depth: int) -> int:
    """Leaf count of the legal game tree, the standard movegen check."""
    if depth <= 0:
        return 1
    moves = legal_moves(p)
    if depth == 1:
        return len(moves)
    return sum(perft(apply_move(p, m), depth - 1) for m in moves)


def san_of(
    p: Position,
    m: Move,
    *,
    legal: Optional[list] = None,
    applied: Optional[Position] = None,
    applied_legal: Optional[list] = None,
) -> str:
    """Minimal SAN for a legal move, with +/# suffix.

    The keyword arguments let a caller that already generated the move
    lists skip the recomputation; semantics are unchanged.
    """
    if m.castle:
        core = "O-O" if m.castle == "K" else "O-O-O"
    else:
        piece = p.board[m.from_sq]
        kind = piece.upper()
        capture = p.board[m.to_sq] is not None or _is_en_passant(p, m)
        if kind == "P":
            core = square_name(m.to_sq)
            if capture:
                core = "abcdefgh"[file_of(m.from_sq)] + "x" + core
            if m.promotion:
                core += "=" + m.promotion
        else:
            if legal is None:
                legal = legal_moves(p)
            rivals = [
                lm
                for lm in legal
                if lm.castle is None
                and lm.from_sq != m.from_sq
                and lm.to_sq == m.to_sq
                and p.board[lm.from_sq] is not None
                and p.board[lm.from_sq].upper() == kind
            ]
            disamb = ""
            if rivals:
                same_file = any(file_of(r.from_sq) == file_of(m.from_sq) for r in rivals)
                same_rank = any(rank_of(r.from_sq) == rank_of(m.from_sq) for r in rivals)
                if not same_file:
                    disamb = "abcdefgh"[file_of(m.from_sq)]
                elif not same_rank:
                    disamb = "12345678"[rank_of(m.from_sq)]
                else:
                    disamb = square_name(m.from_sq)
            core = kind + disamb + ("x" if capture else "") + square_name(m.to_sq)
    if applied is None:
        applied = apply_move(p, m)
    if is_check(applied):
        if applied_legal is None:
            applied_legal = legal_moves(applied)
        core += "#" if not applied_legal else "+"
    return core


_SAN_RE = re.compile(
    r"^(?P<kind>[KQRBN])?(?P<file>[a-h])?(?P<rank>[1-8])?(?P<capture>x)?"
    r"(?P<target>[a-h][1-8])(?:=?(?P<promotion>[QRBN]))?$"
)
_SUFFIX_RE = re.compile(r"[+#!?]+$")


def apply_san(p: Position, san: str) -> Position:
    """Apply one SAN token; raises on illegal or ambiguous input."""
    token = _SUFFIX_RE.sub("", san.strip())
    if not token:
        raise IllegalMoveError(san)
    legal = legal_moves(p)
    if token in ("O-O", "0-0", "O-O-O", "0-0-0"):
        side = "K" if token in ("O-O", "0-0") else "Q"
        for m in legal:
            if m.castle == side:
                return apply_move(p, m)
        raise IllegalMoveError(san)
    match = _SAN_RE.match(token)
    if match is None:
        raise IllegalMoveError(san)
    kind = match.group("kind") or "P"
    from_file = match.group("file")
    from_rank = match.group("rank")
    target = match.group("target")
    promotion = match.group("promotion")

    to_sq = square("abcdefgh".index(target[0]), "12345678".index(target[1]))
    hits = []
    for m in legal:
        if m.castle is not None or m.to_sq != to_sq:
            continue
        piece = p.board[m.from_sq]
        if piece.upper() != kind:
            continue
        if kind == "P" and not from_file and file_of(m.from_sq) != file_of(to_sq):
            continue  # a bare pawn token is a push, never a capture
        if from_file and file_of(m.from_sq) != "abcdefgh".index(from_file):
            continue
        if from_rank and rank_of(m.from_sq) != "12345678".index(from_rank):
            continue
        if (m.promotion or None) != (promotion or None):
            continue
        hits.append(m)
    if not hits:
        raise IllegalMoveError(san)
    if len(hits) > 1:
        raise AmbiguousSanError(san)
    return apply_move(p, hits[0])
