"""PGN ingestion: tolerant parsing, start-position resolution, replay checks.

A game either becomes a GameRecord or exactly one SkipDiagnostic, so
record count plus diagnostic count always equals the number of games
seen in the input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .board import (
    FenError,
    StartPosition,
    backrank_index_table,
    initial_position,
    parse_fen,
    sp_backrank,
    start_position_of,
    validate_backrank,
    STANDARD_SP_INDEX,
)
from .movegen import AmbiguousSanError, IllegalMoveError, apply_san
from .records import Corpus, GameRecord

RESULT_LABELS = {"1-0": 1.0, "1/2-1/2": 0.5, "0-1": 0.0}
RESULT_TOKENS = ("1-0", "0-1", "1/2-1/2", "*")

# Tags consulted, in order, when there is no FEN tag; the first value
# containing a legal backrank string wins.
BACKRANK_TAGS = ("Variant", "StartPosition", "FRC", "Opening")

_TAG_RE = re.compile(r'\[\s*(\w+)\s*"((?:[^"\\]|\\.)*)"\s*\]')
_MOVENUM_RE = re.compile(r"^(\d+)\.*(.*)$")
_NAG_RE = re.compile(r"^\$\d+$")
_BACKRANK_RE = re.compile(r"[KQRBN]{8}")


@dataclass(frozen=True)
class SkipDiagnostic:
    """Why one input game produced no record."""

    path: str
    ordinal: int
    reason: str

    def as_dict(self) -> dict:
        return {"path": self.path, "ordinal": self.ordinal, "reason": self.reason}


@dataclass(frozen=True)
class IngestResult:
    corpus: Corpus
    diagnostics: tuple
    per_file: dict  # path -> {"kept": int, "skipped": int}

    def total_kept(self) -> int:
        return self.corpus.total_games()


def _resolve_start(tags: dict) -> tuple:
    """(StartPosition, None) or (None, reason)."""
    fen = tags.get("FEN")
    if fen is not None:
        try:
            p = parse_fen(fen)
        except FenError as exc:
            return None, f"bad FEN tag: {exc}"
        sp = start_position_of(p)
        if sp is None:
            return None, "FEN tag is not a Chess960 start position"
        return sp, None
    for name in BACKRANK_TAGS:
        value = tags.get(name)
        if not value:
            continue
        hit = _BACKRANK_RE.search(value.upper())
        if hit is None:
            continue
        backrank = hit.group(0)
        try:
            validate_backrank(backrank)
        except ValueError:
            continue
        return StartPosition(backrank_index_table()[backrank], backrank), None
    return sp_backrank(STANDARD_SP_INDEX), None


def _skip_comment(text: str, i: int) -> int:
    end = text.find("}", i + 1)
    return len(text) if end < 0 else end + 1


def _skip_variation(text: str, i: int) -> int:
    depth = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                return i + 1
        elif ch == "{":
            i = _skip_comment(text, i) - 1
        elif ch == ";":
            i = text.find("\n", i)
            if i < 0:
                return n
        i += 1
    return n


class _GameAccumulator:
    def __init__(self) -> None:
        self.reset()

    def reset(self) -> None:
        self.tags: dict = {}
        self.moves: list = []
        self.bad_token: Optional[str] = None
        self.started = False


def parse_pgn_text(text: str, path: str = "<string>") -> tuple:
    """Parse concatenated PGN games into (records, diagnostics)."""
    records: list = []
    diagnostics: list = []
    ordinal = 0
    acc = _GameAccumulator()

    def finish(result_token: Optional[str]) -> None:
        nonlocal ordinal
        if not acc.started:
            return
        ordinal += 1
        reason = _finish_game(acc, result_token, records)
        if reason is not None:
            diagnostics.append(SkipDiagnostic(path, ordinal, reason))
        acc.reset()

    i = 0
    n = len(text)
    line_start = True
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            line_start = ch == "\n" or (line_start and ch in " \t\r")
            i += 1
            continue
        if ch == "%" and line_start:
            i = text.find("\n", i)
            i = n if i < 0 else i + 1
            continue
        line_start = False
        if ch == "{":
            i = _skip_comment(text, i)
            continue
        if ch == "(":
            i = _skip_variation(text, i)
            continue
        if ch == ";":
            i = text.find("\n", i)
            i = n if i < 0 else i
            continue
        if ch == "[":
            match = _TAG_RE.match(text, i)
            if match is not None:
                if acc.moves or acc.bad_token:
                    finish(None)  # tag section of the next game
                acc.started = True
                acc.tags[match.group(1)] = match.group(2).replace('\\"', '"').replace("\\\\", "\\")
                i = match.end()
                continue
        # plain movetext token
        j = i
        while j < n and text[j] not in ' \t\r\n{();':
            j += 1
        token = text[i:j]
        i = j
        acc.started = True
        if token in RESULT_TOKENS:
            finish(token)
            continue
        if _NAG_RE.match(token):
            continue
        numbered = _MOVENUM_RE.match(token)
        if numbered:
            token = numbered.group(2)
            if not token:
                continue
        if acc.bad_token is None and not _looks_like_san(token):
            acc.bad_token = token
            continue
        acc.moves.append(token)
    finish(None)
    return records, diagnostics


_SAN_SHAPE_RE = re.compile(
    r"^(?:[KQRBN]?[a-h]?[1-8]?x?[a-h][1-8](?:=?[QRBN])?|O-O(?:-O)?|0-0(?:-0)?)[+#!?]*$"
)


def _looks_like_san(token: str) -> bool:
    return bool(_SAN_SHAPE_RE.match(token))


def _finish_game(acc: _GameAccumulator, result_token: Optional[str], records: list) -> Optional[str]:
    """Append a GameRecord or return a skip reason."""
    if acc.bad_token is not None:
        return f"unparseable token {acc.bad_token!r}"
    if result_token is None:
        result_token = acc.tags.get("Result")
    if result_token is None or result_token == "*":
        return "result unknown"
    label = RESULT_LABELS.get(result_token)
    if label is None:
        return f"result unknown: {result_token!r}"
    if not acc.moves:
        return "empty movetext"
    sp, reason = _resolve_start(acc.tags)
    if sp is None:
        return reason
    p = initial_position(sp)
    for halfmove, token in enumerate(acc.moves, start=1):
        try:
            p = apply_san(p, token)
        except (IllegalMoveError, AmbiguousSanError):
            return f"illegal move {token!r} at halfmove {halfmove}"
    records.append(
        GameRecord(sp=sp, san_moves=tuple(acc.moves), result=label, tags=dict(acc.tags))
    )
    return None


def parse_pgn_stream(data, path: str = "<stream>") -> tuple:
    """Parse PGN given bytes, text, or a file-like object."""
    if hasattr(data, "read"):
        data = data.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8", errors="replace")
    return parse_pgn_text(data, path)


def load_corpus(paths: Iterable) -> IngestResult:
    """Read PGN files and group the surviving games by start position."""
    games_by_sp: dict = {}
    diagnostics: list = []
    per_file: dict = {}
    for path in paths:
        with open(path, "rb") as handle:
            records, diags = parse_pgn_stream(handle.read(), str(path))
        diagnostics.extend(diags)
        per_file[str(path)] = {"kept": len(records), "skipped": len(diags)}
        for record in records:
            games_by_sp.setdefault(record.sp.index, []).append(record)
    corpus = Corpus({sp: tuple(games) for sp, games in sorted(games_by_sp.items())})
    return IngestResult(corpus, tuple(diagnostics), per_file)
