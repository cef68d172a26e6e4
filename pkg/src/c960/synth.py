"""Seeded random-playout corpora with pluggable labelling rules.

Every game's move stream comes from its own (seed, start position,
game id, attempt) RNG, so corpora are reproducible game by game no
matter how generation is batched.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .board import BLACK, WHITE, Position, emit_fen, initial_position, sp_backrank
from .movegen import apply_move, is_check, legal_moves, san_of
from .pgn import RESULT_LABELS, SkipDiagnostic
from .records import Corpus, GameRecord
from .learners.config import ConfigError

LABEL_RULES = ("from-play", "material-at-20", "uniform-random")
MATERIAL_MOVE = 20
RETRY_LIMIT = 20

_RESULT_TOKEN = {label: token for token, label in RESULT_LABELS.items()}


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 0
    sps: tuple = field(default_factory=lambda: tuple(range(960)))
    games_per_sp: int = 1
    label_rule: str = "from-play"
    min_moves: int = 20
    max_moves: int = 60

    def validate(self) -> None:
        if self.label_rule not in LABEL_RULES:
            raise ConfigError(f"unknown label rule {self.label_rule!r}")
        if self.games_per_sp < 1:
            raise ConfigError(f"games_per_sp must be positive, got {self.games_per_sp}")
        if not 1 <= self.min_moves <= self.max_moves:
            raise ConfigError(
                f"need 1 <= min_moves <= max_moves, got {self.min_moves}..{self.max_moves}"
            )
        if len(set(self.sps)) != len(self.sps):
            raise ConfigError("duplicate start positions requested")
        for sp in self.sps:
            if not 0 <= sp <= 959:
                raise ConfigError(f"start position index out of range: {sp}")

    def required_move(self) -> int:
        """Lowest move number every kept game must reach."""
        if self.label_rule == "material-at-20":
            return max(self.min_moves, MATERIAL_MOVE)
        return self.min_moves


class GenerationError(RuntimeError):
    """All retries for one game slot ended before the required move."""


def _material_sign(p: Position) -> float:
    white = sum(1 for piece in p.board if piece is not None and piece.isupper())
    black = sum(1 for piece in p.board if piece is not None and piece.islower())
    if white > black:
        return 1.0
    if white < black:
        return 0.0
    return 0.5


def _playout(sp_index: int, cfg: SynthConfig, rng: np.random.Generator) -> tuple:
    """(san list, final position, material label at move 20 or None)."""
    p = initial_position(sp_backrank(sp_index))
    legal = legal_moves(p)
    sans: list = []
    material: Optional[float] = None
    while legal and p.fullmove_number <= cfg.max_moves:
        move = legal[int(rng.integers(len(legal)))]
        after = apply_move(p, move)
        after_legal = legal_moves(after)
        sans.append(san_of(p, move, legal=legal, applied=after, applied_legal=after_legal))
        p, legal = after, after_legal
        if material is None and p.side_to_move == WHITE and p.fullmove_number == MATERIAL_MOVE:
            material = _material_sign(p)
    return sans, p, material


def _label(cfg: SynthConfig, final: Position, material, rng: np.random.Generator) -> float:
    if cfg.label_rule == "material-at-20":
        return material
    if cfg.label_rule == "uniform-random":
        return (0.0, 0.5, 1.0)[int(rng.integers(3))]
    # from-play: a mate names the winner, anything else is a draw
    if not legal_moves(final) and is_check(final):
        return 1.0 if final.side_to_move == BLACK else 0.0
    return 0.5


def gen_game(sp_index: int, game_id: int, cfg: SynthConfig) -> GameRecord:
    """One reproducible playout; retries until it reaches the required move."""
    required = cfg.required_move()
    for attempt in range(RETRY_LIMIT):
        rng = np.random.default_rng([cfg.seed & 0xFFFFFFFF, sp_index, game_id, attempt])
        sans, final, material = _playout(sp_index, cfg, rng)
        if len(sans) // 2 + 1 < required:
            continue
        label = _label(cfg, final, material, rng)
        sp = sp_backrank(sp_index)
        tags = {
            "Event": "synthetic playout",
            "Site": "generated",
            "Round": str(game_id + 1),
            "White": "uniform-random",
            "Black": "uniform-random",
            "Result": _RESULT_TOKEN[label],
            "SetUp": "1",
            "FEN": emit_fen(initial_position(sp)),
            "Variant": "Chess960",
        }
        return GameRecord(sp=sp, san_moves=tuple(sans), result=label, tags=tags)
    raise GenerationError(
        f"sp {sp_index} game {game_id}: no playout reached move {required} "
        f"in {RETRY_LIMIT} attempts"
    )


def gen_corpus(cfg: SynthConfig) -> tuple:
    """(Corpus, diagnostics) for cfg.games_per_sp games per start position."""
    cfg.validate()
    games_by_sp: dict = {}
    diagnostics: list = []
    for sp_index in sorted(cfg.sps):
        games = []
        for game_id in range(cfg.games_per_sp):
            try:
                games.append(gen_game(sp_index, game_id, cfg))
            except GenerationError as exc:
                diagnostics.append(
                    SkipDiagnostic(f"synth:sp{sp_index:03d}", game_id + 1, str(exc))
                )
        if games:
            games_by_sp[sp_index] = tuple(games)
    return Corpus(games_by_sp), diagnostics


def _movetext(game: GameRecord) -> str:
    tokens = []
    for i, san in enumerate(game.san_moves):
        if i % 2 == 0:
            tokens.append(f"{i // 2 + 1}.")
        tokens.append(san)
    tokens.append(_RESULT_TOKEN[game.result])
    lines = []
    line = ""
    for token in tokens:
        if line and len(line) + 1 + len(token) > 79:
            lines.append(line)
            line = token
        else:
            line = token if not line else f"{line} {token}"
    lines.append(line)
    return "\n".join(lines)


def game_to_pgn(game: GameRecord) -> str:
    tag_lines = [f'[{name} "{value}"]' for name, value in game.tags.items()]
    return "\n".join(tag_lines) + "\n\n" + _movetext(game) + "\n"


def write_pgn_dir(corpus: Corpus, out_dir) -> list:
    """One PGN file per start position; returns the paths written."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for sp_index, games in sorted(corpus.games_by_sp.items()):
        path = os.path.join(out_dir, f"sp{sp_index:03d}.pgn")
        with open(path, "w") as handle:
            handle.write("\n".join(game_to_pgn(game) for game in games))
        paths.append(path)
    return paths
