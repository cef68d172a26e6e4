import io

import pytest

from c960.board import (
    STANDARD_SP_INDEX,
    backrank_index_table,
    emit_fen,
    initial_position,
    sp_backrank,
)
from c960.pgn import load_corpus, parse_pgn_stream, parse_pgn_text

MINIMAL = """\
[Event "Test"]
[Result "1-0"]

1. e4 e5 2. Nf3 Nc6 3. Bb5 a6 1-0
"""


def only_record(text):
    records, diagnostics = parse_pgn_text(text)
    assert diagnostics == [], diagnostics
    assert len(records) == 1
    return records[0]


class TestBasicParsing:
    def test_minimal_game(self):
        g = only_record(MINIMAL)
        assert g.san_moves == ("e4", "e5", "Nf3", "Nc6", "Bb5", "a6")
        assert g.result == 1.0
        assert g.sp.index == STANDARD_SP_INDEX
        assert g.tags["Event"] == "Test"

    def test_result_labels(self):
        for token, label in (("1-0", 1.0), ("0-1", 0.0), ("1/2-1/2", 0.5)):
            g = only_record(f'[Result "{token}"]\n\n1. e4 e5 {token}\n')
            assert g.result == label

    def test_comments_variations_nags_stripped(self):
        text = (
            '[Result "1-0"]\n\n'
            "1. e4 {a comment} e5 $1 2. Nf3 (2. f4 exf4 {gambit}) 2... Nc6 1-0\n"
        )
        g = only_record(text)
        assert g.san_moves == ("e4", "e5", "Nf3", "Nc6")

    def test_semicolon_and_percent_lines(self):
        text = (
            "%this whole line is skipped\n"
            '[Result "0-1"]\n\n'
            "1. e4 ; rest of line ignored\n"
            "1... e5 0-1\n"
        )
        g = only_record(text)
        assert g.san_moves == ("e4", "e5")

    def test_result_tag_fallback_without_terminator(self):
        g = only_record('[Result "1/2-1/2"]\n\n1. e4 e5\n')
        assert g.result == 0.5

    def test_terminator_beats_result_tag(self):
        g = only_record('[Result "0-1"]\n\n1. e4 e5 1-0\n')
        assert g.result == 1.0

    def test_multiple_games(self):
        records, diagnostics = parse_pgn_text(MINIMAL + "\n" + MINIMAL.replace("1-0", "0-1"))
        assert diagnostics == []
        assert [g.result for g in records] == [1.0, 0.0]

    def test_moves_without_tag_section(self):
        records, diagnostics = parse_pgn_text("1. e4 e5 1-0\n")
        assert diagnostics == []
        assert records[0].san_moves == ("e4", "e5")

    def test_escaped_quote_in_tag(self):
        g = only_record('[Event "say \\"hi\\""]\n[Result "1-0"]\n\n1. e4 1-0\n')
        assert g.tags["Event"] == 'say "hi"'


class TestSkips:
    def reason_of(self, text):
        records, diagnostics = parse_pgn_text(text, path="p.pgn")
        assert records == []
        assert len(diagnostics) == 1
        d = diagnostics[0]
        assert d.path == "p.pgn" and d.ordinal == 1
        return d.reason

    def test_unknown_result_star(self):
        assert "result unknown" in self.reason_of('[Event "x"]\n\n1. e4 e5 *\n')

    def test_missing_result_entirely(self):
        assert "result unknown" in self.reason_of('[Event "x"]\n\n1. e4 e5\n')

    def test_empty_movetext(self):
        assert self.reason_of('[Result "1-0"]\n\n1-0\n') == "empty movetext"

    def test_unparseable_token(self):
        reason = self.reason_of('[Result "1-0"]\n\n1. e4 zz9x 1-0\n')
        assert reason == "unparseable token 'zz9x'"

    def test_illegal_move_names_token_and_halfmove(self):
        reason = self.reason_of('[Result "1-0"]\n\n1. e4 e5 2. Qxe5 1-0\n')
        assert reason == "illegal move 'Qxe5' at halfmove 3"

    def test_bad_fen_tag(self):
        reason = self.reason_of('[FEN "not a fen"]\n[Result "1-0"]\n\n1. e4 1-0\n')
        assert reason.startswith("bad FEN tag")

    def test_fen_not_a_start_position(self):
        fen = "rnbqkbnr/pppppppp/8/8/4P3/8/PPPP1PPP/RNBQKBNR b HAha e3 0 1"
        reason = self.reason_of(f'[FEN "{fen}"]\n[Result "1-0"]\n\n1... e5 1-0\n')
        assert reason == "FEN tag is not a Chess960 start position"

    def test_skip_does_not_poison_next_game(self):
        text = '[Result "1-0"]\n\n1. e4 junk&token 1-0\n\n' + MINIMAL
        records, diagnostics = parse_pgn_text(text)
        assert len(records) == 1 and len(diagnostics) == 1
        assert diagnostics[0].ordinal == 1
        assert records[0].san_moves[0] == "e4"

    def test_kept_plus_skipped_counts_every_game(self):
        text = MINIMAL + '\n[Result "1-0"]\n\n1. e4 e5 2. Qxe5 1-0\n\n' + MINIMAL
        records, diagnostics = parse_pgn_text(text)
        assert len(records) + len(diagnostics) == 3
        assert [d.ordinal for d in diagnostics] == [2]


class TestStartResolution:
    def test_fen_tag_sets_start(self):
        sp = sp_backrank(0)
        fen = emit_fen(initial_position(sp))
        g = only_record(f'[FEN "{fen}"]\n[Result "1-0"]\n\n1. d4 1-0\n')
        assert g.sp.index == 0

    def test_default_is_standard(self):
        g = only_record('[Result "1-0"]\n\n1. e4 1-0\n')
        assert g.sp.index == STANDARD_SP_INDEX

    def test_backrank_in_variant_tag(self):
        index = backrank_index_table()["BBQNNRKR"]
        g = only_record('[Variant "bbqnnrkr"]\n[Result "1-0"]\n\n1. d4 1-0\n')
        assert g.sp.index == index

    def test_backrank_tag_order(self):
        table = backrank_index_table()
        text = (
            '[Opening "RKRNNQBB"]\n'
            '[StartPosition "NRKNBBQR"]\n'
            '[Result "1-0"]\n\n1. d4 1-0\n'
        )
        g = only_record(text)
        assert g.sp.index == table["NRKNBBQR"]

    def test_illegal_letter_run_falls_through(self):
        # Eight piece letters but not a legal backrank; default applies.
        g = only_record('[Variant "KQRBNKKK"]\n[Result "1-0"]\n\n1. e4 1-0\n')
        assert g.sp.index == STANDARD_SP_INDEX

    def test_fen_beats_backrank_tags(self):
        sp = sp_backrank(100)
        fen = emit_fen(initial_position(sp))
        text = f'[FEN "{fen}"]\n[Variant "RNBQKBNR"]\n[Result "1-0"]\n\n1. d4 1-0\n'
        assert only_record(text).sp.index == 100


class TestStreamsAndFiles:
    def test_bytes_and_file_objects(self):
        from_text, _ = parse_pgn_text(MINIMAL)
        from_bytes, _ = parse_pgn_stream(MINIMAL.encode())
        from_file, _ = parse_pgn_stream(io.StringIO(MINIMAL))
        assert from_bytes == from_text
        assert from_file == from_text

    def test_load_corpus_groups_and_counts(self, tmp_path):
        a = tmp_path / "a.pgn"
        b = tmp_path / "b.pgn"
        a.write_text(MINIMAL + "\n" + MINIMAL)
        sp = sp_backrank(7)
        fen = emit_fen(initial_position(sp))
        b.write_text(
            f'[FEN "{fen}"]\n[Result "0-1"]\n\n1. d4 0-1\n\n'
            '[Result "1-0"]\n\n1. e4 e5 2. Qxe5 1-0\n'
        )
        result = load_corpus([a, b])
        assert result.total_kept() == 3
        assert result.corpus.counts() == {7: 1, STANDARD_SP_INDEX: 2}
        assert result.per_file[str(a)] == {"kept": 2, "skipped": 0}
        assert result.per_file[str(b)] == {"kept": 1, "skipped": 1}
        assert len(result.diagnostics) == 1
        assert result.diagnostics[0].path == str(b)
