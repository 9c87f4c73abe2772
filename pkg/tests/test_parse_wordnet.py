# Copyright © 2025 BEDLAM520 Development
# -*- coding: utf-8 -*-

"""Unit tests for parse_wordnet in wordnet_graph.py.

Covers offsets, satellite folding, pointer resolution and the error paths.

"""

import tempfile
import unittest
from pathlib import Path

from errors import IntegrityError, WordNetLoadError, WordNetParseError
from wordnet_fixture import LICENSE, MINI_WORDNET, TOY_WORDNET, Entry, write_wordnet
from wordnet_graph import SynsetId, parse_wordnet


class TestParseWordNet(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_toy_database(self):
        """Every synset is read, in noun, verb, adjective, adverb order."""
        ids = write_wordnet(self.dir)
        synsets = parse_wordnet(self.dir)
        self.assertEqual(len(synsets), len(TOY_WORDNET))
        self.assertEqual(synsets[0].id, ids["digit_anat"])
        self.assertEqual(synsets[0].lemmas, ("digit", "dactyl"))
        self.assertEqual([s.id.pos for s in synsets][-1], "r")

    def test_offsets_start_after_license(self):
        """The first synset sits right after the license header."""
        ids = write_wordnet(self.dir)
        self.assertEqual(ids["digit_anat"], SynsetId("n", len(LICENSE)))
        by_id = {s.id: s for s in parse_wordnet(self.dir)}
        self.assertIn(ids["finger"], by_id)

    def test_satellite_folded_and_marker_stripped(self):
        """Satellites become adjectives and lose their (a)/(p) marker."""
        ids = write_wordnet(self.dir)
        by_id = {s.id: s for s in parse_wordnet(self.dir)}
        warm = by_id[ids["warm"]]
        self.assertEqual(warm.id.pos, "a")
        self.assertEqual(warm.lemmas, ("warm",))

    def test_pointers_resolved(self):
        """Pointers carry their symbol and the resolved target id."""
        ids = write_wordnet(self.dir)
        by_id = {s.id: s for s in parse_wordnet(self.dir)}
        sunrise = by_id[ids["sunrise"]]
        self.assertIn(("!", ids["sunset"]), sunrise.relation_targets)
        self.assertEqual(sunrise.antonym_targets, frozenset({ids["sunset"]}))
        rise = by_id[ids["rise"]]
        self.assertEqual(rise.relation_targets, (("+", ids["sunrise"]),))

    def test_gloss_kept(self):
        ids = write_wordnet(self.dir)
        by_id = {s.id: s for s in parse_wordnet(self.dir)}
        self.assertEqual(by_id[ids["hermit"]].gloss, "one retired from society")

    def test_self_loop_dropped(self):
        """A pointer back to its own synset is not kept."""
        entries = (Entry("alpha", "n", ("alpha",), (("@", "alpha", "0000"), ("@", "beta", "0000"))),) + MINI_WORDNET[1:]
        ids = write_wordnet(self.dir, entries)
        synsets = parse_wordnet(self.dir)
        self.assertEqual(synsets[0].relation_targets, (("@", ids["beta"]),))

    def test_missing_file(self):
        """A missing data file is a load error."""
        write_wordnet(self.dir, MINI_WORDNET)
        (self.dir / "data.adv").unlink()
        with self.assertRaises(WordNetLoadError):
            parse_wordnet(self.dir)

    def test_wrong_offset_reports_byte_position(self):
        """An offset field that disagrees with the line position names that position."""
        write_wordnet(self.dir, MINI_WORDNET)
        path = self.dir / "data.noun"
        text = path.read_text()
        start = len(LICENSE)
        path.write_text(text[:start] + "99999999" + text[start + 8:])
        with self.assertRaises(WordNetParseError) as ctx:
            parse_wordnet(self.dir)
        self.assertEqual(ctx.exception.byte_offset, start)
        self.assertEqual(ctx.exception.path, path)

    def test_truncated_line(self):
        """A line cut off inside its pointer list is a parse error."""
        write_wordnet(self.dir, MINI_WORDNET)
        path = self.dir / "data.noun"
        first, second = path.read_text()[len(LICENSE):].splitlines(keepends=True)
        path.write_text(LICENSE + first.split(" @ ")[0] + "\n" + second)
        with self.assertRaises(WordNetParseError):
            parse_wordnet(self.dir)

    def test_dangling_pointer(self):
        """A pointer to an offset no file defines is an integrity error."""
        write_wordnet(self.dir, MINI_WORDNET)
        path = self.dir / "data.noun"
        text = path.read_text()
        first_end = text.index("\n", len(LICENSE))
        line = text[len(LICENSE):first_end]
        target = line.split(" @ ")[1][:8]
        broken = line.replace(f"@ {target}", "@ 00000001")
        path.write_text(LICENSE + broken + text[first_end:])
        with self.assertRaises(IntegrityError):
            parse_wordnet(self.dir)

    def test_thread_count_does_not_change_result(self):
        write_wordnet(self.dir)
        self.assertEqual(parse_wordnet(self.dir, n_jobs=1), parse_wordnet(self.dir, n_jobs=4))


if __name__ == "__main__":
    unittest.main()
