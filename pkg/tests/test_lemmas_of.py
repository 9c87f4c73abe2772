# Copyright © 2025 BEDLAM520 Development
# -*- coding: utf-8 -*-

"""Unit tests for lemmas_of and the key helpers in wordnet_graph.py.

"""

import tempfile
import unittest
from pathlib import Path

from errors import ConfigError, UnknownSynsetError
from wordnet_fixture import MINI_WORDNET, write_wordnet
from wordnet_graph import (
    SynsetId,
    build_graph,
    lemmas_of,
    parse_synset_key,
    parse_wordnet,
    sense_key,
    split_sense_key,
    synset_key,
)


class TestLemmasOf(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.ids = write_wordnet(Path(self.tmp.name), MINI_WORDNET)
        self.graph = build_graph(parse_wordnet(Path(self.tmp.name)))

    def tearDown(self):
        self.tmp.cleanup()

    def test_file_order(self):
        """Lemmas come back in data-file order."""
        self.assertEqual(lemmas_of(self.graph, self.ids["beta"]), ["beta", "b"])

    def test_unknown_synset(self):
        with self.assertRaises(UnknownSynsetError):
            lemmas_of(self.graph, SynsetId("v", 12))


class TestKeys(unittest.TestCase):
    def test_synset_key(self):
        self.assertEqual(synset_key(SynsetId("n", 5)), "n#00000005")
        self.assertEqual(str(SynsetId("a", 1740)), "a#00001740")

    def test_sense_key(self):
        self.assertEqual(sense_key("bass", SynsetId("n", 7)), "bass#n#00000007")

    def test_parse_synset_key(self):
        self.assertEqual(parse_synset_key("n#00001740"), SynsetId("n", 1740))
        self.assertEqual(parse_synset_key("s 00001740"), SynsetId("a", 1740))
        with self.assertRaises(ConfigError):
            parse_synset_key("x#12")

    def test_split_sense_key_keeps_hash_in_lemma(self):
        """Only the last two fields are split off."""
        self.assertEqual(split_sense_key("c#_language#n#00000042"), ("c#_language", SynsetId("n", 42)))
        with self.assertRaises(ConfigError):
            split_sense_key("bass")


if __name__ == "__main__":
    unittest.main()
