# Copyright © 2025 BEDLAM520 Development
# -*- coding: utf-8 -*-

"""Unit tests for antonym_linked in wordnet_graph.py.

"""

import tempfile
import unittest
from pathlib import Path

from errors import UnknownSynsetError
from wordnet_fixture import write_wordnet
from wordnet_graph import SynsetId, antonym_linked, build_graph, parse_wordnet


class TestAntonymLinked(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.ids = write_wordnet(Path(cls.tmp.name))
        cls.graph = build_graph(parse_wordnet(Path(cls.tmp.name)))

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def test_antonyms_both_directions(self):
        """sunrise/sunset are linked whichever comes first."""
        self.assertTrue(antonym_linked(self.graph, self.ids["sunrise"], self.ids["sunset"]))
        self.assertTrue(antonym_linked(self.graph, self.ids["sunset"], self.ids["sunrise"]))

    def test_adjective_antonyms(self):
        self.assertTrue(antonym_linked(self.graph, self.ids["hot"], self.ids["cold"]))

    def test_related_but_not_antonyms(self):
        """Other pointer types do not count."""
        self.assertFalse(antonym_linked(self.graph, self.ids["sunrise"], self.ids["hour"]))
        self.assertFalse(antonym_linked(self.graph, self.ids["hot"], self.ids["warm"]))

    def test_same_synset(self):
        self.assertFalse(antonym_linked(self.graph, self.ids["hot"], self.ids["hot"]))

    def test_unknown_synset(self):
        with self.assertRaises(UnknownSynsetError):
            antonym_linked(self.graph, self.ids["hot"], SynsetId("a", 3))


if __name__ == "__main__":
    unittest.main()
