# Copyright © 2025 BEDLAM520 Development
# -*- coding: utf-8 -*-

"""Unit tests for antonym_adjust in eval_harness.py.

"""

import tempfile
import unittest
from pathlib import Path

from eval_harness import ANTONYM_DIVISOR, antonym_adjust
from wordnet_fixture import write_wordnet
from wordnet_graph import build_graph, parse_wordnet, sense_key


class TestAntonymAdjust(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.ids = write_wordnet(Path(cls.tmp.name))
        cls.graph = build_graph(parse_wordnet(Path(cls.tmp.name)))

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def test_antonyms_divided(self):
        self.assertAlmostEqual(antonym_adjust(0.8, "sunrise", "sunset", self.graph), 0.16, places=12)
        self.assertAlmostEqual(antonym_adjust(0.5, "cold", "hot", self.graph), 0.5 / ANTONYM_DIVISOR, places=12)

    def test_synonym_of_antonym(self):
        """dawn shares the sunrise synset, so it is adjusted too."""
        self.assertAlmostEqual(antonym_adjust(0.8, "dawn", "sunset", self.graph), 0.16, places=12)

    def test_unrelated_unchanged(self):
        self.assertEqual(antonym_adjust(0.8, "finger", "toe", self.graph), 0.8)
        self.assertEqual(antonym_adjust(0.8, "sunrise", "hour", self.graph), 0.8)
        self.assertEqual(antonym_adjust(0.8, "qwzxv", "sunset", self.graph), 0.8)

    def test_never_increases(self):
        for score in (-0.9, -0.1, 0.0):
            with self.subTest(score=score):
                self.assertEqual(antonym_adjust(score, "sunrise", "sunset", self.graph), score)

    def test_sense_key_uses_its_own_synset(self):
        sunrise = sense_key("sunrise", self.ids["sunrise"])
        self.assertAlmostEqual(antonym_adjust(1.0, sunrise, "sunset", self.graph), 0.2, places=12)
        hour = sense_key("hour", self.ids["hour"])
        self.assertEqual(antonym_adjust(1.0, hour, "sunset", self.graph), 1.0)


if __name__ == "__main__":
    unittest.main()
