# Copyright © 2025 BEDLAM520 Development
# -*- coding: utf-8 -*-

"""Unit tests for avg_sim_c, sense_weights and context_vector in eval_harness.py.

"""

import math
import unittest

import numpy as np

from eval_harness import SimilarityPair, avg_sim, avg_sim_c, context_vector, sense_weights
from wordnet_fixture import sense_resources


class TestAvgSimC(unittest.TestCase):
    def setUp(self):
        self.resources = sense_resources()

    def test_context_favors_matching_sense(self):
        """A fish context pulls weight to the fish-like bass sense."""
        pair = SimilarityPair("bass", "pitch", 1.0, ("fish",), ("music",))
        self.assertAlmostEqual(avg_sim_c(pair, self.resources), 1 / (1 + math.e), places=12)

    def test_weight_order(self):
        unit = np.array([[1.0, 0.0], [0.0, 1.0]])
        weights = sense_weights(unit, np.array([0.0, 3.0]))
        self.assertGreater(weights[1], weights[0])
        self.assertAlmostEqual(weights.sum(), 1.0, places=12)

    def test_uniform_fallback_equals_avg_sim(self):
        """Without usable context the score equals AvgSim."""
        for left, right in (("bass", "pitch"), ("flip", "bass"), ("trout", "bass")):
            pair = SimilarityPair(left, right, 1.0, ("the",), None)
            self.assertAlmostEqual(
                avg_sim_c(pair, self.resources), avg_sim(left, right, self.resources), delta=1e-12
            )

    def test_single_senses_ignore_context(self):
        pair = SimilarityPair("pitch", "trout", 1.0, ("fish",), ("bass",))
        self.assertAlmostEqual(avg_sim_c(pair, self.resources), avg_sim("pitch", "trout", self.resources), delta=1e-12)

    def test_context_vector_skips_stopwords_and_oov(self):
        vector = context_vector(("The", "fish", "qwzxv"), self.resources.store)
        np.testing.assert_array_equal(vector, [0.0, 1.0])
        self.assertIsNone(context_vector(("the", "qwzxv"), self.resources.store))
        self.assertIsNone(context_vector(None, self.resources.store))


if __name__ == "__main__":
    unittest.main()
