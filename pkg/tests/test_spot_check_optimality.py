# Copyright © 2025 BEDLAM520 Development
# -*- coding: utf-8 -*-

"""Unit tests for optimality_residual and spot_check_optimality in deconflator.py.

"""

import tempfile
import unittest
from pathlib import Path

import numpy as np

from bias_extractor import BiasEntry, BiasList, materialize_all
from deconflator import (
    OPTIMALITY_TOLERANCE,
    DeconfConfig,
    deconflate_sense,
    optimality_residual,
    spot_check_optimality,
    train_all,
    weighted_bias_terms,
)
from vector_store import VectorStore
from wordnet_fixture import toy_store, write_wordnet
from wordnet_graph import SynsetId, build_graph, parse_wordnet


class TestOptimalityResidual(unittest.TestCase):
    def setUp(self):
        rng = np.random.default_rng(3)
        words = ["lemma"] + [f"b{i}" for i in range(6)]
        self.store = VectorStore(words, rng.standard_normal((len(words), 10)))
        sid = SynsetId("n", 100)
        self.bias = BiasList(sid, tuple(BiasEntry(f"b{i}", i, sid) for i in range(6)))
        self.config = DeconfConfig(alpha=1.0, lam=0.2, k=6)

    def test_closed_form_is_stationary(self):
        lemma = self.store["lemma"]
        optimum = deconflate_sense(lemma, self.bias, self.store, self.config)
        terms = weighted_bias_terms(self.bias, self.store, self.config)
        self.assertLess(optimality_residual(optimum, lemma, terms, 1.0), OPTIMALITY_TOLERANCE)

    def test_shifted_vector_is_not(self):
        lemma = self.store["lemma"]
        optimum = deconflate_sense(lemma, self.bias, self.store, self.config)
        terms = weighted_bias_terms(self.bias, self.store, self.config)
        self.assertGreater(optimality_residual(optimum + 0.1, lemma, terms, 1.0), 1e-3)

    def test_lemma_only_sense(self):
        lemma = self.store["lemma"]
        self.assertEqual(optimality_residual(lemma, lemma, [], 1.0), 0.0)


class TestSpotCheckOptimality(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        write_wordnet(Path(cls.tmp.name) / "dict")
        graph = build_graph(parse_wordnet(Path(cls.tmp.name) / "dict"))
        cls.lists = materialize_all(graph, k=25)
        cls.store = toy_store()
        cls.space, _ = train_all(graph, cls.lists, cls.store)

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def test_trained_space_passes(self):
        failures = spot_check_optimality(self.space.sense_vectors, self.lists, self.store)
        self.assertEqual(failures, [])

    def test_corrupted_sense_warns(self):
        vectors = dict(self.space.sense_vectors)
        key = self.space.sense_keys()[0]
        vectors[key] = vectors[key] + 0.5
        with self.assertLogs("sensesplit.train", level="WARNING") as logs:
            failures = spot_check_optimality(vectors, self.lists, self.store, sample_size=1000)
        self.assertEqual([k for k, _ in failures], [key])
        self.assertIn(key, logs.output[0])

    def test_sample_is_capped(self):
        vectors = {k: v + 0.5 for k, v in self.space.sense_vectors.items()}
        with self.assertLogs("sensesplit.train", level="WARNING"):
            failures = spot_check_optimality(vectors, self.lists, self.store, sample_size=3)
        self.assertEqual(len(failures), 3)


if __name__ == "__main__":
    unittest.main()
