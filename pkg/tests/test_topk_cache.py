# Copyright © 2025 BEDLAM520 Development
# -*- coding: utf-8 -*-

"""Unit tests for save_topk_cache / load_topk_cache in ppr_engine.py.

"""

import tempfile
import unittest
from pathlib import Path

import numpy as np

from bias_extractor import materialize_all
from errors import FormatError
from ppr_engine import PprConfig, TopKCache, load_topk_cache, save_topk_cache
from wordnet_fixture import synthetic_graph


class TestTopKCache(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = Path(self.tmp.name) / "ppr.cache"
        self.graph = synthetic_graph("random-10", lemmas_per_node=2)
        self.config = PprConfig()

    def tearDown(self):
        self.tmp.cleanup()

    def _cache(self, k):
        rankings = {}
        materialize_all(self.graph, self.config, k, rankings_out=rankings)
        return TopKCache(self.graph.fingerprint, 0.85, 1e-9, 30, k, rankings)

    def test_reload(self):
        cache = self._cache(5)
        save_topk_cache(self.path, cache)
        loaded = load_topk_cache(self.path)
        self.assertEqual(loaded.fingerprint, self.graph.fingerprint)
        self.assertEqual(loaded.k, 5)
        self.assertEqual(sorted(loaded.rankings), sorted(cache.rankings))
        for node, (indices, scores) in cache.rankings.items():
            np.testing.assert_array_equal(loaded.rankings[node][0], indices)
            np.testing.assert_array_equal(loaded.rankings[node][1], scores)

    def test_matches(self):
        """A cache serves any k up to the one it was built for, with the same settings."""
        cache = self._cache(5)
        self.assertTrue(cache.matches(self.graph.fingerprint, self.config, 5))
        self.assertTrue(cache.matches(self.graph.fingerprint, self.config, 3))
        self.assertFalse(cache.matches(self.graph.fingerprint, self.config, 6))
        self.assertFalse(cache.matches(self.graph.fingerprint, PprConfig(damping=0.5), 5))
        self.assertFalse(cache.matches("0" * 64, self.config, 5))

    def test_cached_lists_equal_fresh_lists(self):
        """Lists rebuilt from the cache equal freshly computed ones, also for smaller k."""
        cache = self._cache(6)
        for k in (6, 4, 1):
            with self.subTest(k=k):
                fresh = materialize_all(self.graph, self.config, k)
                cached = materialize_all(self.graph, self.config, k, cache=cache)
                self.assertEqual(fresh, cached)

    def test_bad_magic(self):
        self.path.write_bytes(b"XXXX" + bytes(100))
        with self.assertRaises(FormatError):
            load_topk_cache(self.path)

    def test_truncated(self):
        save_topk_cache(self.path, self._cache(5))
        data = self.path.read_bytes()
        self.path.write_bytes(data[:-7])
        with self.assertRaises(FormatError):
            load_topk_cache(self.path)


if __name__ == "__main__":
    unittest.main()
