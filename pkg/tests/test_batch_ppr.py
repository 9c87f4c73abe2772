# Copyright © 2025 BEDLAM520 Development
# -*- coding: utf-8 -*-

"""Unit tests for batch_ppr in ppr_engine.py.

"""

import unittest

from errors import BatchSummary
from ppr_engine import build_transition, batch_ppr, personalized_pagerank
from wordnet_fixture import synthetic_graph
from wordnet_graph import SynsetId


class TestBatchPpr(unittest.TestCase):
    def setUp(self):
        self.graph = synthetic_graph("random-10")
        self.transition = build_transition(self.graph)

    def test_input_order_kept(self):
        """Results come back in target order for any thread count."""
        targets = list(reversed(self.graph.ids))
        for n_jobs in (1, 4):
            with self.subTest(n_jobs=n_jobs):
                vectors = list(batch_ppr(self.transition, targets, n_jobs=n_jobs))
                self.assertEqual([v.target for v in vectors], targets)

    def test_matches_single_runs(self):
        vectors = list(batch_ppr(self.transition, self.graph.ids, n_jobs=3))
        for vector in vectors:
            single = personalized_pagerank(self.transition, vector.target)
            self.assertEqual(vector.scores.tobytes(), single.scores.tobytes())

    def test_failures_recorded_not_raised(self):
        """An unknown target is skipped and reported in the summary."""
        summary = BatchSummary("ppr")
        targets = [self.graph.ids[0], SynsetId("n", 7), self.graph.ids[1]]
        vectors = list(batch_ppr(self.transition, targets, summary=summary))
        self.assertEqual([v.target for v in vectors], [self.graph.ids[0], self.graph.ids[1]])
        self.assertEqual(summary.succeeded, 2)
        self.assertEqual(summary.failures[0][0], "n#00000007")
        self.assertEqual(summary.total, 3)


if __name__ == "__main__":
    unittest.main()
