# Copyright © 2025 BEDLAM520 Development
# -*- coding: utf-8 -*-

"""Unit tests for personalized_pagerank in ppr_engine.py.

Power iteration is checked against the dense linear-system solution
p = (1 - sigma) (I - sigma M^T)^-1 e_t on the synthetic graphs.

"""

import unittest

import numpy as np

from errors import ConfigError, IsolatedTargetError, UnknownSynsetError
from ppr_engine import PprConfig, build_transition, personalized_pagerank
from wordnet_fixture import SYNTHETIC_EDGES, synthetic_graph
from wordnet_graph import Synset, SynsetId, build_graph

CONVERGED = PprConfig(damping=0.85, max_iterations=2000, tolerance=0.0)


def dense_ppr(graph, target_index, damping):
    adjacency = graph.adjacency().toarray()
    transition = adjacency / adjacency.sum(axis=1, keepdims=True)
    m = graph.node_count
    teleport = np.zeros(m)
    teleport[target_index] = 1.0
    return (1 - damping) * np.linalg.solve(np.eye(m) - damping * transition.T, teleport)


class TestPersonalizedPageRank(unittest.TestCase):
    def test_matches_linear_solve(self):
        """Every target of every synthetic graph agrees with the dense solution to 1e-8."""
        for name in SYNTHETIC_EDGES:
            graph = synthetic_graph(name)
            transition = build_transition(graph)
            for t, sid in enumerate(graph.ids):
                with self.subTest(graph=name, target=t):
                    ppr = personalized_pagerank(transition, sid, CONVERGED)
                    np.testing.assert_allclose(ppr.scores, dense_ppr(graph, t, 0.85), rtol=0, atol=1e-8)

    def test_distribution_sums_to_one(self):
        """Even the truncated default run is a probability distribution."""
        graph = synthetic_graph("random-10")
        transition = build_transition(graph)
        for sid in graph.ids:
            scores = personalized_pagerank(transition, sid).scores
            self.assertAlmostEqual(scores.sum(), 1.0, delta=1e-6)
            self.assertTrue(np.all(scores >= 0))

    def test_target_scores_highest(self):
        graph = synthetic_graph("star-5")
        scores = personalized_pagerank(build_transition(graph), graph.ids[3], CONVERGED).scores
        self.assertEqual(int(np.argmax(scores)), 3)

    def test_residuals_non_increasing(self):
        graph = synthetic_graph("random-10")
        ppr = personalized_pagerank(build_transition(graph), graph.ids[0], PprConfig(0.85, 200, 1e-12))
        residuals = ppr.residuals
        self.assertTrue(all(b <= a + 1e-15 for a, b in zip(residuals[1:], residuals[2:])))
        self.assertLess(residuals[-1], 1e-12)
        self.assertEqual(ppr.iterations, len(residuals))

    def test_stops_at_iteration_cap(self):
        graph = synthetic_graph("triangle")
        ppr = personalized_pagerank(build_transition(graph), graph.ids[0], PprConfig(0.85, 3, 0.0))
        self.assertEqual(ppr.iterations, 3)

    def test_deterministic(self):
        graph = synthetic_graph("random-10")
        transition = build_transition(graph)
        first = personalized_pagerank(transition, graph.ids[4])
        second = personalized_pagerank(transition, graph.ids[4])
        self.assertEqual(first.scores.tobytes(), second.scores.tobytes())

    def test_isolated_target(self):
        """A synset without neighbors cannot be a target."""
        synsets = [
            Synset(SynsetId("n", 1), ("a",), (("@", SynsetId("n", 2)),)),
            Synset(SynsetId("n", 2), ("b",)),
            Synset(SynsetId("n", 3), ("c",)),
        ]
        transition = build_transition(build_graph(synsets))
        with self.assertRaises(IsolatedTargetError):
            personalized_pagerank(transition, SynsetId("n", 3))
        scores = personalized_pagerank(transition, SynsetId("n", 1)).scores
        self.assertEqual(scores[2], 0.0)

    def test_unknown_target(self):
        transition = build_transition(synthetic_graph("path-3"))
        with self.assertRaises(UnknownSynsetError):
            personalized_pagerank(transition, SynsetId("v", 100))


class TestPprConfig(unittest.TestCase):
    def test_defaults(self):
        config = PprConfig()
        self.assertEqual((config.damping, config.max_iterations, config.tolerance), (0.85, 30, 1e-9))

    def test_rejects_bad_values(self):
        for kwargs in ({"damping": 1.0}, {"damping": 0.0}, {"max_iterations": 0}, {"tolerance": -1.0}):
            with self.subTest(**kwargs), self.assertRaises(ConfigError):
                PprConfig(**kwargs)


if __name__ == "__main__":
    unittest.main()
