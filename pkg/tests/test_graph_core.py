import unittest
from itertools import product

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

try:
    from finite_forge import domain, graph_core
    from finite_forge.repositories import BudgetExceededError, MalformedMapError, SchemaError
except ModuleNotFoundError:
    import domain
    import graph_core
    from repositories import BudgetExceededError, MalformedMapError, SchemaError


def path(n):
    return graph_core.make_graph(n, [(i, i + 1) for i in range(n - 1)])


def brute_force_epi(h, hprime):
    adj = graph_core.adjacency(h)
    for images in product(range(h.n), repeat=hprime.n):
        if len(set(images)) == h.n and all(images[j] in adj[images[i]] for i, j in hprime.edges):
            return True
    return False


class TestGraphBasics(unittest.TestCase):
    def test_edges_are_normalised(self):
        g = graph_core.make_graph(3, [(2, 0), (0, 2), (1, 0)])
        self.assertEqual(graph_core.sorted_edges(g), [(0, 1), (0, 2)])

    def test_schema_errors_point_at_the_edge(self):
        for edges, pointer in (([(0, 0)], "edges.0"), ([(0, 1), (1, 5)], "edges.1")):
            with self.subTest(edges=edges):
                with self.assertRaises(SchemaError) as caught:
                    graph_core.make_graph(3, edges)
                self.assertEqual(caught.exception.pointer, pointer)

    def test_distance_matrix(self):
        g = graph_core.make_graph(4, [(0, 1), (1, 2)])
        dist = graph_core.distance_matrix(g)
        self.assertEqual(dist[0][2], 2)
        self.assertIsNone(dist[0][3])

    def test_complement_and_relabel(self):
        g = path(3)
        self.assertEqual(graph_core.sorted_edges(graph_core.complement(g)), [(0, 2)])
        self.assertEqual(graph_core.sorted_edges(graph_core.relabel(g, [2, 0, 1])), [(0, 1), (0, 2)])

    def test_networkx_round_trip(self):
        g = graph_core.make_graph(4, [(0, 3), (1, 2)])
        self.assertEqual(graph_core.graph_from_networkx(graph_core.to_networkx(g)), g)


class TestSearches(unittest.TestCase):
    def test_least_embedding_of_path_in_claw(self):
        claw = graph_core.make_graph(4, [(0, 1), (0, 2), (0, 3)])
        m = graph_core.find_embedding(path(3), claw)
        self.assertEqual(m.images, (1, 0, 2))
        self.assertTrue(graph_core.is_embedding(path(3), claw, m))

    def test_embeddings_compose(self):
        claw = graph_core.make_graph(4, [(0, 1), (0, 2), (0, 3)])
        first = graph_core.find_embedding(path(2), path(3))
        second = graph_core.find_embedding(path(3), claw)
        composed = graph_core.compose_maps(first, second)
        self.assertEqual(composed.images, (1, 0))
        self.assertTrue(composed.injective)
        self.assertTrue(graph_core.is_embedding(path(2), claw, composed))
        folded = graph_core.compose_maps(first, domain.VertexMap(images=(0, 1, 0), injective=False))
        self.assertEqual(folded.images, (0, 1))
        self.assertFalse(folded.injective)

    def test_embedding_is_induced(self):
        triangle = graph_core.make_graph(3, [(0, 1), (1, 2), (0, 2)])
        self.assertIsNone(graph_core.find_embedding(path(3), triangle))

    def test_embedding_agrees_with_networkx(self):
        corpus = graph_core.graph_corpus(4)
        for g in corpus:
            for h in corpus:
                found = graph_core.find_embedding(g, h) is not None
                matcher = GraphMatcher(graph_core.to_networkx(h), graph_core.to_networkx(g))
                self.assertEqual(found, matcher.subgraph_is_isomorphic(), (g, h))

    def test_no_epimorphism_from_triangle_onto_edge(self):
        triangle = graph_core.make_graph(3, [(0, 1), (1, 2), (0, 2)])
        edge = path(2)
        self.assertIsNone(graph_core.find_epimorphism(edge, triangle))

    def test_path_folds_onto_edge(self):
        m = graph_core.find_epimorphism(path(2), path(3))
        self.assertEqual(m.images, (0, 1, 0))
        self.assertTrue(graph_core.is_epimorphism(path(2), path(3), m))

    def test_epimorphism_agrees_with_brute_force(self):
        corpus = graph_core.graph_corpus(3)
        for h in corpus:
            for hprime in corpus:
                found = graph_core.find_epimorphism(h, hprime) is not None
                self.assertEqual(found, brute_force_epi(h, hprime), (h, hprime))

    def test_isomorphism_agrees_with_networkx(self):
        labelled = list(graph_core.enumerate_graphs(4))
        for g in labelled[::7]:
            for h in labelled[::5]:
                m = graph_core.find_isomorphism(g, h)
                expected = nx.is_isomorphic(graph_core.to_networkx(g), graph_core.to_networkx(h))
                self.assertEqual(m is not None, expected)
                if m is not None:
                    self.assertTrue(graph_core.is_isomorphism(g, h, m))

    def test_colored_isomorphism_respects_colors(self):
        g = path(3)
        self.assertIsNotNone(graph_core.find_isomorphism(g, g, ["a", "b", "c"], ["c", "b", "a"]))
        self.assertIsNone(graph_core.find_isomorphism(g, g, ["a", "b", "c"], ["b", "a", "c"]))

    def test_malformed_map(self):
        with self.assertRaises(MalformedMapError):
            graph_core.is_embedding(path(2), path(3), domain.VertexMap(images=(0, 3)))
        with self.assertRaises(MalformedMapError):
            graph_core.is_embedding(path(2), path(3), domain.VertexMap(images=(0,)))

    def test_budget_is_enforced(self):
        tiny = domain.SearchLimits(max_nodes=3, max_vertices=64)
        empty = graph_core.make_graph(6, [])
        complete = graph_core.make_graph(6, [(i, j) for i in range(6) for j in range(i + 1, 6)])
        with self.assertRaises(BudgetExceededError):
            graph_core.find_embedding(empty, graph_core.complement(path(7)), tiny)
        with self.assertRaises(BudgetExceededError):
            graph_core.find_epimorphism(complete, graph_core.complement(empty), tiny)

    def test_vertex_cap_is_enforced(self):
        small = domain.SearchLimits(max_nodes=1000, max_vertices=4)
        with self.assertRaises(BudgetExceededError):
            graph_core.find_embedding(path(2), path(5), small)


class TestAutomorphisms(unittest.TestCase):
    def test_orders_agree_with_networkx(self):
        for g in graph_core.graph_corpus(5):
            nxg = graph_core.to_networkx(g)
            expected = sum(1 for _ in GraphMatcher(nxg, nxg).isomorphisms_iter())
            group = graph_core.automorphisms(g)
            self.assertEqual(group.order, expected, graph_core.sorted_edges(g))
            for perm in group.generators:
                self.assertTrue(
                    graph_core.is_isomorphism(g, g, domain.VertexMap(images=perm))
                )

    def test_colors_cut_the_group(self):
        self.assertEqual(graph_core.automorphisms(path(3)).order, 2)
        self.assertEqual(graph_core.automorphisms(path(3), colors=[0, 1, 2]).order, 1)

    def test_rigid_corpus(self):
        for g in graph_core.rigid_graph_corpus(2):
            self.assertEqual(g.n, 6)
            self.assertEqual(graph_core.automorphisms(g).order, 1)


class TestEnumeration(unittest.TestCase):
    def test_counts(self):
        self.assertEqual(len(list(graph_core.enumerate_graphs(3))), 8)
        self.assertEqual(len(list(graph_core.enumerate_graphs(3, up_to_iso=True))), 4)
        self.assertEqual(len(list(graph_core.enumerate_graphs(4, up_to_iso=True))), 11)
        self.assertEqual(len(graph_core.graph_corpus(4)), 18)

    def test_canonical_form_is_an_invariant(self):
        for g in graph_core.enumerate_graphs(4):
            relabelled = graph_core.relabel(g, [3, 1, 0, 2])
            self.assertEqual(graph_core.canonical_form(g), graph_core.canonical_form(relabelled))

    def test_corpus_cap(self):
        with self.assertRaises(BudgetExceededError):
            next(graph_core.enumerate_graphs(9))


if __name__ == "__main__":
    unittest.main()
