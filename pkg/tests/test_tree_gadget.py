import unittest

try:
    from finite_forge import domain, graph_core, normal_trees, tree_gadget
    from finite_forge.repositories import BudgetExceededError, ConventionMismatchError
except ModuleNotFoundError:
    import domain
    import graph_core
    import normal_trees
    import tree_gadget
    from repositories import BudgetExceededError, ConventionMismatchError


class TestBuildGadget(unittest.TestCase):
    def test_vertex_count_formula(self):
        for d, b in ((0, 1), (1, 1), (1, 2), (2, 1)):
            for t in normal_trees.enumerate_trees(d, b):
                g = tree_gadget.build_gadget(t)
                self.assertEqual(g.graph.n, tree_gadget.count_gadget_vertices(t))
                self.assertEqual(len(g.kinds), g.graph.n)

    def test_numbering_is_kind_major(self):
        t = list(normal_trees.enumerate_trees(1, 2))[-1]
        kinds = [tag.kind for tag in tree_gadget.build_gadget(t).kinds]
        positions = [tree_gadget.KINDS.index(k) for k in kinds]
        self.assertEqual(positions, sorted(positions))
        self.assertEqual(kinds[0], "Seq")

    def test_gadget_is_a_tree(self):
        for t in normal_trees.enumerate_trees(1, 2):
            g = tree_gadget.build_gadget(t).graph
            self.assertEqual(len(g.edges), g.n - 1)

    def test_code_path_length(self):
        self.assertEqual(len(tree_gadget.code_strings("")), 6)
        self.assertEqual(len(tree_gadget.code_strings("1")), 2 * 2 + 6)

    def test_vertex_cap(self):
        t = next(normal_trees.enumerate_trees(1, 2))
        with self.assertRaises(BudgetExceededError) as caught:
            tree_gadget.build_gadget(t, domain.SearchLimits(max_nodes=10, max_vertices=10))
        self.assertEqual(caught.exception.required, tree_gadget.count_gadget_vertices(t))


class TestGadgetProperties(unittest.TestCase):
    def setUp(self):
        self.corpus = list(normal_trees.enumerate_trees(1, 1))

    def test_gadgets_are_rigid(self):
        results = tree_gadget.verify_rigidity(self.corpus)
        self.assertEqual(len(results), len(self.corpus))
        self.assertTrue(all(r.passed for r in results), [r.detail for r in results])

    def test_isomorphism_is_equality(self):
        results = tree_gadget.verify_iso_equality(self.corpus)
        n = len(self.corpus)
        self.assertEqual(len(results), n * (n + 1) // 2)
        self.assertTrue(all(r.passed for r in results))


class TestStructuredEmbedding(unittest.TestCase):
    def setUp(self):
        self.corpus = list(normal_trees.enumerate_trees(1, 2))
        self.sources = [tree_gadget.build_gadget(t) for t in self.corpus]
        self.targets = [
            tree_gadget.build_gadget(tree_gadget.bridge_target(t)) for t in self.corpus
        ]

    def test_embedding_iff_max_below(self):
        for i, s in enumerate(self.corpus):
            for j, t in enumerate(self.corpus):
                found = tree_gadget.structured_embed(self.sources[i], self.targets[j])
                below = normal_trees.le_max(s, t) is not None
                self.assertEqual(found is not None, below, (i, j))
                if found is not None:
                    self.assertTrue(
                        graph_core.is_embedding(
                            self.sources[i].graph, self.targets[j].graph, found
                        )
                    )

    def test_spine_map_is_a_witness(self):
        s, t = self.corpus[0], self.corpus[-1]
        found = tree_gadget.structured_embed(self.sources[0], self.targets[-1])
        if found is None:
            self.skipTest("first tree is not below the last")
        table = tree_gadget.spine_map(self.sources[0], self.targets[-1], found)
        f = domain.LipschitzMap(
            pairs=tuple(sorted(table.items(), key=lambda p: (len(p[0]), p[0]))),
            bound=self.targets[-1].source.branch,
        )
        self.assertTrue(normal_trees.is_lipschitz_witness(s, tree_gadget.bridge_target(t), f))

    def test_forward_construction_from_injective_witness(self):
        for s in self.corpus:
            for t in self.corpus:
                f = normal_trees.le_max(s, t)
                if f is None:
                    continue
                refined = normal_trees.canonical_injective_witness(s, t, f)
                gs = tree_gadget.build_gadget(s)
                gt = tree_gadget.build_gadget(refined.closure)
                m = tree_gadget.gadget_embedding_from_witness(gs, gt, refined.witness)
                self.assertTrue(graph_core.is_embedding(gs.graph, gt.graph, m))

    def test_conventions_must_match(self):
        shallow = tree_gadget.build_gadget(next(normal_trees.enumerate_trees(0, 1)))
        with self.assertRaises(ConventionMismatchError):
            tree_gadget.structured_embed(shallow, self.targets[0])

    def test_free_embedding_diagnostic_vocabulary(self):
        tiny = domain.SearchLimits(max_nodes=5, max_vertices=1024)
        verdict = tree_gadget.free_embedding_diagnostic(self.sources[-1], self.targets[0], tiny)
        self.assertIn(verdict, ("holds", "fails", "undecided"))


if __name__ == "__main__":
    unittest.main()
