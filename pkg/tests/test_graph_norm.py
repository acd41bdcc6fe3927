import random
import unittest
from fractions import Fraction

try:
    from finite_forge import graph_core, graph_norm
    from finite_forge.repositories import BudgetExceededError, PreconditionError
except ModuleNotFoundError:
    import graph_core
    import graph_norm
    from repositories import BudgetExceededError, PreconditionError

EDGE = graph_norm.make_norm(graph_core.make_graph(2, [(0, 1)]))
NON_EDGE = graph_norm.make_norm(graph_core.make_graph(2, []))
PATH3 = graph_norm.make_norm(graph_core.make_graph(3, [(0, 1), (1, 2)]))


class TestNorm(unittest.TestCase):
    def test_values(self):
        self.assertEqual(graph_norm.norm(EDGE, [1, 1]), Fraction(3, 2))
        self.assertEqual(graph_norm.norm(EDGE, [2, -1]), Fraction(5, 2))
        self.assertEqual(graph_norm.norm(NON_EDGE, [1, -1]), Fraction(4, 3))
        self.assertEqual(graph_norm.norm(PATH3, [0, 0, 0]), 0)
        self.assertEqual(graph_norm.norm(PATH3, [Fraction(1, 2), 0, 1]), Fraction(7, 6))

    def test_sandwich(self):
        rng = random.Random(3)
        for g in graph_core.graph_corpus(4):
            if g.n < 2:
                continue
            n = graph_norm.make_norm(g)
            for _ in range(20):
                v = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(g.n)]
                self.assertTrue(graph_norm.sandwich_check(n, v), v)

    def test_two_point_norms_read_off_the_edges(self):
        for g in graph_core.graph_corpus(4):
            if g.n < 2:
                continue
            n = graph_norm.make_norm(g)
            for p, q, _, _, value in graph_norm.pair_norms(n):
                self.assertEqual(value, graph_norm.expected_pair_norm(n, p, q))

    def test_preconditions(self):
        with self.assertRaises(PreconditionError):
            graph_norm.make_norm(graph_core.make_graph(1, []))
        with self.assertRaises(PreconditionError):
            graph_norm.norm(EDGE, [1, 2, 3])


class TestUnitBall(unittest.TestCase):
    def test_edge_ball_vertices(self):
        vertices = graph_norm.unit_ball_vertices(EDGE)
        third = Fraction(2, 3)
        self.assertEqual(len(vertices), 8)
        self.assertIn((Fraction(1), Fraction(0)), vertices)
        self.assertIn((third, -third), vertices)

    def test_non_edge_ball_corner(self):
        self.assertIn((Fraction(3, 4), Fraction(3, 4)), graph_norm.unit_ball_vertices(NON_EDGE))

    def test_extreme_certificate(self):
        c = graph_norm.strongly_extreme_certificate(PATH3, 1, Fraction(1, 2))
        self.assertEqual(c.delta, Fraction(1, 36))
        self.assertTrue(c.valid)
        self.assertLessEqual(c.max_separation, c.epsilon)
        self.assertGreater(c.vertex_count, 0)

    def test_epsilon_must_be_positive(self):
        with self.assertRaises(PreconditionError):
            graph_norm.strongly_extreme_certificate(EDGE, 0, 0)


class TestSignedEmbedding(unittest.TestCase):
    def test_edge_into_path(self):
        e = graph_norm.signed_isometric_embedding(EDGE, PATH3)
        self.assertEqual((e.images, e.signs), ((0, 1), (1, 1)))
        self.assertTrue(graph_norm.is_signed_isometric(EDGE, PATH3, e))

    def test_non_edge_does_not_go_into_edge(self):
        self.assertIsNone(graph_norm.signed_isometric_embedding(NON_EDGE, EDGE))
        self.assertIsNone(graph_norm.signed_isometric_embedding(PATH3, EDGE))

    def test_exists_iff_induced_embedding(self):
        graphs = [g for g in graph_core.graph_corpus(3) if g.n >= 2]
        for g in graphs:
            for h in graphs:
                signed = graph_norm.signed_isometric_embedding(
                    graph_norm.make_norm(g), graph_norm.make_norm(h)
                )
                embedded = graph_core.find_embedding(g, h)
                self.assertEqual(signed is not None, embedded is not None, (g, h))

    def test_checker_rejects_bad_signs(self):
        e = graph_norm.signed_isometric_embedding(EDGE, PATH3)
        bad = type(e)(images=e.images, signs=(1, 2))
        self.assertFalse(graph_norm.is_signed_isometric(EDGE, PATH3, bad))
        moved = type(e)(images=(0, 2), signs=e.signs)
        self.assertFalse(graph_norm.is_signed_isometric(EDGE, PATH3, moved))


class TestNormStructure(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.structure = graph_norm.build_norm_structure(EDGE)

    def test_point_enumeration(self):
        self.assertEqual(graph_norm.point_vector(3, 2), (0, 1, 0))
        self.assertEqual(graph_norm.point_vector(3, 5), (0, 0, -1))
        for k in range(4):
            self.assertEqual(graph_norm.norm(EDGE, graph_norm.point_vector(2, k)), 1)

    def test_combination_count(self):
        self.assertEqual(graph_norm.combination_count(2), 20 + 300 + 3000)
        self.assertEqual(len(self.structure.values), graph_norm.combination_count(2))

    def test_combination_cap(self):
        with self.assertRaises(BudgetExceededError) as caught:
            graph_norm.build_norm_structure(EDGE, max_combinations=100)
        self.assertEqual(caught.exception.required, 3320)

    def test_relations(self):
        s = self.structure
        self.assertEqual(graph_norm.norm_structure_value(s, (1,), (0,)), 1)
        self.assertEqual(graph_norm.norm_structure_value(s, (1, 1), (0, 1)), 0)
        self.assertTrue(graph_norm.holds(s, (1,), Fraction(2), (0,)))
        self.assertFalse(graph_norm.holds(s, (1,), Fraction(1), (0,)))

    def test_signed_permutations_are_the_automorphisms(self):
        group = graph_norm.structure_automorphisms(self.structure)
        self.assertEqual(len(group), 8)
        self.assertTrue(graph_norm.brute_force_norm_extension(self.structure, (1,), group))
        self.assertTrue(graph_norm.brute_force_norm_extension(self.structure, (2,), group))

    def test_extension_criterion(self):
        s = self.structure
        self.assertTrue(graph_norm.can_extend_norm_auto(s, (1, 0, 3, 2)))
        self.assertFalse(graph_norm.can_extend_norm_auto(s, (2,)))
        with self.assertRaises(PreconditionError):
            graph_norm.can_extend_norm_auto(s, (0, 0))
        with self.assertRaises(PreconditionError):
            graph_norm.can_extend_norm_auto(s, (4,))


if __name__ == "__main__":
    unittest.main()
