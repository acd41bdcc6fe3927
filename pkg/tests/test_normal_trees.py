import random
import unittest

try:
    from finite_forge import domain, normal_trees
    from finite_forge.repositories import PreconditionError, SchemaError
except ModuleNotFoundError:
    import domain
    import normal_trees
    from repositories import PreconditionError, SchemaError


def tree(d, b, nodes):
    return normal_trees.validate_tree(
        domain.FiniteNormalTree(depth=d, branch=b, nodes=frozenset(nodes))
    )


ROOT_ONLY = tree(1, 1, [("", ())])
FULL_D1B1 = tree(1, 1, [("", ()), ("0", (0,)), ("1", (0,))])


class TestConventions(unittest.TestCase):
    def test_theta_is_length_lex(self):
        self.assertEqual(
            [normal_trees.theta(u) for u in ("", "0", "1", "00", "01", "10", "11")],
            list(range(7)),
        )

    def test_rank_is_length_lex(self):
        ordered = normal_trees.sequences(2, 2)
        self.assertEqual([normal_trees.rank(s, 2) for s in ordered], list(range(7)))

    def test_clip(self):
        self.assertEqual(normal_trees.clip((0, 3, 1), 2), (0, 1, 1))


class TestTrees(unittest.TestCase):
    def test_counts(self):
        self.assertEqual(normal_trees.count_trees(0, 1), 1)
        self.assertEqual(normal_trees.count_trees(1, 1), 4)
        self.assertEqual(normal_trees.count_trees(1, 2), 9)

    def test_enumeration_matches_count_without_duplicates(self):
        for d, b in ((0, 1), (1, 1), (1, 2), (2, 1)):
            with self.subTest(d=d, b=b):
                trees = list(normal_trees.enumerate_trees(d, b))
                self.assertEqual(len(trees), normal_trees.count_trees(d, b))
                self.assertEqual(len(set(trees)), len(trees))
                self.assertTrue(all(normal_trees.is_normal(t) for t in trees))

    def test_missing_root(self):
        with self.assertRaises(SchemaError):
            tree(1, 1, [("0", (0,))])

    def test_not_normal(self):
        with self.assertRaises(SchemaError) as caught:
            tree(1, 2, [("", ()), ("0", (0,))])
        self.assertEqual(caught.exception.pointer, "nodes.0")

    def test_missing_parent(self):
        with self.assertRaises(SchemaError):
            tree(2, 1, [("", ()), ("01", (0, 0))])

    def test_normal_closure_presents_the_same_tree(self):
        for t in normal_trees.enumerate_trees(1, 2):
            wide = normal_trees.normal_closure(t, 3)
            self.assertTrue(normal_trees.is_normal(wide))
            for u in normal_trees.bitstrings(1):
                for s in normal_trees.sequences(4, len(u), exact=True):
                    self.assertEqual(
                        normal_trees.in_closure(t, u, s), normal_trees.in_closure(wide, u, s)
                    )

    def test_normal_closure_cannot_shrink(self):
        t = next(normal_trees.enumerate_trees(1, 2))
        with self.assertRaises(PreconditionError):
            normal_trees.normal_closure(t, 1)


class TestMaxOrder(unittest.TestCase):
    def setUp(self):
        self.corpus = list(normal_trees.enumerate_trees(1, 2))

    def test_root_only_is_below_everything(self):
        for t in normal_trees.enumerate_trees(1, 1):
            self.assertIsNotNone(normal_trees.le_max(ROOT_ONLY, t))

    def test_full_is_not_below_root_only(self):
        self.assertIsNone(normal_trees.le_max(FULL_D1B1, ROOT_ONLY))

    def test_reflexive_with_valid_witness(self):
        for t in self.corpus:
            f = normal_trees.le_max(t, t)
            self.assertTrue(normal_trees.is_lipschitz_witness(t, t, f))

    def test_projection_criterion_agrees(self):
        for s in self.corpus:
            for t in self.corpus:
                self.assertEqual(
                    normal_trees.le_max(s, t) is not None,
                    normal_trees.projection_criterion(s, t),
                )

    def test_transitive_by_composition(self):
        witnesses = {
            (i, j): normal_trees.le_max(s, t)
            for i, s in enumerate(self.corpus)
            for j, t in enumerate(self.corpus)
        }
        n = len(self.corpus)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    f, g = witnesses[(i, j)], witnesses[(j, k)]
                    if f is None or g is None:
                        continue
                    h = normal_trees.compose_witnesses(f, g)
                    self.assertTrue(
                        normal_trees.is_lipschitz_witness(self.corpus[i], self.corpus[k], h)
                    )

    def test_witness_checker_rejects_broken_maps(self):
        f = normal_trees.le_max(FULL_D1B1, FULL_D1B1)
        short = domain.LipschitzMap(pairs=f.pairs[:1], bound=1)
        self.assertFalse(normal_trees.is_lipschitz_witness(FULL_D1B1, FULL_D1B1, short))
        outside = domain.LipschitzMap(pairs=(((), ()), ((0,), (5,))), bound=1)
        self.assertFalse(normal_trees.is_lipschitz_witness(FULL_D1B1, FULL_D1B1, outside))

    def test_depth_mismatch(self):
        shallow = tree(0, 1, [("", ())])
        with self.assertRaises(PreconditionError):
            normal_trees.le_max(shallow, ROOT_ONLY)

    def test_injective_refinement(self):
        for s in self.corpus:
            for t in self.corpus:
                f = normal_trees.le_max(s, t)
                if f is None:
                    continue
                refined = normal_trees.canonical_injective_witness(s, t, f)
                self.assertTrue(normal_trees.is_injective(refined.witness))
                self.assertTrue(normal_trees.is_rank_monotone(refined.witness, s.branch))
                self.assertTrue(
                    normal_trees.is_lipschitz_witness(s, refined.closure, refined.witness)
                )

    def test_refinement_needs_a_real_witness(self):
        bogus = domain.LipschitzMap(pairs=(((), ()),), bound=1)
        with self.assertRaises(PreconditionError):
            normal_trees.canonical_injective_witness(FULL_D1B1, ROOT_ONLY, bogus)


class TestNormalForm(unittest.TestCase):
    def test_diagonal_tree_is_in_normal_form(self):
        report = normal_trees.check_normal_form(normal_trees.diagonal_tree3(2, 2))
        self.assertTrue(report.reflexive)
        self.assertTrue(report.locally_transitive)
        self.assertTrue(report.antisymmetric_at_zero)
        self.assertEqual(report.counterexamples, ())

    def test_full_tree_breaks_antisymmetry(self):
        report = normal_trees.check_normal_form(normal_trees.full_tree3(1, 2))
        self.assertFalse(report.antisymmetric_at_zero)
        self.assertTrue(report.counterexamples)

    def test_quasi_order_count(self):
        self.assertEqual(len(list(normal_trees.quasi_orders(1))), 4)

    def test_quasi_order_trees_round_trip(self):
        points = normal_trees.bitstrings(1, exact=True)
        for relation in normal_trees.quasi_orders(1):
            t = normal_trees.validate_tree3(normal_trees.tree_from_quasi_order(relation, 1, 2))
            report = normal_trees.check_normal_form(t)
            self.assertEqual(
                (report.reflexive, report.locally_transitive, report.antisymmetric_at_zero),
                (True, True, True),
            )
            self.assertEqual(normal_trees.project_quasi_order(t), relation)
            for x in points:
                for y in points:
                    below = normal_trees.le_max(
                        normal_trees.slice_tree(t, x), normal_trees.slice_tree(t, y)
                    )
                    self.assertEqual(below is not None, (x, y) in relation)

    def test_checker_agrees_with_naive_loops(self):
        rng = random.Random(5)
        for _ in range(40):
            t = normal_trees.random_tree3(2, 2, rng)
            report = normal_trees.check_normal_form(t)
            self.assertEqual(
                (report.reflexive, report.locally_transitive, report.antisymmetric_at_zero),
                normal_trees.naive_normal_form(t),
            )

    def test_quasi_order_preconditions(self):
        diagonal = frozenset({("0", "0"), ("1", "1")})
        with self.assertRaises(PreconditionError):
            normal_trees.tree_from_quasi_order(diagonal, 1, 1)
        with self.assertRaises(PreconditionError):
            normal_trees.tree_from_quasi_order(frozenset({("0", "0")}), 1, 2)

    def test_slice_point_too_short(self):
        with self.assertRaises(PreconditionError):
            normal_trees.slice_tree(normal_trees.diagonal_tree3(2, 2), "0")


if __name__ == "__main__":
    unittest.main()
