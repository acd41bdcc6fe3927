import unittest

try:
    from finite_forge import normal_trees, tree_gadget, usecases
    from finite_forge.interfaces import requests
    from finite_forge.repositories import PreconditionError, SchemaError
    from finite_forge.tests.mock_repos import mock_reposet
except ModuleNotFoundError:
    import normal_trees
    import tree_gadget
    import usecases
    from interfaces import requests
    from repositories import PreconditionError, SchemaError
    from tests.mock_repos import mock_reposet

K1 = {"kind": "graph", "n": 1, "edges": []}
EDGE = {"kind": "graph", "n": 2, "edges": [[0, 1]]}
PATH3 = {"kind": "graph", "n": 3, "edges": [[0, 1], [1, 2]]}
CYCLE3 = {"kind": "graph", "n": 3, "edges": [[0, 1], [1, 2], [0, 2]]}


class TestBuildConstruction(unittest.TestCase):
    def setUp(self):
        self.usecase = usecases.BuildConstruction(mock_reposet())
        self.tree = list(normal_trees.enumerate_trees(1, 1))[-1]

    def build(self, construction, instance, **kwargs):
        return self.usecase.execute(
            requests.BuildRequest(construction=construction, instance=instance, **kwargs)
        )

    def test_tree_gadget(self):
        response = self.build("g-t", requests.dump_instance(self.tree))
        self.assertEqual(response.vertex_count, tree_gadget.count_gadget_vertices(self.tree))
        self.assertEqual(len(response.payload["kinds"]), response.vertex_count)
        self.assertEqual(response.payload["kinds"][0]["kind"], "Seq")

    def test_branch_space(self):
        response = self.build("u-g", requests.dump_instance(self.tree))
        gadget = tree_gadget.build_gadget(self.tree)
        self.assertEqual(response.vertex_count, len(tree_gadget.branch_leaves(gadget)))
        self.assertEqual(response.payload["metric"]["kind"], "metric")

    def test_epi_gadget_of_single_vertex(self):
        response = self.build("g-star", K1, depth=1, branch=1)
        self.assertEqual(response.vertex_count, 11)
        self.assertEqual(len(response.payload["graph"]["edges"]), 16)
        self.assertEqual(response.payload["reservoir"], 1)

    def test_colored_sum_of_graph(self):
        response = self.build("l-g", EDGE, depth=1, branch=2)
        self.assertEqual(response.payload["kind"], "colored-sum")
        self.assertEqual(response.vertex_count, len(response.payload["blocks"]))

    def test_discrete_metric_of_path(self):
        response = self.build("discrete", PATH3)
        self.assertEqual(response.vertex_count, 3)
        self.assertEqual(response.payload["dist"][0][2], "2")

    def test_discrete_metric_needs_a_tree(self):
        with self.assertRaises(PreconditionError):
            self.build("discrete", CYCLE3)

    def test_ball_structure(self):
        metric = {"kind": "metric", "dist": [[0, 1], [1, 0]]}
        response = self.build("ball-structure", metric)
        self.assertEqual(response.vertex_count, len(response.payload["names"]))
        self.assertEqual(len(response.payload["balls"]), response.vertex_count)

    def test_norm_structure(self):
        response = self.build("norm-structure", EDGE)
        self.assertEqual(response.vertex_count, 4)
        self.assertIn([0, 1], response.payload["opposite"])

    def test_norm_structure_needs_two_vertices(self):
        with self.assertRaises(PreconditionError):
            self.build("norm-structure", K1)

    def test_unknown_construction(self):
        with self.assertRaises(PreconditionError):
            self.build("g-omega", K1)

    def test_instance_kind_must_match(self):
        with self.assertRaises(ValueError):
            self.build("g-t", K1)

    def test_malformed_tree(self):
        broken = {"kind": "tree", "depth": 1, "branch": 1, "nodes": [["0", [0]]]}
        with self.assertRaises(SchemaError):
            self.build("g-t", broken)


if __name__ == "__main__":
    unittest.main()
