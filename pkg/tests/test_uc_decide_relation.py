import unittest

try:
    from finite_forge import normal_trees, usecases
    from finite_forge.interfaces import requests
    from finite_forge.repositories import PreconditionError, SchemaError
    from finite_forge.tests.mock_repos import mock_reposet
except ModuleNotFoundError:
    import normal_trees
    import usecases
    from interfaces import requests
    from repositories import PreconditionError, SchemaError
    from tests.mock_repos import mock_reposet

PATH3 = {"kind": "graph", "n": 3, "edges": [[0, 1], [1, 2]]}
CLAW = {"kind": "graph", "n": 4, "edges": [[0, 1], [0, 2], [0, 3]]}
TRIANGLE = {"kind": "graph", "n": 3, "edges": [[0, 1], [0, 2], [1, 2]]}
EDGE = {"kind": "graph", "n": 2, "edges": [[0, 1]]}
EMPTY3 = {"kind": "graph", "n": 3, "edges": []}


class TestDecideRelation(unittest.TestCase):
    def setUp(self):
        self.reposet = mock_reposet()
        self.certificates = self.reposet["certificate_repository"].certificates
        self.usecase = usecases.DecideRelation(self.reposet)

    def decide(self, relation, lhs, rhs, **kwargs):
        return self.usecase.execute(
            requests.DecideRequest(relation=relation, lhs=lhs, rhs=rhs, **kwargs)
        )

    def test_le_max_is_reflexive(self):
        tree = requests.dump_instance(list(normal_trees.enumerate_trees(1, 2))[3])
        response = self.decide("le-max", tree, tree)
        self.assertTrue(response.holds)
        self.assertEqual(response.certificate.verdict, "holds")
        self.assertIn("pairs", response.certificate.witness)

    def test_path_embeds_in_claw(self):
        response = self.decide("embed", PATH3, CLAW)
        self.assertTrue(response.holds)
        self.assertEqual(response.certificate.witness, {"images": [1, 0, 2]})

    def test_triangle_does_not_embed_in_path(self):
        response = self.decide("embed", TRIANGLE, PATH3)
        self.assertFalse(response.holds)
        self.assertEqual(response.certificate.verdict, "fails")
        self.assertIsNone(response.certificate_path)
        self.assertEqual(self.certificates, {})

    def test_iso_under_relabelling(self):
        relabelled = {"kind": "graph", "n": 3, "edges": [[0, 2], [1, 2]]}
        response = self.decide("iso", PATH3, relabelled)
        self.assertTrue(response.holds)
        self.assertEqual(response.certificate.witness["images"][1], 2)

    def test_path_maps_onto_edge(self):
        self.assertTrue(self.decide("epi", PATH3, EDGE).holds)

    def test_triangle_has_no_epimorphism_onto_edge(self):
        self.assertFalse(self.decide("epi", TRIANGLE, EDGE).holds)

    def test_successor_ordinal_does_not_embed_in_limit(self):
        successor = {"kind": "colored-sum", "blocks": [[1, 0], [0, 0]]}
        limit = {"kind": "colored-sum", "blocks": [[1, 0]]}
        self.assertFalse(self.decide("colored-embed", successor, limit).holds)
        self.assertTrue(self.decide("colored-embed", limit, successor).holds)

    def test_colored_embed_with_geq_colors(self):
        low = {"kind": "colored-sum", "blocks": [[0, 1]]}
        high = {"kind": "colored-sum", "blocks": [[0, 2]]}
        self.assertFalse(self.decide("colored-embed", low, high).holds)
        response = self.decide("colored-embed", high, low, color_relation="geq")
        self.assertTrue(response.holds)
        self.assertEqual(response.certificate.witness["assignment"], [0])

    def test_colored_embed_with_table(self):
        low = {"kind": "colored-sum", "blocks": [[0, 1]]}
        high = {"kind": "colored-sum", "blocks": [[0, 2]]}
        response = self.decide(
            "colored-embed", low, high, color_relation="table", color_table=[(1, 2)]
        )
        self.assertTrue(response.holds)

    def test_colored_iso_compares_normal_forms(self):
        a = {"kind": "colored-sum", "blocks": [[0, 0], [1, 0]]}
        b = {"kind": "colored-sum", "blocks": [[1, 0]]}
        self.assertTrue(self.decide("colored-iso", a, b).holds)

    def test_metric_isometric_embedding(self):
        two = {"kind": "metric", "dist": [["0", "1"], ["1", "0"]]}
        line = {"kind": "metric", "dist": [["0", "1", "2"], ["1", "0", "1"], ["2", "1", "0"]]}
        response = self.decide("iso-embed-metric", two, line)
        self.assertTrue(response.holds)
        self.assertEqual(response.certificate.witness, {"images": [0, 1]})
        self.assertFalse(self.decide("iso-embed-metric", line, two).holds)

    def test_signed_linear_isometry_follows_edges(self):
        self.assertTrue(self.decide("signed-li", EDGE, TRIANGLE).holds)
        self.assertFalse(self.decide("signed-li", EDGE, EMPTY3).holds)

    def test_certificate_written_when_holds(self):
        response = self.decide("embed", PATH3, CLAW, certificate="cert.json")
        self.assertEqual(response.certificate_path, "cert.json")
        stored = self.certificates["cert.json"]
        self.assertEqual(stored["lhs"], requests.instance_hash(stored["instances"][0]))
        self.assertEqual(stored["rhs"], requests.instance_hash(stored["instances"][1]))

    def test_unknown_relation(self):
        with self.assertRaises(PreconditionError):
            self.decide("homotopic", PATH3, CLAW)

    def test_instance_of_wrong_kind(self):
        with self.assertRaises(ValueError):
            self.decide("le-max", PATH3, PATH3)

    def test_self_loop_is_refused(self):
        with self.assertRaises(SchemaError) as caught:
            self.decide("embed", {"kind": "graph", "n": 2, "edges": [[1, 1]]}, EDGE)
        self.assertEqual(caught.exception.pointer, "edges.0")


if __name__ == "__main__":
    unittest.main()
