import unittest

from pydantic import ValidationError

try:
    from finite_forge import settings, usecases
    from finite_forge.interfaces import requests, responses
    from finite_forge.tests.mock_repos import mock_reposet
except ModuleNotFoundError:
    import settings
    import usecases
    from interfaces import requests, responses
    from tests.mock_repos import mock_reposet


class TestEnumerateCorpus(unittest.TestCase):
    def setUp(self):
        self.reposet = mock_reposet()
        self.corpus_repo = self.reposet["corpus_repository"]
        self.usecase = usecases.EnumerateCorpus(self.reposet)

    def test_single_tree_at_depth_zero(self):
        response = self.usecase.execute(
            requests.EnumerateRequest(kind="trees", out="t.jsonl", depth=0, branch=1)
        )
        self.assertEqual(response.count, 1)

    def test_trees_depth_one_branch_one(self):
        response = self.usecase.execute(
            requests.EnumerateRequest(kind="trees", out="t.jsonl", depth=1, branch=1)
        )
        self.assertEqual(response.count, 4)
        stored = self.corpus_repo.corpora["t.jsonl"]
        self.assertEqual(len(stored["instances"]), 4)
        self.assertTrue(all(doc["kind"] == "tree" for doc in stored["instances"]))

    def test_tree_corpus_is_duplicate_free(self):
        self.usecase.execute(
            requests.EnumerateRequest(kind="trees", out="t.jsonl", depth=1, branch=2)
        )
        hashes = [
            requests.instance_hash(doc)
            for doc in self.corpus_repo.corpora["t.jsonl"]["instances"]
        ]
        self.assertEqual(len(hashes), len(set(hashes)))

    def test_labelled_graphs_on_three_vertices(self):
        response = self.usecase.execute(
            requests.EnumerateRequest(kind="graphs", out="g.jsonl", vertices=3)
        )
        self.assertEqual(response.count, 8)

    def test_graphs_up_to_isomorphism(self):
        response = self.usecase.execute(
            requests.EnumerateRequest(kind="graphs", out="g.jsonl", vertices=3, up_to_iso=True)
        )
        self.assertEqual(response.count, 4)

    def test_vertex_range(self):
        response = self.usecase.execute(
            requests.EnumerateRequest(
                kind="graphs", out="g.jsonl", vertices=3, min_vertices=1, up_to_iso=True
            )
        )
        # 1 + 2 + 4 classes
        self.assertEqual(response.count, 7)

    def test_manifest_carries_conventions(self):
        response = self.usecase.execute(
            requests.EnumerateRequest(kind="trees", out="t.jsonl", depth=1, branch=1)
        )
        manifest = self.corpus_repo.corpora["t.jsonl"]["manifest"]
        self.assertEqual(manifest, response.manifest)
        self.assertEqual(manifest["count"], 4)
        self.assertEqual(manifest["params"], {"depth": 1, "branch": 1})
        self.assertEqual(manifest["conventions"], responses.CONVENTIONS)
        self.assertEqual(manifest["tool_version"], settings.TOOL_VERSION)

    def test_unknown_kind(self):
        with self.assertRaises(ValidationError):
            requests.EnumerateRequest(kind="metrics", out="m.jsonl")


if __name__ == "__main__":
    unittest.main()
