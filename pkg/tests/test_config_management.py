import unittest

try:
    from finite_forge.config_management import RepoSet
    from finite_forge.tests.mock_repos import MockCorpusRepository, MockReportRepository
except ModuleNotFoundError:
    from config_management import RepoSet
    from tests.mock_repos import MockCorpusRepository, MockReportRepository


class TestRepoSet(unittest.TestCase):
    def test_keys_follow_the_interfaces(self):
        self.assertEqual(
            sorted(RepoSet()),
            [
                "certificate_repository",
                "corpus_repository",
                "report_repository",
                "task_dispatch_repository",
            ],
        )

    def test_accepts_a_matching_repository(self):
        reposet = RepoSet()
        repo = MockCorpusRepository()
        reposet["corpus_repository"] = repo
        self.assertIs(reposet["corpus_repository"], repo)

    def test_rejects_unknown_keys(self):
        with self.assertRaises(KeyError):
            RepoSet()["graph_repository"] = MockCorpusRepository()

    def test_rejects_the_wrong_interface(self):
        with self.assertRaises(TypeError):
            RepoSet()["corpus_repository"] = MockReportRepository()

    def test_unset_key(self):
        with self.assertRaises(KeyError):
            RepoSet()["report_repository"]


if __name__ == "__main__":
    unittest.main()
