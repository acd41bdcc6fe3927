"""
Checks that each wired-in repository, and each mock standing in for one
in the use case tests, implements exactly the abstract interface it
extends: the same public methods, parameters and annotations.
"""

import inspect
import unittest
from typing import get_type_hints

try:
    from finite_forge import config, repositories
    from finite_forge.tests.mock_repos import mock_reposet
except ModuleNotFoundError:
    import config
    import repositories
    from tests.mock_repos import mock_reposet


def _public_functions(cls):
    return {
        name: fn
        for name, fn in inspect.getmembers(cls, predicate=inspect.isfunction)
        if not name.startswith("_")
    }


class TestConcreteRepositories(unittest.TestCase):
    def implementations(self):
        for source in (config.reposet, mock_reposet()):
            for key in source:
                yield key, type(source[key])

    def test_every_repository_extends_one_interface(self):
        for key, cls in self.implementations():
            with self.subTest(key=key, cls=cls.__name__):
                abc = cls.__bases__[0]
                self.assertEqual(len(cls.__bases__), 1)
                self.assertEqual(abc.__module__, repositories.__name__)
                self.assertTrue(inspect.isabstract(abc))

    def test_methods_match(self):
        for key, cls in self.implementations():
            abc = cls.__bases__[0]
            with self.subTest(cls=cls.__name__):
                self.assertEqual(
                    set(_public_functions(cls)),
                    set(abc.__abstractmethods__),
                    f"{cls.__name__} does not match {abc.__name__}",
                )

    def test_signatures_match(self):
        for key, cls in self.implementations():
            abc = cls.__bases__[0]
            for name in abc.__abstractmethods__:
                with self.subTest(cls=cls.__name__, method=name):
                    wanted = getattr(abc, name)
                    found = getattr(cls, name)
                    self.assertEqual(
                        list(inspect.signature(wanted).parameters),
                        list(inspect.signature(found).parameters),
                    )
                    self.assertEqual(get_type_hints(wanted), get_type_hints(found))


if __name__ == "__main__":
    unittest.main()
