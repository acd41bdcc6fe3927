"""
RepoSet: the set of repositories config.py wires in.

Keys are the snake_case names of the abstract classes in
repositories.py (CorpusRepository -> "corpus_repository"), and a value
must be an instance of the class its key names.
"""

import abc
from typing import Dict, Iterator

import inflection

try:
    from finite_forge import repositories
except ModuleNotFoundError:
    import repositories


def _interfaces() -> Dict[str, type]:
    return {
        inflection.underscore(cls.__name__): cls
        for cls in vars(repositories).values()
        if isinstance(cls, type) and issubclass(cls, abc.ABC) and cls is not abc.ABC
    }


class RepoSet:
    def __init__(self):
        self._interfaces = _interfaces()
        self._data = {key: None for key in self._interfaces}

    def __getitem__(self, key):
        if self._data[key] is None:
            raise KeyError(f"no repository wired in for '{key}'")
        return self._data[key]

    def __setitem__(self, key, value):
        if key not in self._interfaces:
            raise KeyError(f"Invalid key '{key}'. Must be one of {sorted(self._interfaces)}")
        interface = self._interfaces[key]
        if not isinstance(value, interface):
            raise TypeError(f"'{key}' needs a {interface.__name__}, got {type(value).__name__}")
        self._data[key] = value

    def __iter__(self) -> Iterator[str]:
        return iter(self._data)

    def __contains__(self, key) -> bool:
        return key in self._data

    def __len__(self) -> int:
        return len(self._data)
