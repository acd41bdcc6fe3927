from abc import ABC, abstractmethod
from typing import Any, Callable, Dict, List, Optional


class ForgeError(Exception):
    """Base exception for forge errors"""

    pass


class BudgetExceededError(ForgeError):
    """A search or builder hit its node budget or vertex cap"""

    def __init__(self, message: str, limit: int = 0, required: int = 0):
        super().__init__(message)
        self.limit = limit
        self.required = required


class MalformedMapError(ForgeError):
    """A vertex map is not total, or points outside its codomain"""

    pass


class PreconditionError(ForgeError):
    """An operation was called outside its precondition"""

    pass


class ConventionMismatchError(ForgeError):
    """Two objects built under different (d, b) conventions were compared"""

    pass


class SetupInvariantError(ForgeError):
    """A reduction setup violates one of its hypotheses"""

    def __init__(self, message: str, hypothesis: str):
        super().__init__(message)
        self.hypothesis = hypothesis


class SchemaError(ForgeError):
    """A structurally invalid instance"""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(message)
        self.pointer = pointer


class UnknownSuiteError(ForgeError):
    """run_suite was asked for a suite that is not registered"""

    pass


class CorpusRepository(ABC):
    @abstractmethod
    def save_corpus(
        self, path: str, manifest: Dict[str, Any], instances: List[Dict]
    ) -> int:
        """Write a JSONL corpus: the manifest line, then one instance per line

        Returns:
            number of instance lines written
        """
        pass

    @abstractmethod
    def load_corpus(self, path: str) -> List[Dict]:
        """Read the instance lines of a corpus, manifest excluded"""
        pass

    @abstractmethod
    def load_instance(self, path: str) -> Dict:
        """Read a single JSON instance document"""
        pass


class CertificateRepository(ABC):
    @abstractmethod
    def save_certificate(self, payload: Dict, path: Optional[str]) -> str:
        """Persist a certificate

        Args:
            payload: the serialised certificate
            path: where to write it, or None for the default location

        Returns:
            the location written to
        """
        pass

    @abstractmethod
    def load_certificate(self, path: str) -> Dict:
        pass


class ReportRepository(ABC):
    @abstractmethod
    def save_report(self, payload: Dict, path: Optional[str]) -> str:
        """Persist a suite report, returning the location written to"""
        pass


class TaskDispatchRepository(ABC):
    @abstractmethod
    def map_ordered(self, fn: Callable, items: List) -> List:
        """Apply fn to every item, possibly concurrently

        Results come back in the order of items,
        whatever order the work finished in.
        """
        pass
