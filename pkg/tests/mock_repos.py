import copy
from typing import Any, Callable, Dict, List, Optional

try:
    from finite_forge.repositories import (
        CertificateRepository,
        CorpusRepository,
        ForgeError,
        ReportRepository,
        TaskDispatchRepository,
    )
except ModuleNotFoundError:
    from repositories import (
        CertificateRepository,
        CorpusRepository,
        ForgeError,
        ReportRepository,
        TaskDispatchRepository,
    )


class MockCorpusRepository(CorpusRepository):
    def __init__(self):
        self.corpora: Dict[str, Dict[str, Any]] = {}
        self.instances: Dict[str, Dict] = {}

    def save_corpus(
        self, path: str, manifest: Dict[str, Any], instances: List[Dict]
    ) -> int:
        self.corpora[path] = {
            "manifest": copy.deepcopy(manifest),
            "instances": copy.deepcopy(instances),
        }
        return len(instances)

    def load_corpus(self, path: str) -> List[Dict]:
        if path not in self.corpora:
            raise ForgeError(f"cannot read {path}")
        return copy.deepcopy(self.corpora[path]["instances"])

    def load_instance(self, path: str) -> Dict:
        if path not in self.instances:
            raise ForgeError(f"cannot read {path}")
        return copy.deepcopy(self.instances[path])


class MockCertificateRepository(CertificateRepository):
    def __init__(self):
        self.certificates: Dict[str, Dict] = {}

    def save_certificate(self, payload: Dict, path: Optional[str]) -> str:
        path = path or f"certificates/{payload['relation']}-{len(self.certificates)}.json"
        self.certificates[path] = copy.deepcopy(payload)
        return path

    def load_certificate(self, path: str) -> Dict:
        if path not in self.certificates:
            raise ForgeError(f"cannot read {path}")
        return copy.deepcopy(self.certificates[path])


class MockReportRepository(ReportRepository):
    def __init__(self):
        self.reports: Dict[str, Dict] = {}

    def save_report(self, payload: Dict, path: Optional[str]) -> str:
        path = path or f"{payload['suite']}-report.json"
        self.reports[path] = copy.deepcopy(payload)
        return path


class MockTaskDispatchRepository(TaskDispatchRepository):
    """Runs everything in the calling thread, counting batches."""

    def __init__(self):
        self.batches = 0

    def map_ordered(self, fn: Callable, items: List) -> List:
        self.batches += 1
        return [fn(item) for item in items]


def mock_reposet() -> Dict[str, Any]:
    return {
        "corpus_repository": MockCorpusRepository(),
        "certificate_repository": MockCertificateRepository(),
        "report_repository": MockReportRepository(),
        "task_dispatch_repository": MockTaskDispatchRepository(),
    }
