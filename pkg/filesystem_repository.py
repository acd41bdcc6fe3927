import json
import logging
import os
from typing import Any, Dict, List, Optional

try:
    import finite_forge.repositories as repositories
    import finite_forge.settings as settings
    from finite_forge.repositories import ForgeError, SchemaError
except ModuleNotFoundError:
    import repositories
    import settings
    from repositories import ForgeError, SchemaError

logger = logging.getLogger(__name__)


def _write_json(path: str, payload: Dict) -> str:
    directory = os.path.dirname(path)
    try:
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(payload, f, sort_keys=True, indent=2, ensure_ascii=False)
            f.write("\n")
    except OSError as e:
        logger.error(f"Error writing {path}: {e}")
        raise ForgeError(f"cannot write {path}: {e}")
    return path


def _read_json(path: str) -> Dict:
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        logger.error(f"Error reading {path}: {e}")
        raise ForgeError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path} is not JSON: {e.msg}", f"line {e.lineno}")


class JsonlCorpusRepository(repositories.CorpusRepository):
    """One JSON document per line; the first line is {"manifest": {...}}."""

    def save_corpus(
        self, path: str, manifest: Dict[str, Any], instances: List[Dict]
    ) -> int:
        directory = os.path.dirname(path)
        try:
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(path, "w", encoding="utf-8") as f:
                f.write(json.dumps({"manifest": manifest}, sort_keys=True) + "\n")
                for instance in instances:
                    f.write(json.dumps(instance, sort_keys=True) + "\n")
        except OSError as e:
            logger.error(f"Error writing corpus {path}: {e}")
            raise ForgeError(f"cannot write {path}: {e}")
        logger.info(f"wrote {len(instances)} instances to {path}")
        return len(instances)

    def load_corpus(self, path: str) -> List[Dict]:
        instances = []
        try:
            with open(path, encoding="utf-8") as f:
                for lineno, line in enumerate(f, start=1):
                    if not line.strip():
                        continue
                    try:
                        doc = json.loads(line)
                    except json.JSONDecodeError as e:
                        raise SchemaError(f"{path} line {lineno}: {e.msg}", f"line {lineno}")
                    if isinstance(doc, dict) and "manifest" in doc:
                        continue
                    instances.append(doc)
        except OSError as e:
            logger.error(f"Error reading corpus {path}: {e}")
            raise ForgeError(f"cannot read {path}: {e}")
        return instances

    def load_instance(self, path: str) -> Dict:
        return _read_json(path)


class JsonCertificateRepository(repositories.CertificateRepository):
    def save_certificate(self, payload: Dict, path: Optional[str]) -> str:
        if path is None:
            rhs = (payload.get("rhs") or "none")[:12]
            name = f"{payload['relation']}-{payload['lhs'][:12]}-{rhs}.json"
            path = os.path.join(settings.FORGE_OUTPUT_DIR, "certificates", name)
        return _write_json(path, payload)

    def load_certificate(self, path: str) -> Dict:
        return _read_json(path)


class JsonReportRepository(repositories.ReportRepository):
    def save_report(self, payload: Dict, path: Optional[str]) -> str:
        if path is None:
            path = os.path.join(settings.FORGE_OUTPUT_DIR, f"{payload['suite']}-report.json")
        return _write_json(path, payload)
