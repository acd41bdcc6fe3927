"""
Runtime settings, read from the environment.

An optional ``.env`` file next to this module is loaded first,
so local overrides don't need exporting.
"""

import os

from dotenv import load_dotenv

load_dotenv(os.path.join(os.path.dirname(os.path.abspath(__file__)), ".env"))

TOOL_VERSION = "0.1.0"

# search nodes a single search may expand before it refuses
FORGE_BUDGET = int(os.getenv("FORGE_BUDGET", "2000000"))
# builders and graph searches refuse anything larger
FORGE_MAX_VERTICES = int(os.getenv("FORGE_MAX_VERTICES", "64"))
# suites build bigger gadgets on purpose
FORGE_SUITE_MAX_VERTICES = int(os.getenv("FORGE_SUITE_MAX_VERTICES", "1024"))
FORGE_MAX_CORPUS = int(os.getenv("FORGE_MAX_CORPUS", "250000"))
FORGE_WORKERS = int(os.getenv("FORGE_WORKERS", "4"))
FORGE_LOG_LEVEL = os.getenv("FORGE_LOG_LEVEL", "WARNING")
FORGE_OUTPUT_DIR = os.getenv("FORGE_OUTPUT_DIR", "forge-out")
