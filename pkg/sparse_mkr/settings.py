"""
Runtime settings for the sparse_mkr package.

Values are read once from environment variables, with fallbacks suitable for
a single workstation.
"""

import logging
import os

logger = logging.getLogger(__name__)


def _read_threads() -> int:
    raw = os.environ.get('SPARSE_MKR_THREADS')
    default = os.cpu_count() or 1
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("Ignoring SPARSE_MKR_THREADS=%r (not an integer)", raw)
        return default
    return max(1, value)


# Upper bound on worker threads used by the comparison harness
THREADS = _read_threads()

# Log level applied by the command-line front end
LOG_LEVEL = os.environ.get('SPARSE_MKR_LOG_LEVEL', 'WARNING').upper()
