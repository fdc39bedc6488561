"""
Environment-driven settings for the command line and the HTTP service.
"""

import logging
import os
import sys

VERSION = "1.0.0"

SEARCH_CONFIG = {
    "depth": int(os.getenv("HERBRAND_SEARCH_DEPTH", "12")),
    "terms": int(os.getenv("HERBRAND_TERM_DEPTH", "1")),
    "policy": os.getenv("HERBRAND_POLICY", "full"),
}

SERVER_CONFIG = {
    "host": os.getenv("HOST", "0.0.0.0"),
    "port": int(os.getenv("PORT", "8000")),
}

LOG_LEVEL = os.getenv("HERBRAND_LOG_LEVEL", "WARNING")

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str = None) -> None:
    """Send log records to stderr so that stdout stays machine-readable."""
    logging.basicConfig(
        level=(level or LOG_LEVEL).upper(),
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
