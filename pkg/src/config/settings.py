"""Runtime settings for the experiment runner.

Settings come from a dotenv file found in one of several candidate
locations, overridden by variables already present in the environment.
"""

import logging
import os

import dotenv

logger = logging.getLogger(__name__)

DEFAULTS = {
    "CHIRALWALK_THREADS": 1,
    "CHIRALWALK_OUTPUT_DIR": "results",
    "CHIRALWALK_LOG_LEVEL": "INFO",
}

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

_settings = None


def _settings_file():
    """First existing settings file, or None."""
    possible_paths = [
        os.path.join(os.path.dirname(__file__), "chiralwalk.env"),
        "src/config/chiralwalk.env",
        "config/chiralwalk.env",
    ]
    for path in possible_paths:
        if os.path.exists(path):
            return path
    return None


def _threads(raw):
    try:
        threads = int(raw)
    except (TypeError, ValueError):
        threads = 0
    if threads < 1:
        logger.warning("⚠️ CHIRALWALK_THREADS=%r is not a positive integer; using 1", raw)
        return DEFAULTS["CHIRALWALK_THREADS"]
    return threads


def _log_level(raw):
    level = str(raw).strip().upper()
    if level not in LOG_LEVELS:
        logger.warning("⚠️ CHIRALWALK_LOG_LEVEL=%r is not a logging level; using INFO", raw)
        return DEFAULTS["CHIRALWALK_LOG_LEVEL"]
    return level


def load_settings():
    """Load settings once and return them as a dict.

    Returns:
        dict: CHIRALWALK_THREADS (int), CHIRALWALK_OUTPUT_DIR (str),
        CHIRALWALK_LOG_LEVEL (str), plus "settings_file" (path or None).
    """
    global _settings
    if _settings is not None:
        return _settings

    path = _settings_file()
    values = dotenv.dotenv_values(path) if path else {}
    if not path:
        logger.debug("No settings file found; using defaults and the environment")

    def lookup(key):
        return os.getenv(key) or values.get(key) or DEFAULTS[key]

    _settings = {
        "CHIRALWALK_THREADS": _threads(lookup("CHIRALWALK_THREADS")),
        "CHIRALWALK_OUTPUT_DIR": str(lookup("CHIRALWALK_OUTPUT_DIR")),
        "CHIRALWALK_LOG_LEVEL": _log_level(lookup("CHIRALWALK_LOG_LEVEL")),
        "settings_file": path,
    }
    return _settings


def reset_settings():
    global _settings
    _settings = None
