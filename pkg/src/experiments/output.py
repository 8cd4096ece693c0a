"""Self-describing CSV files.

Layout: "# key: value" metadata lines, the data table, then optional
"# " footer lines holding a one-row summary. Files are replaced atomically.
"""

import io
import logging
import os
import tempfile

from walk.errors import OutputError
from experiments.presets import ARTIFACT_VERSION

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"


def _default_file_mode():
    # umask can only be read by setting it
    mask = os.umask(0)
    os.umask(mask)
    return 0o666 & ~mask


def _format_value(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    if isinstance(value, (tuple, list)):
        return ":".join(_format_value(v) for v in value)
    return str(value)


def render_csv(frame, metadata, footer=None):
    """CSV text with "\\n" line endings and 12 significant digits."""
    buffer = io.StringIO()
    buffer.write(f"# chiralwalk {ARTIFACT_VERSION}\n")
    for key, value in metadata.items():
        buffer.write(f"# {key}: {_format_value(value)}\n")
    frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    if footer:
        buffer.write("# " + ",".join(footer) + "\n")
        buffer.write("# " + ",".join(_format_value(v) for v in footer.values()) + "\n")
    return buffer.getvalue()


def write_csv(frame, path, metadata, footer=None):
    """Write the rendered CSV to ``path`` through a temporary file and a rename.

    Raises:
        OutputError: the directory cannot be created or the file cannot be written.
    """
    text = render_csv(frame, metadata, footer)
    directory = os.path.dirname(os.path.abspath(path))
    tmp_path = None
    try:
        os.makedirs(directory, exist_ok=True)
        with tempfile.NamedTemporaryFile("w", dir=directory, suffix=".tmp", delete=False, newline="") as handle:
            tmp_path = handle.name
            handle.write(text)
        os.chmod(tmp_path, _default_file_mode())
        os.replace(tmp_path, path)
    except OSError as e:
        if tmp_path and os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise OutputError(f"could not write {path}: {e}") from e
    logger.info("✓ Wrote %d rows to %s", len(frame), path)
    return path
