import logging
import sys

from prompt_toolkit import print_formatted_text
from prompt_toolkit.formatted_text import FormattedText
from prompt_toolkit.styles import Style

STYLE = Style.from_dict(
    {
        "debug": "#888888",
        "info": "",
        "warning": "#d7af00",
        "error": "#ff5f5f bold",
        "name": "#5f87af",
        "key": "#5f87af",
        "value": "bold",
    }
)


class FormattedTextHandler(logging.Handler):
    """Routes log records through prompt_toolkit so levels get their own colour."""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            level = record.levelname.lower()
            if level not in ("debug", "info", "warning", "error"):
                level = "error"
            fragments = [(f"class:{level}", self.format(record))]
            if record.levelno >= logging.WARNING:
                fragments.insert(0, (f"class:{level}", f"{level}: "))
            print_formatted_text(
                FormattedText(fragments), style=STYLE, file=sys.stderr
            )
        except Exception:
            self.handleError(record)


def setup_logging(verbosity: int = 0) -> None:
    level = logging.INFO
    if verbosity > 0:
        level = logging.DEBUG
    elif verbosity < 0:
        level = logging.WARNING

    root = logging.getLogger("mvd_sr")
    for handler in list(root.handlers):
        if isinstance(handler, FormattedTextHandler):
            root.removeHandler(handler)
    handler = FormattedTextHandler()
    handler.setFormatter(logging.Formatter("%(message)s"))
    root.addHandler(handler)
    root.setLevel(level)


def print_pairs(pairs: list[tuple[str, str]]) -> None:
    """key=value lines, styled on a terminal and plain LF text otherwise."""
    if not sys.stdout.isatty():
        sys.stdout.write("".join(f"{key}={value}\n" for key, value in pairs))
        sys.stdout.flush()
        return
    fragments = []
    for key, value in pairs:
        fragments += [("class:key", key), ("", "="), ("class:value", value), ("", "\n")]
    print_formatted_text(
        FormattedText(fragments), style=STYLE, end="", file=sys.stdout
    )
