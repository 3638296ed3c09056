"""
Application Controller

Owns one kwitness invocation: loads configuration, sets up logging on
stderr, runs a command, maps failures to exit codes and writes the result
exactly once.
"""

import json
import logging
import logging.handlers
import sys
from dataclasses import dataclass
from typing import Any, Callable, Optional, TextIO

import colorlog

from .config import AppConfig, AppSettings
from .errors import (ClaimFailedError, ConfigValidationError, DocumentError, ExtractionError,
                     HomogeneityError, InternalVerificationError, InvalidChainMapError,
                     InvalidComplexError, InvalidEquivalenceError, KWitnessError,
                     NotAUnitError, NotNullHomotopicError, RingDescriptorError,
                     RingMismatchError, ScalarParseError, ShapeMismatchError,
                     SignResolutionError)
from .io import Document, dumps, parse
from .scalar import RingDescriptor

EXIT_OK = 0
EXIT_CLAIM_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_INTERRUPTED = 130

INPUT_ERRORS = (DocumentError, RingMismatchError, RingDescriptorError, ScalarParseError,
                ShapeMismatchError, HomogeneityError, InvalidComplexError,
                InvalidChainMapError, NotAUnitError, ConfigValidationError, OSError)
CLAIM_ERRORS = (ClaimFailedError, InvalidEquivalenceError, NotNullHomotopicError,
                SignResolutionError, ExtractionError, InternalVerificationError)

LOG_FORMAT = '%(log_color)s%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DEBUG_LOG_FORMAT = ('%(log_color)s%(asctime)s - %(name)s - %(levelname)s - '
                    '%(filename)s:%(lineno)d - %(message)s')


@dataclass
class CommandResult:
    """
    What a command produced.

    payload is serialized as a canonical document over ring unless the
    invocation asked for human output, in which case text is written.
    A result with no payload always writes text.
    """
    text: str
    payload: Any = None
    ring: Optional[RingDescriptor] = None


def exit_code_for(exc: BaseException) -> int:
    """Exit code for an exception raised while running a command."""
    if isinstance(exc, KeyboardInterrupt):
        return EXIT_INTERRUPTED
    if isinstance(exc, INPUT_ERRORS):
        return EXIT_INPUT_ERROR
    return EXIT_CLAIM_FAILED


def error_report(exc: BaseException, exit_code: int) -> dict:
    """Structured description of a failure, naming the degree and identity when known."""
    report = {"error": type(exc).__name__, "message": str(exc), "exit_code": exit_code}
    if isinstance(exc, KWitnessError):
        if exc.degree is not None:
            report["degree"] = exc.degree
        if exc.identity is not None:
            report["identity"] = exc.identity
    if isinstance(exc, DocumentError):
        if exc.path:
            report["path"] = exc.path
        if exc.line is not None:
            report["line"] = exc.line
    return report


class KWitnessApp:
    """
    Main application controller.

    One instance per invocation. Configuration precedence is command-line
    flag, then config file, then built-in default.
    """

    def __init__(self, debug_mode: bool = False, log_level: Optional[str] = None,
                 config_path: Optional[str] = None, human: Optional[bool] = None,
                 out_path: Optional[str] = None, stdin: Optional[TextIO] = None,
                 stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None):
        """
        Initialize the application.

        Args:
            debug_mode: Enable debug logging with file and line information
            log_level: Logging level; None uses the configured level
            config_path: Configuration file; None uses kwitness_config.yml
            human: Write human-readable reports; None uses the configured value
            out_path: Write output here instead of stdout
            stdin: Stream read for the '-' input
            stdout: Stream for documents
            stderr: Stream for logs and error reports
        """
        self.stdin = stdin if stdin is not None else sys.stdin
        self.stdout = stdout if stdout is not None else sys.stdout
        self.stderr = stderr if stderr is not None else sys.stderr
        self.debug_mode = debug_mode
        self.out_path = out_path
        self.handlers = []
        self._stdin_used = False
        self.startup_error: Optional[OSError] = None

        # configuration messages are held until the configured handlers exist
        startup = logging.handlers.MemoryHandler(capacity=1000, flushLevel=logging.CRITICAL + 1)
        root = logging.getLogger()
        root.addHandler(startup)
        root.setLevel(logging.DEBUG)
        try:
            self.config = AppConfig(config_path)
            self.config.initialize()
        finally:
            root.removeHandler(startup)
        self.settings: AppSettings = self.config.settings or AppSettings()

        self.log_level = "DEBUG" if debug_mode else (log_level or self.settings.log_level)
        self.human = self.settings.human if human is None else human

        self._setup_logging()
        self._replay(startup)

    def _setup_logging(self):
        """
        Setup colored logging on stderr, plus the configured log file if any.

        A log file that cannot be opened is kept as startup_error and
        reported by run() instead of the command.
        """
        log_format = DEBUG_LOG_FORMAT if self.debug_mode else LOG_FORMAT
        level = getattr(logging, self.log_level.upper())

        stream_handler = colorlog.StreamHandler(self.stderr)
        stream_handler.setFormatter(colorlog.ColoredFormatter(log_format))
        self.handlers.append(stream_handler)

        if self.settings.log_file:
            try:
                file_handler = logging.FileHandler(self.settings.log_file, mode='a', encoding='utf-8')
            except OSError as e:
                self.startup_error = e
            else:
                file_handler.setFormatter(logging.Formatter(
                    log_format.replace('%(log_color)s', '')))
                self.handlers.append(file_handler)

        root = logging.getLogger()
        root.setLevel(level)
        for handler in self.handlers:
            root.addHandler(handler)

        self.logger = logging.getLogger(__name__)
        self.logger.debug(f"kwitness starting (debug={self.debug_mode}, log_level={self.log_level})")

    def _replay(self, startup: logging.handlers.MemoryHandler):
        """Pass buffered startup records to the configured handlers."""
        level = logging.getLogger().level
        for record in startup.buffer:
            if record.levelno >= level:
                for handler in self.handlers:
                    handler.handle(record)
        startup.buffer = []
        startup.close()

    def _handle_exception(self, exc: BaseException) -> int:
        """
        Log a failure and turn it into an exit code and an error report.

        Args:
            exc: Exception raised by the command

        Returns:
            Exit code for the invocation
        """
        code = exit_code_for(exc)
        if code == EXIT_INTERRUPTED:
            self.logger.info("Interrupted by user")
            return code
        if not isinstance(exc, (KWitnessError, OSError)):
            self.logger.critical(f"Unexpected error: {exc}", exc_info=exc)
        else:
            self.logger.debug(f"{type(exc).__name__}: {exc}")

        report = error_report(exc, code)
        if self.human:
            self.stderr.write(f"error: {report['message']}\n")
        else:
            self.stderr.write(json.dumps(report, sort_keys=True, ensure_ascii=False) + "\n")
        return code

    def read_text(self, path: str) -> str:
        """Read an input file, or stdin for '-'. Stdin can be read only once."""
        if path == "-":
            if self._stdin_used:
                raise OSError("standard input can only be used for one input")
            self._stdin_used = True
            return self.stdin.read()
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()

    def read_document(self, path: str, ring: Optional[RingDescriptor] = None) -> Document:
        """
        Read and parse an input document, leaving claims to the caller.

        Raises:
            RingMismatchError: If ring is given and the document uses another one
        """
        doc = parse(self.read_text(path), check_claims=False)
        if ring is not None and doc.ring != ring:
            raise RingMismatchError(f"{path}: document ring {doc.ring} is not {ring}")
        self.logger.debug(f"read {doc.kind.value} document from {path}")
        return doc

    def _render(self, result: CommandResult) -> str:
        if result.payload is None or self.human:
            return result.text if result.text.endswith("\n") else result.text + "\n"
        return dumps(result.payload, result.ring)

    def _write(self, text: str):
        if self.out_path:
            with open(self.out_path, 'w', encoding='utf-8', newline='\n') as f:
                f.write(text)
        else:
            self.stdout.write(text)

    def run(self, command: Callable[['KWitnessApp'], CommandResult]) -> int:
        """
        Run a command and write its output.

        The output is rendered completely before anything is written, so a
        failing command writes nothing to stdout or --out.

        Returns:
            Exit code: 0 success, 1 false claim, 2 input error, 130 interrupted
        """
        if self.startup_error is not None:
            return self._handle_exception(self.startup_error)
        try:
            text = self._render(command(self))
            self._write(text)
            return EXIT_OK
        except (Exception, KeyboardInterrupt) as e:
            return self._handle_exception(e)

    def cleanup(self):
        """Detach and close the logging handlers this instance installed."""
        root = logging.getLogger()
        for handler in self.handlers:
            root.removeHandler(handler)
            handler.close()
        self.handlers = []
