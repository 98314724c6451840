import datetime
import logging
import sys

from henon_toolkit import cli, files
from henon_toolkit.task_base import ValidationFailure


log = logging.getLogger(__name__)
exception_logger = logging.getLogger().getChild("_EXCEPTION_LOGGING")


class LogFormatter(logging.Formatter):
    def format(self, record):
        if record.name == exception_logger.name:
            original_format = self._style._fmt
            self._style._fmt = "[{levelname}] {asctime}.{msecs:03.0f}: {message}"
            s = super().format(record)
            self._style._fmt = original_format
        else:
            s = super().format(record)
        return s.replace("\n", "\n\t")


def exception_handler(exc_type, exc_value, exc_traceback):
    """
    Logs uncaught exceptions. Anything not mapped to an exit status by the command line ends the run with status 3.
    """
    if issubclass(exc_type, KeyboardInterrupt):
        sys.__excepthook__(exc_type, exc_value, exc_traceback)
    else:
        exception_logger.error("", exc_info=(exc_type, exc_value, exc_traceback))
        sys.exit(cli.EXIT_NUMERICAL)


def create_file_handler() -> logging.Handler | None:
    """
    Creates the handler of this run's log file, keeping at most ``files.MAX_LOG_FILES`` files in the logs directory.
    Logging to a file is skipped if the directory can't be created.
    """
    logs_dir = files.get_logs_dir()
    try:
        logs_dir.mkdir(parents=True, exist_ok=True)
        log_files = sorted(logs_dir.glob("*.log"))
        while len(log_files) >= files.MAX_LOG_FILES:
            log_files.pop(0).unlink()
    except OSError:
        return None

    log_file_name = datetime.datetime.now().strftime("%Y-%m-%d_%H-%M-%S-%f.log")
    file_handler = logging.FileHandler(logs_dir / log_file_name, encoding="utf-8", delay=True)
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(LogFormatter(
        fmt="[{levelname}] {module} @ {asctime}.{msecs:03.0f}: {message}",
        datefmt="%Y-%b-%d %H:%M:%S",
        style="{")
    )
    return file_handler


def setup_logging(verbose: bool):
    stderr_handler = logging.StreamHandler(sys.stderr)
    stderr_handler.setLevel(logging.DEBUG if verbose else logging.WARNING)
    stderr_handler.setFormatter(LogFormatter(fmt="[{levelname}] {module}: {message}", style="{"))

    root_logger = logging.getLogger()
    root_logger.addHandler(stderr_handler)
    file_handler = create_file_handler()
    if file_handler is not None:
        root_logger.addHandler(file_handler)
    root_logger.setLevel(logging.DEBUG)
    sys.excepthook = exception_handler


def main(argv: list[str] | None = None):
    try:
        config = cli.parse_config(argv)
    except ValidationFailure as e:
        sys.exit(cli.report_error(e, cli.EXIT_VALIDATION))

    setup_logging(config.verbose)
    log.info(f"henon-toolkit {files.get_version()}")
    sys.exit(cli.run(config))


if __name__ == "__main__":
    main()
