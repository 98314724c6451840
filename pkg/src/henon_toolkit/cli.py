"""
Command-line front end. Every command runs as a task, writes a deterministic CSV or JSON document and exits with
0 on success, 1 on I/O errors, 2 on invalid input and 3 on numerical failures or failed checks.
"""

import argparse
import dataclasses
import json
import logging
import pathlib
import sys

import numpy as np

from henon_toolkit import files, settings, task_impl
from henon_toolkit.settings import Settings
from henon_toolkit.spectral import FarField, Form
from henon_toolkit.task_base import NumericalFailure, Status, ValidationFailure


log = logging.getLogger(__name__)


EXIT_SUCCESS = 0
EXIT_IO_ERROR = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

COMMANDS = ["spectrum", "morse", "bifurcate", "diagram", "verify", "sobolev", "bvp", "identities"]

DEFAULT_RADII = {
    "spectrum": (200.0,),
    "bifurcate": (200.0,),
    "diagram": (100.0, 200.0, 400.0),
}

DEFAULT_ALPHAS = {
    "morse": tuple(np.linspace(0.0, 6.5, 14)),
    "sobolev": (0.0, 1.0, 2.0),
}

DEFAULT_FORMATS = {
    "diagram": "csv",
    "verify": "csv",
}


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """
    Fully parsed command line. Numeric fields are checked against the preconditions of the numerical modules when the
    command runs; invalid values end the run with exit status 2.
    """
    command: str
    n_dim: int = 3
    alphas: tuple[float, ...] = (2.0,)
    ks: tuple[int, ...] = (2,)
    radii: tuple[float, ...] = ()
    nodes: int | None = None
    out_path: pathlib.Path | None = None
    format: str = "json"
    tol: float | None = None
    threads: int = 1
    config_path: pathlib.Path | None = None
    verbose: bool = False
    form: str = "lambda_form"
    h_max: int = 1
    far_field: str | None = None
    k_max: int = 3
    p: float = 3.0
    d_values: tuple[float, ...] = ()
    lam: float = 1.0
    quick: bool = False

    def echo(self) -> dict:
        """
        Config as written into the JSON document. Paths and logging options don't affect results and are left out.
        """
        data = dataclasses.asdict(self)
        for key in ("out_path", "config_path", "verbose", "threads"):
            data.pop(key)
        return _plain(data)


def _plain(value):
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, pathlib.Path):
        return str(value)
    return value


def parse_float_list(text: str) -> tuple[float, ...]:
    """
    Parses "a", "a,b,c" or the range "min:max:steps" (inclusive, evenly spaced).
    """
    try:
        if ":" in text:
            start, stop, steps = text.split(":")
            count = int(steps)
            if count < 1:
                raise ValueError()
            return tuple(float(a) for a in np.linspace(float(start), float(stop), count))
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected a number, a comma list or min:max:steps, got {text!r}") from None


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected an integer or a comma list, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", dest="n_dim", type=int, default=3, help="Dimension N ≥ 3.")
    common.add_argument("--alpha", type=parse_float_list, help="Exponent α: value, comma list or min:max:steps.")
    common.add_argument("--k", type=parse_int_list, help="Mode index or comma list of modes.")
    radius = common.add_mutually_exclusive_group()
    radius.add_argument("--radius", type=parse_float_list, help="Truncation radius R, or a comma list.")
    radius.add_argument("--eps", type=parse_float_list, help="Truncation parameter ε = 1/R, or a comma list.")
    common.add_argument("--nodes", type=int, help="Number of grid nodes of the eigensolver.")
    common.add_argument("--out", type=pathlib.Path, help="Output file (default: stdout).")
    common.add_argument("--format", choices=["csv", "json"], help="Output format.")
    common.add_argument("--threads", type=int, default=1, help="Worker threads for sweeps.")
    common.add_argument("--tol", type=float, help="Relative tolerance of identity checks.")
    common.add_argument("--config", type=pathlib.Path, help="Settings file overriding the shipped defaults.")
    common.add_argument("--verbose", action="store_true", help="Log debug messages to stderr.")

    parser = argparse.ArgumentParser(prog="henon-toolkit",
                                     description="Spectral and bifurcation toolkit for the Hénon equation.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    spectrum = subparsers.add_parser("spectrum", parents=[common], help="Eigenvalues of a truncated problem.")
    spectrum.add_argument("--form", choices=[f.value for f in Form], default=Form.LAMBDA.value)
    spectrum.add_argument("--h-max", dest="h_max", type=int, default=1, help="Number of eigenpairs.")
    spectrum.add_argument("--far-field", dest="far_field", choices=[f.value for f in FarField],
                          help="Condition at R (default: decay for lambda_form, dirichlet otherwise).")

    subparsers.add_parser("morse", parents=[common], help="Morse index table along α.")
    subparsers.add_parser("bifurcate", parents=[common], help="Bifurcation values α_k.")

    diagram = subparsers.add_parser("diagram", parents=[common], help="Bifurcation diagram data.")
    diagram.add_argument("--kmax", dest="k_max", type=int, default=3)

    verify = subparsers.add_parser("verify", parents=[common], help="Run the verification suite.")
    verify.add_argument("--quick", action="store_true", help="Run a reduced suite.")

    subparsers.add_parser("sobolev", parents=[common], help="Sobolev constant and quotient of the bubble.")
    subparsers.add_parser("identities", parents=[common], help="Integral and Pohozaev identities.")

    bvp = subparsers.add_parser("bvp", parents=[common], help="Radial Dirichlet problem on the unit ball.")
    bvp.add_argument("--p", type=float, default=3.0, help="Exponent p in (1, p_α).")
    bvp.add_argument("--d", type=parse_float_list, help="Initial heights to shoot from.")

    for name in ("sobolev", "identities"):
        subparsers.choices[name].add_argument("--lambda", dest="lam", type=float, default=1.0,
                                              help="Dilation parameter λ of the bubble.")

    return parser


def parse_config(argv: list[str] | None = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    command = args.command

    if args.radius is not None:
        radii = args.radius
    elif args.eps is not None:
        if any(e <= 0 for e in args.eps):
            raise settings.ConfigError("Truncation parameters must be positive")
        radii = tuple(1 / e for e in args.eps)
    else:
        radii = DEFAULT_RADII.get(command, ())

    return RunConfig(
        command=command,
        n_dim=args.n_dim,
        alphas=args.alpha or DEFAULT_ALPHAS.get(command, (2.0,)),
        ks=args.k or (2,),
        radii=radii,
        nodes=args.nodes,
        out_path=args.out,
        format=args.format or DEFAULT_FORMATS.get(command, "json"),
        tol=args.tol,
        threads=args.threads,
        config_path=args.config,
        verbose=args.verbose,
        form=getattr(args, "form", Form.LAMBDA.value),
        h_max=getattr(args, "h_max", 1),
        far_field=getattr(args, "far_field", None),
        k_max=getattr(args, "k_max", 3),
        p=getattr(args, "p", 3.0),
        d_values=getattr(args, "d", None) or (),
        lam=getattr(args, "lam", 1.0),
        quick=getattr(args, "quick", False),
    )


def load_run_settings(config: RunConfig) -> Settings:
    """
    Builds the settings of a run: built-in defaults, the shipped defaults file, ``--config`` and finally ``--tol`` and
    ``--nodes``.
    """
    paths = [files.DEFAULT_SETTINGS_FILE]
    if config.config_path is not None:
        if not config.config_path.is_file():
            raise FileNotFoundError(f"Settings file {config.config_path} doesn't exist")
        paths.append(config.config_path)

    run_settings = settings.load_settings(paths, config.tol)
    if config.nodes is not None:
        run_settings = run_settings.merged({"spectral": {"nodes": config.nodes}})
    return run_settings


def validate(config: RunConfig):
    if config.command not in COMMANDS:
        raise settings.ConfigError(f"Unknown command {config.command!r}")
    if config.threads < 1:
        raise settings.ConfigError(f"Thread count must be positive, got {config.threads}")
    if any(not r > 0 for r in config.radii):
        raise settings.ConfigError("Radii must be positive")
    if not config.alphas or not config.ks:
        raise settings.ConfigError("Empty parameter list")
    if config.command in ("spectrum", "bifurcate", "diagram") and not config.radii:
        raise settings.ConfigError(f"Command {config.command} needs --radius or --eps")
    if config.h_max < 1:
        raise settings.ConfigError(f"Number of eigenpairs must be positive, got {config.h_max}")


def render(config: RunConfig, output: task_impl.CommandOutput, run_settings: Settings) -> str:
    if config.format == "csv":
        return files.to_csv(output.columns, _plain(output.rows), run_settings.output.float_digits)

    document = {
        "config": config.echo(),
        "results": _plain(output.rows),
        "checks": [c.to_dict() for c in output.checks],
    }
    return files.to_json(document)


def report_error(error: BaseException, status: int) -> int:
    error_document = {"error": {"type": type(error).__name__, "message": str(error)}}
    sys.stderr.write(json.dumps(error_document) + "\n")
    return status


def exit_status_for(error: BaseException) -> int:
    if isinstance(error, ValidationFailure):
        return EXIT_VALIDATION
    if isinstance(error, NumericalFailure):
        return EXIT_NUMERICAL
    if isinstance(error, OSError):
        return EXIT_IO_ERROR
    return EXIT_NUMERICAL


def run(config: RunConfig) -> int:
    """
    Executes a command and writes its output.
    :param config: Parsed command line.
    :return: Exit status.
    """
    try:
        validate(config)
        run_settings = load_run_settings(config)
    except (ValidationFailure, OSError) as e:
        return report_error(e, exit_status_for(e))

    log.info(f"Running {config.command} with {config.echo()}")
    task = task_impl.create_task(config, run_settings)
    task.run()
    if task.get_status() != Status.SUCCESS:
        return report_error(task.error, exit_status_for(task.error))

    output: task_impl.CommandOutput = task.result
    try:
        files.write_output(render(config, output, run_settings), config.out_path)
    except OSError as e:
        return report_error(e, EXIT_IO_ERROR)

    if not output.all_passed:
        failed = [c.name for c in output.checks if not c.passed]
        log.warning(f"{len(failed)} checks failed: {', '.join(failed)}")
        return EXIT_NUMERICAL
    return EXIT_SUCCESS
