import copy
import dataclasses
import logging
import pathlib
import tomllib

from henon_toolkit.task_base import ValidationFailure


log = logging.getLogger(__name__)


class ConfigError(ValidationFailure):
    """
    Signals that a settings file couldn't be read, has an unsupported format version or contains invalid values.
    """
    pass


@dataclasses.dataclass(frozen=True)
class IdentitySettings:
    rel_tol: float = 1e-4
    quad_epsabs: float = 0.0
    quad_epsrel: float = 1e-11
    quad_limit: int = 500
    tail_radius: float = 1e4


@dataclasses.dataclass(frozen=True)
class SpectralSettings:
    nodes: int = 8000
    r_min_factor: float = 1e-6
    bisection_tol: float = 1e-10
    inverse_iterations: int = 2
    min_nodes_per_lobe: int = 10


@dataclasses.dataclass(frozen=True)
class BifurcationSettings:
    residual_tol: float = 1e-6
    alpha_tol: float = 1e-8
    max_alpha: float = 60.0
    monotonic_samples: int = 5


@dataclasses.dataclass(frozen=True)
class ShootingSettings:
    s0: float = 1e-6
    s_max: float = 1e6
    rtol: float = 1e-12
    atol: float = 1e-14


@dataclasses.dataclass(frozen=True)
class OutputSettings:
    float_digits: int = 17


_TABLES = {
    "identities": IdentitySettings,
    "spectral": SpectralSettings,
    "bifurcation": BifurcationSettings,
    "shooting": ShootingSettings,
    "output": OutputSettings,
}


class Settings:
    CURRENT_VERSION = 2
    MIN_VERSION = 1

    def __init__(self, config_data: dict | None = None):
        """
        Tolerances and discretization defaults of every numerical operation. Missing tables or keys fall back to the
        built-in defaults. See the config template for the meaning of each key.
        :param config_data: Dict representing the content of a settings file, already upgraded to the current format.
        """
        config_data = config_data or {}
        unknown = set(config_data) - set(_TABLES) - {"format_version"}
        if unknown:
            raise ConfigError(f"Unknown settings tables: {', '.join(sorted(unknown))}")

        self.identities: IdentitySettings = self._read_table(config_data, "identities")
        self.spectral: SpectralSettings = self._read_table(config_data, "spectral")
        self.bifurcation: BifurcationSettings = self._read_table(config_data, "bifurcation")
        self.shooting: ShootingSettings = self._read_table(config_data, "shooting")
        self.output: OutputSettings = self._read_table(config_data, "output")

    @staticmethod
    def _read_table(config_data: dict, name: str):
        table_type = _TABLES[name]
        values = config_data.get(name, {})
        if not isinstance(values, dict):
            raise ConfigError(f"Settings entry [{name}] must be a table")

        field_types = {f.name: f.type for f in dataclasses.fields(table_type)}
        for key, value in values.items():
            if key not in field_types:
                raise ConfigError(f"Unknown key {key!r} in settings table [{name}]")
            expected = int if field_types[key] in (int, "int") else float
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"Settings key {name}.{key} must be a number, got {value!r}")
            if expected is int and not isinstance(value, int):
                raise ConfigError(f"Settings key {name}.{key} must be an integer, got {value!r}")
            if value < 0:
                raise ConfigError(f"Settings key {name}.{key} must not be negative, got {value!r}")

        return table_type(**{k: (float(v) if field_types[k] in (float, "float") else v) for k, v in values.items()})

    @classmethod
    def read(cls, file_path: pathlib.Path) -> "Settings":
        return cls(cls.read_config_file(file_path))

    @classmethod
    def read_config_file(cls, file_path: pathlib.Path) -> dict:
        try:
            config_data_text = file_path.read_text(encoding="utf-8")
            config_data = tomllib.loads(config_data_text)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"Couldn't parse settings file {file_path}: {e}") from e

        format_version = config_data.get("format_version")
        if not isinstance(format_version, int) or format_version < cls.MIN_VERSION:
            raise ConfigError(f"Invalid settings format version {format_version}")
        if format_version > cls.CURRENT_VERSION:
            raise ConfigError(f"Settings format version {format_version} isn't supported.")

        upgrade_functions = [
            None,
            cls.upgrade_v1,
        ]

        while format_version < cls.CURRENT_VERSION:
            func = upgrade_functions[format_version]
            func(config_data)
            format_version += 1
        config_data["format_version"] = format_version

        log.debug(f"Read settings from {file_path}")
        return config_data

    @staticmethod
    def upgrade_v1(config_data: dict):
        config_data.setdefault("shooting", dataclasses.asdict(ShootingSettings()))

    def to_dict(self) -> dict:
        data = {"format_version": self.CURRENT_VERSION}
        for name in _TABLES:
            data[name] = dataclasses.asdict(getattr(self, name))
        return data

    def merged(self, config_data: dict) -> "Settings":
        """
        Creates new settings in which the tables of ``config_data`` override the values of these settings key by key.
        """
        data = copy.deepcopy(self.to_dict())
        for name, values in config_data.items():
            if name == "format_version":
                continue
            if name not in _TABLES or not isinstance(values, dict):
                raise ConfigError(f"Unknown settings table [{name}]")
            data[name].update(values)
        return Settings(data)

    def with_tolerance(self, tol: float) -> "Settings":
        """
        Overrides the identity and residual tolerance, as given by ``--tol`` on the command line.
        """
        if not tol > 0:
            raise ConfigError(f"Tolerance must be positive, got {tol}")
        return self.merged({"identities": {"rel_tol": tol}})


DEFAULT = Settings()


def load_settings(config_paths: list[pathlib.Path], tol: float | None = None) -> Settings:
    """
    Builds the effective settings: built-in defaults, then each existing file of ``config_paths`` in order, then the
    tolerance override.
    :param config_paths: Settings files, lowest precedence first. Missing files are skipped.
    :param tol: Optional identity tolerance override.
    :return: Effective settings.
    """
    result = DEFAULT
    for path in config_paths:
        if not path.is_file():
            log.debug(f"Settings file {path} doesn't exist, skipping")
            continue
        result = result.merged(Settings.read_config_file(path))

    if tol is not None:
        result = result.with_tolerance(tol)
    return result
