import pytest

from henon_toolkit import files, settings
from henon_toolkit.settings import ConfigError, Settings


def _write(tmp_path, text: str):
    path = tmp_path / "settings.toml"
    path.write_text(text, encoding="utf-8")
    return path


class TestSettings:
    def test_defaults(self):
        assert settings.DEFAULT.identities.rel_tol == 1e-4
        assert settings.DEFAULT.spectral.nodes == 8000
        assert settings.DEFAULT.bifurcation.max_alpha == 60.0
        assert settings.DEFAULT.output.float_digits == 17

    def test_shipped_defaults_match_builtin(self):
        data = Settings.read_config_file(files.DEFAULT_SETTINGS_FILE)
        assert Settings(data).to_dict() == settings.DEFAULT.to_dict()

    def test_partial_file(self, tmp_path):
        path = _write(tmp_path, "format_version = 2\n[spectral]\nnodes = 4000\n")
        loaded = Settings.read(path)
        assert loaded.spectral.nodes == 4000
        assert loaded.spectral.bisection_tol == settings.DEFAULT.spectral.bisection_tol

    def test_integer_accepted_for_float(self, tmp_path):
        loaded = Settings.read(_write(tmp_path, "format_version = 2\n[bifurcation]\nmax_alpha = 30\n"))
        assert loaded.bifurcation.max_alpha == 30.0
        assert isinstance(loaded.bifurcation.max_alpha, float)

    def test_upgrade_from_version_one(self, tmp_path):
        data = Settings.read_config_file(_write(tmp_path, "format_version = 1\n[identities]\nrel_tol = 1e-6\n"))
        assert data["format_version"] == Settings.CURRENT_VERSION
        assert data["shooting"]["s_max"] == settings.DEFAULT.shooting.s_max
        assert Settings(data).identities.rel_tol == 1e-6

    @pytest.mark.parametrize("text", [
        "format_version = 3\n",
        "format_version = 0\n",
        "[spectral]\nnodes = 10\n",
        "format_version = 2\n[spectral\n",
        "format_version = 2\n[plotting]\ndpi = 3\n",
        "format_version = 2\n[spectral]\nnode_count = 10\n",
        "format_version = 2\n[spectral]\nnodes = 10.5\n",
        "format_version = 2\n[identities]\nrel_tol = -1.0\n",
        "format_version = 2\n[identities]\nrel_tol = \"small\"\n",
        "format_version = 2\nspectral = 3\n",
    ])
    def test_invalid_files(self, tmp_path, text):
        with pytest.raises(ConfigError):
            Settings.read(_write(tmp_path, text))

    def test_merged_keeps_other_keys(self):
        merged = settings.DEFAULT.merged({"spectral": {"nodes": 1000}})
        assert merged.spectral.nodes == 1000
        assert merged.spectral.r_min_factor == settings.DEFAULT.spectral.r_min_factor
        assert settings.DEFAULT.spectral.nodes == 8000

    def test_tolerance_override(self):
        assert settings.DEFAULT.with_tolerance(1e-6).identities.rel_tol == 1e-6
        with pytest.raises(ConfigError):
            settings.DEFAULT.with_tolerance(0.0)

    def test_load_settings_precedence(self, tmp_path):
        first = tmp_path / "first.toml"
        second = tmp_path / "second.toml"
        first.write_text("format_version = 2\n[spectral]\nnodes = 1000\nbisection_tol = 1e-8\n", encoding="utf-8")
        second.write_text("format_version = 2\n[spectral]\nnodes = 2000\n", encoding="utf-8")

        loaded = settings.load_settings([first, tmp_path / "missing.toml", second], tol=1e-5)
        assert loaded.spectral.nodes == 2000
        assert loaded.spectral.bisection_tol == 1e-8
        assert loaded.identities.rel_tol == 1e-5
