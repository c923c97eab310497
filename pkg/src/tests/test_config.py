import pytest

from core import config
from core.config import Settings, configure, get_settings, load_settings
from core.errors import ConfigError


@pytest.fixture
def restore_settings():
    original = get_settings()
    yield
    configure(original)


def test_defaults_without_a_file():
    assert load_settings(None, use_env=False) == Settings()


def test_packaged_settings_file():
    settings = load_settings(config.DEFAULT_SETTINGS_FILE, use_env=False)
    assert settings.tuple_cap == 10_000_000
    assert settings.fingerprint_policy == "abelian_only"
    assert settings.table_order_cap == 3125


def test_file_values(tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text("quotient_cap: 64\nworkers: 2\n")
    settings = load_settings(str(path), use_env=False)
    assert settings.quotient_cap == 64
    assert settings.workers == 2
    assert settings.order_cap == Settings().order_cap


def test_unknown_key(tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text("tuple_cap: 5\nspeed: fast\n")
    with pytest.raises(ConfigError):
        load_settings(str(path), use_env=False)


def test_environment_overrides_file(tmp_path, monkeypatch):
    path = tmp_path / "settings.yaml"
    path.write_text("tuple_cap: 5\n")
    monkeypatch.setenv("CONJ_TUPLE_CAP", "500")
    monkeypatch.setenv("CONJ_FINGERPRINT_POLICY", "never")
    settings = load_settings(str(path))
    assert settings.tuple_cap == 500
    assert settings.fingerprint_policy == "never"


def test_bad_values(monkeypatch):
    with pytest.raises(ConfigError):
        Settings(fingerprint_policy="sometimes")
    with pytest.raises(ConfigError):
        Settings(workers=0)
    monkeypatch.setenv("CONJ_WORKERS", "many")
    with pytest.raises(ConfigError):
        load_settings(None)


def test_configure_patches_process_settings(restore_settings):
    updated = configure(tuple_cap=1234)
    assert updated.tuple_cap == 1234
    assert get_settings().tuple_cap == 1234
