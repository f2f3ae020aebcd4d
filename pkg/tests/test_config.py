from pathlib import Path

import pytest

from hybrid_hindi_mt.config import (
    DATA_FILES, ConfigError, PipelineConfig, build_pipeline_config, get_optional_env, load_config,
    read_config_file,
)


@pytest.fixture
def clean_env(monkeypatch):
    for key in ('HMT_DATA_DIR', 'HMT_BUNDLE_DIR', 'HMT_WORKERS'):
        monkeypatch.delenv(key, raising=False)
    return monkeypatch


def test_defaults(clean_env):
    config = build_pipeline_config()
    assert config == PipelineConfig()
    assert config.lm_order == 2 and config.lm_k == 1.0 and config.em_iters == 5
    assert config.path('dictionary') == Path('data') / 'dictionary.tsv'


def test_precedence_env_file_flags(clean_env, tmp_path):
    clean_env.setenv('HMT_WORKERS', '3')
    clean_env.setenv('HMT_DATA_DIR', '/from/env')
    conf = tmp_path / 'hmt.conf'
    conf.write_text('# comment\nworkers=5\nlm_k=0.5\ntrace=yes\n', encoding='utf-8')
    config = build_pipeline_config(conf, {'workers': 7, 'lm_order': None})
    assert config.workers == 7
    assert config.lm_k == 0.5
    assert config.trace is True
    assert config.data_dir == Path('/from/env')
    assert config.lm_order == 2


def test_relative_source_paths_resolve_against_data_dir(tmp_path):
    config = PipelineConfig(data_dir=tmp_path, dictionary=Path('lexicon/big.tsv'), examples=Path('/abs/ex.tsv'))
    assert config.path('dictionary') == tmp_path / 'lexicon' / 'big.tsv'
    assert config.path('examples') == Path('/abs/ex.tsv')
    assert set(config.paths()) == set(DATA_FILES)


def test_validate_accepts_fixture_data(data_dir):
    config = PipelineConfig(data_dir=data_dir)
    assert config.validate() is config


def test_validate_names_missing_file(tmp_path, data_dir):
    config = PipelineConfig(data_dir=data_dir, dictionary=tmp_path / 'nope.tsv')
    with pytest.raises(ConfigError, match='nope.tsv'):
        config.validate()


@pytest.mark.parametrize('overrides', [{'lm_order': 0}, {'lm_k': 0}, {'em_iters': 0}, {'workers': 0}])
def test_validate_rejects_bad_knobs(data_dir, overrides):
    with pytest.raises(ConfigError):
        PipelineConfig(data_dir=data_dir).with_overrides(overrides).validate()


@pytest.mark.parametrize('values', [{'colour': 'red'}, {'workers': 'many'}, {'trace': 'maybe'}])
def test_bad_override_values(values):
    with pytest.raises(ConfigError):
        PipelineConfig().with_overrides(values)


def test_unknown_data_file():
    with pytest.raises(ConfigError):
        PipelineConfig().path('thesaurus')


def test_read_config_file_missing(tmp_path):
    with pytest.raises(ConfigError):
        read_config_file(tmp_path / 'missing.conf')


def test_bundled_config_file(data_dir):
    values = read_config_file(data_dir / 'hmt.conf')
    assert values['lm_order'] == '2'
    assert PipelineConfig().with_overrides(values).trace is False


def test_dotenv_file_feeds_environment(clean_env, tmp_path):
    # registered so teardown removes what the .env file exports
    clean_env.setenv('HMT_WORKERS', '1')
    clean_env.delenv('HMT_WORKERS')
    env_file = tmp_path / '.env'
    env_file.write_text('HMT_WORKERS=4\n', encoding='utf-8')
    load_config(env_file)
    assert get_optional_env('HMT_WORKERS') == '4'
    assert build_pipeline_config().workers == 4
    clean_env.delenv('HMT_WORKERS')
    assert get_optional_env('HMT_WORKERS', '1') == '1'


def test_missing_dotenv_file_is_ignored(clean_env, tmp_path):
    load_config(tmp_path / '.env')
    assert build_pipeline_config() == PipelineConfig()
