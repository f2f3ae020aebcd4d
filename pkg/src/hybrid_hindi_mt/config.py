import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from dotenv import dotenv_values, load_dotenv


class ConfigError(Exception):
    """Raised when a setting, config file or knowledge-source path is unusable."""
    pass


def load_config(env_path: Path = Path('.env')) -> None:
    """Export the settings of a .env file, when present, into the environment."""
    if env_path.exists():
        load_dotenv(env_path)


def get_optional_env(key: str, default: Optional[str] = None) -> Optional[str]:
    """Value of an HMT_* or LOG_LEVEL variable, or default when it is unset."""
    return os.getenv(key, default)


load_config()

LOG_LEVEL = get_optional_env('LOG_LEVEL', 'INFO')

# Knowledge source file names inside the data directory
DATA_FILES = {
    'dictionary': 'dictionary.tsv',
    'examples': 'examples.tsv',
    'parallel': 'parallel.tsv',
    'translit': 'translit.tsv',
    'function_words': 'function_words.tsv',
    'proper_noun_rules': 'proper_noun_rules.txt',
    'grammar_rules': 'grammar_rules.tsv',
    'irregular_verbs': 'irregular_verbs.tsv',
}

_TRUE = {'1', 'true', 'yes', 'on'}
_FALSE = {'0', 'false', 'no', 'off', ''}


@dataclass(frozen=True)
class PipelineConfig:
    """
    Paths and training knobs for one pipeline run.

    A knowledge-source path left unset resolves to its standard file name
    inside data_dir; a relative one is taken relative to data_dir.
    """
    data_dir: Path = Path('data')
    bundle_dir: Path = Path('bundle')
    dictionary: Optional[Path] = None
    examples: Optional[Path] = None
    parallel: Optional[Path] = None
    translit: Optional[Path] = None
    function_words: Optional[Path] = None
    proper_noun_rules: Optional[Path] = None
    grammar_rules: Optional[Path] = None
    irregular_verbs: Optional[Path] = None
    lm_order: int = 2
    lm_k: float = 1.0
    em_iters: int = 5
    workers: int = 1
    trace: bool = False

    def path(self, name: str) -> Path:
        """Resolved path of a knowledge source (see DATA_FILES)."""
        if name not in DATA_FILES:
            raise ConfigError(f"Unknown data file '{name}'")
        value = getattr(self, name)
        if value is None:
            return Path(self.data_dir) / DATA_FILES[name]
        value = Path(value)
        return value if value.is_absolute() else Path(self.data_dir) / value

    def paths(self) -> Dict[str, Path]:
        return {name: self.path(name) for name in DATA_FILES}

    def validate(self) -> 'PipelineConfig':
        """
        Check that every knowledge source exists and the knobs are in range.

        Raises:
            ConfigError: Naming the first offending path or key
        """
        for name, path in self.paths().items():
            if not path.is_file():
                raise ConfigError(f"{name} file not found: {path}")
        if self.lm_order < 1:
            raise ConfigError(f"lm_order must be at least 1, got {self.lm_order}")
        if self.lm_k <= 0:
            raise ConfigError(f"lm_k must be positive, got {self.lm_k}")
        if self.em_iters < 1:
            raise ConfigError(f"em_iters must be at least 1, got {self.em_iters}")
        if self.workers < 1:
            raise ConfigError(f"workers must be at least 1, got {self.workers}")
        return self

    def with_overrides(self, values: Mapping[str, Any]) -> 'PipelineConfig':
        """Copy with string or typed values applied; None values are ignored."""
        known = {f.name for f in fields(self)}
        changes = {}
        for key, raw in values.items():
            if raw is None:
                continue
            if key not in known:
                raise ConfigError(f"Unknown configuration key '{key}'")
            changes[key] = _coerce(key, raw)
        return replace(self, **changes)


def _coerce(key: str, raw: Any) -> Any:
    if not isinstance(raw, str):
        return raw
    value = raw.strip()
    try:
        if key in ('lm_order', 'em_iters', 'workers'):
            return int(value)
        if key == 'lm_k':
            return float(value)
    except ValueError:
        raise ConfigError(f"Invalid value for '{key}': '{raw}'")
    if key == 'trace':
        lowered = value.lower()
        if lowered in _TRUE:
            return True
        if lowered in _FALSE:
            return False
        raise ConfigError(f"Invalid value for 'trace': '{raw}'")
    return Path(value)


def env_defaults() -> Dict[str, Optional[str]]:
    """Pipeline settings taken from the environment."""
    return {
        'data_dir': get_optional_env('HMT_DATA_DIR'),
        'bundle_dir': get_optional_env('HMT_BUNDLE_DIR'),
        'workers': get_optional_env('HMT_WORKERS'),
    }


def read_config_file(path: Union[str, Path]) -> Dict[str, Optional[str]]:
    """
    Parse a `key=value` configuration file.

    Raises:
        ConfigError: If the file is missing
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Configuration file not found: {path}")
    return dict(dotenv_values(path))


def build_pipeline_config(config_file: Optional[Union[str, Path]] = None,
                          overrides: Optional[Mapping[str, Any]] = None) -> PipelineConfig:
    """
    Assemble the configuration: defaults < environment < config file < flags.

    Args:
        config_file: Optional `key=value` file
        overrides: Command-line values; None entries are ignored

    Returns:
        PipelineConfig (not yet validated)
    """
    config = PipelineConfig().with_overrides(env_defaults())
    if config_file:
        config = config.with_overrides(read_config_file(config_file))
    if overrides:
        config = config.with_overrides(overrides)
    return config
