import os
import shutil
from pathlib import Path

import pytest
from hypothesis import settings

from hybrid_hindi_mt.bundle import build_bundle, load_bundle, save_bundle
from hybrid_hindi_mt.config import PipelineConfig
from hybrid_hindi_mt.corpus_ingest import load_dictionary, load_examples
from hybrid_hindi_mt.example_index import build_index, segment, tokenize
from hybrid_hindi_mt.lexicon_tagger import (
    Lexicon, load_function_words, load_proper_noun_rules, load_transliteration_table, tag_sentence,
)
from hybrid_hindi_mt.transfer import load_grammar_rules, load_irregular_verbs
from hybrid_hindi_mt.translator import HybridTranslator

DATA_DIR = Path(__file__).resolve().parent.parent / 'data'

settings.register_profile("ci", settings(max_examples=500, deadline=None))
settings.register_profile("dev", settings(max_examples=100, deadline=None))
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))


@pytest.fixture(scope='session')
def data_dir():
    return DATA_DIR


@pytest.fixture(scope='session')
def lexicon():
    return Lexicon.from_entries(load_dictionary(DATA_DIR / 'dictionary.tsv'),
                                load_function_words(DATA_DIR / 'function_words.tsv'))


@pytest.fixture(scope='session')
def translit():
    return load_transliteration_table(DATA_DIR / 'translit.tsv')


@pytest.fixture(scope='session')
def example_index():
    return build_index(load_examples(DATA_DIR / 'examples.tsv'))


@pytest.fixture(scope='session')
def proper_noun_rules():
    return load_proper_noun_rules(DATA_DIR / 'proper_noun_rules.txt')


@pytest.fixture(scope='session')
def grammar_rules():
    return load_grammar_rules(DATA_DIR / 'grammar_rules.tsv')


@pytest.fixture(scope='session')
def irregular_verbs():
    return load_irregular_verbs(DATA_DIR / 'irregular_verbs.tsv')


@pytest.fixture(scope='session')
def tag(lexicon, translit, example_index, proper_noun_rules):
    """Segment and tag one sentence with the fixture knowledge sources."""

    def tag(sentence, rules=proper_noun_rules):
        return tag_sentence(segment(tokenize(sentence), example_index), lexicon, translit, rules)

    return tag


@pytest.fixture(scope='session')
def data_copy(tmp_path_factory):
    """Private copy of the fixture data; builds write reject reports beside their inputs."""
    target = tmp_path_factory.mktemp('data') / 'data'
    shutil.copytree(DATA_DIR, target)
    return target


@pytest.fixture(scope='session')
def bundle_config(tmp_path_factory, data_copy):
    return PipelineConfig(data_dir=data_copy, bundle_dir=tmp_path_factory.mktemp('bundle')).validate()


@pytest.fixture(scope='session')
def built_bundle_dir(bundle_config):
    save_bundle(build_bundle(bundle_config), bundle_config)
    return bundle_config.bundle_dir


@pytest.fixture(scope='session')
def translator(built_bundle_dir):
    return HybridTranslator(load_bundle(built_bundle_dir))


@pytest.fixture
def write_tsv(tmp_path):

    def write_tsv(name, lines):
        path = tmp_path / name
        path.write_text(''.join(line + '\n' for line in lines), encoding='utf-8')
        return path

    return write_tsv
