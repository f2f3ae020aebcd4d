"""
Model bundle module for the hybrid Hindi-English translator.
Builds every knowledge source and trained model from a PipelineConfig,
persists them to a directory and loads them back.
"""
import hashlib
import json
import logging
import shutil
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Tuple, Union

from .config import PipelineConfig
from .corpus_ingest import (
    DictionaryEntry, IngestError, dump_dictionary, dump_examples, english_words, load_dictionary, load_examples,
    load_parallel, write_rejects_report,
)
from .example_index import ExampleIndex, build_index
from .lexicon_tagger import (
    LexiconError, Lexicon, TransliterationTable, load_function_words, load_proper_noun_rules,
    load_transliteration_table,
)
from .smt_disambiguator import (
    ModelError, NGramModel, TranslationTable, load_lex, load_lm, save_lex, save_lm, train_lex, train_lm,
)
from .transfer import GrammarRule, GrammarRuleError, IrregularVerbs, load_grammar_rules, load_irregular_verbs

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

MANIFEST = 'manifest.json'
LM_FILE = 'lm.counts'
LEX_FILE = 'lex.table'
# sources copied verbatim into the bundle
COPIED_SOURCES = ('translit', 'function_words', 'proper_noun_rules', 'grammar_rules', 'irregular_verbs')


# Simple custom exception
class BundleError(Exception):
    """Raised when a bundle directory is missing, incomplete or unreadable."""
    pass


@dataclass(frozen=True)
class ModelBundle:
    """Everything translation needs; immutable once built or loaded."""
    lexicon: Lexicon
    translit: TransliterationTable
    examples: ExampleIndex
    lm: NGramModel
    lex: TranslationTable
    grammar_rules: Tuple[GrammarRule, ...]
    irregular_verbs: IrregularVerbs
    proper_noun_rules: Tuple[str, ...]
    # rejected line count per corpus file at build time
    rejected_lines: Dict[str, int] = field(default_factory=dict)


def _bundle_name(config: PipelineConfig, name: str) -> str:
    return config.path(name).name


def build_bundle(config: PipelineConfig, show_progress: bool = False) -> ModelBundle:
    """
    Load all knowledge sources and train the LM and lexical table.

    Reject reports (`<file>.rejects`) are written beside each corpus file.

    Args:
        config: Validated pipeline configuration
        show_progress: Display progress bars during training

    Returns:
        The freshly built ModelBundle (not yet saved)

    Raises:
        IngestError, LexiconError, GrammarRuleError, ModelError: On unusable sources
    """
    dictionary = load_dictionary(config.path('dictionary'))
    examples = load_examples(config.path('examples'))
    parallel = load_parallel(config.path('parallel'))
    for result in (dictionary, examples, parallel):
        write_rejects_report(result)

    function_words = load_function_words(config.path('function_words'))
    lexicon = Lexicon.from_entries(dictionary, function_words)

    logger.info(f"Training {config.lm_order}-gram LM on {len(parallel)} English sentences")
    lm = train_lm((english_words(pair.english_sentence) for pair in parallel),
                  order=config.lm_order, smoothing_k=config.lm_k)
    lex = train_lex(parallel, iterations=config.em_iters, show_progress=show_progress)

    return ModelBundle(
        lexicon=lexicon,
        translit=load_transliteration_table(config.path('translit')),
        examples=build_index(examples),
        lm=lm,
        lex=lex,
        grammar_rules=tuple(load_grammar_rules(config.path('grammar_rules'))),
        irregular_verbs=load_irregular_verbs(config.path('irregular_verbs')),
        proper_noun_rules=load_proper_noun_rules(config.path('proper_noun_rules')),
        rejected_lines={result.path.name: len(result.rejects) for result in (dictionary, examples, parallel)},
    )


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def save_bundle(bundle: ModelBundle, config: PipelineConfig) -> Path:
    """
    Persist a bundle into config.bundle_dir.

    Output is sorted so rebuilding from unchanged inputs gives byte-identical
    files.

    Returns:
        Path of the written manifest
    """
    bundle_dir = Path(config.bundle_dir)
    bundle_dir.mkdir(parents=True, exist_ok=True)

    files: Dict[str, str] = {}
    dictionary_rows = sorted(
        (DictionaryEntry(hindi, candidate.english, candidate.tag)
         for hindi, candidates in bundle.lexicon.senses.items() for candidate in candidates),
        key=lambda row: row.hindi_lemma,
    )
    files['dictionary'] = _bundle_name(config, 'dictionary')
    dump_dictionary(dictionary_rows, bundle_dir / files['dictionary'])

    files['examples'] = _bundle_name(config, 'examples')
    dump_examples(sorted(bundle.examples.entries(), key=lambda entry: entry.hindi_tokens),
                  bundle_dir / files['examples'])

    for name in COPIED_SOURCES:
        files[name] = _bundle_name(config, name)
        shutil.copyfile(config.path(name), bundle_dir / files[name])

    files['lm'] = LM_FILE
    save_lm(bundle.lm, bundle_dir / LM_FILE)
    files['lex'] = LEX_FILE
    save_lex(bundle.lex, bundle_dir / LEX_FILE)

    manifest = {
        'files': files,
        'sha256': {name: _sha256(bundle_dir / filename) for name, filename in sorted(files.items())},
        'lm_order': config.lm_order,
        'lm_k': config.lm_k,
        'em_iters': config.em_iters,
        'rejected_lines': bundle.rejected_lines,
    }
    manifest_path = bundle_dir / MANIFEST
    with open(manifest_path, 'w', encoding='utf-8') as f:
        json.dump(manifest, f, ensure_ascii=False, indent=2, sort_keys=True)
        f.write('\n')
    logger.info(f"Bundle written to {bundle_dir}")
    return manifest_path


def read_manifest(bundle_dir: PathLike) -> Dict:
    manifest_path = Path(bundle_dir) / MANIFEST
    if not manifest_path.is_file():
        raise BundleError(f"No bundle at {bundle_dir} (missing {MANIFEST}); run 'build' first")
    try:
        with open(manifest_path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise BundleError(f"Unreadable bundle manifest {manifest_path}: {e}")


def load_bundle(bundle_dir: PathLike) -> ModelBundle:
    """
    Load a bundle written by save_bundle.

    Raises:
        BundleError: If the manifest or any listed file is missing or malformed
    """
    bundle_dir = Path(bundle_dir)
    manifest = read_manifest(bundle_dir)
    files: Dict[str, str] = manifest.get('files', {})
    missing: List[str] = [name for name in (*COPIED_SOURCES, 'dictionary', 'examples', 'lm', 'lex')
                          if name not in files or not (bundle_dir / files[name]).is_file()]
    if missing:
        raise BundleError(f"Bundle {bundle_dir} is incomplete, missing: {', '.join(missing)}")

    def path(name: str) -> Path:
        return bundle_dir / files[name]

    try:
        function_words = load_function_words(path('function_words'))
        bundle = ModelBundle(
            lexicon=Lexicon.from_entries(load_dictionary(path('dictionary')), function_words),
            translit=load_transliteration_table(path('translit')),
            examples=build_index(load_examples(path('examples'))),
            lm=load_lm(path('lm')),
            lex=load_lex(path('lex')),
            grammar_rules=tuple(load_grammar_rules(path('grammar_rules'))),
            irregular_verbs=load_irregular_verbs(path('irregular_verbs')),
            proper_noun_rules=load_proper_noun_rules(path('proper_noun_rules')),
            rejected_lines=dict(manifest.get('rejected_lines', {})),
        )
    except (IngestError, LexiconError, ModelError, GrammarRuleError) as e:
        raise BundleError(f"Corrupt bundle {bundle_dir}: {e}")
    logger.info(f"Bundle loaded from {bundle_dir}")
    return bundle
