"""
Translation pipeline module for the hybrid Hindi-English translator.
Runs segmentation, tagging, disambiguation and rearrangement over a loaded
model bundle and records the intermediate result of each stage.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

from .bundle import ModelBundle, load_bundle
from .example_index import Segment, segment, tokenize
from .lexicon_tagger import TaggedUnit, tag_labels, tag_sentence
from .smt_disambiguator import disambiguate_units
from .transfer import RenderedSentence, transfer

logger = logging.getLogger(__name__)

STAGE_SEGMENTATION = 'Segmentation'
STAGE_TAGGING = 'Translation+Tagging'
STAGE_DISAMBIGUATION = 'Disambiguation'
STAGE_REARRANGEMENT = 'Rearrangement'
STAGE_ORDER = (STAGE_SEGMENTATION, STAGE_TAGGING, STAGE_DISAMBIGUATION, STAGE_REARRANGEMENT)


# Simple custom exception
class TranslationError(Exception):
    """Raised by translate_text when the pipeline failed on a sentence."""
    pass


@dataclass(frozen=True)
class TraceStage:
    name: str
    items: Tuple[Any, ...]


@dataclass(frozen=True)
class TranslationResult:
    source: str
    output: str
    trace: Tuple[TraceStage, ...] = ()
    warnings: Tuple[str, ...] = ()
    failed: bool = False

    def stage(self, name: str) -> TraceStage:
        for stage in self.trace:
            if stage.name == name:
                return stage
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'source': self.source,
            'output': self.output,
            'trace': [{'stage': stage.name, 'items': list(stage.items)} for stage in self.trace],
            'warnings': list(self.warnings),
            'failed': self.failed,
        }


def _segment_items(segments: List[Segment]) -> Tuple[Dict[str, Any], ...]:
    return tuple(
        {
            'kind': seg.kind.value,
            'tokens': [token.surface for token in seg.tokens],
            'translation': seg.translation,
            'category': seg.category,
        }
        for seg in segments
    )


def _tag_items(units: List[TaggedUnit]) -> Tuple[Dict[str, Any], ...]:
    return tuple(
        {
            'surface': unit.surface,
            'tag': label,
            'candidates': [candidate.english for candidate in unit.candidates],
            'features': sorted(feature.value for feature in unit.features),
        }
        for unit, label in zip(units, tag_labels(units))
    )


def _choice_items(units: List[TaggedUnit]) -> Tuple[Dict[str, Any], ...]:
    return tuple({'surface': unit.surface, 'chosen': unit.english} for unit in units if unit.candidates)


def _rearrangement_items(rendered: RenderedSentence) -> Tuple[Dict[str, Any], ...]:
    return tuple(
        {'step': name, 'value': list(value) if isinstance(value, tuple) else value}
        for name, value in rendered.trace
    )


class HybridTranslator:
    """Translates Hindi sentences with an immutable model bundle; safe to share between threads."""

    def __init__(self, bundle: ModelBundle):
        """Initialize the translator."""
        self.bundle = bundle

    @classmethod
    def from_bundle_dir(cls, bundle_dir: Union[str, Path]) -> 'HybridTranslator':
        return cls(load_bundle(bundle_dir))

    def translate(self, sentence: str, trace: bool = False) -> TranslationResult:
        """
        Core translation pipeline.

        Args:
            sentence: Devanagari sentence
            trace: Capture each stage's intermediate result

        Returns:
            TranslationResult; on an internal failure the output is empty and
            the failure is carried as a warning
        """
        tokens = tokenize(sentence)
        if not tokens:
            return TranslationResult(source=sentence, output='')

        stages: List[TraceStage] = []
        try:
            segments = segment(tokens, self.bundle.examples)
            units = tag_sentence(segments, self.bundle.lexicon, self.bundle.translit,
                                 self.bundle.proper_noun_rules)
            chosen = disambiguate_units(units, self.bundle.lm, self.bundle.lex)
            rendered = transfer(chosen, self.bundle.grammar_rules, self.bundle.irregular_verbs)
        except Exception as e:
            logger.error(f"Translation failed for '{sentence}': {e}")
            return TranslationResult(source=sentence, output='', warnings=(f"translation failed: {e}",),
                                     failed=True)

        if trace:
            stages = [
                TraceStage(STAGE_SEGMENTATION, _segment_items(segments)),
                TraceStage(STAGE_TAGGING, _tag_items(units)),
                TraceStage(STAGE_DISAMBIGUATION, _choice_items(chosen)),
                TraceStage(STAGE_REARRANGEMENT, _rearrangement_items(rendered)),
            ]
        warnings = tuple(warning for unit in chosen for warning in unit.warnings)
        if not rendered.text and any(not unit.is_punctuation for unit in chosen):
            warnings += ('no content word to translate',)
        logger.debug(f"'{sentence}' -> '{rendered.text}'")
        return TranslationResult(source=sentence, output=rendered.text, trace=tuple(stages), warnings=warnings)

    def translate_text(self, sentence: str) -> str:
        """
        Output string only; the callable handed to the evaluator.

        Raises:
            TranslationError: If the pipeline failed on the sentence
        """
        result = self.translate(sentence)
        if result.failed:
            raise TranslationError(result.warnings[0])
        return result.output
