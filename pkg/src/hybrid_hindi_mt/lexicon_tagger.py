"""
Lexicon and tagging module for the hybrid Hindi-English translator.
Translates single words through the bilingual dictionary, assigns tags,
identifies proper nouns by contextual rules and transliterates names.
"""
import logging
import unicodedata
from collections import defaultdict
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import TYPE_CHECKING, Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .example_index import Segment, SegmentKind

if TYPE_CHECKING:
    from .corpus_ingest import DictionaryEntry

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _nfc(text: str) -> str:
    return unicodedata.normalize('NFC', text)


ERGATIVE_PARTICLE = _nfc('ने')
FIRST_PERSON_AUX = _nfc('हूँ')
# the standard spelling and the one used in the proper-noun example
FIRST_PERSON_PRONOUNS = frozenset({_nfc('मैं'), _nfc('में')})


# Simple custom exceptions
class LexiconError(Exception):
    """Raised when a tagging resource file is malformed."""
    pass


class TransliterationError(Exception):
    """Raised when a word contains a codepoint the table does not cover."""

    def __init__(self, word: str, codepoint: str):
        self.word = word
        self.codepoint = codepoint
        name = unicodedata.name(codepoint, 'UNKNOWN')
        super().__init__(f"No transliteration for U+{ord(codepoint):04X} {name} in '{word}'")


class Tag(str, Enum):
    PRON = 'PRON'
    ANIMT = 'ANIMT'
    VERB = 'VERB'
    ADJ = 'ADJ'
    ADV = 'ADV'
    NOUN = 'NOUN'
    NAME = 'NAME'


NOMINAL_TAGS = frozenset({Tag.NAME, Tag.PRON, Tag.NOUN, Tag.ANIMT})


class Feature(str, Enum):
    ERGATIVE_MARKED = 'ergative_marked'
    PLURAL_MARKED = 'plural_marked'
    QUESTION_PARTICLE = 'question_particle'
    QUESTION_PARTICLE_INITIAL = 'question_particle_initial'
    QUESTION_PARTICLE_MEDIAL = 'question_particle_medial'
    AUX_PRESENT = 'aux_present'
    AUX_PAST = 'aux_past'
    AUX_CONTINUOUS = 'aux_continuous'
    FIRST_PERSON = 'first_person'
    SECOND_PERSON = 'second_person'
    THIRD_PERSON = 'third_person'
    PERFECTIVE = 'perfective'
    CONJUNCTION = 'conjunction'


AUX_FEATURES = frozenset({Feature.AUX_PRESENT, Feature.AUX_PAST, Feature.AUX_CONTINUOUS})
# flags that turn a function word into a marker unit; the rest annotate content words
MARKER_FEATURES = AUX_FEATURES | {
    Feature.ERGATIVE_MARKED,
    Feature.QUESTION_PARTICLE,
    Feature.QUESTION_PARTICLE_INITIAL,
    Feature.QUESTION_PARTICLE_MEDIAL,
    Feature.CONJUNCTION,
}


class UnitRole(str, Enum):
    CONTENT = 'content'
    MARKER = 'marker'
    BLOCK = 'block'
    PUNCTUATION = 'punctuation'


@dataclass(frozen=True)
class Candidate:
    english: str
    tag: Optional[Tag]


@dataclass(frozen=True)
class TaggedUnit:
    """A segment after tagging: its English candidates and morphosyntactic flags."""
    source: Segment
    role: UnitRole
    candidates: Tuple[Candidate, ...] = ()
    chosen: Optional[int] = None
    features: FrozenSet[Feature] = frozenset()
    rendering: Optional[str] = None
    warnings: Tuple[str, ...] = ()

    @property
    def surface(self) -> str:
        return self.source.surface

    @property
    def best(self) -> Optional[Candidate]:
        if not self.candidates:
            return None
        return self.candidates[self.chosen if self.chosen is not None else 0]

    @property
    def tag(self) -> Optional[Tag]:
        best = self.best
        return best.tag if best else None

    @property
    def english(self) -> Optional[str]:
        best = self.best
        return best.english if best else None

    @property
    def is_content(self) -> bool:
        return self.role is UnitRole.CONTENT

    @property
    def is_marker(self) -> bool:
        return self.role is UnitRole.MARKER

    @property
    def is_block(self) -> bool:
        return self.role is UnitRole.BLOCK

    @property
    def is_punctuation(self) -> bool:
        return self.role is UnitRole.PUNCTUATION

    def choose(self, index: int) -> 'TaggedUnit':
        if not 0 <= index < len(self.candidates):
            raise IndexError(f"Candidate index {index} out of range for '{self.surface}'")
        return replace(self, chosen=index)

    def as_name(self, latin: str, warnings: Sequence[str] = ()) -> 'TaggedUnit':
        return replace(self, candidates=(Candidate(latin, Tag.NAME),), chosen=0,
                       warnings=self.warnings + tuple(warnings))


@dataclass(frozen=True)
class FunctionWord:
    flags: FrozenSet[Feature]
    rendering: Optional[str] = None

    @property
    def is_marker(self) -> bool:
        return bool(self.flags & MARKER_FEATURES)


@dataclass
class Lexicon:
    """Dictionary senses keyed by Hindi lemma, plus the function-word table."""
    senses: Dict[str, List[Candidate]] = field(default_factory=dict)
    function_words: Dict[str, FunctionWord] = field(default_factory=dict)

    @classmethod
    def from_entries(cls, entries: Iterable['DictionaryEntry'],
                     function_words: Optional[Dict[str, FunctionWord]] = None) -> 'Lexicon':
        senses: Dict[str, List[Candidate]] = defaultdict(list)
        for entry in entries:
            candidate = Candidate(entry.english_lemma, entry.tag)
            if candidate not in senses[entry.hindi_lemma]:
                senses[entry.hindi_lemma].append(candidate)
        return cls(senses=dict(senses), function_words=dict(function_words or {}))

    def __contains__(self, word: str) -> bool:
        return word in self.senses


def _read_table(path: PathLike, kind: str) -> Iterable[Tuple[int, List[str]]]:
    """Yield (line number, fields) of a small tab-separated resource file, skipping comments."""
    path = Path(path)
    if not path.is_file():
        raise LexiconError(f"{kind} file not found: {path}")
    with open(path, 'r', encoding='utf-8') as f:
        for line_number, raw_line in enumerate(f, start=1):
            line = raw_line.rstrip('\r\n')
            if not line.strip() or line.lstrip().startswith('#'):
                continue
            yield line_number, line.split('\t')


def load_function_words(path: PathLike) -> Dict[str, FunctionWord]:
    """
    Load `surface<TAB>feature_flag[<TAB>rendering]` lines.

    A surface may appear on several lines; its flags accumulate.

    Raises:
        LexiconError: If the file is missing or a line is malformed
    """
    flags: Dict[str, Set[Feature]] = defaultdict(set)
    renderings: Dict[str, str] = {}
    for line_number, fields in _read_table(path, 'function word'):
        if len(fields) not in (2, 3):
            raise LexiconError(f"{path}:{line_number}: expected 2 or 3 fields, got {len(fields)}")
        surface = _nfc(fields[0].strip())
        try:
            flags[surface].add(Feature(fields[1].strip()))
        except ValueError:
            raise LexiconError(f"{path}:{line_number}: unknown feature flag '{fields[1].strip()}'")
        if len(fields) == 3 and fields[2].strip():
            renderings[surface] = fields[2].strip()
    table = {surface: FunctionWord(frozenset(values), renderings.get(surface)) for surface, values in flags.items()}
    logger.info(f"Loaded {len(table)} function words from {path}")
    return table


def lookup(word: str, lexicon: Lexicon) -> List[Tuple[str, Tag]]:
    """All dictionary senses of a word in file order; empty if out of vocabulary."""
    return [(candidate.english, candidate.tag) for candidate in lexicon.senses.get(_nfc(word), [])]


# Transliteration

class _Kind(str, Enum):
    CONSONANT = 'consonant'
    VOWEL = 'vowel'
    MATRA = 'matra'
    VIRAMA = 'virama'
    SIGN = 'sign'


def _classify(cluster: str) -> _Kind:
    cp = ord(cluster[0])
    if 0x0915 <= cp <= 0x0939 or 0x0958 <= cp <= 0x095F or 0x0978 <= cp <= 0x097F:
        return _Kind.CONSONANT
    if 0x0904 <= cp <= 0x0914 or cp in (0x0960, 0x0961, 0x0972, 0x0973, 0x0974, 0x0975, 0x0976, 0x0977):
        return _Kind.VOWEL
    if cp == 0x094D:
        return _Kind.VIRAMA
    if 0x093E <= cp <= 0x094C or cp in (0x093A, 0x093B, 0x094E, 0x094F, 0x0955, 0x0956, 0x0957, 0x0962, 0x0963):
        return _Kind.MATRA
    return _Kind.SIGN


@dataclass(frozen=True)
class TransliterationTable:
    consonant_map: Dict[str, str]
    vowel_map: Dict[str, str]
    matra_map: Dict[str, str]
    sign_map: Dict[str, str]
    _merged: Dict[str, str] = field(init=False, repr=False, compare=False)
    _max_cluster_len: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        merged = {**self.sign_map, **self.matra_map, **self.vowel_map, **self.consonant_map}
        object.__setattr__(self, '_merged', merged)
        object.__setattr__(self, '_max_cluster_len', max((len(key) for key in merged), default=1))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, str]]) -> 'TransliterationTable':
        maps: Dict[_Kind, Dict[str, str]] = {kind: {} for kind in _Kind}
        for cluster, latin in pairs:
            cluster = _nfc(cluster)
            maps[_classify(cluster)][cluster] = latin
        return cls(
            consonant_map=maps[_Kind.CONSONANT],
            vowel_map=maps[_Kind.VOWEL],
            matra_map=maps[_Kind.MATRA],
            sign_map={**maps[_Kind.SIGN], **maps[_Kind.VIRAMA]},
        )

    def match(self, word: str, start: int) -> Optional[str]:
        """Longest table key at a position, or None."""
        for length in range(min(self._max_cluster_len, len(word) - start), 0, -1):
            key = word[start:start + length]
            if key in self._merged:
                return key
        return None

    def latin(self, cluster: str) -> str:
        return self._merged[cluster]

    def pairs(self) -> List[Tuple[str, str]]:
        return sorted(self._merged.items())


def load_transliteration_table(path: PathLike) -> TransliterationTable:
    """
    Load `devanagari_codepoint_or_cluster<TAB>latin` lines.

    Raises:
        LexiconError: If the file is missing, malformed, or maps to anything
            but lowercase ASCII letters
    """
    pairs = []
    for line_number, fields in _read_table(path, 'transliteration'):
        if len(fields) != 2:
            raise LexiconError(f"{path}:{line_number}: expected 2 fields, got {len(fields)}")
        cluster, latin = fields[0].strip(), fields[1].strip()
        if not cluster:
            raise LexiconError(f"{path}:{line_number}: empty cluster")
        if latin and not (latin.isascii() and latin.isalpha() and latin.islower()):
            raise LexiconError(f"{path}:{line_number}: '{latin}' is not lowercase ASCII")
        pairs.append((cluster, latin))
    table = TransliterationTable.from_pairs(pairs)
    logger.info(f"Loaded transliteration table with {len(pairs)} clusters from {path}")
    return table


# phonological unit kinds used for schwa deletion
_C, _V, _SCHWA, _OTHER = 'C', 'V', 'S', 'O'
_VOWELS = (_V, _SCHWA)


def _delete_schwas(units: List[List[str]]) -> None:
    if units and units[-1][0] == _SCHWA:
        has_other_vowel = any(kind in _VOWELS for kind, _ in units[:-1])
        after_cluster = len(units) >= 3 and units[-2][0] == _C and units[-3][0] == _C
        if has_other_vowel and not after_cluster:
            units.pop()
    # V C a C V -> V C C V, right to left
    for i in range(len(units) - 1, -1, -1):
        if units[i][0] != _SCHWA or i < 2 or i + 2 >= len(units):
            continue
        if (units[i - 1][0] == _C and units[i - 2][0] in _VOWELS
                and units[i + 1][0] == _C and units[i + 2][0] in _VOWELS):
            del units[i]


def _transliterate(word: str, table: TransliterationTable,
                   on_unknown: Optional[Callable[[str], str]] = None) -> str:
    word = _nfc(word)
    units: List[List[str]] = []
    position = 0
    while position < len(word):
        key = table.match(word, position)
        if key is None:
            ch = word[position]
            if on_unknown is None:
                raise TransliterationError(word, ch)
            units.append([_OTHER, on_unknown(ch)])
            position += 1
            continue

        kind = _classify(key)
        latin = table.latin(key)
        if kind is _Kind.CONSONANT:
            units.append([_C, latin])
            units.append([_SCHWA, 'a'])
        elif kind in (_Kind.MATRA, _Kind.VIRAMA):
            if units and units[-1][0] == _SCHWA:
                units.pop()
            if latin:
                units.append([_V if kind is _Kind.MATRA else _OTHER, latin])
        elif kind is _Kind.VOWEL:
            units.append([_V, latin])
        else:
            units.append([_OTHER, latin])
        position += len(key)

    _delete_schwas(units)
    return ''.join(latin for _, latin in units).lower()


def transliterate(word: str, table: TransliterationTable) -> str:
    """
    Romanize a Devanagari word.

    Consonants carry an inherent 'a' unless a vowel sign or virama follows;
    the word-final inherent vowel is dropped (kept after a conjunct or when
    it is the only vowel) and so is a medial one between two
    vowel-consonant contexts (ओमकार -> omkar).

    Args:
        word: Devanagari word
        table: Transliteration table

    Returns:
        Lowercase Latin string

    Raises:
        TransliterationError: If a codepoint is not covered by the table
    """
    return _transliterate(word, table)


def transliterate_lenient(word: str, table: TransliterationTable) -> Tuple[str, List[str]]:
    """Transliterate, replacing uncovered codepoints with a name placeholder instead of failing."""
    warnings: List[str] = []

    def placeholder(ch: str) -> str:
        name = unicodedata.name(ch, f"U+{ord(ch):04X}")
        warnings.append(f"No transliteration for U+{ord(ch):04X} {name} in '{word}'")
        return f"<{name.lower().replace(' ', '-')}>"

    latin = _transliterate(word, table, on_unknown=placeholder)
    for warning in warnings:
        logger.warning(warning)
    return latin, warnings


# Proper-noun rules

RULE_OOV = 'R1'
RULE_ERGATIVE_AGENT = 'R2'
RULE_COPULAR_IDENTITY = 'R3'
DEFAULT_PROPER_NOUN_RULES: Tuple[str, ...] = (RULE_OOV, RULE_ERGATIVE_AGENT, RULE_COPULAR_IDENTITY)


def load_proper_noun_rules(path: PathLike) -> Tuple[str, ...]:
    """
    Read the enabled proper-noun rule ids.

    One id per line; a leading '-' disables a rule listed earlier. Ids this
    version does not know are logged and ignored.
    """
    enabled: List[str] = []
    for line_number, fields in _read_table(path, 'proper-noun rule'):
        rule_id = fields[0].strip()
        disable = rule_id.startswith('-')
        rule_id = rule_id.lstrip('-').strip().upper()
        if rule_id not in DEFAULT_PROPER_NOUN_RULES:
            logger.warning(f"{path}:{line_number}: unknown proper-noun rule '{rule_id}' ignored")
            continue
        if disable:
            enabled = [existing for existing in enabled if existing != rule_id]
        elif rule_id not in enabled:
            enabled.append(rule_id)
    return tuple(enabled)


def _word_positions(units: Sequence[TaggedUnit]) -> List[int]:
    return [i for i, unit in enumerate(units) if not unit.is_punctuation]


def _oov_names(units: Sequence[TaggedUnit], lexicon: Lexicon) -> Set[int]:
    return {
        i for i, unit in enumerate(units)
        if unit.is_content and not lookup(unit.surface, lexicon) and unit.surface not in lexicon.function_words
    }


def _ergative_agents(units: Sequence[TaggedUnit], lexicon: Lexicon) -> Set[int]:
    positions = _word_positions(units)
    agents = set()
    for before, after in zip(positions, positions[1:]):
        agent, marker = units[before], units[after]
        if agent.is_content and marker.is_marker and Feature.ERGATIVE_MARKED in marker.features:
            agents.add(before)
    fired = set()
    for agent in agents:
        surface = units[agent].surface
        if any(units[i].is_content and units[i].surface == surface and i not in agents for i in positions):
            fired.add(agent)
    return fired


def _nameable(unit: TaggedUnit, lexicon: Lexicon) -> bool:
    senses = lookup(unit.surface, lexicon)
    return not senses or any(tag in NOMINAL_TAGS for _, tag in senses)


def _copular_names(units: Sequence[TaggedUnit], lexicon: Lexicon) -> Set[int]:
    fired = set()
    pronoun = None
    for i, unit in enumerate(units):
        if unit.is_content and unit.surface in FIRST_PERSON_PRONOUNS:
            pronoun = i
        elif pronoun is not None and unit.is_marker and unit.surface == FIRST_PERSON_AUX:
            span = [j for j in range(pronoun + 1, i) if units[j].is_content]
            # a verb or modifier in between means this is not an identity statement
            if span and all(_nameable(units[j], lexicon) for j in span):
                fired.update(span)
            pronoun = None
    return fired


_RULES: Dict[str, Callable[[Sequence[TaggedUnit], Lexicon], Set[int]]] = {
    RULE_OOV: _oov_names,
    RULE_ERGATIVE_AGENT: _ergative_agents,
    RULE_COPULAR_IDENTITY: _copular_names,
}


def _name_unit(unit: TaggedUnit, table: TransliterationTable) -> TaggedUnit:
    latin, warnings = transliterate_lenient(unit.surface, table)
    return unit.as_name(latin, warnings)


def identify_proper_nouns(units: Sequence[TaggedUnit], lexicon: Lexicon, table: TransliterationTable,
                          rules: Sequence[str] = DEFAULT_PROPER_NOUN_RULES) -> List[TaggedUnit]:
    """
    Apply the contextual proper-noun rules in the given order.

    R1: an out-of-vocabulary word with no function-word role is a name.
    R2: a word right before the ergative particle whose surface also occurs
        elsewhere in the sentence in a non-agent position is a name there.
    R3: when every word between a first-person pronoun and the first-person
        auxiliary is out of vocabulary or nominal, they form a name sequence.

    A fired rule replaces the unit's candidates with its transliteration
    tagged NAME.
    """
    result = list(units)
    for rule_id in rules:
        rule = _RULES.get(rule_id)
        if rule is None:
            logger.warning(f"Unknown proper-noun rule '{rule_id}' skipped")
            continue
        for i in sorted(rule(result, lexicon)):
            if result[i].tag is not Tag.NAME or len(result[i].candidates) != 1:
                logger.debug(f"{rule_id} tags '{result[i].surface}' as NAME")
                result[i] = _name_unit(result[i], table)
    return result


def tag_sentence(segments: Sequence[Segment], lexicon: Lexicon, table: TransliterationTable,
                 rules: Sequence[str] = DEFAULT_PROPER_NOUN_RULES) -> List[TaggedUnit]:
    """
    Turn segments into tagged units.

    Example matches pass through as opaque blocks, function words become
    marker units carrying feature flags, and every other word gets its
    dictionary senses (or a transliterated NAME when no sense exists).

    Args:
        segments: Output of example_index.segment
        lexicon: Dictionary senses and function words
        table: Transliteration table
        rules: Enabled proper-noun rule ids, in application order

    Returns:
        One unit per segment, in segment order
    """
    units: List[TaggedUnit] = []
    seen_word = False
    for seg in segments:
        if seg.kind is SegmentKind.EXAMPLE_MATCH:
            units.append(TaggedUnit(seg, UnitRole.BLOCK, (Candidate(seg.translation, None),), chosen=0))
            seen_word = True
            continue
        if seg.is_punctuation:
            units.append(TaggedUnit(seg, UnitRole.PUNCTUATION))
            continue

        surface = seg.surface
        function_word = lexicon.function_words.get(surface)
        if function_word is not None and function_word.is_marker:
            flags = set(function_word.flags)
            if Feature.QUESTION_PARTICLE in flags:
                flags.discard(Feature.QUESTION_PARTICLE)
                flags.add(Feature.QUESTION_PARTICLE_MEDIAL if seen_word else Feature.QUESTION_PARTICLE_INITIAL)
            units.append(TaggedUnit(seg, UnitRole.MARKER, features=frozenset(flags),
                                    rendering=function_word.rendering))
        else:
            annotations = function_word.flags if function_word is not None else frozenset()
            candidates = tuple(Candidate(english, tag) for english, tag in lookup(surface, lexicon))
            units.append(TaggedUnit(seg, UnitRole.CONTENT, candidates, features=annotations))
        seen_word = True

    units = identify_proper_nouns(units, lexicon, table, rules)
    return [_name_unit(unit, table) if unit.is_content and not unit.candidates else unit for unit in units]


def tag_labels(units: Sequence[TaggedUnit]) -> List[str]:
    """Readable tag per unit: the Tag value, 'aux' or 'marker' for markers, 'BLOCK', 'PUNCT'."""
    labels = []
    for unit in units:
        if unit.is_marker:
            labels.append('aux' if unit.features & AUX_FEATURES else 'marker')
        elif unit.is_block:
            labels.append('BLOCK')
        elif unit.is_punctuation:
            labels.append('PUNCT')
        else:
            labels.append(unit.tag.value if unit.tag else '?')
    return labels
