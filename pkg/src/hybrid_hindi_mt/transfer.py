"""
Rule-based transfer module for the hybrid Hindi-English translator.
Detects tense, selects a grammar rule from the tag pattern of a sentence,
applies English morphology and rearranges SOV input into English order.
"""
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

from .example_index import Segment, SegmentKind, Token
from .lexicon_tagger import (
    AUX_FEATURES, MARKER_FEATURES, NOMINAL_TAGS, Feature, Tag, TaggedUnit, UnitRole,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

LINKING_VERB = 'LINKING_VERB'
QUESTION_AUX = 'QUESTION_AUX'
WH = 'WH'
SVO = 'SVO'
LITERAL_SLOTS = frozenset({LINKING_VERB, QUESTION_AUX, WH, SVO})
WH_WORD = 'what'

CLASS_NOMINAL = 'NOMINAL'
CLASS_AUX = 'AUX'
CLASS_BLOCK = 'BLOCK'
CLASS_MARKER = 'MARKER'
CLASS_CONTENT = 'CONTENT'
ANY = '_'

# final consonant doubles before -ing / -ed
DOUBLING_VERBS = frozenset({
    'run', 'sit', 'swim', 'get', 'stop', 'put', 'cut', 'begin', 'plan', 'hit',
    'shop', 'drop', 'chat', 'admit', 'prefer', 'refer', 'let', 'set', 'beg', 'rob',
})

_TERMINAL_RE = re.compile(r'[.?!।\s]+$')
QUESTION_FLAGS = frozenset({Feature.QUESTION_PARTICLE_INITIAL, Feature.QUESTION_PARTICLE_MEDIAL})
# stands in for क्या when only a trailing '?' marks the question
IMPLIED_PARTICLE = TaggedUnit(Segment(SegmentKind.WORD, (Token('क्या'),)), UnitRole.MARKER,
                              features=frozenset({Feature.QUESTION_PARTICLE_INITIAL}))
_VOWEL_LETTERS = 'aeiou'


# Simple custom exception
class GrammarRuleError(Exception):
    """Raised when a grammar rule file is malformed or no rule applies."""
    pass


class Tense(str, Enum):
    SIMPLE_PRESENT = 'SimplePresent'
    PRESENT_CONTINUOUS = 'PresentContinuous'
    SIMPLE_PAST = 'SimplePast'
    PAST_CONTINUOUS = 'PastContinuous'


class Person(str, Enum):
    FIRST = 'first'
    SECOND = 'second'
    THIRD = 'third'


class Number(str, Enum):
    SINGULAR = 'singular'
    PLURAL = 'plural'


class SentenceForm(str, Enum):
    DECLARATIVE = 'declarative'
    YES_NO_QUESTION = 'yes_no_question'
    WH_QUESTION = 'wh_question'


@dataclass(frozen=True)
class TenseInfo:
    tense: Tense = Tense.SIMPLE_PRESENT
    person: Person = Person.THIRD
    number: Number = Number.SINGULAR

    @property
    def is_past(self) -> bool:
        return self.tense in (Tense.SIMPLE_PAST, Tense.PAST_CONTINUOUS)

    @property
    def is_continuous(self) -> bool:
        return self.tense in (Tense.PRESENT_CONTINUOUS, Tense.PAST_CONTINUOUS)

    def __str__(self) -> str:
        return f"{self.tense.value}/{self.person.value}/{self.number.value}"


_ATOMS = (
    {tag.value for tag in Tag}
    | {feature.value for feature in Feature}
    | {CLASS_NOMINAL, CLASS_AUX, CLASS_BLOCK, CLASS_MARKER, CLASS_CONTENT, ANY}
)
_MARKER_ONLY_ATOMS = {feature.value for feature in MARKER_FEATURES} | {CLASS_AUX, CLASS_MARKER}


def _atom_accepts(atom: str, unit: TaggedUnit) -> bool:
    if atom == ANY:
        return True
    if atom == CLASS_NOMINAL:
        return unit.is_content and unit.tag in NOMINAL_TAGS
    if atom == CLASS_AUX:
        return unit.is_marker and bool(unit.features & AUX_FEATURES)
    if atom == CLASS_BLOCK:
        return unit.is_block
    if atom == CLASS_MARKER:
        return unit.is_marker
    if atom == CLASS_CONTENT:
        return unit.is_content
    if atom in Tag.__members__:
        return unit.is_content and unit.tag is Tag(atom)
    return Feature(atom) in unit.features


@dataclass(frozen=True)
class Matcher:
    """One pattern element: an alternation of atoms with an optional quantifier."""
    atoms: FrozenSet[str]
    negated: bool = False
    quantifier: str = ''
    text: str = ''

    @property
    def min_count(self) -> int:
        return 0 if self.quantifier in ('*', '?') else 1

    @property
    def max_count(self) -> Optional[int]:
        return None if self.quantifier in ('*', '+') else 1

    @property
    def content_capable(self) -> bool:
        """Whether this element can capture a content word or block."""
        return self.negated or not self.atoms <= _MARKER_ONLY_ATOMS

    def accepts(self, unit: TaggedUnit) -> bool:
        hit = any(_atom_accepts(atom, unit) for atom in self.atoms)
        return not hit if self.negated else hit


def parse_matcher(text: str) -> Matcher:
    """
    Parse one pattern element such as `NOMINAL`, `NAME|PRON+`, `!VERB*`, `*`.

    Raises:
        GrammarRuleError: On an unknown atom or empty alternation
    """
    if text == '*':
        return Matcher(frozenset({ANY}), quantifier='*', text=text)
    body, quantifier = text, ''
    if body[-1:] in ('+', '*', '?') and len(body) > 1:
        body, quantifier = body[:-1], body[-1]
    negated = body.startswith('!')
    body = body.lstrip('!')
    atoms = frozenset(atom for atom in body.split('|') if atom)
    if not atoms:
        raise GrammarRuleError(f"Empty pattern element '{text}'")
    unknown = atoms - _ATOMS
    if unknown:
        raise GrammarRuleError(f"Unknown pattern atom(s) {sorted(unknown)} in '{text}'")
    return Matcher(atoms, negated, quantifier, text)


@dataclass(frozen=True)
class GrammarRule:
    id: str
    pattern: Tuple[Matcher, ...]
    template: Tuple[str, ...]
    sentence_form: SentenceForm

    @property
    def is_catch_all(self) -> bool:
        return len(self.pattern) == 1 and self.pattern[0].text == '*'

    def match(self, units: Sequence[TaggedUnit]) -> Optional[List[List[TaggedUnit]]]:
        """Anchored match over the whole sequence; one capture list per pattern element."""
        return match_pattern(self.pattern, units)


def match_pattern(pattern: Sequence[Matcher], units: Sequence[TaggedUnit]) -> Optional[List[List[TaggedUnit]]]:
    """Greedy backtracking match of the whole unit sequence."""

    def search(mi: int, ui: int) -> Optional[List[List[TaggedUnit]]]:
        if mi == len(pattern):
            return [] if ui == len(units) else None
        matcher = pattern[mi]
        limit = matcher.max_count if matcher.max_count is not None else len(units)
        take = 0
        while ui + take < len(units) and take < limit and matcher.accepts(units[ui + take]):
            take += 1
        while take >= matcher.min_count:
            rest = search(mi + 1, ui + take)
            if rest is not None:
                return [list(units[ui:ui + take])] + rest
            take -= 1
        return None

    return search(0, 0)


def _parse_template(rule_id: str, text: str, pattern: Sequence[Matcher]) -> Tuple[str, ...]:
    slots = tuple(text.split())
    if not slots:
        raise GrammarRuleError(f"Rule '{rule_id}': empty template")
    referenced: List[int] = []
    for slot in slots:
        if slot in LITERAL_SLOTS:
            continue
        if not re.fullmatch(r'\$\d+', slot):
            raise GrammarRuleError(f"Rule '{rule_id}': unknown template slot '{slot}'")
        position = int(slot[1:])
        if not 1 <= position <= len(pattern):
            raise GrammarRuleError(f"Rule '{rule_id}': {slot} has no matching pattern element")
        if position in referenced:
            raise GrammarRuleError(f"Rule '{rule_id}': {slot} referenced twice")
        referenced.append(position)
    if SVO in slots:
        if len(slots) != 1:
            raise GrammarRuleError(f"Rule '{rule_id}': SVO must be the only template slot")
        return slots
    for position, matcher in enumerate(pattern, start=1):
        if matcher.content_capable and position not in referenced:
            raise GrammarRuleError(f"Rule '{rule_id}': element {position} '{matcher.text}' may hold words but is not in the template")
    return slots


def parse_rule(rule_id: str, pattern_text: str, template_text: str, form_text: str) -> GrammarRule:
    pattern = tuple(parse_matcher(element) for element in pattern_text.split())
    if not pattern:
        raise GrammarRuleError(f"Rule '{rule_id}': empty pattern")
    try:
        form = SentenceForm(form_text.strip())
    except ValueError:
        raise GrammarRuleError(f"Rule '{rule_id}': unknown sentence form '{form_text}'")
    return GrammarRule(rule_id, pattern, _parse_template(rule_id, template_text, pattern), form)


def load_grammar_rules(path: PathLike) -> List[GrammarRule]:
    """
    Load the ordered rule file `id<TAB>pattern<TAB>template<TAB>sentence_form`.

    Raises:
        GrammarRuleError: If the file is missing, a rule is malformed, ids
            repeat, or there is no declarative catch-all (`*`) rule
    """
    path = Path(path)
    if not path.is_file():
        raise GrammarRuleError(f"Grammar rule file not found: {path}")
    rules: List[GrammarRule] = []
    with open(path, 'r', encoding='utf-8') as f:
        for line_number, raw_line in enumerate(f, start=1):
            line = raw_line.rstrip('\r\n')
            if not line.strip() or line.lstrip().startswith('#'):
                continue
            fields = line.split('\t')
            if len(fields) != 4:
                raise GrammarRuleError(f"{path}:{line_number}: expected 4 fields, got {len(fields)}")
            rule = parse_rule(*(value.strip() for value in fields))
            if any(existing.id == rule.id for existing in rules):
                raise GrammarRuleError(f"{path}:{line_number}: duplicate rule id '{rule.id}'")
            rules.append(rule)
    if not any(rule.is_catch_all and rule.sentence_form is SentenceForm.DECLARATIVE for rule in rules):
        raise GrammarRuleError(f"{path}: no declarative catch-all rule")
    logger.info(f"Loaded {len(rules)} grammar rules from {path}")
    return rules


@dataclass(frozen=True)
class IrregularVerbs:
    """lemma -> (past, past participle), with the reverse map for already-inflected forms."""
    forms: Dict[str, Tuple[str, str]] = field(default_factory=dict)

    def past(self, lemma: str) -> Optional[str]:
        entry = self.forms.get(lemma)
        return entry[0] if entry else None

    def lemma_of(self, form: str) -> Optional[str]:
        for lemma, (past, participle) in self.forms.items():
            if form in (past, participle):
                return lemma
        return None


def load_irregular_verbs(path: PathLike) -> IrregularVerbs:
    """
    Load `lemma<TAB>past<TAB>past_participle` lines.

    Raises:
        GrammarRuleError: If the file is missing or malformed
    """
    path = Path(path)
    if not path.is_file():
        raise GrammarRuleError(f"Irregular verb file not found: {path}")
    forms: Dict[str, Tuple[str, str]] = {}
    with open(path, 'r', encoding='utf-8') as f:
        for line_number, raw_line in enumerate(f, start=1):
            line = raw_line.strip()
            if not line or line.startswith('#'):
                continue
            fields = [value.strip().lower() for value in line.split('\t')]
            if len(fields) != 3 or not all(fields):
                raise GrammarRuleError(f"{path}:{line_number}: expected lemma, past and participle")
            forms[fields[0]] = (fields[1], fields[2])
    return IrregularVerbs(forms)


def _matchable(units: Sequence[TaggedUnit]) -> List[TaggedUnit]:
    return [unit for unit in units if not unit.is_punctuation]


def _all_features(units: Sequence[TaggedUnit]) -> Set[Feature]:
    flags: Set[Feature] = set()
    for unit in units:
        flags |= unit.features
    return flags


def _subject_conjoined(units: Sequence[TaggedUnit]) -> bool:
    words = [unit for unit in _matchable(units) if unit.is_content or unit.is_marker]
    return (len(words) >= 3
            and words[0].is_content and words[0].tag in NOMINAL_TAGS
            and words[1].is_marker and Feature.CONJUNCTION in words[1].features
            and words[2].is_content and words[2].tag in NOMINAL_TAGS)


def detect_tense(units: Sequence[TaggedUnit]) -> TenseInfo:
    """
    Derive tense, person and number from the feature flags of a sentence.

    Auxiliary markers decide the tense; without any, a perfective verb form
    or an ergative marker means simple past. Person comes from the first
    pronoun carrying a person flag; a plural-marked pronoun or a conjoined
    subject makes the number plural. Defaults: simple present, third
    person singular.
    """
    flags = _all_features(units)
    present = Feature.AUX_PRESENT in flags
    past = Feature.AUX_PAST in flags
    continuous = Feature.AUX_CONTINUOUS in flags

    if past:
        tense = Tense.PAST_CONTINUOUS if continuous else Tense.SIMPLE_PAST
    elif present:
        tense = Tense.PRESENT_CONTINUOUS if continuous else Tense.SIMPLE_PRESENT
    elif not continuous and (Feature.PERFECTIVE in flags or Feature.ERGATIVE_MARKED in flags):
        tense = Tense.SIMPLE_PAST
    else:
        tense = Tense.SIMPLE_PRESENT

    person, number = Person.THIRD, Number.SINGULAR
    for unit in units:
        if not (unit.is_content and unit.tag is Tag.PRON):
            continue
        if Feature.FIRST_PERSON in unit.features:
            person = Person.FIRST
        elif Feature.SECOND_PERSON in unit.features:
            person = Person.SECOND
        elif Feature.THIRD_PERSON in unit.features:
            person = Person.THIRD
        else:
            continue
        if Feature.PLURAL_MARKED in unit.features:
            number = Number.PLURAL
        break
    if _subject_conjoined(units):
        number = Number.PLURAL
    return TenseInfo(tense, person, number)


def linking_verb(info: TenseInfo) -> str:
    """am / is / are / was / were for a tense, person and number."""
    plural_like = info.number is Number.PLURAL or info.person is Person.SECOND
    if info.is_past:
        return 'were' if plural_like else 'was'
    if plural_like:
        return 'are'
    return 'am' if info.person is Person.FIRST else 'is'


def _ends_consonant_y(word: str) -> bool:
    return len(word) >= 2 and word.endswith('y') and word[-2] not in _VOWEL_LETTERS


def _ing(verb: str) -> str:
    if verb.endswith('ie'):
        return verb[:-2] + 'ying'
    if verb.endswith('e') and len(verb) > 2 and not verb.endswith(('ee', 'ye', 'oe')):
        return verb[:-1] + 'ing'
    if verb in DOUBLING_VERBS:
        return verb + verb[-1] + 'ing'
    return verb + 'ing'


def _ed(verb: str) -> str:
    if verb.endswith('e'):
        return verb + 'd'
    if _ends_consonant_y(verb):
        return verb[:-1] + 'ied'
    if verb in DOUBLING_VERBS:
        return verb + verb[-1] + 'ed'
    return verb + 'ed'


def _third_singular(verb: str) -> str:
    if verb == 'have':
        return 'has'
    if verb.endswith(('s', 'x', 'z', 'ch', 'sh', 'o')):
        return verb + 'es'
    if _ends_consonant_y(verb):
        return verb[:-1] + 'ies'
    return verb + 's'


def inflect_verb(lemma: str, info: TenseInfo, irregular: Optional[IrregularVerbs] = None) -> str:
    """
    Inflect an English verb for the sentence tense.

    Continuous tenses take -ing, simple past the irregular form or -ed,
    simple present third singular -s/-es; otherwise the lemma is returned.
    An irregular past or participle given as lemma ("did") is first mapped
    back to its base form. Only the first word of a multi-word verb is
    inflected.
    """
    irregular = irregular or IrregularVerbs()
    head, _, tail = lemma.lower().partition(' ')
    base = irregular.lemma_of(head) or head

    if info.is_continuous:
        inflected = _ing(base)
    elif base == 'be':
        inflected = linking_verb(info)
    elif info.tense is Tense.SIMPLE_PAST:
        inflected = irregular.past(base) or _ed(base)
    elif info.person is Person.THIRD and info.number is Number.SINGULAR:
        inflected = _third_singular(base)
    else:
        inflected = base
    return f"{inflected} {tail}" if tail else inflected


def _base_form(lemma: str, irregular: IrregularVerbs) -> str:
    head, _, tail = lemma.lower().partition(' ')
    base = irregular.lemma_of(head) or head
    return f"{base} {tail}" if tail else base


def question_aux(info: TenseInfo, has_main_verb: bool) -> str:
    """Auxiliary fronted in a question: the linking verb, or do/does/did for simple tenses."""
    if info.is_continuous or not has_main_verb:
        return linking_verb(info)
    if info.tense is Tense.SIMPLE_PAST:
        return 'did'
    if info.person is Person.THIRD and info.number is Number.SINGULAR:
        return 'does'
    return 'do'


def select_rule(units: Sequence[TaggedUnit], rules: Sequence[GrammarRule]) -> GrammarRule:
    """
    First rule, in file order, whose pattern matches the whole sentence.

    A sentence-initial question particle tries the yes/no-question rules
    first and a medial one the wh-question rules; the rest follow in file
    order.

    Raises:
        GrammarRuleError: If nothing matches (the rule set lacks a catch-all)
    """
    matchable = _matchable(units)
    flags = _all_features(matchable)
    forced = None
    if Feature.QUESTION_PARTICLE_INITIAL in flags:
        forced = SentenceForm.YES_NO_QUESTION
    elif Feature.QUESTION_PARTICLE_MEDIAL in flags:
        forced = SentenceForm.WH_QUESTION

    ordered = list(rules)
    if forced is not None:
        ordered = [rule for rule in rules if rule.sentence_form is forced] + \
                  [rule for rule in rules if rule.sentence_form is not forced]
    for rule in ordered:
        if rule.match(matchable) is not None:
            logger.debug(f"Selected grammar rule '{rule.id}'")
            return rule
    raise GrammarRuleError("No grammar rule matches the sentence")


@dataclass(frozen=True)
class RenderedSentence:
    text: str
    trace: Tuple[Tuple[str, object], ...] = ()


class _Renderer:
    """Surface generation for one sentence under one rule."""

    def __init__(self, units: Sequence[TaggedUnit], rule: GrammarRule, info: TenseInfo,
                 irregular: IrregularVerbs):
        self.units = _matchable(units)
        self.rule = rule
        self.info = info
        self.irregular = irregular
        verbs = [unit for unit in self.units if unit.is_content and unit.tag is Tag.VERB]
        self.main_verb = verbs[-1] if verbs else None
        self.aux_fronted = QUESTION_AUX in rule.template

    def render(self) -> List[str]:
        captures = self.rule.match(self.units)
        if captures is None:
            raise GrammarRuleError(f"Rule '{self.rule.id}' does not match the sentence")
        words: List[str] = []
        for slot in self.rule.template:
            if slot == LINKING_VERB:
                if self.main_verb is None:
                    words.append(linking_verb(self.info))
            elif slot == QUESTION_AUX:
                words.append(question_aux(self.info, self.main_verb is not None))
            elif slot == WH:
                words.append(WH_WORD)
            elif slot == SVO:
                words.extend(self._svo())
            else:
                for unit in captures[int(slot[1:]) - 1]:
                    words.extend(self._unit(unit))
        return words

    def _unit(self, unit: TaggedUnit) -> List[str]:
        if unit.is_marker:
            question = unit.features & QUESTION_FLAGS
            return [unit.rendering] if unit.rendering and not question else []
        if unit.is_block:
            return [unit.english]
        if unit is self.main_verb:
            return self._verb_complex(unit.english)
        english = unit.english
        if unit.tag is Tag.NAME:
            return [' '.join(word[:1].upper() + word[1:] for word in english.split())]
        if english == 'i':
            return ['I']
        return [english]

    def _verb_complex(self, lemma: str) -> List[str]:
        if self.aux_fronted:
            if self.info.is_continuous:
                return [inflect_verb(lemma, self.info, self.irregular)]
            return [_base_form(lemma, self.irregular)]
        if self.info.is_continuous:
            return [linking_verb(self.info), inflect_verb(lemma, self.info, self.irregular)]
        return [inflect_verb(lemma, self.info, self.irregular)]

    def _svo(self) -> List[str]:
        kept = [unit for unit in self.units if not unit.is_marker or unit.rendering]
        subject = None
        for before, after in zip(self.units, self.units[1:]):
            if after.is_marker and Feature.ERGATIVE_MARKED in after.features and (before.is_content or before.is_block):
                subject = before
                break
        if subject is None:
            subject = next((unit for unit in kept if (unit.is_content or unit.is_block) and unit is not self.main_verb), None)

        ordered: List[TaggedUnit] = [subject] if subject is not None else []
        words = [word for unit in ordered for word in self._unit(unit)]
        if self.main_verb is not None:
            words.extend(self._unit(self.main_verb))
        elif _all_features(self.units) & AUX_FEATURES and subject is not None:
            words.append(linking_verb(self.info))
        for unit in kept:
            if unit is not subject and unit is not self.main_verb:
                words.extend(self._unit(unit))
        return words


def _finish(words: Sequence[str], form: SentenceForm) -> str:
    text = ' '.join(word for word in words if word).strip()
    if not text:
        return ''
    text = _TERMINAL_RE.sub('', text)
    text = text[:1].upper() + text[1:]
    return text + ('.' if form is SentenceForm.DECLARATIVE else '?')


def rearrange(units: Sequence[TaggedUnit], rule: GrammarRule, info: TenseInfo,
              irregular: Optional[IrregularVerbs] = None) -> RenderedSentence:
    """
    Fill the rule's template and produce the English sentence.

    Markers are dropped (conjunctions keep their rendering), the main verb
    is inflected for the tense, NAME words and the sentence start are
    capitalized, and '.' or '?' ends the sentence according to the rule's
    sentence form.

    Args:
        units: Tagged units with chosen candidates
        rule: Rule selected for these units
        info: Tense information of the sentence
        irregular: Irregular verb forms

    Returns:
        RenderedSentence with the text and a stage trace
    """
    if not _matchable(units):
        return RenderedSentence('', (('rule', rule.id), ('output', '')))
    renderer = _Renderer(units, rule, info, irregular or IrregularVerbs())
    words = renderer.render()
    text = _finish(words, rule.sentence_form)
    trace = (
        ('rule', rule.id),
        ('tense', str(info)),
        ('ordered', tuple(words)),
        ('output', text),
    )
    return RenderedSentence(text, trace)


def asks_by_intonation(units: Sequence[TaggedUnit]) -> bool:
    """True when the sentence ends in '?' but carries no question particle."""
    if not units or not units[-1].is_punctuation or units[-1].surface != '?':
        return False
    return not _all_features(_matchable(units)) & QUESTION_FLAGS


def transfer(units: Sequence[TaggedUnit], rules: Sequence[GrammarRule],
             irregular: Optional[IrregularVerbs] = None) -> RenderedSentence:
    """
    detect_tense, select_rule and rearrange in one call.

    A sentence asked by its trailing '?' alone is rendered as a yes/no
    question, as if it opened with क्या.
    """
    info = detect_tense(units)
    if not _matchable(units):
        return RenderedSentence('', (('output', ''),))
    if asks_by_intonation(units):
        units = [IMPLIED_PARTICLE, *units]
    rule = select_rule(units, rules)
    return rearrange(units, rule, info, irregular)
