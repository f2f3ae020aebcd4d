"""
Statistical disambiguation module for the hybrid Hindi-English translator.
Trains a target-side n-gram language model and a lexical translation table,
and uses them to choose among the English senses of ambiguous Hindi words.
"""
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from tqdm import tqdm

from .corpus_ingest import ParallelPair, english_words, hindi_words
from .lexicon_tagger import Candidate, TaggedUnit

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

START = '<s>'
END = '</s>'
UNK = '<unk>'
NULL = '<null>'

DEFAULT_LM_ORDER = 2
DEFAULT_LM_K = 1.0
DEFAULT_EM_ITERATIONS = 5
LEX_FLOOR = 1e-6


# Simple custom exception
class ModelError(Exception):
    """Raised when a model cannot be trained with the given knobs or read back from disk."""
    pass


@dataclass(frozen=True)
class NGramModel:
    """
    Add-k smoothed n-gram model.

    counts maps a context (the n-1 preceding tokens) to the counts of the
    tokens that followed it. The vocabulary holds every observed token,
    sentinels included; UNK is reserved and never stored.
    """
    order: int
    k: float
    counts: Dict[Tuple[str, ...], Dict[str, int]]
    vocabulary: FrozenSet[str]
    _totals: Dict[Tuple[str, ...], int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        totals = {context: sum(followers.values()) for context, followers in self.counts.items()}
        object.__setattr__(self, '_totals', totals)

    @property
    def effective_vocabulary_size(self) -> int:
        return len(self.vocabulary) + 1

    def _map(self, token: str) -> str:
        return token if token in self.vocabulary else UNK

    def pad(self, tokens: Sequence[str]) -> List[str]:
        if self.order == 1:
            return list(tokens)
        return [START] * (self.order - 1) + list(tokens) + [END]

    def prob(self, token: str, context: Sequence[str] = ()) -> float:
        """Smoothed P(token | last order-1 tokens of context); a short context is left-padded with START."""
        history: Tuple[str, ...] = ()
        if self.order > 1:
            padded = [START] * (self.order - 1) + list(context)
            history = tuple(self._map(t) for t in padded[len(padded) - (self.order - 1):])
        count = self.counts.get(history, {}).get(self._map(token), 0)
        total = self._totals.get(history, 0)
        return (count + self.k) / (total + self.k * self.effective_vocabulary_size)


def _ngrams(padded: Sequence[str], order: int) -> Iterator[Tuple[Tuple[str, ...], str]]:
    for i in range(order - 1, len(padded)):
        yield tuple(padded[i - order + 1:i]), padded[i]


def train_lm(sentences: Iterable[Sequence[str]], order: int = DEFAULT_LM_ORDER,
             smoothing_k: float = DEFAULT_LM_K) -> NGramModel:
    """
    Count n-grams over tokenized sentences.

    Sentences are padded with order-1 start sentinels and one end sentinel
    (a unigram model is not padded).

    Args:
        sentences: Token sequences
        order: n, at least 1
        smoothing_k: Add-k constant, positive

    Returns:
        Immutable NGramModel

    Raises:
        ModelError: If order or smoothing_k is out of range
    """
    if order < 1:
        raise ModelError(f"LM order must be at least 1, got {order}")
    if smoothing_k <= 0:
        raise ModelError(f"LM smoothing constant must be positive, got {smoothing_k}")

    counts: Dict[Tuple[str, ...], Counter] = defaultdict(Counter)
    vocabulary = set()
    sentence_count = 0
    skeleton = NGramModel(order, smoothing_k, {}, frozenset())
    for sentence in sentences:
        padded = skeleton.pad(sentence)
        vocabulary.update(padded)
        for context, token in _ngrams(padded, order):
            counts[context][token] += 1
        sentence_count += 1

    logger.info(f"Trained order-{order} LM on {sentence_count} sentences, vocabulary {len(vocabulary)}")
    return NGramModel(order, smoothing_k, {context: dict(c) for context, c in counts.items()}, frozenset(vocabulary))


def lm_logprob(model: NGramModel, tokens: Sequence[str]) -> float:
    """Natural-log probability of a sentence, start/end padding included."""
    padded = model.pad(tokens)
    return sum(math.log(model.prob(token, context)) for context, token in _ngrams(padded, model.order))


def lm_continuation_logprob(model: NGramModel, history: Sequence[str], tokens: Sequence[str]) -> float:
    """Log probability of tokens following a sentence prefix (no end sentinel)."""
    context = [START] * (model.order - 1) + list(history)
    total = 0.0
    for token in tokens:
        total += math.log(model.prob(token, context))
        context.append(token)
    return total


def save_lm(model: NGramModel, path: PathLike) -> None:
    """Write `order<TAB>k` then sorted `context<TAB>token<TAB>count` lines."""
    with open(path, 'w', encoding='utf-8') as f:
        f.write(f"{model.order}\t{model.k!r}\n")
        for context in sorted(model.counts):
            for token in sorted(model.counts[context]):
                f.write(f"{' '.join(context)}\t{token}\t{model.counts[context][token]}\n")


def load_lm(path: PathLike) -> NGramModel:
    """
    Read a model written by save_lm.

    Raises:
        ModelError: If the file is missing or malformed
    """
    path = Path(path)
    if not path.is_file():
        raise ModelError(f"LM file not found: {path}")
    counts: Dict[Tuple[str, ...], Dict[str, int]] = defaultdict(dict)
    vocabulary = set()
    with open(path, 'r', encoding='utf-8') as f:
        header = f.readline().rstrip('\n').split('\t')
        try:
            order, k = int(header[0]), float(header[1])
        except (IndexError, ValueError):
            raise ModelError(f"{path}: bad header {header!r}")
        for line_number, line in enumerate(f, start=2):
            fields = line.rstrip('\n').split('\t')
            if len(fields) != 3:
                raise ModelError(f"{path}:{line_number}: expected 3 fields, got {len(fields)}")
            context = tuple(fields[0].split(' ')) if fields[0] else ()
            if len(context) != order - 1:
                raise ModelError(f"{path}:{line_number}: context length {len(context)} for order {order}")
            try:
                counts[context][fields[1]] = int(fields[2])
            except ValueError:
                raise ModelError(f"{path}:{line_number}: bad count '{fields[2]}'")
            vocabulary.update(context)
            vocabulary.add(fields[1])
    return NGramModel(order, k, dict(counts), frozenset(vocabulary))


@dataclass(frozen=True)
class TranslationTable:
    """Lexical translation probabilities P(english | hindi); NULL is a source word."""
    probs: Dict[str, Dict[str, float]]

    def __contains__(self, source: str) -> bool:
        return source in self.probs

    def __len__(self) -> int:
        return len(self.probs)

    def prob(self, source: str, target: str) -> Optional[float]:
        """P(target | source), 0.0 for an unseen target, None for an unknown source."""
        if source not in self.probs:
            return None
        return self.probs[source].get(target, 0.0)


def _bitext(pairs: Iterable[ParallelPair]) -> List[Tuple[List[str], List[str]]]:
    bitext = []
    for pair in pairs:
        source, target = hindi_words(pair.hindi_sentence), english_words(pair.english_sentence)
        if source and target:
            bitext.append((source + [NULL], target))
    return bitext


def iterate_lex_em(pairs: Iterable[ParallelPair]) -> Iterator[TranslationTable]:
    """
    Model-1 expectation maximization, one table per iteration, forever.

    Starts uniform over the target words each source word (and NULL)
    co-occurs with.
    """
    bitext = _bitext(pairs)
    cooccurring: Dict[str, set] = defaultdict(set)
    for sources, targets in bitext:
        for source in sources:
            cooccurring[source].update(targets)
    t = {source: {target: 1.0 / len(targets) for target in sorted(targets)}
         for source, targets in sorted(cooccurring.items())}

    while True:
        counts: Dict[str, Dict[str, float]] = defaultdict(lambda: defaultdict(float))
        totals: Dict[str, float] = defaultdict(float)
        for sources, targets in bitext:
            for target in targets:
                z = sum(t[source][target] for source in sources)
                for source in sources:
                    share = t[source][target] / z
                    counts[source][target] += share
                    totals[source] += share
        t = {source: {target: c / totals[source] for target, c in followers.items()}
             for source, followers in counts.items()}
        yield TranslationTable(t)


def train_lex(pairs: Iterable[ParallelPair], iterations: int = DEFAULT_EM_ITERATIONS,
              show_progress: bool = False) -> TranslationTable:
    """
    Train the lexical translation table.

    Args:
        pairs: Parallel sentences
        iterations: EM iterations, at least 1
        show_progress: Display a progress bar

    Returns:
        TranslationTable; empty when there are no usable pairs

    Raises:
        ModelError: If iterations is below 1
    """
    if iterations < 1:
        raise ModelError(f"EM iterations must be at least 1, got {iterations}")
    pairs = list(pairs)
    if not _bitext(pairs):
        logger.warning("No usable parallel pairs, lexical table is empty")
        return TranslationTable({})

    table = None
    em = iterate_lex_em(pairs)
    for iteration in tqdm(range(iterations), desc='EM', disable=not show_progress):
        table = next(em)
        logger.info(f"EM iteration {iteration + 1}/{iterations}: {len(table)} source words")
    return table


def lex_log_likelihood(table: TranslationTable, pairs: Iterable[ParallelPair]) -> float:
    """Corpus log-likelihood of the English sides under the table (uniform alignments)."""
    total = 0.0
    for sources, targets in _bitext(pairs):
        for target in targets:
            mass = sum(table.prob(source, target) or 0.0 for source in sources)
            total += math.log(mass / len(sources))
    return total


def save_lex(table: TranslationTable, path: PathLike) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        for source in sorted(table.probs):
            for target in sorted(table.probs[source]):
                f.write(f"{source}\t{target}\t{table.probs[source][target]!r}\n")


def load_lex(path: PathLike) -> TranslationTable:
    """
    Read a table written by save_lex.

    Raises:
        ModelError: If the file is missing or malformed
    """
    path = Path(path)
    if not path.is_file():
        raise ModelError(f"Lexical table file not found: {path}")
    probs: Dict[str, Dict[str, float]] = defaultdict(dict)
    with open(path, 'r', encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            fields = line.rstrip('\n').split('\t')
            if len(fields) != 3:
                raise ModelError(f"{path}:{line_number}: expected 3 fields, got {len(fields)}")
            try:
                probs[fields[0]][fields[1]] = float(fields[2])
            except ValueError:
                raise ModelError(f"{path}:{line_number}: bad probability '{fields[2]}'")
    return TranslationTable(dict(probs))


@dataclass(frozen=True)
class DisambiguationScore:
    candidate: Candidate
    log_lex: float
    log_lm: float

    @property
    def total(self) -> float:
        return self.log_lex + self.log_lm


def _candidate_tokens(english: str) -> List[str]:
    return english_words(english) or [english.lower()]


def _log_lex(source_word: str, tokens: Sequence[str], lex: TranslationTable) -> float:
    logs = []
    for token in tokens:
        p = lex.prob(source_word, token)
        logs.append(math.log(p if p else LEX_FLOOR))
    return sum(logs) / len(logs)


def first_argmax(values: Sequence[float]) -> int:
    """Index of the largest value; the earliest one wins a tie."""
    best = 0
    for i, value in enumerate(values):
        if value > values[best]:
            best = i
    return best


def score_candidates(source_word: str, candidates: Sequence[Candidate], left_context: Sequence[str],
                     lm: NGramModel, lex: TranslationTable) -> List[DisambiguationScore]:
    """Lexical and LM log scores of each candidate; the shared source term is left out."""
    scores = []
    for candidate in candidates:
        tokens = _candidate_tokens(candidate.english)
        scores.append(DisambiguationScore(
            candidate=candidate,
            log_lex=_log_lex(source_word, tokens, lex),
            log_lm=lm_continuation_logprob(lm, left_context, tokens),
        ))
    return scores


def disambiguate(source_word: str, candidates: Sequence[Candidate], left_context: Sequence[str],
                 lm: NGramModel, lex: TranslationTable) -> int:
    """
    Pick the candidate maximizing log P_lex(t|s) + log P_lm(t | chosen English so far).

    Returns:
        Index of the best candidate; ties go to the lowest index
    """
    if not candidates:
        raise ValueError(f"No candidates to disambiguate for '{source_word}'")
    if len(candidates) == 1:
        return 0
    scores = score_candidates(source_word, candidates, left_context, lm, lex)
    best = first_argmax([score.total for score in scores])
    logger.debug(f"'{source_word}' -> '{candidates[best].english}' among {[c.english for c in candidates]}")
    return best


def disambiguate_units(units: Sequence[TaggedUnit], lm: NGramModel, lex: TranslationTable) -> List[TaggedUnit]:
    """Choose a candidate for every word and block, left to right in source order."""
    chosen: List[TaggedUnit] = []
    context: List[str] = []
    for unit in units:
        if unit.candidates:
            if unit.is_content:
                unit = unit.choose(disambiguate(unit.surface, unit.candidates, context, lm, lex))
            elif unit.chosen is None:
                unit = unit.choose(0)
            context.extend(_candidate_tokens(unit.english))
        chosen.append(unit)
    return chosen
