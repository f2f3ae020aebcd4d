"""
Corpus ingestion module for the hybrid Hindi-English translator.
Loads the bilingual dictionary, the example database and the parallel corpus
from TSV files and computes corpus statistics.
"""
import logging
import re
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Generic, Iterable, Iterator, List, Optional, Tuple, TypeVar, Union

from .example_index import TokenKind, tokenize
from .lexicon_tagger import Tag

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
T = TypeVar('T')

SHORT_SENTENCE_MAX_WORDS = 10

_ENGLISH_TOKEN_RE = re.compile(r"\w+(?:'\w+)*|[^\w\s]")


# Simple custom exception
class IngestError(Exception):
    """Raised when a knowledge source cannot be loaded at all."""
    pass


class _RejectedLine(Exception):
    """Internal signal: the current line is malformed."""
    pass


class InflectionClass(str, Enum):
    REGULAR = 'regular'
    IRREGULAR = 'irregular'


class ExampleCategory(str, Enum):
    IDIOM = 'idiom'
    PHRASE = 'phrase'
    FULL_SENTENCE = 'full_sentence'


@dataclass(frozen=True)
class DictionaryEntry:
    hindi_lemma: str
    english_lemma: str
    tag: Tag
    inflection_class: Optional[InflectionClass] = None


@dataclass(frozen=True)
class ExampleEntry:
    hindi_tokens: Tuple[str, ...]
    english_text: str
    category: ExampleCategory


@dataclass(frozen=True)
class ParallelPair:
    hindi_sentence: str
    english_sentence: str


@dataclass(frozen=True)
class Reject:
    line_number: int
    reason: str


@dataclass
class LoadResult(Generic[T]):
    """Entries retained from a file plus the lines that were rejected."""
    path: Path
    entries: Tuple[T, ...]
    rejects: List[Reject] = field(default_factory=list)

    def __iter__(self) -> Iterator[T]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class SidePair:
    """A count reported for both sides of the corpus."""
    english: int
    hindi: int


@dataclass(frozen=True)
class CorpusStats:
    tokens_per_side: SidePair
    types_per_side: SidePair
    total_characters: SidePair
    total_sentences: int
    short_sentences: SidePair
    long_sentences: SidePair


def normalize_hindi(text: str) -> str:
    """NFC-normalize and trim a Devanagari string."""
    return unicodedata.normalize('NFC', text).strip()


def english_tokenize(text: str) -> List[str]:
    """Split English text into word and punctuation tokens, case preserved."""
    return _ENGLISH_TOKEN_RE.findall(text)


def english_words(text: str) -> List[str]:
    """Lowercased English word tokens with punctuation removed."""
    return [token.lower() for token in english_tokenize(text) if not _is_punctuation(token)]


def hindi_words(text: str) -> List[str]:
    """Devanagari word tokens (punctuation removed) of a sentence."""
    return [token.surface for token in tokenize(text) if token.kind is TokenKind.WORD]


def _is_punctuation(token: str) -> bool:
    return all(unicodedata.category(ch).startswith('P') or unicodedata.category(ch).startswith('S') for ch in token)


def _load_tsv(path: PathLike, kind: str, parse: Callable[[List[str]], T],
              key: Callable[[T], object]) -> LoadResult[T]:
    """
    Shared TSV loading loop.

    Args:
        path: File to read (UTF-8, no header)
        kind: Human readable name used in log messages
        parse: Turns the tab-split fields of one line into an entry, raising
            _RejectedLine for malformed input
        key: Identity used to drop later duplicates

    Returns:
        LoadResult with retained entries in file order and the rejects

    Raises:
        IngestError: If the file is missing or unreadable
    """
    path = Path(path)
    if not path.is_file():
        raise IngestError(f"{kind} file not found: {path}")

    entries: List[T] = []
    rejects: List[Reject] = []
    seen = set()
    try:
        with open(path, 'r', encoding='utf-8') as f:
            for line_number, raw_line in enumerate(f, start=1):
                line = raw_line.rstrip('\r\n')
                if not line.strip():
                    continue
                try:
                    entry = parse(line.split('\t'))
                except _RejectedLine as e:
                    rejects.append(Reject(line_number, str(e)))
                    logger.debug(f"{path.name}:{line_number} rejected: {e}")
                    continue
                identity = key(entry)
                if identity in seen:
                    rejects.append(Reject(line_number, 'duplicate entry'))
                    logger.debug(f"{path.name}:{line_number} rejected: duplicate entry")
                    continue
                seen.add(identity)
                entries.append(entry)
    except (OSError, UnicodeDecodeError) as e:
        logger.error(f"Failed to read {kind} file {path}: {e}")
        raise IngestError(f"Failed to read {kind} file {path}: {e}")

    logger.info(f"Loaded {len(entries)} {kind} entries from {path} ({len(rejects)} rejected)")
    return LoadResult(path=path, entries=tuple(entries), rejects=rejects)


def _expect_fields(fields: List[str], allowed: Iterable[int]) -> List[str]:
    allowed = tuple(allowed)
    if len(fields) not in allowed:
        expected = ' or '.join(str(n) for n in allowed)
        raise _RejectedLine(f"expected {expected} tab-separated fields, got {len(fields)}")
    return [value.strip() for value in fields]


def _parse_dictionary_line(fields: List[str]) -> DictionaryEntry:
    fields = _expect_fields(fields, (3, 4))
    hindi, english, tag_name = fields[0], fields[1], fields[2]
    hindi = normalize_hindi(hindi)
    if not hindi or not english:
        raise _RejectedLine('empty hindi or english field')
    try:
        tag = Tag(tag_name.upper())
    except ValueError:
        raise _RejectedLine(f"unknown tag '{tag_name}'")
    inflection = None
    if len(fields) == 4 and fields[3]:
        try:
            inflection = InflectionClass(fields[3].lower())
        except ValueError:
            raise _RejectedLine(f"unknown inflection class '{fields[3]}'")
    return DictionaryEntry(hindi, english.lower(), tag, inflection)


def _parse_example_line(fields: List[str]) -> ExampleEntry:
    hindi, english, category_name = _expect_fields(fields, (3,))
    if not english:
        raise _RejectedLine('empty english text')
    tokens = tokenize(hindi)
    if not tokens:
        raise _RejectedLine('empty hindi phrase')
    if any(token.kind is TokenKind.PUNCTUATION for token in tokens):
        raise _RejectedLine('hindi phrase contains punctuation')
    try:
        category = ExampleCategory(category_name.lower())
    except ValueError:
        raise _RejectedLine(f"unknown example category '{category_name}'")
    return ExampleEntry(tuple(token.surface for token in tokens), english, category)


def _parse_parallel_line(fields: List[str]) -> ParallelPair:
    hindi, english = _expect_fields(fields, (2,))
    hindi = normalize_hindi(hindi)
    if not hindi or not english:
        raise _RejectedLine('empty side in parallel pair')
    return ParallelPair(hindi, english)


def load_dictionary(path: PathLike) -> LoadResult[DictionaryEntry]:
    """
    Load the bilingual dictionary (`hindi<TAB>english<TAB>tag`).

    An optional fourth column carries the inflection class (regular or
    irregular). Exact duplicate triples are dropped and reported.

    Raises:
        IngestError: If the file is missing or unreadable
    """
    return _load_tsv(path, 'dictionary', _parse_dictionary_line,
                     key=lambda entry: (entry.hindi_lemma, entry.english_lemma, entry.tag))


def load_examples(path: PathLike) -> LoadResult[ExampleEntry]:
    """Load the example/idiom database; the first entry for a Hindi phrase wins."""
    return _load_tsv(path, 'example', _parse_example_line, key=lambda entry: entry.hindi_tokens)


def load_parallel(path: PathLike) -> LoadResult[ParallelPair]:
    """Load the parallel corpus (`hindi<TAB>english`)."""
    return _load_tsv(path, 'parallel', _parse_parallel_line, key=lambda entry: id(entry))


def rejects_report_path(path: PathLike) -> Path:
    path = Path(path)
    return path.with_name(path.name + '.rejects')


def write_rejects_report(result: LoadResult, target: Optional[PathLike] = None) -> Path:
    """
    Write `line_number<TAB>reason` lines beside the loaded file.

    Args:
        result: A load result
        target: Override for the report location

    Returns:
        Path of the written report
    """
    report_path = Path(target) if target else rejects_report_path(result.path)
    with open(report_path, 'w', encoding='utf-8') as f:
        for reject in result.rejects:
            f.write(f"{reject.line_number}\t{reject.reason}\n")
    if result.rejects:
        logger.warning(f"{len(result.rejects)} rejected lines in {result.path.name}, see {report_path}")
    return report_path


def dump_dictionary(entries: Iterable[DictionaryEntry], path: PathLike) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        for entry in entries:
            columns = [entry.hindi_lemma, entry.english_lemma, entry.tag.value]
            if entry.inflection_class is not None:
                columns.append(entry.inflection_class.value)
            f.write('\t'.join(columns) + '\n')


def dump_examples(entries: Iterable[ExampleEntry], path: PathLike) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        for entry in entries:
            f.write(f"{' '.join(entry.hindi_tokens)}\t{entry.english_text}\t{entry.category.value}\n")


def dump_parallel(pairs: Iterable[ParallelPair], path: PathLike) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        for pair in pairs:
            f.write(f"{pair.hindi_sentence}\t{pair.english_sentence}\n")


def corpus_stats(pairs: Iterable[ParallelPair]) -> CorpusStats:
    """
    Compute token, type, character and sentence-length statistics.

    Tokens include punctuation; the short/long split counts words only, each
    side judged by its own word count. Characters exclude whitespace. English
    types are case-sensitive, Hindi types exact-codepoint.
    """
    english_tokens = hindi_tokens = 0
    english_chars = hindi_chars = 0
    english_types = set()
    hindi_types = set()
    total = english_short = hindi_short = 0

    for pair in pairs:
        total += 1
        h_tokens = tokenize(pair.hindi_sentence)
        e_tokens = english_tokenize(pair.english_sentence)
        hindi_tokens += len(h_tokens)
        english_tokens += len(e_tokens)
        hindi_types.update(token.surface for token in h_tokens)
        english_types.update(e_tokens)
        hindi_chars += sum(1 for ch in pair.hindi_sentence if not ch.isspace())
        english_chars += sum(1 for ch in pair.english_sentence if not ch.isspace())

        h_words = sum(1 for token in h_tokens if token.kind is TokenKind.WORD)
        e_words = sum(1 for token in e_tokens if not _is_punctuation(token))
        if h_words <= SHORT_SENTENCE_MAX_WORDS:
            hindi_short += 1
        if e_words <= SHORT_SENTENCE_MAX_WORDS:
            english_short += 1

    return CorpusStats(
        tokens_per_side=SidePair(english_tokens, hindi_tokens),
        types_per_side=SidePair(len(english_types), len(hindi_types)),
        total_characters=SidePair(english_chars, hindi_chars),
        total_sentences=total,
        short_sentences=SidePair(english_short, hindi_short),
        long_sentences=SidePair(total - english_short, total - hindi_short),
    )
