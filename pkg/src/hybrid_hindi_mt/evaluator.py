"""
Evaluation module for the hybrid Hindi-English translator.
Computes word error rate and sentence accuracy, and aggregates them per
sentence category over a test set.
"""
import logging
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Union

from tqdm import tqdm

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

SCHEMA_VERSION = 1
DEFAULT_SYSTEM = 'hybrid-mt'

_TERMINAL_RE = re.compile(r'[.!?।]+$')


# Simple custom exception
class EvaluationError(Exception):
    """Raised when a test set cannot be read at all."""
    pass


class Category(str, Enum):
    COMPLEX = 'complex'
    SIMPLE = 'simple'
    IDIOM = 'idiom'
    AMBIGUOUS = 'ambiguous'


# report column order and headings
CATEGORY_HEADINGS = {
    Category.COMPLEX: 'Complex Sentence',
    Category.SIMPLE: 'Simple Sentence',
    Category.IDIOM: 'Idioms',
    Category.AMBIGUOUS: 'Sentences With Ambiguity',
}


@dataclass(frozen=True)
class EditStats:
    substitutions: int = 0
    deletions: int = 0
    insertions: int = 0
    ref_length: int = 0

    @property
    def errors(self) -> int:
        return self.substitutions + self.deletions + self.insertions

    @property
    def valid(self) -> bool:
        """False when the reference is empty but the hypothesis is not."""
        return self.ref_length > 0 or self.errors == 0

    @property
    def wer(self) -> float:
        if self.ref_length == 0:
            return 0.0 if self.errors == 0 else math.inf
        return self.errors / self.ref_length


def normalize_tokens(text: str) -> List[str]:
    """Case-fold, strip terminal punctuation and split on whitespace."""
    return _TERMINAL_RE.sub('', text.strip()).casefold().split()


def wer(hypothesis: Sequence[str], reference: Sequence[str]) -> EditStats:
    """
    Word-level Levenshtein alignment with unit costs.

    Among equally cheap alignments the backtrace prefers a diagonal step
    (match or substitution), then a deletion, then an insertion, so the
    (S, D, I) split is deterministic.

    Args:
        hypothesis: Hypothesis tokens
        reference: Reference tokens

    Returns:
        EditStats whose error count is the edit distance
    """
    n, m = len(reference), len(hypothesis)
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        dp[i][0] = i
    for j in range(m + 1):
        dp[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            cost = 0 if reference[i - 1] == hypothesis[j - 1] else 1
            dp[i][j] = min(dp[i - 1][j - 1] + cost, dp[i - 1][j] + 1, dp[i][j - 1] + 1)

    substitutions = deletions = insertions = 0
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            cost = 0 if reference[i - 1] == hypothesis[j - 1] else 1
            if dp[i][j] == dp[i - 1][j - 1] + cost:
                substitutions += cost
                i, j = i - 1, j - 1
                continue
        if i > 0 and dp[i][j] == dp[i - 1][j] + 1:
            deletions += 1
            i -= 1
        else:
            insertions += 1
            j -= 1
    return EditStats(substitutions, deletions, insertions, n)


@dataclass(frozen=True)
class EvalItem:
    source: str
    reference: str
    category: Category


@dataclass(frozen=True)
class EvalRecord:
    source: str
    reference: str
    hypothesis: str
    category: Category
    stats: EditStats
    failed: bool = False
    error: Optional[str] = None

    @property
    def valid(self) -> bool:
        return self.stats.valid

    @property
    def wer(self) -> float:
        return self.stats.wer

    @property
    def sent_acc(self) -> float:
        """1 - WER, unclamped; a failed translation scores 0."""
        if self.failed:
            return 0.0
        return 1.0 - self.stats.wer

    @property
    def clamped_acc(self) -> float:
        return max(0.0, self.sent_acc)


def _mean_percent(records: Sequence[EvalRecord]) -> Optional[float]:
    if not records:
        return None
    return 100.0 * sum(record.clamped_acc for record in records) / len(records)


@dataclass
class EvalReport:
    """Per-record results plus per-category and overall mean accuracy (percent, clamped)."""
    system: str = DEFAULT_SYSTEM
    records: List[EvalRecord] = field(default_factory=list)

    def by_category(self, category: Category) -> List[EvalRecord]:
        return [record for record in self.records if record.category is category]

    def category_mean(self, category: Category) -> Optional[float]:
        return _mean_percent(self.by_category(category))

    def category_means(self) -> Dict[Category, Optional[float]]:
        return {category: self.category_mean(category) for category in Category}

    @property
    def overall(self) -> Optional[float]:
        return _mean_percent(self.records)

    @property
    def failed(self) -> int:
        return sum(1 for record in self.records if record.failed)

    @property
    def invalid(self) -> int:
        return sum(1 for record in self.records if not record.valid)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready form; infinite values become null, means are rounded to 2 decimals."""

        def finite(value: float) -> Optional[float]:
            return value if math.isfinite(value) else None

        def rounded(value: Optional[float]) -> Optional[float]:
            return None if value is None else round(value, 2)

        return {
            'schema_version': SCHEMA_VERSION,
            'system': self.system,
            'categories': {
                category.value: {
                    'count': len(self.by_category(category)),
                    'mean_sent_acc': rounded(self.category_mean(category)),
                }
                for category in Category
            },
            'overall': {
                'count': len(self.records),
                'mean_sent_acc': rounded(self.overall),
                'failed': self.failed,
                'invalid': self.invalid,
            },
            'records': [
                {
                    'source': record.source,
                    'reference': record.reference,
                    'hypothesis': record.hypothesis,
                    'category': record.category.value,
                    'substitutions': record.stats.substitutions,
                    'deletions': record.stats.deletions,
                    'insertions': record.stats.insertions,
                    'ref_length': record.stats.ref_length,
                    'wer': finite(record.wer),
                    'sent_acc': finite(record.sent_acc),
                    'clamped_acc': record.clamped_acc,
                    'valid': record.valid,
                    'failed': record.failed,
                    'error': record.error,
                }
                for record in self.records
            ],
        }


def load_testset(path: PathLike) -> List[EvalItem]:
    """
    Load `hindi<TAB>english_reference<TAB>category` lines.

    Malformed lines are skipped with a warning.

    Raises:
        EvaluationError: If the file is missing or unreadable
    """
    path = Path(path)
    if not path.is_file():
        raise EvaluationError(f"Test set not found: {path}")
    items: List[EvalItem] = []
    try:
        with open(path, 'r', encoding='utf-8') as f:
            for line_number, raw_line in enumerate(f, start=1):
                line = raw_line.rstrip('\r\n')
                if not line.strip():
                    continue
                fields = [value.strip() for value in line.split('\t')]
                if len(fields) != 3 or not fields[0]:
                    logger.warning(f"{path.name}:{line_number}: expected hindi, reference and category; skipped")
                    continue
                try:
                    category = Category(fields[2].lower())
                except ValueError:
                    logger.warning(f"{path.name}:{line_number}: unknown category '{fields[2]}'; skipped")
                    continue
                items.append(EvalItem(fields[0], fields[1], category))
    except (OSError, UnicodeDecodeError) as e:
        raise EvaluationError(f"Failed to read test set {path}: {e}")
    logger.info(f"Loaded {len(items)} test sentences from {path}")
    return items


def score_record(item: EvalItem, hypothesis: str) -> EvalRecord:
    stats = wer(normalize_tokens(hypothesis), normalize_tokens(item.reference))
    if not stats.valid:
        logger.warning(f"Empty reference for '{item.source}', record flagged invalid")
    return EvalRecord(item.source, item.reference, hypothesis, item.category, stats)


def _evaluate_one(item: EvalItem, translate: Callable[[str], str]) -> EvalRecord:
    try:
        hypothesis = translate(item.source)
    except Exception as e:
        logger.error(f"Translation failed for '{item.source}': {e}")
        stats = EditStats(ref_length=len(normalize_tokens(item.reference)))
        return EvalRecord(item.source, item.reference, '', item.category, stats, failed=True, error=str(e))
    return score_record(item, hypothesis)


def evaluate_corpus(items: Iterable[EvalItem], translate: Callable[[str], str],
                    system: str = DEFAULT_SYSTEM, workers: int = 1,
                    show_progress: bool = False) -> EvalReport:
    """
    Translate and score every test item.

    Args:
        items: Test sentences with references and categories
        translate: Source sentence -> hypothesis; must be safe to call
            from several threads when workers > 1
        system: Label written into the report
        workers: Number of concurrent translation threads
        show_progress: Display a progress bar

    Returns:
        EvalReport with records in input order
    """
    items = list(items)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        results = executor.map(lambda item: _evaluate_one(item, translate), items)
        records = list(tqdm(results, total=len(items), desc='Evaluating', disable=not show_progress))
    report = EvalReport(system=system, records=records)
    overall = report.overall
    logger.info(f"Evaluated {len(records)} sentences, overall accuracy "
                f"{'n/a' if overall is None else f'{overall:.2f}'} ({report.failed} failed)")
    return report
