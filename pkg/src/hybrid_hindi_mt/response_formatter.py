"""
Response formatter module for the hybrid Hindi-English translator.
Handles text and JSON rendering of translations, traces and evaluation reports.
"""
import json
import logging
from typing import Any, Dict, Iterable, List, Optional, Sequence

from .evaluator import CATEGORY_HEADINGS, SCHEMA_VERSION, EvalReport
from .translator import STAGE_SEGMENTATION, TranslationResult

logger = logging.getLogger(__name__)

NOT_AVAILABLE = 'n/a'


def _percent(value: Optional[float]) -> str:
    return NOT_AVAILABLE if value is None else f"{value:.2f}"


def _table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(row[i]) for row in [header, *rows]) for i in range(len(header))]

    def line(cells: Sequence[str]) -> str:
        return ' | '.join(cell.ljust(width) for cell, width in zip(cells, widths)).rstrip()

    separator = '-+-'.join('-' * width for width in widths)
    return '\n'.join([line(header), separator, *(line(row) for row in rows)])


def _trace_item(item: Dict[str, Any]) -> str:
    if 'tokens' in item:
        text = ' '.join(item['tokens'])
        if item.get('translation'):
            return f"[{text}] -> {item['translation']} ({item['category']})"
        return text
    if 'tag' in item:
        candidates = '/'.join(item['candidates']) or '-'
        features = f" {{{', '.join(item['features'])}}}" if item['features'] else ''
        return f"{item['surface']} : {item['tag']} : {candidates}{features}"
    if 'chosen' in item:
        return f"{item['surface']} -> {item['chosen']}"
    value = item.get('value')
    if isinstance(value, list):
        value = ' '.join(value)
    return f"{item.get('step')}: {value}"


class ResponseFormatter:
    """Handles response formatting for different contexts."""

    @staticmethod
    def format_trace(result: TranslationResult) -> str:
        """Step-wise view of one translation, one block per pipeline stage."""
        lines = [f"Input: {result.source}"]
        for number, stage in enumerate(result.trace, start=1):
            lines.append(f"Step {number} - {stage.name}:")
            lines.extend(f"  {_trace_item(item)}" for item in stage.items)
        lines.append(f"Output: {result.output}")
        for warning in result.warnings:
            lines.append(f"Warning: {warning}")
        return '\n'.join(lines)

    @staticmethod
    def format_translations_text(results: Iterable[TranslationResult], trace: bool = False) -> str:
        results = list(results)
        if trace:
            return '\n\n'.join(ResponseFormatter.format_trace(result) for result in results)
        return '\n'.join(result.output for result in results)

    @staticmethod
    def format_translations_json(results: Iterable[TranslationResult]) -> str:
        document = {
            'schema_version': SCHEMA_VERSION,
            'results': [result.to_dict() for result in results],
        }
        return json.dumps(document, ensure_ascii=False, indent=2)

    @staticmethod
    def format_segments_json(result: TranslationResult) -> str:
        """Segments of one traced translation as a JSON array."""
        stages = {stage.name: stage for stage in result.trace}
        segments = list(stages[STAGE_SEGMENTATION].items) if STAGE_SEGMENTATION in stages else []
        return json.dumps(segments, ensure_ascii=False, indent=2)

    @staticmethod
    def format_evaluation_table(reports: Sequence[EvalReport]) -> str:
        """One row per system, one column per sentence type plus Overall."""
        header = ['System', *CATEGORY_HEADINGS.values(), 'Overall']
        rows: List[List[str]] = []
        for report in reports:
            means = report.category_means()
            rows.append([report.system, *(_percent(means[category]) for category in CATEGORY_HEADINGS),
                         _percent(report.overall)])
        return _table(header, rows)

    @staticmethod
    def format_evaluation_json(report: EvalReport) -> str:
        return json.dumps(report.to_dict(), ensure_ascii=False, indent=2)

    @staticmethod
    def format_batch_stats(stats: Dict[str, Any]) -> str:
        return (f"Sentences: {stats['total']}, translated: {stats['translated']}, empty: {stats['empty']}, "
                f"with warnings: {stats['warnings']}, errors: {stats['errors']}, "
                f"duration: {stats.get('duration', 0.0):.2f}s")
