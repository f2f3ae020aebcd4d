"""
Batch translation module for the hybrid Hindi-English translator.
Translates many sentences concurrently over one shared translator and keeps
processing statistics.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, TextIO, Tuple, Union

from tqdm import tqdm

from .translator import HybridTranslator, TranslationResult

logger = logging.getLogger(__name__)


class BatchProcessor:
    """Handles multi-sentence translation; output order always equals input order."""

    def __init__(self, translator: HybridTranslator, workers: int = 1):
        """Initialize the batch processor."""
        self.translator = translator
        self.workers = max(1, workers)

    def translate_lines(self, lines: Iterable[str], trace: bool = False,
                        show_progress: bool = False) -> Tuple[List[TranslationResult], Dict[str, Any]]:
        """
        Translate one sentence per line.

        Args:
            lines: Input lines; trailing newlines are stripped
            trace: Capture stage traces
            show_progress: Display a progress bar

        Returns:
            tuple: (results in input order, stats dict)
        """
        sentences = [line.rstrip('\r\n') for line in lines]
        stats = {
            'total': len(sentences),
            'translated': 0,
            'empty': 0,
            'warnings': 0,
            'errors': 0,
            'start_time': datetime.now(),
        }
        logger.info(f"Translating {len(sentences)} sentences with {self.workers} worker(s)")

        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            futures = executor.map(lambda sentence: self._translate_one(sentence, trace), sentences)
            results = list(tqdm(futures, total=len(sentences), desc='Translating', disable=not show_progress))

        for result in results:
            if result.failed:
                stats['errors'] += 1
            elif result.output:
                stats['translated'] += 1
            else:
                stats['empty'] += 1
            if result.warnings and not result.failed:
                stats['warnings'] += 1

        stats['end_time'] = datetime.now()
        stats['duration'] = (stats['end_time'] - stats['start_time']).total_seconds()
        logger.info(f"Batch completed: {stats['translated']} translated, {stats['empty']} empty, "
                    f"{stats['warnings']} with warnings, {stats['errors']} errors in {stats['duration']:.2f}s")
        return results, stats

    def _translate_one(self, sentence: str, trace: bool) -> TranslationResult:
        try:
            return self.translator.translate(sentence, trace=trace)
        except Exception as e:
            logger.warning(f"Error translating '{sentence}': {e}")
            return TranslationResult(source=sentence, output='', warnings=(str(e),), failed=True)

    def translate_file(self, path: Union[str, Path], trace: bool = False,
                       show_progress: bool = False) -> Tuple[List[TranslationResult], Dict[str, Any]]:
        with open(path, 'r', encoding='utf-8') as f:
            return self.translate_lines(f.readlines(), trace=trace, show_progress=show_progress)

    def translate_stream(self, stream: TextIO, trace: bool = False,
                         show_progress: bool = False) -> Tuple[List[TranslationResult], Dict[str, Any]]:
        return self.translate_lines(stream.readlines(), trace=trace, show_progress=show_progress)


def write_outputs(results: Iterable[TranslationResult], output_file: Optional[Union[str, Path]] = None) -> None:
    """Save one output line per result to a file."""
    if not output_file:
        return
    with open(output_file, 'w', encoding='utf-8') as f:
        for result in results:
            f.write(result.output + '\n')
    logger.info(f"Translations saved to: {output_file}")
