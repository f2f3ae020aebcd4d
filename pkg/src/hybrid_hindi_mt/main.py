"""
Main application module for the hybrid Hindi-English translator.
Orchestrates the pipeline components and provides the command-line interface.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .batch_processor import BatchProcessor, write_outputs
from .bundle import BundleError, build_bundle, save_bundle
from .config import LOG_LEVEL, ConfigError, PipelineConfig, build_pipeline_config
from .corpus_ingest import IngestError
from .evaluator import EvalReport, EvaluationError, evaluate_corpus, load_testset
from .lexicon_tagger import LexiconError
from .response_formatter import ResponseFormatter
from .smt_disambiguator import ModelError
from .transfer import GrammarRuleError
from .translator import HybridTranslator, TranslationResult

# Configure logging
logging.basicConfig(
    level=getattr(logging, (LOG_LEVEL or 'INFO').upper(), logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_WARNINGS = 1
EXIT_CONFIG = 2

TESTSET_FILE = 'testset.tsv'
REPORT_JSON = 'evaluation.json'
REPORT_TEXT = 'evaluation.txt'

# load and configuration failures
FATAL_ERRORS = (ConfigError, IngestError, BundleError, LexiconError, GrammarRuleError, ModelError, EvaluationError,
                OSError)


class HybridMTApp:
    """Main application that orchestrates all pipeline components."""

    def __init__(self, config: PipelineConfig):
        """Initialize the application."""
        self.config = config
        self.response_formatter = ResponseFormatter()
        self._translator: Optional[HybridTranslator] = None

    @property
    def translator(self) -> HybridTranslator:
        if self._translator is None:
            self._translator = HybridTranslator.from_bundle_dir(self.config.bundle_dir)
        return self._translator

    def build(self, show_progress: bool = False) -> Tuple[Path, int]:
        """
        Build and persist the model bundle.

        Returns:
            tuple: (manifest path, number of corpus files with rejected lines)
        """
        self.config.validate()
        logger.info(f"Building bundle from {self.config.data_dir} into {self.config.bundle_dir}")
        bundle = build_bundle(self.config, show_progress=show_progress)
        manifest = save_bundle(bundle, self.config)
        rejects = sum(1 for count in bundle.rejected_lines.values() if count)
        return manifest, rejects

    def translate(self, lines: Sequence[str], trace: bool = False,
                  show_progress: bool = False) -> Tuple[List[TranslationResult], Dict[str, Any]]:
        processor = BatchProcessor(self.translator, workers=self.config.workers)
        return processor.translate_lines(lines, trace=trace, show_progress=show_progress)

    def evaluate(self, testset: Optional[Path] = None, show_progress: bool = False) -> EvalReport:
        testset = Path(testset) if testset else Path(self.config.data_dir) / TESTSET_FILE
        logger.info(f"Evaluating on {testset}")
        items = load_testset(testset)
        return evaluate_corpus(items, self.translator.translate_text,
                               workers=self.config.workers, show_progress=show_progress)

    def inspect(self, sentence: str) -> TranslationResult:
        return self.translator.translate(sentence, trace=True)

    def write_reports(self, report: EvalReport, report_dir: Optional[Path] = None) -> Tuple[Path, Path]:
        report_dir = Path(report_dir) if report_dir else Path(self.config.bundle_dir)
        report_dir.mkdir(parents=True, exist_ok=True)
        json_path = report_dir / REPORT_JSON
        text_path = report_dir / REPORT_TEXT
        json_path.write_text(self.response_formatter.format_evaluation_json(report) + '\n', encoding='utf-8')
        text_path.write_text(self.response_formatter.format_evaluation_table([report]) + '\n', encoding='utf-8')
        logger.info(f"Evaluation reports written to {json_path} and {text_path}")
        return json_path, text_path


def _common_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, help='key=value configuration file')
    common.add_argument('--data-dir', type=str, help='Directory holding the knowledge source files')
    common.add_argument('--bundle-dir', type=str, help='Directory of the built model bundle')
    common.add_argument('--trace', action='store_true', help='Show the step-wise result of every stage')
    common.add_argument('--lm-order', type=int, help='n-gram order of the language model')
    common.add_argument('--lm-k', type=float, help='Add-k smoothing constant')
    common.add_argument('--em-iters', type=int, help='EM iterations for the lexical table')
    common.add_argument('--workers', type=int, help='Concurrent translation workers')
    common.add_argument('--format', choices=('text', 'json'), default='text', help='Output format')
    common.add_argument('--verbose', '-v', action='store_true', help='Debug logging')
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_arguments()
    parser = argparse.ArgumentParser(description='Hybrid Hindi to English translator')
    subparsers = parser.add_subparsers(dest='command', required=True)

    subparsers.add_parser('build', parents=[common], help='Build the model bundle from the data files')

    translate = subparsers.add_parser('translate', parents=[common], help='Translate sentences')
    translate.add_argument('sentence', nargs='?', help='Sentence to translate (default: read standard input)')
    translate.add_argument('--file', '-f', type=str, help='Translate a file, one sentence per line')
    translate.add_argument('--output', '-o', type=str, help='Save translations to file')

    evaluate = subparsers.add_parser('evaluate', parents=[common], help='Score a test set')
    evaluate.add_argument('testset', nargs='?', help=f'Test set (default: <data-dir>/{TESTSET_FILE})')
    evaluate.add_argument('--report-dir', type=str, help='Where to write the reports (default: bundle dir)')

    inspect = subparsers.add_parser('inspect', parents=[common], help='Print the stage trace of one sentence')
    inspect.add_argument('sentence', help='Sentence to inspect')
    return parser


def config_from_args(args: argparse.Namespace) -> PipelineConfig:
    overrides = {
        'data_dir': args.data_dir,
        'bundle_dir': args.bundle_dir,
        'lm_order': args.lm_order,
        'lm_k': args.lm_k,
        'em_iters': args.em_iters,
        'workers': args.workers,
        'trace': True if args.trace else None,
    }
    return build_pipeline_config(args.config, overrides)


def _run(args: argparse.Namespace, app: HybridMTApp) -> int:
    formatter = app.response_formatter
    show_progress = args.verbose

    if args.command == 'build':
        manifest, rejects = app.build(show_progress=show_progress)
        print(f"Bundle written: {manifest}")
        if rejects:
            print(f"Rejected lines found in {rejects} source file(s), see the .rejects reports")
            return EXIT_WARNINGS
        return EXIT_OK

    if args.command == 'translate':
        if args.sentence is not None:
            lines = [args.sentence]
        elif args.file:
            with open(args.file, 'r', encoding='utf-8') as f:
                lines = f.readlines()
        else:
            lines = sys.stdin.readlines()
        results, stats = app.translate(lines, trace=app.config.trace, show_progress=show_progress)
        if args.format == 'json':
            print(formatter.format_translations_json(results))
        else:
            print(formatter.format_translations_text(results, trace=app.config.trace))
        write_outputs(results, args.output)
        logger.info(formatter.format_batch_stats(stats))
        return EXIT_WARNINGS if stats['warnings'] or stats['errors'] else EXIT_OK

    if args.command == 'evaluate':
        report = app.evaluate(args.testset, show_progress=show_progress)
        app.write_reports(report, args.report_dir)
        if args.format == 'json':
            print(formatter.format_evaluation_json(report))
        else:
            print(formatter.format_evaluation_table([report]))
        return EXIT_OK

    result = app.inspect(args.sentence)
    if args.format == 'json':
        print(formatter.format_segments_json(result))
    else:
        print(formatter.format_trace(result))
    return EXIT_WARNINGS if result.warnings else EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        app = HybridMTApp(config_from_args(args))
        code = _run(args, app)
    except FATAL_ERRORS as e:
        logger.error(f"Configuration or load error: {e}")
        print(f"Error: {e}", file=sys.stderr)
        code = EXIT_CONFIG
    except KeyboardInterrupt:
        logger.info("Application stopped by user")
        code = EXIT_OK
    if argv is None:
        sys.exit(code)
    return code


if __name__ == "__main__":
    main()
