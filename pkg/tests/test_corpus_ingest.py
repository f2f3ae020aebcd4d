import os

import pytest
from hypothesis import given, strategies as st

from hybrid_hindi_mt.corpus_ingest import (
    DictionaryEntry, ExampleCategory, IngestError, InflectionClass, ParallelPair, corpus_stats,
    dump_dictionary, dump_examples, dump_parallel, english_tokenize, load_dictionary, load_examples,
    load_parallel, rejects_report_path, write_rejects_report,
)
from hybrid_hindi_mt.lexicon_tagger import Tag


def test_load_dictionary_entry(write_tsv):
    path = write_tsv('dictionary.tsv', ['विकास\tdevelopment\tNOUN'])
    result = load_dictionary(path)
    assert list(result) == [DictionaryEntry('विकास', 'development', Tag.NOUN)]
    assert result.rejects == []


def test_load_dictionary_empty_file(write_tsv):
    result = load_dictionary(write_tsv('dictionary.tsv', []))
    assert len(result) == 0
    assert result.rejects == []


def test_load_dictionary_rejects_short_line(write_tsv):
    path = write_tsv('dictionary.tsv', ['विकास\tdevelopment\tNOUN', 'सेब\tapple', 'घर\thome\tNOUN'])
    result = load_dictionary(path)
    assert [entry.hindi_lemma for entry in result] == ['विकास', 'घर']
    assert len(result.rejects) == 1
    assert result.rejects[0].line_number == 2


def test_load_dictionary_rejects_unknown_tag_and_duplicates(write_tsv):
    path = write_tsv('dictionary.tsv', [
        'आम\tmango\tNOUN',
        'आम\tcommon\tADJ',
        'आम\tmango\tNOUN',
        'घर\thome\tPLACE',
    ])
    result = load_dictionary(path)
    assert [(entry.english_lemma, entry.tag) for entry in result] == [('mango', Tag.NOUN), ('common', Tag.ADJ)]
    assert [reject.line_number for reject in result.rejects] == [3, 4]


def test_load_dictionary_lowercases_english_and_reads_inflection(write_tsv):
    path = write_tsv('dictionary.tsv', ['लिख\tWrite\tverb\tirregular'])
    entry = load_dictionary(path).entries[0]
    assert entry.english_lemma == 'write'
    assert entry.tag is Tag.VERB
    assert entry.inflection_class is InflectionClass.IRREGULAR


def test_missing_file_is_fatal(tmp_path):
    with pytest.raises(IngestError):
        load_dictionary(tmp_path / 'nope.tsv')


def test_load_examples_idiom(write_tsv):
    path = write_tsv('examples.tsv', ['मुँह की बात छीनी\tsaid what one was about to say\tidiom'])
    entry = load_examples(path).entries[0]
    assert len(entry.hindi_tokens) == 4
    assert entry.category is ExampleCategory.IDIOM


def test_load_examples_first_duplicate_wins(write_tsv):
    path = write_tsv('examples.tsv', [
        'नौ दो ग्यारह हो गया\tran away\tidiom',
        'नौ दो ग्यारह हो गया\tfled\tidiom',
    ])
    result = load_examples(path)
    assert [entry.english_text for entry in result] == ['ran away']
    assert len(result.rejects) == 1


def test_load_examples_full_sentence_token_count(data_dir):
    entries = [entry for entry in load_examples(data_dir / 'examples.tsv')
               if entry.category is ExampleCategory.FULL_SENTENCE]
    assert len(entries[0].hindi_tokens) == 9


def test_load_examples_rejects_punctuation(write_tsv):
    result = load_examples(write_tsv('examples.tsv', ['नौ दो ग्यारह।\tran away\tidiom']))
    assert len(result) == 0
    assert len(result.rejects) == 1


def test_load_parallel_in_order(write_tsv):
    path = write_tsv('parallel.tsv', ['भारत मेरा देश है\tIndia is my country', 'राम खाना खाता है\tRam eats food'])
    pairs = list(load_parallel(path))
    assert [pair.english_sentence for pair in pairs] == ['India is my country', 'Ram eats food']


def test_load_parallel_rejects_extra_tabs(write_tsv):
    result = load_parallel(write_tsv('parallel.tsv', ['a\tb\tc\td']))
    assert len(result) == 0
    assert len(result.rejects) == 1


def test_loaded_plus_rejected_equals_nonblank_lines(write_tsv):
    lines = ['विकास\tdevelopment\tNOUN', '', 'bad line', 'घर\thome\tNOUN', '   ', 'घर\thome\tNOUN']
    result = load_dictionary(write_tsv('dictionary.tsv', lines))
    assert len(result) + len(result.rejects) == sum(1 for line in lines if line.strip())


def test_rejects_report_written_beside_input(write_tsv):
    path = write_tsv('dictionary.tsv', ['सेब\tapple'])
    report = write_rejects_report(load_dictionary(path))
    assert report == rejects_report_path(path)
    assert report.read_text(encoding='utf-8').startswith('1\t')


def test_round_trip_through_tsv(data_dir, tmp_path):
    dictionary = load_dictionary(data_dir / 'dictionary.tsv')
    examples = load_examples(data_dir / 'examples.tsv')
    parallel = load_parallel(data_dir / 'parallel.tsv')
    dump_dictionary(dictionary, tmp_path / 'd.tsv')
    dump_examples(examples, tmp_path / 'e.tsv')
    dump_parallel(parallel, tmp_path / 'p.tsv')
    assert load_dictionary(tmp_path / 'd.tsv').entries == dictionary.entries
    assert load_examples(tmp_path / 'e.tsv').entries == examples.entries
    assert load_parallel(tmp_path / 'p.tsv').entries == parallel.entries


def test_corpus_stats_empty():
    stats = corpus_stats([])
    assert stats.total_sentences == 0
    assert stats.tokens_per_side.english == stats.tokens_per_side.hindi == 0


def test_corpus_stats_single_pair():
    stats = corpus_stats([ParallelPair('भारत मेरा देश है', 'India is my country')])
    assert stats.tokens_per_side.hindi == 4
    # four words under the word/punctuation tokenizer
    assert stats.tokens_per_side.english == 4
    assert stats.total_sentences == 1
    assert stats.short_sentences.hindi == stats.short_sentences.english == 1
    assert stats.long_sentences.hindi == 0


def test_corpus_stats_counts_punctuation_tokens():
    assert english_tokenize("Vikas did development.") == ['Vikas', 'did', 'development', '.']
    stats = corpus_stats([ParallelPair('विकास ने विकास किया।', 'Vikas did development.')])
    assert stats.tokens_per_side.hindi == 5
    assert stats.types_per_side.hindi == 4
    assert stats.tokens_per_side.english == 4


pair_strategy = st.builds(
    ParallelPair,
    st.lists(st.sampled_from(['राम', 'आम', 'खाता', 'है', 'घर', '।']), min_size=1, max_size=14).map(' '.join),
    st.lists(st.sampled_from(['Ram', 'eats', 'mango', 'home', 'is', '.']), min_size=1, max_size=14).map(' '.join),
)


@given(st.lists(pair_strategy, max_size=12), st.randoms())
def test_corpus_stats_permutation_invariant(pairs, rng):
    shuffled = list(pairs)
    rng.shuffle(shuffled)
    assert corpus_stats(shuffled) == corpus_stats(pairs)


@given(st.lists(pair_strategy, max_size=12))
def test_corpus_stats_consistency(pairs):
    stats = corpus_stats(pairs)
    assert stats.short_sentences.hindi + stats.long_sentences.hindi == stats.total_sentences
    assert stats.short_sentences.english + stats.long_sentences.english == stats.total_sentences
    assert stats.types_per_side.hindi <= stats.tokens_per_side.hindi
    assert stats.types_per_side.english <= stats.tokens_per_side.english


@pytest.mark.skipif(not os.getenv('HMT_HINDIENCORP'), reason='HMT_HINDIENCORP not set')
def test_hindiencorp_statistics():
    result = load_parallel(os.environ['HMT_HINDIENCORP'])
    stats = corpus_stats(result)
    assert stats.total_sentences == len(result) > 0
    assert stats.types_per_side.hindi <= stats.tokens_per_side.hindi
