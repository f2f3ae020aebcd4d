import itertools

import pytest
from hypothesis import given, strategies as st

from hybrid_hindi_mt.corpus_ingest import DictionaryEntry
from hybrid_hindi_mt.evaluator import load_testset
from hybrid_hindi_mt.example_index import segment, tokenize
from hybrid_hindi_mt.lexicon_tagger import (
    Feature, Lexicon, LexiconError, Tag, TransliterationError, identify_proper_nouns, load_function_words,
    load_proper_noun_rules, load_transliteration_table, lookup, tag_labels, tag_sentence, transliterate,
    transliterate_lenient,
)


def test_lookup_single_sense(lexicon):
    assert lookup('विकास', lexicon) == [('development', Tag.NOUN)]


def test_lookup_unknown_word(lexicon):
    assert lookup('ओमकार', lexicon) == []


def test_lookup_keeps_file_order():
    lexicon = Lexicon.from_entries([
        DictionaryEntry('आम', 'mango', Tag.NOUN),
        DictionaryEntry('आम', 'common', Tag.ADJ),
    ])
    assert lookup('आम', lexicon) == [('mango', Tag.NOUN), ('common', Tag.ADJ)]


@pytest.mark.parametrize('word, latin', [
    ('विकास', 'vikas'),
    ('ओमकार', 'omkar'),
    ('धारिया', 'dhariya'),
])
def test_transliterate_names(translit, word, latin):
    assert transliterate(word, translit) == latin


def test_transliterate_uncovered_codepoint(translit):
    with pytest.raises(TransliterationError) as excinfo:
        transliterate('राम3', translit)
    assert excinfo.value.codepoint == '3'


def test_transliterate_lenient_reports_warning(translit):
    latin, warnings = transliterate_lenient('राम3', translit)
    assert latin.startswith('ram')
    assert len(warnings) == 1


def test_ergative_agent_becomes_name(tag):
    units = tag('विकास ने विकास किया')
    assert tag_labels(units) == ['NAME', 'marker', 'NOUN', 'VERB']
    assert [unit.english for unit in units if not unit.is_marker] == ['vikas', 'development', 'did']
    assert Feature.ERGATIVE_MARKED in units[1].features


def test_copular_identity_names(tag):
    units = tag('में ओमकार विकास धारिया हूँ')
    assert tag_labels(units) == ['PRON', 'NAME', 'NAME', 'NAME', 'aux']
    assert [unit.english for unit in units[1:4]] == ['omkar', 'vikas', 'dhariya']


def test_copular_frame_with_verb_is_not_a_name(tag):
    units = tag('मैं सोना खरीदता हूँ')
    assert tag_labels(units) == ['PRON', 'VERB', 'VERB', 'aux']


def test_no_rule_fires_on_known_words(tag):
    units = tag('राम खाना खाता है')
    assert tag_labels(units)[1:] == ['NOUN', 'VERB', 'aux']
    units = tag('भारत मेरा देश है')
    assert [unit.english for unit in units[:3]] == ['india', 'my', 'country']
    assert Feature.AUX_PRESENT in units[3].features


def test_ambiguous_word_keeps_all_senses(tag):
    units = tag('राम आम खाता है')
    assert [candidate.english for candidate in units[1].candidates] == ['mango', 'common']
    assert units[1].chosen is None


def test_question_particle_position(tag):
    initial = tag('क्या आप लिख रहे हैं')
    medial = tag('आप क्या लिख रहे हैं')
    assert Feature.QUESTION_PARTICLE_INITIAL in initial[0].features
    assert Feature.QUESTION_PARTICLE_MEDIAL in medial[1].features
    assert Feature.SECOND_PERSON in medial[0].features


def test_example_match_is_a_block(tag):
    units = tag('ओमकार ने मुँह की बात छीनी')
    assert tag_labels(units) == ['NAME', 'marker', 'BLOCK']
    assert units[2].english == 'said what one was about to say'


def test_empty_sentence(tag):
    assert tag('') == []


def test_disabled_rules_leave_names_to_fallback(tag):
    units = tag('विकास ने विकास किया', rules=())
    assert tag_labels(units) == ['NOUN', 'marker', 'NOUN', 'VERB']


def test_choose_rejects_bad_index(tag):
    unit = tag('आम')[0]
    assert unit.choose(1).english == 'common'
    with pytest.raises(IndexError):
        unit.choose(5)


def test_rule_order_does_not_change_tags(lexicon, translit, example_index, data_dir, proper_noun_rules):
    for item in load_testset(data_dir / 'testset.tsv'):
        base = tag_sentence(segment(tokenize(item.source), example_index), lexicon, translit, ())
        outcomes = {
            tuple(tag_labels(identify_proper_nouns(base, lexicon, translit, order)))
            for order in itertools.permutations(proper_noun_rules)
        }
        assert len(outcomes) == 1, item.source


WORDS = ['राम', 'ने', 'आम', 'खाता', 'है', 'मैं', 'हूँ', 'ओमकार', 'धारिया', 'क्या', 'सोना', 'और', '।', 'विकास']


@given(st.lists(st.sampled_from(WORDS), max_size=12))
def test_every_content_unit_has_candidates(tag, words):
    sentence = ' '.join(words)
    units = tag(sentence)
    assert [unit.surface for unit in units] == [token.surface for token in tokenize(sentence)]
    for unit in units:
        if unit.is_content or unit.is_block:
            assert unit.candidates
        if unit.chosen is not None:
            assert 0 <= unit.chosen < len(unit.candidates)


def test_load_function_words_accumulates_flags(tmp_path):
    path = tmp_path / 'function_words.tsv'
    path.write_text('वे\tthird_person\nवे\tplural_marked\nऔर\tconjunction\tand\n', encoding='utf-8')
    table = load_function_words(path)
    assert table['वे'].flags == {Feature.THIRD_PERSON, Feature.PLURAL_MARKED}
    assert not table['वे'].is_marker
    assert table['और'].rendering == 'and'


def test_load_function_words_unknown_flag(tmp_path):
    path = tmp_path / 'function_words.tsv'
    path.write_text('है\tpresent\n', encoding='utf-8')
    with pytest.raises(LexiconError):
        load_function_words(path)


def test_load_transliteration_rejects_uppercase(tmp_path):
    path = tmp_path / 'translit.tsv'
    path.write_text('क\tK\n', encoding='utf-8')
    with pytest.raises(LexiconError):
        load_transliteration_table(path)


def test_load_proper_noun_rules_disable_and_unknown(tmp_path):
    path = tmp_path / 'rules.txt'
    path.write_text('# rules\nR1\nR2\nR9\n-R2\nR3\n', encoding='utf-8')
    assert load_proper_noun_rules(path) == ('R1', 'R3')


@given(st.lists(st.sampled_from(['क', 'म', 'र', 'ल', 'स', 'ा', 'ि', 'ी', 'ु', '्', 'ं', 'आ', 'ओ']), min_size=1, max_size=8))
def test_transliteration_is_deterministic_ascii(translit, letters):
    word = ''.join(letters)
    latin = transliterate(word, translit)
    assert latin == transliterate(word, translit)
    assert latin == latin.lower()
    assert latin.isascii()
