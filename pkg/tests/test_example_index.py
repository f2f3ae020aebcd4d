from functools import lru_cache

from hypothesis import given, strategies as st

from hybrid_hindi_mt.corpus_ingest import ExampleCategory, ExampleEntry
from hybrid_hindi_mt.evaluator import load_testset
from hybrid_hindi_mt.example_index import (
    ExampleIndex, SegmentKind, Token, TokenKind, build_index, segment, tokenize,
)

IDIOM = ExampleEntry(('मुँह', 'की', 'बात', 'छीनी'), 'said what one was about to say', ExampleCategory.IDIOM)

VOCABULARY = ['राम', 'ने', 'आम', 'खाया', 'नौ', 'दो', 'ग्यारह', 'हो', 'गया', '।']


def entry(*surfaces, english='x'):
    return ExampleEntry(tuple(surfaces), english, ExampleCategory.PHRASE)


def surfaces(segments):
    return [token.surface for seg in segments for token in seg.tokens]


def test_tokenize_detaches_danda():
    tokens = tokenize('विकास ने विकास किया।')
    assert [token.surface for token in tokens] == ['विकास', 'ने', 'विकास', 'किया', '।']
    assert tokens[-1].kind is TokenKind.PUNCTUATION


def test_tokenize_question_mark_and_comma():
    tokens = tokenize('राम, आप?')
    assert [(token.surface, token.kind) for token in tokens] == [
        ('राम', TokenKind.WORD), (',', TokenKind.PUNCTUATION),
        ('आप', TokenKind.WORD), ('?', TokenKind.PUNCTUATION),
    ]


def test_tokenize_empty_and_blank():
    assert tokenize('') == []
    assert tokenize('   \t ') == []


def test_longest_match_finds_idiom():
    index = build_index([IDIOM])
    tokens = tokenize('ओंकार ने मुँह की बात छीनी')
    length, found = index.longest_match(tokens, 2)
    assert length == 4
    assert found is IDIOM
    assert index.longest_match(tokens, 0) is None


def test_longest_match_prefers_longer_entry():
    index = build_index([entry('नौ', 'दो'), entry('नौ', 'दो', 'ग्यारह', english='long')])
    length, found = index.longest_match(tokenize('नौ दो ग्यारह हो गया'), 0)
    assert length == 3
    assert found.english_text == 'long'


def test_longest_match_stops_at_punctuation():
    index = build_index([entry('नौ', 'दो')])
    assert index.longest_match(tokenize('नौ। दो'), 0) is None


def test_index_first_entry_wins():
    index = build_index([entry('नौ', 'दो', english='first'), entry('नौ', 'दो', english='second')])
    assert len(index) == 1
    assert index.entries()[0].english_text == 'first'
    assert ('नौ', 'दो') in index
    assert ('नौ',) not in index


def test_segment_keeps_ergative_particle_beside_idiom():
    segments = segment(tokenize('ओंकार ने मुँह की बात छीनी'), build_index([IDIOM]))
    assert [seg.kind for seg in segments] == [SegmentKind.WORD, SegmentKind.WORD, SegmentKind.EXAMPLE_MATCH]
    assert segments[0].surface == 'ओंकार'
    assert segments[1].surface == 'ने'
    assert segments[2].translation == 'said what one was about to say'
    assert segments[2].category == 'idiom'


def test_segment_without_matches_gives_single_words():
    segments = segment(tokenize('ओंकार और अजय जा रहे थे'), build_index([IDIOM]))
    assert len(segments) == 6
    assert all(seg.kind is SegmentKind.WORD and len(seg.tokens) == 1 for seg in segments)


def test_segment_empty():
    assert segment([], build_index([IDIOM])) == []


def test_segment_punctuation_is_a_word_segment():
    segments = segment(tokenize('राम नौ दो ग्यारह हो गया।'), build_index([entry('नौ', 'दो', 'ग्यारह', 'हो', 'गया')]))
    assert segments[-1].is_punctuation
    assert [seg.kind for seg in segments] == [SegmentKind.WORD, SegmentKind.EXAMPLE_MATCH, SegmentKind.WORD]


def _max_coverage(tokens, index):
    """Largest number of tokens coverable by non-overlapping index matches."""
    keys = {tuple(e.hindi_tokens) for e in index.entries()}
    words = tuple(token.surface if token.kind is TokenKind.WORD else None for token in tokens)

    @lru_cache(maxsize=None)
    def best(position):
        if position >= len(words):
            return 0
        result = best(position + 1)
        for end in range(position + 1, len(words) + 1):
            if tuple(words[position:end]) in keys:
                result = max(result, end - position + best(end))
        return result

    return best(0)


def test_greedy_matches_best_coverage_on_fixture_suite(example_index, data_dir):
    for item in load_testset(data_dir / 'testset.tsv'):
        tokens = tokenize(item.source)
        covered = sum(len(seg.tokens) for seg in segment(tokens, example_index)
                      if seg.kind is SegmentKind.EXAMPLE_MATCH)
        assert covered == _max_coverage(tokens, example_index), item.source


phrases = st.lists(st.sampled_from(VOCABULARY[:-1]), min_size=1, max_size=4)
token_lists = st.lists(st.sampled_from(VOCABULARY), max_size=20).map(lambda words: tokenize(' '.join(words)))


@given(st.lists(phrases, max_size=6), token_lists)
def test_segment_covers_input_exactly(keys, tokens):
    index = ExampleIndex(entry(*key) for key in keys)
    segments = segment(tokens, index)
    assert surfaces(segments) == [token.surface for token in tokens]
    assert segment(tokens, index) == segments


@given(st.lists(phrases, max_size=6), token_lists)
def test_segment_is_greedy_longest(keys, tokens):
    index = ExampleIndex(entry(*key) for key in keys)
    position = 0
    for seg in segment(tokens, index):
        match = index.longest_match(tokens, position)
        if seg.kind is SegmentKind.EXAMPLE_MATCH:
            assert match is not None and match[0] == len(seg.tokens)
        else:
            assert len(seg.tokens) == 1
            assert match is None
        position += len(seg.tokens)


@given(phrases, st.lists(phrases, max_size=4))
def test_whole_input_key_dominates(key, others):
    index = ExampleIndex([entry(*key), *(entry(*other) for other in others)])
    segments = segment([Token(surface) for surface in key], index)
    assert len(segments) == 1
    assert segments[0].kind is SegmentKind.EXAMPLE_MATCH
