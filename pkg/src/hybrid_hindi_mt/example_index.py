"""
Example database index and segmentation for the hybrid Hindi-English translator.
Splits a Hindi sentence into example-database matches and residual words.
"""
import logging
import unicodedata
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Dict, Iterable, List, Optional, Sequence, Tuple

if TYPE_CHECKING:
    from .corpus_ingest import ExampleEntry

logger = logging.getLogger(__name__)

DANDA = '।'
PUNCTUATION = frozenset({DANDA, '?', '!', ','})

_END = object()


class TokenKind(str, Enum):
    WORD = 'word'
    PUNCTUATION = 'punctuation'


class SegmentKind(str, Enum):
    EXAMPLE_MATCH = 'ExampleMatch'
    WORD = 'Word'


@dataclass(frozen=True)
class Token:
    surface: str
    kind: TokenKind = TokenKind.WORD


@dataclass(frozen=True)
class Segment:
    kind: SegmentKind
    tokens: Tuple[Token, ...]
    translation: Optional[str] = None
    category: Optional[str] = None

    @property
    def surface(self) -> str:
        return ' '.join(token.surface for token in self.tokens)

    @property
    def is_punctuation(self) -> bool:
        return self.kind is SegmentKind.WORD and self.tokens[0].kind is TokenKind.PUNCTUATION


def tokenize(text: str) -> List[Token]:
    """
    Split Hindi text on whitespace, detaching danda, '?', '!' and ','.

    Args:
        text: Devanagari sentence

    Returns:
        Word and punctuation tokens in order, never empty ones
    """
    tokens: List[Token] = []
    for chunk in unicodedata.normalize('NFC', text).split():
        buffer = ''
        for ch in chunk:
            if ch in PUNCTUATION:
                if buffer:
                    tokens.append(Token(buffer))
                    buffer = ''
                tokens.append(Token(ch, TokenKind.PUNCTUATION))
            else:
                buffer += ch
        if buffer:
            tokens.append(Token(buffer))
    return tokens


class ExampleIndex:
    """
    Token-level trie over the example database.

    Immutable after construction; longest_match walks at most
    max_phrase_len trie levels.
    """

    def __init__(self, entries: Iterable['ExampleEntry'] = ()):
        self._root: Dict = {}
        self._size = 0
        self.max_phrase_len = 0
        for entry in entries:
            self._insert(entry)
        logger.debug(f"Example index built: {self._size} entries, max phrase length {self.max_phrase_len}")

    def _insert(self, entry: 'ExampleEntry') -> None:
        node = self._root
        for surface in entry.hindi_tokens:
            node = node.setdefault(surface, {})
        # first entry for a phrase wins
        if _END not in node:
            node[_END] = entry
            self._size += 1
            self.max_phrase_len = max(self.max_phrase_len, len(entry.hindi_tokens))

    def __len__(self) -> int:
        return self._size

    def __contains__(self, surfaces: Sequence[str]) -> bool:
        node = self._root
        for surface in surfaces:
            node = node.get(surface)
            if node is None:
                return False
        return _END in node

    def entries(self) -> List['ExampleEntry']:
        found = []
        stack = [self._root]
        while stack:
            node = stack.pop()
            for key, child in node.items():
                if key is _END:
                    found.append(child)
                else:
                    stack.append(child)
        return found

    def longest_match(self, tokens: Sequence[Token], start: int) -> Optional[Tuple[int, 'ExampleEntry']]:
        """
        Find the longest example starting at a position.

        Returns:
            (length, entry) of the longest match, or None
        """
        node = self._root
        best = None
        position = start
        while position < len(tokens):
            token = tokens[position]
            if token.kind is not TokenKind.WORD:
                break
            node = node.get(token.surface)
            if node is None:
                break
            position += 1
            if _END in node:
                best = (position - start, node[_END])
        return best


def build_index(entries: Iterable['ExampleEntry']) -> ExampleIndex:
    return ExampleIndex(entries)


def segment(tokens: Sequence[Token], index: ExampleIndex) -> List[Segment]:
    """
    Greedy leftmost-longest segmentation against the example index.

    Args:
        tokens: Output of tokenize
        index: Example index

    Returns:
        ExampleMatch segments for matched phrases and one Word segment per
        remaining token (punctuation included); flattening them gives back
        the input tokens
    """
    segments: List[Segment] = []
    position = 0
    while position < len(tokens):
        match = index.longest_match(tokens, position)
        if match is not None:
            length, entry = match
            segments.append(Segment(
                kind=SegmentKind.EXAMPLE_MATCH,
                tokens=tuple(tokens[position:position + length]),
                translation=entry.english_text,
                category=entry.category.value,
            ))
            position += length
        else:
            segments.append(Segment(kind=SegmentKind.WORD, tokens=(tokens[position],)))
            position += 1
    return segments
