"""A small regular-expression dialect over digit alphabets, and DFAO state images.

Grammar (whitespace is ignored):

    union  := concat ('+' concat)*
    concat := postfix*                       empty concat is the empty word
    postfix := atom ('^*' | '^+')*
    atom   := DIGIT | '(' union ')' | '{' word (',' word)* '}'
    word   := DIGIT*

'^+' means r r^*; a brace list is the union of its literal words. Words are
written most significant digit first, as numbers are written; a DFAO reads
them from the right, so images are computed on the reversed language.
"""
import logging
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Tuple

from .textfmt import ParseError

log = logging.getLogger(__name__)


# syntax tree

@dataclass(frozen=True)
class Lit:
    digit: str

    def to_text(self) -> str:
        return self.digit


@dataclass(frozen=True)
class WordSet:
    words: Tuple[str, ...]

    def to_text(self) -> str:
        return '{' + ','.join(self.words) + '}'


@dataclass(frozen=True)
class Group:
    inner: object

    def to_text(self) -> str:
        return f"({self.inner.to_text()})"


@dataclass(frozen=True)
class Star:
    inner: object

    def to_text(self) -> str:
        return f"{self.inner.to_text()}^*"


@dataclass(frozen=True)
class Plus:
    inner: object

    def to_text(self) -> str:
        return f"{self.inner.to_text()}^+"


@dataclass(frozen=True)
class Cat:
    parts: Tuple[object, ...]

    def to_text(self) -> str:
        return ''.join(p.to_text() for p in self.parts)


@dataclass(frozen=True)
class Union:
    options: Tuple[object, ...]

    def to_text(self) -> str:
        return '+'.join(o.to_text() for o in self.options)


EPSILON = Cat(())


class _RegexParser:
    def __init__(self, text: str, k: int):
        self.text = text
        self.pos = 0
        self.k = k
        self._skip()

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ''

    def take(self):
        ch = self.peek()
        self.pos += 1
        self._skip()
        return ch

    def expect(self, ch):
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.pos)
        self.take()

    def digit(self, ch):
        if not ch.isdigit() or int(ch) >= self.k:
            raise ParseError(f"{ch!r} is not a base-{self.k} digit", self.pos)
        return ch

    def parse(self):
        node = self.union()
        if self.pos < len(self.text):
            raise ParseError(f"unexpected {self.peek()!r}", self.pos)
        return node

    def union(self):
        options = [self.concat()]
        while self.peek() == '+':
            self.take()
            options.append(self.concat())
        return options[0] if len(options) == 1 else Union(tuple(options))

    def concat(self):
        parts = []
        while self.peek() and self.peek() not in '+)':
            parts.append(self.postfix())
        return parts[0] if len(parts) == 1 else Cat(tuple(parts))

    def postfix(self):
        node = self.atom()
        while self.peek() == '^':
            at = self.pos
            self.take()
            op = self.take()
            if op == '*':
                node = Star(node)
            elif op == '+':
                node = Plus(node)
            else:
                raise ParseError("expected '*' or '+' after '^'", at)
        return node

    def atom(self):
        ch = self.peek()
        at = self.pos
        if ch == '(':
            self.take()
            if self.peek() == ')':
                self.take()
                return Group(EPSILON)
            inner = self.union()
            self.expect(')')
            return Group(inner)
        if ch == '{':
            self.take()
            words = [self.word()]
            while self.peek() == ',':
                self.take()
                words.append(self.word())
            self.expect('}')
            return WordSet(tuple(words))
        if ch.isdigit():
            return Lit(self.digit(self.take()))
        raise ParseError(f"unexpected {ch!r}" if ch else "unexpected end of expression", at)

    def word(self):
        w = []
        while self.peek().isdigit():
            w.append(self.digit(self.take()))
        return ''.join(w)


def parse_regex(text: str, k: int = 2):
    return _RegexParser(text, k).parse()


def regex_text(node) -> str:
    return node.to_text()


# structural matching, the reference semantics

def _ends(node, word: str, i: int):
    """Positions j such that word[i:j] is in L(node)."""
    if isinstance(node, Lit):
        return {i + 1} if word[i:i + 1] == node.digit else set()
    if isinstance(node, WordSet):
        return {i + len(w) for w in node.words if word.startswith(w, i)}
    if isinstance(node, Group):
        return _ends(node.inner, word, i)
    if isinstance(node, Cat):
        pos = {i}
        for p in node.parts:
            pos = set().union(*(_ends(p, word, j) for j in pos)) if pos else set()
        return pos
    if isinstance(node, Union):
        return set().union(*(_ends(o, word, i) for o in node.options))
    if isinstance(node, (Star, Plus)):
        reached = {i} if isinstance(node, Star) else set()
        frontier = _ends(node.inner, word, i)
        while frontier - reached:
            new = frontier - reached
            reached |= new
            frontier = set().union(*(_ends(node.inner, word, j) for j in new))
        return reached
    raise TypeError(f"unknown regex node {node!r}")


def ast_matches(node, word: str) -> bool:
    return len(word) in _ends(node, word, 0)


# epsilon-free NFA

@dataclass
class Nfa:
    size: int
    trans: dict          # (state, digit) -> frozenset of states
    initial: frozenset
    accepting: frozenset
    k: int = 2

    def step(self, states, digit: str):
        out = set()
        for s in states:
            out |= self.trans.get((s, digit), frozenset())
        return out

    def matches(self, word: str) -> bool:
        cur = set(self.initial)
        for ch in word:
            cur = self.step(cur, ch)
            if not cur:
                return False
        return bool(cur & self.accepting)

    def reversed(self) -> 'Nfa':
        rev = defaultdict(set)
        for (s, ch), targets in self.trans.items():
            for t in targets:
                rev[(t, ch)].add(s)
        return Nfa(self.size, {key: frozenset(v) for key, v in rev.items()},
                   self.accepting, self.initial, self.k)


class _Builder:
    """Thompson construction with epsilon edges, removed afterwards."""

    def __init__(self):
        self.count = 0
        self.edges = defaultdict(set)     # (s, digit or None) -> targets

    def new(self):
        self.count += 1
        return self.count - 1

    def build(self, node):
        if isinstance(node, Lit):
            a, b = self.new(), self.new()
            self.edges[(a, node.digit)].add(b)
            return a, b
        if isinstance(node, WordSet):
            a, b = self.new(), self.new()
            for w in node.words:
                cur = a
                for ch in w:
                    nxt = self.new()
                    self.edges[(cur, ch)].add(nxt)
                    cur = nxt
                self.edges[(cur, None)].add(b)
            return a, b
        if isinstance(node, Group):
            return self.build(node.inner)
        if isinstance(node, Cat):
            a = b = self.new()
            for p in node.parts:
                s, e = self.build(p)
                self.edges[(b, None)].add(s)
                b = e
            return a, b
        if isinstance(node, Union):
            a, b = self.new(), self.new()
            for o in node.options:
                s, e = self.build(o)
                self.edges[(a, None)].add(s)
                self.edges[(e, None)].add(b)
            return a, b
        if isinstance(node, Star):
            a, b = self.new(), self.new()
            s, e = self.build(node.inner)
            self.edges[(a, None)] |= {s, b}
            self.edges[(e, None)] |= {s, b}
            return a, b
        if isinstance(node, Plus):
            return self.build(Cat((node.inner, Star(node.inner))))
        raise TypeError(f"unknown regex node {node!r}")

    def closure(self, s):
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for v in self.edges.get((u, None), ()):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen


def to_nfa(node, k: int = 2) -> Nfa:
    b = _Builder()
    start, end = b.build(node)
    closures = [b.closure(s) for s in range(b.count)]
    trans = {}
    for s in range(b.count):
        for d in range(k):
            ch = str(d)
            targets = set()
            for u in closures[s]:
                for v in b.edges.get((u, ch), ()):
                    targets |= closures[v]
            if targets:
                trans[(s, ch)] = frozenset(targets)
    initial = frozenset(closures[start])
    accepting = frozenset(s for s in range(b.count) if s == end)
    return Nfa(b.count, trans, initial, accepting, k)


def regex_state_image(d, r, start: int) -> frozenset:
    """{A(start, w) : w in L(r)} by reachability in the product of reversed L(r) and d."""
    if isinstance(r, str):
        r = parse_regex(r, d.k)
    nfa = r if isinstance(r, Nfa) else to_nfa(r, d.k)
    rev = nfa.reversed()
    seen = {(q, start) for q in rev.initial}
    queue = deque(seen)
    image = set()
    while queue:
        q, s = queue.popleft()
        if q in rev.accepting:
            image.add(s)
        for j in range(d.k):
            t = d.delta[s][j]
            for q2 in rev.trans.get((q, str(j)), ()):
                if (q2, t) not in seen:
                    seen.add((q2, t))
                    queue.append((q2, t))
    return frozenset(image)


def enumerate_language(node, max_length: int, k: int = 2):
    """Words of L(node) with at most max_length digits, by brute force."""
    out = []
    for n in range(max_length + 1):
        for i in range(k ** n):
            w = []
            for _ in range(n):
                i, r = divmod(i, k)
                w.append(str(r))
            word = ''.join(reversed(w))
            if ast_matches(node, word):
                out.append(word)
    return out
