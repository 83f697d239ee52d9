"""The polynomial text grammar shared by fields, polynomials and fixtures.

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/')? factor)*      juxtaposition multiplies
    factor := atom ('^' exponent)?
    atom   := INT | SYMBOL | '(' expr ')' | '{' expr '}'
    exponent := ['-'] INT | '{' ['-'] INT '}' | '(' ['-'] INT ')'

Symbols are single letters. Evaluation is generic: symbols are looked up in
an environment of values supporting +, * and /, and integer literals are
mapped through the `one` of the target ring, so the same parser reads field
elements, polynomials in x and bivariate polynomials.
"""
from . import GnProveError

OPERATORS = '+-*/^(){}'


class ParseError(GnProveError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def tokenize(text: str):
    """Yield (kind, value, position) with kind in INT, SYM, OP."""
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(('INT', int(text[i:j]), i))
            i = j
        elif ch.isalpha():
            tokens.append(('SYM', ch, i))
            i += 1
        elif ch in OPERATORS:
            tokens.append(('OP', ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(('END', None, n))
    return tokens


class _Parser:
    def __init__(self, text: str, env: dict, one):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.env = env
        self.one = one

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value):
        kind, v, p = self.take()
        if v != value or kind != 'OP':
            raise ParseError(f"expected {value!r}", p)

    def parse(self):
        if self.peek()[0] == 'END':
            raise ParseError("empty expression", 0)
        value = self.expr()
        kind, _, p = self.peek()
        if kind != 'END':
            raise ParseError("trailing input", p)
        return value

    def expr(self):
        kind, v, _ = self.peek()
        if kind == 'OP' and v in '+-':
            # unary sign; -1 = 1 in characteristic 2
            self.take()
        value = self.term()
        while True:
            kind, v, _ = self.peek()
            if kind == 'OP' and v in '+-':
                self.take()
                value = value + self.term()
            else:
                return value

    def _starts_atom(self, tok) -> bool:
        kind, v, _ = tok
        return kind in ('INT', 'SYM') or (kind == 'OP' and v in '({')

    def term(self):
        value = self.factor()
        while True:
            tok = self.peek()
            kind, v, p = tok
            if kind == 'OP' and v == '*':
                self.take()
                value = value * self.factor()
            elif kind == 'OP' and v == '/':
                self.take()
                rhs = self.factor()
                try:
                    value = value / rhs
                except ZeroDivisionError:
                    raise ParseError("division by zero", p) from None
            elif self._starts_atom(tok):
                value = value * self.factor()
            else:
                return value

    def factor(self):
        value = self.atom()
        kind, v, _ = self.peek()
        if kind == 'OP' and v == '^':
            self.take()
            n = self.exponent()
            if n < 0:
                try:
                    return self.one / (value ** -n)
                except ZeroDivisionError:
                    raise ParseError("negative power of zero", self.peek()[2]) from None
            return value ** n
        return value

    def exponent(self) -> int:
        kind, v, p = self.peek()
        close = None
        if kind == 'OP' and v in '({':
            self.take()
            close = ')' if v == '(' else '}'
        sign = 1
        kind, v, p = self.peek()
        if kind == 'OP' and v == '-':
            self.take()
            sign = -1
        kind, v, p = self.take()
        if kind != 'INT':
            raise ParseError("expected an integer exponent", p)
        if close:
            self.expect(close)
        return sign * v

    def atom(self):
        kind, v, p = self.take()
        if kind == 'INT':
            return self.one * (v & 1)
        if kind == 'SYM':
            if v not in self.env:
                raise ParseError(f"unknown symbol {v!r}", p)
            return self.env[v]
        if kind == 'OP' and v in '({':
            value = self.expr()
            self.expect(')' if v == '(' else '}')
            return value
        raise ParseError("expected a number, symbol or parenthesis", p)


def evaluate(text: str, env: dict, one):
    """Parse text and evaluate it in env; integer literals become multiples of one."""
    return _Parser(text, env, one).parse()
