"""2x2 matrices over any ring whose elements support + and *."""


class Mat2:
    """[[a, b], [c, d]], indexed as m[i, j]."""

    __slots__ = ('entries',)

    def __init__(self, a, b, c, d):
        self.entries = (a, b, c, d)

    @classmethod
    def identity(cls, one, zero):
        return cls(one, zero, zero, one)

    @classmethod
    def from_rows(cls, rows):
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    def rows(self):
        a, b, c, d = self.entries
        return ((a, b), (c, d))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[2 * i + j]

    def __iter__(self):
        return iter(self.entries)

    def __mul__(self, other):
        if isinstance(other, Mat2):
            a, b, c, d = self.entries
            e, f, g, h = other.entries
            return Mat2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        return self.map(lambda v: v * other)

    def __rmul__(self, other):
        return self.map(lambda v: other * v)

    def __add__(self, other):
        return Mat2(*(u + v for u, v in zip(self.entries, other.entries)))

    __sub__ = __add__

    def __pow__(self, n: int):
        if n < 1:
            raise ValueError("Mat2 powers start at 1")
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        return isinstance(other, Mat2) and all(u == v for u, v in zip(self.entries, other.entries))

    def __hash__(self):
        return hash(self.entries)

    def map(self, fn) -> 'Mat2':
        return Mat2(*(fn(v) for v in self.entries))

    def det(self):
        a, b, c, d = self.entries
        return a * d - b * c

    def transpose(self) -> 'Mat2':
        a, b, c, d = self.entries
        return Mat2(a, c, b, d)

    def __repr__(self):
        a, b, c, d = self.entries
        return f"Mat2([[{a}, {b}], [{c}, {d}]])"
