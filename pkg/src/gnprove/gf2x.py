"""Polynomials over F_2 packed into Python ints.

Bit i of an int is the coefficient of u^i, so u^3 + u + 1 is 0b1011.
These are the building blocks for F_{2^m} and for the F_2[x] fast paths.
"""


def degree(a: int) -> int:
    """Degree of a, -1 for the zero polynomial."""
    return a.bit_length() - 1


def mul(a: int, b: int) -> int:
    """Carry-less product."""
    if a < b:
        a, b = b, a
    if b.bit_length() <= 64:
        c = 0
        while b:
            if b & 1:
                c ^= a
            a <<= 1
            b >>= 1
        return c
    # windowed: one table of multiples of a, then one shift per window
    w = 8 if b.bit_length() > 1024 else 4
    table = [0] * (1 << w)
    table[1] = a
    for k in range(2, 1 << w):
        table[k] = table[k >> 1] << 1 if not k & 1 else table[k ^ 1] ^ a
    mask = (1 << w) - 1
    c = 0
    shift = 0
    while b:
        c ^= table[b & mask] << shift
        b >>= w
        shift += w
    return c


def square(a: int) -> int:
    """Square by spreading bits (Frobenius on F_2[u])."""
    r = 0
    i = 0
    while a:
        if a & 1:
            r |= 1 << (2 * i)
        a >>= 1
        i += 1
    return r


def divmod_(a: int, b: int):
    """Quotient and remainder of a by b."""
    if b == 0:
        raise ZeroDivisionError('division by zero polynomial')
    m = degree(a)
    n = degree(b)
    if m < n:
        return 0, a
    q = 0
    for i in range(m, n - 1, -1):
        if (a >> i) & 1:
            a ^= b << (i - n)
            q |= 1 << (i - n)
    return q, a


def mod(a: int, b: int) -> int:
    """Remainder of a by b."""
    return divmod_(a, b)[1]


def gcd(a: int, b: int) -> int:
    while b:
        a, b = b, mod(a, b)
    return a


def gcdext(a: int, b: int):
    """Return d, s, t with s a + t b = d = gcd(a, b)."""
    s, s1 = 1, 0
    t, t1 = 0, 1
    while b:
        q, r = divmod_(a, b)
        a, b = b, r
        s, s1 = s1, s ^ mul(q, s1)
        t, t1 = t1, t ^ mul(q, t1)
    return a, s, t


def invert(a: int, modulus: int) -> int:
    """Inverse of a modulo modulus."""
    d, s, _ = gcdext(mod(a, modulus), modulus)
    if d != 1:
        raise ZeroDivisionError('inverse does not exist')
    return s


def mulmod(a: int, b: int, modulus: int) -> int:
    return mod(mul(a, b), modulus)


def powmod(a: int, n: int, modulus: int) -> int:
    """a^n modulo modulus, n >= 0."""
    r = 1
    a = mod(a, modulus)
    while n:
        if n & 1:
            r = mulmod(r, a, modulus)
        a = mulmod(a, a, modulus)
        n >>= 1
    return mod(r, modulus)


def derivative(a: int) -> int:
    """Formal derivative; only odd exponents survive in characteristic 2."""
    return (a >> 1) & _even_bits(degree(a))


def _even_bits(d: int) -> int:
    # bits 0, 2, 4, ... up to d
    m = 0
    for i in range(0, d + 1, 2):
        m |= 1 << i
    return m


def _prime_divisors(n: int):
    ps = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            ps.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        ps.append(n)
    return ps


def is_irreducible(a: int) -> bool:
    """Rabin's test: u^(2^n) = u mod a and gcd(u^(2^(n/p)) - u, a) = 1."""
    n = degree(a)
    if n <= 0:
        return False
    if n == 1:
        return True
    if not a & 1:
        return False

    def frob_power(k):
        r = 2
        for _ in range(k):
            r = mulmod(r, r, a)
        return r

    if frob_power(n) != 2:
        return False
    for p in _prime_divisors(n):
        if gcd(frob_power(n // p) ^ 2, a) != 1:
            return False
    return True


def irreducibles(d: int):
    """All irreducible polynomials of degree d, in increasing order."""
    return [a for a in range(1 << d, 1 << (d + 1)) if a & 1 and is_irreducible(a)]


def next_irreducible(a: int) -> int:
    """Least irreducible polynomial greater than a."""
    a += 1
    while not is_irreducible(a):
        a += 1
    return a


def to_text(a: int, var: str = 'u') -> str:
    """Descending-power text, e.g. 'u^3 + u + 1'."""
    if a == 0:
        return '0'
    terms = []
    for i in range(degree(a), -1, -1):
        if (a >> i) & 1:
            if i == 0:
                terms.append('1')
            elif i == 1:
                terms.append(var)
            else:
                terms.append(f'{var}^{i}')
    return ' + '.join(terms)
