"""Arithmetic for the binary extension field GF(2^m), 3 <= m <= 20.

Field elements are plain Python ints read as coefficient bitmasks over
the polynomial basis: bit i of the int is the coefficient of x^i.  So
0 and 1 are the field constants, 2 is x, 6 is x^2 + x, and the full
field is exactly range(2**m).

A FieldContext fixes the irreducible modulus and a multiplicative
generator, and carries exp/log tables so products and discrete logs are
table lookups.  By default the modulus is the least irreducible degree-m
polynomial in this bitmask order, and the generator is x itself whenever
x is primitive for that modulus; under the default moduli x falls short
at m = 8, 9, 12, 14, 16, and 18, where the smallest primitive element
is used instead.
"""

from __future__ import annotations

MIN_M = 3
MAX_M = 20

_STYLES = ("power", "hex", "poly")


# ----------------------------------------------------------------------
# polynomial arithmetic over GF(2), operands as coefficient bitmasks
# ----------------------------------------------------------------------

def _poly_degree(p: int) -> int:
    return p.bit_length() - 1


def _poly_mulmod(a: int, b: int, mod: int) -> int:
    """Carry-less product of a and b, reduced modulo mod."""
    deg = _poly_degree(mod)
    top = 1 << deg
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= mod
    return acc


def _poly_mod(a: int, b: int) -> int:
    db = _poly_degree(b)
    while a and _poly_degree(a) >= db:
        a ^= b << (_poly_degree(a) - db)
    return a


def _poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _poly_mod(a, b)
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(poly: int) -> bool:
    """Rabin test: x^(2^m) == x mod poly, and for every prime q | m the
    polynomial x^(2^(m/q)) - x is coprime to poly."""
    m = _poly_degree(poly)
    if m < 1:
        return False
    if not poly & 1:  # divisible by x
        return m == 1 and poly == 2
    x = 2
    r = x
    powers = {}
    for i in range(1, m + 1):
        r = _poly_mulmod(r, r, poly)
        powers[i] = r
    if powers[m] != x:
        return False
    for q in _prime_factors(m):
        if _poly_gcd(powers[m // q] ^ x, poly) != 1:
            return False
    return True


def least_irreducible(m: int) -> int:
    """Smallest degree-m irreducible polynomial in bitmask order."""
    for poly in range((1 << m) | 1, 1 << (m + 1), 2):
        if is_irreducible(poly):
            return poly
    raise AssertionError(f"no irreducible polynomial of degree {m}")


# ----------------------------------------------------------------------
# field context
# ----------------------------------------------------------------------

def _mul_raw(a: int, b: int, modulus: int, m: int) -> int:
    """Field product by shift-and-reduce, no tables required."""
    top = 1 << m
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= modulus
    return acc


def _pow_raw(a: int, e: int, modulus: int, m: int) -> int:
    acc = 1
    while e:
        if e & 1:
            acc = _mul_raw(acc, a, modulus, m)
        a = _mul_raw(a, a, modulus, m)
        e >>= 1
    return acc


def _is_primitive(a: int, modulus: int, m: int, factors: list[int]) -> bool:
    n = (1 << m) - 1
    if a in (0, 1):
        return n == 1
    if _pow_raw(a, n, modulus, m) != 1:
        return False
    return all(_pow_raw(a, n // q, modulus, m) != 1 for q in factors)


class FieldContext:
    """Immutable GF(2^m) arithmetic context.

    Attributes
    ----------
    m : extension degree
    modulus : irreducible degree-m polynomial as a bitmask
    alpha : multiplicative generator used for the power notation
    exp_table : tuple, exp_table[i] = alpha^i for 0 <= i < 2^m - 1
    log_table : tuple, log_table[a] = discrete log of a (None at index 0)
    """

    __slots__ = ("m", "modulus", "alpha", "exp_table", "log_table")

    def __init__(self, m: int, modulus: int, alpha: int):
        n = (1 << m) - 1
        exp = [1] * n
        for i in range(1, n):
            exp[i] = _mul_raw(exp[i - 1], alpha, modulus, m)
        log: list[int | None] = [None] * (n + 1)
        for i, a in enumerate(exp):
            if log[a] is not None:
                raise ValueError(f"alpha={alpha:#x} is not primitive for modulus {modulus:#x}")
            log[a] = i
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "exp_table", tuple(exp))
        object.__setattr__(self, "log_table", tuple(log))

    def __setattr__(self, name, value):
        raise AttributeError("FieldContext is immutable")

    def __repr__(self):
        return f"FieldContext(m={self.m}, modulus={self.modulus:#x}, alpha={self.alpha:#x})"

    def __eq__(self, other):
        return (isinstance(other, FieldContext)
                and (self.m, self.modulus, self.alpha) == (other.m, other.modulus, other.alpha))

    def __hash__(self):
        return hash((self.m, self.modulus, self.alpha))

    # -- arithmetic ----------------------------------------------------

    @property
    def size(self) -> int:
        return 1 << self.m

    def check_element(self, a: int) -> int:
        if not isinstance(a, int) or isinstance(a, bool):
            raise ValueError(f"field element must be an int, got {a!r}")
        if not 0 <= a < self.size:
            raise ValueError(f"{a:#x} is outside GF(2^{self.m})")
        return a

    def add(self, a: int, b: int) -> int:
        """Sum of two elements; characteristic 2, so this is XOR."""
        self.check_element(a)
        self.check_element(b)
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        """Table-based product via discrete logs."""
        self.check_element(a)
        self.check_element(b)
        if a == 0 or b == 0:
            return 0
        n = self.size - 1
        return self.exp_table[(self.log_table[a] + self.log_table[b]) % n]

    def mul_direct(self, a: int, b: int) -> int:
        """Product by shift-and-reduce; redundant path for cross-checks."""
        self.check_element(a)
        self.check_element(b)
        return _mul_raw(a, b, self.modulus, self.m)

    def inv(self, a: int) -> int:
        self.check_element(a)
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        n = self.size - 1
        return self.exp_table[(n - self.log_table[a]) % n]

    def dlog(self, a: int) -> int:
        """Discrete log base alpha; a = 0 has none."""
        self.check_element(a)
        if a == 0:
            raise ValueError("discrete log of 0 is undefined")
        return self.log_table[a]

    def frobenius(self, a: int) -> int:
        """Squaring map a -> a^2, a field automorphism."""
        self.check_element(a)
        return _mul_raw(a, a, self.modulus, self.m)

    def x_elements(self) -> range:
        """The punctured point set X = GF(2^m) minus {0, 1}, ascending."""
        return range(2, self.size)

    # -- formatting ----------------------------------------------------

    def format_element(self, a: int, style: str = "power") -> str:
        self.check_element(a)
        if style == "power":
            if a == 0:
                raise ValueError("0 has no power notation")
            return f"g^{self.log_table[a]}"
        if style == "hex":
            return format(a, "#x")
        if style == "poly":
            return poly_str(a)
        raise ValueError(f"unknown notation style {style!r}; expected one of {_STYLES}")

    def parse_element(self, text: str) -> int:
        """Inverse of format_element for the power and hex styles."""
        t = text.strip()
        if t.startswith("g^"):
            return self.exp_table[int(t[2:]) % (self.size - 1)]
        a = int(t, 0)
        return self.check_element(a)


def poly_str(p: int) -> str:
    """Render a coefficient bitmask as a polynomial in x."""
    if p == 0:
        return "0"
    terms = []
    for i in range(_poly_degree(p), -1, -1):
        if p >> i & 1:
            terms.append("1" if i == 0 else "x" if i == 1 else f"x^{i}")
    return "+".join(terms)


def build_field(m: int, modulus_override: int | None = None) -> FieldContext:
    """Construct the GF(2^m) context used by every other module.

    The modulus defaults to the least irreducible degree-m bitmask.  The
    generator is x when x is primitive, otherwise the smallest primitive
    element.  An override modulus must be irreducible of degree exactly m.
    """
    if not isinstance(m, int) or isinstance(m, bool):
        raise ValueError(f"m must be an int, got {m!r}")
    if not MIN_M <= m <= MAX_M:
        raise ValueError(f"m={m} out of supported range [{MIN_M}, {MAX_M}]")
    if modulus_override is None:
        modulus = least_irreducible(m)
    else:
        modulus = modulus_override
        if _poly_degree(modulus) != m:
            raise ValueError(f"modulus {modulus:#x} does not have degree {m}")
        if not is_irreducible(modulus):
            raise ValueError(f"modulus {modulus:#x} is reducible")
    factors = _prime_factors((1 << m) - 1)
    alpha = 2
    if not _is_primitive(alpha, modulus, m, factors):
        alpha = next(a for a in range(3, 1 << m)
                     if _is_primitive(a, modulus, m, factors))
    return FieldContext(m, modulus, alpha)
