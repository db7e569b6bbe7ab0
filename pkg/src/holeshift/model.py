"""Base domain types: alphabet parameters and fixed-length digit words.

A word of length m over the digit alphabet {0, ..., b-1} is represented as a
plain tuple of ints.  Packed form is the integer value of the word read as a
base-b numeral, most significant digit first; it indexes de Bruijn states and
keeps hot loops free of tuple traffic.
"""

from __future__ import annotations

from dataclasses import dataclass

Word = tuple[int, ...]


class ModelError(ValueError):
    """Invalid parameters, digits, or word syntax."""


@dataclass(frozen=True)
class Params:
    """Alphabet size b and hole length m.

    ``verified`` marks the regime the supporting estimates are proved in
    (b >= 3 and m >= 2).  Outside it the engines still run; prediction
    consumers are expected to surface the flag.
    """

    b: int
    m: int
    verified: bool

    @property
    def state_count(self) -> int:
        # de Bruijn states are the (m-1)-digit suffixes
        return self.b ** (self.m - 1)

    @property
    def word_count(self) -> int:
        return self.b**self.m


def make_params(b: int, m: int) -> Params:
    """Validate and build Params.

    Any b >= 2, m >= 1 is accepted; closed-form results (roots, bounds) work
    at any size, while engines that materialize the b**(m-1) states enforce
    their own capacity limits.
    """
    if not isinstance(b, int) or not isinstance(m, int):
        raise ModelError(f"b and m must be ints, got b={b!r} m={m!r}")
    if b < 2:
        raise ModelError(f"alphabet size b must be >= 2, got {b}")
    if m < 1:
        raise ModelError(f"hole length m must be >= 1, got {m}")
    return Params(b=b, m=m, verified=(b >= 3 and m >= 2))


def check_word(word: Word, p: Params, length: int | None = None) -> None:
    """Check digit range and, when given, exact length."""
    n = length if length is not None else len(word)
    if len(word) != n:
        raise ModelError(f"word {word} has length {len(word)}, expected {n}")
    if n < 1:
        raise ModelError("empty word")
    for d in word:
        if not isinstance(d, int) or not 0 <= d < p.b:
            raise ModelError(f"digit {d!r} out of range for b={p.b}")


def pack_word(word: Word, p: Params) -> int:
    """Base-b value of the word, most significant digit first."""
    v = 0
    for d in word:
        v = v * p.b + d
    return v


def unpack_word(value: int, length: int, p: Params) -> Word:
    """Inverse of pack_word for a known length."""
    if value < 0 or value >= p.b**length:
        raise ModelError(f"packed value {value} out of range for length {length}")
    digits = []
    for _ in range(length):
        digits.append(value % p.b)
        value //= p.b
    return tuple(reversed(digits))


def parse_word(text: str, p: Params) -> Word:
    """Parse digit-string word syntax.

    Single characters are digits; a digit >= 10 is written in decimal inside
    brackets, e.g. ``0[12]3``.
    """
    if not text:
        raise ModelError("empty word literal")
    digits: list[int] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c == "[":
            j = text.find("]", i)
            if j < 0:
                raise ModelError(f"unterminated '[' at index {i} in {text!r}")
            body = text[i + 1 : j]
            if not body.isdigit():
                raise ModelError(f"bad bracketed digit {body!r} in {text!r}")
            digits.append(int(body))
            i = j + 1
        elif c.isdigit():
            digits.append(int(c))
            i += 1
        else:
            raise ModelError(f"bad character {c!r} at index {i} in {text!r}")
    word = tuple(digits)
    check_word(word, p)
    return word


def format_word(word: Word) -> str:
    """Canonical text form; digits >= 10 are bracketed."""
    return "".join(str(d) if d < 10 else f"[{d}]" for d in word)
