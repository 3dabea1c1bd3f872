"""Complex noncommutative polynomials, quadratic ideals, and their DSL.

A monomial is a word of 1-based variable indices; the empty word is the
scalar monomial.  Polynomials are stored as {word: coefficient} maps with
no zero coefficients.  Vectorisation is lexicographic on words, matching
the Kronecker convention of the subspace module: the word (a_1, ..., a_n)
maps to coordinate sum((a_k - 1) * d**(n - k)).

DSL grammar (whitespace-insensitive)::

    poly     := ['+'|'-'] term (('+'|'-') term)*
    term     := [scalar '*'] monomial | scalar
    monomial := var ('*' var)*
    scalar   := '(' float ('+'|'-') float 'i' ')' | float
    var      := declared identifier

Input files carry a ``vars:`` line followed by a ``relations:`` block with
one polynomial per line; ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyAlphabet,
    NotHomogeneous,
    ParseError,
    UnknownVariable,
    ZeroPolynomial,
)

Word = tuple[int, ...]

_COEFF_EPS = 0.0  # coefficients are dropped only when exactly zero


@dataclass(frozen=True)
class NCPoly:
    """A polynomial in noncommuting variables X_1 .. X_d over the complexes."""

    terms: dict[Word, complex]
    nvars: int

    def __post_init__(self):
        if self.nvars < 1:
            raise EmptyAlphabet("need at least one variable")
        for word, coeff in self.terms.items():
            if coeff == 0:
                raise ValueError("stored zero coefficient")
            if any(not (1 <= a <= self.nvars) for a in word):
                raise UnknownVariable(f"index out of range in word {word}")

    @staticmethod
    def from_terms(terms: dict[Word, complex], nvars: int) -> "NCPoly":
        cleaned = {tuple(w): complex(c) for w, c in terms.items() if c != 0}
        return NCPoly(cleaned, nvars)

    @staticmethod
    def zero(nvars: int) -> "NCPoly":
        return NCPoly({}, nvars)

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        lengths = {len(w) for w in self.terms}
        return len(lengths) <= 1

    def degree(self) -> int:
        """Degree of a homogeneous polynomial (0 for the zero polynomial)."""
        if not self.terms:
            return 0
        lengths = {len(w) for w in self.terms}
        if len(lengths) > 1:
            raise NotHomogeneous(f"mixed degrees {sorted(lengths)}")
        return lengths.pop()

    def __add__(self, other: "NCPoly") -> "NCPoly":
        if self.nvars != other.nvars:
            raise ValueError("polynomials over different alphabets")
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return NCPoly.from_terms(out, self.nvars)

    def __neg__(self) -> "NCPoly":
        return NCPoly({w: -c for w, c in self.terms.items()}, self.nvars)

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def scale(self, factor: complex) -> "NCPoly":
        return NCPoly.from_terms({w: factor * c for w, c in self.terms.items()}, self.nvars)


def word_index(word: Word, d: int) -> int:
    """Lexicographic coordinate of a word inside the d**len(word) basis."""
    idx = 0
    for a in word:
        idx = idx * d + (a - 1)
    return idx


def index_word(idx: int, d: int, n: int) -> Word:
    out = []
    for _ in range(n):
        out.append(idx % d + 1)
        idx //= d
    return tuple(reversed(out))


def poly_to_vector(p: NCPoly, degree: int) -> np.ndarray:
    """Coefficient vector of a homogeneous polynomial in C^(d**degree)."""
    if not p.is_homogeneous() or (p.terms and p.degree() != degree):
        raise NotHomogeneous(f"not homogeneous of degree {degree}")
    d = p.nvars
    vec = np.zeros(d**degree, dtype=complex)
    for word, coeff in p.terms.items():
        vec[word_index(word, d)] = coeff
    return vec


def vector_to_poly(vec: np.ndarray, nvars: int, degree: int) -> NCPoly:
    vec = np.asarray(vec, dtype=complex).ravel()
    if vec.size != nvars**degree:
        raise ValueError(f"vector length {vec.size} != {nvars}**{degree}")
    terms = {}
    for idx in np.flatnonzero(vec):
        terms[index_word(int(idx), nvars, degree)] = complex(vec[idx])
    return NCPoly(terms, nvars)


def coeff_matrix(p: NCPoly) -> np.ndarray:
    """d x d matrix A with A[i-1, j-1] the coefficient of X_i X_j."""
    if p.is_zero():
        raise ZeroPolynomial("zero polynomial has no coefficient matrix")
    if p.degree() != 2:
        raise NotHomogeneous("coefficient matrix requires degree exactly 2")
    return poly_to_vector(p, 2).reshape(p.nvars, p.nvars)


def matrix_to_poly(a: np.ndarray) -> NCPoly:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    return vector_to_poly(a.ravel(), a.shape[0], 2)


@dataclass(frozen=True)
class QuadraticIdeal:
    """A finite set of homogeneous degree-2 generators over a common alphabet."""

    generators: tuple[NCPoly, ...]
    nvars: int

    def __post_init__(self):
        if self.nvars < 1:
            raise EmptyAlphabet("need at least one variable")
        for g in self.generators:
            if g.nvars != self.nvars:
                raise ValueError("generator over a different alphabet")
            if g.is_zero():
                raise ZeroPolynomial("zero generator in ideal")
            if g.degree() != 2:
                raise NotHomogeneous("ideal generators must have degree exactly 2")

    @staticmethod
    def from_polys(gens, nvars: int) -> "QuadraticIdeal":
        return QuadraticIdeal(tuple(gens), nvars)

    def generator_vectors(self) -> np.ndarray:
        """Generators as columns of a d**2 x k matrix (k may be 0)."""
        d = self.nvars
        if not self.generators:
            return np.zeros((d * d, 0), dtype=complex)
        return np.column_stack([poly_to_vector(g, 2) for g in self.generators])


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[+\-*()])
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, alphabet: list[str]):
        if not alphabet:
            raise EmptyAlphabet("empty alphabet")
        if len(set(alphabet)) != len(alphabet):
            raise ValueError("duplicate variable names")
        self.vars = {name: i + 1 for i, name in enumerate(alphabet)}
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.next()
        if tok[0] != kind or (value is not None and tok[1] != value):
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2], expected=value or kind)
        return tok

    def parse_poly(self) -> dict[Word, complex]:
        terms: dict[Word, complex] = {}
        sign = 1
        kind, value, _ = self.peek()
        if kind == "op" and value in "+-":
            self.next()
            sign = -1 if value == "-" else 1
        self._accumulate_term(terms, sign)
        while True:
            kind, value, pos = self.peek()
            if kind == "eof":
                break
            if kind != "op" or value not in "+-":
                raise ParseError(f"unexpected token {value!r}", pos, expected="'+' or '-'")
            self.next()
            self._accumulate_term(terms, -1 if value == "-" else 1)
        return {w: c for w, c in terms.items() if c != 0}

    def _accumulate_term(self, terms, sign):
        word, coeff = self.parse_term()
        terms[word] = terms.get(word, 0) + sign * coeff

    def parse_term(self) -> tuple[Word, complex]:
        kind, value, pos = self.peek()
        if kind == "number" or (kind == "op" and value == "("):
            coeff = self.parse_scalar()
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.next()
                return self.parse_monomial(), coeff
            return (), coeff
        if kind == "ident":
            return self.parse_monomial(), 1.0
        raise ParseError(f"unexpected token {value!r}", pos, expected="term")

    def parse_scalar(self) -> complex:
        kind, value, pos = self.peek()
        if kind == "number":
            self.next()
            return complex(float(value))
        # '(' float ('+'|'-') float 'i' ')'
        self.expect("op", "(")
        real = self._signed_float()
        kind, value, pos = self.next()
        if kind != "op" or value not in "+-":
            raise ParseError(f"unexpected token {value!r}", pos, expected="'+' or '-'")
        imag = self._float()
        if value == "-":
            imag = -imag
        tok = self.next()
        if tok[0] != "ident" or tok[1] != "i":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2], expected="'i'")
        self.expect("op", ")")
        return complex(real, imag)

    def _signed_float(self) -> float:
        kind, value, _ = self.peek()
        sign = 1.0
        if kind == "op" and value in "+-":
            self.next()
            sign = -1.0 if value == "-" else 1.0
        return sign * self._float()

    def _float(self) -> float:
        tok = self.next()
        if tok[0] != "number":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2], expected="number")
        return float(tok[1])

    def parse_monomial(self) -> Word:
        word = [self._var()]
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.next()
                word.append(self._var())
            else:
                break
        return tuple(word)

    def _var(self) -> int:
        tok = self.next()
        if tok[0] != "ident":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2], expected="variable")
        if tok[1] not in self.vars:
            raise UnknownVariable(tok[1], position=tok[2])
        return self.vars[tok[1]]


def parse_poly(text: str, alphabet: list[str]) -> NCPoly:
    """Parse a polynomial in the DSL over the given ordered variable names."""
    parser = _Parser(text, list(alphabet))
    terms = parser.parse_poly()
    return NCPoly(terms, len(alphabet))


def render_poly(p: NCPoly, alphabet: list[str] | None = None) -> str:
    """Render so that parse_poly(render_poly(p)) == p."""
    if alphabet is None:
        alphabet = [f"x{i}" for i in range(1, p.nvars + 1)]
    if len(alphabet) != p.nvars:
        raise ValueError("alphabet size mismatch")
    if not p.terms:
        return "0"
    parts = []
    for word in sorted(p.terms, key=lambda w: (len(w), w)):
        coeff = p.terms[word]
        mono = "*".join(alphabet[a - 1] for a in word)
        if coeff.imag == 0:
            real = coeff.real
            sign = "-" if real < 0 else "+"
            mag = -real if real < 0 else real
            if not word:
                body = repr(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag!r}*{mono}"
        else:
            sign = "+"
            scalar = f"({coeff.real!r}{'+' if coeff.imag >= 0 else '-'}{abs(coeff.imag)!r}i)"
            body = scalar if not word else f"{scalar}*{mono}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# ideal files
# ---------------------------------------------------------------------------


def parse_ideal_source(text: str) -> tuple[list[str], QuadraticIdeal]:
    """Parse a ``vars:``/``relations:`` file into (names, ideal).

    Raises ParseError with a 1-based line number encoded in the message for
    malformed input; relation lines must be homogeneous of degree 2.
    """
    names: list[str] | None = None
    relations: list[NCPoly] = []
    in_relations = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("vars:"):
            if names is not None:
                raise ParseError(f"line {lineno}: duplicate vars section", lineno)
            payload = line[5:].replace(",", " ").split()
            if not payload:
                raise ParseError(f"line {lineno}: empty vars list", lineno)
            names = payload
            continue
        if line.lower().startswith("relations:"):
            if names is None:
                raise ParseError(f"line {lineno}: relations before vars", lineno)
            in_relations = True
            rest = line[10:].strip()
            if rest:
                relations.append(_parse_relation(rest, names, lineno))
            continue
        if not in_relations:
            raise ParseError(f"line {lineno}: expected vars/relations header", lineno)
        relations.append(_parse_relation(line, names, lineno))
    if names is None:
        raise ParseError("missing vars section", 0)
    return names, QuadraticIdeal.from_polys(relations, len(names))


def _parse_relation(line: str, names: list[str], lineno: int) -> NCPoly:
    try:
        poly = parse_poly(line, names)
    except ParseError as exc:
        raise ParseError(f"line {lineno}: {exc}", lineno) from exc
    if poly.is_zero():
        raise ZeroPolynomial(f"line {lineno}: zero relation")
    if poly.degree() != 2:
        raise NotHomogeneous(f"line {lineno}: relation must be homogeneous of degree 2")
    return poly
