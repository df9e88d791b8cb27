"""Certification that a generator tuple behaves freely up to a word length.

The certificate enumerates every reduced word over the letters (each
generator and its inverse, with no letter immediately followed by its
formal inverse) and verifies on each that the algebraic degree doubles
per letter, in two independent ways at once:

* polynomial side: the composed component triple, with the common factor
  composition creates stripped, has degree exactly 2^length;
* class side: the pushforward of the line class along the word has line
  coefficient exactly 2^length, which by adjunction equals the
  intersection of the pulled-back line class with the line class.

The polynomial side runs over a prime field: because every component is
homogeneous, a nonzero reduction keeps its exact degree and any common
factor over the rationals survives reduction with its degree intact, so
"reduced triple is nonzero and coprime mod p" is a sound certificate
that the exact stripped degree is the full 2^length.  Words where the
fast check cannot certify (a genuine degree drop, or the rare prime
mishap) are recomposed exactly over the integers and judged on the true
triple.  Class transport degeneracies and degree drops on either side
are recorded in the report; the tree is pruned below a failing word but
sibling branches keep being checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import DegenerateComposition, DegenerateConfiguration
from .maps import Components, GeneratorData, IDENTITY_COMPONENTS, Mat3, compose_letter
from .picard import OperatorCache, PointRegistry, WeilClass

Letter = Tuple[int, int]  # (generator index, sign)
Word = Tuple[Letter, ...]

# Modulus for the fast path.  Small enough that a full accumulation of
# (d+2 choose 2) coefficient products stays inside int64, large enough
# that spurious vanishing is rare; spurious events only cost an exact
# recheck, never soundness.
_P = 1048573


@dataclass(frozen=True)
class WordCheck:
    """One failed word with what each side reported."""

    word: Word
    expected_degree: int
    poly_degree: Optional[int]
    class_degree: Optional[int]
    reason: str


@dataclass(frozen=True)
class GenericityReport:
    max_len: int
    generator_count: int
    words_checked: int
    distinct_points_ok: bool
    failures: Tuple[WordCheck, ...]

    @property
    def ok(self) -> bool:
        return self.distinct_points_ok and not self.failures


def reduced_word_count(generator_count: int, max_len: int) -> int:
    """Number of nonempty reduced words up to the given length."""
    n = 2 * generator_count
    total = 0
    block = n
    for _ in range(max_len):
        total += block
        block *= n - 1
    return total


def _inverse_letter(letter: Letter) -> Letter:
    return (letter[0], -letter[1])


def all_letters(generator_count: int) -> Tuple[Letter, ...]:
    out = []
    for i in range(generator_count):
        out.append((i, 1))
        out.append((i, -1))
    return tuple(out)


# -- dense mod-p component triples --------------------------------------
# A component of degree d is an int64 array A with A[i, j] holding the
# coefficient of x^i y^j z^(d-i-j); the k-exponent is implicit.


def _identity_arrs():
    ax = np.zeros((2, 2), dtype=np.int64)
    ay = np.zeros((2, 2), dtype=np.int64)
    az = np.zeros((2, 2), dtype=np.int64)
    ax[1, 0] = 1
    ay[0, 1] = 1
    az[0, 0] = 1
    return (ax, ay, az), 1


def _modp_combo(row, arrs, d):
    out = np.zeros((d + 1, d + 1), dtype=np.int64)
    for c, A in zip(row, arrs):
        if c:
            out += (c % _P) * A
    return out % _P


def _modp_mul(A, B, dA, dB):
    out = np.zeros((dA + dB + 1, dA + dB + 1), dtype=np.int64)
    if np.count_nonzero(A) > np.count_nonzero(B):
        A, B = B, A
        dA, dB = dB, dA
    h = dB + 1
    I, J = np.nonzero(A)
    vals = A[I, J]
    for i, j, c in zip(I.tolist(), J.tolist(), vals.tolist()):
        out[i:i + h, j:j + h] += c * B
    return out % _P


def _modp_letter(a_rows: Mat3, b_rows: Mat3, arrs, d):
    t = [_modp_combo(b_rows[i], arrs, d) for i in range(3)]
    s = (_modp_mul(t[1], t[2], d, d),
         _modp_mul(t[0], t[2], d, d),
         _modp_mul(t[0], t[1], d, d))
    out = tuple(_modp_combo(a_rows[i], s, 2 * d) for i in range(3))
    return out, 2 * d


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _modp_gcd(u: list, v: list) -> list:
    """Gcd of univariate coefficient lists (low to high) over the prime field."""
    u = _trim([x % _P for x in u])
    v = _trim([x % _P for x in v])
    while v:
        if len(u) < len(v):
            u, v = v, u
            continue
        inv = pow(v[-1], _P - 2, _P)
        r = list(u)
        while len(r) >= len(v):
            f = (r[-1] * inv) % _P
            off = len(r) - len(v)
            if f:
                for idx, bv in enumerate(v):
                    r[idx + off] = (r[idx + off] - f * bv) % _P
            r.pop()
            _trim(r)
        u, v = v, _trim(r)
    return u if u else [0]


_CERT_LINES = ("z0", "y0", "x0", "z=x", "z=y", "y=x")


def _restrict_modp(A, d, line):
    if line == "z0":
        idx = np.arange(d + 1)
        return A[idx, d - idx]
    if line == "y0":
        return A[:, 0]
    if line == "x0":
        return A[0, :]
    if line == "z=x":
        return A.sum(axis=0)[::-1] % _P
    if line == "z=y":
        return A.sum(axis=1) % _P
    if line == "y=x":
        f = np.fliplr(A)
        return np.array([np.trace(f, offset=d - s) for s in range(d + 1)],
                        dtype=np.int64) % _P
    raise ValueError(line)


def _modp_coprime(arrs, d) -> bool:
    """True certifies the exact triple is coprime; False is merely no verdict."""
    for line in _CERT_LINES:
        rs = []
        informative = True
        for A in arrs:
            r = [int(x) for x in _restrict_modp(A, d, line)]
            if not any(r):
                informative = False
                break
            rs.append(r)
        if not informative:
            continue
        if all(r[d] == 0 for r in rs):
            continue  # the restrictions share the line's point at infinity
        g = rs[0]
        for other in rs[1:]:
            g = _modp_gcd(g, other)
            if len(g) == 1:
                return True
        if len(g) == 1:
            return True
    return False


def _modp_step(gen: GeneratorData, sign: int, arrs, d):
    """Fast certified step; None when the fast path cannot certify."""
    a_rows, b_rows = gen.letter_matrices(sign)
    new_arrs, nd = _modp_letter(a_rows, b_rows, arrs, d)
    if any(not A.any() for A in new_arrs):
        return None
    if not _modp_coprime(new_arrs, nd):
        return None
    return new_arrs, nd


def _exact_word_components(gens, word: Word) -> Components:
    comps = IDENTITY_COMPONENTS
    for letter in reversed(word):
        comps = compose_letter(*gens[letter[0]].letter_matrices(letter[1]), comps)
    return comps


def _arrs_from_components(comps: Components):
    d = next(p.degree for p in comps if not p.is_zero)
    arrs = []
    for p in comps:
        A = np.zeros((d + 1, d + 1), dtype=np.int64)
        for (i, j, _k), c in p.terms:
            A[i, j] = int(c) % _P
        arrs.append(A)
    return tuple(arrs), d


# -- the certification tree ---------------------------------------------


def check_genericity(gens: Tuple[GeneratorData, ...], max_len: int,
                     failure_cap: int = 20) -> GenericityReport:
    """Walk the reduced-word tree and certify free degree growth on it."""
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    pts = [p for g in gens for p in g.base_pts + g.inv_base_pts]
    distinct_ok = len(set(pts)) == 6 * len(gens)
    registry = PointRegistry("exact")
    cache = OperatorCache(tuple(gens), registry)
    letters = all_letters(len(gens))
    failures: List[WordCheck] = []
    checked = 0

    def visit(word: Word, arrs, d: int, push: WeilClass) -> None:
        nonlocal checked
        for letter in letters:
            if len(failures) >= failure_cap:
                return
            if word and letter == _inverse_letter(word[0]):
                continue
            new_word = (letter,) + word
            expected = 2 ** len(new_word)
            checked += 1
            transport_fail = None
            class_degree = None
            new_push = None
            try:
                # prepending the letter pushes the class forward once
                # more; pushforward is pullback by the opposite sign
                new_push = cache.get(letter[0], -letter[1]).pullback(push)
                class_degree = new_push.line_coeff
            except DegenerateConfiguration as exc:
                transport_fail = str(exc)
            fast = None
            if transport_fail is None and class_degree == expected:
                fast = _modp_step(gens[letter[0]], letter[1], arrs, d)
            if fast is None:
                # adjudicate this word exactly over the integers
                try:
                    comps = _exact_word_components(gens, new_word)
                    poly_degree = next(p.degree for p in comps if not p.is_zero)
                except (DegenerateComposition, DegenerateConfiguration) as exc:
                    failures.append(WordCheck(
                        new_word, expected, None, class_degree,
                        f"exact composition failed: {exc}"))
                    continue
                if transport_fail is not None:
                    failures.append(WordCheck(
                        new_word, expected, poly_degree, None,
                        f"class transport degenerated: {transport_fail}"))
                    continue
                if poly_degree != expected and class_degree != expected:
                    failures.append(WordCheck(
                        new_word, expected, poly_degree, class_degree,
                        "degree dropped on both sides"))
                    continue
                if poly_degree != expected:
                    failures.append(WordCheck(
                        new_word, expected, poly_degree, class_degree,
                        "polynomial degree dropped"))
                    continue
                if class_degree != expected:
                    failures.append(WordCheck(
                        new_word, expected, poly_degree, class_degree,
                        "class-side degree dropped"))
                    continue
                # rare prime mishap: the exact triple is fine, reseed and go on
                fast = _arrs_from_components(comps)
            new_arrs, nd = fast
            if len(new_word) < max_len:
                visit(new_word, new_arrs, nd, new_push)

    start_arrs, start_d = _identity_arrs()
    visit((), start_arrs, start_d, WeilClass.line_class())
    return GenericityReport(
        max_len=max_len,
        generator_count=len(gens),
        words_checked=checked,
        distinct_points_ok=distinct_ok,
        failures=tuple(failures),
    )
