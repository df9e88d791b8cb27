"""Exact homogeneous polynomial arithmetic in three variables over Q.

A polynomial is a sparse map from exponent triples (i, j, k) to rational
coefficients, with i + j + k equal to the total degree for every stored
term.  Homogeneity is structural: constructors reject mixed-degree input
instead of repairing it.  Coefficients are Python ints whenever the value
is integral and ``fractions.Fraction`` otherwise, which keeps arithmetic
exact and keeps the common all-integer paths on fast machine-int code.

The monomial order used for leading terms and canonical printing is
graded lexicographic with x > y > z.  Since every stored polynomial is
homogeneous, the grade is constant and the order reduces to lexicographic
comparison of (i, j).

GCD strategy: a cheap certificate first (restrict both inputs to a line
and take a one-variable integer gcd; if the restrictions are coprime the
inputs are), falling back to a recursive primitive pseudo-remainder
sequence that treats one variable as the main variable with coefficients
in the polynomial ring of the other two.  The fallback is exact and
complete; the certificate only ever short-circuits the answer "the gcd is
constant".
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, gcd as _igcd, lcm as _ilcm
from typing import Dict, Iterable, Mapping, Tuple, Union

from .errors import NonExactDivision

Coeff = Union[int, Fraction]
Expo = Tuple[int, int, int]

_VARS = ("x", "y", "z")

# Packed-key encoding for multiplication hot paths: (i, j) in one int,
# k implicit from the degree.  12 bits per slot is enough for any degree
# reachable under the composition caps (jacobians of capped maps included).
_SHIFT = 12
_MASK = (1 << _SHIFT) - 1


def _norm_coeff(c: Coeff) -> Coeff:
    if isinstance(c, bool) or not isinstance(c, (int, Fraction)):
        raise TypeError(f"exact coefficient required, got {type(c).__name__}")
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class HomPoly:
    """Immutable homogeneous polynomial in x, y, z with exact coefficients."""

    __slots__ = ("degree", "terms", "_hash")

    def __init__(self, terms: Union[Mapping[Expo, Coeff], Iterable[Tuple[Expo, Coeff]]],
                 degree: int = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: Dict[Expo, Coeff] = {}
        for expo, c in items:
            i, j, k = expo
            if i < 0 or j < 0 or k < 0:
                raise ValueError(f"negative exponent in {expo}")
            c = _norm_coeff(c)
            if c == 0:
                continue
            clean[(i, j, k)] = clean.get((i, j, k), 0) + c
        clean = {e: c for e, c in clean.items() if c != 0}
        if clean:
            degs = {sum(e) for e in clean}
            if len(degs) != 1:
                raise ValueError(f"mixed-degree terms: {sorted(degs)}")
            d = degs.pop()
            if degree is not None and degree != d:
                raise ValueError(f"declared degree {degree} != term degree {d}")
            object.__setattr__(self, "degree", d)
        else:
            object.__setattr__(self, "degree", 0 if degree is None else degree)
        object.__setattr__(self, "terms",
                           tuple(sorted(clean.items(), key=lambda t: (-t[0][0], -t[0][1]))))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("HomPoly is immutable")

    # -- basics ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> Dict[Expo, Coeff]:
        return dict(self.terms)

    def leading(self) -> Tuple[Expo, Coeff]:
        """Leading (exponent, coefficient) in graded lex order, x > y > z."""
        if self.is_zero:
            raise ValueError("zero polynomial has no leading term")
        return self.terms[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomPoly):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.terms)
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"HomPoly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)

    # -- arithmetic -----------------------------------------------------

    def __neg__(self) -> "HomPoly":
        return HomPoly([(e, -c) for e, c in self.terms], self.degree)

    def __add__(self, other: "HomPoly") -> "HomPoly":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return HomPoly(acc, self.degree)

    def __sub__(self, other: "HomPoly") -> "HomPoly":
        return self + (-other)

    def __mul__(self, other) -> "HomPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, HomPoly):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return HomPoly({}, self.degree + other.degree)
        out = _mul_packed(_pack(self.terms), _pack(other.terms))
        return _from_packed(out, self.degree + other.degree)

    __rmul__ = __mul__

    def scale(self, c: Coeff) -> "HomPoly":
        c = _norm_coeff(c)
        if c == 0:
            return HomPoly({}, self.degree)
        return HomPoly([(e, cc * c) for e, cc in self.terms], self.degree)

    def __pow__(self, n: int) -> "HomPoly":
        if n < 0:
            raise ValueError("negative power")
        result = HomPoly({(0, 0, 0): 1})
        for _ in range(n):
            result = result * self
        return result

    def derivative(self, var: int) -> "HomPoly":
        """Partial derivative with respect to variable index 0, 1 or 2."""
        out = {}
        for e, c in self.terms:
            if e[var] > 0:
                ne = list(e)
                ne[var] -= 1
                out[tuple(ne)] = c * e[var]
        return HomPoly(out, max(self.degree - 1, 0))

    def eval(self, coords) -> Coeff:
        """Substitution value at a coordinate triple (exact or float)."""
        x, y, z = coords
        d = self.degree
        px = _pow_table(x, d)
        py = _pow_table(y, d)
        pz = _pow_table(z, d)
        total = 0
        for (i, j, k), c in self.terms:
            total += c * px[i] * py[j] * pz[k]
        return total

    def monic(self) -> "HomPoly":
        if self.is_zero:
            return self
        lc = self.terms[0][1]
        if lc == 1:
            return self
        return self.scale(Fraction(1, 1) / lc)


def _pow_table(v, d):
    tab = [1] * (d + 1)
    for n in range(1, d + 1):
        tab[n] = tab[n - 1] * v
    return tab


# -- packed-dict kernels ------------------------------------------------


def _pack(terms) -> Dict[int, Coeff]:
    return {(e[0] << _SHIFT) | e[1]: c for e, c in terms}


def _mul_packed(A: Dict[int, Coeff], B: Dict[int, Coeff]) -> Dict[int, Coeff]:
    if len(A) > len(B):
        A, B = B, A
    out: Dict[int, Coeff] = {}
    get = out.get
    for ka, ca in A.items():
        for kb, cb in B.items():
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
    return out


def _from_packed(packed: Dict[int, Coeff], degree: int) -> HomPoly:
    terms = {}
    for key, c in packed.items():
        if c == 0:
            continue
        i = key >> _SHIFT
        j = key & _MASK
        terms[(i, j, degree - i - j)] = c
    return HomPoly(terms, degree)


# -- construction helpers ----------------------------------------------


def monomial(i: int, j: int, k: int, c: Coeff = 1) -> HomPoly:
    return HomPoly({(i, j, k): c})


X = monomial(1, 0, 0)
Y = monomial(0, 1, 0)
Z = monomial(0, 0, 1)
ONE = monomial(0, 0, 0)


# -- text format --------------------------------------------------------


def format_poly(p: HomPoly) -> str:
    """Canonical text form: signed monomial sum in graded lex order."""
    if p.is_zero:
        return "0"
    parts = []
    for (i, j, k), c in p.terms:
        factors = []
        ac = abs(c) if isinstance(c, int) else abs(c)
        if ac != 1 or (i == 0 and j == 0 and k == 0):
            factors.append(str(ac))
        for name, e in zip(_VARS, (i, j, k)):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mono = "*".join(factors)
        if not parts:
            parts.append(mono if c > 0 else f"-{mono}")
        else:
            parts.append(f" + {mono}" if c > 0 else f" - {mono}")
    return "".join(parts)


def parse_poly(text: str) -> HomPoly:
    """Parse the canonical text form back into a polynomial, bit-exactly."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial string")
    if s == "0":
        return HomPoly({})
    # split into signed chunks
    chunks = []
    current = ""
    for ch in s:
        if ch in "+-" and current and current[-1] not in "+-/*^":
            chunks.append(current)
            current = ch
        else:
            current += ch
    chunks.append(current)
    terms: Dict[Expo, Coeff] = {}
    for chunk in chunks:
        sign = 1
        body = chunk
        while body and body[0] in "+-":
            if body[0] == "-":
                sign = -sign
            body = body[1:]
        if not body:
            raise ValueError(f"dangling sign in {text!r}")
        coeff: Coeff = 1
        expo = [0, 0, 0]
        for factor in body.split("*"):
            if not factor:
                raise ValueError(f"empty factor in {text!r}")
            if factor[0].isdigit():
                if "/" in factor:
                    num, den = factor.split("/")
                    coeff = coeff * Fraction(int(num), int(den))
                else:
                    coeff = coeff * int(factor)
            else:
                name = factor[0]
                if name not in _VARS:
                    raise ValueError(f"unknown variable {name!r} in {text!r}")
                e = 1
                rest = factor[1:]
                if rest:
                    if not rest.startswith("^"):
                        raise ValueError(f"bad factor {factor!r} in {text!r}")
                    e = int(rest[1:])
                expo[_VARS.index(name)] += e
        key = tuple(expo)
        terms[key] = terms.get(key, 0) + sign * coeff
    return HomPoly(terms)


# -- division -----------------------------------------------------------


def _expo_divides(a: Expo, b: Expo) -> bool:
    return a[0] <= b[0] and a[1] <= b[1] and a[2] <= b[2]


def div_exact(a: HomPoly, b: HomPoly) -> HomPoly:
    """Exact quotient a / b; raises NonExactDivision when b does not divide a."""
    if b.is_zero:
        raise ZeroDivisionError("division by zero polynomial")
    if a.is_zero:
        return HomPoly({}, max(a.degree - b.degree, 0))
    if b.degree > a.degree:
        raise NonExactDivision(f"degree {b.degree} does not divide degree {a.degree} form")
    rem = a.as_dict()
    (be, bc) = b.leading()
    bterms = b.terms
    quot: Dict[Expo, Coeff] = {}
    while rem:
        re = max(rem, key=lambda e: (e[0], e[1]))
        rc = rem[re]
        if not _expo_divides(be, re):
            raise NonExactDivision(f"{format_poly(b)} does not divide {format_poly(a)}")
        qe = (re[0] - be[0], re[1] - be[1], re[2] - be[2])
        qc = _norm_coeff(Fraction(rc) / Fraction(bc))
        quot[qe] = qc
        for e, c in bterms:
            t = (e[0] + qe[0], e[1] + qe[1], e[2] + qe[2])
            nv = rem.get(t, 0) - qc * c
            if nv == 0:
                rem.pop(t, None)
            else:
                rem[t] = nv
    return HomPoly(quot, a.degree - b.degree)


# -- gcd: fast coprimality certificate ---------------------------------


def _restrict(p: HomPoly, line: str):
    """Restrict to a parametrized line; returns int coefficient list or None.

    The result is the binary form of the restriction, as coefficients of
    s^a t^(d-a) indexed by a, scaled to integers.  None means the
    restriction is identically zero (the line divides p).
    """
    d = p.degree
    arr = [Fraction(0)] * (d + 1)
    for (i, j, k), c in p.terms:
        if line == "z0":
            if k == 0:
                arr[i] += c
        elif line == "y0":
            if j == 0:
                arr[i] += c
        elif line == "x0":
            if i == 0:
                arr[j] += c
        elif line == "z=x":
            arr[i + k] += c
        elif line == "z=y":
            arr[i] += c
        elif line == "y=x":
            arr[i + j] += c
        elif line == "z=x+2y":
            for t in range(k + 1):
                arr[i + t] += c * comb(k, t) * (2 ** (k - t))
        else:
            raise ValueError(line)
    if all(v == 0 for v in arr):
        return None
    den = _ilcm(*[v.denominator for v in arr])
    return [int(v * den) for v in arr]


_CERT_LINES = ("z0", "y0", "x0", "z=x", "z=y", "y=x", "z=x+2y")


def _intpoly_norm(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _intpoly_content(a):
    g = 0
    for v in a:
        g = _igcd(g, abs(v))
        if g == 1:
            return 1
    return g


def _intpoly_gcd(a, b):
    """Primitive-PRS gcd of one-variable integer polynomials (lists, low to high)."""
    a = _intpoly_norm(list(a))
    b = _intpoly_norm(list(b))
    if not a:
        return b
    if not b:
        return a
    ca, cb = _intpoly_content(a), _intpoly_content(b)
    a = [v // ca for v in a]
    b = [v // cb for v in b]
    while True:
        if len(a) < len(b):
            a, b = b, a
        # pseudo-remainder of a by b
        r = list(a)
        lb = b[-1]
        while len(r) >= len(b) and _intpoly_norm(r):
            shift = len(r) - len(b)
            lr = r[-1]
            r = [v * lb for v in r]
            for i, bv in enumerate(b):
                r[i + shift] -= lr * bv
            r = _intpoly_norm(r)
        if not r:
            g = _igcd(ca, cb)
            res = [v * g // _intpoly_content(b) for v in b]
            return res if res[-1] > 0 else [-v for v in res]
        c = _intpoly_content(r)
        a, b = b, [v // c for v in r]
        if len(b) == 1:
            return [_igcd(ca, cb)]


def _coprime_on_line(polys, line: str):
    """True if the restrictions to the line certify a constant gcd; None if no verdict."""
    arrs = []
    for p in polys:
        arr = _restrict(p, line)
        if arr is None:
            return None  # line divides this input; no information
        arrs.append(arr)
    # common root at the t=0 end of the parametrization
    if all(arr[-1] == 0 for arr in arrs):
        return None
    g = arrs[0]
    for arr in arrs[1:]:
        g = _intpoly_gcd(g, arr)
        if len(g) == 1:
            return True
    return None if len(g) > 1 else True


def certainly_coprime(*polys: HomPoly) -> bool:
    """Sound fast check that nonzero inputs have constant gcd.

    False only means "not certified here"; callers fall back to the full gcd.
    """
    ps = [p for p in polys if not p.is_zero]
    if len(ps) < 2:
        return False
    for v in (0, 1, 2):
        if all(min(e[v] for e, _ in p.terms) > 0 for p in ps):
            return False  # shared monomial factor
    for line in _CERT_LINES:
        verdict = _coprime_on_line(ps, line)
        if verdict:
            return True
    return False


# -- gcd: recursive primitive PRS fallback ------------------------------


def _dict_degv(A: Dict[Expo, Coeff], v: int) -> int:
    return max(e[v] for e in A)


def _dict_mul(A, B):
    out: Dict[Expo, Coeff] = {}
    get = out.get
    for ea, ca in A.items():
        for eb, cb in B.items():
            e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])
            out[e] = get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c != 0}


def _dict_sub(A, B):
    out = dict(A)
    for e, c in B.items():
        nv = out.get(e, 0) - c
        if nv == 0:
            out.pop(e, None)
        else:
            out[e] = nv
    return out


def _dict_shift(A, v: int, n: int):
    out = {}
    for e, c in A.items():
        ne = list(e)
        ne[v] += n
        out[tuple(ne)] = c
    return out


def _v_lead(A, v: int):
    """(degree in v, coefficient dict with the v-exponent zeroed)."""
    dv = _dict_degv(A, v)
    lead = {}
    for e, c in A.items():
        if e[v] == dv:
            ne = list(e)
            ne[v] = 0
            lead[tuple(ne)] = c
    return dv, lead


def _prem(A, B, v):
    """Pseudo-remainder of A by B in the main variable v."""
    db, lb = _v_lead(B, v)
    r = dict(A)
    while r:
        dr, lr = _v_lead(r, v)
        if dr < db:
            break
        r = _dict_sub(_dict_mul(lb, r), _dict_mul(_dict_shift(lr, v, dr - db), B))
    return r

def _rat_normalize(A):
    """Scale to integer coefficients with content 1 and positive grlex lead."""
    if not A:
        return A
    den = 1
    for c in A.values():
        if isinstance(c, Fraction):
            den = _ilcm(den, c.denominator)
    num = 0
    for c in A.values():
        num = _igcd(num, abs(int(c * den)) if isinstance(c, Fraction) else abs(c * den))
    scale = Fraction(den, num)
    out = {e: _norm_coeff(c * scale) for e, c in A.items()}
    lead = max(out, key=lambda e: (sum(e), e[0], e[1]))
    if out[lead] < 0:
        out = {e: -c for e, c in out.items()}
    return out


def _content(A, v):
    """Gcd of the v-level coefficient dicts (a polynomial without v)."""
    levels: Dict[int, Dict[Expo, Coeff]] = {}
    for e, c in A.items():
        ne = list(e)
        n = ne[v]
        ne[v] = 0
        levels.setdefault(n, {})[tuple(ne)] = c
    g: Dict[Expo, Coeff] = {}
    for sub in levels.values():
        g = _gcd_dict(g, sub)
        if g and max(sum(e) for e in g) == 0:
            return {(0, 0, 0): 1}
    return g


def _dict_div_exact(A, B):
    """Exact division for possibly non-homogeneous dicts (gcd internals)."""
    if not B:
        raise ZeroDivisionError
    rem = dict(A)
    quot: Dict[Expo, Coeff] = {}
    bl = max(B, key=lambda e: (sum(e), e[0], e[1]))
    bc = B[bl]
    while rem:
        rl = max(rem, key=lambda e: (sum(e), e[0], e[1]))
        rc = rem[rl]
        if not _expo_divides(bl, rl):
            raise NonExactDivision("inexact division inside gcd")
        qe = (rl[0] - bl[0], rl[1] - bl[1], rl[2] - bl[2])
        qc = _norm_coeff(Fraction(rc) / Fraction(bc))
        quot[qe] = qc
        for e, c in B.items():
            t = (e[0] + qe[0], e[1] + qe[1], e[2] + qe[2])
            nv = rem.get(t, 0) - qc * c
            if nv == 0:
                rem.pop(t, None)
            else:
                rem[t] = nv
    return quot


def _gcd_dict(A: Dict[Expo, Coeff], B: Dict[Expo, Coeff]) -> Dict[Expo, Coeff]:
    if not A:
        return _rat_normalize(dict(B)) if B else {}
    if not B:
        return _rat_normalize(dict(A))
    # split off monomial content
    mono = [0, 0, 0]
    for v in (0, 1, 2):
        mono[v] = min(min(e[v] for e in A), min(e[v] for e in B))
    shiftA = [-min(e[v] for e in A) for v in (0, 1, 2)]
    shiftB = [-min(e[v] for e in B) for v in (0, 1, 2)]
    A = {(e[0] + shiftA[0], e[1] + shiftA[1], e[2] + shiftA[2]): c for e, c in A.items()}
    B = {(e[0] + shiftB[0], e[1] + shiftB[1], e[2] + shiftB[2]): c for e, c in B.items()}

    def attach_mono(G):
        return {(e[0] + mono[0], e[1] + mono[1], e[2] + mono[2]): c for e, c in G.items()}

    if max(sum(e) for e in A) == 0 or max(sum(e) for e in B) == 0:
        return attach_mono({(0, 0, 0): 1})
    present = [v for v in (0, 1, 2) if _dict_degv(A, v) > 0 or _dict_degv(B, v) > 0]
    both = [v for v in present if _dict_degv(A, v) > 0 and _dict_degv(B, v) > 0]
    if not both:
        return attach_mono({(0, 0, 0): 1})
    v = min(both, key=lambda w: min(_dict_degv(A, w), _dict_degv(B, w)))
    if _dict_degv(A, v) < _dict_degv(B, v):
        A, B = B, A
    ca = _content(A, v)
    cb = _content(B, v)
    gc = _gcd_dict(ca, cb)
    pa = _dict_div_exact(A, ca)
    pb = _dict_div_exact(B, cb)
    while True:
        r = _prem(pa, pb, v)
        if not r:
            g = pb
            break
        if _dict_degv(r, v) == 0:
            g = {(0, 0, 0): 1}
            break
        r = _rat_normalize(_dict_div_exact(r, _content(r, v)))
        pa, pb = pb, r
    result = _dict_mul(attach_mono(gc), g)
    return _rat_normalize(result)


def poly_gcd(a: HomPoly, b: HomPoly) -> HomPoly:
    """Greatest common divisor, normalized to leading coefficient 1."""
    if a.is_zero and b.is_zero:
        return HomPoly({})
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    if certainly_coprime(a, b):
        return ONE
    g = _gcd_dict(a.as_dict(), b.as_dict())
    return HomPoly(g).monic()


def triple_gcd(f0: HomPoly, f1: HomPoly, f2: HomPoly) -> HomPoly:
    """Gcd of a component triple, with the fast certificate tried on all three."""
    nz = [p for p in (f0, f1, f2) if not p.is_zero]
    if not nz:
        return HomPoly({})
    if len(nz) >= 2 and certainly_coprime(*nz):
        return ONE
    g = nz[0].monic()
    for p in nz[1:]:
        if g == ONE:
            return g
        g = poly_gcd(g, p)
    return g


# -- calculus-flavoured operations --------------------------------------


def jacobian_det(f0: HomPoly, f1: HomPoly, f2: HomPoly) -> HomPoly:
    """Determinant of the matrix of partial derivatives of a component triple."""
    rows = [[f.derivative(v) for v in (0, 1, 2)] for f in (f0, f1, f2)]
    m00, m01, m02 = rows[0]
    m10, m11, m12 = rows[1]
    m20, m21, m22 = rows[2]
    det = (m00 * (m11 * m22 - m12 * m21)
           - m01 * (m10 * m22 - m12 * m20)
           + m02 * (m10 * m21 - m11 * m20))
    return det


def is_squarefree(p: HomPoly) -> bool:
    """True when p shares no factor with its three partial derivatives."""
    if p.is_zero:
        return False
    if p.degree == 0:
        return True
    g = p.monic()
    for v in (0, 1, 2):
        g = poly_gcd(g, p.derivative(v))
        if g.degree == 0:
            return True
    return g.degree == 0


def multiplicity_at(p: HomPoly, coords: Tuple[int, int, int]) -> int:
    """Vanishing order of p at an exact projective point.

    Works in the affine chart of the first nonzero coordinate; the order is
    the least total order of a mixed partial (in the two chart variables)
    that does not vanish at the point, which equals the minimal degree of
    the translated local expansion.
    """
    if p.is_zero:
        raise ValueError("multiplicity of the zero polynomial is undefined")
    if all(c == 0 for c in coords):
        raise ValueError("not a projective point")
    chart = next(v for v in (0, 1, 2) if coords[v] != 0)
    u, w = [v for v in (0, 1, 2) if v != chart]
    d = p.degree
    pows = [_pow_table(c, d) for c in coords]

    def _eval(dct) -> bool:
        total = 0
        for (i, j, k), c in dct.items():
            total += c * pows[0][i] * pows[1][j] * pows[2][k]
        return total != 0

    def _deriv(dct, v):
        out = {}
        for e, c in dct.items():
            if e[v] > 0:
                ne = list(e)
                ne[v] -= 1
                out[tuple(ne)] = c * e[v]
        return out

    frontier = {(0, 0): p.as_dict()}
    for order in range(d + 1):
        for dct in frontier.values():
            if dct and _eval(dct):
                return order
        nxt = {}
        for (a, b), dct in frontier.items():
            if (a + 1, b) not in nxt:
                nxt[(a + 1, b)] = _deriv(dct, u)
            if (a, b + 1) not in nxt:
                nxt[(a, b + 1)] = _deriv(dct, w)
        frontier = nxt
    raise AssertionError("nonzero form with no nonvanishing partial")
