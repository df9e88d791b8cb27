"""Classes over the tower of all blowups, and how letters act on them.

A class is stored as ``line_coeff * [line] - sum point_part[p] * [exc_p]``
over point ids issued by a registry.  The intersection pairing in these
coordinates is ``line_coeff * line_coeff' - sum point_part * point_part'``
over shared ids.  Coefficients stay integers in both arithmetic modes;
only point identification ever touches floats, so every pairing value is
exact and normalisations by powers of two happen scalar-side.

A letter (a generator or its inverse) acts on classes by pullback.  The
action is a finite table on the letter's own data - the line class picks
up degree 2 minus the table coefficients, the three table points trade
places with the letter's indeterminacy points - plus point transport by
the inverse letter everywhere else.  Transport refuses, by raising
``DegenerateConfiguration``, whenever a carried point sits on a curve the
evaluating map contracts, because the honest image of such a point is not
a point of the plane at all.

The float registry hashes unit vectors on a grid of cell size ten times
the merge radius and compares a query against both sign lifts, so
antipodal representatives land together.  Two distinct registered points
closer than the ambiguity band abort the run rather than silently fuse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import acosh, floor, sqrt
from typing import Dict, List, Optional, Tuple

from .errors import DegenerateConfiguration, NotTimelike
from .maps import GeneratorData, Mat3, matvec
from .projective import chordal_distance, cross, normalize_exact, normalize_float


# -- point registry -----------------------------------------------------


class PointRegistry:
    """Issues stable integer ids for plane points in one arithmetic mode."""

    def __init__(self, mode: str = "exact", eps: float = 1e-9):
        if mode not in ("exact", "float"):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.eps = eps
        self._points: List[tuple] = []
        self._exact_index: Dict[tuple, int] = {}
        self._grid: Dict[Tuple[int, int, int], List[int]] = {}
        self.merge_count = 0
        self.min_separation = float("inf")

    def __len__(self) -> int:
        return len(self._points)

    def coords_of(self, pid: int) -> tuple:
        return self._points[pid]

    def register(self, coords) -> int:
        if self.mode == "exact":
            key = normalize_exact(coords)
            pid = self._exact_index.get(key)
            if pid is None:
                pid = len(self._points)
                self._points.append(key)
                self._exact_index[key] = pid
            return pid
        return self._register_float(coords)

    def _cell_of(self, u) -> Tuple[int, int, int]:
        h = 10.0 * self.eps
        return (floor(u[0] / h), floor(u[1] / h), floor(u[2] / h))

    def _candidates(self, u):
        seen = set()
        for rep in (u, (-u[0], -u[1], -u[2])):
            cx, cy, cz = self._cell_of(rep)
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    for dz in (-1, 0, 1):
                        for pid in self._grid.get((cx + dx, cy + dy, cz + dz), ()):
                            if pid not in seen:
                                seen.add(pid)
                                yield pid
    def _register_float(self, coords) -> int:
        u = normalize_float(coords, self.eps)
        best_pid, best_d = None, float("inf")
        for pid in self._candidates(u):
            d = chordal_distance(u, self._points[pid])
            if d < best_d:
                best_pid, best_d = pid, d
        if best_pid is not None:
            if best_d < self.eps:
                if best_d > 0.0:
                    self.merge_count += 1
                return best_pid
            # closest approach between points kept distinct: the health metric
            self.min_separation = min(self.min_separation, best_d)
            if best_d < 10.0 * self.eps:
                raise DegenerateConfiguration(
                    f"points separated by {best_d:.3e}, inside the ambiguity band "
                    f"[{self.eps:.1e}, {10 * self.eps:.1e})")
        pid = len(self._points)
        self._points.append(u)
        self._grid.setdefault(self._cell_of(u), []).append(pid)
        return pid


# -- class vectors ------------------------------------------------------


class WeilClass:
    """line_coeff * [line] - sum point_part[pid] * [exc_pid], integer coefficients."""

    __slots__ = ("line_coeff", "point_part")

    def __init__(self, line_coeff: int, point_part: Dict[int, int]):
        self.line_coeff = line_coeff
        self.point_part = {p: c for p, c in point_part.items() if c != 0}

    @staticmethod
    def line_class() -> "WeilClass":
        return WeilClass(1, {})

    @staticmethod
    def exceptional_class(pid: int) -> "WeilClass":
        return WeilClass(0, {pid: -1})

    def intersect(self, other: "WeilClass") -> int:
        total = self.line_coeff * other.line_coeff
        a, b = self.point_part, other.point_part
        if len(b) < len(a):
            a, b = b, a
        for pid, c in a.items():
            oc = b.get(pid)
            if oc is not None:
                total -= c * oc
        return total

    def self_intersection(self) -> int:
        return self.line_coeff ** 2 - sum(c * c for c in self.point_part.values())

    def support(self) -> Tuple[int, ...]:
        return tuple(sorted(self.point_part))

    def __eq__(self, other):
        if not isinstance(other, WeilClass):
            return NotImplemented
        return (self.line_coeff == other.line_coeff
                and self.point_part == other.point_part)

    def __repr__(self):
        return f"WeilClass({self.line_coeff}, {self.point_part})"


def hyperbolic_distance(c1: WeilClass, c2: WeilClass) -> float:
    """Distance between the rays of two positive classes in the hyperboloid model."""
    s1 = c1.self_intersection()
    s2 = c2.self_intersection()
    if s1 <= 0 or s2 <= 0:
        raise NotTimelike(f"self-intersections {s1}, {s2} must both be positive")
    arg = c1.intersect(c2) / sqrt(s1 * s2)
    return acosh(max(arg, 1.0))


def coefficient_l2_diff(c1: WeilClass, scale1: float,
                        c2: WeilClass, scale2: float) -> float:
    """Euclidean norm of the coefficient difference of two rescaled classes."""
    total = (c1.line_coeff / scale1 - c2.line_coeff / scale2) ** 2
    for pid in set(c1.point_part) | set(c2.point_part):
        d = c1.point_part.get(pid, 0) / scale1 - c2.point_part.get(pid, 0) / scale2
        total += d * d
    return sqrt(total)


# -- letter action ------------------------------------------------------


_COMPLEMENT = ((1, 2), (0, 2), (0, 1))


@dataclass
class LetterOperator:
    """Pullback action of one letter over a shared registry.

    Pushforward by the same letter is pullback by the opposite sign, so a
    walk keeps one operator per (generator, sign) pair and never needs a
    separate pushforward object.
    """

    gen: GeneratorData
    sign: int
    registry: PointRegistry
    base_ids: Tuple[int, int, int] = field(init=False)
    table_ids: Tuple[int, int, int] = field(init=False)
    eval_matrices: Tuple[Mat3, Mat3] = field(init=False)
    contracted_forms: Tuple[tuple, tuple, tuple] = field(init=False)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        reg = self.registry
        own = self.gen.letter_base_pts(self.sign)
        table = self.gen.letter_base_pts(-self.sign)
        self.base_ids = tuple(reg.register(p) for p in own)
        self.table_ids = tuple(reg.register(q) for q in table)
        # a self-inverse letter may share the two triples wholesale; what the
        # table algebra cannot survive is a collapse inside either triple
        if len(set(self.base_ids)) != 3 or len(set(self.table_ids)) != 3:
            raise DegenerateConfiguration(
                "a letter's indeterminacy triple collapsed in the registry")
        self.eval_matrices = self.gen.letter_matrices(-self.sign)
        forms = []
        for i in range(3):
            j, k = _COMPLEMENT[i]
            qj = reg.coords_of(self.table_ids[j])
            qk = reg.coords_of(self.table_ids[k])
            form = cross(qj, qk)
            if reg.mode == "float":
                n = sqrt(sum(v * v for v in form))
                if n < reg.eps:
                    raise DegenerateConfiguration("contracted line form degenerates")
                form = tuple(v / n for v in form)
            forms.append(form)
        self.contracted_forms = tuple(forms)
        self._check_forms()

    def _check_forms(self):
        reg = self.registry
        for i in range(3):
            j, k = _COMPLEMENT[i]
            form = self.contracted_forms[i]
            for t, expect_zero in ((j, True), (k, True), (i, False)):
                val = sum(f * c for f, c in zip(form, reg.coords_of(self.table_ids[t])))
                on_line = (val == 0) if reg.mode == "exact" else (abs(val) < reg.eps)
                if on_line != expect_zero:
                    raise DegenerateConfiguration(
                        "contracted line of the inverse letter misses its defining points")

    # transport of a single carried point by the inverse letter

    def table_index_of(self, coords) -> Optional[int]:
        """Index 0..2 if coords names a table point, else None."""
        reg = self.registry
        if reg.mode == "exact":
            key = normalize_exact(coords)
            for t, tid in enumerate(self.table_ids):
                if reg.coords_of(tid) == key:
                    return t
            return None
        u = normalize_float(coords, reg.eps)
        for t, tid in enumerate(self.table_ids):
            if chordal_distance(u, reg.coords_of(tid)) < reg.eps:
                return t
        return None

    def transport(self, coords):
        """Image of a non-table point under the inverse letter, guarded.

        Raises DegenerateConfiguration when the point sits on a curve the
        inverse letter contracts (the class of such a point does not move
        to the class of a plane point).
        """
        reg = self.registry
        for form in self.contracted_forms:
            val = form[0] * coords[0] + form[1] * coords[1] + form[2] * coords[2]
            on_line = (val == 0) if reg.mode == "exact" else (abs(val) < reg.eps)
            if on_line:
                raise DegenerateConfiguration(
                    "carried point lies on a contracted line of the evaluating letter")
        outer, inner = self.eval_matrices
        v = matvec(inner, coords)
        s = (v[1] * v[2], v[0] * v[2], v[0] * v[1])
        out = matvec(outer, s)
        if reg.mode == "exact":
            return normalize_exact(out)
        return normalize_float(out, reg.eps)

    # full class action

    def pullback(self, cls: WeilClass) -> WeilClass:
        entries = dict(cls.point_part)
        t = [entries.pop(tid, 0) for tid in self.table_ids]
        new_line = 2 * cls.line_coeff - t[0] - t[1] - t[2]
        out: Dict[int, int] = {}
        for i in range(3):
            j, k = _COMPLEMENT[i]
            coeff = cls.line_coeff - t[j] - t[k]
            if coeff != 0:
                out[self.base_ids[i]] = coeff
        for pid, coeff in entries.items():
            img = self.transport(self.registry.coords_of(pid))
            new_pid = self.registry.register(img)
            if new_pid in out:
                raise DegenerateConfiguration(
                    "transported point collides with another carried point")
            out[new_pid] = coeff
        return WeilClass(new_line, out)


def letter_operator(gen: GeneratorData, sign: int,
                    registry: PointRegistry) -> LetterOperator:
    return LetterOperator(gen, sign, registry)


class OperatorCache:
    """Lazily built (generator, sign) -> LetterOperator map over one registry."""

    def __init__(self, gens: Tuple[GeneratorData, ...], registry: PointRegistry):
        self.gens = gens
        self.registry = registry
        self._ops: Dict[Tuple[int, int], LetterOperator] = {}

    def get(self, gen_index: int, sign: int) -> LetterOperator:
        key = (gen_index, sign)
        op = self._ops.get(key)
        if op is None:
            op = LetterOperator(self.gens[gen_index], sign, self.registry)
            self._ops[key] = op
        return op


# -- serialisation ------------------------------------------------------


def class_to_jsonable(cls: WeilClass, registry: PointRegistry) -> dict:
    entries = []
    for pid in sorted(cls.point_part):
        coords = registry.coords_of(pid)
        entries.append([list(coords), cls.point_part[pid]])
    entries.sort(key=lambda e: e[0])
    return {"line_coeff": cls.line_coeff, "point_entries": entries}


def class_from_jsonable(data: dict, registry: PointRegistry) -> WeilClass:
    part: Dict[int, int] = {}
    for coords, coeff in data["point_entries"]:
        pid = registry.register(tuple(coords))
        part[pid] = part.get(pid, 0) + coeff
    return WeilClass(data["line_coeff"], part)
