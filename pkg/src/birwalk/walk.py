"""Random left-products of generators acting on classes at infinity.

The walk multiplies a fresh random letter onto the left of the running
composite and tracks two class sequences over one point registry:

* the pullback track c_n, the pullback of the line class under the
  composite, whose normalization is the boundary approximant; and
* optionally the pushforward track e_n, the pushforward of the line
  class under the composite, which feeds the lower-bound ratio and
  decay diagnostics.

Formal cancellation is handled on a stack: a letter that is the formal
inverse of the newest stacked letter pops it instead of pushing, and
the pullback class is rolled back by inverting the linear update (the
rollback chains are deterministic replays of the push chains, so the
restoration is bit-exact) and memory stays linear in the reduced length.

One append step with letter f on composite w (reduced stack bottom to
top f_1 .. f_n) updates c by

    c'  =  2 c - sum_i  w^* [exc at p_i]

over the three indeterminacy points p_i of f, because the pullback of
the line class under f is twice the line class minus those three
exceptionals, and pullback along the composite applies letter by
letter, newest letter first.  Each w^*[exc] starts as a single carried
point and is moved down the stack by plain point transport until it
either survives to the bottom (one new exceptional class) or hits a
stacked letter's table and fans out through the finite table action.

The pushforward track needs no chains at all: the new letter acts
outermost, so e' is one application of the letter's pushforward
operator to e, and a cancelling letter undoes its partner exactly.

Class coefficients stay integers in both arithmetic modes.  The degree
invariant (line coefficient equals 2^reduced-length), the unit
self-intersection, and the nonnegativity of the point multiplicities
are asserted as the walk runs, so a silent breakdown of the free-basis
bookkeeping cannot pass.  Class tracking can also be switched off
entirely, leaving the exact integer word-length bookkeeping, which is
all the degree-growth and drift statistics need: the degree of the
composite is exactly 2^reduced-length, so deep runs do not pay for (or
abort on) geometry they never consult.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .errors import DegenerateConfiguration, ExactLengthCap
from .genericity import Letter, Word, _inverse_letter, all_letters
from .maps import GeneratorData
from .picard import (
    LetterOperator,
    OperatorCache,
    PointRegistry,
    WeilClass,
    class_to_jsonable,
    coefficient_l2_diff,
)

LOG2 = math.log(2.0)


def random_itinerary(generator_count: int, steps: int,
                     rng: random.Random) -> Word:
    letters = all_letters(generator_count)
    return tuple(letters[rng.randrange(len(letters))] for _ in range(steps))


def reduced_middle_length(itinerary: Word, lo: int, hi: int) -> int:
    """Reduced length of the letter block strictly between positions lo and hi.

    The pairing of the pullback-track classes at times lo and hi equals
    two to this power, by the isometry property of each letter's action.
    """
    if lo > hi:
        lo, hi = hi, lo
    stack: List[Letter] = []
    for letter in itinerary[lo:hi]:
        if stack and letter == _inverse_letter(stack[-1]):
            stack.pop()
        else:
            stack.append(letter)
    return len(stack)


def normalized_pairing(c1: WeilClass, len1: int, c2: WeilClass, len2: int) -> float:
    """Pairing of two tracked classes after dividing each by its degree."""
    return c1.intersect(c2) / float(2 ** (len1 + len2))


# -- the stacked state --------------------------------------------------


@dataclass
class _StackEntry:
    letter: Letter
    pull_op: Optional[LetterOperator]


class WalkState:
    """Mutable walk state over a shared registry and operator cache."""

    def __init__(self, gens: Tuple[GeneratorData, ...], mode: str = "exact",
                 eps: float = 1e-9, exact_len_cap: int = 16,
                 track_classes: bool = True,
                 track_pushforward: bool = False,
                 registry: Optional[PointRegistry] = None,
                 cache: Optional[OperatorCache] = None):
        self.gens = gens
        self.mode = mode
        self.exact_len_cap = exact_len_cap
        self.track_classes = track_classes
        self.track_pushforward = track_pushforward
        if track_classes or track_pushforward:
            self.registry = registry if registry is not None \
                else PointRegistry(mode, eps)
            if self.registry.mode != mode:
                raise ValueError("registry mode does not match walk mode")
            self.cache = cache if cache is not None \
                else OperatorCache(gens, self.registry)
        else:
            self.registry = None
            self.cache = None
        self.stack: List[_StackEntry] = []
        self.n = 0
        self.pull_class = WeilClass.line_class() if track_classes else None
        self.push_class = WeilClass.line_class() if track_pushforward else None
        self.itinerary: List[Letter] = []

    @property
    def reduced_len(self) -> int:
        return len(self.stack)

    # a single carried point moved through a run of operators (newest first)

    def _chain_point(self, ops: Sequence[LetterOperator], coords) -> WeilClass:
        for depth in range(len(ops) - 1, -1, -1):
            op = ops[depth]
            hit = op.table_index_of(coords)
            if hit is not None:
                j, k = (1, 2) if hit == 0 else (0, 2) if hit == 1 else (0, 1)
                cls = WeilClass(1, {op.base_ids[j]: 1, op.base_ids[k]: 1})
                for d2 in range(depth - 1, -1, -1):
                    cls = ops[d2].pullback(cls)
                return cls
            coords = op.transport(coords)
        pid = self.registry.register(coords)
        return WeilClass(0, {pid: -1})

    def _assemble(self, base: WeilClass, chained: List[WeilClass]) -> WeilClass:
        line = 2 * base.line_coeff
        part = {pid: 2 * v for pid, v in base.point_part.items()}
        for u in chained:
            line -= u.line_coeff
            for pid, coeff in u.point_part.items():
                nv = part.get(pid, 0) - coeff
                if nv == 0:
                    part.pop(pid, None)
                else:
                    part[pid] = nv
        return WeilClass(line, part)

    def _disassemble(self, cur: WeilClass, chained: List[WeilClass]) -> WeilClass:
        line = cur.line_coeff
        part = dict(cur.point_part)
        for u in chained:
            line += u.line_coeff
            for pid, coeff in u.point_part.items():
                nv = part.get(pid, 0) + coeff
                if nv == 0:
                    part.pop(pid, None)
                else:
                    part[pid] = nv
        if line % 2:
            raise AssertionError("rollback produced an odd line coefficient")
        half = {}
        for pid, coeff in part.items():
            if coeff % 2:
                raise AssertionError("rollback produced an odd point coefficient")
            half[pid] = coeff // 2
        return WeilClass(line // 2, half)

    def _chained_base_classes(self, op: LetterOperator) -> List[WeilClass]:
        pull_ops = [e.pull_op for e in self.stack]
        return [self._chain_point(pull_ops, self.registry.coords_of(pid))
                for pid in op.base_ids]

    def step(self, letter: Letter) -> None:
        self.itinerary.append(letter)
        cancelling = bool(self.stack) and \
            letter == _inverse_letter(self.stack[-1].letter)
        if not cancelling and self.mode == "exact" \
                and len(self.stack) >= self.exact_len_cap \
                and (self.track_classes or self.track_pushforward):
            raise ExactLengthCap(
                f"reduced length would exceed the exact-mode cap "
                f"{self.exact_len_cap}; rerun in float mode or raise the cap")
        if cancelling:
            entry = self.stack.pop()
            if self.track_classes:
                chained = self._chained_base_classes(entry.pull_op)
                self.pull_class = self._disassemble(self.pull_class, chained)
        else:
            pull_op = self.cache.get(letter[0], letter[1]) \
                if self.track_classes else None
            if self.track_classes:
                chained = self._chained_base_classes(pull_op)
                self.pull_class = self._assemble(self.pull_class, chained)
            self.stack.append(_StackEntry(letter, pull_op))
        if self.track_pushforward:
            # the new letter acts outermost on the pushforward track, and a
            # cancelling letter's operator undoes its partner exactly
            fwd = self.cache.get(letter[0], -letter[1])
            self.push_class = fwd.pullback(self.push_class)
        self.n += 1
        # a mismatch here means overlapping indeterminacy collapsed the
        # degree: the generator tuple is not generic along the walked word
        expect = 1 << len(self.stack)
        if self.track_classes and self.pull_class.line_coeff != expect:
            raise DegenerateConfiguration(
                f"degree invariant broken at step {self.n}: line coefficient "
                f"{self.pull_class.line_coeff} vs reduced length {len(self.stack)}")
        if self.push_class is not None and self.push_class.line_coeff != expect:
            raise DegenerateConfiguration(
                f"pushforward degree invariant broken at step {self.n}")


# -- driver and report --------------------------------------------------


@dataclass(frozen=True)
class StepRow:
    n: int
    reduced_len: int
    log2_deg: int
    cauchy_increment: Optional[float]
    drift_estimate: float
    self_intersection: float
    health_min_separation: Optional[float]


@dataclass
class WalkReport:
    mode: str
    seed: Optional[int]
    steps_requested: int
    steps_done: int
    checkpoint_every: int
    generator_count: int
    track_classes: bool
    itinerary: Word
    rows: Tuple[StepRow, ...]
    final_reduced_len: int
    aborted: Optional[str]
    aborted_at: Optional[int]
    registry_points: int
    registry_merges: int
    registry_min_separation: Optional[float]
    final_class: Optional[WeilClass] = field(repr=False, default=None)
    final_push_class: Optional[WeilClass] = field(repr=False, default=None)
    checkpoint_classes: Optional[Tuple[Tuple[int, int, WeilClass, Optional[WeilClass]], ...]] \
        = field(repr=False, default=None)
    registry: Optional[PointRegistry] = field(repr=False, default=None)

    def final_support_size(self) -> int:
        return 0 if self.final_class is None else len(self.final_class.point_part)

    def top_coefficients(self, count: int = 5) -> List[Tuple[float, tuple]]:
        """Largest normalized point multiplicities of the final class."""
        if self.final_class is None:
            return []
        scale = float(2 ** self.final_reduced_len)
        items = sorted(self.final_class.point_part.items(),
                       key=lambda kv: (-abs(kv[1]), kv[0]))
        return [(coeff / scale, self.registry.coords_of(pid))
                for pid, coeff in items[:count]]

    def to_jsonable(self, include_classes: bool = False) -> dict:
        out = {
            "format": "birwalk-walk",
            "format_version": 1,
            "mode": self.mode,
            "seed": self.seed,
            "steps_requested": self.steps_requested,
            "steps_done": self.steps_done,
            "checkpoint_every": self.checkpoint_every,
            "generator_count": self.generator_count,
            "track_classes": self.track_classes,
            "itinerary": [[i, s] for i, s in self.itinerary],
            "final_reduced_len": self.final_reduced_len,
            "final_support_size": self.final_support_size(),
            "aborted": self.aborted,
            "aborted_at": self.aborted_at,
            "registry_points": self.registry_points,
            "registry_merges": self.registry_merges,
            "registry_min_separation": self.registry_min_separation,
            "rows": [
                {"n": r.n, "reduced_len": r.reduced_len, "log2_deg": r.log2_deg,
                 "cauchy_increment": r.cauchy_increment,
                 "drift_estimate": r.drift_estimate,
                 "self_intersection": r.self_intersection,
                 "health_min_separation": r.health_min_separation}
                for r in self.rows
            ],
        }
        if self.final_class is not None:
            out["top_coefficients"] = [
                [v, [str(c) for c in coords]]
                for v, coords in self.top_coefficients()
            ]
        if include_classes and self.checkpoint_classes is not None:
            out["checkpoint_classes"] = [
                {"n": n, "reduced_len": ln,
                 "class": class_to_jsonable(c, self.registry)}
                for n, ln, c, _ in self.checkpoint_classes
            ]
        return out


CSV_COLUMNS = ("n", "reduced_len", "log2_deg", "cauchy_increment",
               "drift_estimate", "self_intersection", "health_min_separation")


def write_rows_csv(rows: Sequence[StepRow], path) -> None:
    import csv
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow([
                r.n, r.reduced_len, r.log2_deg,
                "" if r.cauchy_increment is None else repr(r.cauchy_increment),
                repr(r.drift_estimate),
                repr(r.self_intersection),
                "" if r.health_min_separation is None else repr(r.health_min_separation),
            ])


def _assert_class_health(cls: WeilClass, n: int, label: str,
                         mode: str = "exact") -> None:
    # class coefficients are integers in both modes, so a broken identity
    # in float mode means the registry identified two points that are
    # merely close: a numerical degeneracy of the run, not a code bug
    err = DegenerateConfiguration if mode == "float" else AssertionError
    if cls.self_intersection() != 1:
        raise err(f"{label} class lost unit self-intersection at step {n}")
    if any(v < 0 for v in cls.point_part.values()):
        raise err(f"{label} class grew a negative multiplicity at step {n}")


def run_walk(gens: Tuple[GeneratorData, ...], steps: int, *,
             seed: Optional[int] = None,
             itinerary: Optional[Word] = None,
             mode: str = "exact",
             eps: float = 1e-9,
             checkpoint_every: int = 8,
             exact_len_cap: int = 16,
             float_steps_cap: int = 5000,
             track_classes: bool = True,
             track_pushforward: bool = False,
             keep_classes: bool = False,
             registry: Optional[PointRegistry] = None,
             cache: Optional[OperatorCache] = None) -> WalkReport:
    """Drive a walk for the requested number of steps and collect records.

    A row is recorded at every step (plus the starting state); Cauchy
    increments and retained class snapshots appear on checkpoint steps.
    A transport degeneracy aborts the walk and is reported in the result
    rather than raised, so a partial series stays usable; breaching the
    exact-mode length cap raises, because that is a configuration limit
    the caller chose.
    """
    if mode == "float" and steps > float_steps_cap:
        raise ValueError(f"{steps} float steps exceed the cap {float_steps_cap}")
    if keep_classes and not track_classes:
        raise ValueError("keep_classes needs track_classes")
    if itinerary is None:
        if seed is None:
            raise ValueError("need a seed or an explicit itinerary")
        itinerary = random_itinerary(len(gens), steps, random.Random(seed))
    if len(itinerary) < steps:
        raise ValueError("itinerary shorter than requested steps")
    state = WalkState(gens, mode=mode, eps=eps, exact_len_cap=exact_len_cap,
                      track_classes=track_classes,
                      track_pushforward=track_pushforward,
                      registry=registry, cache=cache)
    rows: List[StepRow] = []
    kept: List[Tuple[int, int, WeilClass, Optional[WeilClass]]] = []
    prev_cp: Optional[Tuple[WeilClass, int]] = None
    aborted = None
    aborted_at = None

    def health() -> Optional[float]:
        reg = state.registry
        if reg is None or reg.mode == "exact" \
                or reg.min_separation == float("inf"):
            return None
        return reg.min_separation

    def record(at_checkpoint: bool) -> None:
        nonlocal prev_cp
        ln = state.reduced_len
        inc = None
        if at_checkpoint and state.track_classes:
            cls = state.pull_class
            if prev_cp is not None:
                inc = coefficient_l2_diff(cls, float(2 ** ln),
                                          prev_cp[0], float(2 ** prev_cp[1]))
            _assert_class_health(cls, state.n, "pullback", mode)
            if state.push_class is not None:
                _assert_class_health(state.push_class, state.n,
                                     "pushforward", mode)
            prev_cp = (cls, ln)
            if keep_classes:
                kept.append((state.n, ln, cls, state.push_class))
        rows.append(StepRow(
            n=state.n,
            reduced_len=ln,
            log2_deg=ln,
            cauchy_increment=inc,
            drift_estimate=(ln / state.n) * LOG2 if state.n else 0.0,
            self_intersection=4.0 ** (-ln),
            health_min_separation=health(),
        ))

    record(at_checkpoint=True)  # the n=0 state: the line class itself
    for k in range(steps):
        try:
            state.step(itinerary[k])
            at_cp = bool(checkpoint_every) and state.n % checkpoint_every == 0
            record(at_checkpoint=at_cp or state.n == steps)
        except DegenerateConfiguration as exc:
            aborted = str(exc)
            aborted_at = k + 1
            break

    reg = state.registry
    return WalkReport(
        mode=mode,
        seed=seed,
        steps_requested=steps,
        steps_done=state.n,
        checkpoint_every=checkpoint_every,
        generator_count=len(gens),
        track_classes=track_classes,
        itinerary=tuple(itinerary[:steps]),
        rows=tuple(rows),
        final_reduced_len=state.reduced_len,
        aborted=aborted,
        aborted_at=aborted_at,
        registry_points=0 if reg is None else len(reg),
        registry_merges=0 if reg is None else reg.merge_count,
        registry_min_separation=(None if reg is None
                                 or reg.min_separation == float("inf")
                                 else reg.min_separation),
        final_class=state.pull_class,
        final_push_class=state.push_class,
        checkpoint_classes=tuple(kept) if keep_classes else None,
        registry=reg,
    )


# -- cross-walk and asymptotic diagnostics ------------------------------


def boundary_compare(report_a: WalkReport, report_b: WalkReport) -> dict:
    """Pairing of the two normalized final classes over one shared registry.

    The self-pairings 4^-len come along as the coincidence controls: a
    walk paired with itself lands exactly there, so a cross pairing well
    above both witnesses distinct limits.
    """
    if report_a.registry is not report_b.registry:
        raise ValueError("walks were not run over a shared registry")
    if report_a.final_class is None or report_b.final_class is None:
        raise ValueError("both walks need tracked classes")
    la, lb = report_a.final_reduced_len, report_b.final_reduced_len
    return {
        "pairing": normalized_pairing(report_a.final_class, la,
                                      report_b.final_class, lb),
        "control_a": 4.0 ** (-la),
        "control_b": 4.0 ** (-lb),
    }


def transversality_ratio_series(theta_class: WeilClass, theta_len: int,
                        report: WalkReport) -> List[Tuple[int, float]]:
    """Normalized pairings of a reference class with the pushforward track.

    By adjointness these are the degree-normalized pairings of the
    pullback of the reference class under the step-n composite with
    the line class: bounded below by a positive constant when the
    reference is transverse to the walk's backward boundary, decaying
    to zero when the reference IS that backward boundary.
    """
    if report.checkpoint_classes is None:
        raise ValueError("walk was not run with keep_classes")
    out = []
    for n, ln, _c, e in report.checkpoint_classes:
        if e is None:
            raise ValueError("walk was not run with track_pushforward")
        out.append((n, normalized_pairing(theta_class, theta_len, e, ln)))
    return out


def pairing_decay_series(report: WalkReport) -> List[Tuple[int, float]]:
    """Pairings of the walk's own final normalized class with each c_n.

    Exactly 2^(middle reduced length) / 2^(final reduced length) by the
    pairing identity; the series must decay geometrically in n.
    """
    if report.checkpoint_classes is None:
        raise ValueError("walk was not run with keep_classes")
    n_final = report.steps_done
    l_final = report.final_reduced_len
    out = []
    for n, _ln, _c, _e in report.checkpoint_classes:
        middle = reduced_middle_length(report.itinerary, n, n_final)
        out.append((n, 2.0 ** (middle - l_final)))
    return out


def fit_geometric_rate(series: Sequence[Tuple[int, float]]) -> Tuple[float, float]:
    """Least-squares fit of s_n ~ C * rho^n; returns (C, rho)."""
    pts = [(n, math.log(v)) for n, v in series if v > 0.0]
    if len(pts) < 2:
        raise ValueError("need at least two positive samples to fit")
    count = len(pts)
    sx = sum(n for n, _ in pts)
    sy = sum(y for _, y in pts)
    sxx = sum(n * n for n, _ in pts)
    sxy = sum(n * y for n, y in pts)
    denom = count * sxx - sx * sx
    slope = (count * sxy - sx * sy) / denom
    intercept = (sy - slope * sx) / count
    return math.exp(intercept), math.exp(slope)
