"""The inductive block hierarchy B_0, B_1, ... built from a density schedule.

Level ``k`` stores the block length ``b_k``, the repetition count
``r_{k-1}`` and the length spectrum (exponent ``e`` -> number of
coordinates ``j`` with ``|I_j| = 2**-e``).  The block itself is never
materialised for large levels; :meth:`BlockHierarchy.interval_at` resolves a
single coordinate by descending through the head/tail decomposition

    B_k = (B_{k-1})^r  x  prod over tuples (i_1..i_b) of prod_j I_{j, i_j}

where tuples are enumerated lexicographically with ``i_1`` most significant,
so a tail tuple index is a base ``2**k`` numeral.

Once ``2**(k b_{k-1})`` exceeds the bit budget a level is stored in
log-space: only rational enclosures of the cumulative length fractions
survive, rounded outward to a fixed dyadic precision.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .dyadic import DyadicInterval, DyadicRational, subdivide
from .errors import InfeasibleError, RepresentationError, ScheduleInconsistencyError
from .schedule import EtaSchedule, minimal_repetition, threshold_exponent, validate_schedule

EXACT = "exact"
LOGSPACE = "logspace"

DEFAULT_BUDGET = 1 << 20
DEFAULT_PRECISION = 256
EAGER_CAP = 1 << 20

Enclosure = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class LengthSpectrum:
    """Exponent ``e`` -> number of coordinates of length ``2**-e``."""

    counts: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def long_count(self, s: int) -> int:
        cut = threshold_exponent(s)
        return sum(c for e, c in self.counts.items() if e <= cut)

    def count_longer_than(self, eps: Fraction) -> int:
        """Coordinates whose length strictly exceeds ``eps``."""
        # 2**-e > eps  <=>  eps * 2**e < 1
        return sum(c for e, c in self.counts.items() if eps * (1 << e) < 1)

    @property
    def min_exponent(self) -> int:
        return min(e for e, c in self.counts.items() if c)

    @property
    def max_exponent(self) -> int:
        return max(e for e, c in self.counts.items() if c)

    def shifted(self, k: int, factor: int) -> LengthSpectrum:
        return LengthSpectrum({e + k: c * factor for e, c in self.counts.items()})

    def to_dict(self) -> dict[str, int]:
        return {str(e): c for e, c in sorted(self.counts.items())}


@dataclass(frozen=True)
class LevelParams:
    """Data of one level.  Exact levels carry integers; log-space levels carry enclosures."""

    k: int
    mode: str
    b: int | None
    r_prev: int | None
    tail_count: int | None
    spectrum: LengthSpectrum | None
    # cumulative fraction of coordinates with exponent <= E, for E in 0..k(k+1)/2
    cumulative: dict[int, Enclosure] = field(default_factory=dict)
    # enclosure of r_{k-1} / (r_{k-1} + 2**(k b_{k-1})), log-space only
    head_share: Enclosure | None = None
    log2_b: tuple[int, int] | None = None

    @property
    def exact(self) -> bool:
        return self.mode == EXACT

    @property
    def max_exponent(self) -> int:
        return self.k * (self.k + 1) // 2


def _floor_dyadic(num: int, den: int, precision: int) -> Fraction:
    return Fraction((num << precision) // den, 1 << precision)


def _ceil_dyadic(num: int, den: int, precision: int) -> Fraction:
    return Fraction(-((-num << precision) // den), 1 << precision)


def _round_out(lo: Fraction, hi: Fraction, precision: int) -> Enclosure:
    lo = _floor_dyadic(lo.numerator, lo.denominator, precision)
    hi = _ceil_dyadic(hi.numerator, hi.denominator, precision)
    return max(lo, Fraction(0)), min(hi, Fraction(1))


class BlockHierarchy:
    """Levels ``0..K`` of the construction for a given schedule."""

    def __init__(self, schedule: EtaSchedule, levels: list[LevelParams],
                 budget: int = DEFAULT_BUDGET, precision: int = DEFAULT_PRECISION):
        self.schedule = schedule
        self.levels = levels
        self.budget = budget
        self.precision = precision
        self._blocks: dict[int, list[DyadicInterval]] = {}

    # -- construction ---------------------------------------------------

    @classmethod
    def build(cls, schedule: EtaSchedule, K: int, budget: int = DEFAULT_BUDGET,
              precision: int = DEFAULT_PRECISION) -> BlockHierarchy:
        if K < 0:
            raise ValueError("K must be nonnegative")
        if schedule.k_max is not None and K > schedule.k_max:
            raise InfeasibleError(f"schedule defines levels up to {schedule.k_max}, requested {K}")
        if K >= 1:
            report = validate_schedule(schedule, K)
            if not report.ok:
                raise ScheduleInconsistencyError("invalid schedule: " + "; ".join(report.violations))
        if budget < 1:
            raise InfeasibleError("bit budget too small to build level 1")
        precision = min(precision, budget)
        levels = [LevelParams(0, EXACT, 1, None, None, LengthSpectrum({0: 1}),
                              cumulative={0: (Fraction(1), Fraction(1))}, log2_b=(0, 0))]
        for k in range(1, K + 1):
            prev = levels[-1]
            if prev.exact and k * prev.b <= budget:
                levels.append(_exact_level(schedule, prev, k))
            else:
                levels.append(_logspace_level(schedule, prev, k, precision))
        return cls(schedule, levels, budget, precision)

    # -- basic accessors ------------------------------------------------

    @property
    def K(self) -> int:
        return len(self.levels) - 1

    def level(self, k: int) -> LevelParams:
        if not 0 <= k <= self.K:
            raise IndexError(f"level {k} not built (hierarchy has levels 0..{self.K})")
        return self.levels[k]

    def exact_level(self, k: int) -> LevelParams:
        lvl = self.level(k)
        if not lvl.exact:
            raise RepresentationError(f"level {k} is stored in log-space; exact queries unavailable")
        return lvl

    def b(self, k: int) -> int:
        return self.exact_level(k).b

    @property
    def exact_levels(self) -> list[int]:
        return [lvl.k for lvl in self.levels if lvl.exact]

    # -- coordinate resolution ------------------------------------------

    def _tail_digit(self, k: int, tuple_index: int, pos: int) -> int:
        """1-based digit ``i_pos`` of a tail tuple (``i_1`` most significant)."""
        b_prev = self.levels[k - 1].b
        return ((tuple_index >> (k * (b_prev - pos))) & ((1 << k) - 1)) + 1

    def interval_at(self, k: int, j: int) -> DyadicInterval:
        """Return ``I_j^{(k)}`` for ``1 <= j <= b_k`` without enumerating the block."""
        b_k = self.b(k)
        if not 1 <= j <= b_k:
            raise IndexError(f"coordinate {j} outside 1..b_{k}")
        steps = []
        while k > 0:
            lvl = self.levels[k]
            b_prev = self.levels[k - 1].b
            head = b_prev * lvl.r_prev
            if j <= head:
                j = (j - 1) % b_prev + 1
            else:
                tuple_index, pos0 = divmod(j - head - 1, b_prev)
                steps.append((k, self._tail_digit(k, tuple_index, pos0 + 1)))
                j = pos0 + 1
            k -= 1
        interval = DyadicInterval.unit()
        for level, digit in reversed(steps):
            interval = subdivide(interval, 1 << level, digit)
        return interval

    def block(self, k: int) -> list[DyadicInterval]:
        """All of ``I_1^{(k)} .. I_{b_k}^{(k)}`` as a list (small levels only)."""
        if k in self._blocks:
            return self._blocks[k]
        b_k = self.b(k)
        if b_k > EAGER_CAP:
            raise InfeasibleError(f"b_{k} (about 2^{b_k.bit_length() - 1}) exceeds the enumeration cap {EAGER_CAP}")
        if k == 0:
            out = [DyadicInterval.unit()]
        else:
            prev = self.block(k - 1)
            parts = 1 << k
            pieces = [[subdivide(iv, parts, d) for d in range(1, parts + 1)] for iv in prev]
            out = prev * self.levels[k].r_prev
            for digits in itertools.product(range(parts), repeat=len(prev)):
                out.extend(pieces[pos][d] for pos, d in enumerate(digits))
        self._blocks[k] = out
        return out

    def intervals(self, k: int, start: int = 1, stop: int | None = None) -> Iterator[DyadicInterval]:
        """Coordinates ``start..stop`` (inclusive) of level ``k``."""
        stop = self.b(k) if stop is None else stop
        if self.b(k) <= EAGER_CAP:
            yield from self.block(k)[start - 1:stop]
        else:
            for j in range(start, stop + 1):
                yield self.interval_at(k, j)

    # -- identities from the construction -------------------------------

    def head_tail_identity_check(self, k: int) -> tuple[bool, int | None]:
        """Check that the tail tuples of level ``k`` reunite to ``B_{k-1}``.

        For every position the pieces selected by all ``2**k`` values of that
        digit must cover ``I_pos^{(k-1)}``.  The ``2**k`` equal pieces of an
        interval of positive length cover it exactly when every piece index
        occurs, so the check runs on decoded digits.  Returns
        ``(ok, witness)`` where ``witness`` is the first failing position.
        """
        self.exact_level(k)
        if k < 1:
            raise ValueError("head/tail identity needs k >= 1")
        b_prev = self.levels[k - 1].b
        parts = 1 << k
        every = set(range(1, parts + 1))
        for pos in range(1, b_prev + 1):
            shift = k * (b_prev - pos)
            seen = {self._tail_digit(k, d << shift, pos) for d in range(parts)}
            if seen != every:
                return False, pos
        return True, None

    def tail_cover_check(self, k: int, pos: int) -> bool:
        """Direct interval-union version of the identity at one position."""
        b_prev = self.b(k - 1)
        parts = 1 << k
        head = b_prev * self.levels[k].r_prev
        base = self.interval_at(k - 1, pos)
        shift = k * (b_prev - pos)
        pieces = sorted((self.interval_at(k, head + ((d << shift) * b_prev) + pos) for d in range(parts)),
                        key=lambda iv: iv.lo)
        if pieces[0].lo != base.lo:
            return False
        reach = pieces[0].hi
        for piece in pieces[1:]:
            if reach < piece.lo:
                return False
            reach = max(reach, piece.hi)
        return reach == base.hi

    def max_tail_length(self, k: int) -> DyadicRational:
        """Longest tail coordinate of level ``k`` (these are the shortened copies)."""
        lvl = self.exact_level(k)
        if k < 1:
            raise ValueError("tail exists only for k >= 1")
        tail = self.levels[k - 1].spectrum.shifted(k, lvl.tail_count)
        return DyadicRational(1, tail.min_exponent)

    def min_length(self, k: int) -> DyadicRational:
        return DyadicRational(1, self.exact_level(k).spectrum.max_exponent)

    # -- counting --------------------------------------------------------

    def long_coordinate_count(self, k: int, s: int) -> int | Fraction:
        """Number of coordinates of length ``>= 2**-s(s+1)/2``.

        Exact levels give an integer count.  Log-space levels give a
        certified lower bound on the count as a fraction of ``b_k``.
        """
        lvl = self.level(k)
        if lvl.exact:
            return lvl.spectrum.long_count(s)
        return self.long_fraction(k, s)[0]

    def long_fraction(self, k: int, s: int) -> Enclosure:
        """Enclosure ``(lo, hi)`` of the long-coordinate fraction at level ``k``.

        Exact levels with moderate ``b_k`` give ``lo == hi``.  Larger exact
        levels and log-space levels give a dyadic enclosure at the working
        precision.  Where the repetition count guarantees the fraction is at
        least ``eta2(s, k)`` the lower end is raised to that value.
        """
        lvl = self.level(k)
        if lvl.exact:
            count = lvl.spectrum.long_count(s)
            if lvl.b.bit_length() <= 4096:
                f = Fraction(count, lvl.b)
                return f, f
            return (_floor_dyadic(count, lvl.b, self.precision),
                    _ceil_dyadic(count, lvl.b, self.precision))
        cut = min(threshold_exponent(s), lvl.max_exponent)
        lo, hi = lvl.cumulative[cut]
        if s < k:
            lo = max(lo, self.schedule.eta2(s, k))
        return lo, hi

    def density_holds(self, k: int, s: int) -> bool:
        """Exact (or certified) check of ``long fraction >= eta2(s, k)``."""
        eta = self.schedule.eta2(s, k)
        lvl = self.level(k)
        if lvl.exact:
            return lvl.spectrum.long_count(s) * eta.denominator >= eta.numerator * lvl.b
        lo, hi = self.long_fraction(k, s)
        return lo >= eta and hi >= eta

    def density_margins(self, k: int) -> dict[int, float]:
        """Approximate ``fraction - eta2(s, k)`` for display."""
        out = {}
        for s in range(k):
            lo, _ = self.long_fraction(k, s)
            out[s] = float(lo - self.schedule.eta2(s, k))
        return out

    def widim_lower_bound(self, k: int, eps: Fraction) -> int | Fraction:
        """Coordinates with length strictly greater than ``eps``."""
        eps = Fraction(eps)
        lvl = self.level(k)
        if lvl.exact:
            return lvl.spectrum.count_longer_than(eps)
        # lengths 2**-e > eps for e <= E; fraction is the cumulative value at E
        E = -1
        while E < lvl.max_exponent and eps * (1 << (E + 1)) < 1:
            E += 1
        if E < 0:
            return Fraction(0)
        return lvl.cumulative[E][0]


def _exact_level(schedule: EtaSchedule, prev: LevelParams, k: int) -> LevelParams:
    b_prev = prev.b
    T = 1 << (k * b_prev)
    r = minimal_repetition(k, schedule, prev.spectrum.counts, b_prev)
    counts: dict[int, int] = {}
    for e, c in prev.spectrum.counts.items():
        counts[e] = counts.get(e, 0) + r * c
        counts[e + k] = counts.get(e + k, 0) + T * c
    b = b_prev * (r + T)
    spectrum = LengthSpectrum(counts)
    assert spectrum.total == b
    return LevelParams(k, EXACT, b, r, T, spectrum,
                       log2_b=(b.bit_length() - 1, b.bit_length()))


def _previous_cumulative(prev: LevelParams, precision: int) -> dict[int, Enclosure]:
    if not prev.exact:
        return prev.cumulative
    out = {}
    running = 0
    for E in range(prev.max_exponent + 1):
        running += prev.spectrum.counts.get(E, 0)
        out[E] = (_floor_dyadic(running, prev.b, precision), _ceil_dyadic(running, prev.b, precision))
    return out


def _logspace_level(schedule: EtaSchedule, prev: LevelParams, k: int, precision: int) -> LevelParams:
    """Propagate cumulative-fraction enclosures through one level.

    With ``x = r / T`` the head share is ``rho = x / (1 + x)`` and
    ``C_k(E) = rho C_{k-1}(E) + (1 - rho) C_{k-1}(E - k)``.  Minimal ``r`` is
    ``ceil(T x0)`` with ``x0 = max_s eta / (C_{k-1}(s) - eta)``, so
    ``x`` lies in ``[x0, x0 + 1/T]`` and ``1/T < 2**-precision``.
    """
    cum = _previous_cumulative(prev, precision)
    top = prev.max_exponent

    def C(E: int) -> Enclosure:
        if E < 0:
            return Fraction(0), Fraction(0)
        return cum[min(E, top)]

    x_lo = x_hi = Fraction(0)
    for s in range(k):
        eta = schedule.eta2(s, k)
        lo, hi = C(threshold_exponent(s))
        if hi <= eta:
            raise ScheduleInconsistencyError(f"level {k}: long fraction for s={s} cannot exceed eta2")
        if lo <= eta:
            raise InfeasibleError(f"level {k}: enclosure too wide to certify feasibility for s={s}; "
                                  "raise the precision")
        x_lo = max(x_lo, eta / (hi - eta))
        x_hi = max(x_hi, eta / (lo - eta))
    x_hi += Fraction(1, 1 << precision)
    rho = (x_lo / (1 + x_lo), x_hi / (1 + x_hi))

    cumulative = {}
    for E in range(k * (k + 1) // 2 + 1):
        h_lo, h_hi = C(E)
        t_lo, t_hi = C(E - k)
        lo = min(p * h_lo + (1 - p) * t_lo for p in rho)
        hi = max(p * h_hi + (1 - p) * t_hi for p in rho)
        cumulative[E] = _round_out(lo, hi, precision)

    log2_b = None
    if prev.exact:
        # log2 b_k = log2 b_{k-1} + k b_{k-1} + log2(1 + x)
        extra = math.ceil(math.log2(1 + float(x_hi))) + 1
        bl = prev.b.bit_length()
        log2_b = (bl - 1 + k * prev.b, bl + k * prev.b + extra)
    return LevelParams(k, LOGSPACE, None, None, None, None,
                       cumulative=cumulative, head_share=rho, log2_b=log2_b)
