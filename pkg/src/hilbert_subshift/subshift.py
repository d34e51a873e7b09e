"""Finite windows of points of [0,1]^Z, the block sets X_k, and the metric d.

A point is only ever seen through a finite window ``x|_t^{t'}``.  Sampled
points additionally keep the rule that generated them, so coordinates
outside the stored window can be produced on demand; this is what lets
the shift search work at levels whose block length has thousands of
digits.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .dyadic import DyadicInterval
from .errors import InfeasibleError, MembershipError, WindowError
from .hierarchy import EAGER_CAP, BlockHierarchy

SAMPLED = "sampled"
EXTERNAL = "external"

MIDPOINT = "midpoint"
LOWER = "lower-endpoint"
SEEDED = "seeded-random"
SELECTORS = (MIDPOINT, LOWER, SEEDED)


@dataclass(frozen=True)
class WindowWord:
    """Entries ``x_start .. x_end`` of a point, as exact rationals in [0, 1]."""

    start: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.values:
            raise WindowError("a window must be nonempty")
        values = tuple(Fraction(v) for v in self.values)
        for n, v in enumerate(values, start=self.start):
            if not 0 <= v <= 1:
                raise WindowError(f"entry x_{n} = {v} outside [0, 1]")
        object.__setattr__(self, "values", values)

    @property
    def end(self) -> int:
        return self.start + len(self.values) - 1

    def __len__(self) -> int:
        return len(self.values)

    def covers(self, t: int, t2: int) -> bool:
        return self.start <= t and t2 <= self.end

    def __getitem__(self, n: int) -> Fraction:
        if not self.start <= n <= self.end:
            raise WindowError(f"coordinate {n} outside window [{self.start}, {self.end}]")
        return self.values[n - self.start]

    def restrict(self, t: int, t2: int) -> WindowWord:
        if not self.covers(t, t2):
            raise WindowError(f"[{t}, {t2}] not inside window [{self.start}, {self.end}]")
        return WindowWord(t, self.values[t - self.start:t2 - self.start + 1])

    def shifted(self, i: int) -> WindowWord:
        """Window of ``sigma^i x``: ``(sigma^i x)_n = x_{n+i}``."""
        return WindowWord(self.start - i, self.values)

    def symmetric_radius(self) -> int:
        """Largest ``W`` with ``[-W, W]`` inside the window, or -1."""
        return min(-self.start, self.end)

    def items(self) -> Iterable[tuple[int, Fraction]]:
        return enumerate(self.values, start=self.start)


@dataclass(frozen=True)
class AlignedPoint:
    """A point of ``X_k`` at offset ``l``: blocks ``[l + b_k m + 1, l + b_k (m+1)]`` lie in ``B_k``."""

    level: int
    offset: int
    window: WindowWord
    provenance: str = SAMPLED
    source: Callable[[int], Fraction] | None = field(default=None, compare=False, repr=False)

    def value(self, n: int) -> Fraction:
        if self.window.start <= n <= self.window.end:
            return self.window.values[n - self.window.start]
        if self.source is None:
            raise WindowError(f"coordinate {n} outside window [{self.window.start}, {self.window.end}]")
        return self.source(n)

    def word(self, t: int, t2: int) -> WindowWord:
        if self.window.covers(t, t2):
            return self.window.restrict(t, t2)
        return WindowWord(t, tuple(self.value(n) for n in range(t, t2 + 1)))

    def with_window(self, t: int, t2: int) -> AlignedPoint:
        return AlignedPoint(self.level, self.offset, self.word(t, t2), self.provenance, self.source)


# -- metrics -----------------------------------------------------------------

def _scaled(values: Sequence[Fraction]) -> tuple[list[int], int]:
    den = 1
    for v in values:
        den = math.lcm(den, v.denominator)
    return [v.numerator * (den // v.denominator) for v in values], den


def _weighted_gap(xs: Sequence[Fraction], ys: Sequence[Fraction], W: int) -> Fraction:
    """``sum_{|n| <= W} |x_n - y_n| / 2^|n|`` for sequences indexed ``-W..W``."""
    xi, dx = _scaled(xs)
    yi, dy = _scaled(ys)
    den = math.lcm(dx, dy)
    fx, fy = den // dx, den // dy
    total = 0
    for idx in range(2 * W + 1):
        total += abs(xi[idx] * fx - yi[idx] * fy) << (W - abs(idx - W))
    return Fraction(total, den << W)


def metric_d(x: WindowWord, y: WindowWord, W: int | None = None) -> tuple[Fraction, Fraction]:
    """Rigorous bounds ``(lower, upper)`` on ``d(x, y) = sum_n |x_n - y_n| / 2^|n|``.

    Coordinates outside ``[-W, W]`` contribute at most ``2^(1-W)`` in total.
    ``W`` defaults to the largest symmetric radius both windows cover.
    """
    radius = min(x.symmetric_radius(), y.symmetric_radius())
    if W is None:
        W = radius
    if W < 0 or W > radius:
        raise WindowError("windows do not share the symmetric range [-W, W]")
    xs = [x[n] for n in range(-W, W + 1)]
    ys = [y[n] for n in range(-W, W + 1)]
    lower = _weighted_gap(xs, ys, W)
    return lower, lower + Fraction(2, 1 << W)


def metric_dn(x: WindowWord, y: WindowWord, n: int, W: int | None = None) -> tuple[Fraction, Fraction]:
    """Bounds on ``d_n(x, y) = max_{0 <= i < n} d(sigma^i x, sigma^i y)``."""
    if n < 1:
        raise ValueError("n must be positive")
    if W is None:
        W = min(-x.start, -y.start, x.end - n + 1, y.end - n + 1)
    if W < 0 or not (x.covers(-W, n - 1 + W) and y.covers(-W, n - 1 + W)):
        raise WindowError(f"windows must cover [-W, n - 1 + W] for n = {n}")
    lower = Fraction(0)
    for i in range(n):
        xs = [x[m] for m in range(i - W, i + W + 1)]
        ys = [y[m] for m in range(i - W, i + W + 1)]
        lower = max(lower, _weighted_gap(xs, ys, W))
    return lower, lower + Fraction(2, 1 << W)


# -- membership --------------------------------------------------------------

def coordinate_index(n: int, offset: int, b: int) -> int:
    """Index ``j`` in ``1..b`` of coordinate ``n`` for blocks starting at ``offset + 1``."""
    return (n - offset - 1) % b + 1


def membership(h: BlockHierarchy, k: int, w: WindowWord,
               offsets: Iterable[int] | None = None) -> list[int]:
    """All offsets ``l`` for which every window entry lies in its interval of ``B_k``.

    Partial blocks at the window edges impose only their visible
    coordinates.  ``offsets`` restricts the scan (needed when ``b_k`` is too
    large to try every offset).
    """
    b = h.b(k)
    if offsets is None:
        if b > EAGER_CAP:
            raise InfeasibleError(f"b_{k} too large to scan all offsets; pass candidate offsets")
        offsets = range(b)
    items = list(w.items())
    small = b <= EAGER_CAP
    block = h.block(k) if small else None
    witnesses = []
    for l in offsets:
        if not 0 <= l < b:
            raise ValueError(f"offset {l} outside [0, b_{k})")
        for n, v in items:
            j = (n - l - 1) % b
            iv = block[j] if small else h.interval_at(k, j + 1)
            if not iv.contains(v):
                break
        else:
            witnesses.append(l)
    return witnesses


# -- sampling ----------------------------------------------------------------

def _grid_point(interval: DyadicInterval, granularity: int, rng: random.Random) -> Fraction:
    lo = interval.lo.to_fraction()
    e = interval.length_exponent()
    steps = 1 << (granularity - e) if granularity >= e else 0
    return lo + Fraction(rng.randint(0, steps), 1 << granularity)


def _select(interval: DyadicInterval, selector: str, granularity: int, rng: random.Random | None) -> Fraction:
    if selector == MIDPOINT:
        return (interval.lo.to_fraction() + interval.hi.to_fraction()) / 2
    if selector == LOWER:
        return interval.lo.to_fraction()
    if selector == SEEDED:
        return _grid_point(interval, granularity, rng)
    raise ValueError(f"unknown selector {selector!r}")


def default_granularity(k: int) -> int:
    return k * (k + 1) // 2 + 8


def sample_periodic(h: BlockHierarchy, k: int, selector: str = MIDPOINT,
                    window: tuple[int, int] = (1, 1), seed: int = 0, offset: int = 0,
                    granularity: int | None = None) -> AlignedPoint:
    """The ``b_k``-periodic point whose period word picks ``selector(I_j)`` at slot ``j``."""
    b = h.b(k)
    g = default_granularity(k) if granularity is None else granularity
    period_cache: dict[int, Fraction] = {}

    def source(n: int) -> Fraction:
        j = coordinate_index(n, offset, b)
        if j not in period_cache:
            rng = random.Random(f"periodic:{seed}:{k}:{j}") if selector == SEEDED else None
            period_cache[j] = _select(h.interval_at(k, j), selector, g, rng)
        return period_cache[j]

    t, t2 = window
    word = WindowWord(t, tuple(source(n) for n in range(t, t2 + 1)))
    return AlignedPoint(k, offset % b, word, SAMPLED, source)


def sample_random(h: BlockHierarchy, k: int, seed: int, window: tuple[int, int],
                  granularity: int | None = None) -> AlignedPoint:
    """A point of ``X_k`` with a seeded offset and independent grid values in every block.

    Values lie on the ``2**-granularity`` grid inside each ``I_j^{(k)}``;
    the value at a coordinate depends only on ``(seed, k, block, j)``.
    """
    b = h.b(k)
    g = default_granularity(k) if granularity is None else granularity
    if g < h.exact_level(k).spectrum.max_exponent:
        raise ValueError("granularity finer than the shortest interval is required")
    offset = random.Random(f"offset:{seed}:{k}").randrange(b)

    def source(n: int) -> Fraction:
        m, j0 = divmod(n - offset - 1, b)
        rng = random.Random(f"block:{seed}:{k}:{m}:{j0}")
        return _grid_point(h.interval_at(k, j0 + 1), g, rng)

    t, t2 = window
    word = WindowWord(t, tuple(source(n) for n in range(t, t2 + 1)))
    return AlignedPoint(k, offset, word, SAMPLED, source)


def check_aligned(h: BlockHierarchy, point: AlignedPoint, level: int | None = None) -> None:
    """Raise :class:`MembershipError` unless the stored window fits ``point.offset``."""
    k = point.level if level is None else level
    offset = point.offset % h.b(k)
    if not membership(h, k, point.window, [offset]):
        raise MembershipError(f"window is not in X_{k} at offset {offset}")


# -- word files ---------------------------------------------------------------

def write_word(path: str | Path, word: WindowWord, meta: dict | None = None) -> None:
    lines = [f"# {key}={value}" for key, value in (meta or {}).items()]
    lines += [f"{n} {v.numerator}/{v.denominator}" for n, v in word.items()]
    Path(path).write_text("\n".join(lines) + "\n")


def read_word(path: str | Path) -> tuple[WindowWord, dict[str, str]]:
    """Parse a word file: ``n value`` lines, consecutive ``n``, ``#`` comments allowed."""
    meta: dict[str, str] = {}
    entries: list[tuple[int, Fraction]] = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition("=")
            if sep:
                meta[key.strip()] = value.strip()
            continue
        n, value = line.split()
        entries.append((int(n), Fraction(value)))
    if not entries:
        raise WindowError(f"{path}: no coordinates")
    entries.sort()
    start = entries[0][0]
    for i, (n, _) in enumerate(entries):
        if n != start + i:
            raise WindowError(f"{path}: coordinates must be consecutive (gap at {n})")
    return WindowWord(start, tuple(v for _, v in entries)), meta
