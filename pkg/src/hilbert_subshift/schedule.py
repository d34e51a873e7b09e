"""Density schedules eta(s, k), eta(s) and the minimal repetition counts.

Two kinds of schedule exist.  ``real`` uses closed forms

    eta1(s)    = 1 - 1/(s + 2)
    eta2(s, k) = 1 - (1/(s + 2)) * (1 - 1/(2 (k - s + 1)))

which satisfy all four conditions for every ``0 <= s < k``.  ``toy`` is a
finite explicit table with small values so the first levels stay
enumerable; it is allowed to ignore the limit condition.
"""

from __future__ import annotations

import configparser
import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from .errors import ScheduleError, ScheduleInconsistencyError

REAL = "real"
TOY = "toy"


def threshold_exponent(s: int) -> int:
    """Exponent ``s(s+1)/2``; coordinates with length >= 2**-that are "long"."""
    return s * (s + 1) // 2


def format_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class EtaSchedule:
    kind: str
    eta2_table: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)
    eta1_table: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in (REAL, TOY):
            raise ScheduleError(f"unknown schedule kind {self.kind!r}")

    @classmethod
    def real(cls) -> EtaSchedule:
        return cls(REAL)

    @classmethod
    def toy(cls, eta2: Mapping[tuple[int, int], Fraction | str],
            eta1: Mapping[int, Fraction | str]) -> EtaSchedule:
        return cls(TOY,
                   {key: Fraction(v) for key, v in eta2.items()},
                   {key: Fraction(v) for key, v in eta1.items()})

    @property
    def k_max(self) -> int | None:
        """Largest level the schedule defines, ``None`` when unbounded."""
        if self.kind == REAL:
            return None
        return max((k for _, k in self.eta2_table), default=0)

    def eta2(self, s: int, k: int) -> Fraction:
        if not 0 <= s < k:
            raise ScheduleError(f"eta2 needs 0 <= s < k, got s={s}, k={k}")
        if self.kind == REAL:
            return 1 - Fraction(1, s + 2) * (1 - Fraction(1, 2 * (k - s + 1)))
        try:
            return self.eta2_table[s, k]
        except KeyError:
            raise ScheduleError(f"schedule has no entry eta2({s},{k})") from None

    def eta1(self, s: int) -> Fraction:
        if s < 0:
            raise ScheduleError(f"eta1 needs s >= 0, got {s}")
        if self.kind == REAL:
            return 1 - Fraction(1, s + 2)
        try:
            return self.eta1_table[s]
        except KeyError:
            raise ScheduleError(f"schedule has no entry eta1({s})") from None

    def to_text(self) -> str:
        """Canonical config-file text; also the basis of :meth:`digest`."""
        lines = ["[schedule]", f"kind={self.kind}"]
        for (s, k), v in sorted(self.eta2_table.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            lines.append(f"eta2 {s} {k} {format_fraction(v)}")
        for s, v in sorted(self.eta1_table.items()):
            lines.append(f"eta1 {s} {format_fraction(v)}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]

    @classmethod
    def from_text(cls, text: str) -> EtaSchedule:
        parser = configparser.ConfigParser(allow_no_value=True, delimiters=("=",))
        parser.optionxform = str
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ScheduleError(f"unreadable schedule file: {exc}") from exc
        if not parser.has_section("schedule"):
            raise ScheduleError("schedule file needs a [schedule] section")
        section = parser["schedule"]
        kind = (section.get("kind") or "").strip()
        if kind == REAL:
            return cls.real()
        if kind != TOY:
            raise ScheduleError(f"kind must be 'real' or 'toy', got {kind!r}")
        eta2: dict[tuple[int, int], Fraction] = {}
        eta1: dict[int, Fraction] = {}
        for key, value in section.items():
            if key == "kind":
                continue
            if value is not None:
                raise ScheduleError(f"unexpected assignment {key}={value}")
            parts = key.split()
            try:
                if parts[0] == "eta2" and len(parts) == 4:
                    eta2[int(parts[1]), int(parts[2])] = _parse_rational(parts[3])
                elif parts[0] == "eta1" and len(parts) == 3:
                    eta1[int(parts[1])] = _parse_rational(parts[2])
                else:
                    raise ScheduleError(f"unrecognised schedule line {key!r}")
            except ValueError as exc:
                raise ScheduleError(f"bad number in line {key!r}: {exc}") from exc
        return cls(TOY, eta2, eta1)

    @classmethod
    def load(cls, path: str | Path) -> EtaSchedule:
        return cls.from_text(Path(path).read_text())


def _parse_rational(text: str) -> Fraction:
    value = Fraction(text)
    if "/" in text:
        p, q = text.split("/")
        if Fraction(int(p), int(q)) != value or int(q) != value.denominator:
            raise ValueError(f"{text} is not in lowest terms")
    return value


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": list(self.violations), "notes": list(self.notes)}


def validate_schedule(sched: EtaSchedule, K: int) -> ValidationReport:
    """Check the four schedule conditions for every ``0 <= s < k <= K``.

    Missing table entries raise :class:`ScheduleError`; violated
    inequalities are collected in the returned report.
    """
    if K < 1:
        raise ScheduleError("validation needs K >= 1")
    report = ValidationReport()
    out = report.violations
    for s in range(K):
        e1 = sched.eta1(s)
        if not 0 < e1 < 1:
            out.append(f"range violated for eta1(s={s}) = {format_fraction(e1)}")
        for k in range(s + 1, K + 1):
            e2 = sched.eta2(s, k)
            if not 0 < e2 < 1:
                out.append(f"range violated at (s={s},k={k}): eta2 = {format_fraction(e2)}")
            if k > s + 1 and not e2 < sched.eta2(s, k - 1):
                out.append(f"strict-decrease violated at (s={s},k={k})")
            if not e2 > e1:
                out.append(f"lower-bound violated at (s={s},k={k}): "
                           f"eta2 = {format_fraction(e2)} <= eta1 = {format_fraction(e1)}")
    if sched.kind == REAL:
        for s in range(K - 1):
            if not sched.eta1(s + 1) > sched.eta1(s):
                out.append(f"limit condition violated: eta1 not increasing at s={s}")
        # 1 - eta1(s) == 1/(s+2) exactly, which tends to 0
        for s in range(K):
            if 1 - sched.eta1(s) != Fraction(1, s + 2):
                out.append(f"limit condition violated: eta1({s}) departs from 1 - 1/(s+2)")
    else:
        report.notes.append("limit condition eta1(s) -> 1 not checkable on a finite table; skipped")
    return report


def repetition_shortfalls(k: int, sched: EtaSchedule, counts: Mapping[int, int],
                          b_prev: int, r: int) -> list[int]:
    """Values of ``s`` whose density inequality fails for repetition count ``r``."""
    T = 1 << (k * b_prev)
    failing = []
    for s in range(k):
        c = long_count(counts, s)
        eta = sched.eta2(s, k)
        # c*r / (b_prev*(r+T)) >= eta, cross-multiplied
        if c * r * eta.denominator < eta.numerator * b_prev * (r + T):
            failing.append(s)
    return failing


def long_count(counts: Mapping[int, int], s: int) -> int:
    cut = threshold_exponent(s)
    return sum(c for e, c in counts.items() if e <= cut)


def minimal_repetition(k: int, sched: EtaSchedule, counts: Mapping[int, int], b_prev: int) -> int:
    """Smallest ``r >= 1`` meeting every level-``k`` density inequality.

    ``counts`` is the level ``k-1`` length spectrum (exponent -> count).
    For each s the inequality is ``c_s r / (b_prev (r + T)) >= eta2(s, k)``
    with ``T = 2**(k b_prev)``; solving for r gives
    ``r >= eta b_prev T / (c_s - eta b_prev)``.
    """
    if k < 1:
        raise ValueError("repetition counts exist only for k >= 1")
    T = 1 << (k * b_prev)
    r = 1
    for s in range(k):
        c = long_count(counts, s)
        eta = sched.eta2(s, k)
        p, q = eta.numerator, eta.denominator
        slack = q * c - p * b_prev
        if slack <= 0:
            raise ScheduleInconsistencyError(
                f"level {k}: long fraction {c}/{b_prev} does not exceed eta2({s},{k}) = {p}/{q}")
        r = max(r, -(-(p * b_prev * T) // slack))
    return r
