"""Constructive shift search: given x, y in X and eps, find M with d(sigma^M x, y) < eps.

The search follows the minimality argument.  Pick a window radius ``L``
and a level ``N`` so that two level-``N`` blocks cover ``[-L, L]``; read off
which tail tuple of ``B_{N+1}`` contains y's block (``m_1``); every block of
x at level ``N+1`` contains that tuple, at level-``N`` slot ``m_2``; shifting x
by ``b_N (m_2 - m_0) + p - q`` lays it over y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .dyadic import piece_containing
from .errors import InfeasibleError, SubshiftError, WindowError
from .hierarchy import BlockHierarchy
from .subshift import AlignedPoint, WindowWord, _weighted_gap, membership

DEFAULT_EXTRA_RADIUS = 8


def window_constants(eps: Fraction) -> tuple[Fraction, int]:
    """``(delta, L)`` such that ``|x_n - y_n| < delta`` on ``[-L, L]`` forces ``d(x, y) < eps``.

    With ``delta = eps/6`` the window contributes less than ``3 delta = eps/2``
    and the rest at most ``2^(1-L) <= eps/2``.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    L = 0
    while Fraction(2, 1 << L) > eps / 2:
        L += 1
    return eps / 6, L


def choose_level(h: BlockHierarchy, eps: Fraction, L: int | None = None,
                 max_level: int | None = None) -> int:
    """Smallest ``N >= 1`` with ``2^-N < delta`` and ``2L + 1 <= b_{N-1}``.

    Level ``N + 1`` must be exact in ``h`` (and ``<= max_level`` when given);
    otherwise :class:`InfeasibleError` reports the smallest workable eps.
    """
    eps = Fraction(eps)
    delta, L_min = window_constants(eps)
    L = L_min if L is None else L
    cap = _level_cap(h, max_level)
    N = 1
    while True:
        if Fraction(1, 1 << N) < delta:
            prev = h.levels[N - 1] if N - 1 <= h.K else None
            # levels past the exact range have astronomically long blocks
            if prev is None or not prev.exact or 2 * L + 1 <= prev.b:
                break
        N += 1
    if N > cap:
        bound, strict = minimum_feasible_epsilon(h, max_level)
        rel = ">" if strict else ">="
        raise InfeasibleError(
            f"eps = {eps} needs level N = {N} (and N+1 = {N + 1} exact); desk-scale cap is "
            f"N = {cap}; minimum feasible eps {rel} {bound}")
    # the block must cover the whole window radius
    assert 2 * L + 1 <= h.b(N - 1) <= h.b(N)
    return N


def _level_cap(h: BlockHierarchy, max_level: int | None) -> int:
    top = max(h.exact_levels)
    if max_level is not None:
        top = min(top, max_level)
    return top - 1


def minimum_feasible_epsilon(h: BlockHierarchy, max_level: int | None = None) -> tuple[Fraction, bool]:
    """Infimum of eps that :func:`choose_level` accepts; ``strict`` if not attained."""
    best: tuple[Fraction, bool] | None = None
    for N in range(1, _level_cap(h, max_level) + 1):
        L_max = (h.b(N - 1) - 1) // 2
        # eps > 6 * 2^-N and eps >= 2^(2 - L_max)
        a = Fraction(6, 1 << N)
        c = Fraction(4, 1 << L_max) if L_max >= 0 else Fraction(4)
        cand = (a, True) if a >= c else (c, False)
        if best is None or cand[0] < best[0]:
            best = cand
    if best is None:
        raise InfeasibleError("hierarchy needs at least two exact levels for the shift search")
    return best


@dataclass(frozen=True)
class ShiftCertificate:
    M: int
    L: int
    N: int
    m0: int | None
    L0: int | None
    m1: int | None
    m2: int | None
    p: int | None
    q: int | None
    radius: int
    verified_lower: Fraction
    verified_upper: Fraction
    epsilon: Fraction

    def to_dict(self) -> dict:
        def num(v):
            return None if v is None else (v if v.bit_length() <= 4096 else str(v))

        return {
            "M": num(self.M), "L": self.L, "N": self.N, "m0": self.m0, "L0": self.L0,
            "m1": num(self.m1), "m2": num(self.m2), "p": num(self.p), "q": num(self.q),
            "radius": self.radius, "epsilon": _frac(self.epsilon),
            "verified_lower": _frac(self.verified_lower),
            "verified_upper": _frac(self.verified_upper),
        }


def _frac(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def shifted_distance(x: AlignedPoint, y: AlignedPoint, M: int, W: int) -> tuple[Fraction, Fraction]:
    """Bounds on ``d(sigma^M x, y)`` from coordinates ``-W..W``."""
    xs = [x.value(n + M) for n in range(-W, W + 1)]
    ys = [y.value(n) for n in range(-W, W + 1)]
    lower = _weighted_gap(xs, ys, W)
    return lower, lower + Fraction(2, 1 << W)


def _offset_at(h: BlockHierarchy, point: AlignedPoint, k: int) -> int:
    """Offset of ``point`` at level ``k``; scans membership for external words."""
    if point.provenance == "sampled" and point.level >= k:
        return point.offset % h.b(k)
    found = membership(h, k, point.window)
    if not found:
        raise SubshiftError(f"point is not in X_{k} on its window")
    return found[0]


def solve(h: BlockHierarchy, x: AlignedPoint, y: AlignedPoint, eps: Fraction,
          extra_radius: int = DEFAULT_EXTRA_RADIUS, max_level: int | None = None,
          fast_path: bool = True) -> ShiftCertificate:
    """Run the constructive search and return a verified certificate.

    With ``fast_path`` the unshifted pair is tried first and returned as
    ``M = 0`` (with ``N = 0``) when it already certifies.  ``max_level``
    caps the level ``N + 1`` the search may use.
    """
    eps = Fraction(eps)
    delta, L = window_constants(eps)
    W = L + extra_radius

    if fast_path:
        try:
            lo, hi = shifted_distance(x, y, 0, W)
        except WindowError:
            hi = None
        if hi is not None and hi < eps:
            return ShiftCertificate(0, L, 0, None, None, None, None, None, None, W, lo, hi, eps)

    N = choose_level(h, eps, L, max_level)
    b_N = h.b(N)
    b_next = h.b(N + 1)
    level_next = h.level(N + 1)

    q = _offset_at(h, y, N)
    l_x = _offset_at(h, x, N + 1)
    p = l_x % b_N

    # y's level-N blocks are [q + b_N m + 1, q + b_N (m+1)]; block m0 holds L
    m0 = (L - q - 1) // b_N
    if m0 not in (-1, 0):
        raise SubshiftError(f"internal: m0 = {m0} outside {{-1, 0}}")
    L0 = max(-L, q + b_N * m0 + 1)

    # tail tuple of B_{N+1} containing y's block m0, digit by digit
    parts = 1 << (N + 1)
    base_n = q + b_N * m0
    tuple_index = 0
    for i, base in enumerate(h.intervals(N), start=1):
        value = y.value(base_n + i)
        if not base.contains(value):
            raise SubshiftError(f"y is not in X_{N} at offset {q}: coordinate {base_n + i}")
        tuple_index = (tuple_index << (N + 1)) | (piece_containing(base, parts, value) - 1)
    m1 = level_next.r_prev + tuple_index

    # x's level-(N+1) block starting at l_x + 1 holds that tuple at level-N slot m1
    m2 = (l_x - p) // b_N + m1
    M = b_N * (m2 - m0) + p - q

    # per-coordinate estimates on the matched block and on [-L, L0 - 1]
    near = Fraction(1, 1 << (N + 1))
    for i in range(1, b_N + 1):
        if abs(x.value(p + b_N * m2 + i) - y.value(base_n + i)) > near:
            raise SubshiftError(f"internal: matched block differs by more than 2^-{N + 1} at slot {i}")
    far = Fraction(1, 1 << N)
    for n in range(-L, L0):
        if abs(x.value(n + M) - y.value(n)) > far:
            raise SubshiftError(f"internal: preceding block differs by more than 2^-{N} at {n}")

    lo, hi = shifted_distance(x, y, M, W)
    if not hi < eps:
        raise SubshiftError(f"internal: certified bound {hi} not below eps {eps}")
    assert abs(M) <= 3 * b_next
    return ShiftCertificate(M, L, N, m0, L0, m1, m2, p, q, W, lo, hi, eps)


def brute_force_check(x: AlignedPoint | WindowWord, y: AlignedPoint | WindowWord, eps: Fraction,
                      M_bound: int, W: int | None = None) -> list[int]:
    """Every ``|M| <= M_bound`` with a certified ``d(sigma^M x, y) < eps``.

    Only stored windows are used.  ``W`` defaults to the largest radius both
    windows support across the whole scan.
    """
    eps = Fraction(eps)
    xw = x.window if isinstance(x, AlignedPoint) else x
    yw = y.window if isinstance(y, AlignedPoint) else y
    if W is None:
        W = min(yw.symmetric_radius(), -xw.start - M_bound, xw.end - M_bound)
    if W < 0 or not yw.covers(-W, W) or not xw.covers(-M_bound - W, M_bound + W):
        raise WindowError("windows do not cover the scanned shifts")
    # integer numerators over a common denominator
    den = math.lcm(*(v.denominator for v in xw.values + yw.values))
    X = [v.numerator * (den // v.denominator) for v in xw.values]
    Y = [yw[n].numerator * (den // yw[n].denominator) for n in range(-W, W + 1)]
    weights = [1 << (W - abs(n)) for n in range(-W, W + 1)]
    # lower + 2^(1-W) < eps  <=>  total + 2 den < eps * den * 2^W
    limit = eps * (den << W) - 2 * den
    valid = []
    for M in range(-M_bound, M_bound + 1):
        base = M - W - xw.start
        total = 0
        for idx in range(2 * W + 1):
            total += abs(X[base + idx] - Y[idx]) * weights[idx]
        if total < limit:
            valid.append(M)
    return valid
