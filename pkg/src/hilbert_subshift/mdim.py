"""Mean-dimension lower bounds for the constructed subshift.

The bound is a counting argument: at level ``k`` the block ``B_k`` is a
product of intervals, and projecting onto the coordinates longer than
``eps`` gives a cube whose ``Widim_eps`` equals its number of factors.  The
certificate collects, for each ``s``, the long-coordinate fractions of the
built levels and the schedule values they dominate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import __version__
from .errors import InfeasibleError, MembershipError
from .hierarchy import BlockHierarchy
from .schedule import REAL, format_fraction, threshold_exponent
from .subshift import MIDPOINT, AlignedPoint, WindowWord, sample_periodic


def widim_cube_value(n: int, delta: Fraction, tau: Fraction) -> int:
    """``Widim_delta([0, tau]^n, l-infinity) = n`` whenever ``0 < delta < tau``."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    if not 0 < delta < tau:
        raise ValueError(f"cube lemma needs 0 < delta < tau, got delta={delta}, tau={tau}")
    return n


def widim_lower_bound(h: BlockHierarchy, k: int, eps: Fraction) -> int | Fraction:
    """Lower bound for ``Widim_eps(B_k, l-infinity)``: coordinates longer than ``eps``.

    Returns a count at exact levels and a fraction of ``b_k`` at log-space
    levels.
    """
    return h.widim_lower_bound(k, Fraction(eps))


def epsilon_threshold(eps: Fraction) -> int:
    """The ``s >= 0`` with ``2^-((s+1)(s+2)/2) <= eps < 2^-(s(s+1)/2)``."""
    eps = Fraction(eps)
    if eps <= 0 or eps >= 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    s = 0
    while eps * (1 << threshold_exponent(s + 1)) < 1:
        s += 1
    return s


def embed_block_point(h: BlockHierarchy, k: int, x: Sequence[Fraction], z_selector: str = MIDPOINT,
                      window: tuple[int, int] | None = None, seed: int = 0) -> AlignedPoint:
    """Place a vector of ``B_k`` on coordinates ``0..b_k-1`` and pad with the periodic point z.

    The padding point has its level-``k`` blocks on ``[b_k m, b_k (m+1) - 1]``,
    so the result again has aligned blocks in ``B_k``.
    """
    b = h.b(k)
    if len(x) != b:
        raise MembershipError(f"expected {b} coordinates, got {len(x)}")
    values = [Fraction(v) for v in x]
    for j, (v, iv) in enumerate(zip(values, h.intervals(k)), start=1):
        if not iv.contains(v):
            raise MembershipError(f"coordinate {j - 1} = {v} not in I_{j}^({k}) = {iv}")
    z = sample_periodic(h, k, z_selector, window=(0, 0), seed=seed, offset=b - 1)

    def source(n: int) -> Fraction:
        return values[n] if 0 <= n < b else z.source(n)

    t, t2 = window if window is not None else (0, b - 1)
    word = WindowWord(t, tuple(source(n) for n in range(t, t2 + 1)))
    return AlignedPoint(k, b - 1, word, "sampled", source)


def sup_distance(x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    return max(abs(Fraction(a) - Fraction(b)) for a, b in zip(x, y))


@dataclass
class CertificateRow:
    s: int
    epsilon: Fraction
    fractions: dict[int, tuple[Fraction, Fraction]]
    eta_levels: dict[int, Fraction]
    eta_lower: Fraction
    mode: str
    verified: bool

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "epsilon": format_fraction(self.epsilon),
            "fractions": {str(k): format_fraction(lo) for k, (lo, _) in self.fractions.items()},
            "fraction_kind": {str(k): "exact" if lo == hi else "lower"
                              for k, (lo, hi) in self.fractions.items()},
            "eta_levels": {str(k): format_fraction(v) for k, v in self.eta_levels.items()},
            "eta_lower": format_fraction(self.eta_lower),
            "mode": self.mode,
            "verified": self.verified,
        }


@dataclass
class MdimCertificate:
    schedule_kind: str
    schedule_hash: str
    levels: int
    rows: list[CertificateRow] = field(default_factory=list)
    eta_sequence: list[Fraction] = field(default_factory=list)
    monotone: bool = True
    limit_bound: int | None = None

    @property
    def verified(self) -> bool:
        return self.monotone and all(row.verified for row in self.rows)

    def to_dict(self) -> dict:
        statements = ["mdim(X) <= 1 since X is a subsystem of the shift on [0,1]^Z"]
        if self.limit_bound is not None:
            statements.append("lower bounds eta(s) increase and converge to 1, so mdim(X) >= 1")
        return {
            "schedule": self.schedule_kind,
            "schedule_hash": self.schedule_hash,
            "version": __version__,
            "levels": self.levels,
            "rows": [row.to_dict() for row in self.rows],
            "eta_sequence": [format_fraction(v) for v in self.eta_sequence],
            "monotone": self.monotone,
            "limit_bound": self.limit_bound,
            "upper_bound": 1,
            "verified": self.verified,
            "statements": statements,
        }


def certify(h: BlockHierarchy, S_max: int) -> MdimCertificate:
    """Collect per-``s`` density rows for ``s = 0..S_max`` and verify them."""
    if S_max < 0:
        raise ValueError("S_max must be nonnegative")
    if h.K < S_max + 1:
        raise InfeasibleError(f"certifying s <= {S_max} needs levels up to {S_max + 1}; "
                              f"hierarchy has {h.K}")
    sched = h.schedule
    cert = MdimCertificate(sched.kind, sched.digest(), h.K)
    for s in range(S_max + 1):
        eps = Fraction(1, 1 << threshold_exponent(s + 1))
        eta1 = sched.eta1(s)
        fractions, etas = {}, {}
        ok = True
        for k in range(s + 1, h.K + 1):
            fractions[k] = h.long_fraction(k, s)
            etas[k] = sched.eta2(s, k)
            ok &= h.density_holds(k, s) and etas[k] > eta1
            if h.level(k).exact:
                # strictly-longer-than-eps count dominates the long count
                ok &= h.widim_lower_bound(k, eps) >= h.long_coordinate_count(k, s)
        mode = "exact" if all(h.level(k).exact for k in fractions) else "logspace"
        cert.rows.append(CertificateRow(s, eps, fractions, etas, eta1, mode, ok))
    cert.eta_sequence = [sched.eta1(s) for s in range(S_max + 1)]
    cert.monotone = all(a < b for a, b in zip(cert.eta_sequence, cert.eta_sequence[1:]))
    if sched.kind == REAL:
        cert.limit_bound = 1
    return cert
