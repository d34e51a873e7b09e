"""Command-line front end.

Exit codes: 0 success, 1 usage errors (bad flags, malformed files),
2 infeasible requests (level caps, windows too small, invalid schedules).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import InfeasibleError, MembershipError, ScheduleError, SubshiftError, WindowError
from .hierarchy import DEFAULT_BUDGET, EAGER_CAP, BlockHierarchy
from .mdim import certify
from .minimality import solve
from .schedule import EtaSchedule, format_fraction, validate_schedule
from .subshift import (EXTERNAL, LOWER, MIDPOINT, SEEDED, AlignedPoint, membership, read_word,
                       sample_periodic, sample_random, write_word)

BLOCK_RANDOM = "block-random"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("epsilon must be positive")
    return value


def _window(text: str) -> tuple[int, int]:
    try:
        t, t2 = (int(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like T:T', got {text!r}") from None
    if t > t2:
        raise argparse.ArgumentTypeError("window start exceeds end")
    return t, t2


def _budget(text: str) -> int:
    value = int(text)
    if value < 1 << 10:
        raise argparse.ArgumentTypeError("budget must be at least 2^10 bits")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--schedule", default="real",
                        help="schedule config file, or 'real' for the default schedule")
    common.add_argument("--level", type=int, default=None, help="level K")
    common.add_argument("--budget", type=_budget, default=DEFAULT_BUDGET, help="exact-mode bit budget")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", default=None, help="write the report (or word file for 'sample') here")

    parser = _Parser(prog="hilbert-subshift", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("build", parents=[common], help="build levels and print the level table")
    p = sub.add_parser("validate-schedule", parents=[common], help="check the schedule conditions")
    p = sub.add_parser("inspect", parents=[common], help="level table plus construction identities")
    p.add_argument("--coordinate", type=int, default=None, help="print I_j at --level for this j")

    p = sub.add_parser("sample", parents=[common], help="sample a point of X_K on a window")
    p.add_argument("--window", type=_window, default=(-20, 20))
    p.add_argument("--selector", choices=(BLOCK_RANDOM, MIDPOINT, LOWER, SEEDED), default=BLOCK_RANDOM)

    p = sub.add_parser("member", parents=[common], help="offsets at which a word fits X_K")
    p.add_argument("word")

    p = sub.add_parser("shift-search", parents=[common], help="certify d(sigma^M x, y) < eps")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--epsilon", type=_fraction, required=True)
    p.add_argument("--no-fast-path", action="store_true", help="always run the constructive search")

    p = sub.add_parser("certify", parents=[common], help="mean-dimension lower-bound certificate")
    p.add_argument("--s-max", type=int, default=None)
    return parser


# -- helpers -------------------------------------------------------------------

def _load_schedule(name: str) -> EtaSchedule:
    if name == "real":
        return EtaSchedule.real()
    path = Path(name)
    if not path.exists():
        raise UsageError(f"schedule file not found: {name}")
    return EtaSchedule.load(path)


def _big(n: int | None):
    """Integers too long for a report are replaced by their log2 bounds."""
    if n is None or n.bit_length() <= 4096:
        return n
    return {"log2_bounds": [n.bit_length() - 1, n.bit_length()]}


def _provenance(sched: EtaSchedule) -> dict:
    return {"version": __version__, "schedule": sched.kind, "schedule_hash": sched.digest()}


def _level_rows(h: BlockHierarchy) -> list[dict]:
    rows = []
    for lvl in h.levels:
        row = {"k": lvl.k, "mode": lvl.mode, "b": _big(lvl.b), "r_prev": _big(lvl.r_prev),
               "log2_b": [_big(v) for v in lvl.log2_b] if lvl.log2_b else None,
               "log2_tail_count": _big(lvl.k * h.levels[lvl.k - 1].b)
               if lvl.k and h.levels[lvl.k - 1].exact else None}
        if lvl.exact:
            row["spectrum"] = {str(e): _big(c) for e, c in sorted(lvl.spectrum.counts.items())}
        else:
            row["cumulative_fraction"] = {str(E): [format_fraction(lo), format_fraction(hi)]
                                          for E, (lo, hi) in sorted(lvl.cumulative.items())}
        margins = {}
        for s in range(lvl.k):
            lo, _ = h.long_fraction(lvl.k, s)
            margins[str(s)] = format_fraction(lo - h.schedule.eta2(s, lvl.k))
        row["density_margins"] = margins
        row["density_ok"] = all(h.density_holds(lvl.k, s) for s in range(lvl.k))
        rows.append(row)
    return rows


def _short(value) -> str:
    if isinstance(value, dict):
        lo, hi = value["log2_bounds"]
        return f"~2^{lo}"
    return "-" if value is None else str(value)


def _text_levels(rows: list[dict]) -> str:
    lines = []
    for row in rows:
        size = _short(row["b"]) if row["b"] is not None else (
            f"2^[{_short(row['log2_b'][0])}, {_short(row['log2_b'][1])}]" if row["log2_b"]
            else "unrepresentable")
        lines.append(f"level {row['k']} ({row['mode']}): b = {size}, r_prev = {_short(row['r_prev'])}")
        if "spectrum" in row:
            spec = ", ".join(f"{e}:{_short(c)}" for e, c in row["spectrum"].items())
            lines.append(f"  spectrum {{{spec}}}")
        if row["density_margins"]:
            margins = ", ".join(f"s={s}: {float(Fraction(m)):.6g}" for s, m in row["density_margins"].items())
            lines.append(f"  density margins {margins}  ok={row['density_ok']}")
    return "\n".join(lines)


def _emit(report: dict, args, text: str | None = None, to_out: bool = True) -> None:
    if args.format == "text" and text is not None:
        body = text + "\n"
    else:
        body = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if to_out and args.out:
        Path(args.out).write_text(body)
    else:
        sys.stdout.write(body)


def _hierarchy(args, sched: EtaSchedule, default_level: int) -> BlockHierarchy:
    K = default_level if args.level is None else args.level
    if K < 0:
        raise UsageError("--level must be nonnegative")
    return BlockHierarchy.build(sched, K, budget=args.budget)


def _default_level(sched: EtaSchedule, fallback: int) -> int:
    return fallback if sched.k_max is None else min(fallback, sched.k_max)


def _read_point(path: str) -> AlignedPoint:
    word, _ = read_word(path)
    return AlignedPoint(0, 0, word, EXTERNAL)


# -- commands ------------------------------------------------------------------

def cmd_build(args) -> int:
    sched = _load_schedule(args.schedule)
    h = _hierarchy(args, sched, _default_level(sched, 3))
    rows = _level_rows(h)
    report = {**_provenance(sched), "command": args.command, "budget": args.budget, "levels": rows}
    _emit(report, args, _text_levels(rows))
    return 0


def cmd_inspect(args) -> int:
    sched = _load_schedule(args.schedule)
    h = _hierarchy(args, sched, _default_level(sched, 2))
    if args.coordinate is not None:
        interval = h.interval_at(h.K, args.coordinate)
        report = {**_provenance(sched), "command": "inspect", "k": h.K, "j": args.coordinate,
                  "interval": [str(interval.lo), str(interval.hi)]}
        _emit(report, args, f"I_{args.coordinate}^({h.K}) = {interval}")
        return 0
    rows = _level_rows(h)
    identities = []
    for k in h.exact_levels:
        if k == 0:
            continue
        ok, witness = h.head_tail_identity_check(k)
        identities.append({"k": k, "max_tail_length": str(h.max_tail_length(k)),
                           "min_length": str(h.min_length(k)),
                           "head_tail_identity": ok, "witness": witness})
    report = {**_provenance(sched), "command": "inspect", "budget": args.budget,
              "levels": rows, "identities": identities}
    text = _text_levels(rows) + "\n" + "\n".join(
        f"level {r['k']}: M_k = {r['max_tail_length']}, min length = {r['min_length']}, "
        f"head/tail identity {'holds' if r['head_tail_identity'] else 'FAILS at ' + str(r['witness'])}"
        for r in identities)
    _emit(report, args, text)
    return 0


def cmd_validate(args) -> int:
    sched = _load_schedule(args.schedule)
    K = args.level if args.level is not None else _default_level(sched, 10)
    report = validate_schedule(sched, K)
    out = {**_provenance(sched), "command": "validate-schedule", "K": K, **report.to_dict()}
    text = "\n".join(["valid" if report.ok else "INVALID"] + report.violations
                     + [f"note: {n}" for n in report.notes])
    _emit(out, args, text)
    return 0 if report.ok else 2


def cmd_sample(args) -> int:
    sched = _load_schedule(args.schedule)
    h = _hierarchy(args, sched, _default_level(sched, 2))
    k = h.K
    if args.selector == BLOCK_RANDOM:
        point = sample_random(h, k, args.seed, args.window)
    else:
        point = sample_periodic(h, k, args.selector, args.window, seed=args.seed)
    meta = {"level": k, "offset": _big(point.offset), "selector": args.selector, "seed": args.seed}
    if args.out:
        write_word(args.out, point.window, meta)
    report = {**_provenance(sched), "command": "sample", **meta, "provenance": point.provenance,
              "window": [point.window.start, point.window.end],
              "values": [format_fraction(v) for v in point.window.values]}
    _emit(report, args, "\n".join(f"{n} {format_fraction(v)}" for n, v in point.window.items()),
          to_out=False)
    return 0


def cmd_member(args) -> int:
    sched = _load_schedule(args.schedule)
    h = _hierarchy(args, sched, _default_level(sched, 2))
    word, _ = read_word(args.word)
    witnesses = membership(h, h.K, word)
    report = {**_provenance(sched), "command": "member", "level": h.K,
              "window": [word.start, word.end], "member": bool(witnesses), "witnesses": witnesses}
    _emit(report, args, f"level {h.K}: " + (f"member, offsets {witnesses}" if witnesses else "non-member"))
    return 0


def cmd_shift_search(args) -> int:
    sched = _load_schedule(args.schedule)
    h = _hierarchy(args, sched, _default_level(sched, 3))
    # finite word files can only serve levels whose blocks can be scanned
    usable = [k for k in h.exact_levels if h.b(k) <= EAGER_CAP]
    x, y = _read_point(args.x), _read_point(args.y)
    cert = solve(h, x, y, args.epsilon, max_level=max(usable), fast_path=not args.no_fast_path)
    report = {**_provenance(sched), "command": "shift-search", **cert.to_dict()}
    _emit(report, args, f"M = {cert.M}, N = {cert.N}, d(sigma^M x, y) <= "
                        f"{float(cert.verified_upper):.6g} < {float(cert.epsilon):.6g}")
    return 0


def cmd_certify(args) -> int:
    sched = _load_schedule(args.schedule)
    K = args.level
    if K is None:
        K = _default_level(sched, 3) if args.s_max is None else args.s_max + 1
    h = BlockHierarchy.build(sched, K, budget=args.budget)
    s_max = K - 1 if args.s_max is None else args.s_max
    cert = certify(h, s_max)
    report = {**_provenance(sched), "command": "certify", **cert.to_dict()}
    lines = []
    for row in cert.rows:
        fr = ", ".join(f"k={k}: {float(Fraction(v)):.6g}" for k, v in row.to_dict()["fractions"].items())
        lines.append(f"s={row.s} eps={format_fraction(row.epsilon)} eta(s)={format_fraction(row.eta_lower)} "
                     f"[{row.mode}] {fr} {'ok' if row.verified else 'FAILED'}")
    lines.append("mdim >= 1 (limit of eta(s))" if cert.limit_bound else "finite schedule: no limit claim")
    _emit(report, args, "\n".join(lines))
    return 0 if cert.verified else 2


COMMANDS = {
    "build": cmd_build,
    "inspect": cmd_inspect,
    "validate-schedule": cmd_validate,
    "sample": cmd_sample,
    "member": cmd_member,
    "shift-search": cmd_shift_search,
    "certify": cmd_certify,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    # bad input files are usage errors, not infeasibility
    except (UsageError, ScheduleError, WindowError, MembershipError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InfeasibleError, SubshiftError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
