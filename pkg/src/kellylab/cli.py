"""Command-line entry point: ``kellylab <subcommand> [options]``.

Exit codes: 0 for any answer (including no-edge, ruin, not-a-type and
degenerate outcomes, which are reported in the payload), 1 for domain errors
such as an exceeded enumeration budget or invalid input data, 2 for usage
errors.
"""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import backtest, growth_opt, kelly_core, type_class, winner_fraction
from .errors import InvalidSimplex, KellyLabError, NotAType, RuinRisk
from .info_measures import as_simplex, to_bits

SUBCOMMANDS = (
    "kelly", "horse-race", "optimize", "expand", "concentration",
    "dominant", "winner-fraction", "compare", "synth",
)


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _simplex(text):
    try:
        return as_simplex(_floats(text))
    except InvalidSimplex as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _ints(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _nats_bits(prefix, value):
    return {f"{prefix}_nats": value, f"{prefix}_bits": to_bits(value)}


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return None
        return x
    return x


# -- subcommands ------------------------------------------------------------

def cmd_kelly(args):
    game = kelly_core.BinaryGame(args.p, args.r)
    f_star = kelly_core.kelly_fraction(game)
    out = {
        "p": args.p,
        "r": args.r,
        "f_star": f_star,
        "no_edge": not kelly_core.has_edge(game),
        **_nats_bits("g_star", kelly_core.kelly_growth(game, f_star)),
        **_nats_bits("kl_fair", kelly_core.kelly_growth_at_optimum_fair_odds(game)),
    }
    if args.f is not None:
        out["f"] = args.f
        try:
            out.update(_nats_bits("g_f", kelly_core.kelly_growth(game, args.f)))
            out["ruin"] = False
        except RuinRisk:
            out.update({"g_f_nats": -math.inf, "g_f_bits": -math.inf, "ruin": True})
    return out


def cmd_horse_race(args):
    race = kelly_core.HorseRace(args.probs, args.returns)
    w = kelly_core.horse_race_optimal(race) if args.weights is None else args.weights
    out = {"w_star": kelly_core.horse_race_optimal(race), "weights": w, "fair_odds": race.is_fair()}
    try:
        d = kelly_core.horse_race_growth(race, w)
    except RuinRisk as exc:
        out.update({"ruin": True, "ruin_horse": exc.row, "total_nats": -math.inf, "total_bits": -math.inf})
        return out
    out["ruin"] = False
    out.update(_nats_bits("money", d.money_term))
    out.update(_nats_bits("entropy", d.entropy_term))
    out.update(_nats_bits("divergence", d.divergence_term))
    out.update(_nats_bits("total", d.total))
    if race.is_fair():
        kl_q, kl_w = kelly_core.fair_odds_growth(race, w)
        out.update(_nats_bits("kl_market", kl_q))
        out.update(_nats_bits("kl_weights", kl_w))
    return out


def cmd_optimize(args):
    scenarios = backtest.load_scenarios(args.scenarios)
    w, cert = growth_opt.log_optimal_portfolio(scenarios)
    return {
        "w_star": w,
        **_nats_bits("g_star", growth_opt.expected_log_growth(scenarios, w)),
        "multipliers": cert.multipliers,
        "max_violation": cert.max_violation,
        "certified": cert.holds(),
        "degenerate": cert.degenerate,
    }


def _matrix(args, m, n):
    if args.matrix is not None:
        matrix = backtest.load_returns(args.matrix).matrix
        if m is not None and matrix.m != m:
            raise KellyLabError(f"--assets {m} but matrix has {matrix.m} assets")
        if n is not None and matrix.n != n:
            raise KellyLabError(f"--periods {n} but matrix has {matrix.n} periods")
        return matrix
    if m is None or n is None:
        raise KellyLabError("give --matrix, or --assets and --periods to generate one")
    rng = np.random.default_rng(args.seed)
    return growth_opt.ReturnMatrix(rng.lognormal(0.0, 0.2, size=(m, n)))


def cmd_expand(args):
    m = args.assets if args.assets is not None else args.weights.size
    matrix = _matrix(args, m, args.periods)
    check = type_class.expand_identity_check(matrix, args.weights, args.budget)
    return {"lhs": check.lhs, "rhs": check.rhs, **_nats_bits("log_lhs", math.log(check.lhs)),
            "rel_err": check.rel_err, "terms": check.terms, "assets": matrix.m, "periods": matrix.n}


def cmd_concentration(args):
    rows = type_class.mass_concentration_check(args.weights, args.periods, args.budget)
    m = args.weights.size
    return [
        {**{f"n_{i + 1}": c for i, c in enumerate(r.counts)},
         "exact_log_mass": r.exact_log_mass, "minus_n_kl": r.minus_n_kl, "gap": r.gap,
         "exact_log_mass_bits": to_bits(r.exact_log_mass), "minus_n_kl_bits": to_bits(r.minus_n_kl),
         "gap_bits": to_bits(r.gap), "sandwich_ok": r.sandwich_holds(m)}
        for r in rows
    ]


def cmd_dominant(args):
    lengths = args.periods
    matrix = _matrix(args, args.weights.size, None if args.matrix else max(lengths))
    rows = []
    for n in lengths:
        if n > matrix.n:
            raise KellyLabError(f"period count {n} exceeds the matrix's {matrix.n} periods")
        try:
            res = type_class.dominant_class_growth(matrix.head(n), args.weights, args.budget)
        except NotAType:
            # an answer, not a failure: W has no type class at this length
            rows.append({"n": n, "not_a_type": True, "approx_log": None, "exact_log": None,
                         "per_period_gap": None, "per_period_gap_bits": None})
            continue
        rows.append({"n": n, "not_a_type": False, "approx_log": res.approx_log,
                     "exact_log": res.exact_log, "per_period_gap": res.per_period_gap,
                     "per_period_gap_bits": to_bits(res.per_period_gap)})
    return rows


def cmd_winner_fraction(args):
    scenarios = backtest.load_scenarios(args.scenarios)
    return winner_fraction.entropy_bound_check(scenarios).as_dict()


def cmd_compare(args):
    table = backtest.load_returns(args.returns, allow_zero=args.horse_race)
    if args.wa.size != len(table.assets) or args.wb.size != len(table.assets):
        raise KellyLabError(f"weights must have {len(table.assets)} entries")
    return backtest.compare_strategies(table, args.wa, args.wb).as_dict()


def cmd_synth(args):
    if args.scenarios is not None:
        spec = backtest.load_scenarios(args.scenarios)
    elif args.probs is not None and args.returns is not None:
        spec = kelly_core.HorseRace(args.probs, args.returns)
    else:
        raise KellyLabError("synth needs --scenarios, or --probs and --returns for a horse race")
    table = backtest.generate_synthetic(spec, args.periods, args.seed)
    return backtest.dump_returns(table)


COMMANDS = {
    "kelly": cmd_kelly,
    "horse-race": cmd_horse_race,
    "optimize": cmd_optimize,
    "expand": cmd_expand,
    "concentration": cmd_concentration,
    "dominant": cmd_dominant,
    "winner-fraction": cmd_winner_fraction,
    "compare": cmd_compare,
    "synth": cmd_synth,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None,
                        help="max sequences to enumerate (default: $KELLYLAB_BUDGET or 10^7)")

    parser = argparse.ArgumentParser(prog="kellylab", description="Kelly growth, divergence and type-class tools")
    sub = parser.add_subparsers(dest="command", required=True, metavar="{" + ",".join(SUBCOMMANDS) + "}")

    p = sub.add_parser("kelly", parents=[common], help="closed-form binary Kelly bet")
    p.add_argument("--p", type=float, required=True, help="win probability")
    p.add_argument("--r", type=float, required=True, help="gross return multiplier on a win")
    p.add_argument("--f", type=float, default=None, help="also evaluate growth at this fraction")

    p = sub.add_parser("horse-race", parents=[common], help="growth decomposition for a horse race")
    p.add_argument("--probs", type=_simplex, required=True)
    p.add_argument("--returns", type=_floats, required=True)
    p.add_argument("--weights", type=_simplex, default=None, help="default: proportional betting")

    p = sub.add_parser("optimize", parents=[common], help="log-optimal portfolio for a scenario CSV")
    p.add_argument("--scenarios", required=True, help="CSV with header prob,<asset>,...")

    p = sub.add_parser("expand", parents=[common], help="sum-of-products identity check")
    p.add_argument("--weights", type=_simplex, required=True)
    p.add_argument("--matrix", default=None, help="returns CSV (date,<asset>,...)")
    p.add_argument("--assets", type=int, default=None)
    p.add_argument("--periods", type=int, default=None)

    p = sub.add_parser("concentration", parents=[common], help="type-class mass vs exp(-n KL)")
    p.add_argument("--weights", type=_simplex, required=True)
    p.add_argument("--periods", type=int, required=True)

    p = sub.add_parser("dominant", parents=[common], help="dominant-class approximation of ln R_n")
    p.add_argument("--weights", type=_simplex, required=True)
    p.add_argument("--periods", type=_ints, required=True, help="comma-separated lengths, e.g. 4,8,12")
    p.add_argument("--matrix", default=None)

    p = sub.add_parser("winner-fraction", parents=[common], help="winner-fraction entropy bound")
    p.add_argument("--scenarios", required=True)

    p = sub.add_parser("compare", parents=[common], help="A/B backtest difference in bits")
    p.add_argument("--returns", required=True, help="returns CSV (date,<asset>,...)")
    p.add_argument("--wa", type=_simplex, required=True)
    p.add_argument("--wb", type=_simplex, required=True)
    p.add_argument("--horse-race", action="store_true", help="allow zero returns (losing horses)")

    p = sub.add_parser("synth", parents=[common], help="IID synthetic returns CSV")
    p.add_argument("--periods", type=int, required=True)
    p.add_argument("--probs", type=_simplex, default=None)
    p.add_argument("--returns", type=_floats, default=None)
    p.add_argument("--scenarios", default=None)
    p.add_argument("--out", default=None, help="write CSV here instead of stdout")
    return parser


def _render(payload, fmt):
    if isinstance(payload, str):
        return payload
    payload = _jsonable(payload)
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"
    rows = payload if isinstance(payload, list) else [payload]
    if fmt == "csv":
        buf = io.StringIO()
        keys = list(rows[0]) if rows else []
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(keys)
        for row in rows:
            writer.writerow([";".join(map(str, v)) if isinstance(v, list) else v for v in row.values()])
        return buf.getvalue()
    blocks = ["\n".join(f"{k}: {v}" for k, v in row.items()) for row in rows]
    return "\n\n".join(blocks) + "\n"


def run(argv=None, stdout=None, stderr=None):
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        payload = COMMANDS[args.command](args)
    except (KellyLabError, ValueError, OSError) as exc:
        print(f"kellylab {args.command}: {exc}", file=stderr)
        return 1
    text = _render(payload, args.format)
    if args.command == "synth" and args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
