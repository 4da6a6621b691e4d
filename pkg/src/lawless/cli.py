"""The `lawless` command line: seeded experiments with CSV/JSON output.

Group specs use a small registry language: alt:K and sym:K (natural
permutation actions), tree:D,DEPTH (truncated automorphism groups of rooted
trees), thompson (the dyadic PL action on (0,1)) and grig (the Grigorchuk
generators, for rist-search).  Exit status is 0 when no row fails and no
error occurred, 1 on experiment failure, 2 on usage or malformed input.

Output files never contain timestamps, so a config plus a seed reproduces
them byte for byte; wall-clock time goes to the human summary only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

from . import montecarlo, perm, separation, thompson, trees, words
from .errors import LawlessError, ParseError

DEFAULT_SEED = 7


@dataclass
class ExperimentConfig:
    subcommand: str
    options: dict = field(default_factory=dict)


@dataclass
class RunReport:
    config: ExperimentConfig
    exit_status: int
    summary: str
    outputs: list[str] = field(default_factory=list)
    wall_clock: float = 0.0


def _parse_word(text: str) -> words.ReducedWord:
    if any(ch.isdigit() or ch in "- " for ch in text):
        return words.parse_int_word(text)
    return words.parse_word(text)


def build_action(spec: str) -> separation.SeparatingAction:
    """Resolve a group spec to its separating-action adapter."""
    if spec == "thompson":
        return separation.thompson_action()
    if spec.startswith("alt:") or spec.startswith("sym:"):
        kind = "alternating" if spec.startswith("alt:") else "symmetric"
        k = int(spec.split(":", 1)[1])
        chain = perm.build_bsgs(perm.standard_group(kind, k))
        action = separation.perm_action(chain, name=spec)
        return action
    if spec.startswith("tree:"):
        d, depth = (int(t) for t in spec.split(":", 1)[1].split(","))
        return separation.TreeAction(d, depth, name=spec)
    raise ParseError(f"no separating-action adapter for {spec!r} (use alt:K, sym:K, tree:D,DEPTH or thompson)")


def build_perm_group(spec: str) -> tuple[str, int]:
    if spec.startswith("alt:"):
        return "alternating", int(spec.split(":", 1)[1])
    if spec.startswith("sym:"):
        return "symmetric", int(spec.split(":", 1)[1])
    raise ParseError(f"{spec!r} is not a finite permutation group spec (use alt:K or sym:K)")


def _write_table(table: montecarlo.ExperimentTable, out: str, config: ExperimentConfig) -> list[str]:
    csv_path = f"{out}.csv"
    json_path = f"{out}.json"
    with open(csv_path, "w") as fh:
        fh.write(table.to_csv())
    payload = {"config": {"subcommand": config.subcommand, **config.options}, "table": table.to_json()}
    with open(json_path, "w") as fh:
        fh.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return [csv_path, json_path]


def _table_summary(table: montecarlo.ExperimentTable) -> str:
    lines = []
    for r in table.rows:
        params = " ".join(f"{k}={v}" for k, v in r.params.items())
        if r.estimate is None:
            lines.append(f"  {params}: {r.verdict}")
        else:
            e = r.estimate
            bound = "" if r.bound is None else f" bound={r.bound}"
            verdict = f" {r.verdict}" if r.verdict else ""
            lines.append(
                f"  {params}: {e.successes}/{e.samples} = {float(e.point):.6f}"
                f" ci=[{e.ci_low:.6f}, {e.ci_high:.6f}]{bound}{verdict}"
            )
    return "\n".join(lines)


EXPERIMENTS = {
    "bound-check": "estimate word survival over a natural action and test the (1 - n/a)^n stabilizer-orbit bound",
    "witness": "construct a certificate that a word is not a law: a tuple with pairwise distinct trajectory points",
    "verify": "re-verify a witness certificate from scratch (trajectory recomputation and final moved point)",
    "alter-sweep": "sweep alternating degrees to exhibit survival probabilities climbing toward one",
    "freeness": "fraction of Haar tuples on the truncated tree admitting a short visible relation, per depth",
    "separation-order": "certify the minimum stabilizer orbit size (n, a) of a finite permutation action",
    "exact-prob": "exact word survival probability by full tuple enumeration (the brute-force oracle)",
    "rist-search": "search generator words supported on one subtree: nontrivial rigid stabilizer witnesses",
}


def list_experiments() -> str:
    lines = ["available experiments:"]
    for name, desc in EXPERIMENTS.items():
        lines.append(f"  {name:17s} {desc}")
    return "\n".join(lines)


def _cmd_list(config: ExperimentConfig) -> RunReport:
    return RunReport(config, 0, list_experiments())


def _cmd_bound_check(config: ExperimentConfig) -> RunReport:
    o = config.options
    kind, k = build_perm_group(o["group"])
    w = _parse_word(o["word"])
    table = montecarlo.bound_check_table(
        kind, k, w, o["samples"], o["seed"], o["confidence"], o["workers"]
    )
    outputs = _write_table(table, o["out"], config)
    status = 1 if table.has_failure() else 0
    return RunReport(config, status, _table_summary(table), outputs)


def _cmd_exact_prob(config: ExperimentConfig) -> RunReport:
    o = config.options
    kind, k = build_perm_group(o["group"])
    w = _parse_word(o["word"])
    p = montecarlo.exact_prob_small(perm.standard_group(kind, k), w, o["budget"])
    payload = {
        "config": {"subcommand": config.subcommand, **o},
        "probability": str(p),
        "probability_float": float(p),
    }
    json_path = f"{o['out']}.json"
    with open(json_path, "w") as fh:
        fh.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return RunReport(config, 0, f"  P({o['word']} != 1 over {o['group']}) = {p} = {float(p):.6f}", [json_path])


def _cmd_separation_order(config: ExperimentConfig) -> RunReport:
    o = config.options
    kind, k = build_perm_group(o["group"])
    chain = perm.build_bsgs(perm.standard_group(kind, k))
    rng = montecarlo.substream(o["seed"], 0)
    a = perm.separation_order(chain, o["n"], mode=o["mode"], trials=o["trials"], rng=rng, budget=o["budget"])
    qualifier = "exact" if o["mode"] == "exact" else f"upper bound from {o['trials']} sampled sets"
    payload = {
        "config": {"subcommand": config.subcommand, **o},
        "separation_order": a,
        "qualifier": qualifier,
    }
    json_path = f"{o['out']}.json"
    with open(json_path, "w") as fh:
        fh.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return RunReport(config, 0, f"  {o['group']} separates in order ({o['n']}, {a}) [{qualifier}]", [json_path])


def _cmd_witness(config: ExperimentConfig) -> RunReport:
    o = config.options
    action = build_action(o["action"])
    w = _parse_word(o["word"])
    x0 = action.parse_point(o["point"])
    cert = separation.certify_not_law(w, action, x0)
    cert_path = f"{o['out']}.cert.json"
    with open(cert_path, "w") as fh:
        fh.write(json.dumps(cert.to_json(action), sort_keys=True, indent=2) + "\n")
    traj = " -> ".join(action.format_point(x) for x in cert.trace.trajectory)
    return RunReport(
        config,
        0,
        f"  {o['word']} is not a law of {o['action']}: trajectory {traj}"
        f"\n  certificate written with {len(cert.trace.modifications)} repair(s)",
        [cert_path],
    )


def _cmd_verify(config: ExperimentConfig) -> RunReport:
    path = config.options["certificate"]
    try:
        with open(path) as fh:
            blob = json.load(fh)
        action = build_action(blob["action"])
        cert = separation.certificate_from_json(blob, action)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        return RunReport(config, 2, f"  malformed certificate: {exc}")
    reason = separation.check_certificate(cert, action)
    if reason is None:
        return RunReport(config, 0, f"  certificate verifies: {blob['word']} is not a law of {blob['action']}")
    return RunReport(config, 1, f"  certificate REJECTED: {reason}")


def _cmd_alter_sweep(config: ExperimentConfig) -> RunReport:
    o = config.options
    w = _parse_word(o["word"])
    degrees = [int(t) for t in o["degrees"].split(",")]
    table = montecarlo.alter_sweep(w, degrees, o["samples"], o["seed"], o["confidence"], o["workers"])
    outputs = _write_table(table, o["out"], config)
    status = 1 if table.has_failure() else 0
    return RunReport(config, status, _table_summary(table), outputs)


def _cmd_freeness(config: ExperimentConfig) -> RunReport:
    o = config.options
    depths = [int(t) for t in o["depths"].split(",")]
    table = montecarlo.freeness_experiment(
        o["arity"], depths, o["rank"], o["max_len"], o["samples"], o["seed"], o["confidence"], o["workers"]
    )
    outputs = _write_table(table, o["out"], config)
    return RunReport(config, 0, _table_summary(table), outputs)


def _cmd_rist_search(config: ExperimentConfig) -> RunReport:
    o = config.options
    if o["gens"] != "grig":
        raise ParseError(f"unknown generator set {o['gens']!r} (only grig is registered)")
    gens = trees.grigorchuk_generators()
    found = trees.rist_search(gens, o["vertex"], o["max_len"], o["depth"])
    payload = {"config": {"subcommand": config.subcommand, **o}, "words": found}
    json_path = f"{o['out']}.json"
    with open(json_path, "w") as fh:
        fh.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    shown = " ".join(found) if found else "(none)"
    return RunReport(config, 0, f"  words supported on subtree {o['vertex']!r}: {shown}", [json_path])


_HANDLERS = {
    "list": _cmd_list,
    "bound-check": _cmd_bound_check,
    "exact-prob": _cmd_exact_prob,
    "separation-order": _cmd_separation_order,
    "witness": _cmd_witness,
    "verify": _cmd_verify,
    "alter-sweep": _cmd_alter_sweep,
    "freeness": _cmd_freeness,
    "rist-search": _cmd_rist_search,
}


def run(config: ExperimentConfig) -> RunReport:
    """Dispatch a config to its experiment; exceptions become exit statuses."""
    handler = _HANDLERS.get(config.subcommand)
    if handler is None:
        return RunReport(config, 2, f"unknown subcommand {config.subcommand!r}")
    started = time.perf_counter()
    try:
        report = handler(config)
    except ParseError as exc:
        return RunReport(config, 2, f"usage error: {exc}")
    except LawlessError as exc:
        return RunReport(config, 1, f"experiment failed: {type(exc).__name__}: {exc}")
    report.wall_clock = time.perf_counter() - started
    return report


def _default_seed() -> int:
    return int(os.environ.get("LAWLESS_SEED", str(DEFAULT_SEED)))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lawless", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sub.add_parser("list", help="list experiments")

    def common(p, seed=True, workers=True, confidence=None):
        if seed:
            p.add_argument("--seed", type=int, default=None, help="master seed (default: $LAWLESS_SEED or 7)")
        if workers:
            p.add_argument("--workers", type=int, default=1)
        if confidence is not None:
            p.add_argument("--confidence", type=float, default=confidence)

    p = sub.add_parser("bound-check", help=EXPERIMENTS["bound-check"])
    p.add_argument("--group", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--out", default="bound-check")
    common(p, confidence=0.99)

    p = sub.add_parser("exact-prob", help=EXPERIMENTS["exact-prob"])
    p.add_argument("--group", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("--out", default="exact-prob")

    p = sub.add_parser("separation-order", help=EXPERIMENTS["separation-order"])
    p.add_argument("--group", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--budget", type=int, default=200_000)
    p.add_argument("--out", default="separation-order")
    common(p, workers=False)

    p = sub.add_parser("witness", help=EXPERIMENTS["witness"])
    p.add_argument("--action", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--out", default="witness")

    p = sub.add_parser("verify", help=EXPERIMENTS["verify"])
    p.add_argument("certificate")

    p = sub.add_parser("alter-sweep", help=EXPERIMENTS["alter-sweep"])
    p.add_argument("--word", required=True)
    p.add_argument("--degrees", required=True, help="comma separated, e.g. 8,12,16,20,24")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--out", default="alter-sweep")
    common(p, confidence=0.99)

    p = sub.add_parser("freeness", help=EXPERIMENTS["freeness"])
    p.add_argument("--arity", type=int, default=2)
    p.add_argument("--depths", required=True, help="comma separated, e.g. 3,6,9,12")
    p.add_argument("--rank", type=int, default=2, help="tuple size n")
    p.add_argument("--max-len", type=int, default=6, dest="max_len")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--out", default="freeness")
    common(p, confidence=0.95)

    p = sub.add_parser("rist-search", help=EXPERIMENTS["rist-search"])
    p.add_argument("--gens", default="grig")
    p.add_argument("--vertex", required=True)
    p.add_argument("--max-len", type=int, default=1, dest="max_len")
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--out", default="rist-search")

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    options = {k: v for k, v in vars(args).items() if k != "subcommand"}
    if options.get("seed") is None and "seed" in options:
        options["seed"] = _default_seed()
    config = ExperimentConfig(args.subcommand, options)
    report = run(config)
    print(report.summary)
    for path in report.outputs:
        print(f"  wrote {path}")
    if report.wall_clock:
        print(f"  ({report.wall_clock:.2f}s)")
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
