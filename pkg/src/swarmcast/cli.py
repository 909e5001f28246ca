"""Command-line entry point.

Subcommands:
  simulate        run a scenario file, write trajectory CSV + event JSONL
  analyze         spectrum, motion coefficients, equivalence classes, certificate
  verify          randomized property suite with pass/fail counts
  paper-examples  recompute the stored golden example values and diff them
  serve           start the HTTP/WebSocket session service
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .asymptotics import (
    LeaderSet,
    collective_speed_beta,
    consensus_alpha,
    deviation_gamma,
    find_equivalent_agents,
)
from .errors import SwarmcastError
from .goldens import diff_goldens
from .graphs import InfluenceModel, VisibilityGraph, connected_components
from .jsonutil import dumps_canonical
from .safety import certify
from .simulate import Scenario, run_scenario
from .spectral import spectrum, uniform_spectrum


def _fail(message: str, json_errors: bool, code: int = 1) -> int:
    if json_errors:
        print(dumps_canonical({"error": message}), file=sys.stderr)
    else:
        print(f"error: {message}", file=sys.stderr)
    return code


def cmd_simulate(args) -> int:
    with open(args.scenario) as fh:
        sc = Scenario.from_json(fh.read())
    log = run_scenario(sc)
    outdir = args.out or "."
    os.makedirs(outdir, exist_ok=True)
    base = os.path.join(outdir, sc.name or "run")
    traj = base + "_trajectory.csv"
    events = base + "_events.jsonl"
    log.write_trajectory_csv(traj)
    log.write_events_jsonl(events)
    print(f"status: {log.status}")
    print(f"final t: {log.final_state.t:g}")
    print(f"events: {len(log.events)} -> {events}")
    print(f"samples: {len(log.samples)} rows -> {traj}")
    return 0


def cmd_analyze(args) -> int:
    with open(args.graph) as fh:
        doc = json.load(fh)
    if "edges" in doc:
        g = VisibilityGraph.from_json(json.dumps(doc))
        positions = None
    else:
        sc = Scenario.from_dict(doc)
        positions = sc.initial_positions(np.random.default_rng(sc.resolved_seed()))
        from .graphs import build_visibility_graph

        g = build_visibility_graph(positions, sc.radius)
    model = InfluenceModel.parse(args.model)
    leaders = LeaderSet.of(int(v) for v in args.leaders.split(",") if v != "")
    leaders.validate(g.n)

    dec = spectrum(g, model) if len(connected_components(g)) == 1 else None
    report = {
        "n": g.n,
        "model": model.value,
        "leaders": leaders.sorted(),
        "degrees": g.degree_vector().tolist(),
        "connected": dec is not None,
    }
    if dec is not None:
        report["eigenvalues"] = dec.eigenvalues.tolist()
        report["beta"] = collective_speed_beta(g, model, leaders)
        report["gamma"] = deviation_gamma(g, model, leaders).tolist()
        if positions is not None:
            report["alpha"] = consensus_alpha(
                g, model, positions[:, 0], positions[:, 1]
            ).tolist()
        if g.n <= 10:
            report["equivalence_classes"] = find_equivalent_agents(g, leaders)
        report["spectrum"] = dec.to_payload()
    cert = certify(g, leaders, model, positions=positions)
    report["certificate"] = cert.to_payload()

    if args.json:
        print(dumps_canonical(report))
        return 0
    print(f"agents: {g.n}   model: {model.value}   leaders: {report['leaders']}")
    print(f"degrees: {report['degrees']}")
    if dec is None:
        print("graph is disconnected; spectral analysis skipped")
    else:
        print("eigenvalues:", np.round(dec.eigenvalues, 6).tolist())
        print(f"beta: {report['beta']:.6g}")
        print("gamma:", np.round(report["gamma"], 6).tolist())
        if "alpha" in report:
            print("alpha:", np.round(report["alpha"], 6).tolist())
        if "equivalence_classes" in report:
            print("equivalence classes:", report["equivalence_classes"])
    bound = cert.global_bound
    if cert.unbounded:
        print("certificate: every current link preserved for any |u|")
    elif bound is None:
        print("certificate: no global speed guarantee")
    else:
        print(f"certificate: links preserved while |u| <= {bound:g}")
    return 0


def cmd_verify(args) -> int:
    from .verify import run_all

    results = run_all(seed=args.seed, trials=args.trials)
    width = max(len(r.name) for r in results)
    failed_total = 0
    for r in results:
        mark = "PASS" if r.ok else "FAIL"
        line = f"{r.name:<{width}}  {mark}  ({r.passed} ok, {r.failed} bad)"
        if not r.ok and r.detail:
            line += f"  first: {r.detail}"
        print(line)
        failed_total += r.failed
    print(
        f"total: {sum(r.passed for r in results)} passed, {failed_total} failed"
    )
    return 0 if failed_total == 0 else 1


def cmd_paper_examples(args) -> int:
    rows = diff_goldens()
    bad = 0
    for key, stored, got, ok in rows:
        mark = "PASS" if ok else "FAIL"
        print(f"{key:<36} {mark}")
        if not ok:
            bad += 1
            print(f"  stored:   {stored}")
            print(f"  computed: {got}")
    print(f"{len(rows) - bad}/{len(rows)} golden values match")
    return 0 if bad == 0 else 1


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="swarmcast", description=__doc__)
    p.add_argument(
        "--json-errors",
        action="store_true",
        help="emit errors as JSON on stderr",
    )
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("simulate", help="run a scenario file")
    ps.add_argument("scenario", help="path to scenario JSON")
    ps.add_argument("--out", help="output directory (default: cwd)")
    ps.set_defaults(func=cmd_simulate)

    pa = sub.add_parser("analyze", help="analyze a graph or scenario file")
    pa.add_argument("graph", help="graph JSON ({n, edges, radius}) or scenario JSON")
    pa.add_argument("--model", required=True, help="u|uniform or s|scaled")
    pa.add_argument(
        "--leaders",
        default="",
        help="comma-separated 0-based leader indices (wire convention)",
    )
    pa.add_argument("--json", action="store_true", help="print a JSON report")
    pa.set_defaults(func=cmd_analyze)

    pv = sub.add_parser("verify", help="run the randomized property suite")
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--trials", type=int, default=20)
    pv.set_defaults(func=cmd_verify)

    pp = sub.add_parser(
        "paper-examples",
        help="recompute stored golden example values and diff against expectations",
    )
    pp.set_defaults(func=cmd_paper_examples)

    pr = sub.add_parser("serve", help="start the session service")
    pr.add_argument("--host", default="127.0.0.1")
    pr.add_argument("--port", type=int, default=8787)
    pr.set_defaults(func=cmd_serve)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SwarmcastError as exc:
        return _fail(str(exc), args.json_errors)
    except FileNotFoundError as exc:
        return _fail(str(exc), args.json_errors, code=2)
    except json.JSONDecodeError as exc:
        return _fail(f"invalid JSON: {exc}", args.json_errors, code=2)


if __name__ == "__main__":
    sys.exit(main())
