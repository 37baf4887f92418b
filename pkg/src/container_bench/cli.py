"""Command-line workbench wiring all modules together.

Exit-code contract: 0 on success, 1 when a verifier finds a counterexample
(the record is serialized before exiting), 2 on usage, validation, or work-cap
errors.  CI can therefore tell "bound falsified" apart from "tool misuse".

Every artifact file embeds the tool version and the fully resolved config, so
re-running a report's embedded config reproduces it byte-for-byte.

Corpus layout: a directory with one subdirectory per instance, each holding
instance.json and certificate.json.
"""

from __future__ import annotations

import argparse
import csv as csv_mod
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__, serialize
from .core import (
    WorkCapExceeded,
    bits_of,
    enumerate_independent_sets,
    mask_of,
)
from .csp import build_hypergraph, distance_to_sat, vars_of
from .containers_sat import (
    NotFarError,
    check_closure,
    check_container_degree,
    check_edges_bound,
    run_generator,
    verify_gcl_sat,
)
from .containers_star import (
    check_shrinking,
    check_star_closure,
    distance_to_rho_is,
    run_star_generator,
    verify_gcl_star,
)
from .generators import (
    TesterSpec,
    certify_far,
    estimate_acceptance,
    gen_er_graph,
    gen_planted_is_graph,
    gen_planted_sat_csp,
    gen_random_csp,
    gen_random_hypergraph,
    run_tester,
)
from .rationals import (
    RationalParseError,
    format_rational,
    parse_rational,
)
from .rng import make_rng, substream_seed
from .testers import SHPPSpec

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_USAGE = 2


class CounterexampleFound(Exception):
    def __init__(self, record: dict):
        super().__init__("verification counterexample")
        self.record = record


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except RationalParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _unit_interval(text: str) -> Fraction:
    value = _rational(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"{text} must lie strictly in (0, 1)")
    return value


def _unit_interval_closed(text: str) -> Fraction:
    value = _rational(text)
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"{text} must lie in (0, 1]")
    return value


def _vertex_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(v) for v in text.split(","))


def _default_workers() -> int:
    env = os.environ.get("CONTAINER_BENCH_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _config_of(args: argparse.Namespace) -> dict:
    config = {}
    for key, value in sorted(vars(args).items()):
        if key in ("func",):
            continue
        if isinstance(value, Fraction):
            value = format_rational(value)
        elif isinstance(value, Path):
            value = str(value)
        elif isinstance(value, tuple):
            value = list(value)
        config[key] = value
    return config


def _meta(args: argparse.Namespace) -> dict:
    return {
        "tool": {"name": "container-bench", "version": __version__},
        "config": _config_of(args),
    }


def _write_text(out, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _emit_json(args, payload: dict) -> None:
    payload = {**payload, **_meta(args)}
    _write_text(args.out, serialize.canonical_dumps(payload))


def _load_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _load_csp(path):
    return serialize.csp_from_dict(_load_json(path))


def _load_graph(path):
    return serialize.graph_from_dict(_load_json(path))


def _load_hypergraph(path):
    return serialize.hypergraph_from_dict(_load_json(path))


def _corpus_entries(corpus: str) -> list[tuple[str, dict, dict]]:
    root = Path(corpus)
    entries = []
    for inst_path in sorted(root.glob("*/instance.json")):
        cert_path = inst_path.parent / "certificate.json"
        cert = _load_json(cert_path) if cert_path.exists() else None
        entries.append((inst_path.parent.name, _load_json(inst_path), cert))
    if not entries:
        raise FileNotFoundError(f"no */instance.json under {corpus}")
    return entries


# ---------------------------------------------------------------- generators


def _cmd_gen_csp(args) -> int:
    if args.planted:
        csp, planted = gen_planted_sat_csp(args.n, args.k, args.q,
                                           args.density, args.seed)
        payload = serialize.csp_to_dict(csp)
        payload["planted_assignment"] = [[x, planted[x]] for x in sorted(planted)]
    else:
        csp = gen_random_csp(args.n, args.k, args.q, args.constraint_density,
                             args.falsifying_density, args.seed)
        payload = serialize.csp_to_dict(csp)
    _emit_json(args, payload)
    return EXIT_OK


def _cmd_gen_graph(args) -> int:
    if args.planted:
        graph = gen_planted_is_graph(args.n, args.rho, args.p, args.seed)
    else:
        graph = gen_er_graph(args.n, args.p, args.seed)
    _emit_json(args, serialize.graph_to_dict(graph))
    return EXIT_OK


def _cmd_build_hypergraph(args) -> int:
    csp = _load_csp(args.csp)
    _emit_json(args, serialize.hypergraph_to_dict(build_hypergraph(csp)))
    return EXIT_OK


def _cmd_dist_csp(args) -> int:
    csp = _load_csp(args.csp)
    dist = distance_to_sat(csp)
    payload = {
        "min_falsified": dist.min_falsified,
        "distance": format_rational(dist.distance),
        "witness_assignment": list(dist.witness),
    }
    if args.epsilon is not None:
        payload["epsilon"] = format_rational(args.epsilon)
        payload["far"] = dist.is_far(args.epsilon)
    _emit_json(args, payload)
    return EXIT_OK


def _cmd_dist_graph(args) -> int:
    graph = _load_graph(args.graph)
    dist = distance_to_rho_is(graph, args.rho)
    payload = {
        "min_edits": dist.min_edits,
        "distance": format_rational(dist.distance),
        "target_size": dist.target_size,
        "argmin_subset": list(dist.witness),
        "rho": format_rational(args.rho),
    }
    if args.epsilon is not None:
        payload["epsilon"] = format_rational(args.epsilon)
        payload["far"] = dist.is_far(args.epsilon)
    _emit_json(args, payload)
    return EXIT_OK


def _cmd_certify(args) -> int:
    if args.csp:
        instance = _load_csp(args.csp)
    else:
        instance = _load_graph(args.graph)
    cert = certify_far(instance, args.epsilon, args.rho)
    if cert is None:
        _emit_json(args, {"far": False, "epsilon": format_rational(args.epsilon)})
    else:
        _emit_json(args, {"far": True, **serialize.certificate_to_dict(cert)})
    return EXIT_OK


# ---------------------------------------------------------------- containers


def _independent_sets_for(args, host, variable_distinct: bool):
    if args.all_independent_sets:
        yield from enumerate_independent_sets(
            host, variable_distinct=variable_distinct)
    else:
        yield args.independent_set


def _cmd_containers_sat(args) -> int:
    csp = _load_csp(args.csp)
    h = build_hypergraph(csp)
    n_bound = args.n_bound if args.n_bound is not None else csp.n
    traces = [
        run_generator(h, n_bound, iset, deg_mode=args.deg_mode)
        for iset in _independent_sets_for(args, h, args.variable_distinct)
    ]
    if args.format == "json":
        payload = {"traces": [serialize.container_trace_to_dict(t) for t in traces]}
        _emit_json(args, payload)
    else:
        buf = io.StringIO()
        writer = csv_mod.writer(buf)
        writer.writerow(["independent_set", "t", "fingerprint_size",
                         "container_size", "vars"])
        for trace in traces:
            name = ";".join(map(str, trace.independent_set))
            for t in range(1, trace.iteration_count + 1):
                c = trace.container_at(t)
                writer.writerow([name, t, len(trace.fingerprint_at(t)), len(c),
                                 vars_of(h, c)])
        _write_text(args.out, buf.getvalue())
    return EXIT_OK


def _cmd_containers_star(args) -> int:
    graph = _load_graph(args.graph)
    traces = [
        run_star_generator(graph, iset)
        for iset in _independent_sets_for(args, graph, False)
    ]
    if args.format == "json":
        payload = {"traces": [serialize.star_trace_to_dict(t) for t in traces]}
        _emit_json(args, payload)
    else:
        buf = io.StringIO()
        writer = csv_mod.writer(buf)
        writer.writerow(["independent_set", "t", "fingerprint_size",
                         "inner_size", "outer_size"])
        for trace in traces:
            name = ";".join(map(str, trace.independent_set))
            for t in range(1, trace.iteration_count + 1):
                writer.writerow([name, t, len(trace.fingerprint_at(t)),
                                 len(trace.inner_at(t)), len(trace.outer_at(t))])
        _write_text(args.out, buf.getvalue())
    return EXIT_OK


# ---------------------------------------------------------------- verifiers


def _gcl_sat_instance(entry) -> dict:
    name, inst, cert = entry
    csp = serialize.csp_from_dict(inst)
    epsilon = parse_rational(cert["epsilon"])
    distance = distance_to_sat(csp)
    h = build_hypergraph(csp)
    checked = 0
    for iset in enumerate_independent_sets(h, variable_distinct=True):
        outcome = verify_gcl_sat(csp, epsilon, iset, distance=distance)
        checked += 1
        if not outcome.ok:
            return {"instance": name, "independent_set": list(iset),
                    "epsilon": format_rational(epsilon),
                    "t_max": outcome.t_max,
                    "checks": [[c.t, c.vars_in_container, c.ok]
                               for c in outcome.checks],
                    "violation": "no witness t"}
    return {"instance": name, "independent_sets_checked": checked}


def _cmd_verify_gcl_sat(args) -> int:
    entries = _corpus_entries(args.corpus)
    results = _parallel_map(_gcl_sat_instance, entries, args.workers)
    summaries, violation = [], None
    for res in results:
        if "violation" in res:
            violation = res
            break
        summaries.append(res)
    if violation is not None:
        raise CounterexampleFound({"verifier": "gcl-sat", **violation})
    _emit_json(args, {"verifier": "gcl-sat", "instances": summaries})
    return EXIT_OK


def _gcl_star_instance(entry) -> dict:
    name, inst, cert = entry
    graph = serialize.graph_from_dict(inst)
    epsilon = parse_rational(cert["epsilon"])
    rho = parse_rational(cert["params"]["rho"])
    distance = distance_to_rho_is(graph, rho)
    checked = 0
    for iset in enumerate_independent_sets(graph):
        outcome = verify_gcl_star(graph, rho, epsilon, iset, distance=distance)
        checked += 1
        if not outcome.ok or not outcome.restated_ok:
            return {"instance": name, "independent_set": list(iset),
                    "epsilon": format_rational(epsilon),
                    "rho": format_rational(rho),
                    "t_max": outcome.t_max,
                    "threshold_t": outcome.threshold_t,
                    "checks": [[c.t, c.inner_size, c.outer_size, c.ok]
                               for c in outcome.checks],
                    "violation": ("no witness t" if not outcome.ok
                                  else "restated inner-container bound failed")}
    return {"instance": name, "independent_sets_checked": checked}


def _cmd_verify_gcl_star(args) -> int:
    entries = _corpus_entries(args.corpus)
    results = _parallel_map(_gcl_star_instance, entries, args.workers)
    summaries, violation = [], None
    for res in results:
        if "violation" in res:
            violation = res
            break
        summaries.append(res)
    if violation is not None:
        raise CounterexampleFound({"verifier": "gcl-star", **violation})
    _emit_json(args, {"verifier": "gcl-star", "instances": summaries})
    return EXIT_OK


def _verify_trace_file(args) -> int:
    data = _load_json(args.trace)
    if data.get("kind") == "star-container-trace":
        trace = serialize.star_trace_from_dict(data)
        fresh = run_star_generator(trace.graph, trace.independent_set)
        for t in range(1, max(trace.iteration_count, fresh.iteration_count) + 1):
            if (trace.inner_at(t) != fresh.inner_at(t)
                    or trace.outer_at(t) != fresh.outer_at(t)
                    or trace.fingerprint_at(t) != fresh.fingerprint_at(t)):
                raise CounterexampleFound({
                    "verifier": "closure", "trace": str(args.trace),
                    "mismatch_t": t,
                    "recorded_inner": list(trace.inner_at(t)),
                    "recomputed_inner": list(fresh.inner_at(t)),
                    "recorded_outer": list(trace.outer_at(t)),
                    "recomputed_outer": list(fresh.outer_at(t)),
                })
    else:
        trace = serialize.container_trace_from_dict(data)
        fresh = run_generator(trace.hypergraph, trace.n_bound,
                              trace.independent_set, deg_mode=trace.deg_mode)
        for t in range(1, max(trace.iteration_count, fresh.iteration_count) + 1):
            if (trace.container_at(t) != fresh.container_at(t)
                    or trace.fingerprint_at(t) != fresh.fingerprint_at(t)):
                raise CounterexampleFound({
                    "verifier": "closure", "trace": str(args.trace),
                    "mismatch_t": t,
                    "recorded_container": list(trace.container_at(t)),
                    "recomputed_container": list(fresh.container_at(t)),
                })
    _emit_json(args, {"verifier": "closure", "trace": str(args.trace),
                      "replayed": True})
    return EXIT_OK


def _cmd_verify_closure(args) -> int:
    if args.trace is not None:
        return _verify_trace_file(args)
    entries = _corpus_entries(args.corpus)
    summaries = []
    for name, inst, _cert in entries:
        if "constraints" in inst:
            csp = serialize.csp_from_dict(inst)
            h = build_hypergraph(csp)
            checked = 0
            for iset in enumerate_independent_sets(h, variable_distinct=True):
                outcome = check_closure(h, csp.n, iset)
                checked += 1
                if not outcome.ok:
                    raise CounterexampleFound({
                        "verifier": "closure", "instance": name,
                        "independent_set": list(iset),
                        "mismatch_t": outcome.first_mismatch_t})
        else:
            graph = serialize.graph_from_dict(inst)
            checked = 0
            for iset in enumerate_independent_sets(graph):
                outcome = check_star_closure(graph, iset)
                checked += 1
                if not outcome.ok:
                    raise CounterexampleFound({
                        "verifier": "closure", "instance": name,
                        "independent_set": list(iset),
                        "mismatch_t": outcome.first_mismatch_t})
        summaries.append({"instance": name, "independent_sets_checked": checked})
    _emit_json(args, {"verifier": "closure", "instances": summaries})
    return EXIT_OK


def _cmd_verify_edges_bound(args) -> int:
    outcomes = []
    if args.hypergraph:
        h = _load_hypergraph(args.hypergraph)
        outcome = check_edges_bound(h)
        if not outcome.ok:
            raise CounterexampleFound({
                "verifier": "edges-bound", "hypergraph": str(args.hypergraph),
                "heavy_count": outcome.heavy_count,
                "lower_bound": format_rational(outcome.lower_bound)})
        outcomes.append({"hypergraph": str(args.hypergraph),
                         "heavy_count": outcome.heavy_count,
                         "lower_bound": format_rational(outcome.lower_bound)})
    else:
        rng = make_rng(args.seed)
        ells = args.ell
        produced = 0
        attempt = 0
        while produced < args.random:
            ell = ells[attempt % len(ells)]
            n = ell + int(rng.integers(0, args.max_vertices - ell + 1))
            density = 0.1 + 0.8 * float(rng.random())
            h = gen_random_hypergraph(n, ell, Fraction(density).limit_denominator(1000),
                                      substream_seed(args.seed, attempt))
            attempt += 1
            if not h.edges:
                continue
            produced += 1
            outcome = check_edges_bound(h)
            if not outcome.ok:
                raise CounterexampleFound({
                    "verifier": "edges-bound",
                    "hypergraph": serialize.hypergraph_to_dict(h),
                    "heavy_count": outcome.heavy_count,
                    "lower_bound": format_rational(outcome.lower_bound)})
            outcomes.append({"n": h.n, "ell": ell, "edges": len(h.edges),
                             "heavy_count": outcome.heavy_count})
    _emit_json(args, {"verifier": "edges-bound", "checked": len(outcomes),
                      "instances": outcomes})
    return EXIT_OK


def _cmd_verify_container_degree(args) -> int:
    entries = _corpus_entries(args.corpus)
    summaries = []
    for name, inst, _cert in entries:
        csp = serialize.csp_from_dict(inst)
        h = build_hypergraph(csp)
        worst = None
        tighter_all = True
        checked = 0
        for iset in enumerate_independent_sets(h, variable_distinct=True):
            trace = run_generator(h, csp.n, iset)
            if not trace.iterations:
                continue
            outcome = check_container_degree(trace, csp.k, csp.n)
            checked += 1
            if not outcome.ok:
                bad = next(r for r in outcome.records if not r.ok)
                raise CounterexampleFound({
                    "verifier": "container-degree", "instance": name,
                    "independent_set": list(iset), "t": bad.t,
                    "max_degree": bad.max_degree,
                    "bound": format_rational(bad.bound)})
            tighter_all = tighter_all and outcome.tighter_ok
            if worst is None or outcome.worst_slack < worst:
                worst = outcome.worst_slack
        summaries.append({
            "instance": name, "traces_checked": checked,
            "worst_slack": None if worst is None else format_rational(worst),
            "tighter_constant_held": tighter_all,
        })
    _emit_json(args, {"verifier": "container-degree", "instances": summaries})
    return EXIT_OK


def _cmd_verify_shrinking(args) -> int:
    entries = _corpus_entries(args.corpus)
    rng = make_rng(args.seed)
    sampled = 0
    premise_hits = 0
    stale_passes = 0
    while sampled < args.samples:
        progressed = False
        for name, inst, cert in entries:
            if sampled >= args.samples:
                break
            graph = serialize.graph_from_dict(inst)
            epsilon = parse_rational(cert["epsilon"])
            rho = parse_rational(cert["params"]["rho"])
            distance = distance_to_rho_is(graph, rho)
            isets = [s for s in enumerate_independent_sets(graph) if len(s) >= 3]
            if not isets:
                continue
            for _ in range(min(len(isets), 8)):
                if sampled >= args.samples:
                    break
                iset = isets[int(rng.integers(0, len(isets)))]
                trace = run_star_generator(graph, iset)
                t_limit = (len(iset) - 1) // 2
                if t_limit < 1:
                    continue
                t = int(rng.integers(0, t_limit))
                d_mask = mask_of(trace.outer_at(t + 1))
                n = graph.n
                size = d_mask.bit_count()
                if size == 0:
                    continue
                keep = int(rng.integers(1, size + 1))
                while d_mask.bit_count() > keep:
                    victims = bits_of(d_mask)
                    d_mask &= ~(1 << victims[int(rng.integers(0, len(victims)))])
                alpha = rho - Fraction(d_mask.bit_count(), n)
                outcome = check_shrinking(graph, rho, epsilon, trace, t,
                                          d_mask, alpha, distance=distance)
                sampled += 1
                progressed = True
                if outcome.premises_hold:
                    premise_hits += 1
                    if not outcome.conclusion_holds:
                        raise CounterexampleFound({
                            "verifier": "shrinking", "instance": name,
                            "independent_set": list(iset), "t": t,
                            "d_set": list(bits_of(d_mask)),
                            "alpha": format_rational(alpha)})
        if not progressed:
            stale_passes += 1
            if stale_passes > 2:
                raise ValueError(
                    "corpus has no independent sets large enough to sample from")
    _emit_json(args, {"verifier": "shrinking", "samples": sampled,
                      "premise_hits": premise_hits})
    return EXIT_OK


# ------------------------------------------------------------------- testers


def _tester_spec_from_args(args) -> tuple[TesterSpec, object]:
    kind = args.tester
    if kind == "sat":
        instance = _load_csp(args.csp)
        options = {"epsilon": args.epsilon, "s": args.s, "c": args.c}
    elif kind == "color":
        instance = _load_hypergraph(args.hypergraph)
        options = {"epsilon": args.epsilon, "s": args.s, "c": args.c,
                   "k": args.k}
    elif kind == "shpp":
        instance = _load_graph(args.graph)
        spec_data = _load_json(args.spec)
        shpp = SHPPSpec(int(spec_data["k"]),
                        tuple(tuple(row) for row in spec_data["lower"]),
                        tuple(tuple(row) for row in spec_data["upper"]))
        options = {"epsilon": args.epsilon, "s": args.s, "c": args.c,
                   "spec": shpp}
    elif kind == "indepset":
        instance = _load_graph(args.graph)
        options = {"rho": args.rho, "epsilon": args.epsilon, "r": args.r,
                   "s": args.s, "c1": args.c1, "c2": args.c2,
                   "disjoint": args.disjoint_samples}
    elif kind == "canonical-is":
        instance = _load_graph(args.graph)
        if args.s is None:
            raise ValueError("canonical-is requires --s")
        options = {"rho": args.rho, "s": args.s}
    else:  # pragma: no cover
        raise ValueError(kind)
    return TesterSpec(kind, options), instance


def _cmd_test(args) -> int:
    spec, instance = _tester_spec_from_args(args)
    reports = []
    for i in range(args.trials):
        seed = substream_seed(args.seed, i)
        reports.append((i, run_tester(spec, instance, seed)))
    if args.format == "json":
        payload = {"tester": spec.kind,
                   "reports": [{**serialize.report_to_dict(r), "trial": i}
                               for i, r in reports]}
        _emit_json(args, payload)
    else:
        buf = io.StringIO()
        writer = csv_mod.writer(buf)
        writer.writerow(["trial", "seed", "verdict", "queries"])
        for i, r in reports:
            writer.writerow([i, r.seed, r.verdict,
                             "" if r.query_count is None else r.query_count])
        _write_text(args.out, buf.getvalue())
    return EXIT_OK


def _cmd_estimate(args) -> int:
    if args.out is None:
        raise ValueError("estimate requires --out (prefix for .csv and .json)")
    spec, instance = _tester_spec_from_args(args)
    result = estimate_acceptance(spec, instance, args.trials, args.seed,
                                 workers=args.workers)
    prefix = Path(args.out)
    buf = io.StringIO()
    writer = csv_mod.writer(buf)
    writer.writerow(["trial", "seed", "verdict", "queries"])
    for trial, seed, verdict, queries in result.rows:
        writer.writerow([trial, seed, verdict,
                         "" if queries is None else queries])
    prefix.with_suffix(".csv").write_text(buf.getvalue())
    summary = {
        "tester": spec.kind,
        "trials": result.trials,
        "accepts": result.accepts,
        "accept_rate": result.accept_rate,
        "wilson_95": [result.wilson_low, result.wilson_high],
        "master_seed": result.master_seed,
        "generator": result.generator,
        **_meta(args),
    }
    prefix.with_suffix(".json").write_text(serialize.canonical_dumps(summary))
    sys.stdout.write(serialize.canonical_dumps(
        {k: summary[k] for k in ("tester", "trials", "accepts", "accept_rate",
                                 "wilson_95")}))
    return EXIT_OK


def _parallel_map(fn, items, workers: int):
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# -------------------------------------------------------------------- parser


def _add_out(parser) -> None:
    parser.add_argument("--out", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="container-bench",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("gen-csp", help="generate a random or planted-satisfiable CSP")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--constraint-density", type=_rational, default=Fraction(1, 2))
    p.add_argument("--falsifying-density", type=_rational, default=Fraction(1, 2))
    p.add_argument("--planted", action="store_true")
    p.add_argument("--density", type=_rational, default=Fraction(1, 2),
                   help="planted mode density")
    p.add_argument("--seed", type=int, required=True)
    _add_out(p)
    p.set_defaults(func=_cmd_gen_csp)

    p = sub.add_parser("gen-graph", help="generate a random or planted-IS graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=_rational, default=Fraction(1, 2))
    p.add_argument("--planted", action="store_true")
    p.add_argument("--rho", type=_unit_interval_closed, default=Fraction(1, 2))
    p.add_argument("--seed", type=int, required=True)
    _add_out(p)
    p.set_defaults(func=_cmd_gen_graph)

    p = sub.add_parser("build-hypergraph", help="labelled hypergraph encoding of a CSP")
    p.add_argument("--csp", required=True)
    _add_out(p)
    p.set_defaults(func=_cmd_build_hypergraph)

    p = sub.add_parser("dist-csp", help="exact distance to satisfiability")
    p.add_argument("--csp", required=True)
    p.add_argument("--epsilon", type=_unit_interval, default=None)
    _add_out(p)
    p.set_defaults(func=_cmd_dist_csp)

    p = sub.add_parser("dist-graph", help="exact distance to the independent-set property")
    p.add_argument("--graph", required=True)
    p.add_argument("--rho", type=_unit_interval_closed, required=True)
    p.add_argument("--epsilon", type=_unit_interval, default=None)
    _add_out(p)
    p.set_defaults(func=_cmd_dist_graph)

    p = sub.add_parser("certify", help="emit an exact farness certificate")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--csp")
    group.add_argument("--graph")
    p.add_argument("--rho", type=_unit_interval_closed, default=None)
    p.add_argument("--epsilon", type=_unit_interval, required=True)
    _add_out(p)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("containers-sat", help="run the hypergraph container generator")
    p.add_argument("--csp", required=True)
    p.add_argument("--n-bound", type=int, default=None)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--independent-set", type=_vertex_list)
    group.add_argument("--all-independent-sets", action="store_true")
    p.add_argument("--variable-distinct", action="store_true")
    p.add_argument("--deg-mode", choices=("exact", "greedy"), default="exact")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    _add_out(p)
    p.set_defaults(func=_cmd_containers_sat)

    p = sub.add_parser("containers-star", help="run the star container generator")
    p.add_argument("--graph", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--independent-set", type=_vertex_list)
    group.add_argument("--all-independent-sets", action="store_true")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    _add_out(p)
    p.set_defaults(func=_cmd_containers_star)

    p = sub.add_parser("verify", help="run a verifier; exit 1 on counterexample")
    vsub = p.add_subparsers(dest="verifier", required=True)

    v = vsub.add_parser("gcl-sat")
    v.add_argument("--corpus", required=True)
    v.add_argument("--workers", type=int, default=_default_workers())
    _add_out(v)
    v.set_defaults(func=_cmd_verify_gcl_sat)

    v = vsub.add_parser("gcl-star")
    v.add_argument("--corpus", required=True)
    v.add_argument("--workers", type=int, default=_default_workers())
    _add_out(v)
    v.set_defaults(func=_cmd_verify_gcl_star)

    v = vsub.add_parser("closure")
    group = v.add_mutually_exclusive_group(required=True)
    group.add_argument("--corpus")
    group.add_argument("--trace", help="replay a serialized trace and compare")
    _add_out(v)
    v.set_defaults(func=_cmd_verify_closure)

    v = vsub.add_parser("edges-bound")
    group = v.add_mutually_exclusive_group(required=True)
    group.add_argument("--hypergraph")
    group.add_argument("--random", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--ell", type=lambda s: tuple(int(x) for x in s.split(",")),
                   default=(2, 3, 4))
    v.add_argument("--max-vertices", type=int, default=12)
    _add_out(v)
    v.set_defaults(func=_cmd_verify_edges_bound)

    v = vsub.add_parser("container-degree")
    v.add_argument("--corpus", required=True)
    _add_out(v)
    v.set_defaults(func=_cmd_verify_container_degree)

    v = vsub.add_parser("shrinking")
    v.add_argument("--corpus", required=True)
    v.add_argument("--samples", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)
    _add_out(v)
    v.set_defaults(func=_cmd_verify_shrinking)

    def add_tester_args(tp, kind):
        tp.add_argument("--epsilon", type=_unit_interval,
                        required=kind in ("sat", "color", "shpp", "indepset"))
        tp.add_argument("--s", type=int, default=None)
        tp.add_argument("--seed", type=int, required=True)
        tp.add_argument("--trials", type=int, default=1)
        tp.add_argument("--format", choices=("json", "csv"), default="json")
        if kind in ("sat", "color", "shpp"):
            tp.add_argument("--c", type=_rational, default=Fraction(1))
        if kind == "sat":
            tp.add_argument("--csp", required=True)
        if kind == "color":
            tp.add_argument("--hypergraph", required=True)
            tp.add_argument("--k", type=int, required=True)
        if kind == "shpp":
            tp.add_argument("--graph", required=True)
            tp.add_argument("--spec", required=True,
                            help="JSON file with k, lower, upper 0/1 matrices")
        if kind in ("indepset", "canonical-is"):
            tp.add_argument("--graph", required=True)
            tp.add_argument("--rho", type=_unit_interval_closed, required=True)
        if kind == "indepset":
            tp.add_argument("--r", type=int, default=None)
            tp.add_argument("--c1", type=_rational, default=Fraction(1))
            tp.add_argument("--c2", type=_rational, default=Fraction(1))
            tp.add_argument("--disjoint-samples", action="store_true")
        _add_out(tp)

    p = sub.add_parser("test", help="run a tester for one or more seeded trials")
    tsub = p.add_subparsers(dest="tester", required=True)
    for kind in ("sat", "color", "shpp", "indepset", "canonical-is"):
        tp = tsub.add_parser(kind)
        add_tester_args(tp, kind)
        tp.set_defaults(func=_cmd_test)

    p = sub.add_parser("estimate", help="Monte Carlo acceptance estimate")
    esub = p.add_subparsers(dest="tester", required=True)
    for kind in ("sat", "color", "shpp", "indepset", "canonical-is"):
        tp = esub.add_parser(kind)
        add_tester_args(tp, kind)
        tp.add_argument("--workers", type=int, default=_default_workers())
        tp.set_defaults(func=_cmd_estimate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CounterexampleFound as exc:
        record = {"counterexample": exc.record}
        out = getattr(args, "out", None)
        text = serialize.canonical_dumps(record)
        if out is None:
            sys.stderr.write(text)
        else:
            Path(out).write_text(text)
            sys.stderr.write(text)
        return EXIT_COUNTEREXAMPLE
    except (RationalParseError, WorkCapExceeded, NotFarError, ValueError,
            FileNotFoundError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
