"""JSON wire formats.

Instance formats (bit-exact round trip, canonical key order and edge order):
  graph      {"n": int, "edges": [[u, v], ...]}
  hypergraph {"q": int, "n": int, "labels": [[var, val], ...] | null,
              "edges": [[v1, ..., vq], ...]}
  csp        {"n": int, "k": int, "q": int,
              "constraints": [{"scope": [...], "falsifying": [[...], ...]}]}

Rationals are serialized as exact "p/q" strings everywhere.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .core import Graph, Hypergraph, bits_of
from .csp import Constraint, Csp
from .containers_sat import ContainerTrace, LevelRecord, SatIteration
from .containers_star import StarContainerTrace, StarIteration
from .generators import FarCertificate
from .rationals import format_rational, parse_rational
from .testers import TesterReport


def canonical_dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def graph_to_dict(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges()]}


def graph_from_dict(data: dict) -> Graph:
    return Graph.from_edges(int(data["n"]), data["edges"])


def hypergraph_to_dict(h: Hypergraph) -> dict:
    return {
        "q": h.q,
        "n": h.n,
        "labels": [list(l) for l in h.labels] if h.labels is not None else None,
        "edges": [list(bits_of(e)) for e in h.edges],
    }


def hypergraph_from_dict(data: dict) -> Hypergraph:
    labels = data.get("labels")
    return Hypergraph.from_edges(
        int(data["q"]), int(data["n"]), data["edges"],
        [tuple(l) for l in labels] if labels is not None else None,
    )


def csp_to_dict(csp: Csp) -> dict:
    return {
        "n": csp.n,
        "k": csp.k,
        "q": csp.q,
        "constraints": [
            {"scope": list(c.scope), "falsifying": [list(t) for t in c.falsifying]}
            for c in csp.constraints
        ],
    }


def csp_from_dict(data: dict) -> Csp:
    constraints = tuple(
        Constraint(tuple(c["scope"]), tuple(tuple(t) for t in c["falsifying"]))
        for c in data["constraints"]
    )
    return Csp(int(data["n"]), int(data["k"]), int(data["q"]), constraints)


def load_instance(data: dict):
    """Detect and decode a graph / hypergraph / CSP instance payload."""
    if "constraints" in data:
        return csp_from_dict(data)
    if "q" in data:
        return hypergraph_from_dict(data)
    return graph_from_dict(data)


def container_trace_to_dict(trace: ContainerTrace) -> dict:
    return {
        "kind": "hypergraph-container-trace",
        "hypergraph": hypergraph_to_dict(trace.hypergraph),
        "n_bound": trace.n_bound,
        "independent_set": list(trace.independent_set),
        "extension_rule": "F_t = C_t = I for t beyond the recorded iterations",
        "deg_mode": trace.deg_mode,
        "iterations": [
            {
                "t": it.t,
                "selected": list(it.selected),
                "exclusions": [{"level": lvl, "vertices": list(xs)}
                               for lvl, xs in it.exclusions],
                "levels": [
                    {"ell": lv.ell, "vertices": list(lv.vertices),
                     "edges": [list(e) for e in lv.edges]}
                    for lv in it.levels
                ],
                "one_edge_removals": list(it.one_edge_removals),
                "fingerprint": list(it.fingerprint),
                "container": list(it.container),
                "degenerate": it.degenerate,
                "truncated": it.truncated,
            }
            for it in trace.iterations
        ],
    }


def container_trace_from_dict(data: dict) -> ContainerTrace:
    iterations = tuple(
        SatIteration(
            t=int(it["t"]),
            selected=tuple(it["selected"]),
            exclusions=tuple((int(x["level"]), tuple(x["vertices"]))
                             for x in it["exclusions"]),
            levels=tuple(
                LevelRecord(int(lv["ell"]), tuple(lv["vertices"]),
                            tuple(tuple(e) for e in lv["edges"]))
                for lv in it["levels"]
            ),
            one_edge_removals=tuple(it["one_edge_removals"]),
            fingerprint=tuple(it["fingerprint"]),
            container=tuple(it["container"]),
            degenerate=bool(it["degenerate"]),
            truncated=bool(it["truncated"]),
        )
        for it in data["iterations"]
    )
    return ContainerTrace(
        hypergraph_from_dict(data["hypergraph"]),
        int(data["n_bound"]),
        tuple(data["independent_set"]),
        iterations,
        data.get("deg_mode", "exact"),
    )


def star_trace_to_dict(trace: StarContainerTrace) -> dict:
    return {
        "kind": "star-container-trace",
        "graph": graph_to_dict(trace.graph),
        "independent_set": list(trace.independent_set),
        "extension_rule": ("F_t = C_t = I and D_t = final D "
                           "for t beyond the recorded iterations"),
        "iterations": [
            {"t": it.t, "u": it.u, "v": it.v,
             "fingerprint": list(it.fingerprint),
             "inner": list(it.inner), "outer": list(it.outer)}
            for it in trace.iterations
        ],
    }


def star_trace_from_dict(data: dict) -> StarContainerTrace:
    iterations = tuple(
        StarIteration(
            t=int(it["t"]), u=int(it["u"]),
            v=None if it["v"] is None else int(it["v"]),
            fingerprint=tuple(it["fingerprint"]),
            inner=tuple(it["inner"]), outer=tuple(it["outer"]),
        )
        for it in data["iterations"]
    )
    return StarContainerTrace(graph_from_dict(data["graph"]),
                              tuple(data["independent_set"]), iterations)


def certificate_to_dict(cert: FarCertificate) -> dict:
    return {
        "kind": cert.kind,
        "instance_hash": cert.instance_hash,
        "epsilon": format_rational(cert.epsilon),
        "achieved": format_rational(cert.achieved),
        "min_edits": cert.min_edits,
        "witness": list(cert.witness),
        "params": cert.params,
    }


def certificate_from_dict(data: dict) -> FarCertificate:
    return FarCertificate(
        kind=data["kind"],
        instance_hash=data["instance_hash"],
        epsilon=parse_rational(data["epsilon"]),
        achieved=parse_rational(data["achieved"]),
        min_edits=int(data["min_edits"]),
        witness=tuple(data["witness"]),
        params=dict(data["params"]),
    )


def report_to_dict(report: TesterReport) -> dict:
    payload = {
        "kind": report.kind,
        "verdict": report.verdict,
        "seed": report.seed,
        "generator": report.generator,
        "params": report.params,
        "sample": list(report.sample),
        "query_count": report.query_count,
    }
    if report.core_sample:
        payload["core_sample"] = list(report.core_sample)
    if report.witness is not None:
        payload["witness"] = {k: list(v) if isinstance(v, tuple) else v
                              for k, v in report.witness.items()}
    return payload


def fraction_or_none(value: Optional[str]) -> Optional[Fraction]:
    return None if value is None else parse_rational(value)
