"""Command-line interface.

Subcommands: generate, solve, sweep, project, group-graph, validate.
Exit codes: 0 ok, 2 usage, 3 parse/invalid input, 4 numeric failure,
5 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path as FsPath

import numpy as np

from .data import (NumericError, SpikedModelParams, empirical_covariance,
                   random_path_vector, sample_spiked)
from .fileio import (ParseError, load_covariance_json, load_data_csv,
                     load_graph, load_grouping, load_vector, write_data_csv,
                     write_graph, write_vector)
from .graph import (GraphStructureError, build_group_graph, build_layer_graph,
                    count_paths, validate)
from .metrics import evaluate
from .projection import project
from .solvers import (PowerMethodConfig, SampleProjectConfig,
                      brute_force_solve, graph_truncated_power,
                      sample_and_project, sparse_truncated_power)
from .sweep import (InternalInvariantError, check_structured_output,
                    nearest_divisor_layers, parse_kv_file, parse_sweep_config,
                    run_sweep, write_sidecar, write_sweep_csv)

OK, USAGE, PARSE, NUMERIC, INTERNAL = 0, 2, 3, 4, 5


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="pathpca",
        description="PCA constrained to source-terminal path supports of a DAG")
    sub = top.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate",
                       help="write a layer graph, planted vector, and samples")
    g.add_argument("--config", required=True,
                   help="key=value file with p, k, d, beta, n")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="output directory")
    g.add_argument("--header", action="store_true",
                   help="write a header row in the sample CSV")

    s = sub.add_parser("solve", help="estimate the path-supported component")
    s.add_argument("--graph", required=True)
    s.add_argument("--data", required=True,
                   help="sample CSV, or covariance JSON if the name ends in .json")
    s.add_argument("--header", action="store_true",
                   help="the sample CSV has a header row")
    s.add_argument("--solver", default="power",
                   choices=["power", "sample", "brute", "sparse-power"])
    s.add_argument("--rank", type=int, default=2)
    s.add_argument("--budget", type=int, default=2000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--sparsity", type=int,
                   help="support size for sparse-power (defaults to the "
                        "planted support size when --x-star is given)")
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--max-iters", type=int, default=1000)
    s.add_argument("--cap", type=int, default=5000)
    s.add_argument("--x-star", help="planted vector file; adds metrics to the record")
    s.add_argument("--out", help="write the estimate as a vector file")

    w = sub.add_parser("sweep", help="run a recovery sweep from a config file")
    w.add_argument("--config", required=True)
    w.add_argument("--graph", help="graph file overriding the config's p/k/d")
    w.add_argument("--seed", type=int, help="override the config's master seed")
    w.add_argument("--out", required=True, help="CSV output path")

    p = sub.add_parser("project", help="project a vector onto path supports")
    p.add_argument("--graph", required=True)
    p.add_argument("--vector", required=True, help="input vector file")
    p.add_argument("--out", help="write the projection as a vector file")

    gg = sub.add_parser("group-graph",
                        help="build the one-variable-per-group graph")
    gg.add_argument("--grouping", required=True,
                    help="file of '<var-index> <group-label>' lines")
    gg.add_argument("--out", required=True, help="graph file to write")

    v = sub.add_parser("validate", help="check a graph file's invariants")
    v.add_argument("--graph", required=True)
    return top


def _require_valid(dag, name: str):
    report = validate(dag)
    if not report.ok:
        raise ParseError(name, None, "; ".join(report.violations))


def _load_sigma(args) -> np.ndarray:
    if str(args.data).endswith(".json"):
        return load_covariance_json(args.data)
    return empirical_covariance(load_data_csv(args.data, header=args.header))


def cmd_generate(args) -> int:
    cfg = parse_kv_file(args.config)
    allowed = {"p", "k", "d", "beta", "n"}
    unknown = set(cfg) - allowed
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    missing = allowed - set(cfg)
    if missing:
        raise ValueError(f"config must set: {sorted(missing)}")
    p = int(cfg["p"])
    k = nearest_divisor_layers(p) if cfg["k"] == "auto" else int(cfg["k"])
    d = (p - 2) // k if cfg["d"] == "full" else int(cfg["d"])
    beta = float(cfg["beta"])
    n = int(cfg["n"])

    dag = build_layer_graph(p, k, d)
    x_star, path = random_path_vector(dag, (args.seed, 0))
    y = sample_spiked(SpikedModelParams(x_star, beta), n, (args.seed, 1))

    out = FsPath(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_graph(dag, out / "graph.txt")
    write_vector(x_star, out / "x_star.txt",
                 comment="path: " + " ".join(map(str, path.vertices)))
    write_data_csv(y, out / "samples.csv", header=args.header)
    print(f"graph: {out / 'graph.txt'} (p={p} k={k} d={d})")
    print(f"x_star: {out / 'x_star.txt'}")
    print(f"samples: {out / 'samples.csv'} (n={n}, beta={beta})")
    return OK


def cmd_solve(args) -> int:
    dag = load_graph(args.graph)
    _require_valid(dag, args.graph)
    sigma = _load_sigma(args)
    if sigma.shape[0] != dag.dim:
        raise ValueError(f"data is {sigma.shape[0]}-dimensional but the graph "
                         f"binds {dag.dim} variables")
    x_star = load_vector(args.x_star) if args.x_star else None
    if x_star is not None and x_star.size != dag.dim:
        raise ValueError("x-star length does not match the graph dimension")

    pcfg = PowerMethodConfig(max_iters=args.max_iters, tol=args.tol)
    if args.solver == "power":
        res = graph_truncated_power(sigma, dag, pcfg)
    elif args.solver == "sample":
        res = sample_and_project(
            sigma, dag, SampleProjectConfig(rank=args.rank, budget=args.budget,
                                            seed=args.seed))
    elif args.solver == "brute":
        res = brute_force_solve(sigma, dag, cap=args.cap)
    else:
        k = args.sparsity
        if k is None:
            if x_star is None:
                raise ValueError("sparse-power needs --sparsity (or --x-star "
                                 "to default to the planted support size)")
            k = int(np.count_nonzero(x_star))
        res = sparse_truncated_power(sigma, k, pcfg)

    if args.solver != "sparse-power":
        check_structured_output(dag, res, args.solver)

    record = {
        "solver": args.solver,
        "objective": res.objective,
        "iterations": res.iterations,
        "support": sorted(np.flatnonzero(res.x != 0.0).tolist()),
        "path": list(res.path.vertices) if res.path is not None else None,
    }
    if res.rank_objective is not None:
        record["rank_objective"] = res.rank_objective
    if x_star is not None:
        rep = evaluate(res.x, x_star, sigma)
        record["projector_loss"] = rep.projector_loss
        record["jaccard"] = rep.jaccard
        record["explained_variance"] = rep.explained_variance
    print(json.dumps(record, sort_keys=True))
    if args.out:
        comment = None
        if res.path is not None:
            comment = "path: " + " ".join(map(str, res.path.vertices))
        write_vector(res.x, args.out, comment=comment)
    return OK


def cmd_sweep(args) -> int:
    cfg = parse_sweep_config(parse_kv_file(args.config))
    if args.seed is not None:
        cfg.seed = args.seed
    dag = None
    if args.graph:
        dag = load_graph(args.graph)
        _require_valid(dag, args.graph)
    elif cfg.graph_file:
        dag = load_graph(cfg.graph_file)
        _require_valid(dag, cfg.graph_file)
    records, resolved = run_sweep(cfg, dag)
    write_sweep_csv(records, args.out)
    sidecar = str(args.out) + ".json"
    write_sidecar(resolved, sidecar)
    print(f"rows: {len(records)}")
    print(f"csv: {args.out}")
    print(f"sidecar: {sidecar}")
    return OK


def cmd_project(args) -> int:
    dag = load_graph(args.graph)
    _require_valid(dag, args.graph)
    w = load_vector(args.vector)
    if w.size != dag.dim:
        raise ValueError(f"vector has length {w.size}, graph binds {dag.dim}")
    pv = project(dag, w)
    print("path: " + " ".join(map(str, pv.path.vertices)))
    print(f"objective: {float(w @ pv.x)!r}")
    if pv.degenerate:
        print("degenerate: true")
    if args.out:
        write_vector(pv.x, args.out,
                     comment="path: " + " ".join(map(str, pv.path.vertices)))
    else:
        for v in pv.x:
            print(repr(float(v)))
    return OK


def cmd_group_graph(args) -> int:
    groups = load_grouping(args.grouping)
    dag = build_group_graph([vars_ for _, vars_ in groups])
    write_graph(dag, args.out)
    sizes = "*".join(str(len(vars_)) for _, vars_ in groups)
    print(f"groups: {len(groups)} ({', '.join(label for label, _ in groups)})")
    print(f"paths: {count_paths(dag)} = {sizes}")
    print(f"graph: {args.out}")
    return OK


def cmd_validate(args) -> int:
    dag = load_graph(args.graph)
    report = validate(dag)
    if report.ok:
        print(f"ok: {dag!r}")
        return OK
    for v in report.violations:
        print(f"violation: {v}")
    return PARSE


_DISPATCH = {
    "generate": cmd_generate,
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "project": cmd_project,
    "group-graph": cmd_group_graph,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return PARSE
    except (NumericError, np.linalg.LinAlgError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return NUMERIC
    except (ValueError, GraphStructureError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return PARSE
    except InternalInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return INTERNAL
    except Exception as exc:  # anything else is a bug, not bad input
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
