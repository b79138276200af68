"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical or
convergence error, 5 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import backbone as bb
from .brokerage import brokerage_census, write_census_csv
from .coreperiphery import rich_core, write_core_csv
from .descriptives import describe, dyad_census, ei_index, write_ei_csv
from .ergm import (
    ModelSpec,
    default_terms,
    fit_mple,
    read_fit_json,
    read_terms_json,
    run_chains,
    write_fit_json,
)
from .errors import TradenetError
from .fixtures import write_fixture
from .graph import read_edge_csv, read_partition_csv, write_edge_csv
from .nullmodels import RewireConfig, degree_preserving_arrays
from .pipeline import PipelineConfig, run_pipeline
from .significance import role_significance_profile, write_country_csv, write_plotdata_csv, write_report_json

log = logging.getLogger("tradenet")


def _load(args, need_partition=True):
    graph = read_edge_csv(args.edges)
    part = read_partition_csv(args.partition, graph, getattr(args, "baseline", None)) if need_partition else None
    return graph, part


def _dump_json(obj, path):
    Path(path).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def cmd_backbone(args):
    graph = read_edge_csv(args.edges)
    result = bb.disparity_filter(graph, args.alpha)
    write_edge_csv(result.backbone, args.out)
    if args.scores:
        bb.write_scores_csv(graph, result, args.scores)
    log.info("kept %d of %d edges; %d node(s) removed", len(result.retained), graph.number_of_edges(),
             len(result.removed_nodes))


def cmd_describe(args):
    graph, part = _load(args)
    _dump_json(describe(graph, part).to_dict(), args.out)
    if args.dyad_census:
        _dump_json(dyad_census(graph), args.dyad_census)


def cmd_ei(args):
    graph, part = _load(args)
    write_ei_csv(graph, part, ei_index(graph, part), args.out)


def cmd_core(args):
    graph = read_edge_csv(args.edges)
    write_core_csv(rich_core(graph, args.strength), args.out)


def cmd_brokerage(args):
    graph, part = _load(args)
    write_census_csv(graph, part, args.out)


def cmd_nullsim(args):
    graph = read_edge_csv(args.edges).with_unit_weights()
    cfg = RewireConfig(args.swaps_per_edge, args.seed, args.samples)
    samples = degree_preserving_arrays(graph, cfg, args.threads)
    nodes = graph.nodes
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("sample,source,target\n")
        for k, (src, dst) in enumerate(samples):
            for i, j in sorted(zip(src.tolist(), dst.tolist())):
                fh.write(f"{k},{nodes[i]},{nodes[j]}\n")


def _terms(args):
    return read_terms_json(args.terms) if args.terms else default_terms()


def cmd_ergm_fit(args):
    graph, part = _load(args)
    binary = graph.with_unit_weights()
    model = ModelSpec(_terms(args), graph.nodes, part)
    fit = fit_mple(binary, model)
    write_fit_json(fit, model, binary, args.out)
    for name, coef, se in fit.table():
        log.info("%-28s %10.4f (%.4f)", name, coef, se)


def cmd_ergm_simulate(args):
    model, fit, observed = read_fit_json(args.fit)
    initial = observed if args.start == "observed" else None
    sim = run_chains(model, fit.coefficients, args.samples, burnin=args.burnin, interval=args.interval,
                     seed=args.seed, initial=initial, chains=args.chains, threads=args.threads)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    width = max(4, len(str(args.samples - 1)))
    for k, g in enumerate(sim.graphs()):
        write_edge_csv(g, out / f"sample_{k:0{width}d}.csv")
    _dump_json(sim.metadata(), out / "simulation.json")


def cmd_zscore(args):
    graph, part = _load(args)
    binary = graph.with_unit_weights()
    census = brokerage_census(graph, part)
    if args.null == "degree":
        ensemble = degree_preserving_arrays(binary, RewireConfig(args.swaps_per_edge, args.seed, args.samples),
                                            args.threads)
    else:
        model = ModelSpec(_terms(args), graph.nodes, part)
        fit = fit_mple(binary, model)
        ensemble = run_chains(model, fit.coefficients, args.samples, seed=args.seed, initial=binary,
                              chains=args.chains, threads=args.threads).samples
    report = role_significance_profile(census, ensemble, part, args.null, args.threshold)
    out = Path(args.out)
    write_report_json(report, out)
    write_plotdata_csv([report], args.plotdata or out.with_name("z_plotdata.csv"))
    write_country_csv([report], part, args.country_csv or out.with_name(out.stem + "_country.csv"))
    for role, rz in report.per_role.items():
        log.info("%-15s f_real=%d mean=%.2f std=%.2f z=%s %s", role, rz.f_real, rz.null_mean, rz.null_std,
                 "n/a" if rz.z is None else f"{rz.z:.3f}", rz.classification)


def cmd_pipeline_run(args):
    cfg = PipelineConfig.from_file(args.config)
    if args.threads:
        cfg.threads = args.threads
    manifest = run_pipeline(cfg)
    log.info("wrote %d artifact(s) to %s", len(manifest["files"]), cfg.output_dir)


def cmd_fixture(args):
    edges, part = write_fixture(args.out_dir, seed=args.seed)
    cfg = {
        "edges": edges.name,
        "partition": part.name,
        "baseline": "R1",
        "output_dir": "results",
        "seed": 42,
        "ergm": {"samples": 200},
        "degree_null": {"samples": 200},
    }
    _dump_json(cfg, Path(args.out_dir) / "config.json")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tradenet", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_args(sp, partition=True):
        sp.add_argument("--edges", required=True, help="edge-list CSV with header source,target,weight")
        if partition:
            sp.add_argument("--partition", required=True, help="partition CSV with header node,region")
            sp.add_argument("--baseline", default=None, help="baseline region (default: first label seen)")

    def sim_args(sp):
        sp.add_argument("--samples", type=int, default=1000)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: TRADENET_THREADS or CPU count)")

    sp = sub.add_parser("backbone", help="disparity-filter backbone")
    graph_args(sp, partition=False)
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--out", required=True)
    sp.add_argument("--scores", default=None, help="optional per-edge score CSV")
    sp.set_defaults(func=cmd_backbone)

    sp = sub.add_parser("describe", help="network descriptive statistics (JSON)")
    graph_args(sp)
    sp.add_argument("--out", required=True)
    sp.add_argument("--dyad-census", default=None, help="optional JSON path for the dyad census")
    sp.set_defaults(func=cmd_describe)

    sp = sub.add_parser("ei", help="E-I index per node")
    graph_args(sp)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_ei)

    sp = sub.add_parser("core", help="rich-core core/periphery split")
    graph_args(sp, partition=False)
    sp.add_argument("--strength", choices=("in", "out", "total"), default="total")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_core)

    sp = sub.add_parser("brokerage", help="Gould-Fernandez brokerage census")
    graph_args(sp)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_brokerage)

    sp = sub.add_parser("nullsim", help="degree-preserving null samples")
    graph_args(sp, partition=False)
    sp.add_argument("--method", choices=("degree",), default="degree")
    sim_args(sp)
    sp.add_argument("--swaps-per-edge", type=int, default=100)
    sp.add_argument("--out", required=True, help="CSV with columns sample,source,target")
    sp.set_defaults(func=cmd_nullsim)

    ergm = sub.add_parser("ergm", help="fit or simulate an ERGM").add_subparsers(dest="ergm_command", required=True)
    sp = ergm.add_parser("fit", help="maximum pseudo-likelihood fit")
    graph_args(sp)
    sp.add_argument("--terms", default=None, help="JSON term list (default: all eight terms, decay 0.5)")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_ergm_fit)
    sp = ergm.add_parser("simulate", help="simulate graphs from a fit file")
    sp.add_argument("--fit", required=True)
    sim_args(sp)
    sp.add_argument("--burnin", type=int, default=None)
    sp.add_argument("--interval", type=int, default=None)
    sp.add_argument("--chains", type=int, default=4)
    sp.add_argument("--start", choices=("observed", "empty"), default="observed")
    sp.add_argument("--out-dir", required=True)
    sp.set_defaults(func=cmd_ergm_simulate)

    sp = sub.add_parser("zscore", help="brokerage role Z-scores against a null ensemble")
    graph_args(sp)
    sp.add_argument("--null", choices=("ergm", "degree"), required=True)
    sim_args(sp)
    sp.add_argument("--swaps-per-edge", type=int, default=100)
    sp.add_argument("--terms", default=None)
    sp.add_argument("--chains", type=int, default=4)
    sp.add_argument("--threshold", type=float, default=2.0)
    sp.add_argument("--out", required=True)
    sp.add_argument("--plotdata", default=None, help="default: z_plotdata.csv next to --out")
    sp.add_argument("--country-csv", default=None, help="default: <out stem>_country.csv next to --out")
    sp.set_defaults(func=cmd_zscore)

    pipe = sub.add_parser("pipeline", help="end-to-end run").add_subparsers(dest="pipeline_command", required=True)
    sp = pipe.add_parser("run")
    sp.add_argument("--config", required=True)
    sp.add_argument("--threads", type=int, default=None)
    sp.set_defaults(func=cmd_pipeline_run)

    sp = sub.add_parser("fixture", help="write the synthetic planted-region fixture and a demo config")
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("--seed", type=int, default=7)
    sp.set_defaults(func=cmd_fixture)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except TradenetError as exc:
        print(f"tradenet: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"tradenet: I/O error: {exc}", file=sys.stderr)
        return 5
    return 0


if __name__ == "__main__":
    sys.exit(main())
