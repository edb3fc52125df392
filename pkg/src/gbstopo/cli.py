"""Command-line front door.

Every command is deterministic given its full flag set: all randomness is
seeded, no timestamps are written, and re-running a command overwrites its
output byte-identically. Each report embeds the resolved configuration
that produced it.

Exit codes: 0 success, 2 usage, 3 input format, 4 enumeration budget,
5 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import cliques as cl
from . import encoding as enc_mod
from . import graph as gr
from . import percolation as perc
from . import sampler as smp
from . import tda
from .errors import BudgetError, FormatError, InvariantError

EXIT_FORMAT = 3
EXIT_BUDGET = 4
EXIT_INVARIANT = 5


def _axis(spec: str) -> list[float]:
    """Parse an axis flag: either comma-separated values or lin:lo:hi:num."""
    if spec.startswith("lin:"):
        parts = spec.split(":")
        if len(parts) != 4:
            raise FormatError(f"bad axis spec {spec!r}; want lin:lo:hi:num")
        lo, hi, num = float(parts[1]), float(parts[2]), int(parts[3])
        return [float(x) for x in np.linspace(lo, hi, num)]
    try:
        return [float(x) for x in spec.split(",") if x.strip()]
    except ValueError as exc:
        raise FormatError(f"bad axis spec {spec!r}") from exc


def _provenance(args: argparse.Namespace) -> dict:
    skip = {"func", "dry_run", "config", "command"}
    params = {
        k: v for k, v in sorted(vars(args).items()) if k not in skip
    }
    return {"command": args.command, "params": params}


def _dry_run(args: argparse.Namespace) -> bool:
    if not args.dry_run:
        return False
    doc = _provenance(args)
    for key, val in doc["params"].items():
        print(f"{key} = {val}")
    return True


def _write(path: str, data: bytes) -> None:
    Path(path).write_bytes(data)


def _read_graph(path: str) -> gr.ComplexGraph:
    try:
        return gr.load_graph(Path(path).read_bytes())
    except FileNotFoundError as exc:
        raise FormatError(f"graph file not found: {path}") from exc


def _get_encoding(args) -> enc_mod.GBSEncoding:
    if getattr(args, "encoding", None):
        try:
            return enc_mod.load_encoding(Path(args.encoding).read_bytes())
        except FileNotFoundError as exc:
            raise FormatError(f"encoding file not found: {args.encoding}") from exc
    g = _read_graph(args.graph)
    return enc_mod.encode(g, args.target_spectral, args.d)


def _json_report(payload: dict, args: argparse.Namespace) -> bytes:
    doc = {"provenance": _provenance(args)}
    doc.update(payload)
    return (json.dumps(doc, indent=1, sort_keys=False) + "\n").encode()


def _table(
    header: list[str], rows: list[list], args: argparse.Namespace,
    footer: list[str] | None = None,
) -> bytes:
    lines = [f"# {args.command}"]
    for k, v in _provenance(args)["params"].items():
        lines.append(f"# {k} = {v}")
    lines.append("\t".join(header))
    for row in rows:
        lines.append("\t".join(_fmt(v) for v in row))
    lines.extend(footer or [])
    return ("\n".join(lines) + "\n").encode()


def _fmt(v) -> str:
    if isinstance(v, float):
        if v == math.inf:
            return "inf"
        if v == -math.inf:
            return "-inf"
        return repr(v)
    return str(v)


def cmd_gen(args) -> int:
    if _dry_run(args):
        return 0
    law = (tuple(args.alpha_range), tuple(args.beta_range))
    g = gr.random_dual_layer(args.n, args.p, law, args.seed)
    doc = json.loads(gr.save_graph(g).decode())
    doc["provenance"] = _provenance(args)
    _write(args.out, (json.dumps(doc, indent=1) + "\n").encode())
    return 0


def cmd_encode(args) -> int:
    if _dry_run(args):
        return 0
    g = _read_graph(args.graph)
    e = enc_mod.encode(g, args.target_spectral, args.d)
    doc = json.loads(enc_mod.save_encoding(e).decode())
    doc["provenance"] = _provenance(args)
    _write(args.out, (json.dumps(doc, indent=1) + "\n").encode())
    return 0


def cmd_sample(args) -> int:
    if _dry_run(args):
        return 0
    if args.backend == "uniform":
        if args.k is None:
            raise FormatError("--k is required for the uniform backend")
        if args.graph:
            n_modes = _read_graph(args.graph).n
        elif args.n_modes:
            n_modes = args.n_modes
        else:
            raise FormatError("uniform backend needs --graph or --n-modes")
        batch = smp.sample_uniform(n_modes, args.k, args.shots, args.seed)
    else:
        e = _get_encoding(args)
        if args.backend == "gbs":
            batch = smp.sample_gbs(
                e, args.shots, args.cutoff_total, args.cutoff_per_mode, args.seed
            )
        elif args.backend == "squashed":
            batch = smp.sample_squashed(e, args.shots, args.seed)
        else:
            raise FormatError(f"unknown backend {args.backend!r}")
    if args.eta < 1.0:
        batch = smp.apply_loss(batch, args.eta, args.seed)
    payload = smp.save_batch(batch).decode().splitlines()
    header = json.loads(payload[0])
    header["provenance"] = _provenance(args)
    payload[0] = json.dumps(header)
    _write(args.out, ("\n".join(payload) + "\n").encode())
    return 0


def cmd_dist(args) -> int:
    if _dry_run(args):
        return 0
    e = _get_encoding(args)
    dist = smp.enumerate_distribution(e, args.cutoff_total, args.cutoff_per_mode)
    if args.eta < 1.0:
        dist = smp.apply_loss(dist, args.eta)
    doc = json.loads(smp.save_distribution(dist).decode())
    doc["provenance"] = _provenance(args)
    _write(args.out, (json.dumps(doc, indent=1) + "\n").encode())
    return 0


def cmd_cliques(args) -> int:
    if _dry_run(args):
        return 0
    g = _read_graph(args.graph)
    try:
        batch = smp.load_batch(Path(args.samples).read_bytes())
    except FileNotFoundError as exc:
        raise FormatError(f"sample file not found: {args.samples}") from exc
    report = cl.find_cliques(g, batch, args.k, args.max_iters)
    doc = json.loads(cl.save_report(report).decode())
    _write(args.out, _json_report(doc, args))
    return 0


def cmd_betti(args) -> int:
    if _dry_run(args):
        return 0
    g = _read_graph(args.graph)
    thresholds = _axis(args.delta_axis) if args.delta_axis else [args.delta_t]
    rows = []
    kmax_seen = 1
    profiles = []
    for dt in thresholds:
        if args.k_ref:
            complex_ = tda.density_filter_complex(g, args.k_ref, dt)
        else:
            complex_ = cl.enumerate_cliques(g, args.dmax + 2)
        prof = tda.betti_numbers(complex_, args.dmax)
        chi = tda.euler_characteristic(complex_)
        profiles.append((dt, prof, chi))
        kmax_seen = max(kmax_seen, max(prof.counts))
    header = (
        ["delta_t"]
        + [f"m{k}" for k in range(1, kmax_seen + 1)]
        + [f"r{k}" for k in range(2, kmax_seen + 1)]
        + [f"beta{d}" for d in range(args.dmax + 1)]
        + ["chi", "s_chi"]
    )
    for dt, prof, chi in profiles:
        rows.append(
            [dt]
            + [prof.counts.get(k, 0) for k in range(1, kmax_seen + 1)]
            + [prof.ranks.get(k, 0) for k in range(2, kmax_seen + 1)]
            + list(prof.betti)
            + [chi, tda.euler_entropy(chi)]
        )
    _write(args.out, _table(header, rows, args))
    return 0


def cmd_surface(args) -> int:
    if _dry_run(args):
        return 0
    g = _read_graph(args.graph)
    surf = tda.filtration_surface(
        g, _axis(args.omega_axis), _axis(args.delta_axis), args.k_ref
    )
    kmax = max(
        (
            max((k for k, count in cell.m.items() if count), default=1)
            for row in surf.cells
            for cell in row
        ),
        default=1,
    )
    header = (
        ["omega_t", "delta_t"]
        + [f"m{k}" for k in range(1, kmax + 1)]
        + ["chi", "s_chi", "tpt"]
    )
    rows = []
    for i, omega_t in enumerate(surf.omega_axis):
        for j, delta_t in enumerate(surf.delta_axis):
            cell = surf.cell(i, j)
            rows.append(
                [omega_t, delta_t]
                + [cell.m.get(k, 0) for k in range(1, kmax + 1)]
                + [cell.chi, cell.s_chi, int(cell.tpt)]
            )
    report = tda.tpt_points(surf)
    footer = [
        f"# front: ({a[0]},{a[1]})-({b[0]},{b[1]})"
        for a, b in report.sign_fronts
    ]
    _write(args.out, _table(header, rows, args, footer))
    return 0


def cmd_persistence(args) -> int:
    if _dry_run(args):
        return 0
    g = _read_graph(args.graph)
    pairs = tda.clique_persistence(g, args.k)
    pairs.sort(key=lambda p: (p.birth, p.clique))
    rows = [
        [",".join(str(v) for v in p.clique), p.birth, p.death] for p in pairs
    ]
    footer = [
        "# death convention: threshold at which the clique is absorbed "
        "into a larger clique (loses maximality); inf = never absorbed"
    ]
    _write(
        args.out, _table(["vertices", "birth", "death"], rows, args, footer)
    )
    return 0


def cmd_percolation(args) -> int:
    if _dry_run(args):
        return 0
    g = _read_graph(args.graph)
    if args.damage_node is not None:
        g = perc.damage(g, args.damage_node, args.damage_k)
    if args.delta_t > 0.0 and args.k_ref:
        g = tda.density_filtered_graph(g, args.k_ref, args.delta_t)
    report = perc.percolation_clusters(g, args.k)
    payload = {
        "k": report.k,
        "phi": report.phi,
        "largest_nodes": report.largest_nodes,
        "clusters": [list(c) for c in report.clusters],
    }
    _write(args.out, _json_report(payload, args))
    return 0


def cmd_entropy(args) -> int:
    if _dry_run(args):
        return 0
    g = _read_graph(args.graph)
    if args.damage_node is not None:
        g = perc.damage(g, args.damage_node, args.damage_k)
    cfg = perc.SweepConfig(
        k_ref=args.k_ref,
        alpha=args.alpha,
        photon_total=args.photon_total,
        target_spectral=args.target_spectral,
        d=args.d,
        backend=args.backend,
        shots=args.shots,
        seed=args.seed,
        cutoff_total=args.cutoff_total,
        cutoff_per_mode=args.cutoff_per_mode,
        collision_policy=args.collision_policy,
    )
    phi_curve, ent_curve = perc.percolation_entropy_sweep(
        g, _axis(args.delta_axis), cfg
    )
    rows = [
        [dt, phi, nstar, h, hn, ent_curve.shots, ent_curve.backend]
        for dt, phi, nstar, h, hn in zip(
            phi_curve.axis,
            phi_curve.phi,
            phi_curve.largest_nodes,
            ent_curve.raw_values,
            ent_curve.values,
        )
    ]
    try:
        rho = perc.curve_correlation(phi_curve.phi, ent_curve.values)
        rho_repr = _fmt(float(rho))
    except ValueError:
        rho_repr = "nan"
    footer = [f"# spearman_phi_entropy = {rho_repr}"]
    _write(
        args.out,
        _table(
            ["delta_t", "phi", "n_star", "h_alpha", "h_norm", "shots", "backend"],
            rows,
            args,
            footer,
        ),
    )
    return 0


def cmd_compare(args) -> int:
    if _dry_run(args):
        return 0
    g = _read_graph(args.graph)
    e = enc_mod.encode(g, args.target_spectral, args.d)
    batches = {
        "gbs": smp.sample_gbs(
            e, args.shots, args.cutoff_total, args.cutoff_per_mode, args.seed
        ),
        "uniform": smp.sample_uniform(g.n, args.k, args.shots, args.seed + 1),
        "squashed": smp.sample_squashed(e, args.shots, args.seed + 2),
    }
    if args.eta < 1.0:
        batches = {
            name: smp.apply_loss(b, args.eta, args.seed + 3)
            for name, b in batches.items()
        }
    stats = {}
    for name, batch in batches.items():
        rep = cl.find_cliques(g, batch, args.k, args.max_iters)
        lo, hi = cl.binomial_interval(len(rep.cliques_found), rep.shots_in)
        stats[name] = {
            "shots": rep.shots_in,
            "successes": len(rep.cliques_found),
            "success_rate": rep.success_rate,
            "interval_95": [lo, hi],
        }
    ratios = {}
    for base in ("uniform", "squashed"):
        num = stats["gbs"]["success_rate"]
        den = stats[base]["success_rate"]
        ratios[f"gbs_over_{base}"] = (
            cl.enhancement(num, den) if den > 0 else None
        )
    payload = {"k": args.k, "backends": stats, "enhancement": ratios}
    _write(args.out, _json_report(payload, args))
    return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with default parameter values")
    p.add_argument(
        "--dry-run",
        action="store_true",
        help="print the resolved configuration and exit without computing",
    )


def _add_encoding_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--target-spectral", type=float, default=0.7)
    p.add_argument("--d", type=float, default=0.0)


def _add_cutoffs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cutoff-total", type=int, default=6)
    p.add_argument("--cutoff-per-mode", type=int, default=6)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gbstopo",
        description="Topological analysis of complex-weighted networks "
        "through a simulated Gaussian boson sampler.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random dual-layer network")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--alpha-range", type=float, nargs=2, default=[-1.0, 1.0])
    p.add_argument("--beta-range", type=float, nargs=2, default=[-1.0, 1.0])
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("encode", help="turn a graph into a machine program")
    p.add_argument("--graph", required=True)
    _add_encoding_opts(p)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("sample", help="draw photon patterns from a backend")
    p.add_argument("--graph")
    p.add_argument("--encoding")
    p.add_argument("--n-modes", type=int)
    p.add_argument(
        "--backend", choices=("gbs", "uniform", "squashed"), default="gbs"
    )
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--k", type=int, help="subset size for the uniform backend")
    p.add_argument("--eta", type=float, default=1.0)
    _add_encoding_opts(p)
    _add_cutoffs(p)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("dist", help="enumerate the exact pattern distribution")
    p.add_argument("--graph")
    p.add_argument("--encoding")
    p.add_argument("--eta", type=float, default=1.0)
    _add_encoding_opts(p)
    _add_cutoffs(p)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("cliques", help="search samples for weighted k-cliques")
    p.add_argument("--graph", required=True)
    p.add_argument("--samples", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-iters", type=int, default=50)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_cliques)

    p = sub.add_parser("betti", help="Betti numbers, optionally under a "
                       "clique-density filtration")
    p.add_argument("--graph", required=True)
    p.add_argument("--dmax", type=int, default=3)
    p.add_argument("--k-ref", type=int)
    p.add_argument("--delta-t", type=float, default=0.0)
    p.add_argument("--delta-axis", help="sweep thresholds: lo,hi,... or lin:lo:hi:n")
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("surface", help="two-dimensional filtration surface")
    p.add_argument("--graph", required=True)
    p.add_argument("--omega-axis", required=True)
    p.add_argument("--delta-axis", required=True)
    p.add_argument("--k-ref", type=int, default=2)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("persistence", help="clique birth/death thresholds")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_persistence)

    p = sub.add_parser("percolation", help="k-clique percolation clusters")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--k-ref", type=int)
    p.add_argument("--delta-t", type=float, default=0.0)
    p.add_argument("--damage-node", type=int)
    p.add_argument("--damage-k", type=int, default=4)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_percolation)

    p = sub.add_parser(
        "entropy", help="percolation order parameter vs sampling entropy sweep"
    )
    p.add_argument("--graph", required=True)
    p.add_argument("--k-ref", type=int, required=True)
    p.add_argument("--delta-axis", required=True)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--photon-total", type=int, required=True)
    p.add_argument(
        "--backend", choices=("exact", "gbs", "squashed"), default="exact"
    )
    p.add_argument("--shots", type=int, default=3000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--collision-policy",
        choices=("threshold_collapse", "collision_free_only"),
        default="threshold_collapse",
    )
    p.add_argument("--damage-node", type=int)
    p.add_argument("--damage-k", type=int, default=4)
    _add_encoding_opts(p)
    _add_cutoffs(p)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser(
        "compare", help="GBS vs uniform vs squashed clique search"
    )
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--shots", type=int, default=3000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-iters", type=int, default=50)
    p.add_argument("--eta", type=float, default=1.0)
    _add_encoding_opts(p)
    _add_cutoffs(p)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()

    # Resolve --config before the real parse so flags override file values.
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        try:
            cfg = json.loads(Path(known.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read config {known.config}: {exc}",
                  file=sys.stderr)
            return EXIT_FORMAT
        if not isinstance(cfg, dict):
            print("error: config must be a flat JSON object", file=sys.stderr)
            return EXIT_FORMAT
        for sp in parser._subparsers._group_actions[0].choices.values():
            dests = {a.dest for a in sp._actions}
            sp.set_defaults(**{k: v for k, v in cfg.items() if k in dests})
            for action in sp._actions:
                if action.dest in cfg:
                    action.required = False

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except BudgetError as exc:
        print(
            f"error: {exc} (required {exc.required}, budget {exc.budget})",
            file=sys.stderr,
        )
        return EXIT_BUDGET
    except InvariantError as exc:
        print(f"error: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
