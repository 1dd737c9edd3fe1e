"""Command-line front end.

Subcommands wrap the library layer by layer: ``solve`` for single
quasi-momentum roots, ``eps`` for the branch-point catalog, ``sheet``
for Riemann-sheet grids, ``holonomy`` for transport matrices,
``cycle`` for level permutations, and ``oracle-check`` for the
closed-form-versus-quadrature comparison of the gauge connection.
Tables and documents are emitted through the export-record layer, so
every artifact carries the hash of the configuration that produced it.

Exit codes: 0 on success, 2 when a solve or transport fails, 3 when a
holonomy matrix cannot be thresholded into a permutation.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .bethe import Parity, SolverError, energy, solve_k_real
from .config import ConfigError, RunConfig, load_config
from .continuation import ComplexPath, GridSpec, build_sheet
from .cycles import (InconclusivePermutationError, PathConstructionError,
                     chained_loop_holonomy, contour_permutation,
                     hermitian_cycle, n_ep_contour,
                     permutation_from_holonomy)
from .eigensystem import overlap_connection_oracle
from .exceptional import ExceptionalPointError, find_ep
from .holonomy import (TransportError, TruncationSpec, ep_loop_holonomy,
                       gauge_connection, transport)
from .serialize import (ExportRecord, csv_table, cycle_document, format_float,
                        holonomy_document, sheet_document)

EXIT_OK = 0
EXIT_SOLVER = 2
EXIT_INCONCLUSIVE = 3


def _parity(text: str) -> Parity:
    try:
        return Parity[text.upper()]
    except KeyError:
        raise ConfigError(f"parity must be 'even' or 'odd', got {text!r}")


def cmd_solve(cfg: RunConfig, args) -> tuple[int, str]:
    state = solve_k_real(args.n, args.g, tol=cfg.solver_tol)
    level = energy(state.parity.bound_level, state)
    lines = [f"n = {state.n}",
             f"parity = {state.parity.name.lower()}",
             f"g = {format_float(state.g)}",
             f"k_re = {format_float(state.k.real)}",
             f"k_im = {format_float(state.k.imag)}",
             f"scaled_residual = {format_float(state.scaled_residual())}",
             f"energy = {format_float(level.energy.real)}"]
    return EXIT_OK, "\n".join(lines) + "\n"


def cmd_eps(cfg: RunConfig, args) -> tuple[int, str]:
    parity = _parity(args.parity)
    n_max = cfg.ep_n_max if args.n_max is None else args.n_max
    columns = ("n", "g_re", "g_im", "k_re", "k_im",
               "residual_bethe", "residual_r", "status")
    rows = []
    failures = 0
    for n in range(parity.bound_level + 2, n_max + 1, 2):
        try:
            ep = find_ep(n, tol=cfg.solver_tol, verify_unique=False)
            rb, rr = ep.residuals()
            rows.append((n, ep.g_ep.real, ep.g_ep.imag, ep.k_ep.real,
                         ep.k_ep.imag, abs(rb), abs(rr), "ok"))
        except (ExceptionalPointError, SolverError) as exc:
            failures += 1
            rows.append((n, float("nan"), float("nan"), float("nan"),
                         float("nan"), float("nan"), float("nan"),
                         f"failed: {type(exc).__name__}"))
    record = ExportRecord("eps", cfg.config_hash(), csv_table(columns, rows))
    return (EXIT_SOLVER if failures else EXIT_OK), record.render()


def cmd_sheet(cfg: RunConfig, args) -> tuple[int, str]:
    grid = GridSpec(
        re_min=cfg.grid_re_min if args.re_min is None else args.re_min,
        re_max=cfg.grid_re_max if args.re_max is None else args.re_max,
        im_min=cfg.grid_im_min if args.im_min is None else args.im_min,
        im_max=cfg.grid_im_max if args.im_max is None else args.im_max,
        n_re=cfg.grid_points if args.points is None else args.points,
        n_im=cfg.grid_points if args.points is None else args.points)
    sheet = build_sheet(args.n, grid, tol=cfg.solver_tol,
                        ep_finder=lambda m: find_ep(m, verify_unique=False).g_ep)
    rows = []
    for i, y in enumerate(sheet.im_axis):
        for j, x in enumerate(sheet.re_axis):
            k = sheet.k[i, j]
            rows.append((float(x), float(y), float(k.real), float(k.imag)))
    payload = sheet_document(sheet.cut_segments,
                             ("g_re", "g_im", "k_re", "k_im"), rows)
    record = ExportRecord("sheet", cfg.config_hash(), payload)
    return EXIT_OK, record.render()


def _holonomy_payload(hol, g0=None) -> str:
    res = permutation_from_holonomy(hol, g0=g0)
    return holonomy_document(hol.truncation.levels, hol.matrix,
                             res.permutation, res.phases)


def cmd_holonomy(cfg: RunConfig, args) -> tuple[int, str]:
    trunc_n = cfg.truncation if args.trunc is None else args.trunc
    radius = cfg.loop_radius if args.radius is None else args.radius
    if args.contour == "ep-loop":
        trunc = TruncationSpec(Parity.of_level(args.n), trunc_n)
        loop = ep_loop_holonomy(args.n, trunc, radius,
                                rtol=cfg.transport_rtol)
        payload = _holonomy_payload(loop.holonomy)
    elif args.contour == "chain":
        ns = tuple(int(v) for v in args.ns.split(","))
        if not ns:
            raise ConfigError("chain contour needs at least one level")
        trunc = TruncationSpec(Parity.of_level(ns[0]), trunc_n)
        hol = chained_loop_holonomy(ns, trunc, radius, rtol=cfg.transport_rtol)
        payload = _holonomy_payload(hol)
    else:
        trunc = TruncationSpec(_parity(args.parity), trunc_n)
        hol = transport(ComplexPath([args.g0]), trunc, rtol=cfg.transport_rtol)
        payload = _holonomy_payload(hol, g0=args.g0)
    record = ExportRecord("holonomy", cfg.config_hash(), payload)
    return EXIT_OK, record.render()


def cmd_cycle(cfg: RunConfig, args) -> tuple[int, str]:
    trunc_n = cfg.truncation if args.trunc is None else args.trunc
    trunc = TruncationSpec(_parity(args.parity), trunc_n)
    if args.contour == "hermitian":
        res = hermitian_cycle(args.g0, trunc, proxy=cfg.proxy_infinity)
    else:
        path = n_ep_contour(args.g0, args.n_ep, trunc.parity)
        res = contour_permutation(path, trunc)
    payload = cycle_document(res.g0, res.kbar, trunc.levels, res.permutation,
                             res.phases, res.energies_before,
                             res.energies_after, res.exiting)
    record = ExportRecord("cycle", cfg.config_hash(), payload)
    return EXIT_OK, record.render()


def cmd_oracle_check(cfg: RunConfig, args) -> tuple[int, str]:
    trunc_n = cfg.truncation if args.trunc is None else args.trunc
    lines = []
    worst = 0.0
    for parity in (Parity.EVEN, Parity.ODD):
        trunc = TruncationSpec(parity, trunc_n)
        closed = gauge_connection(args.g, trunc)
        oracle = overlap_connection_oracle(trunc_n, args.g, cfg.oracle_dg,
                                           parity=parity,
                                           nodes=cfg.quadrature_nodes)
        diff = float(np.max(np.abs(closed - oracle)))
        worst = max(worst, diff)
        lines.append(f"{parity.name.lower()}: max entrywise difference = "
                     f"{format_float(diff)}")
    ok = worst < args.tol
    lines.append(f"tolerance = {format_float(args.tol)}: "
                 + ("PASS" if ok else "FAIL"))
    return (EXIT_OK if ok else EXIT_SOLVER), "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="plain-text key=value configuration file")
    common.add_argument("--out", help="write output to this file instead of stdout")

    p = argparse.ArgumentParser(
        prog="lieb2b",
        description="Quasi-momentum branches, exceptional points, and "
                    "holonomy of the two-boson ring")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common],
                       help="solve one real-coupling quasi-momentum")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--g", type=float, required=True)
    s.set_defaults(run=cmd_solve)

    s = sub.add_parser("eps", parents=[common],
                       help="catalog of exceptional points as CSV")
    s.add_argument("--parity", default="even", choices=("even", "odd"))
    s.add_argument("--n-max", type=int, default=None)
    s.set_defaults(run=cmd_eps)

    s = sub.add_parser("sheet", parents=[common],
                       help="Riemann-sheet grid of one branch as CSV")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--re-min", type=float, default=None)
    s.add_argument("--re-max", type=float, default=None)
    s.add_argument("--im-min", type=float, default=None)
    s.add_argument("--im-max", type=float, default=None)
    s.add_argument("--points", type=int, default=None)
    s.set_defaults(run=cmd_sheet)

    s = sub.add_parser("holonomy", parents=[common],
                       help="transport matrix of a loop contour")
    s.add_argument("--contour", default="ep-loop",
                   choices=("ep-loop", "chain", "empty"))
    s.add_argument("--n", type=int, default=2, help="level for ep-loop")
    s.add_argument("--ns", default="2,4", help="levels for chain, comma separated")
    s.add_argument("--radius", type=float, default=None)
    s.add_argument("--trunc", type=int, default=None)
    s.add_argument("--parity", default="even", choices=("even", "odd"))
    s.add_argument("--g0", type=float, default=1.0, help="base point for empty contour")
    s.set_defaults(run=cmd_holonomy)

    s = sub.add_parser("cycle", parents=[common],
                       help="level permutation of a closed coupling cycle")
    s.add_argument("--contour", default="hermitian", choices=("hermitian", "eps"))
    s.add_argument("--g0", type=float, default=1.0)
    s.add_argument("--n-ep", type=int, default=1, help="enclosed points for eps contour")
    s.add_argument("--trunc", type=int, default=None)
    s.add_argument("--parity", default="even", choices=("even", "odd"))
    s.set_defaults(run=cmd_cycle)

    s = sub.add_parser("oracle-check", parents=[common],
                       help="closed-form connection vs quadrature oracle")
    s.add_argument("--g", type=float, default=0.5)
    s.add_argument("--trunc", type=int, default=8)
    s.add_argument("--tol", type=float, default=1e-6)
    s.set_defaults(run=cmd_oracle_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        code, text = args.run(cfg, args)
    except (ConfigError, PathConstructionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (SolverError, ExceptionalPointError, TransportError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except InconclusivePermutationError as exc:
        print(f"inconclusive permutation: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
