"""Command-line surface.

Subcommands cover each pipeline stage (gen, reduce, project, vertices),
coherence checking with a choice of oracle, credal sets, natural extension,
full pipeline runs, count tables and plot data emission.  All outputs are
deterministic for fixed inputs: identical runs produce identical bytes,
regardless of the parallelism degree.

Exit codes: 0 success; 1 domain or I/O failure (including an incoherent
prevision under ``check``); 2 usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ._rat import rat, rat_str
from .catalog import PRESETS, Budget, FamilySpec, PipelineSummary, run_pipeline, reproduce_table
from .coherence import check_against, check_direct, generate_constraints
from .credal import credal_vertices, is_lower_envelope, natural_extension
from .errors import PrevpolyError
from .gambles import Gamble, GambleSet, LowerPrevision, augment_with_indicators
from .polytope import VRep, adjacency, enumerate_vertices, fm_project, remove_redundant
from . import fileio

__all__ = ["main"]


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: str, content: str) -> None:
    Path(path).write_text(content, encoding="utf-8", newline="\n")


def _load_bound_prevision(args) -> tuple[GambleSet, LowerPrevision]:
    k = fileio.read_gamble_set(_read(args.gambles))
    if not args.no_augment:
        k, _ = augment_with_indicators(k)
    values = fileio.read_prevision_values(_read(args.prevision))
    p = LowerPrevision.of(k, values)
    return k, p


def _cmd_gen(args) -> int:
    k = fileio.read_gamble_set(_read(args.gambles))
    if not args.no_augment:
        k, added = augment_with_indicators(k)
        if added:
            print(f"augmented with indicators: {' '.join(added)}", file=sys.stderr)
    cs = generate_constraints(k, jobs=args.jobs)
    print(f"raw {cs.raw_generated} deduplicated {len(cs.constraints)}", file=sys.stderr)
    _write(args.out, fileio.write_hrep(cs.to_hrep()))
    return 0


def _cmd_reduce(args) -> int:
    h = fileio.read_hrep(_read(args.infile))
    _write(args.out, fileio.write_hrep(remove_redundant(h)))
    return 0


def _cmd_project(args) -> int:
    h = fileio.read_hrep(_read(args.infile))
    keep = [s for s in args.keep.split(",") if s]
    _write(args.out, fileio.write_hrep(fm_project(h, keep)))
    return 0


def _cmd_vertices(args) -> int:
    h = fileio.read_hrep(_read(args.infile))
    vrep, incidence = enumerate_vertices(h, max_rays=args.max_vertices)
    _write(args.out, fileio.write_vrep(vrep))
    if args.adjacency:
        graph = adjacency(vrep, incidence)
        _write(args.adjacency, fileio.write_adjacency(graph))
    return 0


def _cmd_check(args) -> int:
    k, p = _load_bound_prevision(args)
    if args.envelope:
        ok = is_lower_envelope(p, k)
        detail = "" if ok else "prevision differs from the lower envelope of its credal set"
    elif args.direct:
        result = check_direct(p, k)
        ok = result.coherent
        if ok:
            detail = ""
        else:
            w = result.witness
            detail = (
                f"violated: subset ({', '.join(w.subset)}) "
                f"weights ({', '.join(rat_str(v) for v in w.lam)}) bound {rat_str(w.gamma)}"
            )
    else:
        result = check_against(p, generate_constraints(k, jobs=args.jobs))
        ok = result.coherent
        detail = "" if ok else f"{len(result.violations)} constraint(s) violated"
        for c, slack in result.violations:
            names = [
                f"{co}*{n}" for co, n in zip(c.coeffs, k.names) if co
            ]
            detail += f"\n  {' + '.join(names)} <= {c.rhs} exceeded by {rat_str(slack)}"
    print("coherent" if ok else f"incoherent{': ' + detail if detail else ''}")
    return 0 if ok else 1


def _cmd_credal(args) -> int:
    k, p = _load_bound_prevision(args)
    cs = credal_vertices(p, k)
    vrep = VRep(
        len(k.space), tuple(m.probabilities for m in cs.vertices), k.space.elements
    )
    _write(args.out, fileio.write_vrep(vrep))
    print(f"{len(cs.vertices)} credal vertices", file=sys.stderr)
    return 0


def _cmd_extend(args) -> int:
    k, p = _load_bound_prevision(args)
    payoffs = [rat(tok) for tok in args.target.split(",")]
    g = Gamble.of(k.space, payoffs)
    value = natural_extension(p, k, g)
    print(rat_str(value))
    return 0


def _summary_text(s: PipelineSummary) -> str:
    lines = [
        f"label {s.label}",
        "space " + " ".join(s.original.space.elements),
        "gambles " + " ".join(s.original.names),
        "augmented " + " ".join(s.augmented.names),
        f"raw_generated {s.raw_generated}",
        f"deduplicated {s.deduped}",
        f"irredundant {s.irredundant}",
        f"vertices {s.n_vertices if s.n_vertices is not None else 'skipped'}",
        f"status {s.status}",
    ]
    return "\n".join(lines) + "\n"


def _budget_from(args) -> Budget:
    base = Budget()
    cap = args.max_vertices
    return Budget(
        max_vertices=base.max_vertices if cap is None else cap,
        max_dd_rays=base.max_dd_rays if cap is None else cap,
        time_limit=args.time_limit,
    )


def _cmd_pipeline(args) -> int:
    if args.preset:
        spec = PRESETS.get(args.preset)
        if spec is None:
            raise PrevpolyError(f"unknown preset {args.preset!r}; known: {sorted(PRESETS)}")
        source: FamilySpec | GambleSet = spec
    elif args.family:
        if args.family == "values_based":
            omega = args.omega or 3
            source = FamilySpec(
                "values_based", omega_size=omega, k=args.k, label=f"vb{omega}_{args.k}"
            )
        else:
            source = FamilySpec(
                args.family, omega_size=args.omega, label=f"{args.family}{args.omega}"
            )
    elif args.gambles:
        source = fileio.read_gamble_set(_read(args.gambles))
    else:
        raise PrevpolyError("pipeline needs --preset, --family or --gambles")
    summary = run_pipeline(source, budget=_budget_from(args), jobs=args.jobs)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    _write(str(outdir / "summary.txt"), _summary_text(summary))
    _write(str(outdir / "constraints.hrep"), fileio.write_hrep(summary.hrep))
    if summary.vrep is not None:
        _write(str(outdir / "vertices.vrep"), fileio.write_vrep(summary.vrep))
        _write(str(outdir / "adjacency.adj"), fileio.write_adjacency(summary.graph))
    for stage, seconds in summary.timings.items():
        print(f"{stage}: {seconds:.2f}s", file=sys.stderr)
    print(
        f"{summary.label}: irredundant {summary.irredundant}, "
        f"vertices {summary.n_vertices if summary.n_vertices is not None else 'skipped'}",
        file=sys.stderr,
    )
    return 0


def _cmd_table(args) -> int:
    params = [int(tok) for tok in args.params.split(",")]
    rows = reproduce_table(args.family, params, budget=_budget_from(args), jobs=args.jobs)
    lines = [f"# table {args.family}", "param\tgambles\traw\tirredundant\tvertices\tstatus"]
    for r in rows:
        lines.append(
            "\t".join(
                [
                    str(r.parameter),
                    str(r.n_gambles),
                    "-" if r.raw_generated is None else str(r.raw_generated),
                    "-" if r.irredundant is None else str(r.irredundant),
                    "-" if r.n_vertices is None else str(r.n_vertices),
                    r.status,
                ]
            )
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        _write(args.out, text)
    else:
        print(text, end="")
    return 0


def _cmd_plotdata(args) -> int:
    k, p = _load_bound_prevision(args)
    cs = credal_vertices(p, k)
    lines = ["\t".join(k.space.elements)]
    for m in cs.vertices:
        lines.append("\t".join(rat_str(v) for v in m.probabilities))
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def _add_common_io(sub, gambles=True, prevision=False):
    if gambles:
        sub.add_argument("--gambles", required=True, help="gamble-set file (.gmb)")
    if prevision:
        sub.add_argument("--prevision", required=True, help="prevision file (.lpv)")
    sub.add_argument(
        "--no-augment",
        action="store_true",
        help="expert mode: the input already contains all singleton indicators",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prevpoly",
        description="Exact polytopes of coherent lower previsions.",
    )
    parser.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    parser.add_argument("--max-vertices", type=int, default=None, help="vertex budget")
    parser.add_argument("--time-limit", type=float, default=None, help="seconds per run")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate the coherence constraint system")
    _add_common_io(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("reduce", help="remove redundant constraints")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("project", help="project onto a coordinate subset")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--keep", required=True, help="comma-separated coordinate names")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_project)

    p = sub.add_parser("vertices", help="enumerate vertices (and adjacency)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--adjacency", default=None, help="also write the adjacency graph")
    p.set_defaults(func=_cmd_vertices)

    p = sub.add_parser("check", help="check coherence of a prevision")
    _add_common_io(p, prevision=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--direct", action="store_true", help="direct subset-enumeration oracle")
    group.add_argument("--envelope", action="store_true", help="lower-envelope LP oracle")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("credal", help="credal-set vertices of a prevision")
    _add_common_io(p, prevision=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_credal)

    p = sub.add_parser("extend", help="natural extension to a new gamble")
    _add_common_io(p, prevision=True)
    p.add_argument("--target", required=True, help="comma-separated payoffs, e.g. 0,1,1/2")
    p.set_defaults(func=_cmd_extend)

    p = sub.add_parser("pipeline", help="full run: constraints, projection, vertices")
    p.add_argument("--preset", default=None, help=f"one of {sorted(PRESETS)}")
    p.add_argument("--family", default=None)
    p.add_argument("--omega", type=int, default=0)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--gambles", default=None)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_pipeline)

    p = sub.add_parser("table", help="counts over a parameter range")
    p.add_argument("--family", required=True)
    p.add_argument("--params", required=True, help="comma-separated, e.g. 2,3,4")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("plotdata", help="credal vertices as a flat coordinate table")
    _add_common_io(p, prevision=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_plotdata)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PrevpolyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:  # malformed numbers or ranges in arguments
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
