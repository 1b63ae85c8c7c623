"""Command-line front end.

Exit status: 0 on success, 1 on usage errors, 2 when a computation would
exceed the configured capacity.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from . import __version__
from .algebra import read_forms
from .config import Config, DEFAULT_CAPACITY, DEFAULT_MAX_CELLS, DEFAULT_PRIME, DEFAULT_SEED, DEFAULT_TRIALS
from .decision import CIProfile, classify, decide, fano_ci_criterion, verify_theorem
from .errors import CapacityError
from .joins import JoinSpec, Partition, defect, join_dim, reducible_dim, secant_dim
from .series import ci_series, froberg_series, gorenstein_profile
from .slicerank import generic_hilbert_value, hilbert_value

GRAMMAR = """\
subcommands:
  decide n d a1,...,ar
  classify n d a1,...,ar
  hf n d --degrees a1,...,ak | --forms FILE
  series nvars --degrees a1,...,ak --dmax k [--froberg]
  join n d --lambdas "a1+b1;a2+b2;..."
  secant n lambda k
  defect n lambda
  fano n d r
  verify --nmax N --dmax D [--jobs J] [--all]
  gorenstein r d a1,...,ar
common options: --prime P --trials T --seed S --capacity C --max-cells M
                --json | --tsv | --text
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _partition(text: str) -> Partition:
    try:
        return Partition.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _partition_list(text: str) -> list[Partition]:
    return [_partition(chunk) for chunk in text.split(";") if chunk.strip()]


def _common() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--prime", type=int, default=argparse.SUPPRESS)
    common.add_argument("--trials", type=int, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--capacity", type=int, default=argparse.SUPPRESS)
    common.add_argument("--max-cells", type=int, default=argparse.SUPPRESS)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="output", action="store_const", const="json", default=argparse.SUPPRESS)
    fmt.add_argument("--tsv", dest="output", action="store_const", const="tsv", default=argparse.SUPPRESS)
    fmt.add_argument("--text", dest="output", action="store_const", const="text", default=argparse.SUPPRESS)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(
        prog="cihyper",
        description="Complete intersections on generic hypersurfaces.",
        epilog=GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    p = add("decide", "randomized decision for CI(a1..ar) on the generic degree-d hypersurface of P^n")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.add_argument("a", type=_int_list)

    p = add("classify", "closed-form prediction (2r <= n+2)")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.add_argument("a", type=_int_list)

    p = add("hf", "Hilbert value H(S/I, d) in n+1 variables")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--degrees", type=_int_list, help="generic generators of these degrees")
    src.add_argument("--forms", metavar="FILE", help="explicit generators, one per line or JSON")

    p = add("series", "complete-intersection or Froberg Hilbert series")
    p.add_argument("nvars", type=int)
    p.add_argument("--degrees", type=_int_list, required=True)
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--froberg", action="store_true", help="force the truncated (Froberg) series")

    p = add("join", "dimension of a join of reducible-forms varieties")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.add_argument("--lambdas", type=_partition_list, required=True)

    p = add("secant", "dimension of the join of k copies of X_lambda")
    p.add_argument("n", type=int)
    p.add_argument("lam", metavar="lambda", type=_partition)
    p.add_argument("k", type=int)

    p = add("defect", "2 dim X_lambda + 1 - dim Sec_1(X_lambda)")
    p.add_argument("n", type=int)
    p.add_argument("lam", metavar="lambda", type=_partition)

    p = add("fano", "binomial criterion for degrees in {1, d-1}")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.add_argument("r", type=int)

    p = add("verify", "compare decide and classify on all in-range profiles")
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--all", action="store_true", help="list every instance, not only problems")

    p = add("gorenstein", "Hilbert function and checks of the residual Gorenstein quotient")
    p.add_argument("r", type=int)
    p.add_argument("d", type=int)
    p.add_argument("a", type=_int_list)
    return parser


def _config(args) -> Config:
    return Config(
        prime=getattr(args, "prime", DEFAULT_PRIME),
        trials=getattr(args, "trials", DEFAULT_TRIALS),
        seed=getattr(args, "seed", DEFAULT_SEED),
        capacity_cols=getattr(args, "capacity", DEFAULT_CAPACITY),
        max_cells=getattr(args, "max_cells", DEFAULT_MAX_CELLS),
        output=getattr(args, "output", "text"),
    )


def _meta(cfg: Config) -> dict:
    return {"prime": cfg.prime, "seed": cfg.seed, "trials": cfg.trials}


def _b(x: bool) -> str:
    return "true" if x else "false"


# Each handler returns (json payload, text, tsv rows with header first).


def _cmd_decide(args, cfg):
    rep = decide(CIProfile(args.n, args.d, args.a), cfg.trials, cfg.seed, cfg.prime,
                 cfg.capacity_cols, cfg.max_cells)
    payload = rep.to_dict()
    prof = ",".join(map(str, rep.normalized_profile.a))
    text = (f"{rep.verdict.value} certified={_b(rep.certified)} hilbert_at_d={rep.hilbert_at_d} "
            f"normalized=({rep.normalized_profile.n},{rep.normalized_profile.d},{prof}) "
            f"prime={rep.prime} seed={rep.seed} trials={rep.trials}")
    if not rep.certified and rep.verdict.value == "NotContains":
        text += f" failure_bound={rep.failure_bound:.3g}"
    tsv = [["verdict", "certified", "hilbert_at_d", "n", "d", "a", "prime", "seed", "trials", "failure_bound"],
           [rep.verdict.value, _b(rep.certified), rep.hilbert_at_d, rep.normalized_profile.n,
            rep.normalized_profile.d, prof, rep.prime, rep.seed, rep.trials, repr(rep.failure_bound)]]
    return payload, text, tsv


def _cmd_classify(args, cfg):
    pred = classify(CIProfile(args.n, args.d, args.a))
    return (pred.to_dict(), f"{pred.verdict.value} ({pred.branch})",
            [["verdict", "branch"], [pred.verdict.value, pred.branch]])


def _cmd_hf(args, cfg):
    if args.forms is not None:
        with open(args.forms) as fh:
            gens = read_forms(fh.read(), args.n, cfg.prime)
        value = hilbert_value(gens, args.d, n=args.n, capacity=cfg.capacity_cols, max_cells=cfg.max_cells)
        payload = {"n": args.n, "d": args.d, "degrees": [g.degree for g in gens], "value": value,
                   "mode": "exact", "prime": cfg.prime}
        return (payload, str(value),
                [["n", "d", "degrees", "value", "mode", "prime"],
                 [args.n, args.d, ",".join(str(g.degree) for g in gens), value, "exact", cfg.prime]])
    res = generic_hilbert_value(args.n, args.degrees, args.d, cfg.trials, cfg.seed, cfg.prime,
                                cfg.capacity_cols, cfg.max_cells)
    payload = {"n": args.n, "d": args.d, "degrees": list(args.degrees), "value": res.value,
               "certified_zero": res.certified_zero, "mode": "randomized",
               "trials_used": res.trials_used, **_meta(cfg)}
    text = f"{res.value} certified_zero={_b(res.certified_zero)} prime={cfg.prime} seed={cfg.seed} trials={cfg.trials}"
    tsv = [["n", "d", "degrees", "value", "certified_zero", "prime", "seed", "trials"],
           [args.n, args.d, ",".join(map(str, args.degrees)), res.value, _b(res.certified_zero),
            cfg.prime, cfg.seed, cfg.trials]]
    return payload, text, tsv


def _cmd_series(args, cfg):
    if args.froberg or len(args.degrees) > args.nvars:
        hv = froberg_series(args.nvars, args.degrees, args.dmax)
    else:
        hv = ci_series(args.nvars, args.degrees, args.dmax)
    payload = hv.to_dict()
    tsv = [["degree", "value"]] + [[k, v] for k, v in enumerate(hv.values)]
    return payload, " ".join(map(str, hv.values)), tsv


def _join_payload(kind, value, n, lambdas, cfg, **extra):
    return {kind: value, "n": n, "lambdas": [str(x) for x in lambdas], **extra, **_meta(cfg)}


def _cmd_join(args, cfg):
    if any(lam.total != args.d for lam in args.lambdas):
        raise ValueError(f"every partition must sum to d={args.d}")
    spec = JoinSpec(args.n, args.lambdas)
    dim = join_dim(spec, cfg.seed, cfg.trials, cfg.prime, cfg.capacity_cols, cfg.max_cells)
    lams = ";".join(map(str, args.lambdas))
    payload = _join_payload("dim", dim, args.n, args.lambdas, cfg, ambient_dim=spec.ambient_dim)
    return payload, str(dim), [["n", "d", "lambdas", "dim", "ambient_dim", "prime", "seed", "trials"],
                               [args.n, args.d, lams, dim, spec.ambient_dim, cfg.prime, cfg.seed, cfg.trials]]


def _cmd_secant(args, cfg):
    if args.k < 1:
        raise ValueError("k must be >= 1")
    dim = secant_dim(args.lam, args.k, args.n, cfg.seed, cfg.trials, cfg.prime, cfg.capacity_cols, cfg.max_cells)
    ambient = JoinSpec(args.n, [args.lam]).ambient_dim
    payload = _join_payload("dim", dim, args.n, [args.lam], cfg, k=args.k, ambient_dim=ambient)
    return payload, str(dim), [["n", "lambda", "k", "dim", "ambient_dim", "prime", "seed", "trials"],
                               [args.n, str(args.lam), args.k, dim, ambient, cfg.prime, cfg.seed, cfg.trials]]


def _cmd_defect(args, cfg):
    value = defect(args.lam, args.n, cfg.seed, cfg.trials, cfg.prime, cfg.capacity_cols, cfg.max_cells)
    base = reducible_dim(args.lam, args.n)
    sec = 2 * base + 1 - value
    payload = _join_payload("defect", value, args.n, [args.lam], cfg, reducible_dim=base, secant_dim=sec)
    return payload, str(value), [["n", "lambda", "defect", "reducible_dim", "secant_dim", "prime", "seed", "trials"],
                                 [args.n, str(args.lam), value, base, sec, cfg.prime, cfg.seed, cfg.trials]]


def _cmd_fano(args, cfg):
    ok = fano_ci_criterion(args.n, args.d, args.r)
    return ({"n": args.n, "d": args.d, "r": args.r, "criterion": ok}, _b(ok),
            [["n", "d", "r", "criterion"], [args.n, args.d, args.r, _b(ok)]])


def _cmd_verify(args, cfg):
    rep = verify_theorem(args.nmax, args.dmax, cfg.trials, cfg.seed, cfg.prime,
                         cfg.capacity_cols, cfg.max_cells, jobs=args.jobs)
    payload = rep.to_dict(include_instances=args.all)
    lines = [f"instances={len(rep.results)} checked={len(rep.results) - len(rep.skipped)} "
             f"skipped={len(rep.skipped)} disagreements={len(rep.disagreements)} "
             f"prime={rep.prime} seed={rep.seed} trials={rep.trials}"]
    shown = rep.results if args.all else rep.disagreements + rep.skipped
    for r in shown:
        status = "SKIP" if r.skipped else ("ok" if r.agrees else "DISAGREE")
        lines.append(f"{status} {r.profile} decide={r.decided} classify={r.predicted} ({r.branch})")
    tsv = [["n", "d", "a", "decided", "predicted", "branch", "hilbert_at_d", "status"]]
    for r in shown:
        status = "skip" if r.skipped else ("ok" if r.agrees else "disagree")
        tsv.append([r.profile.n, r.profile.d, ",".join(map(str, r.profile.a)),
                    "" if r.decided is None else r.decided.value, r.predicted.value, r.branch,
                    "" if r.hilbert_at_d is None else r.hilbert_at_d, status])
    return payload, "\n".join(lines), tsv


def _cmd_gorenstein(args, cfg):
    prof = gorenstein_profile(args.r, args.d, args.a)
    payload = prof.to_dict()
    text = "\n".join([
        f"hf {' '.join(map(str, prof.hf.values))}",
        f"c {prof.c} alpha {prof.alpha} beta {prof.beta}",
        f"m_surjective {_b(prof.m_surjective)} general_case {_b(prof.general_case)}",
        "checks " + " ".join(f"{k}={'n/a' if v is None else _b(v)}" for k, v in prof.checks.items()),
    ])
    tsv = [["r", "d", "a", "hf", "c", "m_surjective"],
           [prof.r, prof.d, ",".join(map(str, prof.a)), ",".join(map(str, prof.hf.values)), str(prof.c),
            _b(prof.m_surjective)]]
    return payload, text, tsv


HANDLERS = {
    "decide": _cmd_decide,
    "classify": _cmd_classify,
    "hf": _cmd_hf,
    "series": _cmd_series,
    "join": _cmd_join,
    "secant": _cmd_secant,
    "defect": _cmd_defect,
    "fano": _cmd_fano,
    "verify": _cmd_verify,
    "gorenstein": _cmd_gorenstein,
}


def _render(output: str, payload, text: str, tsv) -> str:
    if output == "json":
        return json.dumps(payload, separators=(",", ":"))
    if output == "tsv":
        return "\n".join("\t".join(str(x) for x in row) for row in tsv)
    return text


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config(args)
        payload, text, tsv = HANDLERS[args.command](args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        print(GRAMMAR, end="", file=stderr)
        return 1
    except CapacityError as exc:
        rows, cols = exc.shape
        need = f"{cols} columns" if rows is None else f"a {rows} x {cols} matrix"
        print(f"capacity error: {exc}; would need {need}", file=stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"usage error: {exc}", file=stderr)
        print(GRAMMAR, end="", file=stderr)
        return 1
    print(_render(cfg.output, payload, text, tsv), file=stdout)
    return 0


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
