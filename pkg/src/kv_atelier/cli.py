"""Command-line front end: ``kv-atelier <command> [options]``."""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import concrete_eval, kv2_solver
from .bch import bch_series
from .free_lie import print_bracket, witt_dim
from .kv_solution import kv1_residual, kv2_lhs, kv2_rhs, solvable_pair
from .words import CyclicVec, necklace_dim

logger = logging.getLogger("kv_atelier")

MAX_EXACT_DEGREE = int(os.environ.get("KV_ATELIER_MAX_EXACT", "12"))
MAX_MODULAR_DEGREE = int(os.environ.get("KV_ATELIER_MAX_MODULAR", "14"))


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    degree: int | None = None
    max: int | None = None
    modulus: tuple[int, ...] | None = None
    basis: bool = False
    export_path: str | None = None
    output_format: str = "text"
    quiet: bool = False
    force: bool = False

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        cfg = cls(
            subcommand=ns.command,
            degree=getattr(ns, "degree", None),
            max=getattr(ns, "max", None),
            basis=getattr(ns, "basis", False),
            export_path=getattr(ns, "export", None),
            output_format="json" if ns.json else "text",
            quiet=ns.quiet,
            force=ns.force,
        )
        mod = getattr(ns, "mod", None)
        if mod is not None:
            cfg.modulus = kv2_solver.DEFAULT_PRIMES if mod == "default" else _parse_primes(mod)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.degree is not None and self.degree < 1:
            raise UsageError("--degree must be at least 1")
        if self.max is not None and self.max < 1:
            raise UsageError("--max must be at least 1")
        if self.degree is not None and not self.force:
            limit = MAX_MODULAR_DEGREE if self.modulus else MAX_EXACT_DEGREE
            if self.degree > limit:
                kind = "modular" if self.modulus else "exact"
                raise UsageError(f"degree {self.degree} exceeds the {kind} guard ({limit}); pass --force")
        if self.basis and self.modulus:
            raise UsageError("--basis needs exact arithmetic; drop --mod")


def _parse_primes(text: str) -> tuple[int, ...]:
    from sympy import isprime

    try:
        primes = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"--mod expects primes, got {text!r}") from None
    for p in primes:
        if not isprime(p):
            raise UsageError(f"--mod: {p} is not prime")
    return primes


def _rat(q) -> str:
    return str(Fraction(q))


def _cyclic_payload(v: CyclicVec) -> dict:
    den = 1
    for _, c in v:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return {
        "values": v.to_json(),
        "common_denominator": str(den),
        "numerators": {k: str(int(c * den)) for k, c in v.sorted_items()},
    }


# -- commands -------------------------------------------------------------------


def cmd_dims(cfg: RunConfig) -> dict:
    rows = [{"N": n, "lie2": witt_dim(n), "cy2": necklace_dim(n)} for n in range(1, cfg.max + 1)]
    return {"rows": rows}


def _lie_payload(e) -> dict:
    return {"coords": e.to_json(), "bracket": print_bracket(e)}


def cmd_bch(cfg: RunConfig) -> dict:
    z = bch_series(cfg.degree)
    return {
        "degree": cfg.degree,
        "scale": "1",
        "components": {str(k): _lie_payload(z.component(k)) for k in range(1, cfg.degree + 1)},
    }


def cmd_kv_solution(cfg: RunConfig) -> dict:
    pair = solvable_pair(cfg.degree)
    return {
        "degree": cfg.degree,
        "scale": "1",
        "F0": {str(k): _lie_payload(pair.f.component(k)) for k in range(1, cfg.degree + 1)},
        "G0": {str(k): _lie_payload(pair.g.component(k)) for k in range(1, cfg.degree + 1)},
    }


def cmd_trace_check(cfg: RunConfig) -> dict:
    lhs, rhs = kv2_lhs(cfg.degree), kv2_rhs(cfg.degree)
    defect = rhs - lhs
    return {
        "degree": cfg.degree,
        "scale": "1",
        "lhs": _cyclic_payload(lhs),
        "rhs": _cyclic_payload(rhs),
        "defect": _cyclic_payload(defect),
        "defect_zero": not defect,
    }


def cmd_kv1_check(cfg: RunConfig) -> dict:
    res = kv1_residual(solvable_pair(cfg.degree), cfg.degree)
    return {"degree": cfg.degree, "scale": "1", "residual": _lie_payload(res), "residual_zero": not res}


def cmd_kv2(cfg: RunConfig) -> dict:
    m = kv2_solver.assemble_system(cfg.degree)
    if cfg.export_path:
        with open(cfg.export_path, "w") as fh:
            kv2_solver.export_sparse(m, fh)
    if cfg.modulus:
        reports = kv2_solver.rank_mod_primes(m, cfg.modulus, cfg.degree)
        out = reports[0].to_json()
        out["method"] = "modular"
        out["primes"] = list(cfg.modulus)
        out["nullity_by_prime"] = {str(r.primes[0]): r.nullity for r in reports}
        out["nullity"] = min(r.nullity for r in reports)
        out["primes_agree"] = len({r.nullity for r in reports}) == 1
        return out
    report = kv2_solver.kernel_dim_exact(m, cfg.degree, with_basis=cfg.basis)
    out = report.to_json()
    if cfg.basis:
        out["basis"] = []
        for v in report.basis:
            a, b = kv2_solver.decode_solution(cfg.degree, v)
            out["basis"].append({"A": _lie_payload(a), "B": _lie_payload(b)})
    if cfg.export_path:
        out["export"] = cfg.export_path
    return out


def cmd_counterexample(cfg: RunConfig) -> dict:
    from .kv_solution import trace_defect

    X, Y = concrete_eval.DEFECT_X, concrete_eval.DEFECT_Y
    traces = {w: concrete_eval.word_trace(w, X, Y) for w in concrete_eval.COUNTEREXAMPLE_WORDS}
    defect = trace_defect(8)
    filtered = concrete_eval.filter_by_letter_degree(defect, "2", 3)
    return {
        "X": [list(r) for r in X],
        "Y": [list(r) for r in Y],
        "traces": traces,
        "defect": _cyclic_payload(defect),
        "filtered_defect_y_degree": 3,
        "filtered_defect_value": _rat(concrete_eval.eval_cyclic(filtered, X, Y)),
        "full_defect_value": _rat(concrete_eval.eval_cyclic(defect, X, Y)),
        "nonzero": concrete_eval.eval_cyclic(filtered, X, Y) != 0,
    }


COMMANDS = {
    "dims": cmd_dims,
    "bch": cmd_bch,
    "kv-solution": cmd_kv_solution,
    "trace-check": cmd_trace_check,
    "kv1-check": cmd_kv1_check,
    "kv2": cmd_kv2,
    "counterexample": cmd_counterexample,
}


# -- text rendering ------------------------------------------------------------------


def _render_text(cfg: RunConfig, payload: dict) -> str:
    cmd = cfg.subcommand
    if cmd == "dims":
        lines = ["N\tLie2(N)\tcy2(N)"]
        lines += [f"{r['N']}\t{r['lie2']}\t{r['cy2']}" for r in payload["rows"]]
        return "\n".join(lines)
    if cmd == "bch":
        return "\n".join(f"Z_{k} = {c['bracket']}" for k, c in payload["components"].items())
    if cmd == "kv-solution":
        return "\n".join(f"F0_{k} = {c['bracket']}" for k, c in payload["F0"].items())
    if cmd == "trace-check":
        lines = [f"degree {payload['degree']}: defect_zero = {str(payload['defect_zero']).lower()}"]
        for side in ("lhs", "rhs", "defect"):
            block = payload[side]
            lines.append(f"{side} (times {block['common_denominator']}):")
            lines += [f"  {k}\t{v}" for k, v in block["numerators"].items()]
        return "\n".join(lines)
    if cmd == "kv1-check":
        return f"degree {payload['degree']}: residual = {payload['residual']['bracket']}"
    if cmd == "kv2":
        head = (f"kv2({payload['degree']}): system {payload['rows']}x{payload['cols']}, "
                f"nullity {payload['nullity']} ({payload['method']})")
        if payload.get("nullity_is_upper_bound"):
            head += f", upper bound; primes agree: {str(payload['primes_agree']).lower()}"
        lines = [head]
        for i, v in enumerate(payload.get("basis", []), start=1):
            lines.append(f"solution {i}:")
            lines.append(f"  A = {v['A']['bracket']}")
            lines.append(f"  B = {v['B']['bracket']}")
        return "\n".join(lines)
    if cmd == "counterexample":
        lines = [f"tr({_pretty_word(w)}) = {t}" for w, t in payload["traces"].items()]
        lines.append(f"y-degree-3 part of the degree-8 defect on (X, Y): {payload['filtered_defect_value']}")
        lines.append(f"full degree-8 defect on (X, Y): {payload['full_defect_value']}")
        return "\n".join(lines)
    return json.dumps(payload, sort_keys=True, indent=2)


def _pretty_word(w: str) -> str:
    out, i = [], 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        letter = "X" if w[i] == "1" else "Y"
        out.append(letter if j - i == 1 else f"{letter}^{j - i}")
        i = j
    return "".join(out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a flag given before the subcommand from being reset by the subparser
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON instead of text")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="suppress log messages")
    common.add_argument("--force", action="store_true", default=argparse.SUPPRESS,
                        help="allow degrees above the cost guard")

    parser = argparse.ArgumentParser(prog="kv-atelier", description=__doc__, parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", parents=[common], help="free Lie and cyclic word dimensions")
    p.add_argument("--max", type=int, default=16)
    for name, help_ in (
        ("bch", "Campbell-Hausdorff series"),
        ("kv-solution", "the solvable pair (F0, G0)"),
        ("trace-check", "both sides of the trace equation in cyclic words"),
        ("kv1-check", "residual of the first equation for (F0, G0)"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--degree", type=int, required=True)
    p = sub.add_parser("kv2", parents=[common], help="kernel dimension of the kv2 system")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--mod", nargs="?", const="default", default=None,
                   help="work modulo primes (comma separated; default: three primes near 2^31)")
    p.add_argument("--basis", action="store_true", help="print an exact kernel basis")
    p.add_argument("--export", metavar="FILE", help="write the system in sparse text format")
    sub.add_parser("counterexample", parents=[common], help="degree-8 matrix traces")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    for flag in ("json", "quiet", "force"):
        setattr(ns, flag, getattr(ns, flag, False))
    logging.basicConfig(level=logging.ERROR if ns.quiet else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig.from_args(ns)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"kv-atelier: error: {exc}", file=sys.stderr)
        return 2
    try:
        payload = COMMANDS[cfg.subcommand](cfg)
    except Exception as exc:  # noqa: BLE001 - reported as exit status 1
        logger.debug("command failed", exc_info=True)
        print(f"kv-atelier: {exc}", file=sys.stderr)
        return 1
    if cfg.output_format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(_render_text(cfg, payload))
    return 0


if __name__ == "__main__":
    sys.exit(main())
