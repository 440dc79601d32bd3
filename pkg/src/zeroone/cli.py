"""Command-line front end.

Exit codes: 0 success, 1 other errors, 2 parse error, 3 semantics
violation, 4 cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import CapExceeded, ParseError, SemanticsViolation, ZeroOneError
from .formula import parse, parse_so, pretty, to_text

EXIT_OK, EXIT_OTHER, EXIT_PARSE, EXIT_SEMANTICS, EXIT_CAP = 0, 1, 2, 3, 4


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _write(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _formula_arg(text: str, so: bool = False):
    """A formula given inline (starting with '(') or as a file path."""
    src = text if text.lstrip().startswith("(") else _read(text)
    return parse_so(src) if so else parse(src)


def _env(text: str | None) -> dict:
    if not text:
        return {}
    out = {}
    for part in text.split(","):
        name, _, val = part.partition("=")
        if not name or not val:
            raise ValueError(f"bad --env entry {part!r}, expected name=vertex")
        out[name.strip()] = int(val)
    return out


def _ints(text: str) -> list:
    return [int(t) for t in text.split(",") if t.strip()]


def _load_graph(path: str):
    from .graph import Graph
    text = _read(path)
    return Graph.from_json(text) if text.lstrip().startswith("{") else Graph.from_matrix_text(text)


# --- subcommands ------------------------------------------------------------

def cmd_eval(a):
    from .evaluator import Evaluator
    from .tensor_eval import TensorEvaluator
    g = _load_graph(a.graph)
    f = _formula_arg(a.formula)
    env = _env(a.env)
    if a.method == "tensor" and not a.trace:
        value = TensorEvaluator(g).eval(f, env)
        out = {"value": value}
    else:
        ev = Evaluator(g, trace=a.trace)
        value = ev.eval(f, env)
        out = {"value": value}
        if a.trace:
            out["trace"] = ev.trace_json()
    print(json.dumps(out, indent=2 if a.trace else None))
    return EXIT_OK


def cmd_sample(a):
    from .graph import RngSpec, sample_gnp
    g = sample_gnp(a.n, a.p, RngSpec(a.seed, a.stream))
    _write(g.to_json() + "\n", a.out)
    return EXIT_OK


def cmd_probe(a):
    from .probe import ProbeConfig, compare_with_decider, probe
    f = _formula_arg(a.formula)
    cfg = ProbeConfig(f, a.p, _ints(a.n), a.trials, a.seed, method=a.method, workers=a.workers)
    rep = compare_with_decider(cfg) if a.decider else probe(cfg)
    out = a.out
    text = rep.to_csv() if (a.format == "csv" or (out and out.endswith(".csv"))) else rep.to_json()
    _write(text, out)
    if out and out != "-":
        print(rep.classification)
    return EXIT_OK


def cmd_decide(a):
    from .decider import decide
    v = decide(_formula_arg(a.formula))
    out = {"verdict": v.value}
    if a.trace:
        out["trace"] = v.trace.to_json(depth=a.depth)
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _setdef(text: str, var: str, params: dict):
    from .ham_arith import SetDef
    f = _formula_arg(text)
    return SetDef(f, var, tuple(sorted(params.items())))


def cmd_encode(a):
    from .ham_arith import EncoderContext, encode_so
    phi = _formula_arg(a.so_file, so=True)
    env = _env(a.env)
    ctx = EncoderContext(_setdef(a.phi0, a.var, env), _setdef(a.phi1, a.var, env),
                         arity_cap=a.arity_cap)
    f = encode_so(phi, ctx)
    _write((pretty(f) if a.pretty else to_text(f)) + "\n", a.out)
    return EXIT_OK


def cmd_check_repr(a):
    from .ham_arith import check_double_powerset_repr, check_powerset_repr
    g = _load_graph(a.graph)
    if a.S is not None:
        cert = check_powerset_repr(g, _ints(a.S), a.exclude_S)
    else:
        if not (a.phi0 and a.phi1):
            raise ValueError("give --S, or both --phi0 and --phi1")
        env = _env(a.env)
        cert = check_double_powerset_repr(g, _setdef(a.phi0, a.var, env), _setdef(a.phi1, a.var, env))
    _write(json.dumps(cert.to_json(), indent=2) + "\n", a.out)
    return EXIT_OK


def cmd_testbed(a):
    from .ham_arith import build_testbed
    tb = build_testbed(a.b)
    _write(tb.graph.to_json() + "\n", a.out)
    info = {"n": tb.graph.n, "m_S": tb.m_S, "m_B": tb.m_B, "B": list(tb.B),
            "env": f"mS={tb.m_S},mB={tb.m_B}", "phi0": "(adj x mS)", "phi1": "(adj x mB)"}
    print(json.dumps(info), file=sys.stderr if a.out in (None, "-") else sys.stdout)
    return EXIT_OK


def cmd_nonconv(a):
    from .ham_arith import ArithConfig, build_nonconv
    f = build_nonconv(ArithConfig(a.r, a.q, a.threshold))
    _write(to_text(f) + "\n", a.out)
    return EXIT_OK


def cmd_dclass(a):
    if a.graph:
        from .ham_arith import dclass_stats, degree_target
        g = _load_graph(a.graph)
        m = a.m if a.m is not None else degree_target(g.n, a.p, a.alpha).m
        out = dclass_stats(g, m, a.p)
    else:
        from .probe import dclass_campaign
        out = dclass_campaign(a.n, a.p, a.alpha, a.seeds, a.seed)
    _write(json.dumps(out, indent=2, sort_keys=True) + "\n", a.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zeroone", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a formula on a graph")
    p.add_argument("graph")
    p.add_argument("formula", help="formula file, or inline text starting with '('")
    p.add_argument("--env", help="parameter values, e.g. a=3,b=7")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--method", choices=("recursive", "tensor"), default="recursive")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sample", help="sample G(n,p) as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stream", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("probe", help="Monte Carlo estimate over an n-grid")
    p.add_argument("--formula", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--n", required=True, help="comma-separated sizes")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--method", choices=("recursive", "tensor"), default="tensor")
    p.add_argument("--decider", action="store_true", help="compare with the decider verdict")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("decide", help="limiting truth value of a Conn/Chr sentence")
    p.add_argument("formula")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--depth", type=int, default=None)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("encode", help="compile an SO sentence into a graph sentence")
    p.add_argument("so_file")
    p.add_argument("--phi0", required=True, help="definition of S in the variable --var")
    p.add_argument("--phi1", required=True, help="definition of B in the variable --var")
    p.add_argument("--var", default="x")
    p.add_argument("--env", help="parameter values for phi0/phi1")
    p.add_argument("--arity-cap", type=int, default=3)
    p.add_argument("--pretty", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("check-repr", help="powerset representation certificate")
    p.add_argument("graph")
    p.add_argument("--S", help="comma-separated vertex set")
    p.add_argument("--exclude-S", action="store_true", help="witnesses must lie outside S")
    p.add_argument("--phi0")
    p.add_argument("--phi1")
    p.add_argument("--var", default="x")
    p.add_argument("--env")
    p.add_argument("--out")
    p.set_defaults(func=cmd_check_repr)

    p = sub.add_parser("testbed", help="write the witness graph for a b-element set")
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--out")
    p.set_defaults(func=cmd_testbed)

    p = sub.add_parser("nonconv", help="write the non-convergent sentence")
    p.add_argument("--r", type=int, default=100)
    p.add_argument("--q", type=int, default=100)
    p.add_argument("--threshold", type=int, default=50)
    p.add_argument("--out")
    p.set_defaults(func=cmd_nonconv)

    p = sub.add_parser("dclass", help="degree-class statistics")
    p.add_argument("--graph", help="analyse one graph instead of sampling")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int, default=20000)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--seeds", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dclass)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except SemanticsViolation as e:
        print(f"semantics violation: {e}", file=sys.stderr)
        return EXIT_SEMANTICS
    except CapExceeded as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except (ZeroOneError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
