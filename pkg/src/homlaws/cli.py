"""Command-line front end.

Every command writes one JSON (or CSV) artifact to ``--out`` or stdout.  The
artifact embeds a manifest of the inputs, seed, version and budgets; the
wall-clock time goes only to the sidecar ``<out>.manifest.json`` so that equal
manifests give byte-identical artifacts.

Exit codes: 0 success, 1 domain error, 2 budget refusal or usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import __version__
from .asymptotics import (
    chromatic_invariants, classify_oriented_trees, classify_undirected, mixture_decomposition,
    sentence_limit,
)
from .colored import count_table, sample_product, sample_uniform
from .config import load_config
from .density import blow_up_structure, density, densest_supports, max_oriented_clique
from .duality import build_dual
from .homomorphism import (
    automorphisms, core_vertices, count_homs, find_hom, orbits, square_dismantles_to_diagonal,
    dismantles_to,
)
from .logic import (
    ClassSpec, FormulaError, colored_sampler, hom_weight, named_digraph, parse_class,
    parse_sentence, phi_n_estimate, phi_n_exact,
)
from .structures import CapExceeded, Digraph, OrientedForest, UGraph, induced_subgraph, is_oriented, load_graph

FORMULA_HELP = """formula grammar: atoms E(x,y), x = y, x != y, P0(x) (colour 0), true, false;
connectives ! & | -> (tightest first, -> right associative); quantifiers
'forall x y. body' and 'exists x y. body' extend as far right as possible.
Pass @path to read the formula from a file."""


class InputError(Exception):
    """Malformed or unreadable input."""


@dataclass
class RunManifest:
    command: list
    inputs: dict = field(default_factory=dict)   # path -> sha256
    seed: int | None = None
    version: str = __version__
    budgets: dict = field(default_factory=dict)
    wall_clock_seconds: float | None = None

    def deterministic(self) -> dict:
        out = asdict(self)
        out.pop("wall_clock_seconds")
        return out


# flags that change where output goes or how fast it comes, never what it is
_UNRECORDED = ("--out", "--threads", "--dot")


def _recorded(argv) -> list:
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
        elif a in _UNRECORDED:
            skip = True
        elif not a.startswith(tuple(f + "=" for f in _UNRECORDED)):
            out.append(a)
    return out


class Context:
    def __init__(self, args, cfg):
        self.args = args
        self.cfg = cfg
        self.manifest = RunManifest(command=_recorded(args.argv), budgets=asdict(cfg.budgets))

    def read(self, path: str) -> str:
        try:
            with open(path, "rb") as fh:
                data = fh.read()
        except OSError as e:
            raise InputError(f"cannot read {path}: {e.strerror}") from None
        self.manifest.inputs[path] = hashlib.sha256(data).hexdigest()
        return data.decode()

    def graph(self, spec: str):
        """A file path (JSON or edge list) or a name like ``t3`` / ``c3+t3``."""
        if os.path.exists(spec):
            text = self.read(spec)
            try:
                if text.strip().startswith("["):
                    obj = json.loads(text)
                    if len(obj) != 1:
                        raise InputError(f"{spec}: expected a single graph")
                    return Digraph.from_json(obj[0])
                return load_graph(text)
            except (ValueError, KeyError, TypeError) as e:
                raise InputError(f"{spec}: {e}") from None
        try:
            return named_digraph(spec)
        except ValueError:
            raise InputError(f"{spec!r} is neither a file nor a digraph name") from None

    def digraph(self, spec: str) -> Digraph:
        g = self.graph(spec)
        return g.as_digraph() if isinstance(g, UGraph) else g

    def graph_list(self, spec: str) -> list:
        if not os.path.exists(spec):
            return [self.graph(s) for s in spec.split(",")]
        text = self.read(spec)
        try:
            obj = json.loads(text)
            if isinstance(obj, dict):
                obj = [obj]
            return [UGraph.from_json(o) if o.get("undirected") else Digraph.from_json(o) for o in obj]
        except (ValueError, KeyError, TypeError, AttributeError) as e:
            raise InputError(f"{spec}: {e}") from None

    def formula(self, text: str):
        if text.startswith("@"):
            text = self.read(text[1:])
        return parse_sentence(text)


def _frac(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _n_range(text: str) -> list:
    try:
        if ".." in text:
            a, b = text.split("..")
            lo, hi = int(a), int(b)
            if lo > hi:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"bad n range {text!r}; use 'a..b' or 'a,b,c'") from None


def _dot(ctx, g, colors=None):
    if ctx.args.dot:
        with open(ctx.args.dot, "w") as fh:
            fh.write(g.to_dot(colors=colors) if colors is not None else g.to_dot())


# ----------------------------------------------------------------- commands

def cmd_hom(ctx):
    g, h = ctx.digraph(ctx.args.source), ctx.digraph(ctx.args.target)
    f = find_hom(g, h)
    out = {"exists": f is not None, "map": list(f.map) if f else None}
    if ctx.args.count:
        out["count"] = str(count_homs(g, h))
    return out


def cmd_core(ctx):
    g = ctx.digraph(ctx.args.graph)
    verts = core_vertices(g)
    core = induced_subgraph(g, verts)
    _dot(ctx, core)
    return {"core": core.to_json(), "vertices": verts, "is_core": len(verts) == g.n}


def cmd_aut(ctx):
    g = ctx.digraph(ctx.args.graph)
    cap = ctx.args.cap or ctx.cfg.budgets.aut_cap
    auts = automorphisms(g, cap=cap)
    return {"order": len(auts), "automorphisms": [list(a.map) for a in auts],
            "orbits": orbits(g, cap=cap), "rigid": len(auts) == 1}


def cmd_dismantle(ctx):
    g = ctx.digraph(ctx.args.graph)
    budget = ctx.cfg.budgets.dismantle_budget
    if ctx.args.onto is None:
        order = square_dismantles_to_diagonal(g, budget=budget)
        what = "square onto diagonal"
        n = g.n * g.n
    else:
        onto = [int(v) for v in ctx.args.onto.split(",")]
        order = dismantles_to(g, onto, budget=budget)
        what = f"onto {onto}"
        n = g.n
    out = {"target": what, "dismantles": order is not None}
    if order is not None:
        out["folds"] = [list(f) for f in order.folds]
        out["retraction"] = list(order.retraction(n))
    return out


def cmd_density(ctx):
    g = ctx.digraph(ctx.args.graph)
    value, prof = density(g, cap=ctx.cfg.budgets.density_cap)
    out = {"density": prof.to_json()}
    out["densest_supports"] = [list(s) for s in densest_supports(g, cap=ctx.cfg.budgets.density_cap)]
    if is_oriented(g):
        k, w = max_oriented_clique(g)
        out["clique"] = {"size": k, "witness": list(w)}
        b = blow_up_structure(g, prof)
        out["blow_up"] = None if b is None else {
            "k": b.k, "classes": [list(c) for c in b.classes], "masses": [_frac(m) for m in b.class_masses]}
    return out


def _forest(ctx):
    try:
        return OrientedForest(tuple(ctx.graph_list(ctx.args.trees)))
    except ValueError as e:
        raise InputError(str(e)) from None


def _dual_options(ctx):
    dv = ctx.cfg.dual
    return {"budget": ctx.cfg.budgets.dual_budget, "exhaustive_n": dv.exhaustive_n,
            "random_trials": dv.random_trials, "random_n": dv.random_n, "seed": dv.seed}


def cmd_dual(ctx):
    r = build_dual(_forest(ctx), **_dual_options(ctx))
    _dot(ctx, r.dual)
    return r.to_json()


def cmd_count(ctx):
    d = ctx.digraph(ctx.args.template)
    table = count_table(d, _n_range(ctx.args.n), budget=ctx.cfg.budgets.composition_budget)
    rows = [r.to_json() for r in table.rows]
    for r in rows:
        r.pop("ratio_decimal")
    return {"template": d.to_json(), "good_supports": [list(s) for s in table.good_supports],
            "rows": rows}, ["n", "c_n", "b_n", "d_n", "ratio"]


def cmd_sample(ctx):
    d = ctx.digraph(ctx.args.template)
    seed = ctx.args.seed
    ctx.manifest.seed = seed
    fn = sample_uniform if ctx.args.method == "uniform" else sample_product
    c = fn(d, ctx.args.n, seed)
    _dot(ctx, c.graph, colors=c.color)
    return {"method": ctx.args.method, "seed": seed, "sample": c.to_json()}


def _exact_row(job):
    cls, phi, n, budget, cap = job
    return phi_n_exact(cls, phi, n, budget=budget, cap=cap)


def _class(ctx) -> ClassSpec:
    try:
        return parse_class(ctx.args.cls, loader=ctx.digraph)
    except ValueError as e:
        raise InputError(str(e)) from None


def cmd_phi(ctx):
    cls = _class(ctx)
    phi = ctx.formula(ctx.args.formula)
    ns = _n_range(ctx.args.n)
    if ctx.args.estimate:
        if cls.kind not in ("csp", "colored"):
            raise InputError("estimates need a csp or colored class")
        ctx.manifest.seed = ctx.args.seed
        forget = cls.kind == "csp"
        weight = hom_weight(cls.template) if forget else None
        rows = []
        for n in ns:
            e = phi_n_estimate(colored_sampler(cls.template, forget), phi, n, ctx.args.trials,
                               ctx.args.seed, weight=weight)
            rows.append({"n": n, **e.to_json()})
        return {"class": ctx.args.cls, "mode": "estimate", "rows": rows}, \
            ["n", "estimate", "stderr", "trials", "seed", "weighted"]
    jobs = [(cls, phi, n, ctx.cfg.budgets.eval_budget, None) for n in ns]
    if ctx.cfg.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=ctx.cfg.threads) as pool:
            results = list(pool.map(_exact_row, jobs))
    else:
        results = [_exact_row(j) for j in jobs]
    rows = [r.to_json() for r in results]
    for r in rows:
        r.pop("phi_n_decimal")
    return {"class": ctx.args.cls, "mode": "exact", "rows": rows}, ["n", "satisfied", "total", "phi_n"]


def cmd_theory(ctx):
    a = ctx.args
    if a.trees:
        r = classify_oriented_trees(_forest(ctx), **_dual_options(ctx))
        out = r.to_json()
        out["dual_core"] = r.dual.dual.to_json()
        return out
    if a.graphs:
        graphs = ctx.graph_list(a.graphs)
        if not all(isinstance(g, UGraph) for g in graphs):
            raise InputError("--graphs expects undirected graphs (\"undirected\": true)")
        return {"invariants": [chromatic_invariants(g).to_json() for g in graphs],
                "theory": classify_undirected(graphs).to_json()}
    d = ctx.digraph(a.template)
    return {"theory": mixture_decomposition(d, mode=a.mode).to_json()}


def cmd_limit(ctx):
    a = ctx.args
    d = ctx.digraph(a.template)
    phi = ctx.formula(a.formula)
    desc = mixture_decomposition(d, mode=a.mode)
    sched = ctx.cfg.schedule
    seed = sched.seed if a.seed is None else a.seed
    ctx.manifest.seed = seed
    cls = ClassSpec("colored" if a.mode == "colored" else "csp", d)
    ns = _n_range(a.evidence_n) if a.evidence_n else []
    r = sentence_limit(phi, desc, ns, cls, schedule=sched.sizes, seeds=sched.seeds, seed=seed)
    return {"theory": desc.to_json(), "limit": r.to_json()}


def cmd_verify(ctx):
    from .verify import run_verify
    ctx.manifest.seed = ctx.args.seed
    report = run_verify(ctx.args.level, seed=ctx.args.seed)
    ctx.exit_code = 0 if report.passed else 1
    return report.to_json()


COMMANDS = {
    "hom": cmd_hom, "core": cmd_core, "aut": cmd_aut, "dismantle": cmd_dismantle,
    "density": cmd_density, "dual": cmd_dual, "count": cmd_count, "sample": cmd_sample,
    "phi": cmd_phi, "theory": cmd_theory, "limit": cmd_limit, "verify": cmd_verify,
}


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    def common(parser, default):
        parser.add_argument("--config", default=default(None),
                            help="JSON file overriding budgets and schedules")
        parser.add_argument("--threads", type=int, default=default(None),
                            help="worker cap (default $HOMLAWS_THREADS or 1)")
        parser.add_argument("--out", default=default(None), help="artifact path (default stdout)")
        parser.add_argument("--format", choices=("json", "csv"), default=default("json"))
        parser.add_argument("--dot", default=default(None), help="also write the resulting graph as DOT")

    p = argparse.ArgumentParser(prog="homlaws", description="Homomorphism classes, densities and 0-1 laws.",
                                epilog="Graphs are files (JSON or edge list) or names such as t3, p4, c3+t3.")
    common(p, lambda v: v)
    # the same flags after the subcommand; SUPPRESS keeps the top-level value otherwise
    shared = argparse.ArgumentParser(add_help=False)
    common(shared, lambda v: argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[shared], **kw)

    sub.add_parser = add_parser

    s = sub.add_parser("hom", help="find or count homomorphisms")
    s.add_argument("--source", required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--count", action="store_true")
    s = sub.add_parser("core", help="core and its vertex set")
    s.add_argument("--graph", required=True)
    s = sub.add_parser("aut", help="automorphism group")
    s.add_argument("--graph", required=True)
    s.add_argument("--cap", type=int)
    s = sub.add_parser("dismantle", help="dismantling orders")
    s.add_argument("--graph", required=True)
    s.add_argument("--onto", help="comma-separated surviving vertices (default: D x D onto diagonal)")
    s = sub.add_parser("density", help="exact density, supports and blow-up structure")
    s.add_argument("--graph", required=True)
    s = sub.add_parser("dual", help="dual of a set of oriented trees")
    s.add_argument("--trees", required=True, help="JSON list of trees or comma-separated names")
    s = sub.add_parser("count", help="coloured counts c_n, b_n and d_n")
    s.add_argument("--template", required=True)
    s.add_argument("--n", required=True, help="a..b or a,b,c")
    s = sub.add_parser("sample", help="draw a coloured digraph")
    s.add_argument("--template", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=_seed, default=0)
    s.add_argument("--method", choices=("uniform", "product"), default="uniform")
    s = sub.add_parser("phi", help="sentence frequencies", epilog=FORMULA_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    s.add_argument("--class", dest="cls", required=True,
                   help="csp:D, forb:T1,T2, colored:D, all or ugraphs; append :loopless")
    s.add_argument("--formula", required=True)
    s.add_argument("--n", "--n-range", dest="n", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true", default=True)
    g.add_argument("--estimate", action="store_true")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=_seed, default=0)
    s = sub.add_parser("theory", help="classify a forbidden set or a template")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--trees")
    g.add_argument("--graphs")
    g.add_argument("--template")
    s.add_argument("--mode", choices=("csp", "colored"), default="csp")
    s = sub.add_parser("limit", help="predicted limit frequency of a sentence", epilog=FORMULA_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    s.add_argument("--template", required=True)
    s.add_argument("--formula", required=True)
    s.add_argument("--mode", choices=("csp", "colored"), default="csp")
    s.add_argument("--evidence-n", help="sizes for exact finite evidence")
    s.add_argument("--seed", type=_seed)
    s = sub.add_parser("verify", help="run the oracle suites")
    s.add_argument("--level", choices=("quick", "full"), default="quick")
    s.add_argument("--seed", type=_seed, default=0)
    return p


def _csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([r[c] for c in columns])
    return buf.getvalue()


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
        return
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def dispatch(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    start = time.perf_counter()
    try:
        cfg = load_config(args.config, args.threads)
    except (OSError, ValueError, TypeError) as e:
        parser.error(f"bad configuration: {e}")
    ctx = Context(args, cfg)
    ctx.exit_code = 0
    try:
        result = COMMANDS[args.command](ctx)
    except InputError as e:
        parser.error(str(e))
    except CapExceeded as e:
        _error("budget", e)
        return 2
    except FormulaError as e:
        parser.error(f"formula: {e}")
    except (ValueError, RuntimeError) as e:
        _error("domain", e)
        return 1
    columns = None
    if isinstance(result, tuple):
        result, columns = result
    manifest = ctx.manifest
    if args.format == "csv":
        if columns is None:
            parser.error(f"{args.command} has no CSV output")
        text = _csv(result["rows"], columns)
    else:
        result = {"manifest": manifest.deterministic(), **result}
        text = json.dumps(result, indent=2, sort_keys=False) + "\n"
    _write(args.out, text)
    manifest.wall_clock_seconds = round(time.perf_counter() - start, 6)
    if args.out:
        _write(args.out + ".manifest.json", json.dumps(asdict(manifest), indent=2) + "\n")
    return ctx.exit_code


def _error(kind: str, e: Exception):
    sys.stderr.write(json.dumps({"error": kind, "type": type(e).__name__, "message": str(e)}) + "\n")


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
