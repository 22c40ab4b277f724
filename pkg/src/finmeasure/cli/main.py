"""Command-line front end.

Exit codes: 0 success or property true, 1 property false / not integrable /
hypothesis violated (the report carries a witness), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import sys
from typing import Sequence

from ..atoms import (
    HypothesisError,
    StructureError,
    all_atoms,
    decompose,
    locate_atom_point,
)
from ..integrate import (
    NotIntegrableError,
    choquet_integral,
    fmt_vector,
    gould_integral,
    is_totally_measurable,
    simulate_net,
    t_zero,
)
from ..limits import (
    lebesgue_identity_check,
    sequence_from,
    uniform_bounded_atom,
    uniform_convergence_atom,
)
from ..rn import integral_measure, integral_measure_properties, rn_derivative
from ..setfunc import (
    Property,
    check_property,
    fmt_rational,
    implication_suite,
    m_star,
    m_tilde,
    variation,
    variation_witness,
)
from ..space import MeasureError
from . import textio
from .generate import KINDS, GeneratorSpec, generate, generate_unsafe

OK, FALSE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _bool(b: bool) -> str:
    return "true" if b else "false"


def _pick(table: dict, kind: str, name: str | None):
    if name is None:
        if len(table) == 1:
            return next(iter(table.values()))
        raise UsageError(f"--{kind} is required ({len(table)} {kind}s in the document)")
    if name not in table:
        raise UsageError(f"no {kind} named {name!r}")
    return table[name]


def _load(args) -> textio.Document:
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from exc
    return textio.parse(text)


def _on(doc, args, default_full: bool = True):
    if getattr(args, "on", None) is None:
        if default_full:
            return doc.universe.full
        raise UsageError("--on is required")
    return textio.parse_set_arg(doc.universe, args.on)


# ---------------------------------------------------------------- commands

def cmd_check(doc, args):
    m = _pick(doc.measures, "measure", args.object)
    props = list(Property) if args.property in (None, "all") else [Property(args.property)]
    out, code = [], OK
    for p in props:
        rep = check_property(m, p)
        out.append(rep.describe())
        if not rep.holds:
            code = FALSE
    if args.implications:
        imp = implication_suite(m)
        out.append(imp.describe())
        if not imp.ok:
            code = FALSE
    return code, "\n\n".join(out)


def cmd_variation(doc, args):
    m = _pick(doc.measures, "measure", args.measure)
    e = _on(doc, args)
    v = variation(m, e, args.block_limit)
    w = variation_witness(m, e, args.block_limit)
    return OK, f"set: {e}\nvariation: {fmt_rational(v)}\npartition: {w if w is not None else '{}'}"


def cmd_mstar(doc, args):
    m = _pick(doc.measures, "measure", args.measure)
    e = textio.parse_set_arg(doc.universe, args.on, measurable=False) if args.on else doc.universe.full
    label = "{" + ",".join(e) + "}" if isinstance(e, tuple) else str(e)
    if args.command == "mstar":
        return OK, f"set: {label}\nm_star: {fmt_rational(m_star(m, e))}"
    return OK, f"set: {label}\nm_tilde: {fmt_rational(m_tilde(m, e, args.block_limit))}"


def cmd_atoms(doc, args):
    m = _pick(doc.measures, "measure", args.measure)
    atoms = all_atoms(m)
    lines = [f"count: {len(atoms)}"] + [f"atom: {a} mass={fmt_rational(m(a))}" for a in atoms]
    return (OK if atoms else FALSE), "\n".join(lines)


def cmd_decompose(doc, args):
    m = _pick(doc.measures, "measure", args.measure)
    dec = decompose(m, args.block_limit)
    if dec is None:
        return FALSE, "purely_atomic: false"
    return OK, f"purely_atomic: true\ndecomposition: {dec}"


def cmd_locate(doc, args):
    m = _pick(doc.measures, "measure", args.measure)
    a = _on(doc, args, default_full=False)
    ap = locate_atom_point(m, a, mode=args.mode)
    return OK, (f"atom: {ap.atom}\npoint: {ap.point}\nblock: {ap.block}\n"
                f"residual_value: {fmt_rational(ap.residual_value)}")


def cmd_gould(doc, args):
    m = _pick(doc.measures, "measure", args.measure)
    f = _pick(doc.functions, "function", args.function)
    b = _on(doc, args)
    r = gould_integral(f, m, b)
    lines = [f"set: {b}", f"integrable: {_bool(r.integrable)}"]
    if r.integrable:
        lines.append(f"integral: {fmt_vector(r.value)}")
        return OK, "\n".join(lines)
    w = r.failure_witness
    lines.append(f"witness: block={w.block} tags={w.t},{w.s} "
                 f"values={fmt_vector(f(w.t))},{fmt_vector(f(w.s))} mass={fmt_rational(w.mass)}")
    return FALSE, "\n".join(lines)


def cmd_choquet(doc, args):
    m = _pick(doc.measures, "measure", args.measure)
    f = _pick(doc.functions, "function", args.function)
    a = _on(doc, args)
    if args.command == "choquet":
        return OK, f"set: {a}\nchoquet: {fmt_rational(choquet_integral(f, m, a))}"
    return OK, f"set: {a}\nt_zero: {fmt_rational(t_zero(f, m, a))}"


def cmd_tm(doc, args):
    m = _pick(doc.measures, "measure", args.measure)
    f = _pick(doc.functions, "function", args.function)
    b = _on(doc, args)
    eps = textio.parse_vector_arg(f"({args.epsilon})")[0] if args.epsilon is not None else None
    rep = is_totally_measurable(f, m, b, eps, args.block_limit)
    return (OK if rep.measurable_totally else FALSE), f"set: {b}\n{rep.describe()}"


def cmd_net(doc, args):
    m = _pick(doc.measures, "measure", args.measure)
    f = _pick(doc.functions, "function", args.function)
    b = _on(doc, args)
    if args.chains < 1 or args.depth < 1:
        raise UsageError("--chains and --depth must be at least 1")
    rep = simulate_net(f, m, b, chains=args.chains, depth=args.depth, seed=args.seed)
    return (OK if rep.converged else FALSE), rep.text().rstrip("\n")


def _sequence(doc, args, with_limit: bool):
    if not args.sequence:
        raise UsageError("--sequence NAME[,NAME...] is required")
    terms = [_pick(doc.functions, "function", n) for n in args.sequence.split(",")]
    lim = _pick(doc.functions, "function", args.limit) if with_limit and args.limit else None
    return sequence_from(terms, lim)


def cmd_lebesgue(doc, args):
    m = _pick(doc.measures, "measure", args.measure)
    a = _on(doc, args, default_full=False)
    rep = lebesgue_identity_check(_sequence(doc, args, True), m, a)
    lines = [f"atom: {rep.atom}", f"point: {rep.point}"]
    for r in rep.rows:
        lines.append(f"n={r.n} integral_gap={fmt_vector(r.integral_gap)} "
                     f"point_gap_times_mass={fmt_vector(r.point_gap_times_mass)} ok={_bool(r.ok)}")
    lines.append(f"ok: {_bool(rep.ok)}")
    return (OK if rep.ok else FALSE), "\n".join(lines)


def cmd_bounded(doc, args):
    m = _pick(doc.measures, "measure", args.measure)
    if args.bound is None:
        raise UsageError("--bound K is required")
    K = textio.parse_vector_arg(f"({args.bound})")[0]
    rep = uniform_bounded_atom(_sequence(doc, args, False), m, K)
    lines = [f"U: {rep.u}", f"complement_mass: {fmt_rational(rep.complement_mass)}",
             f"sup_norm: {fmt_rational(rep.sup_norm)}", f"k_plus_one: {fmt_rational(rep.bound)}",
             f"within_k_plus_one: {_bool(rep.within_k_plus_one)}",
             f"atom_bound: {fmt_rational(rep.general_bound)}", f"ok: {_bool(rep.ok)}"]
    return (OK if rep.ok else FALSE), "\n".join(lines)


def cmd_uniform(doc, args):
    m = _pick(doc.measures, "measure", args.measure)
    a = _on(doc, args, default_full=False)
    if args.target is None:
        raise UsageError("--target (x,...) is required")
    x = textio.parse_vector_arg(args.target)
    rep = uniform_convergence_atom(_sequence(doc, args, False), m, a, x)
    lines = [f"U: {rep.u}"]
    for n, (d, b) in enumerate(zip(rep.distances, rep.allowed), 1):
        lines.append(f"n={n} sup_distance={fmt_rational(d)} allowed={fmt_rational(b)}")
    lines.append(f"ok: {_bool(rep.ok)}")
    return (OK if rep.ok else FALSE), "\n".join(lines)


def cmd_intmeasure(doc, args):
    m = _pick(doc.measures, "measure", args.measure)
    f = _pick(doc.functions, "function", args.function)
    mu = integral_measure(f, m)
    lines = [textio.format_vmeasure(args.name, mu)]
    if args.properties:
        props = integral_measure_properties(f, m)
        lines += [f"finitely_additive: {_bool(props.finitely_additive)}",
                  f"absolutely_continuous: {_bool(props.absolutely_continuous)}",
                  f"purely_atomic: {_bool(props.purely_atomic)}"]
        if not props.ok:
            return FALSE, "\n".join(lines)
    return OK, "\n".join(lines)


def cmd_rn(doc, args):
    m = _pick(doc.measures, "measure", args.measure)
    mu = _pick(doc.vmeasures, "vmeasure", args.vmeasure)
    res = rn_derivative(m, mu)
    lines = [f"atom_basis: {res.atom_basis}", textio.format_function(args.name, res.derivative)]
    if args.verify:
        lines.append(f"verified: {_bool(res.verified)}")
    return OK, "\n".join(lines)


def cmd_gen(args):
    spec = GeneratorSpec(args.seed, args.points, args.carriers, args.kind, args.dim)
    doc = generate_unsafe(spec) if args.unsafe_random else generate(spec)
    return OK, textio.dump(doc).rstrip("\n")


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="finmeasure", description="Exact computations for set functions on finite algebras.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, *, measure=True, function=False, on=False, help=None):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("file", metavar="FILE")
        if measure:
            sp.add_argument("--measure")
        if function:
            sp.add_argument("--function")
        if on:
            sp.add_argument("--on", metavar="SET")
        sp.add_argument("--out", metavar="PATH")
        sp.add_argument("--block-limit", type=int, default=None)
        sp.set_defaults(handler=fn)
        return sp

    sp = add("check", cmd_check, measure=False, help="check properties of a set function")
    sp.add_argument("--object")
    sp.add_argument("--property", choices=[x.value for x in Property] + ["all"])
    sp.add_argument("--implications", action="store_true")
    add("variation", cmd_variation, on=True, help="variation on a measurable set")
    add("mstar", cmd_mstar, on=True, help="inner set function on a point set")
    add("mtilde", cmd_mstar, on=True, help="outer variation on a point set")
    add("atoms", cmd_atoms, help="list all atoms")
    add("decompose", cmd_decompose, help="decompose T into atoms")
    sp = add("locate-point", cmd_locate, on=True, help="atom point of an atom")
    sp.add_argument("--mode", choices=["point", "block"], default="point")
    add("gould", cmd_gould, function=True, on=True, help="Gould integral")
    add("choquet", cmd_choquet, function=True, on=True, help="Choquet integral")
    add("tzero", cmd_choquet, function=True, on=True, help="t0 level of a scalar function")
    sp = add("tm", cmd_tm, function=True, on=True, help="total measurability")
    sp.add_argument("--epsilon")
    sp = add("simulate-net", cmd_net, function=True, on=True, help="refinement-chain net simulation")
    sp.add_argument("--chains", type=int, default=4)
    sp.add_argument("--depth", type=int, default=4)
    sp.add_argument("--seed", type=int, default=0)
    for name, fn, doc in (("limits-lebesgue", cmd_lebesgue, "limit of integrals on an atom"),
                          ("limits-bounded", cmd_bounded, "co-null set bounding a sequence"),
                          ("limits-uniform", cmd_uniform, "uniform convergence inside an atom")):
        sp = add(name, fn, on=True, help=doc)
        sp.add_argument("--sequence", metavar="F1,F2,...")
        if name == "limits-lebesgue":
            sp.add_argument("--limit")
        elif name == "limits-bounded":
            sp.add_argument("--bound")
        else:
            sp.add_argument("--target", metavar="VECTOR")
    sp = add("intmeasure", cmd_intmeasure, function=True, help="integral measure of a function")
    sp.add_argument("--name", default="mu")
    sp.add_argument("--properties", action="store_true")
    sp = add("rn", cmd_rn, help="Radon-Nikodym derivative")
    sp.add_argument("--vmeasure")
    sp.add_argument("--name", default="f")
    sp.add_argument("--verify", action="store_true")

    sp = sub.add_parser("gen", help="generate a random admissible document")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--points", type=int, required=True)
    sp.add_argument("--carriers", type=int, required=True)
    sp.add_argument("--kind", choices=KINDS, default="additive")
    sp.add_argument("--dim", type=int, default=1)
    sp.add_argument("--unsafe-random", action="store_true")
    sp.add_argument("--out", metavar="PATH")
    sp.set_defaults(handler=None)
    return p


def run_command(argv: Sequence[str]) -> tuple[int, str]:
    """Run one command; returns (exit code, report text).  Never raises."""
    parser = build_parser()
    try:
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            try:
                args = parser.parse_args(list(argv))
            except SystemExit as exc:  # --help
                return int(exc.code or 0), buf.getvalue().rstrip("\n")
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
        code, text = cmd_gen(args) if args.command == "gen" else args.handler(_load(args), args)
    except UsageError as exc:
        return USAGE, f"error: {exc}"
    except (HypothesisError, NotIntegrableError) as exc:
        return FALSE, f"hypothesis_violation: {exc}"
    except StructureError as exc:
        return FALSE, f"structure_error: {exc}"
    except (MeasureError, ValueError) as exc:
        return USAGE, f"error: {exc}"
    if getattr(args, "out", None):
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            return USAGE, f"error: cannot write {args.out}: {exc.strerror}"
        return code, ""
    return code, text


def main(argv: Sequence[str] | None = None) -> int:
    code, text = run_command(sys.argv[1:] if argv is None else argv)
    if text:
        print(text, file=sys.stderr if code == USAGE else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
