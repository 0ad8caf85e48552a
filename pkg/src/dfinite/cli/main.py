"""The ``dfinite`` command.

Exit status: 0 on success, 1 on usage errors (bad flags, unparsable input),
2 when the mathematics refuses (singular point, no telescoper, ...).
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from gmpy2 import mpq

from ..exact import QQI, GaussRat, field_for
from ..ore import normal_form, ore_gcrd, ore_lclm, ore_mul
from .parse import Algebra, ParseError, explicit_ring, parse_operator, parse_scalar, parse_with
from .printing import format_operator, format_poly
from .serialization import Session, from_json, function_json, sequence_json, to_json


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- built-in objects

BUILTIN_FUNCTIONS = {
    "exp": ("Dx - 1", ["1"]),
    "sin": ("Dx^2 + 1", ["0", "1"]),
    "cos": ("Dx^2 + 1", ["1", "0"]),
    "arctan": ("(x^2+1)*Dx^2 + 2*x*Dx", ["0", "1"]),
    "log1p": ("(x+1)*Dx^2 + Dx", ["0", "1"]),
    "sqrt1p": ("2*(x+1)*Dx - 1", ["1"]),
    "airy": ("Dx^2 - x", ["1", "0", "0"]),
}

BUILTIN_SEQUENCES = {
    "fib": ("Sn^2 - Sn - 1", ["0", "1"]),
    "alt": ("Sn + 1", ["1"]),
    "one": ("Sn - 1", ["1"]),
    "fact": ("Sn - (n+1)", ["1"]),
}


def _params(args):
    return tuple(p for p in (args.params or "").split(",") if p)


def _split_list(text):
    if text is None:
        return None
    return [t.strip() for t in re.split(r"[,;]", text) if t.strip()]


def parse_value(text: str, params=()):
    """A number: integer, fraction, decimal, Gaussian rational or parameter expression."""
    t = text.strip()
    try:
        return mpq(t)
    except (ValueError, TypeError):
        pass
    F = field_for(params) if params else QQI
    v = parse_scalar(t, F)
    if isinstance(v, GaussRat) and v.im == 0:
        return v.re
    return v


def _operator(text, args, session=None, normalize=True):
    if text.startswith("@"):
        obj = _session_get(session, text[1:])
        if hasattr(obj, "ann"):
            return obj.ann
        return obj
    return parse_operator(text, params=_params(args), normalize=normalize)


def _operator_pair(a, b, args, session=None, normalize=True):
    """Both operands of a binary command; one without a generator of its own
    (a bare coefficient such as ``1`` or ``x``) is read in the other's ring."""
    params = _params(args)

    def known(text):
        return text.startswith("@") or explicit_ring(text, params) is not None

    if known(a) or not known(b):
        A = _operator(a, args, session, normalize)
        B = _operator(b, args, session, normalize) if known(b) else \
            parse_operator(b, A.ring, params, normalize)
    else:
        B = _operator(b, args, session, normalize)
        A = parse_operator(a, B.ring, params, normalize)
    return A, B


def _session_get(session, name):
    if session is None:
        raise UsageError("no session file given (use --session)")
    try:
        return session.get(name)
    except KeyError as exc:
        raise UsageError(str(exc)) from None


def _function(op_text, init, args, session=None, point=0):
    from ..holonomic import DFiniteFunction

    if op_text in BUILTIN_FUNCTIONS and init is None:
        op_text, init = BUILTIN_FUNCTIONS[op_text]
    if op_text.startswith("@"):
        obj = _session_get(session, op_text[1:])
        if isinstance(obj, DFiniteFunction):
            return obj
        L = obj
    else:
        L = parse_operator(op_text, params=_params(args))
    if init is None:
        raise UsageError("initial Taylor coefficients required (--init)")
    return DFiniteFunction(L, tuple(parse_value(v, _params(args)) for v in init), point)


def _sequence(op_text, init, args, session=None):
    from ..holonomic import PRecSequence

    if op_text in BUILTIN_SEQUENCES and init is None:
        op_text, init = BUILTIN_SEQUENCES[op_text]
    if op_text.startswith("@"):
        obj = _session_get(session, op_text[1:])
        if isinstance(obj, PRecSequence):
            return obj
        R = obj
    else:
        R = parse_operator(op_text, params=_params(args))
    if init is None:
        raise UsageError("initial terms required (--init)")
    return PRecSequence(R, tuple(parse_value(v, _params(args)) for v in init))


def _definitions(defs, args, sequences: bool, session=None):
    """name=OPERATOR:v0,v1,... bindings merged over the built-ins."""
    table = dict(BUILTIN_SEQUENCES if sequences else BUILTIN_FUNCTIONS)
    out = {}
    for d in defs or []:
        if "=" not in d:
            raise UsageError(f"definition {d!r} must look like name=OPERATOR:v0,v1")
        name, rest = d.split("=", 1)
        op, _, init = rest.partition(":")
        table[name.strip()] = (op.strip(), _split_list(init) if init else None)
    build = _sequence if sequences else _function
    for name, (op, init) in table.items():
        out[name] = (lambda op=op, init=init: build(op, init, args, session))
    return out


def _expression(text, defs, sequences: bool):
    cache = {}

    def lookup(name, pos):
        shift = 0
        m = re.fullmatch(r"(.+?)_(\d+)", name)
        if sequences and m and m.group(1) in defs:
            name, shift = m.group(1), int(m.group(2))
        if name not in defs:
            raise ParseError(f"unknown function {name!r}", pos, text)
        if name not in cache:
            cache[name] = defs[name]()
        v = cache[name]
        return v.shift(shift) if shift else v

    def power(v, k, pos):
        if k < 0:
            raise ParseError("negative powers are not closure operations", pos, text)
        if k == 0:
            return mpq(1)
        out = v
        for _ in range(k - 1):
            out = out * v
        return out

    def divide(a, b, pos):
        if not isinstance(b, type(mpq(0))):
            raise ParseError("only division by numbers is supported", pos, text)
        return a * (1 / b)

    return parse_with(text, Algebra(lambda k: mpq(k), lookup, power, divide))


# ---------------------------------------------------------------- output


class Report:
    def __init__(self, json_mode: bool):
        self.json_mode = json_mode
        self.lines: list[str] = []
        self.data: dict = {}

    def line(self, text: str):
        self.lines.append(text)

    def set(self, **kw):
        self.data.update(kw)

    def render(self) -> str:
        if self.json_mode:
            return json.dumps(self.data, sort_keys=True, indent=1)
        return "\n".join(self.lines)


def _op_report(rep, key, P):
    from .serialization import operator_json

    rep.line(format_operator(P))
    rep.set(**{key: format_operator(P), key + "_json": operator_json(P)})


# ---------------------------------------------------------------- commands


def cmd_convert(args, rep, session):
    from ..convert import chebyshev_morphism, rec_to_diffop, taylor_morphism

    L = _operator(args.operator, args, session)
    init = _split_list(args.init)
    if args.to == "rec":
        out = taylor_morphism(L, args.var or "n")
    elif args.to == "deq":
        vals = [parse_value(v, _params(args)) for v in init] if init else None
        out = rec_to_diffop(L, vals, args.var or "x")
    else:
        out = chebyshev_morphism(L, args.var or "n")
    _op_report(rep, "result", out)
    return out


def cmd_lclm(args, rep, session):
    A, B = _operator_pair(args.a, args.b, args, session)
    out = normal_form(ore_lclm(A, B))
    _op_report(rep, "result", out)
    return out


def cmd_gcrd(args, rep, session):
    A, B = _operator_pair(args.a, args.b, args, session)
    out = normal_form(ore_gcrd(A, B))
    _op_report(rep, "result", out)
    return out


def _closure(args, rep, session, op):
    from ..holonomic import DFiniteFunction, PRecSequence, product_annihilator

    if args.ore:
        A, B = _operator_pair(args.a, args.b, args, session, normalize=False)
        out = ore_mul(A, B) if op == "mul" else A + B
        _op_report(rep, "result", out)
        return out
    A, B = _operator_pair(args.a, args.b, args, session)
    ia, ib = _split_list(args.init_a), _split_list(args.init_b)
    if ia is not None and ib is not None:
        p = _params(args)
        if A.ring.is_shift():
            f = PRecSequence(A, tuple(parse_value(v, p) for v in ia))
            g = PRecSequence(B, tuple(parse_value(v, p) for v in ib))
            h = f * g if op == "mul" else f + g
            _op_report(rep, "result", h.ann)
            rep.line("initial: " + ", ".join(str(v) for v in h.initial))
            rep.set(sequence=sequence_json(h))
            return h
        f = DFiniteFunction(A, tuple(parse_value(v, p) for v in ia))
        g = DFiniteFunction(B, tuple(parse_value(v, p) for v in ib))
        h = f * g if op == "mul" else f + g
        _op_report(rep, "result", h.ann)
        rep.line("initial: " + ", ".join(str(v) for v in h.initial))
        rep.set(function=function_json(h))
        return h
    if op == "mul":
        out = product_annihilator(A, B)
    else:
        out = normal_form(ore_lclm(A, B))
    _op_report(rep, "result", out)
    return out


def cmd_mul(args, rep, session):
    return _closure(args, rep, session, "mul")


def cmd_add(args, rep, session):
    return _closure(args, rep, session, "add")


def cmd_prove(args, rep, session):
    from ..holonomic import (DFiniteFunction, PRecSequence, constant_function,
                             constant_sequence, prove_equal, rec_prove_equal)

    defs = _definitions(args.define, args, args.seq, session)
    lhs = _expression(args.lhs, defs, args.seq)
    rhs = _expression(args.rhs, defs, args.seq)
    kinds = (PRecSequence,) if args.seq else (DFiniteFunction,)
    if not isinstance(lhs, kinds) and not isinstance(rhs, kinds):
        raise UsageError("at least one side must involve a defined object")
    if not isinstance(lhs, kinds):
        lhs, rhs = rhs, lhs
    ring = lhs.ann.ring
    if not isinstance(rhs, kinds):
        rhs = constant_sequence(rhs, ring) if args.seq else constant_function(rhs, ring)
    res = rec_prove_equal(lhs, rhs) if args.seq else prove_equal(lhs, rhs)
    rep.line(res.report())
    rep.set(proved=res.proved, order=res.order, checked=res.checked,
            annihilator_order=res.annihilator_order, report=res.report())
    if not res.proved:
        rep.set(first_nonzero=res.first_nonzero)
    return None


def cmd_build(args, rep, session):
    from ..convert import rec_to_diffop

    defs = _definitions(args.define, args, args.seq, session)
    obj = _expression(args.expr, defs, args.seq)
    if not hasattr(obj, "ann"):
        raise UsageError("the expression must involve a defined object")
    _op_report(rep, "annihilator", obj.ann)
    shown = obj.terms(args.terms) if args.seq else obj.series(args.terms)
    F = obj.field
    rep.line("initial: " + ", ".join(_plain(F, v) for v in shown))
    rep.set(initial=[F.to_json(v) for v in shown])
    rep.set(**({"sequence": sequence_json(obj)} if args.seq else {"function": function_json(obj)}))
    if args.gf:
        if not args.seq:
            raise UsageError("--gf applies to sequences")
        need = obj.order + len(obj.initial) + 1
        L = rec_to_diffop(obj.ann, obj.terms(need), args.gf)
        rep.line("generating function: " + format_operator(L))
        rep.set(generating_function=format_operator(L))
    return obj


def _plain(F, v) -> str:
    j = F.to_json(v)
    return j if isinstance(j, str) else json.dumps(j, sort_keys=True)


def cmd_apply(args, rep, session):
    from ..ore import ore_apply

    L = _operator(args.operator, args, session)
    vals = [parse_value(v, _params(args)) for v in _split_list(args.terms)]
    out = ore_apply(L, vals)
    F = L.ring.base
    text = ", ".join(_plain(F, v) if not isinstance(v, GaussRat) else str(v) for v in out)
    rep.line(text)
    rep.set(result=[str(v) for v in out])
    return None


def cmd_nth(args, rep, session):
    from ..fasteval import nth_term

    seq = _sequence(args.operator, _split_list(args.init), args, session)
    v = nth_term(seq, args.N)
    text = seq.field.to_json(v)
    rep.line(text if isinstance(text, str) else json.dumps(text))
    rep.set(N=args.N, value=text)
    return None


def _point(text, params=()):
    return parse_value(text, params)


def cmd_eval(args, rep, session):
    from ..fasteval import bit_burst_path, eval_dfinite

    f = _function(args.operator, _split_list(args.init), args, session)
    prec = args.prec
    path = [_point(p) for p in _split_list(args.path)] if args.path else None
    if args.bit_burst:
        target = _point(args.bit_burst)
        way = bit_burst_path(target, prec)
        point, path = way[-1], (path or []) + way[:-1]
        rep.set(bit_burst_path=[str(w) for w in way])
    elif args.at is None:
        raise UsageError("--at or --bit-burst is required")
    else:
        point = _point(args.at)
    enc = eval_dfinite(f, point, prec, path)
    text = enc.format(prec)
    rep.line(text)
    rep.set(point=str(point), precision=prec, enclosure=enc.as_dict(prec))
    return None


def cmd_continue(args, rep, session):
    from ..fasteval import continue_analytic

    f = _function(args.operator, _split_list(args.init), args, session)
    path = [_point(p) for p in _split_list(args.path)]
    g = continue_analytic(f, path, args.prec)
    from ..fasteval import Enclosure

    for i, c in enumerate(g.initial):
        e = Enclosure(GaussRat.coerce(c), mpq(g.radius or 0))
        rep.line(f"f_{i} = {e.format(args.prec)}")
    rep.set(function=function_json(g))
    return g


def _at(text, params=()):
    if text is None:
        return mpq(0)
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return "inf"
    return parse_value(text, params)


def cmd_indicial(args, rep, session):
    from ..local import indicial_poly

    L = _operator(args.operator, args, session)
    a = _at(args.at, _params(args))
    P = indicial_poly(L, a)
    rep.line(format_poly(P, "s"))
    rep.set(point=str(a), indicial=format_poly(P, "s"))
    return None


def cmd_classify(args, rep, session):
    from ..local import classify_point, is_fuchsian, singular_factors

    L = _operator(args.operator, args, session)
    if args.at is not None:
        pc = classify_point(L, _at(args.at, _params(args)))
        d = pc.as_dict()
        rep.line(f"{d['point']}: {d['kind']}, indicial {d['indicial']}")
        if d["exponents"]:
            rep.line("exponents: " + ", ".join(
                e["value"] + (f" (x{e['multiplicity']})" if e["multiplicity"] > 1 else "")
                for e in d["exponents"]))
        rep.set(**d)
        return None
    factors = [format_poly(q, L.ring.var) for q, _ in singular_factors(L) if q.deg > 0]
    inf = classify_point(L, "inf")
    fuchs = is_fuchsian(L)
    rep.line("singular factors: " + (", ".join(factors) if factors else "none"))
    rep.line(f"inf: {inf.kind}")
    rep.line(f"fuchsian: {'yes' if fuchs else 'no'}")
    rep.set(singular_factors=factors, infinity=inf.as_dict(), fuchsian=fuchs)
    return None


def cmd_asympt(args, rep, session):
    from ..local import asympt_translate, classify_point, dominant_singularity

    if args.operator:
        L = _operator(args.operator, args, session)
        roots = dominant_singularity(L, args.prec)
        rep.set(dominant=[r.as_dict() for r in roots])
        for r in roots:
            d = r.as_dict()
            lo, hi = (float(mpq(v)) for v in d["modulus"])
            rep.line(f"dominant singularity {d['approx']} (|z| in [{lo:.15g}, {hi:.15g}])")
            z = r.center
            if r.radius == 0:
                pc = classify_point(L, z.re if z.im == 0 else z)
                rep.line(f"  {pc.kind}, exponents "
                         + ", ".join(str(e) for e, _ in pc.exponents))
        if args.rho is None:
            return None
    if args.rho is None or args.alpha is None or args.c is None:
        raise UsageError("asymptotic translation needs --c, --rho and --alpha")
    t = asympt_translate(args.c, args.rho, args.alpha, args.m)
    rep.line(f"a_n ~ {t}")
    rep.set(term=t.as_dict())
    if args.N:
        v = t.numeric(args.N)
        rep.line(f"estimate at n={args.N}: {v}")
        rep.set(estimate=str(v))
    return None


def cmd_zeil(args, rep, session):
    from ..telescope import definite_sum, parse_summand, zeilberger

    term = parse_summand(args.summand, args.var, args.sumvar, _params(args))
    res = zeilberger(term, args.max_order)
    d = res.as_dict()
    rep.line(f"telescoper: {d['telescoper']}")
    rep.line(f"certificate: {d['certificate']}")
    rep.set(**d)
    if args.sum:
        seq = definite_sum(term, args.max_order)
        rep.line("sum recurrence: " + format_operator(seq.ann))
        terms = seq.terms(args.terms)
        rep.line("sum terms: " + ", ".join(str(v) for v in terms))
        rep.set(sum=sequence_json(seq), sum_terms=[seq.field.to_json(v) for v in terms])
        return seq
    return res.telescoper


def cmd_digits(args, rep, session):
    from ..fasteval import certified_digits, eval_dfinite, pi_digits

    if args.constant == "pi":
        s = pi_digits(args.n)
    else:
        f = _function("exp", None, args, session)
        s = certified_digits(lambda p: eval_dfinite(f, 1, p), args.n)
    rep.line(s)
    rep.set(constant=args.constant, digits=args.n, value=s)
    return None


def cmd_alg2deq(args, rep, session):
    from ..algcert import AlgSeries, alg_to_diffop, compose_algebraic, parse_bivariate

    P = parse_bivariate(args.polynomial, args.var, args.yvar, _params(args))
    prefix = [parse_value(v, _params(args)) for v in _split_list(args.prefix)]
    a = AlgSeries(P, tuple(prefix), args.var)
    if args.compose:
        L = parse_operator(args.compose, params=_params(args))
        out = compose_algebraic(L, a)
    else:
        out = alg_to_diffop(a, terms=args.terms)
    _op_report(rep, "result", out)
    series = a.series(args.show)
    rep.line("branch series: " + ", ".join(str(v) for v in series))
    rep.set(branch_series=[a.field.to_json(v) for v in series])
    return out


def cmd_fixtures(args, rep, session):
    from .fixtures import run_fixtures

    results = run_fixtures(args.dir, args.only)
    failed = [r for r in results if not r["ok"]]
    for r in results:
        rep.line(f"{'PASS' if r['ok'] else 'FAIL'} {r['name']}")
    rep.line(f"{len(results) - len(failed)}/{len(results)} fixtures passed")
    rep.set(results=results)
    if failed:
        raise _Failed()
    return None


def cmd_session(args, rep, session):
    if session is None:
        raise UsageError("no session file given (use --session)")
    if args.action == "list":
        for nm in session.names():
            rep.line(nm)
        rep.set(names=session.names())
    else:
        if not args.name:
            raise UsageError("session show needs a name")
        obj = session.get(args.name)
        d = to_json(obj)
        rep.line(json.dumps(d, sort_keys=True))
        rep.set(**d)
    return None


class _Failed(Exception):
    pass


# ---------------------------------------------------------------- argument parsing


def _common(p):
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--params", help="comma-separated parameter names")
    p.add_argument("--session", help="session file with named objects (@name)")
    p.add_argument("--save", help="store the result in the session under this name")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dfinite", description="D-finite functions and P-recursive sequences")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        _common(p)
        p.set_defaults(fn=fn)
        return p

    p = add("convert", cmd_convert, "differential equation <-> recurrence, Chebyshev recurrence")
    p.add_argument("--to", choices=["rec", "deq", "chebrec"], required=True)
    p.add_argument("operator")
    p.add_argument("--init", help="initial terms (for --to deq)")
    p.add_argument("--var", help="name of the output variable")

    for name, fn, h in (("lclm", cmd_lclm, "least common left multiple"),
                        ("gcrd", cmd_gcrd, "greatest common right divisor")):
        p = add(name, fn, h)
        p.add_argument("a")
        p.add_argument("b")
    for name, fn, h in (("mul", cmd_mul, "annihilator of products of solutions"),
                        ("add", cmd_add, "annihilator of sums of solutions")):
        p = add(name, fn, h)
        p.add_argument("a")
        p.add_argument("b")
        p.add_argument("--init-a")
        p.add_argument("--init-b")
        p.add_argument("--ore", action="store_true", help="plain ring arithmetic on operators")

    p = add("prove", cmd_prove, "prove an identity between D-finite objects")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--def", dest="define", action="append",
                   help="name=OPERATOR:v0,v1,... (repeatable)")
    p.add_argument("--seq", action="store_true", help="objects are sequences (name_k = shift)")

    p = add("build", cmd_build, "annihilator of an expression in defined objects")
    p.add_argument("--expr", required=True)
    p.add_argument("--def", dest="define", action="append",
                   help="name=OPERATOR:v0,v1,... (repeatable)")
    p.add_argument("--seq", action="store_true", help="objects are sequences (name_k = shift)")
    p.add_argument("--terms", type=int, default=6, help="number of terms to display")
    p.add_argument("--gf", metavar="VAR", help="also the ODE of the generating function")

    p = add("apply", cmd_apply, "apply an operator to a series or sequence prefix")
    p.add_argument("operator")
    p.add_argument("--terms", required=True)

    p = add("nth", cmd_nth, "N-th term of a P-recursive sequence")
    p.add_argument("operator", help="recurrence or built-in name (fib, fact, ...)")
    p.add_argument("--init")
    p.add_argument("--N", type=int, required=True)

    p = add("eval", cmd_eval, "certified value of a D-finite function")
    p.add_argument("operator", help="differential operator or built-in name (exp, arctan, ...)")
    p.add_argument("--init")
    p.add_argument("--at")
    p.add_argument("--prec", type=int, default=30)
    p.add_argument("--path")
    p.add_argument("--bit-burst", dest="bit_burst")

    p = add("continue", cmd_continue, "analytic continuation along a path")
    p.add_argument("operator")
    p.add_argument("--init")
    p.add_argument("--path", required=True)
    p.add_argument("--prec", type=int, default=30)

    def local_verbs(sp, prefix=""):
        q = sp.add_parser("indicial", help="indicial polynomial")
        _common(q)
        q.set_defaults(fn=cmd_indicial)
        q.add_argument("operator")
        q.add_argument("--at")
        q = sp.add_parser("classify", help="classify a point or all singular points")
        _common(q)
        q.set_defaults(fn=cmd_classify)
        q.add_argument("operator")
        q.add_argument("--at")
        q = sp.add_parser("asympt", help="singularity analysis")
        _common(q)
        q.set_defaults(fn=cmd_asympt)
        q.add_argument("operator", nargs="?")
        q.add_argument("--c")
        q.add_argument("--rho")
        q.add_argument("--alpha")
        q.add_argument("--m", type=int, default=0)
        q.add_argument("--N", type=int)
        q.add_argument("--prec", type=int, default=30)

    local_verbs(sub)
    loc = sub.add_parser("local", help="local analysis verbs")
    local_verbs(loc.add_subparsers(dest="verb", parser_class=_Parser, required=True))

    p = add("zeil", cmd_zeil, "creative telescoping for a hypergeometric summand")
    p.add_argument("--summand", required=True)
    p.add_argument("--var", default="n")
    p.add_argument("--sumvar", default="k")
    p.add_argument("--max-order", dest="max_order", type=int, default=6)
    p.add_argument("--sum", action="store_true", help="also the recurrence of the definite sum")
    p.add_argument("--terms", type=int, default=8)

    p = add("digits", cmd_digits, "certified digits of pi or e")
    p.add_argument("constant", choices=["pi", "e"])
    p.add_argument("--n", type=int, required=True)

    p = add("alg2deq", cmd_alg2deq, "differential equation of an algebraic series")
    p.add_argument("polynomial", help="P(x, y)")
    p.add_argument("--prefix", required=True, help="first coefficients of the branch")
    p.add_argument("--var", default="x")
    p.add_argument("--yvar", default="y")
    p.add_argument("--compose", help="operator L: annihilate F(Y(x)) for F solving L")
    p.add_argument("--terms", type=int, default=50)
    p.add_argument("--show", type=int, default=8)

    p = add("fixtures", cmd_fixtures, "run the golden-file corpus")
    p.add_argument("--dir")
    p.add_argument("--only")

    p = add("session", cmd_session, "inspect a session file")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")
    return ap


# ---------------------------------------------------------------- entry points


def run_command(argv) -> tuple[int, str]:
    """Run one command; returns (exit code, report text)."""
    json_mode = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        if not getattr(args, "fn", None):
            raise UsageError("a subcommand is required")
        session = Session.load(args.session) if args.session else None
        if session is None and args.save:
            raise UsageError("--save needs --session")
        rep = Report(args.json)
        result = args.fn(args, rep, session)
        if args.save:
            if result is None:
                raise UsageError("this command has no storable result")
            session.bind(args.save, result)
            session.save(args.session)
        return 0, rep.render()
    except _Failed:
        return 2, rep.render()
    except (UsageError, ParseError) as exc:
        return 1, _error(json_mode, "usage", exc)
    except FileNotFoundError as exc:
        return 1, _error(json_mode, "usage", exc)
    except (ArithmeticError, ValueError, AssertionError) as exc:
        return 2, _error(json_mode, "refused", exc)


def _error(json_mode, kind, exc) -> str:
    msg = str(exc) or type(exc).__name__
    if json_mode:
        return json.dumps({"error": kind, "message": msg}, sort_keys=True)
    return f"error: {msg}"


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv in ([], ["-h"], ["--help"]):
        build_parser().print_help()
        return 0 if argv else 1
    code, text = run_command(argv)
    stream = sys.stdout if code == 0 or not text.startswith("error") else sys.stderr
    if text:
        print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
