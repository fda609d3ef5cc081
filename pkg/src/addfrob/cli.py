"""Command-line front end.

Exit codes: 0 success, 1 internal invariant violation, 2 usage or input
error, 3 resource cap reached.  ``--output json`` prints one JSON document
with sorted keys, so equal inputs and seeds give byte-identical output.

Defaults come from (lowest to highest precedence) built-ins, the
``ADDFROB_FIELD`` environment variable, a ``key=value`` config file given by
``--config`` and explicit flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from .additive import WitnessError, classify, format_additive, parse_additive
from .bounds import (
    NoAdmissibleEta, NotNormalizedError, NotPBasicError, ReductionError, ResourceLimitError, check_reduction_witness,
    e_ord, height_bound, inverse_image, reduce_mod_image,
)
from .gf import FieldError, FieldSpec, parse_field_spec
from .hasse import HasseConsistencyError, hasse_derivative
from .independence import DimensionError, rank_oracle, wronskian_certificate
from .normalize import NormalizationError, normalize_full
from .ratfun import Localization, ParseError, RingMembershipError, parse_ratfunc

ENV_FIELD = "ADDFROB_FIELD"
EXIT_OK, EXIT_BUG, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    field: FieldSpec
    S: list = field(default_factory=list)
    caps: dict = field(default_factory=dict)
    seed: int = 20240611
    output: str = "human"

    def __post_init__(self):
        for k, v in self.caps.items():
            if v < 0 or (v == 0 and k != "height"):
                raise UsageError(f"cap {k} must be positive")
        if self.output not in ("human", "json"):
            raise UsageError("output must be human or json")

    def localization(self) -> Localization:
        return Localization(self.field, self.S)


DEFAULT_CAPS = {"height": 2, "enum": 1 << 16, "dnf": 1 << 16}


def _split_list(text: str) -> list:
    return [t.strip() for t in text.replace(",", ";").split(";") if t.strip()]


def read_config_file(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key=value")
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def build_config(args) -> RunConfig:
    settings = {"field": os.environ.get(ENV_FIELD, "p=2,m=1"), "S": "z", "seed": "20240611", "output": "human"}
    if getattr(args, "config", None):
        settings.update(read_config_file(args.config))
    for key in ("field", "S", "seed", "output"):
        val = getattr(args, key, None)
        if val is not None:
            settings[key] = str(val)
    caps = dict(DEFAULT_CAPS)
    for k in list(settings):
        if k.startswith("cap."):
            caps[k[4:]] = int(settings[k])
    if getattr(args, "cap", None) is not None:
        caps["height"] = args.cap
    try:
        spec = parse_field_spec(settings["field"])
    except (ValueError, FieldError) as ex:
        raise UsageError(f"bad field spec {settings['field']!r}: {ex}") from None
    S = [] if settings["S"].strip().lower() in ("", "none", "{}") else _split_list(settings["S"])
    cfg = RunConfig(spec, S, caps, int(settings["seed"]), settings["output"])
    try:
        cfg.localization()
    except (ValueError, FieldError) as ex:
        raise UsageError(f"bad S: {ex}") from None
    return cfg


# ---------------------------------------------------------------------------
# subcommands; each returns (record, human text)

def _s(x) -> str:
    return str(x)


def cmd_normalize(cfg, args):
    f = parse_additive(args.poly, cfg.field)
    res = normalize_full(f, cfg.localization())
    xi = res.xi
    rec = {
        "input": format_additive(f),
        "f_tilde": format_additive(res.f_tilde),
        "G": format_additive(res.G),
        "xi": {_s(t): format_additive(c) for t, c in zip(xi.targets, xi.components)},
        "classification": classify(res.f_tilde).flags() if res.f_tilde.coeffs else [],
        "identity_holds": res.identity_holds(f),
    }
    if not rec["identity_holds"]:
        raise WitnessError("f o xi != f~ + G")
    lines = [f"f~ = {rec['f_tilde']}", f"G  = {rec['G']}"]
    lines += [f"{t} = {c}" for t, c in rec["xi"].items()]
    lines.append("flags: " + ", ".join(rec["classification"]))
    return rec, "\n".join(lines)


def cmd_wronskian(cfg, args):
    fam = [parse_ratfunc(t, cfg.field) for t in args.family.split(";") if t.strip()]
    cert = wronskian_certificate(fam, args.s)
    rank = rank_oracle(fam, args.s)
    if (cert is not None) != (rank == len(fam)):
        raise WitnessError("Wronskian certificate disagrees with the rank oracle")
    rec = {"family": [_s(b) for b in fam], "s": args.s,
           "certificate": list(cert) if cert is not None else None, "rank": rank}
    return rec, ("dependent" if cert is None else "independent, eps = " + _s(tuple(cert)))


def cmd_hasse(cfg, args):
    x = parse_ratfunc(args.expr, cfg.field)
    d = hasse_derivative(x, args.eps)
    return {"expr": _s(x), "eps": args.eps, "derivative": _s(d)}, _s(d)


def _eord_record(rep):
    return {"m": rep.m, "m0": rep.m0, "threshold": rep.threshold, "Omega": rep.Omega, "Eord": rep.Eord,
            "C": rep.C, "W": _s(rep.W), "eps": list(rep.eps), "Delta": _s(rep.Delta)}


def cmd_eord(cfg, args):
    f = parse_additive(args.poly, cfg.field)
    rec = _eord_record(e_ord(f))
    return rec, "\n".join(f"{k} = {v}" for k, v in rec.items())


def cmd_reduce(cfg, args):
    f = parse_additive(args.poly, cfg.field)
    L = cfg.localization()
    u = parse_ratfunc(args.u, cfg.field)
    w = reduce_mod_image(f, u, L, method=args.method)
    bad = check_reduction_witness(f, w, L)
    if bad:
        raise WitnessError("; ".join(bad))
    rec = {"u": _s(u), "u_prime": _s(w.u_prime), "x_tilde": [_s(x) for x in w.x_tilde], "Eord": w.Eord,
           "iterations": [[_s(p), a, b] for p, a, b in w.progress]}
    return rec, f"u' = {rec['u_prime']}\nx~ = ({', '.join(rec['x_tilde'])})"


def cmd_hbound(cfg, args):
    f = parse_additive(args.poly, cfg.field)
    hb = height_bound(f, args.ell, cfg.localization(), allow_extension=args.extend)
    rec = {"h": hb.h, "ell": args.ell, "C_places": {_s(Q): c for Q, c in hb.C_places.items()},
           "C_inf": hb.C_inf, "eta": _s(hb.eta), "M": hb.M}
    return rec, f"h = {hb.h}"


def cmd_preimage(cfg, args):
    f = parse_additive(args.poly, cfg.field)
    y = parse_ratfunc(args.y, cfg.field)
    sols = inverse_image(f, y, cfg.localization(), cap=cfg.caps["enum"])
    rec = {"y": _s(y), "solutions": [[_s(x) for x in t] for t in sols]}
    text = "\n".join("(" + ", ".join(t) + ")" for t in rec["solutions"]) or "no solutions"
    return rec, text


def _formula_arg(text: str) -> str:
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            return fh.read()
    return text


def _assignment(cfg, text, phi, bounded: bool):
    from .additive import F_SORT
    from .logic.ast import free_vars

    if not text:
        return {}
    by_name = {v.name: v for v in free_vars(phi)}
    out = {}
    for item in _split_list(text):
        if "=" not in item:
            raise UsageError(f"assignment {item!r} is not name=value")
        k, v = (t.strip() for t in item.split("=", 1))
        var = by_name.get(k)
        if var is None:
            raise UsageError(f"{k} is not a free variable")
        val = parse_ratfunc(v, cfg.field)
        if var.sort == F_SORT and not (val.is_poly() and val.num.deg <= 0):
            raise UsageError(f"{k} is F-sorted but {v} is not in F")
        out[var] = val
    return out


def cmd_transform(cfg, args):
    from .logic.ast import size
    from .logic.syntax import format_formula, parse_formula
    from .logic.transform import model_complete_transform

    phi = parse_formula(_formula_arg(args.formula), cfg.field)
    out = model_complete_transform(phi, cfg.localization(), cap=cfg.caps["dnf"])
    text = format_formula(out, cfg.field.p)
    return {"input": format_formula(phi, cfg.field.p), "universal": text, "size": size(out)}, text


def cmd_to_sigma(cfg, args):
    from .logic.semantics import eval_sigma_over_F
    from .logic.syntax import format_formula, format_sigma, parse_formula
    from .logic.transform import sentence_to_sigma

    phi = parse_formula(_formula_arg(args.sentence), cfg.field)
    sigma = sentence_to_sigma(phi, cfg.localization(), cap=cfg.caps["dnf"])
    text = format_sigma(sigma, cfg.field.p)
    rec = {"sentence": format_formula(phi, cfg.field.p), "sigma": text}
    if not args.evaluate:
        return rec, text
    # the translated sentence can be large, so truth is only computed on request
    rec["truth"] = eval_sigma_over_F(sigma, {}, cfg.field, cap=cfg.caps["enum"])
    return rec, f"{text}\n{'true' if rec['truth'] else 'false'}"


def cmd_eval_sigma(cfg, args):
    from .logic.semantics import eval_sigma_over_F
    from .logic.syntax import parse_sigma

    sigma = parse_sigma(_formula_arg(args.sigma), cfg.field)
    env = {k: v.num.coeff(0) if not v.is_zero() else 0 for k, v in _assignment(cfg, args.assign, sigma, False).items()}
    truth = eval_sigma_over_F(sigma, env, cfg.field, cap=cfg.caps["enum"])
    return {"truth": truth}, "true" if truth else "false"


def cmd_eval_bounded(cfg, args):
    from .logic.semantics import eval_bounded_over_R
    from .logic.syntax import parse_formula

    phi = parse_formula(_formula_arg(args.formula), cfg.field)
    env = _assignment(cfg, args.assign, phi, True)
    truth = eval_bounded_over_R(phi, env, cfg.localization(), cap=cfg.caps["height"], budget=cfg.caps["enum"] * 64)
    return {"truth": truth, "height_cap": cfg.caps["height"], "semantics": "bounded"}, "true" if truth else "false"


def cmd_selftest(cfg, args):
    from .suites import run_all

    only = [int(x) for x in _split_list(args.only)] if args.only else None
    results = run_all(quick=args.quick, seed=cfg.seed, only=only)
    rec = {"quick": args.quick, "seed": cfg.seed, "suites": [r.as_dict() for r in results]}
    for r in rec["suites"]:
        r["details"].pop("seconds", None)
    text = "\n".join(r.line() for r in results)
    if not all(r.passed for r in results):
        return rec, text, 1
    return rec, text


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand's unset option from clobbering a global one
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--field", help="field spec, e.g. p=2,m=2 or p=2,m=2,mod=t^2+t+1")
    common.add_argument("--S", help="elements of S separated by ';', or 'none'")
    common.add_argument("--seed", type=int)
    common.add_argument("--output", choices=["human", "json"])
    common.add_argument("--config", help="key=value config file")

    ap = argparse.ArgumentParser(prog="addfrob", description=__doc__.splitlines()[0], parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help, parents=[common])
        p.set_defaults(fn=fn)
        return p

    p = add("normalize", cmd_normalize, "normalize an additive polynomial")
    p.add_argument("--poly", required=True)
    p = add("wronskian", cmd_wronskian, "Wronskian independence certificate")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--family", required=True, help="b1; b2; ...")
    p = add("hasse", cmd_hasse, "Hasse derivative")
    p.add_argument("--eps", type=int, required=True)
    p.add_argument("--expr", required=True)
    p = add("eord", cmd_eord, "E_ord report for a p-basic polynomial")
    p.add_argument("--poly", required=True)
    p = add("reduce", cmd_reduce, "reduce u modulo the image of f")
    p.add_argument("--poly", required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--method", choices=["auto", "crt", "paper"], default="auto")
    p = add("hbound", cmd_hbound, "height bound h(f, ell)")
    p.add_argument("--poly", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--extend", action="store_true", help="allow a field extension for eta")
    p = add("preimage", cmd_preimage, "all x in R^n with f(x) = y")
    p.add_argument("--poly", required=True)
    p.add_argument("--y", required=True)
    p = add("transform", cmd_transform, "universal formula equivalent in R")
    p.add_argument("--formula", required=True, help="formula text or @file")
    p = add("to-sigma", cmd_to_sigma, "sentence to an L_p sentence over F")
    p.add_argument("--sentence", required=True, help="sentence text or @file")
    p.add_argument("--evaluate", action="store_true", help="also decide the result in F")
    p = add("eval-sigma", cmd_eval_sigma, "evaluate an L_p formula in F")
    p.add_argument("--sigma", required=True)
    p.add_argument("--assign", help="a1=value; ...")
    p = add("eval-bounded", cmd_eval_bounded, "bounded evaluation in R")
    p.add_argument("--formula", required=True)
    p.add_argument("--cap", type=int, help="height cap for R-quantifiers")
    p.add_argument("--assign", help="x=value; ...")
    p = add("selftest", cmd_selftest, "run the property suites")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--only", help="criterion numbers, e.g. 1,9")
    return ap


USAGE_ERRORS = (UsageError, ParseError, FieldError, DimensionError, RingMembershipError, NotPBasicError,
                NotNormalizedError, NoAdmissibleEta, ValueError, OSError)
BUG_ERRORS = (WitnessError, ReductionError, HasseConsistencyError, NormalizationError, AssertionError)


def _emit(cfg_output, rec, text, out):
    if cfg_output == "json":
        out.write(json.dumps(rec, sort_keys=True, default=str) + "\n")
    else:
        out.write(text + "\n")


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as ex:
        return int(ex.code or 0)
    mode = "human"
    try:
        cfg = build_config(args)
        mode = cfg.output
        res = args.fn(cfg, args)
        code = EXIT_OK
        if len(res) == 3:
            rec, text, code = res
        else:
            rec, text = res
        _emit(mode, {"command": args.command, "ok": code == 0, "result": rec}, text, out)
        return code
    except ResourceLimitError as ex:
        _error(mode, args, "resource", ex, err)
        return EXIT_CAP
    except BUG_ERRORS as ex:
        _error(mode, args, "invariant", ex, err)
        return EXIT_BUG
    except USAGE_ERRORS as ex:
        _error(mode, args, "usage", ex, err)
        if mode != "json":
            ap.print_usage(err)
        return EXIT_USAGE


def _error(mode, args, kind, ex, err):
    if mode == "json":
        err.write(json.dumps({"command": args.command, "ok": False, "error": kind, "message": str(ex)},
                             sort_keys=True) + "\n")
    else:
        err.write(f"error ({kind}): {ex}\n")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
