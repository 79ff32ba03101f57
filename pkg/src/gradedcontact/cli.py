"""Command line front end.

    gradedcontact <command> <model.json> [options]

Every report ends with ``VERDICT: pass|fail RESIDUAL_TERMS: <count>``.
Exit status: 0 pass, 1 fail (residual printed), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import random
import re
import sys
from typing import Callable

from .algebra import ChartError, InhomogeneousError, Poly
from .calculus import Derivation
from .contact import (
    CONTACT,
    NoPolynomialSolution,
    NotContact,
    cartan_bracket,
    check_contact,
    constant_kernel,
    hamiltonian_vf,
    jacobi_bracket,
    master_check,
)
from .expr import ParseError, parse_expression
from .modelfile import ModelData, ModelError, parse_model

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(ValueError):
    pass


class Report:
    def __init__(self, out):
        self.out = out
        self.residual_terms = 0

    def line(self, text: str = ""):
        print(text, file=self.out)

    def field(self, name: str, X: Derivation):
        chart = X.chart
        if X.is_zero():
            self.line(f"  {name} = 0")
            return
        for i in chart.coordinate_indices:
            v = X.value(i)
            if v:
                self.line(f"  {name}({chart.generators[i].name}) = {v}")

    def finish(self, ok: bool, residual_terms: int | None = None) -> int:
        terms = self.residual_terms if residual_terms is None else residual_terms
        self.line(f"VERDICT: {'pass' if ok else 'fail'} RESIDUAL_TERMS: {terms}")
        return EXIT_PASS if ok else EXIT_FAIL


def _expr(md: ModelData, text: str, flag: str) -> Poly:
    try:
        f = parse_expression(text, md.chart)
    except ParseError as exc:
        raise UsageError(f"{flag}: {exc}") from None
    if not f.is_function():
        raise UsageError(f"{flag}: expected a function, got a form")
    return f


def _header(rep: Report, md: ModelData, command: str):
    rep.line(f"command: {command}")
    rep.line(f"model: {md.path} ({md.kind}, contact degree n={md.model.n})")
    rep.line(f"alpha = {md.contact.alpha}")


def cmd_check_contact(md: ModelData, args, rep: Report) -> int:
    verdict = check_contact(md.contact)
    rep.line(f"verdict: {verdict}")
    if verdict == CONTACT:
        return rep.finish(True, 0)
    kernel = constant_kernel(md.contact) if not md.contact.system.invertible else []
    for X in kernel:
        rep.field("kernel", X)
    return rep.finish(False, len(kernel))


def cmd_reeb(md: ModelData, args, rep: Report) -> int:
    rep.field("R", md.contact.reeb)
    return rep.finish(True, 0)


def cmd_hamiltonian(md: ModelData, args, rep: Report) -> int:
    f = _expr(md, args.f, "--f")
    rep.line(f"f = {f}")
    rep.field("X_f", hamiltonian_vf(md.contact, f))
    return rep.finish(True, 0)


def cmd_bracket(md: ModelData, args, rep: Report) -> int:
    f = _expr(md, args.f, "--f")
    g = _expr(md, args.g, "--g")
    if args.cartan:
        value = cartan_bracket(md.contact, f, g)
        rep.line(f"cartan bracket X_f(g) = {value}")
    else:
        value = jacobi_bracket(md.contact, f, g)
        rep.line(f"{{f, g}}_J = {value}")
    return rep.finish(True, 0)


def cmd_master(md: ModelData, args, rep: Report) -> int:
    rep.line(f"S = {md.model.S}")
    residual = master_check(md.contact, md.model.S)
    rep.line(f"{{S, S}}_J = {residual}")
    return rep.finish(residual.is_zero(), len(residual.terms))


def cmd_symplectize_check(md: ModelData, args, rep: Report) -> int:
    from .symplectization import Symplectization

    Sy = Symplectization(md.contact)
    rep.line(f"omega = {Sy.omega}")
    rep.line("d omega = 0, L_Z omega = omega: ok")
    C = md.contact
    chart = md.chart
    samples = [chart.one()] + [chart.gen(g.name) for g in chart.generators if g.kind == "coordinate"]
    if md.model.S:
        samples.append(md.model.S)
    failures = 0
    for f in samples:
        Xf = hamiltonian_vf(C, f)
        lifted = Sy.hamiltonian(Sy.lift_function(f))
        if lifted != Sy.lifted_hamiltonian_formula(f, Xf):
            failures += 1
            rep.line(f"hamiltonian lift mismatch for f = {f}")
        for g in samples:
            lhs = Sy.lift_function(jacobi_bracket(C, f, g))
            rhs = Sy.poisson_bracket(Sy.lift_function(f), Sy.lift_function(g))
            if lhs != rhs:
                failures += 1
                rep.line(f"bracket lift mismatch for f = {f}, g = {g}: {lhs - rhs}")
    rep.line(f"checked {len(samples)} functions, {len(samples) ** 2} brackets")
    return rep.finish(failures == 0, failures)


def _need(md: ModelData, kind: str):
    if md.kind != kind:
        raise UsageError(f"this command needs a {kind} model, got {md.kind}")


def cmd_jacobi_check(md: ModelData, args, rep: Report) -> int:
    from .models import check_jacobi, jacobi_master_prediction

    _need(md, "jacobi")
    chk = check_jacobi(md.data)
    rep.line(f"[L, L] - 2 E^L = {chk.lambda_residual}")
    rep.line(f"[L, E] = {chk.e_residual}")
    residual = master_check(md.contact, md.model.S)
    prediction = jacobi_master_prediction(md.data, md.chart)
    identity = residual == prediction
    rep.line(f"{{S, S}}_J = {residual}")
    rep.line(f"schouten encoding agrees with {{S, S}}_J: {'yes' if identity else 'no'}")
    terms = len(chk.lambda_residual.terms) + len(chk.e_residual.terms)
    return rep.finish(chk.ok and identity, terms)


def cmd_cj_check(md: ModelData, args, rep: Report) -> int:
    from .models import check_courant_jacobi

    _need(md, "courant-jacobi")
    chk = check_courant_jacobi(md.data)
    for ax in (1, 2, 3, 4):
        bad = chk.residuals[ax]
        rep.line(f"axiom ({ax}): {'ok' if not bad else f'{len(bad)} failing instances'}")
        for label, value in bad[:3]:
            rep.line(f"  {label}: {value}")
    rep.line(f"bracket array determined by its skew part: {'yes' if md.data.is_canonical() else 'no'}")
    residual = master_check(md.contact, md.model.S)
    rep.line(f"{{S, S}}_J = {residual}")
    agree = residual.is_zero() == chk.ok
    rep.line(f"master equation agrees with the axioms: {'yes' if agree else 'no'}")
    terms = sum(len(v) for v in chk.residuals.values())
    return rep.finish(chk.ok and agree, terms)


def cmd_emit_action(md: ModelData, args, rep: Report) -> int:
    from .models import emit_action

    integrand = emit_action(md.model, args.variant)
    rep.line(f"variant: {args.variant}")
    rep.line(f"integrand: {integrand}")
    return rep.finish(True, 0)


def _grid(text: str) -> tuple[int, ...]:
    if not re.fullmatch(r"\d+(x\d+){1,2}", text or ""):
        raise UsageError(f"--grid expects NxM or NxMxK, got {text!r}")
    return tuple(int(p) for p in text.split("x"))


def cmd_lattice_eval(md: ModelData, args, rep: Report) -> int:
    from .lattice import LatticeError, evaluate_integrand, field_degrees, random_fields, torus_grid
    from .models import emit_action

    sizes = _grid(args.grid)
    if len(sizes) != md.model.n + 1:
        raise UsageError(f"a degree-{md.model.n} model needs a {md.model.n + 1}-dimensional grid")
    try:
        K = torus_grid(*sizes)
    except LatticeError as exc:
        raise UsageError(str(exc)) from None
    aksz = emit_action(md.model, "aksz")
    bpv = emit_action(md.model, "bpv")
    rng = random.Random(args.seed)
    degrees = field_degrees(aksz.poly)
    failures = 0
    rep.line(f"complex: {K}")
    for k in range(args.samples):
        fields = random_fields(K, degrees, rng)
        a = evaluate_integrand(K, aksz.poly, fields)
        b = evaluate_integrand(K, bpv.poly, fields)
        rep.line(f"sample {k}: AKSZ = {a}  BPV = {b}  difference = {a - b}")
        failures += a != b
    return rep.finish(failures == 0, failures)


COMMANDS: dict[str, Callable] = {
    "check-contact": cmd_check_contact,
    "reeb": cmd_reeb,
    "hamiltonian": cmd_hamiltonian,
    "bracket": cmd_bracket,
    "master": cmd_master,
    "symplectize-check": cmd_symplectize_check,
    "jacobi-check": cmd_jacobi_check,
    "cj-check": cmd_cj_check,
    "emit-action": cmd_emit_action,
    "lattice-eval": cmd_lattice_eval,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gradedcontact", description="Checks on graded contact charts and their models.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    helps = {
        "check-contact": "decide whether alpha is contact",
        "reeb": "print the Reeb field",
        "hamiltonian": "print the contact Hamiltonian vector field of --f",
        "bracket": "Jacobi (or --cartan) bracket of --f and --g",
        "master": "residual {S,S}_J of the model's S",
        "symplectize-check": "compare brackets with the symplectization",
        "jacobi-check": "Schouten conditions of a Jacobi model",
        "cj-check": "Courant-Jacobi axioms of a degree-2 model",
        "emit-action": "print the action integrand",
        "lattice-eval": "evaluate both action variants on a torus grid",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("model", help="JSON model file")
        if name in ("hamiltonian", "bracket"):
            p.add_argument("--f", required=True, help="function expression")
        if name == "bracket":
            p.add_argument("--g", required=True, help="function expression")
            p.add_argument("--cartan", action="store_true", help="X_f(g) instead of the Jacobi bracket")
        if name == "emit-action":
            p.add_argument("--variant", choices=("aksz", "bpv"), default="aksz")
        if name == "lattice-eval":
            p.add_argument("--grid", required=True, help="NxM (n=1) or NxMxK (n=2), sides at least 3")
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--samples", type=int, default=1)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_PASS
    if getattr(args, "samples", 1) < 1:
        print("error: --samples must be positive", file=err)
        return EXIT_ERROR
    rep = Report(out)
    try:
        md = parse_model(args.model)
        _header(rep, md, args.command)
        return COMMANDS[args.command](md, args, rep)
    except (OSError, ModelError, UsageError, ParseError, ChartError, InhomogeneousError) as exc:
        print(f"error: {exc}", file=err)
    except (NotContact, NoPolynomialSolution) as exc:
        print(f"error: {exc}", file=err)
    except ValueError as exc:
        print(f"error: {exc}", file=err)
    return EXIT_ERROR


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
