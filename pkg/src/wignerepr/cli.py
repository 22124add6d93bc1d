"""Command-line front end.

Usage::

    wignerepr state --bell
    wignerepr wigner --basis q=0 --n 1 --format ascii
    wignerepr measure --bell --measure Q1=0
    wignerepr epr --quantum --measure Q1=0 --probe P1,P2
    wignerepr check --in state.json

Exit codes: 0 success, 1 usage error, 2 validation error, 3 impossible outcome.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import collapse, epr, phasespace, qstate
from .distributions import ObservableId
from .errors import (
    ConsistencyError,
    DomainError,
    ImpossibleOutcomeError,
    UnsupportedArityError,
    ValidationError,
)

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_IMPOSSIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class StateFileError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _add_state_source(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--bell", action="store_true", help="two-qubit Bell state (|00>+|11>)/sqrt(2)")
    g.add_argument("--basis", metavar="q=K|p=K", help="basis state |q=K> or |p=K> of dimension 2**n")
    g.add_argument("--mixed", action="store_true", help="maximally mixed state I/2**n")
    g.add_argument("--in", dest="infile", metavar="FILE", help="density-matrix JSON file")
    p.add_argument("--n", type=int, default=None, help="number of qubits for --basis/--mixed")


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _parse_basis(text, n):
    try:
        key, value = text.split("=")
        key, k = key.strip().lower(), int(value)
    except ValueError:
        raise UsageError(f"--basis expects q=K or p=K, got {text!r}") from None
    if key not in ("q", "p"):
        raise UsageError(f"--basis expects q=K or p=K, got {text!r}")
    N = 2**n
    vec = qstate.basis_state_q(k, N) if key == "q" else qstate.basis_state_p(k, N)
    return qstate.density_from_vector(vec)


def _state_from_args(args, default_bell=False):
    if args.infile:
        data = _load_json(args.infile)
        try:
            return qstate.DensityMatrix.from_json(data)
        except (KeyError, TypeError, DomainError) as exc:
            raise StateFileError(f"malformed state file {args.infile}: {exc}") from None
    if args.bell:
        return qstate.bell_state()
    if args.basis:
        return _parse_basis(args.basis, args.n or 1)
    if args.mixed:
        return qstate.maximally_mixed(args.n or 1)
    if default_bell:
        return qstate.bell_state()
    raise UsageError("no state given; use --bell, --basis, --mixed or --in")


def _parse_measure(text):
    """``Q1=0`` -> (Q1, 0); ``Q1`` -> (Q1, None)."""
    obs, _, outcome = text.partition("=")
    try:
        o = ObservableId.parse(obs)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    if not outcome:
        return o, None
    if outcome.strip() not in ("0", "1"):
        raise UsageError(f"measurement outcome must be 0 or 1, got {outcome!r}")
    return o, int(outcome)


def _parse_probe(text):
    try:
        return tuple(ObservableId.parse(t) for t in text.split(","))
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _emit(obj):
    print(json.dumps(obj, indent=2))


def _render_wigner(W, fmt):
    if fmt == "json":
        return json.dumps(W.to_json(), indent=2) + "\n"
    if fmt == "csv":
        return W.to_csv()
    return W.to_ascii()


def cmd_state(args):
    _emit(_state_from_args(args).to_json())


def cmd_wigner(args):
    src = args.wigner_in
    if src:
        W = phasespace.WignerFunction.from_json(_load_json(src))
        if args.reconstruct:
            _emit(phasespace.reconstruct(W).to_json())
            return
    else:
        rho = _state_from_args(args)
        if args.partial_transpose:
            rho = qstate.partial_transpose(rho, args.partial_transpose)
        W = phasespace.wigner(rho)
    sys.stdout.write(_render_wigner(W, args.format))


def cmd_measure(args):
    rho = _state_from_args(args, default_bell=True)
    W = phasespace.wigner(rho)
    obs, outcome = _parse_measure(args.measure)
    if outcome is None:
        prior = phasespace.marginal(W, [obs])
        event = collapse.sample_outcome(prior, obs, args.seed)
    else:
        prior = phasespace.marginal(W, [obs])
        event = collapse.CollapseEvent(obs, outcome, float(prior.probs[outcome]))
    Wb = collapse.quantum_collapse(W, obs, event.outcome, args.companion)
    if args.format == "json":
        _emit({"event": event.to_json(), "wigner": Wb.to_json()})
    else:
        print(f"# {obs}={event.outcome} (prior {event.prior_prob:.6g})")
        sys.stdout.write(_render_wigner(Wb, args.format))


def _scenario_from_args(args):
    if args.scenario:
        try:
            return epr.Scenario.from_json(_load_json(args.scenario))
        except (KeyError, TypeError) as exc:
            raise UsageError(f"malformed scenario file: {exc}") from None
    if args.classical == args.quantum:
        raise UsageError("choose exactly one of --classical or --quantum (or --scenario FILE)")
    kind = "classical" if args.classical else "quantum"
    plan = []
    for i, text in enumerate(args.measure or []):
        obs, outcome = _parse_measure(text)
        if outcome is None:
            if args.seed is None:
                raise UsageError(f"--measure {text} has no outcome; give one or pass --seed")
            seed = epr._step_seed(args.seed, i)
            plan.append(epr.PlanStep(obs, seed=seed, companion_axis=args.companion))
        else:
            plan.append(epr.PlanStep(obs, outcome, companion_axis=args.companion))
    return epr.Scenario(kind, plan)


def _format_state(state):
    if isinstance(state, phasespace.WignerFunction):
        return state.to_ascii()
    lines = []
    for outcome in state.outcomes():
        if state.probs[outcome]:
            label = ",".join(f"{v}={x}" for v, x in zip(state.names(), outcome))
            lines.append(f"  P({label}) = {state.probs[outcome]:.6g}")
    return "\n".join(lines) + "\n"


def cmd_epr(args):
    scenario = _scenario_from_args(args)
    trace = epr.run_scenario(scenario)
    probes = [_parse_probe(p) for p in args.probe or []]
    if probes and len(trace) < 2:
        raise UsageError("--probe needs at least one --measure step")
    reports = [epr.mlocality_check(trace, p) for p in probes]
    if args.format == "json":
        _emit({"trace": trace.to_json(), "reports": [r.to_json() for r in reports]})
        for r in reports:
            print(r.summary(), file=sys.stderr)
        return
    for step in trace.steps:
        head = f"step {step.label}"
        if step.event is not None:
            e = step.event
            head += f": measured {e.variable}={e.outcome} (prior {e.prior_prob:.6g})"
        print(head)
        sys.stdout.write(_format_state(step.state))
    for r in reports:
        print(r.summary())


def cmd_check(args):
    if args.no_communication:
        obs, _ = _parse_measure(args.no_communication)
        kind = "classical" if args.classical else "quantum"
        report = epr.no_communication_check(kind, obs, args.companion)
        _emit(report.to_json())
        if not report.ok:
            return EXIT_VALIDATION
        return EXIT_OK
    if not args.infile:
        raise UsageError("check needs --in FILE or --no-communication OBS")
    data = _load_json(args.infile)
    m = qstate.matrix_from_json(data)
    n = data.get("num_qubits", args.n)
    if n is None:
        n = qstate._num_qubits(m.shape[0])
    report = qstate.density_report(m, n)
    _emit(report.to_dict())
    return EXIT_OK if report.ok else EXIT_VALIDATION


def build_parser():
    parser = _Parser(prog="wignerepr", description="Discrete Wigner functions and EPR scenarios")
    sub = parser.add_subparsers(dest="verb", parser_class=_Parser)

    p = sub.add_parser("state", help="print a density matrix as JSON")
    _add_state_source(p)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("wigner", help="print the Wigner table of a state")
    _add_state_source(p)
    p.add_argument("--wigner-in", metavar="FILE", help="read a Wigner JSON table instead of a state")
    p.add_argument("--reconstruct", action="store_true", help="with --wigner-in, print the density matrix")
    p.add_argument("--partial-transpose", type=int, choices=(1, 2), help="transpose one qubit first")
    p.add_argument("--format", choices=("json", "csv", "ascii"), default="json")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("measure", help="quantum collapse of a state (default: Bell state)")
    _add_state_source(p)
    p.add_argument("--measure", required=True, metavar="OBS[=BIT]")
    p.add_argument("--companion", choices=("Q", "P"), default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=("json", "csv", "ascii"), default="json")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("epr", help="run an EPR scenario and m-locality probes")
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--classical", action="store_true")
    kind.add_argument("--quantum", action="store_true")
    p.add_argument("--scenario", metavar="FILE", help="scenario JSON file")
    p.add_argument("--measure", action="append", metavar="OBS[=BIT]")
    p.add_argument("--probe", action="append", metavar="OBS,OBS")
    p.add_argument("--companion", choices=("Q", "P"), default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_epr)

    p = sub.add_parser("check", help="validate a state file or check no-communication")
    p.add_argument("--in", dest="infile", metavar="FILE")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--no-communication", metavar="OBS")
    p.add_argument("--classical", action="store_true")
    p.add_argument("--companion", choices=("Q", "P"), default=None)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verb is None:
            raise UsageError(parser.format_usage().strip())
        if getattr(args, "seed", None) is not None and not 0 <= args.seed < 2**64:
            raise UsageError("--seed must be in [0, 2**64)")
        code = args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"invalid state: {exc}", file=sys.stderr)
        print(json.dumps(exc.report.to_dict()), file=sys.stderr)
        return EXIT_VALIDATION
    except StateFileError as exc:
        print(exc, file=sys.stderr)
        return EXIT_VALIDATION
    except ImpossibleOutcomeError as exc:
        print(f"impossible outcome: {exc}", file=sys.stderr)
        return EXIT_IMPOSSIBLE
    except (DomainError, UnsupportedArityError, ConsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
