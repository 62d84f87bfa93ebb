"""Command-line front end.

Subcommands::

    certify plant   rate table (eps, phi1, phi2, phi3, phi4, Phi)
    certify reich   rate table (eps, phi_inf, phi2, Phi)
    verify          check certificates on the spec's instance
    axioms          structural suite for the spec's space and operator
    evolve          CSV trajectory of S(t)x0

Exit status: 0 when everything passes, 1 on a verification failure, 2 on
usage or configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .certificate import Claim
from .config import load_spec
from .errors import AccretiveError, BudgetExceeded, ConfigError
from .operator import DiagonalOperator
from .rates import plant, reich
from .semigroup import SemigroupEvaluator
from .space import euclidean
from .verify import Instance, axiom_suite, verify_certificate

log = logging.getLogger("accretive")

PLANT_EPS = (0.5, 0.25, 0.1)
REICH_EPS = (1.0, 0.5, 0.25)
PLANT_CLAIMS = [c for c in Claim if c.direction.value == "all_t_below"]
REICH_CLAIMS = [c for c in Claim if c.direction.value == "all_t_above"]


class UsageError(Exception):
    pass


def _eps_list(text, default):
    if text is None:
        return list(default)
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"--eps expects comma-separated numbers: {exc}") from exc
    if not vals or not all(v > 0 and math.isfinite(v) for v in vals):
        raise UsageError("--eps values must be positive and finite")
    return vals


def _parser():
    ap = argparse.ArgumentParser(prog="accretive", description=__doc__.split("\n")[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, eps=True):
        p.add_argument("--spec", required=True, help="problem specification (JSON)")
        p.add_argument("--out", help="directory for reports; stdout only when omitted")
        p.add_argument("--seed", type=int, help="override sampling.seed")
        if eps:
            p.add_argument("--eps", help="comma-separated accuracies")

    cert = sub.add_parser("certify", help="compute rate tables")
    cert.add_argument("family", choices=["plant", "reich"], help="small-time or large-time rates")
    common(cert)

    ver = sub.add_parser("verify", help="check certificates empirically")
    common(ver)
    ver.add_argument("--claim", default="plant_main",
                     help="claim id, 'plant', 'reich' or 'all' (adds negative controls)")
    ver.add_argument("--grid-per-decade", type=int)

    ax = sub.add_parser("axioms", help="run the structural suite")
    common(ax, eps=False)

    evo = sub.add_parser("evolve", help="trajectory of the semigroup as CSV")
    common(evo, eps=False)
    evo.add_argument("--t-max", type=float, required=True)
    evo.add_argument("--delta", type=float, required=True)
    evo.add_argument("--steps", type=int, default=20)
    return ap


def _load(args):
    spec = load_spec(args.spec)
    if getattr(args, "seed", None) is not None:
        spec = spec.model_copy(update={"sampling": spec.sampling.model_copy(update={"seed": args.seed})})
    if getattr(args, "grid_per_decade", None) is not None:
        if args.grid_per_decade < 1:
            raise UsageError("--grid-per-decade must be positive")
        spec = spec.model_copy(
            update={"sampling": spec.sampling.model_copy(update={"per_decade": args.grid_per_decade})}
        )
    if getattr(args, "out", None) is None and spec.output.dir:
        args.out = spec.output.dir
    inst, notes = spec.build()
    for n in notes:
        log.warning(n)
    return spec, inst, notes


def _emit(args, name, text):
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        (d / name).write_text(text)
    return text


def _csv(rows, columns):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(float(v)) if isinstance(v, (float, np.floating)) else v)
                    for k, v in r.items()})
    return buf.getvalue()


def _inputs(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("verbose",) and v is not None}


def _plant_params(spec, inst):
    return plant.PlantParams.for_instance(inst.op, inst.space, inst.x,
                                          b=spec.effective_b(inst), n=spec.rates.n)


def _reich_params(spec, inst):
    return reich.ReichParams.for_instance(inst.op, inst.space, inst.x, b=spec.effective_b(inst),
                                          E=spec.rates.E, D=spec.rates.D)


def cmd_certify(args, out):
    spec, inst, _ = _load(args)
    if args.family == "plant":
        p = _plant_params(spec, inst)
        rows = [{"eps": e, "phi1": plant.phi1(e, p), "phi2": plant.phi2(e, p),
                 "phi3": plant.phi3(e, p), "phi4": plant.phi4(e, p),
                 "Phi": plant.plant_rate(e, p).threshold}
                for e in _eps_list(args.eps, PLANT_EPS)]
        cols = ["eps", "phi1", "phi2", "phi3", "phi4", "Phi"]
    else:
        p = _reich_params(spec, inst)
        rows = [{"eps": e, "phi_inf": reich.phi_inf(e, p.b, p.f), "phi2": reich.phi2_reich(e, p),
                 "Phi": reich.reich_rate(e, p).threshold}
                for e in _eps_list(args.eps, REICH_EPS)]
        cols = ["eps", "phi_inf", "phi2", "Phi"]
    out.write(_emit(args, f"certify_{args.family}.csv", _csv(rows, cols)))
    _emit(args, f"certify_{args.family}.meta.json",
          json.dumps({"inputs": _inputs(args), "params": p.snapshot}, indent=2, sort_keys=True))
    return 0


def _claims(name):
    if name in ("all", "plant", "reich"):
        return {"all": list(Claim), "plant": PLANT_CLAIMS, "reich": REICH_CLAIMS}[name]
    try:
        return [Claim(name)]
    except ValueError as exc:
        raise UsageError(f"unknown claim {name!r}") from exc


def negative_controls(plan, slack):
    """Runs that must fail: a rate inflated 100x and a non-accretive operator."""
    e1 = euclidean(1)
    lin = Instance(DiagonalOperator([{"type": "linear", "slope": 1.0}]), e1, [1.0], "f(y)=y")
    p = plant.PlantParams.for_instance(lin.op, e1, lin.x)
    cert = plant.plant_certificates(0.1, p)[Claim.RESOLVENT_ROC]
    bad = cert.with_threshold(cert.threshold * 100)
    falsified = verify_certificate(bad, lin, plan, slack, conservativeness=False,
                                   negative_control=True)
    falsified.claim = "negative_falsified_rate"
    flipped = DiagonalOperator([{"type": "linear", "slope": -1.0}], strict=False)
    nonacc = axiom_suite(e1, flipped, plan, negative_control=True, semigroup=False)
    nonacc.claim = "negative_non_accretive"
    return [falsified, nonacc]


def cmd_verify(args, out):
    spec, inst, notes = _load(args)
    plan, slack = spec.plan(), spec.slack_policy()
    reports = []
    claims = _claims(args.claim)
    wants_plant = [c for c in claims if c in PLANT_CLAIMS]
    wants_reich = [c for c in claims if c in REICH_CLAIMS]
    if wants_plant:
        p = _plant_params(spec, inst)
        for e in _eps_list(args.eps, PLANT_EPS):
            certs = plant.plant_certificates(e, p)
            reports += [verify_certificate(certs[c], inst, plan, slack) for c in wants_plant]
    if wants_reich:
        p = _reich_params(spec, inst)
        for e in _eps_list(args.eps, REICH_EPS):
            certs = reich.reich_certificates(e, p, K=spec.rates.K)
            for c in wants_reich:
                if c in certs:
                    reports.append(verify_certificate(certs[c], inst, plan, slack))
                else:
                    log.warning("%s needs rates.D; skipped", c.value)
    if args.claim == "all":
        reports += negative_controls(plan, slack)
    header = {"inputs": _inputs(args), "notes": notes}
    for r in reports:
        r.header.setdefault("cli", header)
    payload = {"header": header, "reports": [r.to_dict() for r in reports]}
    _emit(args, f"verify_{args.claim}.json", json.dumps(payload, indent=2, sort_keys=True,
                                                        default=_json_default))
    rows = [r.summary_row() for r in reports]
    out.write(_emit(args, f"verify_{args.claim}.csv",
                    _csv(rows, list(rows[0]) if rows else ["claim"])))
    ok = all(r.passed for r in reports if not r.negative_control)
    controls_fail = all(not r.passed for r in reports if r.negative_control)
    return 0 if ok and controls_fail else 1


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)


def cmd_axioms(args, out):
    spec, inst, notes = _load(args)
    rep = axiom_suite(inst.space, inst.op, spec.plan())
    rep.header["cli"] = {"inputs": _inputs(args), "notes": notes}
    _emit(args, "axioms.json", rep.to_json(indent=2))
    out.write(_emit(args, "axioms.csv",
                    _csv(rep.rows, ["group", "check", "samples", "observed", "bound", "verdict"])))
    return 0 if rep.passed else 1


def cmd_evolve(args, out):
    spec, inst, _ = _load(args)
    if not (args.t_max >= 0 and args.delta > 0 and args.steps >= 1):
        raise UsageError("need --t-max >= 0, --delta > 0 and --steps >= 1")
    ev = SemigroupEvaluator(inst.op, inst.space)
    ts, results = ev.trajectory(args.t_max, inst.x, args.delta, args.steps)
    d = inst.space.dimension
    cols = ["t"] + [f"x{i + 1}" for i in range(d)] + ["n_used", "delta_requested"]
    rows = []
    for t, (y, p) in zip(ts, results):
        row = {"t": float(t), "n_used": p.n, "delta_requested": args.delta}
        row.update({f"x{i + 1}": float(y[i]) for i in range(d)})
        rows.append(row)
    out.write(_emit(args, "evolve.csv", _csv(rows, cols)))
    _emit(args, "evolve.meta.json", json.dumps({"inputs": _inputs(args)}, indent=2, sort_keys=True))
    return 0


COMMANDS = {"certify": cmd_certify, "verify": cmd_verify, "axioms": cmd_axioms, "evolve": cmd_evolve}


def run(argv=None, out=None):
    """Run the CLI and return the exit status."""
    out = out or sys.stdout
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args, out)
    except (ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"error: {exc} (required n={exc.required_n})", file=sys.stderr)
        return 2
    except AccretiveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
