"""Command-line interface.

Subcommands:
    charpoly   polynomial coefficients at flux p/q
    edges      edge-band energies (roots of f(e) = +-4)
    moment     moment sweep over a q list plus extrapolated limit
    verify     identity / invariant suite (quick or full)
    butterfly  band intervals for all reduced fractions up to qmax
    limit      closed-form limit M(n) by every independent route

Exit codes: 0 success, 1 verification failure, 2 precision/numerics failure,
3 bad arguments.  All numbers are serialized as decimal strings, so that a
fixed configuration produces byte-identical output.
"""

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import dataclass
from typing import Optional

from mpmath import mp, mpf, workprec

from . import __version__
from .charpoly import RationalFlux, charpoly, chambers_defect
from .errors import HofmomError, PrecisionExhaustionError
from .moments import (ALTERNATING, BANDWIDTH_POWER, CROSS, HALF_SPECTRUM,
                      bandwidth, extrapolate, expansion_reassembly_defect,
                      moment_alternating, moment_bandwidth_power, moment_cross,
                      moment_half_spectrum)
from .precision import MIN_PRECISION, default_precision
from .spectrum import (bands, edge_spectrum, factorization_defect,
                       packet_split)
from . import specfun

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_NUMERIC = 2
EXIT_USAGE = 3

DEFAULT_Q_LIST = (101, 201, 401)


@dataclass
class RunConfig:
    command: str
    p: int = 1
    q: Optional[int] = None
    q_list: tuple = DEFAULT_Q_LIST
    n: int = 1
    k: Optional[int] = None
    kind: str = ALTERNATING
    precision: int = 192
    fmt: str = "json"
    out: Optional[str] = None
    level: str = "quick"
    seed: int = 0
    qmax: int = 10
    model: str = "auto"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(config, text):
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _csv_text(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def cmd_charpoly(config):
    cp = charpoly(RationalFlux(config.p, config.q), precision=config.precision)
    if config.fmt == "csv":
        rows = [("j", "a")] + [(2 * j, c if isinstance(c, int) else mp.nstr(c, 30))
                               for j, c in enumerate(cp.a)]
        _emit(config, _csv_text(rows))
    else:
        _emit(config, json.dumps(cp.to_jsonable(), indent=2))
    return EXIT_OK


def cmd_edges(config):
    spec = edge_spectrum(RationalFlux(config.p, config.q),
                         precision=config.precision)
    if config.fmt == "csv":
        _emit(config, _csv_text(spec.to_csv_rows()))
    else:
        _emit(config, json.dumps(spec.to_jsonable(), indent=2))
    return EXIT_OK


_MOMENT_KINDS = {
    ALTERNATING: lambda s, n, k: moment_alternating(s, n),
    HALF_SPECTRUM: lambda s, n, k: moment_half_spectrum(s, n),
    BANDWIDTH_POWER: lambda s, n, k: moment_bandwidth_power(s, n),
    CROSS: moment_cross,
    "bandwidth": lambda s, n, k: None,  # handled separately below
}


def _reference_value(kind, n, k, precision):
    """Closed-form q->infinity target, where one is established."""
    if kind == "bandwidth" or (kind == ALTERNATING and n == 1):
        return specfun.thouless_constant(precision=precision)
    if kind == ALTERNATING and n % 2 == 1:
        return specfun.closed_form_M(n, precision=precision).value
    if kind == HALF_SPECTRUM:
        # twice the scaled half-spectrum moment tends to M(n)
        return specfun.closed_form_M(n, precision=precision).value / 2
    if kind == CROSS and n % 2 == 1:
        base = specfun.closed_form_M(n, precision=precision).value
        return base * (n - 2 * k) / n
    if kind == BANDWIDTH_POWER:
        return mpf(0)
    return None


def cmd_moment(config):
    kind, n, k = config.kind, config.n, config.k
    if kind == CROSS and k is None:
        raise SystemExit(EXIT_USAGE)
    values = []
    rows = [("kind", "n", "k", "q", "raw", "scaled")]
    for q in config.q_list:
        spec = edge_spectrum(RationalFlux(config.p, q),
                             precision=config.precision)
        if kind == "bandwidth":
            raw = bandwidth(spec)
            scaled = q * raw
        else:
            mv = _MOMENT_KINDS[kind](spec, n, k)
            raw, scaled = mv.raw, mv.scaled
        values.append(scaled)
        rows.append((kind, n, "" if k is None else k, q,
                     mp.nstr(raw, 20), mp.nstr(scaled, 20)))
    est = extrapolate(config.q_list, values, n=n, kind=kind, model=config.model)
    ref = _reference_value(kind, n, k, config.precision)
    if config.fmt == "csv":
        _emit(config, _csv_text(rows))
    else:
        _emit(config, json.dumps(est.to_jsonable(reference=ref), indent=2))
    return EXIT_OK


def cmd_limit(config):
    n = config.n
    cf = specfun.closed_form_M(n, precision=config.precision)
    payload = cf.to_jsonable()
    if n % 2 == 1:
        integral = specfun.moment_integral(n, precision=config.precision)
        payload["via_integral"] = mp.nstr(integral, 20)
        payload["integral_relative_deviation"] = mp.nstr(
            (integral - cf.value) / cf.value, 3)
    if n % 2 == 0:
        payload["via_euler_identity"] = mp.nstr(specfun.even_moment_euler(n), 20)
    _emit(config, json.dumps(payload, indent=2))
    return EXIT_OK


def cmd_butterfly(config):
    import math
    rows = [("p", "q", "band", "e_lo", "e_hi", "validated")]
    digits = int(config.precision * 0.30103) + 2
    for q in range(1, config.qmax + 1):
        for p in range(1, max(q, 2)):
            if p > 1 and math.gcd(p, q) != 1:
                continue
            if q == 1 and p != 1:
                continue
            flux = RationalFlux(p, q)
            cp = charpoly(flux, precision=config.precision)
            for i, (lo, hi) in enumerate(bands(cp, precision=config.precision)):
                rows.append((p, q, i + 1, mp.nstr(lo, digits),
                             mp.nstr(hi, digits), int(flux.validated)))
    _emit(config, _csv_text(rows))
    return EXIT_OK


def _verify_cases(level, seed):
    rng = random.Random(seed)
    cases = 20 if level == "quick" else 100
    q_pool = [3, 5, 7, 9, 11, 13] if level == "quick" else \
        [3, 5, 7, 9, 11, 13, 17, 21, 25, 31, 41, 51]
    return rng, cases, q_pool


def cmd_verify(config):
    """Run every identity suite; report achieved defects; exit 1 on failure."""
    with workprec(config.precision + 32):
        return _run_verify(config)


def _run_verify(config):
    rng, cases, q_pool = _verify_cases(config.level, config.seed)
    tol = 1e-8
    report = []
    ok = True

    def record(name, worst):
        nonlocal ok
        passed = worst <= tol
        ok = ok and passed
        report.append({"identity": name, "worst_defect": worst,
                       "tolerance": tol, "passed": passed})

    worst = 0.0
    for _ in range(cases):
        q = rng.choice(q_pool + [q + 1 for q in q_pool])
        e = rng.uniform(-4.5, 4.5)
        kx, ky = rng.uniform(0, 6.28), rng.uniform(0, 6.28)
        worst = max(worst, chambers_defect(RationalFlux(1, q), e, kx, ky,
                                           precision=config.precision))
    record("chambers_k_dependence", worst)

    worst = 0.0
    for _ in range(cases):
        q = rng.choice(q_pool)
        e = rng.uniform(-4.5, 4.5)
        worst = max(worst, factorization_defect(RationalFlux(1, q), e,
                                                precision=config.precision))
    record("secular_factorization", worst)

    worst = 0.0
    for q in q_pool:
        spec = edge_spectrum(RationalFlux(1, q), precision=config.precision)
        sym = max(abs(spec.e_minus[r] + spec.e_plus[q - 1 - r])
                  for r in range(q))
        worst = max(worst, float(sym))
    record("odd_q_root_reflection", worst)

    worst = 0.0
    for q in q_pool:
        ps = packet_split(RationalFlux(1, q), precision=config.precision)
        worst = max(worst, float(abs(sum(ps.epp) - 2)),
                    float(abs(sum(ps.emm) + 2)))
    record("packet_trace_values", worst)

    worst = 0.0
    for q in q_pool:
        spec = edge_spectrum(RationalFlux(1, q), precision=config.precision)
        ps = packet_split(RationalFlux(1, q), precision=config.precision)
        for n in ((1, 3) if config.level == "quick" else (1, 3, 5)):
            lhs = -sum((-1) ** r * spec.e_plus[r - 1] ** n
                       for r in range(1, q + 1))
            rhs = (sum(abs(e) ** n for e in ps.epp)
                   - sum(abs(e) ** n for e in ps.emm))
            worst = max(worst, float(abs(lhs - rhs)))
    record("packet_absolute_value_sum", worst)

    worst = 0.0
    for q in q_pool:
        spec = edge_spectrum(RationalFlux(1, q), precision=config.precision)
        for n in ((3,) if config.level == "quick" else (3, 5)):
            worst = max(worst, expansion_reassembly_defect(spec, n))
    record("cross_moment_reassembly", worst)

    payload = {"level": config.level, "seed": config.seed, "cases": cases,
               "passed": ok, "identities": report}
    _emit(config, json.dumps(payload, indent=2))
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def _q_list(text):
    qs = tuple(int(tok) for tok in text.split(","))
    if not qs:
        raise argparse.ArgumentTypeError("empty q list")
    return qs


def build_parser():
    parser = _Parser(prog="hofmom", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--precision", type=int, default=None,
                        help="working precision in bits (default 192, "
                             "overridable via HOFMOM_PRECISION)")
        sp.add_argument("--format", dest="fmt", choices=("json", "csv"),
                        default="json")
        sp.add_argument("--out", default=None, help="output path (default stdout)")

    sp = sub.add_parser("charpoly", help="polynomial coefficients at flux p/q")
    sp.add_argument("--p", type=int, default=1)
    sp.add_argument("--q", type=int, required=True)
    common(sp)

    sp = sub.add_parser("edges", help="edge-band energies at flux p/q")
    sp.add_argument("--p", type=int, default=1)
    sp.add_argument("--q", type=int, required=True)
    common(sp)

    sp = sub.add_parser("moment", help="moment sweep and extrapolated limit")
    sp.add_argument("--kind", choices=("bandwidth", ALTERNATING, "half",
                                       HALF_SPECTRUM, BANDWIDTH_POWER, CROSS),
                    default="bandwidth")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--p", type=int, default=1)
    sp.add_argument("--q", dest="q_list", type=_q_list,
                    default=DEFAULT_Q_LIST, help="comma-separated q list")
    sp.add_argument("--model", choices=("auto", "power", "log"), default="auto")
    common(sp)

    sp = sub.add_parser("verify", help="identity and invariant suites")
    sp.add_argument("--level", choices=("quick", "full"), default="quick")
    sp.add_argument("--seed", type=int, default=0)
    common(sp)

    sp = sub.add_parser("butterfly", help="band intervals for q <= qmax")
    sp.add_argument("--qmax", type=int, default=10)
    common(sp)

    sp = sub.add_parser("limit", help="closed-form limit M(n), all routes")
    sp.add_argument("--n", type=int, required=True)
    common(sp)

    return parser


def _to_config(args):
    precision = args.precision if args.precision is not None else default_precision()
    if precision < MIN_PRECISION:
        print(f"hofmom: precision must be >= {MIN_PRECISION} bits",
              file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    cfg = RunConfig(command=args.command, precision=precision,
                    fmt=getattr(args, "fmt", "json"),
                    out=getattr(args, "out", None))
    for name in ("p", "q", "q_list", "n", "k", "kind", "level", "seed",
                 "qmax", "model"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if cfg.kind == "half":
        cfg.kind = HALF_SPECTRUM
    return cfg


def main(argv=None):
    args = build_parser().parse_args(argv)
    config = _to_config(args)
    handlers = {
        "charpoly": cmd_charpoly,
        "edges": cmd_edges,
        "moment": cmd_moment,
        "verify": cmd_verify,
        "butterfly": cmd_butterfly,
        "limit": cmd_limit,
    }
    try:
        return handlers[config.command](config)
    except (ValueError,) as exc:
        print(f"hofmom: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HofmomError as exc:
        print(f"hofmom: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
