"""Command-line interface for siegel-volume."""

from __future__ import annotations

import argparse
from dataclasses import dataclass, replace
import json
import logging
from pathlib import Path
import sys
from typing import TYPE_CHECKING, NoReturn

from mpmath import mp, mpc, mpf

from . import __version__, storage
from .checks import SUITES, run_suites
from .errors import DomainError, SiegelVolumeError, VerificationError
from .fiber import (
    FiberTarget,
    check_prime,
    compare_with_stated,
    default_system,
    enumerate_solutions,
    load_or_reconstruct,
    stated_solutions,
)
from .forms import (
    FormSpec,
    calibrate_e6_signs,
    eval_form,
    fourier_coefficient,
    load_or_calibrate,
    petersson_norm,
    save_sign_table,
)
from .quadrature import (
    constant_integrand,
    integrate_A1,
    log_norm_integrand,
    rohrlich_rhs,
    term_B_numeric,
)
from .settings import DEFAULT_SETTINGS_PATH, Settings, load_settings
from .symplectic import load_candidate_set, reduce1, reduce2
from .theta import SiegelPoint1, SiegelPoint2
from .volume import assemble, numeric_value, term_B, weight_scaled

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from .forms import TripleSystem
    from .storage import JSONObject, JSONValue

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2
TERM_B_TOLERANCE = 1e-3


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with status 1; status 2 is reserved for failed checks."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        raise SystemExit(f"ERROR: {message}")


@dataclass(frozen=True)
class Outcome:
    """What a subcommand reports: its value, an error estimate and the formula used."""

    value: JSONValue
    formula: str
    error_estimate: float | None = None
    exit_code: int = EXIT_OK


@dataclass(frozen=True)
class Command:
    """Registry entry for a subcommand."""

    name: str
    help: str
    configure: Callable[[argparse.ArgumentParser], None]
    handler: Callable[[argparse.Namespace, Settings], Outcome]


# ---------- JSON helpers ----------
def _digits(settings: Settings) -> int:
    return settings.working_digits


def complex_json(value: mpc | mpf | complex, digits: int = 30) -> JSONObject:
    z = mpc(value)
    return {"re": mp.nstr(z.real, digits), "im": mp.nstr(z.imag, digits)}


def _number(name: str, value: object) -> mpf:
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise DomainError(f"{name}: expected a number, got {value!r}")
    try:
        return mpf(value)
    except ValueError as exc:
        raise DomainError(f"{name}: {value!r} is not a number") from exc


def parse_tau(text: str) -> SiegelPoint1 | SiegelPoint2:
    """Read {"x": .., "y": ..} (degree 1) or {"x": [[..]], "y": [[..]]} (degree 2).

    ``@PATH`` reads the same object from a JSON file.
    """

    if text.startswith("@"):
        data: object = storage.read_json(Path(text[1:]))
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"tau is not valid JSON: {exc.msg}") from exc
    if not isinstance(data, dict) or set(data) != {"x", "y"}:
        raise DomainError('tau must be a JSON object with keys "x" and "y"')
    x, y = data["x"], data["y"]
    if isinstance(x, (int, float, str)) and isinstance(y, (int, float, str)):
        return SiegelPoint1(_number("x", x), _number("y", y))
    entries = []
    for name, m in (("x", x), ("y", y)):
        if not (isinstance(m, list) and len(m) == 2 and all(isinstance(r, list) and len(r) == 2 for r in m)):
            raise DomainError(f"{name} must be a number or a 2x2 matrix")
        a, b, c, d = (_number(f"{name}[{i}][{j}]", m[i][j]) for i in range(2) for j in range(2))
        if b != c:
            raise DomainError(f"{name} must be symmetric")
        entries.append((a, b, d))
    (x1, x12, x2), (y1, y12, y2) = entries
    return SiegelPoint2(x1, x12, x2, y1, y12, y2)


def _point_json(point: SiegelPoint1 | SiegelPoint2, digits: int) -> JSONObject:
    if isinstance(point, SiegelPoint1):
        return {"x": mp.nstr(point.x, digits), "y": mp.nstr(point.y, digits)}
    return {
        "x": [[mp.nstr(point.x1, digits), mp.nstr(point.x12, digits)], [mp.nstr(point.x12, digits), mp.nstr(point.x2, digits)]],
        "y": [[mp.nstr(point.y1, digits), mp.nstr(point.y12, digits)], [mp.nstr(point.y12, digits), mp.nstr(point.y2, digits)]],
    }


def _triples(settings: Settings) -> TripleSystem:
    return load_or_calibrate(settings.precision(), settings.sign_table)


# ---------- handlers ----------
def _configure_eval(p: argparse.ArgumentParser) -> None:
    p.add_argument("form", help="E4, E6, DELTA, CHI10 or CHI12")
    p.add_argument("tau", help='tau as JSON, e.g. {"x": 0, "y": 1}')


def cmd_eval(args: argparse.Namespace, settings: Settings) -> Outcome:
    cfg = settings.precision()
    with cfg.workdps():
        tau = parse_tau(args.tau)
    form = FormSpec.parse(args.form, 1 if isinstance(tau, SiegelPoint1) else 2)
    triples = _triples(settings) if form.name == "E6" and form.degree == 2 else None
    value = eval_form(form, tau, cfg, triples)
    norm = petersson_norm(form, tau, cfg, triples)
    return Outcome(
        {"form": str(form), "f": complex_json(value, _digits(settings)), "petersson_norm": mp.nstr(norm, _digits(settings))},
        "theta-constant formula" if form.name != "DELTA" else "q-product",
    )


def _configure_reduce(p: argparse.ArgumentParser) -> None:
    p.add_argument("tau", help="tau as JSON")


def cmd_reduce(args: argparse.Namespace, settings: Settings) -> Outcome:
    cfg = settings.precision()
    with cfg.workdps():
        tau = parse_tau(args.tau)
    digits = _digits(settings)
    if isinstance(tau, SiegelPoint1):
        r1 = reduce1(tau, cfg)
        return Outcome(
            {"point": _point_json(r1.point, digits), "transformation": list(r1.transformation.flat()), "steps": r1.steps},
            "SL2(Z) reduction, closed-left walls",
        )
    candidates = load_candidate_set(settings.candidate_set) if settings.candidate_set else None
    r2 = reduce2(tau, cfg, candidates)
    return Outcome(
        {"point": _point_json(r2.point, digits), "transformation": list(r2.transformation.flat()), "steps": r2.steps},
        "Minkowski, translation and determinant conditions",
    )


def _configure_identities(p: argparse.ArgumentParser) -> None:
    p.add_argument("--suite", action="append", choices=sorted(SUITES), help="run only this suite (repeatable)")


def cmd_identities(args: argparse.Namespace, settings: Settings) -> Outcome:
    cfg = settings.precision()
    results = run_suites(cfg, args.suite)
    failed = [r.name for r in results if not r.passed]
    value: JSONValue = [
        {"name": r.name, "max_residual": r.max_residual, "threshold": r.threshold, "passed": r.passed}
        for r in results
    ]
    return Outcome(
        value,
        "Igusa relation, splitting, boundary, Delta routes, invariance, reduction",
        max(r.max_residual for r in results),
        EXIT_VERIFICATION if failed else EXIT_OK,
    )


def _configure_fourier(p: argparse.ArgumentParser) -> None:
    p.add_argument("form", help="E4, E6, CHI10 or CHI12")
    for name in ("n", "l", "m"):
        p.add_argument(name, type=int)
    p.add_argument("--grid", type=int, default=8, help="torus grid size (even, default: 8)")


def cmd_fourier(args: argparse.Namespace, settings: Settings) -> Outcome:
    cfg = settings.precision()
    form = FormSpec.parse(args.form, 2)
    triples = _triples(settings) if form.name == "E6" else None
    value = fourier_coefficient(form, (args.n, args.l, args.m), cfg, grid=args.grid, triples=triples)
    nearest = int(mp.nint(value.real))
    return Outcome(
        {"coefficient": complex_json(value, _digits(settings)), "nearest_integer": nearest},
        f"discrete torus quadrature on a {args.grid}^3 grid",
        float(abs(value - nearest)),
    )


def _configure_integrate(p: argparse.ArgumentParser) -> None:
    p.add_argument("integrand", help="'one', E4 or E6 (log of the Petersson norm)")


def cmd_integrate(args: argparse.Namespace, settings: Settings) -> Outcome:
    icfg = settings.integration()
    if args.integrand.lower() == "one":
        integrand = constant_integrand(1.0)
    else:
        integrand = log_norm_integrand(FormSpec.parse(args.integrand, 1), settings.precision())
    result = integrate_A1(integrand, icfg)
    return Outcome(
        {
            "integrand": integrand.name,
            "value": result.value,
            "tail_contribution": result.tail_contribution,
            "singular_contribution_bound": result.singular_contribution_bound,
            "evaluations": result.evaluations,
        },
        f"{icfg.mode} quadrature over the truncated fundamental domain plus closed-form cusp tail",
        result.error_estimate,
    )


def _configure_rohrlich(p: argparse.ArgumentParser) -> None:
    p.add_argument("form", help="E4 or E6")


def cmd_rohrlich(args: argparse.Namespace, settings: Settings) -> Outcome:
    value = rohrlich_rhs(FormSpec.parse(args.form, 1), settings.precision())
    return Outcome(
        mp.nstr(value, _digits(settings)),
        "-k(zeta(-1)/2 + zeta'(-1)) - (1/12) sum ord log||Delta||",
    )


def _configure_fiber(p: argparse.ArgumentParser) -> None:
    p.add_argument("--prime", type=int, required=True, help="odd prime up to 101")
    p.add_argument("--reconstruct", action="store_true", help="use numerically reconstructed E6_y and chi12_y")


def cmd_fiber(args: argparse.Namespace, settings: Settings) -> Outcome:
    check_prime(args.prime)
    cfg = settings.precision()
    triples = _triples(settings)
    if args.reconstruct:
        system = default_system(
            triples=triples,
            e6=load_or_reconstruct(FiberTarget.E6_Y, cfg, settings.polynomial_dir, triples),
            chi12=load_or_reconstruct(FiberTarget.CHI12_Y, cfg, settings.polynomial_dir, triples),
        )
    else:
        system = default_system(triples=triples)
    solutions = enumerate_solutions(args.prime, system)
    for point in solutions:
        print(point.line(), file=sys.stderr)
    discrepancy = compare_with_stated(args.prime, solutions)
    return Outcome(
        {
            "solutions": [str(point) for point in solutions],
            "stated": [str(point) for point in stated_solutions(args.prime)],
            "discrepancy": discrepancy.to_json() if discrepancy else None,
        },
        "exhaustive scan of P^4(F_p) with early exit on the quartic",
    )


def _configure_volume(p: argparse.ArgumentParser) -> None:
    p.add_argument("--weight", type=int, default=None, help="also report k^4 times the constant")
    p.add_argument("--check-b", action="store_true", help="cross-check (B) by quadrature")


def cmd_volume(args: argparse.Namespace, settings: Settings) -> Outcome:
    cfg = settings.precision()
    report = assemble(cfg)
    value = report.to_json()
    exit_code = EXIT_OK
    error: float | None = None
    if args.weight is not None:
        value["weight_scaled"] = weight_scaled(report, args.weight).as_dict()  # type: ignore[assignment]
    if args.check_b:
        numeric = term_B_numeric(cfg, settings.integration())
        error = abs(numeric.total - float(numeric_value(term_B(), cfg)))
        value["term_B_numeric"] = {
            "humbert": numeric.humbert,
            "i_fiber": numeric.i_fiber,
            "point": numeric.point,
            "total": numeric.total,
            "difference": error,
        }
        if error > TERM_B_TOLERANCE:
            exit_code = EXIT_VERIFICATION
    return Outcome(value, "((A) + (B)) / (10*6*4*12)", error, exit_code)


def _configure_calibrate(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", type=Path, default=None, metavar="PATH", help="where to write the sign table")


def cmd_calibrate(args: argparse.Namespace, settings: Settings) -> Outcome:
    system = calibrate_e6_signs(settings.precision())
    target = args.output or settings.sign_table
    if target is not None:
        save_sign_table(target, system)
    return Outcome(
        {
            "triples": len(system.triples),
            "candidates_scanned": system.candidates_scanned,
            "passing_assignments": system.passing_assignments,
            "written_to": str(target) if target else None,
        },
        "orbit propagation under the generators plus diagonal splitting",
    )


COMMANDS: tuple[Command, ...] = (
    Command("eval", "evaluate a modular form", _configure_eval, cmd_eval),
    Command("reduce", "reduce a point to the fundamental domain", _configure_reduce, cmd_reduce),
    Command("identities", "run the numerical identity suites", _configure_identities, cmd_identities),
    Command("fourier", "Fourier coefficient of a degree 2 form", _configure_fourier, cmd_fourier),
    Command("integrate", "integrate over the fundamental domain", _configure_integrate, cmd_integrate),
    Command("rohrlich", "closed-form value of the log-norm integral", _configure_rohrlich, cmd_rohrlich),
    Command("fiber", "solutions of the modular-form system over F_p", _configure_fiber, cmd_fiber),
    Command("volume", "assemble the arithmetic volume constant", _configure_volume, cmd_volume),
    Command("calibrate", "derive and store the E6 sign table", _configure_calibrate, cmd_calibrate),
)


def build_parser() -> ArgumentParser:
    ap = ArgumentParser(prog="siegel-volume", description="Siegel modular forms and the arithmetic volume of A2")
    ap.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    ap.add_argument(
        "--settings",
        type=Path,
        default=DEFAULT_SETTINGS_PATH,
        metavar="PATH",
        help=f"settings file (default: {DEFAULT_SETTINGS_PATH})",
    )
    ap.add_argument("--digits", type=int, default=None, help="working precision in decimal digits")
    ap.add_argument("--tolerance", type=float, default=None, help="quadrature target tolerance")
    ap.add_argument("--cusp-cutoff", type=float, default=None, dest="cusp_cutoff")
    ap.add_argument("--mode", choices=("adaptive", "monte_carlo"), default=None)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--samples", type=int, default=None, help="Monte Carlo sample count")
    ap.add_argument(
        "--json-out", type=Path, default=None, dest="json_out", metavar="PATH", help="also write the report to PATH"
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.configure(sub.add_parser(command.name, help=command.help))
    return ap


def _apply_overrides(settings: Settings, args: argparse.Namespace) -> Settings:
    mapping = {
        "digits": "working_digits",
        "tolerance": "quadrature_tolerance",
        "cusp_cutoff": "cusp_cutoff",
        "mode": "mode",
        "seed": "rng_seed",
        "samples": "monte_carlo_samples",
    }
    overrides = {key: getattr(args, flag) for flag, key in mapping.items() if getattr(args, flag) is not None}
    return replace(settings, **overrides)  # type: ignore[arg-type]


def run(argv: Sequence[str] | None = None) -> tuple[int, JSONObject | None]:
    """Parse ``argv``, run the subcommand and return (exit code, report)."""

    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=(logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)],
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    settings = _apply_overrides(load_settings(args.settings), args)
    handler = next(c.handler for c in COMMANDS if c.name == args.command)
    try:
        outcome = handler(args, settings)
    except DomainError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    except VerificationError as exc:
        print(f"VERIFICATION FAILED: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION, None
    except SiegelVolumeError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION, None
    report: JSONObject = {
        "value": outcome.value,
        "error_estimate": outcome.error_estimate,
        "provenance": {"command": args.command, "version": __version__, "formula": outcome.formula},
        "config": settings.as_json(),
    }
    if args.json_out is not None:
        storage.atomic_write_json(args.json_out, report)
    return outcome.exit_code, report


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point for the siegel-volume command."""

    code, report = run(argv)
    if report is not None:
        print(json.dumps(report, indent=2))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
