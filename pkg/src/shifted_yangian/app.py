"""
Command-line front end for the shifted Yangian toolkit.
"""

import argparse
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

import pandas as pd

from . import __version__
from .algebra.cartan import build_cartan
from .algebra.lweight import LWeight, in_monoid_D, parse_lweight
from .algebra.parsing import FamilySpec, parse_family_specs, parse_linrat
from .algebra.ratfun import LinRat
from .characters.factorize import factor_families, reassemble, standard_factorize
from .characters.qchar import (
    QCharacter,
    jordan_holder_sl2,
    qc_closed_form,
    qc_product,
    qc_simple_sl2,
)
from .core.config import Config
from .core.exceptions import ParseError, ShiftedYangianError
from .core.logger import configure_root_logger
from .core.report import CheckReport
from .intertwiners.rmatrix import (
    check_baxter_operator,
    check_tq_relation,
    fundamental_position,
    rhat_findim,
    rhat_fund_negative,
)
from .intertwiners.truncation import (
    TruncatablePair,
    check_difference_equation,
    fund_ratios,
    sbar_map,
    truncation_check,
)
from .modules.analysis import cocyclicity_check, verify_relations
from .modules.families import make_explicit, negative_prefundamental
from .modules.realization import ModuleRealization
from .modules.tensor import tensor_Y0
from .modules.verma import make_simple, make_verma, make_weyl
from .utils.interpolation import sample_points
from .utils.security import resolve_output_path
from .utils.serialization import SCHEMA_VERSION, dump_json, render_fraction

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

COMMANDS = ("factorize", "qchar", "jh", "rmatrix", "verify", "truncate", "sbar")


@dataclass
class RunConfig:
    """Validated settings of one command-line run."""

    subcommand: str
    depth: int = 8
    series_order: int = 16
    sample_seed: int = 0
    output: Optional[str] = None
    format: str = "json"

    def __post_init__(self) -> None:
        if self.subcommand not in COMMANDS:
            raise ValueError(f"Unknown subcommand {self.subcommand!r}")
        if self.depth < 1:
            raise ValueError(f"--depth must be at least 1, got {self.depth}")
        if self.series_order < self.depth:
            raise ValueError(
                f"--order ({self.series_order}) must be at least --depth ({self.depth})"
            )
        if self.sample_seed < 0:
            raise ValueError(f"--seed must be nonnegative, got {self.sample_seed}")
        if self.format not in ("json", "text"):
            raise ValueError(f"--format must be json or text, got {self.format!r}")


@dataclass
class CommandResult:
    """Payload of a subcommand with its verification status and text tables."""

    result: Any
    passed: bool = True
    frames: Optional[Dict[str, pd.DataFrame]] = None


def _module_from_spec(spec: FamilySpec, depth: int) -> ModuleRealization:
    if spec.name in ("Simple", "Verma"):
        e = parse_linrat(spec.args[0])
        return make_simple(e, depth) if spec.name == "Simple" else make_verma(e, depth)
    if spec.name == "Weyl":
        if len(spec.args) != 2:
            raise ParseError(f"Weyl takes (r; s), got {len(spec.args)} argument(s)")
        return make_weyl(parse_linrat(spec.args[0]), parse_linrat(spec.args[1]), depth)
    counts = {"Lplus": 1, "N": 1, "Lminus": 1, "FrakL": 2, "L": 2, "Lba": 2, "KR": 2}
    if spec.name not in counts:
        raise ParseError(f"Unknown module family {spec.name!r}")
    return make_explicit(spec.name, spec.rationals(counts[spec.name]), depth)


def build_module(text: str, depth: int) -> ModuleRealization:
    """A realization from a spec; ``A*B`` is the Y(sl₂) tensor of finite factors.

    Raises:
        ParseError: On a malformed spec.
        RealizationError: If a tensor factor is shifted or infinite-dimensional.
    """
    specs = parse_family_specs(text)
    modules = [_module_from_spec(spec, depth) for spec in specs]
    result = modules[0]
    for module in modules[1:]:
        result = tensor_Y0(result, module)
    return result


def build_qcharacter(text: str, depth: int) -> QCharacter:
    """Product of closed-form q-characters; ``Simple(e)`` uses the standard factorization.

    Raises:
        ParseError: On a malformed spec.
        RealizationError: For families without a closed form.
    """
    factors = []
    for spec in parse_family_specs(text):
        if spec.name == "Simple":
            factors.append(qc_simple_sl2(parse_linrat(spec.args[0]), depth))
            continue
        factors.append(qc_closed_form(spec.name, spec.rationals(len(spec.args)), depth))
    return qc_product(factors)


def _report_frame(reports: List[CheckReport]) -> pd.DataFrame:
    rows = [
        {
            "check": r.name,
            "passed": r.passed,
            "checks": r.checks,
            "first violation": r.violations[0] if r.violations else "",
        }
        for r in reports
    ]
    return pd.DataFrame(rows, columns=["check", "passed", "checks", "first violation"])


def _reports_result(
    reports: List[CheckReport], extra: Optional[Dict[str, Any]] = None
) -> CommandResult:
    for report in reports:
        report.log_summary(logger)
    payload: Dict[str, Any] = {"reports": [r.to_dict() for r in reports]}
    payload.update(extra or {})
    return CommandResult(
        payload, all(r.passed for r in reports), {"reports": _report_frame(reports)}
    )


class Application:
    """Runs one subcommand and renders its report document."""

    def __init__(self, run: RunConfig, config: Optional[Config] = None):
        self.run_config = run
        self.config = config or Config()
        self.logger = logging.getLogger(__name__)
        self._handlers: Dict[str, Callable[[argparse.Namespace], CommandResult]] = {
            "factorize": self.factorize,
            "qchar": self.qchar,
            "jh": self.jh,
            "rmatrix": self.rmatrix,
            "verify": self.verify,
            "truncate": self.truncate,
            "sbar": self.sbar,
        }

    @property
    def depth(self) -> int:
        return self.run_config.depth

    @property
    def order(self) -> int:
        return self.run_config.series_order

    def samples(self, count: int, avoid: Optional[set] = None) -> List[Fraction]:
        """Deterministic sample points; the seed only moves their starting point."""
        return sample_points(count, avoid, start=self.run_config.sample_seed)

    def factorize(self, args: argparse.Namespace) -> CommandResult:
        e = parse_linrat(args.lweight)
        self.logger.info(f"🔎 Factorizing {e}")
        factorization = standard_factorize(e)
        roundtrip = reassemble(factorization) == e
        payload = {
            "lweight": str(e),
            **factorization.to_dict(),
            "factors": [
                {"family": name, "params": list(params)}
                for name, params in factor_families(factorization)
            ],
            "roundtrip": roundtrip,
        }
        parts = [("positive", str(x)) for x in factorization.positive]
        parts += [("kr_pair", f"({y}, {z})") for y, z in factorization.kr_pairs]
        parts += [("negative", str(w)) for w in factorization.negative]
        frame = pd.DataFrame(parts, columns=["part", "value"])
        return CommandResult(payload, roundtrip, {"factorization": frame})

    def qchar(self, args: argparse.Namespace) -> CommandResult:
        qc = build_qcharacter(args.qc, self.depth)
        self.logger.info(f"📐 q-character with {len(qc.terms):,} terms up to depth {self.depth}")
        return CommandResult(qc.to_dict(), True, {"qcharacter": qc.to_frame()})

    def jh(self, args: argparse.Namespace) -> CommandResult:
        qc = build_qcharacter(args.qc, self.depth)
        result = jordan_holder_sl2(qc)
        self.logger.info(f"🧩 {len(result.classes)} composition factor class(es)")
        return CommandResult(result.to_dict(), True, {"classes": result.to_frame()})

    def rmatrix(self, args: argparse.Namespace) -> CommandResult:
        left = build_module(args.left, self.depth)
        right = build_module(args.right, self.depth)
        self.logger.info(f"🔁 R-matrix of {left.name} and {right.name}")
        if right.max_level is not None:
            R = rhat_findim(left, right, start=self.run_config.sample_seed)
            poles = R.poles()
            reports = []
            for z in self.samples(3, poles):
                report = CheckReport(f"Ř({z}) is a module morphism")
                report.record(R.is_morphism_at(z), f"intertwining equations fail at u = {z}")
                reports.append(report)
            return _reports_result(
                reports,
                {"rmatrix": R.to_dict(), "poles": sorted(render_fraction(p) for p in poles)},
            )

        c = fundamental_position(left)
        fundamental = rhat_fund_negative(None, right)
        points = [Fraction(args.at)] if args.at is not None else self.samples(2)
        reports = [fundamental.at(a + c).spot_check() for a in points]
        emitted = fundamental.at(Fraction(args.at) + c) if args.at is not None else fundamental
        return _reports_result(
            reports, {"rmatrix": emitted.to_dict(), "left_position": render_fraction(c)}
        )

    def verify(self, args: argparse.Namespace) -> CommandResult:
        module = build_module(args.module, self.depth)
        n_max = args.nmax if args.nmax is not None else self.config.compute.n_max
        self.logger.info(f"🧪 Verifying {module.name} up to mode {n_max}")
        reports = [verify_relations(module, n_max)]
        if args.cocyclic:
            reports.append(cocyclicity_check(module, n_max))
        if args.baxter:
            reports.append(check_baxter_operator(module, n_max))
        if args.tq:
            reports.append(check_tq_relation([(1, Fraction(0))], module))
        return _reports_result(reports, {"module": module.name, "shift": module.shift})

    def truncate(self, args: argparse.Namespace) -> CommandResult:
        s = parse_linrat(args.s)
        r = parse_linrat(args.r) if args.r else None
        if r is None and s.degree == 1:
            W = negative_prefundamental(s.zeros()[0], self.depth)
        else:
            W = make_weyl(r or LinRat.one(), s, self.depth)
        self.logger.info(f"✂️  Truncation of {W.name} to order {self.order}")
        reports = [truncation_check(s, W, self.order, r=r)]
        if r is None:
            pair = TruncatablePair.sl2(W.shift, s.shift(1))
            reports.append(check_difference_equation(pair, W, self.order))
        return _reports_result(reports, {"module": W.name})

    def sbar(self, args: argparse.Namespace) -> CommandResult:
        cd = build_cartan(args.type)
        s = parse_lweight(cd, args.s)
        if not in_monoid_D(s):
            raise ParseError(f"s = {s} must have polynomial components")
        sbar, g = sbar_map(cd, fund_ratios(args.type), s)
        shift = _detect_shift(s, sbar)
        self.logger.info(f"🔀 s̄ = {sbar}")
        payload = {
            "type": args.type,
            "s": s.to_dict(),
            "sbar": sbar.to_dict(),
            "g": {str(i): str(p) for i, p in g.items()},
            "sbar_polynomial": in_monoid_D(sbar),
            "tau_shift": None if shift is None else render_fraction(shift),
        }
        rows = [
            {"node": i, "s": str(s.component(i)), "sbar": str(sbar.component(i)), "g": str(g[i])}
            for i in cd.nodes
        ]
        return CommandResult(payload, True, {"sbar": pd.DataFrame(rows)})

    def execute(self, args: argparse.Namespace) -> Tuple[int, str]:
        """Run the subcommand and return the exit status with the rendered document."""
        command = self.run_config.subcommand
        try:
            outcome = self._handlers[command](args)
        except ParseError as e:
            self.logger.error(f"❌ {e}\n   💡 Check the syntax of the {command} arguments.")
            return EXIT_USAGE, ""
        except ShiftedYangianError as e:
            self.logger.error(
                f"❌ {command} failed: {e}\n   💡 Increase --depth or pick other parameters."
            )
            document = {
                "sch": SCHEMA_VERSION,
                "command": command,
                "status": "error",
                "error": str(e),
            }
            return EXIT_FAILED, dump_json(document, self.config.output.indent)

        status = "ok" if outcome.passed else "failed"
        if self.run_config.format == "text":
            sections = [
                f"# {name}\n{frame.to_string(index=False)}"
                for name, frame in (outcome.frames or {}).items()
            ]
            rendered = f"{command}: {status}\n" + "\n\n".join(sections) + "\n"
        else:
            document = {
                "sch": SCHEMA_VERSION,
                "command": command,
                "status": status,
                "result": outcome.result,
            }
            rendered = dump_json(document, self.config.output.indent)
        return (EXIT_OK if outcome.passed else EXIT_FAILED), rendered

    def write(self, rendered: str) -> None:
        """Print the document or write it below the base directory."""
        if not self.run_config.output:
            sys.stdout.write(rendered)
            return
        path = resolve_output_path(self.config.base_dir, self.run_config.output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(rendered, encoding="utf-8")
        self.logger.info(f"💾 Wrote {path}")


def _detect_shift(s: LWeight, sbar: LWeight) -> Optional[Fraction]:
    """c with s̄ = τ_c(s), when there is one."""
    for i in s.cartan.nodes:
        zeros, shifted = s.component(i).zeros(), sbar.component(i).zeros()
        if zeros and shifted:
            c = shifted[0] - zeros[0]
            return c if s.spectral_shift(c) == sbar else None
    return Fraction(0) if s == sbar else None


def _build_parser() -> argparse.ArgumentParser:
    """Build the command-line argument parser."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--depth", type=int, default=None, help="Depth window (default from settings)"
    )
    common.add_argument("--order", type=int, default=None, help="Laurent series order")
    common.add_argument("--seed", type=int, default=None, help="First sample point")
    common.add_argument("--format", choices=["json", "text"], default=None)
    common.add_argument("--output", "--emit", dest="output", default=None, help="Report file")
    common.add_argument("--settings", default=None, help="YAML settings file")
    common.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level")

    parser = argparse.ArgumentParser(
        prog="shifted-yangian",
        description="Exact computations with representations of shifted Yangians.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "factorize", parents=[common], help="Standard factorization of an ℓ-weight"
    )
    p.add_argument("lweight", help='e.g. "(u-3)(u-9)(u-5)/((u-6)*u*(u-2))"')

    p = sub.add_parser("qchar", parents=[common], help="q-character of a module spec")
    p.add_argument("--qc", required=True, help='e.g. "Lba(9,0)*Lba(3,2)"')

    p = sub.add_parser("jh", parents=[common], help="Jordan–Hölder classes of a q-character")
    p.add_argument("--qc", required=True)

    p = sub.add_parser("rmatrix", parents=[common], help="R-matrix of two modules")
    p.add_argument("--left", required=True, help='e.g. "N(0)"')
    p.add_argument("--right", required=True, help='e.g. "Lminus(0)"')
    p.add_argument("--at", type=Fraction, default=None, help="Spectral parameter")

    p = sub.add_parser("verify", parents=[common], help="Check defining relations on a module")
    p.add_argument("--module", required=True)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--cocyclic", action="store_true", help="Also check cocyclicity")
    p.add_argument("--baxter", action="store_true", help="Also check the Baxter operator")
    p.add_argument("--tq", action="store_true", help="Also check the TQ relation")

    p = sub.add_parser("truncate", parents=[common], help="Truncation checks on L(s⁻¹)")
    p.add_argument("--s", required=True, help='e.g. "(u-1)(u-4)"')
    p.add_argument("--r", default=None, help="One-dimensional twist")

    p = sub.add_parser("sbar", parents=[common], help="The map s ↦ s̄")
    p.add_argument("--type", required=True, help="A1, B2 or G2")
    p.add_argument("--s", required=True, help='e.g. "Psi(1,0)*Psi(2,3)"')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point for the command line.

    Args:
        argv: Optional command-line arguments; defaults to ``sys.argv[1:]``.

    Returns:
        Exit code: 0 on success, 1 on a failed verification or domain error,
        2 on usage errors
    """
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # --help and --version exit cleanly
        return EXIT_OK if not e.code else EXIT_USAGE

    try:
        config = Config.from_yaml(args.settings) if args.settings else Config()
        compute = config.compute
        run = RunConfig(
            subcommand=args.command,
            depth=args.depth if args.depth is not None else compute.depth,
            series_order=(
                args.order
                if args.order is not None
                else max(compute.series_order, args.depth or 0)
            ),
            sample_seed=args.seed if args.seed is not None else compute.sample_seed,
            output=args.output,
            format=args.format or config.output.format,
        )
    except (OSError, ValueError) as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE

    level = (
        logging.DEBUG
        if args.verbose
        else getattr(logging, config.logging.level, logging.INFO)
    )
    configure_root_logger(
        level=level, log_dir=config.log_dir, log_filename=config.logging.filename
    )

    app = Application(run, config)
    status, rendered = app.execute(args)
    if rendered:
        try:
            app.write(rendered)
        except (OSError, ValueError) as e:
            logger.error(f"❌ Could not write the report: {e}")
            return EXIT_FAILED
    return status


if __name__ == "__main__":
    sys.exit(main())
