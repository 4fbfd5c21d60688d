"""Command-line interface: build, analyze, crossover and simulate."""

import argparse
import logging
import sys
from collections import Counter
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from .analytics.crossover import (
    DEFAULT_SCAN_CAP,
    Comparison,
    candidate_sizes,
    comparison_exponents,
    cost_ratio,
    min_n_adaptive_wins,
    threshold_table,
)
from .analytics.formulas import (
    WVariant,
    ghz_exponents,
    hybrid_circuit_exponents,
    w_approx_acceptance,
    w_exponents,
)
from .analytics.reports import (
    DiscrepancyReport,
    compare_exponents,
    format_trace,
    hybrid_published_report,
    oracle_exponents,
    published_55_reports,
    w_composition_report,
)
from .analytics.runtime import runtime_estimate
from .models.circuit import Circuit, decompose_controlled_1q
from .models.error_model import (
    DeviceCalibration,
    ExponentVector,
    SuccessTerms,
    evaluate,
    terms_from_calibration,
)
from .protocols.ghz import (
    ADAPTIVE,
    ALL_TO_ALL,
    LINEAR,
    GhzFamily,
    GhzVariant,
    build_ghz,
    hybrid_all,
    hybrid_linear,
)
from .protocols.subroutines import build_fanout, build_mu_state, build_or_reduction, build_parity
from .protocols.w_state import build_w_approx_postselect, build_w_nonadaptive
from .simulation.histogram import BY_BITSTRING, BY_HAMMING, ShotHistogram
from .simulation.ideal import DEFAULT_MAX_QUBITS, StatevectorSimulator
from .simulation.noisy import WorstCaseMonteCarlo
from .simulation.postselect import PARITY_FLAG, postselect_parity
from .visualization.charts import Visualization

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_ERROR = 2

BUILD_PROTOCOLS = ("ghz", "w", "w-approx", "fanout", "parity", "mu", "or-reduction")
SIMULATE_PROTOCOLS = ("ghz", "w", "w-approx", "fanout", "parity")

# table rows, formula/oracle checks, informational reports
AnalysisResult = Tuple[List[Dict[str, object]], List[DiscrepancyReport], List[DiscrepancyReport]]


def _probability(value: float) -> str:
    return f"{value:.2e}"


def _microseconds(value_ns: Optional[float]) -> str:
    return "-" if value_ns is None or pd.isna(value_ns) else f"{value_ns / 1000:.2f} us"


def _load_terms(args: argparse.Namespace) -> Tuple[Optional[DeviceCalibration], Optional[SuccessTerms]]:
    calibration = DeviceCalibration.from_json(args.cal) if args.cal else None
    if calibration is None:
        return None, None
    terms = terms_from_calibration(calibration)
    if getattr(args, "assume_easy", False):
        terms = terms.assume_easy()
    return calibration, terms


def _build_circuit(protocol: str, args: argparse.Namespace) -> Circuit:
    n = args.n
    if n is None:
        raise ValueError(f"{protocol} needs --n")
    if protocol == "ghz":
        return build_ghz(n, GhzVariant.parse(args.variant, args.k))
    if protocol == "w":
        return build_w_nonadaptive(n)
    if protocol == "w-approx":
        return build_w_approx_postselect(n)
    if protocol == "fanout":
        return build_fanout(n)
    if protocol == "parity":
        return build_parity(n)
    if protocol == "mu":
        if args.index is None:
            raise ValueError("mu needs --index")
        return build_mu_state(args.index, n)
    if protocol == "or-reduction":
        return build_or_reduction(n)
    raise ValueError(f"Unknown protocol {protocol!r}")


def _with_input(circuit: Circuit, bits: Optional[str]) -> Circuit:
    """Prefix X gates preparing ``bits`` on the data register."""
    if not bits:
        return circuit
    data = circuit.data_qubits
    if len(bits) != len(data) or set(bits) - {"0", "1"}:
        raise ValueError(f"--input must be a bitstring of length {len(data)}")
    prepared = Circuit(circuit.num_qubits, name=circuit.name)
    for qubit, bit in zip(data, bits):
        if bit == "1":
            prepared.x(qubit)
    return prepared.compose(circuit)


# build


def cmd_build(args: argparse.Namespace) -> int:
    circuit = _build_circuit(args.protocol, args)
    if args.decompose:
        circuit = decompose_controlled_1q(circuit)
    summary = ", ".join(f"{kind} {count}" for kind, count in sorted(circuit.gate_counts().items()))
    text = circuit.to_text()
    if args.emit:
        Path(args.emit).write_text(text)
        print(f"{circuit.name}: {circuit.num_qubits} qubits, {circuit.num_clbits} clbits; {summary}")
        print(f"wrote {args.emit}")
    else:
        sys.stdout.write(text)
        print(f"{circuit.name}: {circuit.num_qubits} qubits; {summary}", file=sys.stderr)
    return EXIT_OK


# analyze


def _exponent_row(
    protocol: str, label: str, source: str, n: int, exponents: ExponentVector
) -> Dict[str, object]:
    row: Dict[str, object] = {"protocol": protocol, "variant": label, "source": source, "n": n}
    row.update({name: str(value) for name, value in exponents.as_dict().items()})
    return row


def _print_table(rows: List[Dict[str, object]]) -> None:
    frame = pd.DataFrame(rows)
    shown = frame.copy()
    shown["probability"] = shown["probability"].map(_probability)
    shown["runtime"] = shown["runtime_ns"].map(_microseconds)
    print(shown.drop(columns=["protocol", "runtime_ns"]).to_string(index=False))


def _report(reports: Sequence[DiscrepancyReport], heading: str) -> None:
    if reports:
        print(heading)
        for report in reports:
            print(f"  {report.to_text()}".replace("\n", "\n  "))


def _analyze_ghz(
    args: argparse.Namespace, calibration: DeviceCalibration, terms: SuccessTerms
) -> AnalysisResult:
    n = args.n
    variants: List[GhzVariant] = [ALL_TO_ALL, LINEAR, ADAPTIVE]
    if args.k is not None:
        variants += [hybrid_all(args.k), hybrid_linear(args.k)]
    rows: List[Dict[str, object]] = []
    checks: List[DiscrepancyReport] = []
    notes: List[DiscrepancyReport] = []
    for variant in variants:
        formula = ghz_exponents(n, variant)
        observed, layered = oracle_exponents(build_ghz(n, variant), max_parallel_2q=args.max_parallel_2q)
        runtime = runtime_estimate(layered, calibration, args.t_classical_ns)
        for source, exponents in (("formula", formula), ("oracle", observed)):
            row = _exponent_row("ghz", str(variant), source, n, exponents)
            row["probability"] = evaluate(exponents, terms)
            row["runtime_ns"] = runtime if source == "oracle" else None
            rows.append(row)
        if variant.is_hybrid:
            expected = hybrid_circuit_exponents(n, variant)
            checks.append(compare_exponents(f"ghz {variant} n={n}", expected, observed, format_trace(layered)))
            notes.append(hybrid_published_report(n, variant))
        else:
            checks.append(compare_exponents(f"ghz {variant} n={n}", formula, observed, format_trace(layered)))
    if n == 55:
        notes.extend(published_55_reports())
    return rows, checks, notes


def _analyze_w(
    args: argparse.Namespace, calibration: DeviceCalibration, terms: SuccessTerms
) -> AnalysisResult:
    n = args.n
    rows: List[Dict[str, object]] = []
    formula = w_exponents(n, WVariant.NONADAPTIVE)
    observed, layered = oracle_exponents(build_w_nonadaptive(n), max_parallel_2q=args.max_parallel_2q)
    runtime = runtime_estimate(layered, calibration, args.t_classical_ns)
    for source, exponents in (("formula", formula), ("oracle", observed)):
        row = _exponent_row("w", WVariant.NONADAPTIVE.value, source, n, exponents)
        row["probability"] = evaluate(exponents, terms)
        row["runtime_ns"] = runtime if source == "oracle" else None
        rows.append(row)
    checks = [compare_exponents(f"w nonadaptive n={n}", formula, observed, format_trace(layered))]
    notes: List[DiscrepancyReport] = []
    if n & (n - 1) == 0:
        for variant in (WVariant.ADAPTIVE_EXACT, WVariant.ADAPTIVE_APPROX):
            exponents = w_exponents(n, variant)
            row = _exponent_row("w", variant.value, "formula", n, exponents)
            row["probability"] = evaluate(exponents, terms)
            row["runtime_ns"] = None
            rows.append(row)
        notes.append(w_composition_report(n))
    else:
        logger.info("n=%d is not a power of two; adaptive W formulas skipped", n)
    return rows, checks, notes


def cmd_analyze(args: argparse.Namespace) -> int:
    calibration, terms = _load_terms(args)
    if calibration is None or terms is None:
        raise ValueError("analyze needs --cal")
    if args.protocol == "ghz":
        rows, checks, notes = _analyze_ghz(args, calibration, terms)
    else:
        rows, checks, notes = _analyze_w(args, calibration, terms)

    print(f"{args.protocol} n={args.n} on {calibration.name}" + (" (easy assumptions)" if args.assume_easy else ""))
    _print_table(rows)
    if args.protocol == "w":
        probabilities = {(r["variant"], r["source"]): float(r["probability"]) for r in rows}  # type: ignore[arg-type]
        baseline = probabilities[(WVariant.NONADAPTIVE.value, "formula")]
        for variant in (WVariant.ADAPTIVE_EXACT, WVariant.ADAPTIVE_APPROX):
            key = (variant.value, "formula")
            if key in probabilities and baseline > 0:
                print(f"{variant.value} / nonadaptive = {probabilities[key] / baseline:.3g}")
    _report(checks, "formula vs oracle:")
    _report(notes, "published vs derived (informational):")

    if args.csv:
        frame = pd.DataFrame(rows)
        frame.to_csv(args.csv, index=False)
        print(f"wrote {args.csv}")

    mismatched = [report for report in checks if not report.matches]
    if mismatched and args.max_parallel_2q is not None:
        logger.warning("Closed forms assume unbounded parallelism; mismatches under --max-parallel-2q are expected")
        return EXIT_OK
    if mismatched and not args.report_only:
        return EXIT_MISMATCH
    return EXIT_OK


# crossover


def _crossover_sizes(comparison: Comparison, args: argparse.Namespace) -> List[int]:
    if args.n is not None:
        return [args.n]
    low = args.n_min if args.n_min is not None else (4 if comparison is Comparison.W_STATE else 2)
    return [n for n in candidate_sizes(comparison, args.k, args.n_max) if n >= low]


def _crossover_terms(args: argparse.Namespace) -> Optional[SuccessTerms]:
    if args.cal:
        return terms_from_calibration(DeviceCalibration.from_json(args.cal))
    if (args.pd is None) != (args.pid is None):
        raise ValueError("--pd and --pid must be given together")
    if args.pd is None:
        return None
    return SuccessTerms(p_d=args.pd, p_id=args.pid)


def cmd_crossover(args: argparse.Namespace) -> int:
    comparison = Comparison(args.comparison)
    if comparison.needs_k and args.k is None:
        raise ValueError("Hybrid comparisons require --k")
    terms = _crossover_terms(args)
    if args.success_plot and terms is None:
        raise ValueError("--success-plot needs --cal or --pd/--pid")
    ratio = cost_ratio(terms) if terms is not None else None
    table = threshold_table(comparison, _crossover_sizes(comparison, args), args.k)

    print(f"{'n':>6}  {'threshold':>12}" + ("  adaptive wins" if ratio is not None else ""))
    for n, threshold in table:
        line = f"{n:>6}  {threshold:>12.4f}"
        if ratio is not None:
            line += f"  {'yes' if ratio <= threshold else 'no'}"
        print(line)

    if terms is not None and ratio is not None:
        print(f"ln(p_d)/ln(p_id) = {ratio:.4f}")
        winner = min_n_adaptive_wins(terms, comparison, args.k, args.cap)
        print(f"min n = {winner}" if winner is not None else f"min n: none <= {args.cap}")
    if args.plot:
        Visualization().create_crossover_chart(
            table, ratio, title=f"Crossover threshold ({comparison.value})", save_path=args.plot
        )
    if args.success_plot:
        sizes = [n for n, _ in table]
        pairs = [comparison_exponents(n, comparison, args.k) for n in sizes]
        Visualization().create_success_chart(
            sizes,
            [
                ("adaptive", [evaluate(adaptive, terms) for adaptive, _ in pairs]),
                ("non-adaptive", [evaluate(baseline, terms) for _, baseline in pairs]),
            ],
            title=f"Worst-case success ({comparison.value})",
            save_path=args.success_plot,
        )
    return EXIT_OK


# simulate


def _simulate_circuit(args: argparse.Namespace) -> Tuple[str, Circuit]:
    if args.circuit:
        circuit = Circuit.from_text(Path(args.circuit).read_text())
        return "circuit", circuit
    if args.protocol is None:
        raise ValueError("simulate needs a protocol or --circuit")
    circuit = _build_circuit(args.protocol, args)
    if args.protocol in ("fanout", "parity"):
        circuit = _with_input(circuit, args.input)
    return args.protocol, circuit


def _write_histogram(histogram: ShotHistogram, args: argparse.Namespace, title: str) -> None:
    print(histogram.to_frame(args.by).to_string(index=False))
    if args.csv:
        histogram.to_csv(args.csv, by=args.by)
        print(f"wrote {args.csv}")
    if args.svg:
        Visualization().create_hamming_histogram(histogram, title=title, by=args.by, save_path=args.svg)
        print(f"wrote {args.svg}")


def cmd_simulate(args: argparse.Namespace) -> int:
    protocol, circuit = _simulate_circuit(args)
    postselect = (PARITY_FLAG, 1) if PARITY_FLAG in circuit.flags else None
    calibration, terms = _load_terms(args)
    if args.ideal or terms is None:
        simulator = StatevectorSimulator(max_qubits=args.max_qubits)
        histogram = simulator.run_sampled(circuit, args.shots, seed=args.seed, postselect=postselect)
        print(f"{circuit.name}: {args.shots} noiseless shots (seed {args.seed})")
        if postselect is not None:
            exact = postselect_parity(len(circuit.data_qubits), simulator, circuit)
            sigma = (exact.acceptance * (1 - exact.acceptance) / args.shots) ** 0.5
            print(
                f"acceptance {histogram.acceptance_rate:.4f} vs exact {exact.acceptance:.4f} "
                f"+/- {3 * sigma:.4f} (3 sigma); fidelity given acceptance {exact.fidelity:.6f}"
            )
            if protocol == "w-approx":
                logger.info("Closed-form acceptance %.6f", w_approx_acceptance(args.n))
        _write_histogram(histogram, args, f"{circuit.name} (noiseless)")
        return EXIT_OK

    assert calibration is not None
    engine = WorstCaseMonteCarlo(
        circuit,
        terms,
        max_qubits=args.max_qubits,
        track_state=not args.events_only,
        log_events=args.log_events,
        max_parallel_2q=args.max_parallel_2q,
        postselect=postselect,
    )
    report = engine.run_comprehensive_simulation(args.shots, seed=args.seed)
    low = max(0.0, report.predicted_success - 3 * report.sigma)
    high = min(1.0, report.predicted_success + 3 * report.sigma)
    print(f"{circuit.name}: {args.shots} shots on {calibration.name} (seed {args.seed})")
    print(
        f"clean fraction {report.clean_fraction:.4f}; predicted {report.predicted_success:.4f} "
        f"[{low:.4f}, {high:.4f}] at 3 sigma ({'within' if report.within_sigma() else 'outside'})"
    )
    if report.event_log is not None:
        kinds = Counter(site.kind for events in report.event_log for site in events)
        print("error events: " + (", ".join(f"{kind} {count}" for kind, count in sorted(kinds.items())) or "none"))
    if report.histogram is not None:
        if postselect is not None:
            print(f"acceptance {report.histogram.acceptance_rate:.4f}")
        _write_histogram(report.histogram, args, f"{circuit.name} on {calibration.name}")
    elif args.csv or args.svg:
        logger.warning("No histogram without state tracking; --csv/--svg ignored")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adaptiveprep",
        description="Adaptive vs non-adaptive GHZ and W state preparation under a worst-case error model",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="INFO logging, DEBUG when repeated")
    commands = parser.add_subparsers(dest="command", required=True)

    build = commands.add_parser("build", help="Build a circuit and write it in the text format")
    build.add_argument("protocol", choices=BUILD_PROTOCOLS)
    build.add_argument("--n", type=int, required=True, help="Number of data qubits")
    build.add_argument("--variant", default="linear", choices=[f.value for f in GhzFamily])
    build.add_argument("--k", type=int, help="Block count of hybrid GHZ variants")
    build.add_argument("--index", type=int, help="mu-state index k (1..ceil(log2(n+1)))")
    build.add_argument("--decompose", action="store_true", help="Decompose controlled rotations")
    build.add_argument("--emit", help="Output path (stdout if omitted)")
    build.set_defaults(handler=cmd_build)

    analyze = commands.add_parser("analyze", help="Formula and oracle exponents, probabilities and runtimes")
    analyze.add_argument("protocol", choices=("ghz", "w"))
    analyze.add_argument("--n", type=int, required=True)
    analyze.add_argument("--cal", required=True, help="Calibration JSON")
    analyze.add_argument("--k", type=int, help="Also analyze hybrid variants with k blocks")
    analyze.add_argument("--csv", help="Write the table as CSV")
    analyze.add_argument("--assume-easy", action="store_true", help="p_s = p_is = 1, p_m = p_d, p_im = p_ic = p_id")
    analyze.add_argument("--max-parallel-2q", type=int, help="Cap on CNOTs per layer")
    analyze.add_argument("--t-classical-ns", type=float, help="Classical layer duration (default t_meas)")
    analyze.add_argument("--report-only", action="store_true", help="Report mismatches without failing")
    analyze.set_defaults(handler=cmd_analyze)

    crossover = commands.add_parser("crossover", help="Adaptive crossover thresholds")
    crossover.add_argument("comparison", choices=[c.value for c in Comparison])
    crossover.add_argument("--n", type=int, help="Single size")
    crossover.add_argument("--n-min", type=int, help="Smallest size of the table")
    crossover.add_argument("--n-max", type=int, default=64, help="Largest size of the table")
    crossover.add_argument("--k", type=int, help="Block count for hybrid comparisons")
    crossover.add_argument("--cal", help="Calibration JSON")
    crossover.add_argument("--pd", type=float, help="CNOT success probability")
    crossover.add_argument("--pid", type=float, help="CNOT-layer idle success probability")
    crossover.add_argument("--cap", type=int, default=DEFAULT_SCAN_CAP, help="Largest n scanned for the minimum")
    crossover.add_argument("--plot", help="Save a threshold chart (PNG/SVG)")
    crossover.add_argument("--success-plot", help="Save a success-probability chart (PNG/SVG)")
    crossover.set_defaults(handler=cmd_crossover)

    simulate = commands.add_parser("simulate", help="Noiseless or worst-case noisy simulation")
    simulate.add_argument("protocol", nargs="?", choices=SIMULATE_PROTOCOLS)
    simulate.add_argument("--circuit", help="Circuit text file written by build --emit")
    simulate.add_argument("--n", type=int)
    simulate.add_argument("--variant", default="linear", choices=[f.value for f in GhzFamily])
    simulate.add_argument("--k", type=int)
    simulate.add_argument("--input", help="Basis input bitstring for fanout/parity")
    simulate.add_argument("--cal", help="Calibration JSON (noiseless without it)")
    simulate.add_argument("--assume-easy", action="store_true")
    simulate.add_argument("--ideal", action="store_true", help="Noiseless even with --cal")
    simulate.add_argument("--shots", type=int, default=4096)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--csv", help="Write the histogram as CSV")
    simulate.add_argument("--svg", help="Save a histogram chart")
    simulate.add_argument("--by", choices=(BY_BITSTRING, BY_HAMMING), default=BY_BITSTRING)
    simulate.add_argument("--max-qubits", type=int, default=DEFAULT_MAX_QUBITS)
    simulate.add_argument("--max-parallel-2q", type=int)
    simulate.add_argument("--events-only", action="store_true", help="Sample error events without the statevector")
    simulate.add_argument("--log-events", action="store_true", help="Summarize error events by kind")
    simulate.set_defaults(handler=cmd_simulate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
