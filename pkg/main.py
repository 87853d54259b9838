"""
Sequential measurement-based quantum computing: simulator and verifier.

Main entry point. Standard output carries JSON lines (one report or result per
line); progress and the human summary go to standard error.

Exit codes: 0 every report passed, 1 a check failed or errored, 2 usage or
input error.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

import numpy as np

from algorithms.compilation import wire_unitary
from algorithms.cv_equivalence import CvEquivalenceVerifier
from algorithms.protocol_checks import ProtocolVerifier, random_qubit_state
from core.entities import EntanglingMode, Report
from core.errors import SeqMbqcError
from core.graph import is_unweighted, leaf_pairs
from simulation.gaussian import gaussian_graph_state, nullifier_variances
from simulation.qudit import QuditState, equal_up_to_phase, plus_state, state_from_vector
from simulation.sequential import WireEngine, outcome_branches, run_wire
from simulation.suite_runner import SUITE_NAMES, VerificationRunner
from utils.config import load_config
from utils.graph_io import load_graph
from utils.reporting import ReportTracker, to_jsonable, json_line_writer

logger = logging.getLogger("seqmbqc")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

INPUT_STATES = {
    '0': [1, 0],
    '1': [0, 1],
    '+': [1, 1],
    '-': [1, -1],
    '+i': [1, 1j],
    '-i': [1, -1j],
}


class UsageError(Exception):
    """Malformed command-line input (exit code 2)"""


def parse_float_list(text: str, name: str) -> List[float]:
    """Comma-separated floats; an empty string is the empty list"""
    text = text.strip()
    if not text:
        return []
    try:
        values = [float(part) for part in text.split(',')]
    except ValueError:
        raise UsageError(f"--{name} must be a comma-separated list of numbers, got {text!r}") from None
    if not all(np.isfinite(values)):
        raise UsageError(f"--{name} values must be finite, got {text!r}")
    return values


def setup_logging(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s",
        stream=sys.stderr,
        force=True,
    )


def emit(data: dict):
    """One JSON line on standard output"""
    sys.stdout.write(json.dumps(to_jsonable(data), sort_keys=True) + "\n")
    sys.stdout.flush()


def state_to_json(state: QuditState) -> List[List[float]]:
    return [[round(float(a.real), 12), round(float(a.imag), 12)] for a in state.amps]


def make_tracker(args) -> ReportTracker:
    tracker = ReportTracker(include_timing=args.timing)
    tracker.register_callback(json_line_writer(sys.stdout, args.timing))
    return tracker


def finish(tracker: ReportTracker, args) -> int:
    summary = tracker.get_summary()
    logger.info("=" * 60)
    logger.info("%s %d reports: %s", "✓" if tracker.all_passed else "✗",
                summary['total'], summary['status'])
    if args.output:
        tracker.export_to_json(args.output)
        logger.info("✓ Report document written to %s", args.output)
    return EXIT_OK if tracker.all_passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_verify(args, config: dict) -> int:
    """Run one verification suite"""
    if args.max_n is not None and args.max_n < 2:
        raise UsageError(f"--max-n must be at least 2, got {args.max_n}")
    if args.random is not None and args.random < 0:
        raise UsageError(f"--random must be non-negative, got {args.random}")
    if args.d is not None and args.d < 2:
        raise UsageError(f"--d must be at least 2, got {args.d}")

    tracker = make_tracker(args)
    runner = VerificationRunner(
        config, tracker, seed=args.seed, max_n=args.max_n, random_count=args.random,
        dimensions=[args.d] if args.d is not None else None,
    )
    runner.run(args.suite)
    return finish(tracker, args)


def _wire_input(args, rng: np.random.Generator) -> QuditState:
    if args.input == 'random':
        return random_qubit_state(rng)
    return state_from_vector(INPUT_STATES[args.input])


def cmd_wire(args, config: dict) -> int:
    """Quantum-wire demo: per-branch logical states and the branch-determinism residual"""
    thetas = parse_float_list(args.angles, 'angles')
    rng = np.random.default_rng(args.seed)
    input_state = _wire_input(args, rng)
    tol = config['tolerances']['state_residual']
    expected = state_from_vector(wire_unitary(thetas) @ input_state.amps)

    if args.branches == 'all':
        branch_list = [list(b) for b in outcome_branches(len(thetas))]
    else:
        branch_list = [None]

    tracker = make_tracker(args)
    first = None
    determinism = oracle = 0.0
    for outcomes in branch_list:
        engine = WireEngine(input_state, rng=rng)
        logical, trace = run_wire(engine, thetas, outcomes)
        first = logical if first is None else first
        determinism = max(determinism, equal_up_to_phase(logical, first)[1])
        oracle = max(oracle, equal_up_to_phase(logical, expected)[1])
        emit({'branch': trace.outcomes, 'logical_state': state_to_json(logical),
              'frame': list(engine.frame.to_tuple()), 'trace': trace.to_dict()})

    tracker.record(Report.from_residual(
        'wire', max(determinism, oracle), tol,
        {'input': args.input, 'thetas': thetas, 'branches': len(branch_list),
         'determinism_residual': determinism, 'oracle_residual': oracle},
    ))
    return finish(tracker, args)


def cmd_block2d(args, config: dict) -> int:
    """Two-memory entangling demo: direct CZ or bus-mediated with per-branch residuals"""
    rng = np.random.default_rng(args.seed)
    joint = plus_state(2, 2) if args.input == 'plus' else random_qubit_state(rng, 2)
    tol = config['tolerances']
    protocol = ProtocolVerifier(tol['state_residual'], tol['exact_identity'], rng)

    tracker = make_tracker(args)
    if EntanglingMode(args.mode) is EntanglingMode.DIRECT:
        tracker.record(protocol.verify_direct(joint))
    elif args.branches == 'all':
        for outcome in (0, 1):
            tracker.record(protocol.verify_bus_branch(joint, outcome))
        tracker.record(protocol.verify_bus_direct(joint))
    else:
        tracker.record(protocol.verify_bus_branch(joint))
    return finish(tracker, args)


def cmd_cv(args, config: dict) -> int:
    """Nullifier variances per squeezing value and the CV swap residuals of the graph"""
    zetas = parse_float_list(args.zeta, 'zeta')
    if any(z < 0 for z in zetas):
        raise UsageError(f"--zeta values must be >= 0, got {zetas}")
    g = load_graph(args.graph)
    if g.modulus is not None:
        raise UsageError(f"CV graphs must have \"modulus\": null, got {g.modulus}")

    tol = config['tolerances']['state_residual']
    tracker = make_tracker(args)
    for zeta in zetas:
        state = gaussian_graph_state(g, zeta)
        variances = nullifier_variances(state, g)
        expected = float(np.exp(-2 * zeta) / 2)
        emit({'zeta': zeta, 'variances': [float(v) for v in variances], 'expected': expected})
        # rounding in the variances scales with the anti-squeezed entries of V
        scale = max(1.0, float(np.abs(state.V).max(initial=0.0)))
        tracker.record(Report.from_residual(
            'cv_variance', float(np.max(np.abs(variances - expected), initial=0.0)), tol * scale,
            {'n': g.n, 'zeta': zeta},
        ))

    cv = CvEquivalenceVerifier(tol, config['tolerances']['exact_identity'])
    tracker.record(cv.verify_eq4_identity())
    if is_unweighted(g):
        for m, r in leaf_pairs(g):
            tracker.record(cv.verify_eq2(g, m, r))
    return finish(tracker, args)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', default=None, help="YAML configuration file (default: config.yaml if present)")
    common.add_argument('--seed', type=int, default=None, help="random seed (default: simulation.random_seed)")
    common.add_argument('--verbose', action='store_true', help="per-case debug logging")
    common.add_argument('--timing', action='store_true', help="include wall times in the JSON output")
    common.add_argument('--output', default=None, help="also write a JSON summary document to this file")

    parser = argparse.ArgumentParser(
        prog='seqmbqc', description="Sequential MBQC simulator and verification harness")
    sub = parser.add_subparsers(dest='command', required=True)

    verify = sub.add_parser('verify', parents=[common], help="run a verification suite")
    verify.add_argument('suite', choices=SUITE_NAMES)
    verify.add_argument('--max-n', type=int, default=None, help="largest exhaustive vertex count")
    verify.add_argument('--random', type=int, default=None, help="number of seeded random cases")
    verify.add_argument('--d', type=int, default=None, help="qudit dimension (qudit suite)")
    verify.set_defaults(handler=cmd_verify)

    wire = sub.add_parser('wire', parents=[common], help="quantum-wire demo")
    wire.add_argument('--input', choices=list(INPUT_STATES) + ['random'], default='0',
                      help="logical input; use --input=-i for values starting with '-'")
    wire.add_argument('--angles', default='', help="comma-separated radians, e.g. --angles=0,-0.5")
    wire.add_argument('--branches', choices=['all', 'sample'], default='all')
    wire.set_defaults(handler=cmd_wire)

    block2d = sub.add_parser('block2d', parents=[common], help="two-memory entangling demo")
    block2d.add_argument('--mode', choices=[m.value for m in EntanglingMode], default='bus')
    block2d.add_argument('--branches', choices=['all', 'sample'], default='all')
    block2d.add_argument('--input', choices=['plus', 'random'], default='plus')
    block2d.set_defaults(handler=cmd_block2d)

    cv = sub.add_parser('cv', parents=[common], help="CV nullifier diagnostics for a graph file")
    cv.add_argument('--graph', required=True, help="graph JSON file with \"modulus\": null")
    cv.add_argument('--zeta', default='0,1,2', help="comma-separated squeezing values")
    cv.set_defaults(handler=cmd_cv)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)

    try:
        config = load_config(args.config)
        if args.seed is None:
            args.seed = int(config['simulation']['random_seed'])
        return args.handler(args, config)
    except (UsageError, SeqMbqcError, OSError, ValueError) as e:
        logger.error("✗ %s", e)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
