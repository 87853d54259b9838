"""
Verification suite runner: dispatches a suite name to its case generator,
evaluates every case and streams one report per case to the tracker.
"""

import logging
import time
from collections import defaultdict
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np
from scipy.stats import unitary_group

from algorithms.cv_equivalence import CvEquivalenceVerifier
from algorithms.lu_equivalence import LuEquivalenceVerifier
from algorithms.protocol_checks import ProtocolVerifier, random_qubit_state
from core.entities import Report
from core.graph import (WeightedGraph, max_weight_difference, permute, swap_by_lc,
                        transposition)
from simulation.gaussian import gaussian_graph_state, nullifier_variances
from utils.graph_families import (graphs_with_leaf, random_graph_with_leaf,
                                  random_rational, random_weighted_graph)
from utils.reporting import ReportTracker, aggregate_reports

logger = logging.getLogger(__name__)


class Suite(Enum):
    SWAP = "swap"
    EQ1 = "eq1"
    EQ2 = "eq2"
    EQ3 = "eq3"
    EQ4 = "eq4"
    QUDIT = "qudit"
    PROTOCOL = "protocol"
    FIG4 = "fig4"
    CV_SQUEEZE = "cv-squeeze"


SUITE_NAMES = [s.value for s in Suite]


class VerificationRunner:
    """Run verification suites and feed their reports to a tracker"""

    def __init__(self, config: dict, tracker: ReportTracker, seed: Optional[int] = None,
                 max_n: Optional[int] = None, random_count: Optional[int] = None,
                 dimensions: Optional[Sequence[int]] = None):
        """
        Args:
            config: Loaded configuration (see utils.config)
            tracker: Receives every case report
            seed: Base seed; each suite draws from its own generator seeded with it
            max_n: Override for the exhaustive vertex bound of the suite
            random_count: Override for the number of seeded random cases
            dimensions: Qudit dimensions for the qudit suite
        """
        self.config = config
        self.tracker = tracker
        self.seed = config['simulation']['random_seed'] if seed is None else seed
        self.max_n = max_n
        self.random_count = random_count
        self.dimensions = dimensions

        tol = config['tolerances']
        self.exact_tol = tol['exact_identity']
        self.state_tol = tol['state_residual']
        self.purity_tol = tol['purity']

        self._handlers: Dict[Suite, Callable[[np.random.Generator], None]] = {
            Suite.SWAP: self._run_swap,
            Suite.EQ1: self._run_eq1,
            Suite.EQ2: self._run_eq2,
            Suite.EQ3: self._run_eq3,
            Suite.EQ4: self._run_eq4,
            Suite.QUDIT: self._run_qudit,
            Suite.PROTOCOL: self._run_protocol,
            Suite.FIG4: self._run_fig4,
            Suite.CV_SQUEEZE: self._run_cv_squeeze,
        }

    def run(self, suite) -> bool:
        """Run one suite; True iff every report it produced passed"""
        suite = Suite(suite)
        start = len(self.tracker.reports)
        logger.info("Running suite '%s' (seed %d)", suite.value, self.seed)
        self._handlers[suite](np.random.default_rng(self.seed))
        reports = self.tracker.reports[start:]
        passed = all(r.passed for r in reports)
        logger.info("%s suite '%s': %d/%d reports passed", "✓" if passed else "✗",
                    suite.value, sum(r.passed for r in reports), len(reports))
        return passed

    # ------------------------------------------------------------------
    # Helpers
    # ------------------------------------------------------------------

    def _suite_config(self, name: str) -> dict:
        return self.config['suites'][name]

    def _max_n(self, name: str) -> int:
        return self.max_n if self.max_n is not None else self._suite_config(name)['max_n']

    def _random_count(self, name: str, key: str = 'random_count') -> int:
        return self.random_count if self.random_count is not None else self._suite_config(name)[key]

    def _case(self, check: str, fn: Callable[..., Report], *args, params: Optional[dict] = None) -> Report:
        """Evaluate one case; exceptions become error reports"""
        started = time.perf_counter()
        try:
            report = fn(*args)
        except Exception as e:
            logger.debug("case %s raised %r", check, e)
            report = Report.from_error(check, e, self.state_tol, params)
        report.wall_time = time.perf_counter() - started
        return report

    def _record_cases(self, check: str, reports: Iterable[Report],
                      params: Optional[dict] = None) -> List[Report]:
        """Stream each case report (family params and a case index merged in), then log the family"""
        recorded = []
        for index, report in enumerate(reports):
            report.params = {**(params or {}), 'case': index, **report.params}
            self.tracker.record(report)
            recorded.append(report)
        if recorded:
            family = aggregate_reports(check, recorded, params)
            logger.info("%s %s %s: %d cases, max residual %.3e", "✓" if family.passed else "✗",
                        check, params or {}, len(recorded), family.max_residual)
        return recorded

    def _random_leaf_cases(self, name: str, rng: np.random.Generator, modulus: Optional[int]):
        sizes = self._suite_config(name)['random_sizes']
        by_size = defaultdict(list)
        for i in range(self._random_count(name)):
            n = sizes[i % len(sizes)]
            by_size[n].append(random_graph_with_leaf(n, rng, modulus))
        return sorted(by_size.items())

    # ------------------------------------------------------------------
    # Suites
    # ------------------------------------------------------------------

    def _swap_case(self, g: WeightedGraph, m: int, r: int) -> Report:
        residual = max_weight_difference(swap_by_lc(g, m, r), permute(g, transposition(g.n, m, r)))
        return Report.from_residual('swap', residual, self.exact_tol, {'n': g.n, 'm': m, 'r': r})

    def _run_swap(self, rng: np.random.Generator):
        for n in range(2, self._max_n('swap') + 1):
            self._record_cases('swap', (
                self._case('swap', self._swap_case, g, m, r)
                for g, m, r in graphs_with_leaf(n, 2, all_pairs=True)
            ), {'n': n, 'mode': 'exhaustive'})
        for n, cases in self._random_leaf_cases('swap', rng, 2):
            self._record_cases('swap', (self._case('swap', self._swap_case, *case) for case in cases),
                               {'n': n, 'mode': 'random', 'seed': self.seed})

    def _run_eq1(self, rng: np.random.Generator):
        lu = LuEquivalenceVerifier(self.state_tol, self.exact_tol, rng)
        for n in range(2, self._max_n('eq1') + 1):
            self._record_cases('eq1', (
                self._case('eq1', lu.verify_eq1, g, m, r) for g, m, r in graphs_with_leaf(n, 2)
            ), {'n': n, 'mode': 'exhaustive'})
        for n, cases in self._random_leaf_cases('eq1', rng, 2):
            self._record_cases('eq1', (self._case('eq1', lu.verify_eq1, *case) for case in cases),
                               {'n': n, 'mode': 'random', 'seed': self.seed})

    def _run_eq2(self, rng: np.random.Generator):
        cv = CvEquivalenceVerifier(self.state_tol, self.exact_tol)
        for n in range(2, self._max_n('eq2') + 1):
            self._record_cases('eq2', (
                self._case('eq2', cv.verify_eq2, g, m, r) for g, m, r in graphs_with_leaf(n, None)
            ), {'n': n, 'mode': 'exhaustive'})
        for n, cases in self._random_leaf_cases('eq2', rng, None):
            self._record_cases('eq2', (self._case('eq2', cv.verify_eq2, *case) for case in cases),
                               {'n': n, 'mode': 'random', 'seed': self.seed})
        self._run_cv_lc(cv, rng)

    def _run_cv_lc(self, cv: CvEquivalenceVerifier, rng: np.random.Generator):
        """Random real-weighted graphs: the unit-weight rule and the weighted rule"""
        cfg = self._suite_config('cv_lc')
        count = self.random_count if self.random_count is not None else cfg['random_count']
        unit_cases, weighted_cases = [], []
        for _ in range(count):
            n = int(rng.integers(2, cfg['max_modes'] + 1))
            j = int(rng.integers(n))
            sign = int(rng.choice([-1, 1]))
            g = random_weighted_graph(n, rng, unit_vertex=j)
            unit_cases.append(self._case('cv_lc', cv.verify_lc_property, g, j, sign))
            h = random_weighted_graph(n, rng)
            delta = random_rational(rng)
            weighted_cases.append(self._case('cv_weighted_lc', cv.verify_weighted_lc_property, h, j, delta))
        self._record_cases('cv_lc', unit_cases, {'max_modes': cfg['max_modes'], 'seed': self.seed})
        self._record_cases('cv_weighted_lc', weighted_cases, {'max_modes': cfg['max_modes'], 'seed': self.seed})

    def _run_eq3(self, rng: np.random.Generator):
        lu = LuEquivalenceVerifier(self.state_tol, self.exact_tol, rng)
        self.tracker.record(self._case('eq3', lu.verify_eq3_identity))

    def _run_eq4(self, rng: np.random.Generator):
        cv = CvEquivalenceVerifier(self.state_tol, self.exact_tol)
        self.tracker.record(self._case('eq4', cv.verify_eq4_identity))

    def _run_qudit(self, rng: np.random.Generator):
        """Per dimension: every qualifying graph must pass, with the same first variant"""
        lu = LuEquivalenceVerifier(self.state_tol, self.exact_tol, rng)
        dimensions = self.dimensions or self._suite_config('qudit')['dimensions']
        max_n = self._max_n('qudit')
        for d in dimensions:
            reports = self._record_cases('qudit', (
                self._case('qudit', lu.verify_qudit_swap, g, m, r, d)
                for n in range(2, max_n + 1) for g, m, r in graphs_with_leaf(n, d)
            ), {'d': d})
            variants = sorted({r.params.get('first_passing') for r in reports if r.passed})
            common = set.intersection(*(set(r.params.get('passing', [])) for r in reports)) if reports else set()
            consistent = len(variants) == 1
            summary = Report.from_residual('qudit_variant', 0.0 if consistent else 1.0, self.exact_tol, {
                'd': d, 'max_n': max_n, 'cases': len(reports),
                'variant': variants[0] if consistent else None,
                'first_passing_variants': variants,
                'common_variants': sorted(common),
            })
            if not consistent:
                summary.message = f"passing variant differs across graphs: {variants}"
            self.tracker.record(summary)

    def _run_protocol(self, rng: np.random.Generator):
        cfg = self._suite_config('protocol')
        protocol = ProtocolVerifier(self.state_tol, self.exact_tol, rng)
        schedules = self._random_count('protocol', 'schedules')

        wire_reports: List[Report] = []
        compile_reports: List[Report] = []
        for _ in range(schedules):
            k = int(rng.integers(0, cfg['max_cycles'] + 1))
            thetas = [float(t) for t in rng.uniform(0, 2 * np.pi, size=k)]
            wire_reports.append(self._case('wire', protocol.verify_wire_schedule,
                                           thetas, random_qubit_state(rng)))
            target = unitary_group.rvs(2, random_state=rng)
            compile_reports.append(self._case('compile', protocol.verify_compiled_unitary,
                                              target, random_qubit_state(rng)))
        self._record_cases('wire', wire_reports, {'max_cycles': cfg['max_cycles'], 'seed': self.seed})
        self._record_cases('compile', compile_reports, {'seed': self.seed})

        basis_reports = [
            self._case('basis_redefinition', protocol.verify_basis_redefinition,
                       float(rng.uniform(0, 2 * np.pi)), random_qubit_state(rng))
            for _ in range(cfg['basis_trials'])
        ]
        self._record_cases('basis_redefinition', basis_reports, {'seed': self.seed})

    def _run_fig4(self, rng: np.random.Generator):
        protocol = ProtocolVerifier(self.state_tol, self.exact_tol, rng)
        self.tracker.record(self._case('fig4', protocol.verify_fig4_lu_equivalence))
        count = self._random_count('fig4', 'random_inputs')
        self._record_cases('bus_direct', [
            self._case('bus_direct', protocol.verify_bus_direct, random_qubit_state(rng, 2))
            for _ in range(count)
        ], {'seed': self.seed})

    def _squeeze_case(self, g: WeightedGraph, zeta: float) -> Report:
        gs = gaussian_graph_state(g, zeta)
        expected = np.exp(-2 * zeta) / 2
        variance_residual = float(np.max(np.abs(nullifier_variances(gs, g) - expected)))
        purity_residual = abs(float(np.linalg.det(2 * gs.V)) - 1.0)
        residual = variance_residual if purity_residual < self.purity_tol else float('inf')
        return Report.from_residual('cv_squeeze', residual, self.state_tol,
                                    {'n': g.n, 'zeta': zeta, 'purity_residual': purity_residual})

    def _monotone_case(self, g: WeightedGraph, zetas: Sequence[float]) -> Report:
        """Nullifier variances strictly decrease along increasing zeta"""
        ordered = sorted(zetas)
        variances = [nullifier_variances(gaussian_graph_state(g, z), g) for z in ordered]
        monotone = all(np.all(b < a) for a, b in zip(variances, variances[1:]))
        return Report.from_residual('cv_squeeze_monotone', 0.0 if monotone else 1.0, self.exact_tol,
                                    {'n': g.n, 'zetas': ordered})

    def _run_cv_squeeze(self, rng: np.random.Generator):
        cfg = self._suite_config('cv_squeeze')
        count = self._random_count('cv_squeeze', 'graphs')
        graphs = [random_weighted_graph(int(rng.integers(1, cfg['max_modes'] + 1)), rng)
                  for _ in range(count)]
        for zeta in cfg['zetas']:
            self._record_cases('cv_squeeze', [
                self._case('cv_squeeze', self._squeeze_case, g, float(zeta)) for g in graphs
            ], {'zeta': float(zeta), 'seed': self.seed})
        self._record_cases('cv_squeeze_monotone', [
            self._case('cv_squeeze_monotone', self._monotone_case, g, cfg['zetas']) for g in graphs
        ], {'seed': self.seed})
