"""
Twisted Verlinde Workbench
Main entry point - orchestrates dataset loading, character theory, twisted
extraction, the Verlinde formulas, oracle sweeps and gauge tests
"""

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from characters import (CharacterError, CharacterTable, NumericSettings, characters_from_S,
                        characters_numeric, codegree_spherical_check, match_tables,
                        verify_character_orthogonality, verify_idempotents)
from cyclotomic import ArithmeticSettings, CyclotomicError, configure, get_settings, zeta
from dataset_manager import (DEFAULT_DATASETS_DIR, Dataset, DatasetError, DatasetManager,
                             UnknownDatasetError)
from fusion_core import (FusionDataError, validate_based_module, validate_based_ring,
                         validate_graded_datum)
from reports import CheckResult, Report, Status
from twisted import (BridgeError, TwistedCharacterError, crossed_S_bridge,
                     extract_twisted_characters, extract_twisted_characters_numeric,
                     fixed_characters, verify_crossed_unitarity, verify_integrality_ratios,
                     verify_twisted_characters)
from verlinde import (VerlindeError, build_twisted_fusion_algebra, rescale_rows,
                      table_frame, twisted_fusion_coeff_chars, twisted_fusion_coeff_spherical,
                      verify_frobenius_star, verlinde_classical, verlinde_module_chars,
                      verlinde_module_spherical)

DEFAULT_CONFIG = os.path.join(os.path.dirname(os.path.abspath(__file__)), "verlinde_config.json")
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

DOMAIN_ERRORS = (CyclotomicError, FusionDataError, CharacterError, TwistedCharacterError,
                 BridgeError, VerlindeError, DatasetError)

THEOREMS = ('1', '1p', '2', '2p', 'classical')
NUMERIC_THEOREMS = ('1p', '2p')   # the others have no floating-point backend


@dataclass(frozen=True)
class WorkbenchSettings:
    """Report and sweep options"""
    include_timings: bool = False
    max_witnesses: int = 20
    gauge_rounds: int = 3
    datasets_dir: Optional[str] = None


class DatasetSession:
    """Derived data for one dataset, computed on first use"""

    def __init__(self, dataset: Dataset, numeric: NumericSettings):
        self.dataset = dataset
        self.numeric = numeric

    @property
    def spherical(self):
        if self.dataset.spherical is None:
            raise CharacterError(f"{self.dataset.name} carries no spherical data")
        return self.dataset.spherical

    @cached_property
    def exact_table(self) -> CharacterTable:
        return characters_from_S(self.dataset.ring, self.spherical.S, self.spherical.dims_C)

    @cached_property
    def numeric_table(self) -> CharacterTable:
        return characters_numeric(self.dataset.ring, self.numeric.tolerance,
                                  self.numeric.seed, self.numeric.max_retries)

    def table(self, numeric: bool = False) -> CharacterTable:
        return self.numeric_table if numeric else self.exact_table

    def fixed(self, numeric: bool = False):
        return fixed_characters(self.table(numeric), self.dataset.F, self.dataset.module.rank,
                                self.numeric.tolerance)

    @cached_property
    def twisted_exact(self):
        return extract_twisted_characters(self.fixed(), self.dataset.dual, self.dataset.modulus,
                                          self.dataset.module)

    @cached_property
    def twisted_numeric(self):
        return extract_twisted_characters_numeric(self.fixed(numeric=True), self.dataset.dual,
                                                  self.dataset.modulus, self.dataset.module,
                                                  self.numeric.snap_tolerance)

    def twisted(self, numeric: bool = False):
        return self.twisted_numeric if numeric else self.twisted_exact

    @cached_property
    def algebra(self):
        ring = self.dataset.ring
        return build_twisted_fusion_algebra(self.spherical, self.dataset.modulus, ring.star, ring.unit)

    def label_pools(self, theorem: str) -> Tuple[Sequence[str], Sequence[str], Sequence[str]]:
        ds = self.dataset
        if theorem in ('1', '1p'):
            return ds.ring.labels, ds.module.labels, ds.module.labels
        if theorem in ('2', '2p'):
            fixed = ds.fixed_labels()
            return fixed, fixed, fixed
        if theorem == 'classical':
            return ds.ring.labels, ds.ring.labels, ds.ring.labels
        raise ValueError(f"unknown theorem {theorem!r}")

    def evaluate(self, theorem: str, triple: Tuple[str, str, str], numeric: bool = False):
        ds = self.dataset
        for label, pool in zip(triple, self.label_pools(theorem)):
            if label not in pool:
                raise VerlindeError(f"{label!r} is not a valid label here; expected one of {list(pool)}")
        if theorem == '1':
            return verlinde_module_spherical(self.spherical, triple, ds.module)
        if theorem == '1p':
            return verlinde_module_chars(self.fixed(numeric), self.twisted(numeric), triple,
                                         ds.module, ds.dual, self.numeric.snap_tolerance)
        if theorem == '2':
            return twisted_fusion_coeff_spherical(self.spherical, triple, ds.modulus)
        if theorem == '2p':
            characters = self.algebra.characters
            if numeric:
                characters = [replace(phi, values={c: v.to_complex() for c, v in phi.values.items()},
                                      codegree=phi.codegree.to_complex(), exact=False)
                              for phi in characters]
            return twisted_fusion_coeff_chars(characters, triple)
        if theorem == 'classical':
            return verlinde_classical(self.spherical, triple, ds.ring)
        raise ValueError(f"unknown theorem {theorem!r}")

    def triples(self, theorem: str) -> List[Tuple[str, str, str]]:
        first, second, third = self.label_pools(theorem)
        return [(a, b, c) for a in first for b in second for c in third]


class VerlindeWorkbench:
    """
    Orchestrates every verification module against one dataset at a time
    and assembles the results into a Report
    """

    def __init__(self, config_file: str = DEFAULT_CONFIG):
        self.logger = logging.getLogger(__name__)
        self.config_file = config_file
        self.config = self._load_config(config_file)

        configure(ArithmeticSettings.from_env(ArithmeticSettings(**self.config['arithmetic'])))
        self.numeric = NumericSettings(**self.config['characters'],
                                       snap_tolerance=self.config['verlinde']['snap_tolerance'])
        self.settings = WorkbenchSettings(
            include_timings=self.config['report']['include_timings'],
            max_witnesses=self.config['report']['max_witnesses'],
            gauge_rounds=self.config['gauge']['rounds'],
            datasets_dir=self.config.get('datasets_dir'),
        )
        self.datasets = DatasetManager(self._datasets_dir(), self.settings.max_witnesses)

    def _load_config(self, config_file: str) -> Dict:
        """Load workbench configuration"""
        try:
            with open(config_file, 'r', encoding='utf-8') as f:
                config = json.load(f)

            required_keys = ['arithmetic', 'characters', 'verlinde', 'gauge', 'report']
            for key in required_keys:
                if key not in config:
                    raise KeyError(f"Missing required config key: {key}")

            self.logger.info(f"Configuration loaded from {config_file}")
            return config

        except Exception as e:
            self.logger.error(f"Failed to load config: {e}")
            return {
                'arithmetic': {'conductor_ceiling': 1000, 'precision_digits': 30,
                               'max_precision_digits': 240},
                'characters': {'tolerance': 1e-9, 'max_retries': 8, 'seed': 0},
                'verlinde': {'snap_tolerance': 1e-6},
                'gauge': {'rounds': 3},
                'report': {'include_timings': False, 'max_witnesses': 20},
            }

    def _datasets_dir(self) -> str:
        configured = self.settings.datasets_dir
        if not configured:
            return DEFAULT_DATASETS_DIR
        if os.path.isabs(configured):
            return configured
        return os.path.join(os.path.dirname(os.path.abspath(self.config_file)), configured)

    def apply_overrides(self, precision: Optional[int] = None, conductor_ceiling: Optional[int] = None):
        """Command-line values win over environment and file"""
        settings = get_settings()
        if precision is not None:
            settings = replace(settings, precision_digits=precision,
                               max_precision_digits=max(settings.max_precision_digits, precision))
        if conductor_ceiling is not None:
            settings = replace(settings, conductor_ceiling=conductor_ceiling)
        configure(settings)

    # plumbing

    def _run(self, report: Report, name: str, check: Callable[[], CheckResult],
             mandatory: bool = True) -> CheckResult:
        """Time one check; domain errors become a failed check and the run continues"""
        start = time.perf_counter()
        try:
            result = check()
            result.name = name
        except DOMAIN_ERRORS as e:
            self.logger.error(f"{report.dataset}: {name} raised {type(e).__name__}: {e}")
            result = CheckResult(name)
            result.fail(str(e))
        result.mandatory = mandatory
        result.elapsed = time.perf_counter() - start
        return report.add(result)

    def session(self, name_or_path: str) -> DatasetSession:
        return DatasetSession(self.datasets.load(name_or_path), self.numeric)

    def _open(self, name_or_path: str) -> Tuple[Report, Optional[DatasetSession]]:
        report = Report(os.path.splitext(os.path.basename(name_or_path))[0])
        try:
            session = self.session(name_or_path)
        except UnknownDatasetError:
            raise
        except DATASET_LOAD_ERRORS as e:
            failed = CheckResult("load")
            failed.fail(str(e))
            report.add(failed)
            return report, None
        report.dataset = session.dataset.name
        report.sections['dataset'] = session.dataset.summary()
        report.add(CheckResult("load", details={'path': session.dataset.path}))
        return report, session

    # commands

    def validate(self, name_or_path: str) -> Report:
        report, session = self._open(name_or_path)
        if session is None:
            return report
        ds = session.dataset
        self._run(report, "based_ring", lambda: validate_based_ring(ds.ring, self.settings.max_witnesses))
        self._run(report, "based_module", lambda: validate_based_module(ds.module, self.settings.max_witnesses))
        self._run(report, "graded_datum", lambda: validate_graded_datum(ds.graded, self.settings.max_witnesses))
        if ds.spherical is not None:
            self._crossed_checks(report, session)
        return report

    def _crossed_checks(self, report: Report, session: DatasetSession):
        sph = session.spherical
        self._run(report, "crossed_unitarity", lambda: verify_crossed_unitarity(sph.Scross, sph.global_dim))
        self._run(report, "integrality_ratios",
                  lambda: verify_integrality_ratios(sph.Scross, sph.dims_C, sph.dims_M, sph.global_dim))

    def chars(self, name_or_path: str, mode: Optional[str] = None) -> Report:
        report, session = self._open(name_or_path)
        if session is None:
            return report
        self._character_checks(report, session, mode)
        return report

    def _character_checks(self, report: Report, session: DatasetSession, mode: Optional[str] = None):
        ds = session.dataset
        spherical = ds.spherical is not None
        mode = mode or ('exact' if spherical else 'numeric')
        if mode == 'exact':
            def exact_orthogonality():
                return verify_character_orthogonality(session.exact_table)
            self._run(report, "character_orthogonality", exact_orthogonality)
            self._run(report, "minimal_idempotents", lambda: verify_idempotents(ds.ring, session.exact_table))
            self._run(report, "codegree_spherical",
                      lambda: codegree_spherical_check(session.exact_table, session.spherical.dims_C,
                                                       session.spherical.global_dim))
            if not any(c.name == "character_orthogonality" and not c.passed for c in report.checks):
                report.sections['characters'] = _table_section(session.exact_table)
        if mode == 'numeric' or spherical:
            self._run(report, "numeric_orthogonality",
                      lambda: verify_character_orthogonality(session.numeric_table, self.numeric.tolerance))
            if spherical:
                self._run(report, "numeric_exact_coherence",
                          lambda: match_tables(session.numeric_table, session.exact_table,
                                               self.numeric.tolerance))
            if mode == 'numeric' and report.check("numeric_orthogonality").passed:
                report.sections['characters'] = _table_section(session.numeric_table)

    def twisted(self, name_or_path: str, numeric: bool = False) -> Report:
        report, session = self._open(name_or_path)
        if session is None:
            return report
        self._twisted_checks(report, session, numeric)
        return report

    def _twisted_checks(self, report: Report, session: DatasetSession, numeric: bool = False):
        ds = session.dataset
        numeric = numeric or ds.spherical is None

        def extraction():
            twisted = session.twisted(numeric)
            result = CheckResult("twisted_extraction")
            result.details['fixed'] = [t.base.label for t in twisted]
            report.sections['twisted'] = {
                t.base.label: {x: _show(v) for x, v in t.vector.items()} for t in twisted}
            return result
        self._run(report, "twisted_extraction", extraction)
        if report.check("twisted_extraction").passed and not numeric:
            self._run(report, "twisted_characters",
                      lambda: verify_twisted_characters(session.exact_table, session.twisted_exact, ds.dual))

            def bridge():
                outcome = crossed_S_bridge(session.fixed(), session.twisted_exact, ds.spherical.dims_C,
                                           ds.module.labels, ds.spherical.Scross)
                result = CheckResult("crossed_s_bridge")
                result.details['phases'] = {c: str(p) for c, p in outcome.phases.items()}
                report.sections['bridge_phases'] = result.details['phases']
                return result
            self._run(report, "crossed_s_bridge", bridge)
        if ds.spherical is not None:
            self._crossed_checks(report, session)

    def verlinde(self, name_or_path: str, theorem: str = '1',
                 triple: Optional[Tuple[str, str, str]] = None,
                 numeric: bool = False) -> Tuple[Report, object]:
        """One triple (value returned) or the full table for a theorem"""
        if numeric and theorem not in NUMERIC_THEOREMS:
            self.logger.warning(f"Theorem {theorem} has no numeric backend; evaluating exactly")
        report, session = self._open(name_or_path)
        if session is None:
            return report, None
        outcome = {}

        def evaluate():
            result = CheckResult(f"verlinde_{theorem}")
            triples = [triple] if triple else session.triples(theorem)
            values = {}
            for t in triples:
                try:
                    values[t] = session.evaluate(theorem, t, numeric)
                except (VerlindeError, CyclotomicError) as e:
                    result.fail(str(e), self.settings.max_witnesses)
            outcome['values'] = values
            result.details['triples'] = len(triples)
            if theorem in ('2', '2p'):
                result.details['gauge'] = {c: "0" for c in session.dataset.fixed_labels()}
            return result
        self._run(report, f"verlinde_{theorem}", evaluate)
        values = outcome.get('values', {})
        report.sections[f"verlinde_{theorem}"] = {",".join(t): _show(v) for t, v in values.items()}
        if triple:
            return report, values.get(tuple(triple))
        return report, values

    def oracle_compare(self, name_or_path: str) -> Report:
        report, session = self._open(name_or_path)
        if session is None:
            return report
        self._oracle_checks(report, session)
        return report

    def _sweep(self, session: DatasetSession, theorem: str, numeric: bool = False) -> CheckResult:
        result = CheckResult(f"oracle_{theorem}")
        triples = session.triples(theorem)
        for t in triples:
            try:
                session.evaluate(theorem, t, numeric)
            except (VerlindeError, CyclotomicError) as e:
                result.fail(str(e), self.settings.max_witnesses)
        result.details['triples'] = len(triples)
        return result

    def _oracle_checks(self, report: Report, session: DatasetSession):
        ds = session.dataset
        spherical = ds.spherical is not None
        if spherical:
            self._run(report, "oracle_classical", lambda: self._sweep(session, 'classical'))
            self._run(report, "oracle_1", lambda: self._sweep(session, '1'))
            self._run(report, "oracle_1p", lambda: self._sweep(session, '1p'))
        self._run(report, "oracle_1p_numeric", lambda: self._sweep(session, '1p', numeric=True),
                  mandatory=not spherical)
        if not spherical:
            return
        self._run(report, "oracle_dual_symmetry", lambda: self._dual_symmetry(session))
        self._run(report, "oracle_2_vs_2p", lambda: self._twisted_fusion_agreement(session))
        self._run(report, "twisted_algebra_ring",
                  lambda: validate_based_ring(session.algebra.ring, self.settings.max_witnesses))
        self._run(report, "frobenius_star", lambda: verify_frobenius_star(session.algebra, ds.spherical))

    def _dual_symmetry(self, session: DatasetSession) -> CheckResult:
        """a_{C,M}^N = a_{C*,M*}^{N*} through the synthesized K(M⁻¹)"""
        ds = session.dataset
        dual = ds.dual
        result = CheckResult("oracle_dual_symmetry")
        for c, m, n in session.triples('1'):
            value = ds.module.coefficient(c, m, n)
            mirrored = dual.coefficient(ds.ring.star[c], ds.module.star[m], ds.module.star[n])
            if value != mirrored:
                result.fail(f"({c},{m},{n}): {value} != {mirrored}", self.settings.max_witnesses)
        return result

    def _twisted_fusion_agreement(self, session: DatasetSession) -> CheckResult:
        result = CheckResult("oracle_2_vs_2p")
        constants = {}
        for t in session.triples('2'):
            try:
                spherical = session.evaluate('2', t)
                characters = session.evaluate('2p', t)
            except (VerlindeError, CyclotomicError) as e:
                result.fail(str(e), self.settings.max_witnesses)
                continue
            if spherical != characters:
                result.fail(f"{t}: {spherical} != {characters}", self.settings.max_witnesses)
            constants[",".join(t)] = str(spherical)
        result.details['triples'] = len(session.triples('2'))
        result.details['gauge'] = {c: "0" for c in session.dataset.fixed_labels()}
        result.details['constants'] = constants
        return result

    def gauge_test(self, name_or_path: str, seed: int = 0, rounds: Optional[int] = None) -> Report:
        report, session = self._open(name_or_path)
        if session is None:
            return report
        self._gauge_checks(report, session, seed, rounds or self.settings.gauge_rounds)
        return report

    def _gauge_checks(self, report: Report, session: DatasetSession, seed: int, rounds: int):
        ds = session.dataset
        if ds.spherical is None:
            skipped = CheckResult("gauge_invariance", status=Status.UNDECIDED, mandatory=False)
            skipped.witnesses.append("no crossed S-matrix to rescale")
            report.add(skipped)
            return

        def gauge():
            result = CheckResult("gauge_invariance")
            N = ds.modulus
            fixed = ds.fixed_labels()
            base_1 = {t: session.evaluate('1', t) for t in session.triples('1')}
            base_2 = {t: session.evaluate('2', t) for t in session.triples('2')}
            drawn = []
            for round_index in range(rounds):
                rng = np.random.default_rng([seed, round_index])
                exponents = {c: (0 if c == ds.ring.unit else int(rng.integers(0, N))) for c in fixed}
                phases = {c: zeta(N, k) for c, k in exponents.items()}
                drawn.append({c: f"{k}/{N}" for c, k in exponents.items()})
                scaled = replace(ds, spherical=ds.spherical.with_crossed(
                    rescale_rows(ds.spherical.Scross, phases, ds.ring.unit)))
                perturbed = DatasetSession(scaled, self.numeric)
                for t, value in base_1.items():
                    if perturbed.evaluate('1', t) != value:
                        result.fail(f"round {round_index}: module {t} changed", self.settings.max_witnesses)
                for (c, c2, d), value in base_2.items():
                    expected = phases[c] * phases[c2] * phases[d].conj() * value
                    if perturbed.evaluate('2', (c, c2, d)) != expected:
                        result.fail(f"round {round_index}: twisted fusion ({c},{c2},{d}) "
                                    f"does not transform by r_C r_C' conj(r_D)", self.settings.max_witnesses)
            result.details['seed'] = seed
            result.details['phases'] = drawn
            report.sections['gauge'] = {'seed': seed, 'rounds': drawn}
            return result
        self._run(report, "gauge_invariance", gauge)

    def full_report(self, name_or_path: str, seed: int = 0) -> Report:
        """Every check the workbench knows, in a fixed order"""
        report, session = self._open(name_or_path)
        if session is None:
            return report
        ds = session.dataset
        self._run(report, "based_ring", lambda: validate_based_ring(ds.ring, self.settings.max_witnesses))
        self._run(report, "based_module", lambda: validate_based_module(ds.module, self.settings.max_witnesses))
        self._run(report, "graded_datum", lambda: validate_graded_datum(ds.graded, self.settings.max_witnesses))
        self._character_checks(report, session)
        self._twisted_checks(report, session)
        self._oracle_checks(report, session)
        self._gauge_checks(report, session, seed, self.settings.gauge_rounds)
        return report


DATASET_LOAD_ERRORS = (DatasetError, CyclotomicError, FusionDataError)


def _show(value) -> str:
    if isinstance(value, complex):
        return f"{value.real:.9f}{value.imag:+.9f}j"
    return str(value)


def _table_section(table: CharacterTable) -> Dict:
    return {ch.label: {**{c: _show(ch.values[c]) for c in table.labels},
                       'codegree': _show(ch.codegree)} for ch in table.rows}


def _resolve_label(label: str, known) -> str:
    """Accept an ASCII hyphen for the minus sign used in labels"""
    label = label.strip()
    if label in known:
        return label
    alternative = label.replace('-', '−')
    return alternative if alternative in known else label


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='twisted_verlinde',
                                     description='Twisted Verlinde Workbench - exact fusion data verification')
    parser.add_argument('--config', default=DEFAULT_CONFIG, help='Configuration file to use')
    parser.add_argument('--log-file', default=None, help='Also write logs to this UTF-8 file')
    parser.add_argument('--log-level', default=None, help='Logging level (default from config)')
    parser.add_argument('--precision', type=int, default=None,
                        help='Decimal digits for Galois embeddings')
    parser.add_argument('--conductor-ceiling', type=int, default=None,
                        help='Largest conductor any operation may reach')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('validate', help='Load and validate a dataset')
    p.add_argument('dataset')

    p = sub.add_parser('chars', help='Character table checks')
    p.add_argument('dataset')
    group = p.add_mutually_exclusive_group()
    group.add_argument('--numeric', action='store_true', help='Numeric backend only')
    group.add_argument('--exact', action='store_true', help='Exact backend from the S-matrix')

    p = sub.add_parser('twisted', help='Fixed characters, twisted extraction and crossed S bridge')
    p.add_argument('dataset')
    p.add_argument('--numeric', action='store_true')

    p = sub.add_parser('verlinde', help='Evaluate a Verlinde-type formula')
    p.add_argument('dataset')
    p.add_argument('--theorem', choices=THEOREMS, default='1')
    p.add_argument('--triple', default=None, help='Comma-separated labels, e.g. e,σ+,σ−')
    p.add_argument('--numeric', action='store_true',
                   help=f"Floating-point backend, theorems {', '.join(NUMERIC_THEOREMS)} only")

    p = sub.add_parser('oracle', help='Full oracle-equivalence sweep')
    p.add_argument('dataset')

    p = sub.add_parser('gauge-test', help='Row-phase rescaling invariance')
    p.add_argument('dataset')
    p.add_argument('--seed', type=int, required=True)
    p.add_argument('--rounds', type=int, default=None)

    p = sub.add_parser('report', help='Run everything and write a machine-readable report')
    p.add_argument('dataset')
    p.add_argument('--out', default=None, help='Write the JSON report to this file')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--timings', action='store_true', help='Include timings in the JSON report')

    sub.add_parser('list', help='List bundled datasets')
    return parser


def _setup_logging(level: str, log_file: Optional[str] = None):
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file, encoding='utf-8'))
    logging.basicConfig(level=getattr(logging, level.upper(), logging.WARNING),
                        format=LOG_FORMAT, handlers=handlers, force=True)


def run_command(argv: Optional[List[str]] = None) -> int:
    """Run one CLI command; returns 0 on pass, 1 on failure, 2 on usage errors"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    level = args.log_level
    if level is None:
        try:
            with open(args.config, 'r', encoding='utf-8') as f:
                level = json.load(f).get('logging', {}).get('level', 'WARNING')
        except (OSError, json.JSONDecodeError):
            level = 'WARNING'
    _setup_logging(level, args.log_file)
    logger = logging.getLogger(__name__)

    workbench = VerlindeWorkbench(config_file=args.config)
    workbench.apply_overrides(args.precision, args.conductor_ceiling)

    try:
        if args.command == 'list':
            for name in workbench.datasets.list_bundled():
                print(name)
            return 0
        if args.command == 'validate':
            report = workbench.validate(args.dataset)
        elif args.command == 'chars':
            mode = 'numeric' if args.numeric else ('exact' if args.exact else None)
            report = workbench.chars(args.dataset, mode)
        elif args.command == 'twisted':
            report = workbench.twisted(args.dataset, args.numeric)
        elif args.command == 'verlinde':
            if args.numeric and args.theorem not in NUMERIC_THEOREMS:
                print(f"❌ --numeric applies to theorems {', '.join(NUMERIC_THEOREMS)}, "
                      f"not {args.theorem!r}", file=sys.stderr)
                return 2
            triple = None
            if args.triple:
                parts = args.triple.split(',')
                if len(parts) != 3:
                    print(f"❌ --triple needs three labels, got {args.triple!r}", file=sys.stderr)
                    return 2
                session_labels = _known_labels(workbench, args.dataset)
                triple = tuple(_resolve_label(p, session_labels) for p in parts)
            report, value = workbench.verlinde(args.dataset, args.theorem, triple, args.numeric)
            if triple is not None and report.verdict is Status.PASS:
                print(_show(value))
                return 0
            if triple is None and report.verdict is Status.PASS:
                print(table_frame(value).to_string(index=False))
        elif args.command == 'oracle':
            report = workbench.oracle_compare(args.dataset)
        elif args.command == 'gauge-test':
            report = workbench.gauge_test(args.dataset, args.seed, args.rounds)
        elif args.command == 'report':
            report = workbench.full_report(args.dataset, args.seed)
            include_timings = args.timings or workbench.settings.include_timings
            if args.out:
                with open(args.out, 'w', encoding='utf-8') as f:
                    f.write(report.to_json(include_timings))
                    f.write("\n")
                logger.info(f"Report written to {args.out}")
        else:
            parser.print_usage(sys.stderr)
            return 2
    except UnknownDatasetError as e:
        print(f"❌ {e}", file=sys.stderr)
        return 2

    print(report.render())
    return report.exit_code()


def _known_labels(workbench: VerlindeWorkbench, name_or_path: str) -> set:
    try:
        ds = workbench.datasets.load(name_or_path)
    except UnknownDatasetError:
        raise
    except DATASET_LOAD_ERRORS:
        return set()
    return set(ds.ring.labels) | set(ds.module.labels)


def main():
    """Main entry point"""
    sys.exit(run_command())


if __name__ == "__main__":
    main()
