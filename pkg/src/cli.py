#!/usr/bin/env python3
"""
Command-line interface: load .fincat files, run the checks, print a report.

Exit status 0 means every verdict holds, 1 that a check failed (the report names
it) and 2 that the input could not be read, parsed or validated.
"""

import argparse
import json
import sys
import time
from typing import Callable, Dict, List, Optional

from .config import load_config
from .dagger import dagger_violations, is_dagger_equivalence, is_indefinite, unitary_iso_classes
from .dsl import Document, parse_file, print_document
from .errors import DslError, FincatError, InconsistentResult, NotAnEquivalence, SourceTargetMismatch
from .fincat import is_equivalence
from .gens import GeneratorSpec, KINDS, PRESETS, bundle_to_document, generate, preset
from .herm import check_triangle_identities, enumerate_fixed_points, herm_completion, unitary_classes_via_transfer
from .involutive import involutive_equivalence_from_functor
from .logger import logger
from .positivity import check_Tp_biequivalence, dagger_functors_vs_fixed_points
from .report import Report

LIST_PARAMS = {'permutation', 'objects', 'elements', 'relations', 'antitone'}


def _load(args, report: Report) -> Document:
    doc, text = parse_file(args.file)
    report.add_input(args.file, text)
    return doc


def _oracle_bound(args) -> int:
    return args.oracle_bound or load_config()['oracle_bound']


def _transfer_verdict(report: Report, A, oracle_bound: int):
    try:
        classes = unitary_classes_via_transfer(A, oracle_bound=oracle_bound)
    except InconsistentResult as e:
        report.verdict('transfer_matches_unitary_classes', False, str(e))
        return None
    report.verdict('transfer_matches_unitary_classes', True)
    return classes


# -- subcommands ----------------------------------------------------------------------


def cmd_validate(args, report: Report):
    doc = _load(args, report)
    report.verdict('category_laws', True)
    if doc.daggers:
        report.verdict('dagger_axioms', True)
    if doc.involutions:
        report.verdict('anti_involution_axioms', True)
    if doc.positivities:
        report.verdict('positivity_axioms', True)
    report.witness('declarations', {
        'categories': sorted(doc.categories),
        'daggers': sorted(doc.daggers),
        'involutions': sorted(doc.involutions),
        'positivities': sorted(doc.positivities),
        'functors': sorted(doc.functors),
    })


def cmd_fixedpoints(args, report: Report):
    doc = _load(args, report)
    A = doc.anti_involutive(args.inv)
    report.verdict('anti_involution_axioms', True)
    points = enumerate_fixed_points(A)
    report.witness('fixed_points', [p.key for p in points])
    classes = _transfer_verdict(report, A, _oracle_bound(args))
    if classes is not None:
        report.witness('transfer_classes', list(classes.values()))


def cmd_herm(args, report: Report):
    doc = _load(args, report)
    A = doc.anti_involutive(args.inv)
    P = None
    if args.positivity:
        P = doc.positivity(args.positivity)
        if P.involution is not A:
            raise SourceTargetMismatch(f"positivity {args.positivity} does not live on {args.inv}")
    H = herm_completion(A, P)
    problems = dagger_violations(H.dagger)
    report.verdict('herm_is_dagger', not problems, problems[0].message if problems else None)
    indefinite = is_indefinite(H.dagger)
    if P is None:
        report.verdict('herm_is_indefinite', indefinite.indefinite, indefinite.counterexample)
    else:
        # Herm_P only keeps the positive part, which need not be indefinite
        report.witness('indefinite', indefinite.indefinite)
    _transfer_verdict(report, A, _oracle_bound(args))
    report.witness('objects', len(H.objects))
    report.witness('morphisms', H.num_morphisms())
    report.witness('unitary_classes', list(unitary_iso_classes(H.dagger).values()))


def cmd_pi0u(args, report: Report):
    doc = _load(args, report)
    D = doc.dagger(args.dagger)
    report.verdict('dagger_axioms', True)
    classes = unitary_iso_classes(D)
    report.witness('classes', list(classes.values()))
    report.witness('count', len(classes))


def cmd_indefinite(args, report: Report):
    doc = _load(args, report)
    D = doc.dagger(args.dagger)
    verdict = is_indefinite(D)
    witness = None
    if verdict.counterexample is not None:
        x, a = verdict.counterexample
        witness = {'object': x, 'a': a}
    report.verdict('indefinite', verdict.indefinite, witness)


def cmd_equiv(args, report: Report):
    doc = _load(args, report)
    F = doc.functor(args.functor)
    if args.dagger:
        D1, D2 = doc.dagger(args.source), doc.dagger(args.target)
        if F.source is not D1.base or F.target is not D2.base:
            raise SourceTargetMismatch(f"{args.functor} does not run between the bases of {args.source} and {args.target}")
        verdict = is_dagger_equivalence(D1, D2, F)
        report.verdict('fully_faithful', verdict.fully_faithful)
        report.verdict('unitarily_surjective', verdict.unitarily_surjective)
        if verdict.failure:
            report.witness('failure', verdict.failure)
        report.witness('unitary_witnesses', verdict.witnesses)
        return

    A1, A2 = doc.anti_involutive(args.source), doc.anti_involutive(args.target)
    Fi = doc.involutive_functor(args.functor, A1, A2)
    verdict = is_equivalence(F)
    report.verdict('fully_faithful', verdict.fully_faithful)
    report.verdict('essentially_surjective', verdict.essentially_surjective)
    if not verdict.holds:
        report.witness('failure', verdict.witness)
        return
    try:
        _, Gi, _, _ = involutive_equivalence_from_functor(Fi)
    except (InconsistentResult, NotAnEquivalence) as e:
        report.verdict('involutive_inverse_valid', False, str(e))
        return
    report.verdict('involutive_inverse_valid', True)
    report.witness('quasi_inverse', {'objects': {y: Gi.functor.obj(y) for y in A2.objects},
                                     'datum': {y: Gi.at(y) for y in A2.objects}})


def cmd_triangles(args, report: Report):
    doc = _load(args, report)
    X = doc.dagger(args.name) if args.name in doc.daggers else doc.anti_involutive(args.name)
    verdict = check_triangle_identities(X)
    for name, holds in verdict.checks.items():
        report.verdict(name, holds, verdict.failures.get(name))


def cmd_corollary(args, report: Report):
    doc = _load(args, report)
    D1, D2 = doc.dagger(args.source), doc.dagger(args.target)
    result = dagger_functors_vs_fixed_points(D1, D2, args.cap)
    report.verdict('corollary_embedding_fully_faithful', result.embedding_fully_faithful)
    report.verdict('corollary_image_is_positivity_preserving', result.image_matches)
    report.witness('fixed_points', len(result.fixed_points))
    report.witness('dagger_functors', len(result.dagger_functors))
    report.witness('essential_image', result.essential_image)
    report.witness('positivity_preserving', result.positivity_preserving)


def cmd_biequivalence(args, report: Report):
    doc = _load(args, report)
    D = doc.dagger(args.dagger)
    verdict = check_Tp_biequivalence(D)
    report.verdict('tp_unit_dagger_equivalence', verdict.unit_dagger_equivalence)
    report.verdict('tp_counit_pcat_equivalence', verdict.counit_pcat_equivalence)
    if verdict.failures:
        report.witness('failures', verdict.failures)
    report.witness('positive_classes', verdict.witnesses.get('positive_classes'))


def _parse_params(pairs: List[str]) -> Dict:
    params = {}
    for pair in pairs:
        key, found, value = pair.partition('=')
        if not found or not key:
            raise FincatError(f"parameter {pair!r} is not of the form key=value", code='InvalidSpec')
        if key in LIST_PARAMS:
            params[key] = [item for item in value.split(',') if item]
        elif value.lstrip('-').isdigit():
            params[key] = int(value)
        else:
            params[key] = value
    return params


def cmd_gen(args) -> int:
    params = _parse_params(args.params)
    if args.kind in PRESETS:
        spec = preset(args.kind, **params)
    else:
        spec = GeneratorSpec(args.kind, params)
    bundle = generate(spec)
    text = print_document(bundle_to_document(bundle))
    if args.output:
        with open(args.output, 'w', encoding='utf-8') as f:
            f.write(text)
        logger.info(f"Wrote {bundle.category.describe()} to {args.output}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_report(args) -> int:
    from .analytics import Analytics
    from .database import Database

    db = Database()
    try:
        analytics = Analytics(db)
        if args.daily:
            analytics.generate_daily_stats()
        summary = analytics.get_summary(days=args.days, limit=args.limit)
    finally:
        db.close()
    if args.json:
        print(json.dumps(summary, sort_keys=True, indent=2))
    else:
        print(f"{summary['total_runs']} runs in {summary['period']}, "
              f"{summary['failures']} failed (rate {summary['failure_rate']})")
        for name, counts in summary['commands'].items():
            print(f"  {name}: {counts['runs']} runs, {counts['failures']} failed, {counts['errors']} errors")
        for run in summary['recent']:
            print(f"  {run['created_at']}  {run['command']:<13} exit {run['exit_status']}  "
                  f"{' '.join(run['input_names'])}")
    return 0


CHECKS: Dict[str, Callable] = {
    'validate': cmd_validate,
    'fixedpoints': cmd_fixedpoints,
    'herm': cmd_herm,
    'pi0u': cmd_pi0u,
    'indefinite': cmd_indefinite,
    'equiv': cmd_equiv,
    'triangles': cmd_triangles,
    'corollary': cmd_corollary,
    'biequivalence': cmd_biequivalence,
}


# -- argument parsing -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help='print the report as JSON')
    common.add_argument('--cap', type=int, default=None, help='enumeration cap (default FINCAT_CAP)')
    common.add_argument('--oracle-bound', type=int, default=None,
                        help='largest fixed-point count for the unitary cross-check (default FINCAT_ORACLE_BOUND)')

    parser = argparse.ArgumentParser(prog='fincat', description='Finite dagger and involutive categories')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('validate', parents=[common], help='parse and validate a .fincat file')
    p.add_argument('file')

    p = sub.add_parser('fixedpoints', parents=[common], help='Hermitian fixed points of an involution')
    p.add_argument('file')
    p.add_argument('--inv', required=True, help='involution name, or a dagger name for its T')

    p = sub.add_parser('herm', parents=[common], help='Hermitian completion checks')
    p.add_argument('file')
    p.add_argument('--inv', required=True)
    p.add_argument('--positivity', default=None)

    p = sub.add_parser('pi0u', parents=[common], help='unitary isomorphism classes')
    p.add_argument('file')
    p.add_argument('--dagger', required=True)

    p = sub.add_parser('indefinite', parents=[common], help='indefiniteness of a dagger category')
    p.add_argument('file')
    p.add_argument('--dagger', required=True)

    p = sub.add_parser('equiv', parents=[common], help='dagger or involutive equivalence of a declared functor')
    p.add_argument('file')
    p.add_argument('--from', dest='source', required=True)
    p.add_argument('--to', dest='target', required=True)
    p.add_argument('--functor', required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument('--dagger', action='store_true', help='treat --from/--to as daggers')
    mode.add_argument('--involutive', action='store_true', help='treat --from/--to as involutions (default)')

    p = sub.add_parser('triangles', parents=[common], help='strict triangle identities')
    p.add_argument('file')
    p.add_argument('--name', required=True, help='dagger or involution name')

    p = sub.add_parser('corollary', parents=[common], help='dagger functors against functor-category fixed points')
    p.add_argument('file')
    p.add_argument('--source', required=True)
    p.add_argument('--target', required=True)

    p = sub.add_parser('biequivalence', parents=[common], help='unit and counit of T_P')
    p.add_argument('file')
    p.add_argument('--dagger', required=True)

    p = sub.add_parser('gen', help='generate a fixture')
    p.add_argument('kind', help=f"generator kind ({', '.join(KINDS)}) or preset ({', '.join(sorted(PRESETS))})")
    p.add_argument('params', nargs='*', help='key=value parameters; lists are comma separated')
    p.add_argument('-o', '--output', default=None)

    p = sub.add_parser('report', help='summary of the report ledger')
    p.add_argument('--json', action='store_true')
    p.add_argument('--days', type=int, default=7)
    p.add_argument('--limit', type=int, default=10)
    p.add_argument('--daily', action='store_true', help="store today's aggregate first")
    return parser


def _store(report: Report, status: int):
    try:
        if not load_config()['ledger']:
            return
        from .database import Database

        db = Database()
        try:
            db.add_report(report, status)
        finally:
            db.close()
    except Exception as e:
        logger.warning(f"Could not write run to the ledger: {e}")


def _print_error(e: Exception):
    if isinstance(e, DslError):
        for d in e.diagnostics:
            print(f"error: {d}", file=sys.stderr)
    else:
        print(f"error: {getattr(e, 'code', type(e).__name__)}: {e}", file=sys.stderr)


def run(argv: Optional[List[str]] = None) -> int:
    """Run one command line and return its exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2

    try:
        if args.command == 'gen':
            return cmd_gen(args)
        if args.command == 'report':
            return cmd_report(args)
    except (FincatError, OSError, ValueError) as e:
        logger.error(f"{args.command} failed: {e}")
        _print_error(e)
        return 2

    report = Report(args.command)
    started = time.perf_counter()
    status = 2
    try:
        CHECKS[args.command](args, report)
        status = report.exit_status
    except (FincatError, OSError, ValueError) as e:
        logger.error(f"{args.command} failed: {e}")
        _print_error(e)
    except Exception as e:
        logger.error(f"Unexpected error in {args.command}: {e}", exc_info=True)
        _print_error(e)
    report.elapsed_seconds = time.perf_counter() - started

    if status != 2:
        print(report.to_json() if args.json else report.to_text())
        if report.failed:
            logger.info(f"{args.command}: {report.failed} failed")
    _store(report, status)
    return status


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
