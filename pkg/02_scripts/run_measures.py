"""
Command-line front end for the measures library.

Usage:
    python run_measures.py measure <state.json> --measures entropy,discord
    python run_measures.py sweep --theta pi/6 --theta pi/4 --phi-steps 65 --out sweep.csv
    python run_measures.py verify koashi-winter --trials 200 --tol 1e-4
    python run_measures.py state make bell --out bell.json
    python run_measures.py state make example --theta pi/2 --phi pi/4
    python run_measures.py state make one-mc --spec ../01_states/one_mc_example.json
    python run_measures.py state make pseudo-pure --spec ../01_states/pseudo_pure_example.json
    python run_measures.py state make random --dims 2 2 --rank 3 --seed 7

Exit codes:
    0  success
    1  a verification campaign failed
    2  input error (unparseable file, bad flag, unknown name)
    3  a state or spec violates an invariant
    4  output could not be written
"""

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

# Add this directory to path for lib imports
sys.path.insert(0, str(Path(__file__).parent))

from lib.conversions import parse_angle
from lib.dataframes import create_summary_df, create_sweep_df, create_trials_df
from lib.errors import MeasureError, StateFileError, ValidationError
from lib.export import dataframe_to_records, dumps_document, save_to_csv, save_to_json
from lib.linalg import DimSignature
from lib.measures import measure_state
from lib.optimize import DISCORD_BUDGET, REE_BUDGET, OptimizerBudget
from lib.parser import (
    as_density, dump_state, dumps_state, load_one_way_mc_spec, load_pseudo_pure_spec,
    load_state,
)
from lib.qa import CampaignConfig, create_campaign_workbook, run_campaign
from lib.schema import CAMPAIGN_TYPES, OUTPUT_FORMATS
from lib.states import (
    ExampleFamilyParams, bell_state, example_family, make_one_way_mc, make_pseudo_pure,
    make_werner, random_density_matrix, random_pure_state,
)
from lib.sweep import DEFAULT_PHI_STEPS, DEFAULT_THETAS, SweepConfig, run_sweep

logger = logging.getLogger('run_measures')

EXIT_OK = 0
EXIT_CAMPAIGN_FAILED = 1
EXIT_INPUT = 2
EXIT_INVARIANT = 3
EXIT_OUTPUT = 4


# ============================================================
# HELPERS
# ============================================================

def _budget(args, base: OptimizerBudget) -> OptimizerBudget:
    """Apply --budget-starts / --budget-iters / --seed on top of a module default."""
    changes = {}
    if getattr(args, 'budget_starts', None) is not None:
        changes['starts'] = args.budget_starts
    if getattr(args, 'budget_iters', None) is not None:
        changes['iterations'] = args.budget_iters
    if getattr(args, 'seed', None) is not None:
        changes['seed'] = args.seed
    return replace(base, **changes) if changes else base


def _write_text(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding='utf-8')
    logger.info("Saved: %s", out)


def _emit_table(df, out: Optional[Path], fmt: str) -> None:
    if out is not None:
        if fmt == 'csv':
            save_to_csv(df, out)
        else:
            save_to_json(df, out)
        return
    if fmt == 'csv':
        df.to_csv(sys.stdout, index=False, lineterminator='\n')
    else:
        sys.stdout.write(dumps_document(dataframe_to_records(df)))


def _from_flags(build, *args):
    """Call a constructor on command-line values; invariant failures there are input errors."""
    try:
        return build(*args)
    except ValidationError as e:
        raise ValueError(f"Bad argument: {e}") from e


def _format_for(out: Optional[Path], fmt: Optional[str]) -> str:
    """Explicit --format wins, then the output suffix, then csv."""
    if fmt is not None:
        return fmt
    if out is not None and out.suffix.lower() == '.json':
        return 'json'
    return 'csv'


# ============================================================
# COMMANDS
# ============================================================

def cmd_measure(args) -> int:
    """Measure one state file and print the JSON report."""
    state = load_state(args.state)
    doc = measure_state(
        as_density(state),
        args.measures,
        budget=_budget(args, DISCORD_BUDGET),
        target=args.target,
        measured=args.measured,
        with_ree=args.with_ree,
        ree_budget=REE_BUDGET,
        povm_trials=args.povm_trials,
    )
    _write_text(dumps_document(doc), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    """Example-family sweep over phi for each theta."""
    thetas = tuple(parse_angle(t) for t in args.theta) if args.theta else DEFAULT_THETAS
    fmt = _format_for(args.out, args.format)
    config = SweepConfig(
        theta_values=thetas,
        phi_steps=args.phi_steps,
        budget=_budget(args, DISCORD_BUDGET),
        output_path=args.out,
        format=fmt,
        workers=args.workers,
    )
    df = create_sweep_df(run_sweep(config))
    _emit_table(df, config.output_path, config.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    """Run one or more campaigns; nonzero exit if any trial fails."""
    names = sorted(CAMPAIGN_TYPES) if args.campaign == ['all'] else args.campaign
    results = []
    for name in names:
        config = CampaignConfig(
            name=name,
            trials=args.trials,
            seed=args.seed if args.seed is not None else 0,
            tolerance=args.tol,
            budget=_budget(args, DISCORD_BUDGET),
            workers=args.workers,
            with_ree=args.with_ree,
        )
        results.append(run_campaign(config))

    summary_df = create_summary_df([r.summary_row() for r in results])
    if args.out is not None:
        trials_df = create_trials_df([row for r in results for row in r.trial_rows()])
        _emit_table(trials_df, args.out, _format_for(args.out, args.format))
    if args.workbook is not None:
        create_campaign_workbook(args.workbook, results)

    passed = all(r.passed for r in results)
    sys.stdout.write(dumps_document({
        'passed': passed,
        'campaigns': dataframe_to_records(summary_df),
    }))
    return EXIT_OK if passed else EXIT_CAMPAIGN_FAILED


def cmd_state_make(args) -> int:
    """Construct a state and write its document."""
    kind = args.kind
    if kind == 'bell':
        state = bell_state()
    elif kind == 'werner':
        state = _from_flags(make_werner, args.p)
    elif kind == 'example':
        params = _from_flags(ExampleFamilyParams, parse_angle(args.theta), parse_angle(args.phi))
        psi, sigma_ab, _ = example_family(params)
        state = sigma_ab if args.reduced else psi
    elif kind == 'one-mc':
        spec, labels = load_one_way_mc_spec(args.spec)
        psi, rho_ab = make_one_way_mc(spec, labels)
        if spec.has_repeated_a_states:
            logger.warning("Spec repeats an a-state; the 1-MC state is degenerate")
        state = rho_ab if args.reduced else psi
    elif kind == 'pseudo-pure':
        pairs, flag_dim, flag_label = load_pseudo_pure_spec(args.spec)
        state = make_pseudo_pure(pairs, flag_dim, flag_label)
    elif kind == 'random':
        labels = tuple(args.labels) if args.labels else None
        sig = _from_flags(DimSignature.of, args.dims, labels)
        seed = args.seed if args.seed is not None else 0
        if args.pure:
            state = random_pure_state(sig, seed)
        else:
            state = _from_flags(random_density_matrix, sig, args.rank, seed)
    else:
        raise ValueError(f"Unknown state kind '{kind}'")

    if args.out is not None:
        dump_state(state, args.out)
    else:
        sys.stdout.write(dumps_state(state))
    return EXIT_OK


# ============================================================
# ARGUMENT PARSER
# ============================================================

def _add_budget_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--budget-starts', type=int, default=None,
                        help=f'optimizer starts (default {DISCORD_BUDGET.starts})')
    parser.add_argument('--budget-iters', type=int, default=None,
                        help=f'iterations per start (default {DISCORD_BUDGET.iterations})')
    parser.add_argument('--seed', type=int, default=None,
                        help='seed for optimizer starts and random draws (default 0)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='run_measures',
        description='Entropies, discord and entanglement measures of small quantum states.',
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='errors only')
    sub = parser.add_subparsers(dest='command', required=True)

    # measure
    p = sub.add_parser('measure', help='measure one state file')
    p.add_argument('state', type=Path, help='state document (JSON)')
    p.add_argument('--measures', default='entropy,discord,entanglement,ppt',
                   help='comma-separated: entropy, discord, entanglement, ppt')
    p.add_argument('--target', default=None, help='target label (default: first label)')
    p.add_argument('--measured', default=None, help='measured label (default: second label)')
    p.add_argument('--with-ree', action='store_true', help='run the numerical REE estimate')
    p.add_argument('--povm-trials', type=int, default=0, help='random POVM probes after discord')
    p.add_argument('--out', type=Path, default=None, help='write JSON here instead of stdout')
    _add_budget_flags(p)
    p.set_defaults(func=cmd_measure)

    # sweep
    p = sub.add_parser('sweep', help='example-family sweep over phi')
    p.add_argument('--theta', action='append', default=None,
                   help='theta value, repeatable; accepts pi literals (default pi/6 and pi/4)')
    p.add_argument('--phi-steps', type=int, default=DEFAULT_PHI_STEPS,
                   help=f'phi grid points on [0, pi/2] (default {DEFAULT_PHI_STEPS})')
    p.add_argument('--out', type=Path, default=None)
    p.add_argument('--format', choices=sorted(OUTPUT_FORMATS), default=None)
    p.add_argument('--workers', type=int, default=1)
    _add_budget_flags(p)
    p.set_defaults(func=cmd_sweep)

    # verify
    p = sub.add_parser('verify', help='run verification campaigns')
    p.add_argument('campaign', nargs='+', choices=sorted(CAMPAIGN_TYPES) + ['all'])
    p.add_argument('--trials', type=int, default=None,
                   help='trials (grid points per axis for complement-grid)')
    p.add_argument('--tol', type=float, default=None, help='pass tolerance')
    p.add_argument('--workers', type=int, default=1)
    p.add_argument('--with-ree', action='store_true', help='include REE estimates')
    p.add_argument('--out', type=Path, default=None, help='per-trial table')
    p.add_argument('--format', choices=sorted(OUTPUT_FORMATS), default=None)
    p.add_argument('--workbook', type=Path, default=None, help='campaign workbook (.xlsx)')
    _add_budget_flags(p)
    p.set_defaults(func=cmd_verify)

    # state make
    p_state = sub.add_parser('state', help='state documents')
    state_sub = p_state.add_subparsers(dest='state_command', required=True)
    p_make = state_sub.add_parser('make', help='construct a state')
    kinds = p_make.add_subparsers(dest='kind', required=True)

    k = kinds.add_parser('bell', help='(|00> + |11>)/sqrt(2)')
    k = kinds.add_parser('werner', help='p |Phi><Phi| + (1 - p) I/4')
    k.add_argument('--p', type=float, required=True)
    k = kinds.add_parser('example', help='(|000> + |theta 1 phi>)/sqrt(2)')
    k.add_argument('--theta', required=True)
    k.add_argument('--phi', required=True)
    k.add_argument('--reduced', action='store_true', help='write sigma_ab instead of the pure state')
    k = kinds.add_parser('one-mc', help='one-way maximally correlated state from a spec')
    k.add_argument('--spec', type=Path, required=True)
    k.add_argument('--reduced', action='store_true', help='write rho_ab instead of the pure state')
    k = kinds.add_parser('pseudo-pure', help='flagged mixture from a spec')
    k.add_argument('--spec', type=Path, required=True)
    k = kinds.add_parser('random', help='seeded random state')
    k.add_argument('--dims', type=int, nargs='+', default=[2, 2])
    k.add_argument('--labels', nargs='+', default=None)
    k.add_argument('--rank', type=int, default=None)
    k.add_argument('--pure', action='store_true')
    k.add_argument('--seed', type=int, default=None)
    for k in kinds.choices.values():
        k.add_argument('--out', type=Path, default=None)
    p_make.set_defaults(func=cmd_state_make)

    return parser


def _configure_logging(args) -> None:
    level = logging.DEBUG if args.verbose else logging.ERROR if args.quiet else logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')
    logging.getLogger().setLevel(level)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT
    _configure_logging(args)

    try:
        return args.func(args)
    except StateFileError as e:
        logger.error("%s", e)
        return EXIT_INPUT
    except ValidationError as e:
        logger.error("invariant violated: %s", e)
        return EXIT_INVARIANT
    except ValueError as e:
        logger.error("%s", e)
        return EXIT_INPUT
    except MeasureError as e:
        logger.error("%s", e)
        return EXIT_INVARIANT
    except OSError as e:
        logger.error("cannot write output: %s", e)
        return EXIT_OUTPUT


if __name__ == '__main__':
    sys.exit(main())
