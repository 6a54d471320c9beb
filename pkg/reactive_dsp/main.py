# Copyright (C) 2026 Reactive-DSP Authors
#
# This program is free software: you can redistribute it and/or modify it under the terms of the GNU
# General Public License as published by the Free Software Foundation, either version 3 of the
# License, or (at your option) any later version.
#
# This program is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY; without
# even the implied warranty of MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the GNU
# General Public License for more details.
#
# You should have received a copy of the GNU General Public License along with this program. If not,
#  see <https://www.gnu.org/licenses/>.

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from pydantic import ValidationError

from reactive_dsp.config import RuntimeConfig
from reactive_dsp.dataplane.sample_range import SampleRange
from reactive_dsp.dataplane.topology import Topology, load_topology
from reactive_dsp.gsm.chain import build_downlink
from reactive_dsp.kernel.trace import TraceWriter, format_reaction
from reactive_dsp.scheduling.compare import compare_schedulers, random_inputs, unit_cost_chain
from reactive_dsp.scheduling.config import SchedulerKind, TimingMode
from reactive_dsp.scheduling.dpm import DpmScheduler
from reactive_dsp.scheduling.drm import PipelineRun
from reactive_dsp.scheduling.protocol import Bug
from reactive_dsp.utilities.config_manager import ConfigManager
from reactive_dsp.utilities.file_manager import FileManager
from reactive_dsp.utilities.logging_utilities import create_logger
from reactive_dsp.verification.errors import StateExplosion, WitnessMismatch
from reactive_dsp.verification.export import export_fsm, verdict_records
from reactive_dsp.verification.models import build_model, control_chain, verify_model
from reactive_dsp.verification.witness import (load_witness, replay_witness, save_witness,
                                               witness_record)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_STATE_EXPLOSION = 3

CONFIG_FILE = "reactive_dsp_config.yaml"


# --------------------------------------------------------------------------------------------------
#  Argument parsing
# --------------------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    """The argument parser with the run, verify, replay and bench subcommands."""
    parser = argparse.ArgumentParser(
        prog='reactive-dsp',
        description="Run, verify and benchmark data-reactive signal processing pipelines.")
    parser.add_argument('-c', '--config', type=Path, default=None,
                        help="The path to the config file (its explicit settings override flags)")
    parser.add_argument('--log-level', default=None, help="Logging level, e.g. DEBUG")
    parser.add_argument('--develop', action='store_const', const=True, default=None,
                        help="Also log to the console")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=['text', 'json'], default='text',
                        help="Report format on standard output")
    common.add_argument('--seed', type=int, default=0, help="Seed of generated input data")

    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', parents=[common], help="Run a pipeline")
    run.add_argument('--topology', type=Path, default=None,
                     help="Topology file (default: the built-in GSM downlink)")
    run.add_argument('--scheduler', choices=[k.value for k in SchedulerKind], default=None)
    run.add_argument('--mode', choices=[m.value for m in TimingMode], default=None)
    run.add_argument('--ticks', type=int, default=None, help="Tick limit of the run")
    run.add_argument('--in', dest='input', type=Path, default=None,
                     help="Source stream file (default: random frames from --seed)")
    run.add_argument('--items', type=int, default=1,
                     help="Frames of generated input per source when --in is not given")
    run.add_argument('--out', type=Path, default=None, help="Sink output file")
    run.add_argument('--trace', type=Path, default=None, help="Trace file, one line per tick")
    run.add_argument('--workers', type=int, default=None,
                     help="Compute worker threads (0 = one per physical core)")
    run.add_argument('--init-range', default=None, help="Initial source window, '<index> <size>'")

    verify = commands.add_parser('verify', parents=[common], help="Model check the protocol")
    verify.add_argument('--topology', type=Path, default=None,
                        help="Topology file (default: the 7-stage downlink control chain)")
    verify.add_argument('--observers', default=None, help="Comma separated, e.g. s1,s2,s3")
    verify.add_argument('--bound', type=int, default=None, help="Tick bound D")
    verify.add_argument('--bug', choices=[b.value for b in Bug], default=Bug.NONE.value)
    verify.add_argument('--witness', type=Path, default=None,
                        help="Witness file written on a violation")
    verify.add_argument('--fsm-out', type=Path, default=None, help="Transition table export")
    verify.add_argument('--max-states', type=int, default=None)
    verify.add_argument('--minimize', action='store_const', const=True, default=None)

    replay = commands.add_parser('replay', parents=[common], help="Replay a witness file")
    replay.add_argument('--witness', type=Path, required=True)
    replay.add_argument('--topology', type=Path, default=None,
                        help="Topology file (default: the 7-stage downlink control chain)")
    replay.add_argument('--bug', choices=[b.value for b in Bug], default=None,
                        help="Fault of the replayed model (default: the recorded one)")

    bench = commands.add_parser('bench', parents=[common], help="Compare the schedulers")
    bench.add_argument('--stages', type=int, default=7)
    bench.add_argument('--items', type=int, default=100)
    return parser


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _flag_settings(args: argparse.Namespace) -> Dict[str, Any]:
    """Configuration fields set by command-line flags."""
    flags = {
        'logging': {'level': args.log_level, 'develop': args.develop},
        'scheduler': {'scheduler': getattr(args, 'scheduler', None),
                      'mode': getattr(args, 'mode', None),
                      'tick_limit': getattr(args, 'ticks', None),
                      'workers': getattr(args, 'workers', None)},
        'verification': {'bound': getattr(args, 'bound', None),
                         'max_states': getattr(args, 'max_states', None),
                         'minimize': getattr(args, 'minimize', None)},
    }
    if getattr(args, 'observers', None):
        flags['verification']['observers'] = [o.strip() for o in args.observers.split(',')]
    return {section: {k: v for k, v in values.items() if v is not None}
            for section, values in flags.items()}


def load_runtime_config(args: argparse.Namespace) -> RuntimeConfig:
    """
    Resolve the runtime configuration: defaults, then flags, then the explicitly set fields of
    the config file. A missing default config file is ignored.

    Raises:
        FileNotFoundError: If an explicitly given config file does not exist.
        ValidationError: If the resulting configuration is invalid.
    """
    settings = _flag_settings(args)
    path = args.config or FileManager().config_dir / CONFIG_FILE
    if args.config is not None or path.exists():
        manager = ConfigManager(path, RuntimeConfig)
        settings = _merge(settings, manager.load().model_dump(exclude_unset=True))
    return RuntimeConfig.model_validate(settings)


def _sibling(path: Path, tag: str) -> Path:
    return path.with_name(f"{path.stem}_{tag}{path.suffix}")


def _emit(args: argparse.Namespace, text: str, record: Dict[str, Any]):
    print(json.dumps(record, sort_keys=True) if args.format == 'json' else text)


# --------------------------------------------------------------------------------------------------
#  Subcommands
# --------------------------------------------------------------------------------------------------

def _topology(args: argparse.Namespace, config: RuntimeConfig, logger) -> Topology:
    if args.topology is not None:
        return load_topology(args.topology, logger)
    return build_downlink(config.gsm, logger)


def cmd_run(args: argparse.Namespace, config: RuntimeConfig, file_manager: FileManager,
            logger) -> int:
    """Run a pipeline under the configured scheduler, writing sink bytes and the trace."""
    topology = _topology(args, config, logger)
    if args.init_range is not None:
        topology.init_range = SampleRange.parse(args.init_range)

    if args.input is not None:
        if len(topology.sources) != 1:
            raise ValueError(f"--in feeds a single source, {topology.name} has "
                             f"{len(topology.sources)}")
        inputs = {topology.sources[0]: args.input.read_bytes()}
    else:
        inputs = random_inputs(topology, args.items, args.seed)

    with TraceWriter(args.trace) as trace:
        match config.scheduler.scheduler:
            case SchedulerKind.DPM:
                scheduler = DpmScheduler(topology, inputs, trace, logger)
                outputs = scheduler.run()
                summary = {'stages': len(topology.stages), 'ticks': scheduler.tick,
                           'span': scheduler.span}
                line = scheduler.summary_line()
            case SchedulerKind.DRM:
                run = PipelineRun(topology, inputs, config.scheduler, config.kernel, trace, logger)
                try:
                    run.run()
                finally:
                    run.close()
                outputs = run.outputs()
                summary, line = run.summary(), run.summary_line()

    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        for sink, data in outputs.items():
            target = args.out if len(outputs) == 1 else _sibling(args.out, sink)
            target.write_bytes(data)
            logger.info(f"Sink {sink}: {len(data)} bytes written to {target}")

    summary['scheduler'] = config.scheduler.scheduler.value
    summary['topology'] = topology.name
    _emit(args, line, summary)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: RuntimeConfig, file_manager: FileManager,
               logger) -> int:
    """Check the violation signals of the composed control model; exit 1 on any violation."""
    settings = config.verification
    topology = load_topology(args.topology, logger) if args.topology is not None else None
    model = build_model(topology, bug=Bug(args.bug), observers=settings.observers,
                        bound=settings.bound, logger=logger)
    report = verify_model(model, settings, logger)

    if args.fsm_out is not None:
        export_fsm(report.fsm, args.fsm_out)

    witnesses = {}
    violated = [v for v in report.verdicts if v.emitted]
    for verdict in violated:
        if args.witness is None:
            path = file_manager.artefact_path(f"{verdict.signal}.witness.yaml")
        else:
            path = args.witness if len(violated) == 1 else _sibling(args.witness, verdict.signal)
        save_witness(witness_record(verdict, model.program, model.options()), path, logger)
        witnesses[verdict.signal] = str(path)
        logger.info(f"Witness of {verdict.signal} written to {path}")

    lines = [f"{model.topology.name}: {report.fsm.size} states, bug={model.bug.value}, "
             f"D={model.bound}"]
    lines += [str(v) for v in report.verdicts]
    lines += [f"witness {signal}: {path}" for signal, path in witnesses.items()]
    _emit(args, "\n".join(lines), {'topology': model.topology.name, 'states': report.fsm.size,
                                   'bug': model.bug.value, 'bound': model.bound,
                                   'passed': report.passed, 'witnesses': witnesses,
                                   'verdicts': verdict_records(report.verdicts)})
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_replay(args: argparse.Namespace, config: RuntimeConfig, file_manager: FileManager,
               logger) -> int:
    """
    Rebuild the recorded model (with the given topology or fault) and feed it the witness. Exit 0
    when the recorded violation is reproduced.
    """
    record = load_witness(args.witness, logger)
    options = record.model
    recorded = Bug(options.get('bug', Bug.NONE.value))
    bug = Bug(args.bug) if args.bug is not None else recorded
    topology = load_topology(args.topology, logger) if args.topology is not None else \
        control_chain(logger=logger)
    model = build_model(topology, bug=bug,
                        bug_stage=options.get('bug_stage') if bug is recorded else None,
                        observers=options.get('observers', config.verification.observers),
                        bound=options.get('bound', config.verification.bound), logger=logger)
    try:
        result = replay_witness(model.program, record, logger)
    except WitnessMismatch as e:
        logger.error(f"Replay of {args.witness} failed: {e}")
        _emit(args, f"witness mismatch: {e}",
              {'signal': record.signal, 'reproduced': False, 'mismatch': str(e)})
        return EXIT_FAILURE

    lines = []
    for i, reaction in enumerate(result.reactions):
        last = i == len(result.reactions) - 1
        lines.append(format_reaction(reaction, f"{record.signal} violated"
                                     if last and result.reproduced else None))
    lines.append(f"{record.signal} reproduced at tick {result.violation_tick}" if result.reproduced
                 else f"{record.signal} not reproduced in {len(result.reactions)} ticks")
    _emit(args, "\n".join(lines), {'signal': record.signal, 'reproduced': result.reproduced,
                                   'tick': result.violation_tick, 'trace': lines[:-1]})
    return EXIT_OK if result.reproduced else EXIT_FAILURE


def cmd_bench(args: argparse.Namespace, config: RuntimeConfig, file_manager: FileManager,
              logger) -> int:
    """Tick totals of both schedulers on a unit-cost chain."""
    topology = unit_cost_chain(args.stages, logger=logger)
    report = compare_schedulers(topology, args.items, seed=args.seed, logger=logger)
    record = report.as_record()
    _emit(args, " ".join(f"{k}={v}" for k, v in record.items()), record)
    return EXIT_OK


COMMANDS: Dict[str, Callable[..., int]] = {
    'run': cmd_run,
    'verify': cmd_verify,
    'replay': cmd_replay,
    'bench': cmd_bench,
}


# --------------------------------------------------------------------------------------------------
#  Entry point
# --------------------------------------------------------------------------------------------------

def main(argv: Optional[List[str]] = None):
    """Command line entry point; exits with the status of the subcommand."""

    args = build_parser().parse_args(argv)

    # Boot-up
    logger = None
    try:
        config = load_runtime_config(args)
        file_manager = FileManager(config.file_manager.working_directory)
        file_manager.init_directories()
        logger = create_logger(file_manager.log_dir, **config.logging.model_dump())
    except (FileNotFoundError, ValidationError) as e:
        print(f"Critical error, before logger start: {e}", file=sys.stderr)
        sys.exit(EXIT_USAGE)
    except Exception as e:
        print(f"Critical error, before logger start: {e}", file=sys.stderr)
        sys.exit(EXIT_FAILURE)

    logger.info(f"Starting {args.command}")
    try:
        status = COMMANDS[args.command](args, config, file_manager, logger)
    except StateExplosion as e:
        logger.critical(f"State explosion: {e}")
        print(f"reactive-dsp: state explosion: {e}", file=sys.stderr)
        status = EXIT_STATE_EXPLOSION
    except (FileNotFoundError, IsADirectoryError, ValidationError) as e:
        logger.critical(f"Cannot start {args.command}: {e}")
        print(f"reactive-dsp: {e}", file=sys.stderr)
        status = EXIT_USAGE
    except Exception as e:
        logger.critical(f"{args.command} failed: {e}")
        print(f"reactive-dsp: {e}", file=sys.stderr)
        status = EXIT_FAILURE

    logger.info(f"{args.command} finished with exit status {status}")
    sys.exit(status)


if __name__ == "__main__":
    main()
