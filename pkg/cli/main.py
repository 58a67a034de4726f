import argparse
import functools
import logging
import sys
import time
from typing import Iterable, TextIO
from pydantic import BaseModel, ValidationError
from systolic_queue import ConfigError, InputError, QueueConfig, Status, new_engine, validate_config
from systolic_queue.config import (
    DEFAULT_BLOCKS,
    DEFAULT_DATA_WIDTH,
    DEFAULT_ISSUE_INTERVAL,
    DEFAULT_SLOTS,
    LOG_FORMAT,
    LOG_LEVEL,
)
from timer_queue import TimerQueue
from verification import FuzzPlan, OpMix, fuzz, fuzz_both, generate_commands, replay
from verification.harness import DEFAULT_OPS_RATIO
from .trace import TraceError, TraceRecord, parse_trace

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2

MIX_FLAGS = ('push_new', 'push_update', 'pop', 'delete_present', 'delete_absent', 'peek')


class ResultLine(BaseModel):
    line: int
    cycle: int
    op: str
    status: str
    id: int | None = None
    data: int | None = None


class AdvanceResultLine(ResultLine):
    expired: list[tuple[int, int]]


class BenchStats(BaseModel):
    commands: int
    issue_interval: int
    issue_cycles: int
    drain_cycles: int
    simulated_cycles: int
    transactions: int
    commands_per_1000_cycles: float
    wall_time_s: float


def exit_on_error(func):
    """
    Decorator that turns input and configuration errors into exit code 2
    with a one-line message on stderr.
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (InputError, ConfigError) as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_INPUT_ERROR
        except ValidationError as e:
            print(f"error: {e.errors()[0]['msg']}", file=sys.stderr)
            return EXIT_INPUT_ERROR
        except OSError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_INPUT_ERROR
        except Exception as e:
            logger.error(f"Unexpected error: {e}", exc_info=True)
            return EXIT_INPUT_ERROR
    return wrapper


def config_from_args(args: argparse.Namespace) -> QueueConfig:
    cfg = QueueConfig.build(
        n_blocks=args.blocks,
        slots_per_block=args.slots,
        data_width=args.data_width,
        id_width=args.id_width,
        issue_interval=args.interval
    )
    violations = validate_config(cfg)
    if violations:
        raise ConfigError(violations)
    return cfg


def _emit(line: BaseModel, out: TextIO) -> None:
    out.write(line.model_dump_json() + '\n')


def _run_queue_trace(records: list[TraceRecord], cfg: QueueConfig, schedule: str, out: TextIO) -> None:
    try:
        completions, _ = replay([record.to_command() for record in records], cfg, schedule=schedule)
    except InputError as e:
        raise TraceError(records[e.position - 1].line, e.message)
    for record, completion in zip(records, completions):
        element = completion.element
        if element is not None:
            id, data = element.id, element.data
        else:
            id, data = record.id, record.data
        _emit(ResultLine(
            line=record.line,
            cycle=completion.finish_cycle,
            op=record.op,
            status=completion.status.value,
            id=id,
            data=data
        ), out)


def _run_timer_trace(records: list[TraceRecord], cfg: QueueConfig, out: TextIO) -> None:
    timers = TimerQueue(cfg)
    for record in records:
        try:
            if record.op == 'arm':
                result = timers.arm(record.id, record.deadline)
                line = ResultLine(line=record.line, cycle=timers.engine.cycle, op=record.op,
                                  status=result.value, id=record.id, data=record.deadline)
            elif record.op == 'disarm':
                found = timers.disarm(record.id)
                status = Status.OK if found else Status.NOT_FOUND
                line = ResultLine(line=record.line, cycle=timers.engine.cycle, op=record.op,
                                  status=status.value, id=record.id)
            else:
                events = timers.advance(record.delta)
                line = AdvanceResultLine(
                    line=record.line,
                    cycle=timers.engine.cycle,
                    op=record.op,
                    status=Status.OK.value,
                    data=timers.now,
                    expired=[(event.id, event.deadline) for event in events]
                )
        except ValueError as e:
            raise TraceError(record.line, str(e))
        _emit(line, out)


def _read_trace(path: str) -> Iterable[str]:
    if path == '-':
        return sys.stdin.readlines()
    with open(path, encoding='utf-8') as trace_file:
        return trace_file.readlines()


@exit_on_error
def cmd_run(args: argparse.Namespace, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    cfg = config_from_args(args)
    dialect, records = parse_trace(_read_trace(args.trace))
    logger.info(f"Replaying {len(records)} {dialect} commands from {args.trace}")
    if dialect == 'queue':
        _run_queue_trace(records, cfg, args.schedule, out)
    else:
        _run_timer_trace(records, cfg, out)
    return EXIT_OK


@exit_on_error
def cmd_fuzz(args: argparse.Namespace, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    cfg = config_from_args(args)
    overrides = {name: getattr(args, name) for name in MIX_FLAGS if getattr(args, name) is not None}
    mix = OpMix(**overrides)
    failed = 0
    for seed in range(args.seed, args.seed + args.seeds):
        plan = FuzzPlan(
            config=cfg,
            seed=seed,
            n_ops=args.ops,
            ratio=args.ratio,
            mix=mix,
            data_max=args.data_max,
            schedule='interval' if args.schedule == 'both' else args.schedule,
            hostile=args.hostile,
            inject_fault=args.inject_fault
        )
        report = fuzz_both(plan) if args.schedule == 'both' else fuzz(plan)
        out.write(report.summary() + '\n')
        if not report.passed:
            failed += 1
            for mismatch in report.mismatches[:1]:
                out.write(f"  op {mismatch.op_index} {mismatch.command}: "
                          f"expected {mismatch.expected}, got {mismatch.actual}\n")
            for violation in report.violations[:1]:
                out.write(f"  {violation}\n")
    return EXIT_VERIFICATION_FAILED if failed else EXIT_OK


@exit_on_error
def cmd_bench(args: argparse.Namespace, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    cfg = config_from_args(args)
    commands = generate_commands(FuzzPlan(config=cfg, seed=args.seed, n_ops=args.ops))
    engine = new_engine(cfg)

    started = time.perf_counter()
    for cmd in commands:
        engine.wait_for_port()
        engine.issue(cmd, strict=True)
    engine.run_until_quiescent()
    wall_time = time.perf_counter() - started

    # issue window from the first accepted command to the end of the last one's port slot
    issued = [record.issue_cycle for record in engine.records]
    issue_cycles = issued[-1] - issued[0] + cfg.issue_interval if issued else 0
    drain_cycles = engine.cycle - issued[-1] if issued else 0
    throughput = len(issued) * 1000 / issue_cycles if issue_cycles else 0.0
    _emit(BenchStats(
        commands=len(commands),
        issue_interval=cfg.issue_interval,
        issue_cycles=issue_cycles,
        drain_cycles=drain_cycles,
        simulated_cycles=engine.cycle,
        transactions=engine.stats.transactions,
        commands_per_1000_cycles=throughput,
        wall_time_s=round(wall_time, 6)
    ), out)
    return EXIT_OK


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--blocks', type=int, default=DEFAULT_BLOCKS, help='Number of systolic blocks (N)')
    parser.add_argument('--slots', type=int, default=DEFAULT_SLOTS, help='Shift blocks per systolic block (M)')
    parser.add_argument('--data-width', type=int, default=DEFAULT_DATA_WIDTH, help='DATA field width in bits')
    parser.add_argument(
        '--id-width',
        type=int,
        default=None,
        help='ID field width in bits (default: ceil(log2(capacity + 1)))'
    )
    parser.add_argument(
        '--interval',
        type=int,
        default=DEFAULT_ISSUE_INTERVAL,
        help='Minimum cycles between two issued commands'
    )
    parser.add_argument('--seed', type=int, default=0, help='Random seed')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='pqsim',
        description='Cycle-accurate systolic priority queue simulator.'
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    run = subparsers.add_parser('run', help='Replay a trace file and print one JSON result per command')
    _add_config_flags(run)
    run.add_argument('trace', help="Trace file path, or '-' for stdin")
    run.add_argument('--schedule', choices=('interval', 'quiescent'), default='quiescent')
    run.set_defaults(handler=cmd_run)

    fuzz_parser = subparsers.add_parser('fuzz', help='Differential fuzzing against the golden model')
    _add_config_flags(fuzz_parser)
    fuzz_parser.add_argument('--ops', type=int, default=None, help='Commands per seed (default: ratio x capacity)')
    fuzz_parser.add_argument('--ratio', type=float, default=DEFAULT_OPS_RATIO)
    fuzz_parser.add_argument('--seeds', type=int, default=1, help='Run seeds seed..seed+K-1')
    fuzz_parser.add_argument('--data-max', type=int, default=None, help='Largest generated DATA value')
    fuzz_parser.add_argument('--schedule', choices=('interval', 'quiescent', 'both'), default='both')
    fuzz_parser.add_argument('--hostile', action='store_true', help='Also issue commands the port must refuse')
    fuzz_parser.add_argument('--inject-fault', action='store_true', help='Corrupt the array to check the detector')
    for name in MIX_FLAGS:
        fuzz_parser.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float, default=None,
                                 help=f"Weight of {name.replace('_', ' ')} commands")
    fuzz_parser.set_defaults(handler=cmd_fuzz)

    bench = subparsers.add_parser('bench', help='Measure saturated issue throughput')
    _add_config_flags(bench)
    bench.add_argument('--ops', type=int, default=10000, help='Commands to issue')
    bench.set_defaults(handler=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT, stream=sys.stderr)
    return args.handler(args)


if __name__ == '__main__':
    sys.exit(main())
