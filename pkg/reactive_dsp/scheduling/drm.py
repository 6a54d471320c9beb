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

"""
Data-Reactive Model: every stage reacts as soon as it holds input data and a downstream ack,
which software-pipelines the chain. The control plane is a kernel Program generated from the
topology (see protocol.py); PipelineRun couples it with the data plane.
"""

import json
import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Deque, Dict, Iterable, List, Mapping, Optional, Set, Tuple

import networkx as nx
import psutil

from reactive_dsp.dataplane.errors import InsufficientData, TopologyError
from reactive_dsp.dataplane.pipeline import Pipeline
from reactive_dsp.dataplane.sample_range import SampleRange
from reactive_dsp.dataplane.topology import Topology
from reactive_dsp.kernel.config import KernelConfig
from reactive_dsp.kernel.program import GlobalState, Program, Reaction, declare_program
from reactive_dsp.kernel.trace import TraceWriter
from reactive_dsp.scheduling.config import SchedulerConfig, TimingMode
from reactive_dsp.scheduling.errors import IncompatibleRates
from reactive_dsp.scheduling.protocol import (INIT_RANGE, IP_ADDR, LAUNCHER, USER_QUIT, Bug,
                                              LocalState, PayloadProvider, ProtocolOptions,
                                              StageAutomatonFactory, ack_signal, cancel_signal,
                                              compute_signal, data_signal, fire_signal,
                                              launcher_automaton, protocol_signals, roles_of,
                                              take_signal)

Edge = Tuple[str, str]


def _default_bug_stage(topology: Topology, bug: Bug) -> Optional[str]:
    match bug:
        case Bug.NONE:
            return None
        case Bug.MISSING_SINK_ACK:
            return topology.sinks[0]
        case _:
            return topology.downstream(topology.sources[0])[0]


def _check_bug(topology: Topology, options: ProtocolOptions):
    if options.bug is Bug.NONE:
        return
    if options.mode is not TimingMode.TWO_TICK:
        raise ValueError(f"Bug {options.bug.value} needs the two_tick protocol")
    stage = topology.stage(options.bug_stage)
    if options.bug is Bug.MISSING_SINK_ACK and not stage.is_sink:
        raise ValueError(f"Bug {options.bug.value} applies to a sink, not {stage.name}")
    if options.bug in (Bug.EARLY_ACK, Bug.DROPPED_CANCEL) and stage.is_source:
        raise ValueError(f"Bug {options.bug.value} applies to a stage with an upstream, not "
                         f"{stage.name}")


def build_drm(topology: Topology, mode: TimingMode = TimingMode.TWO_TICK, *, bug: Bug = Bug.NONE,
              bug_stage: Optional[str] = None, gated: bool = False,
              provider: Optional[PayloadProvider] = None,
              kernel_config: Optional[KernelConfig] = None,
              logger: Optional[logging.Logger] = None) -> Program:
    """
    Generate the control program of a topology.

    Args:
        topology(Topology): A stage graph; validated here.
        mode(TimingMode): two_tick (estimate tick then compute tick) or one_tick.
        bug(Bug): Optional fault injection.
        bug_stage(str): Stage receiving the fault; defaults to the stage after the source (or the
            first sink for missing_sink_ack).
        gated(bool): Whether sources wait for a `Data_<src>` input before firing.
        provider(PayloadProvider): Supplies Mark/Compute payloads; pure signals are used without.
        kernel_config(KernelConfig): Kernel settings.
        logger(logging.Logger): Logger handed to the program.

    Returns:
        Program: Stage, latch, Rendez-Vous and launcher automata with the Rendez-Vous suspension
        bound, halted by `User_Quit`.

    Raises:
        CyclicTopology: If the graph has a cycle.
        DanglingPort: If a port is left unbound.
        ValueError: If the fault cannot be injected as requested.
    """
    topology.validate()
    options = ProtocolOptions(mode, bug, bug_stage or _default_bug_stage(topology, bug), gated)
    _check_bug(topology, options)
    roles = roles_of(topology)

    automata = []
    for role in roles:
        automata.extend(StageAutomatonFactory(role, options, provider).automata())
    automata.append(launcher_automaton(roles))
    program = declare_program(automata, protocol_signals(roles, options, provider is not None),
                              halt_signal=USER_QUIT, config=kernel_config, logger=logger)
    if mode is TimingMode.TWO_TICK:
        for up, down in topology.edges:
            rendezvous_guard(program, up, down)
    return program


def rendezvous_guard(program: Program, up: str, down: str):
    """
    Suspend `up` while `down` asserts Take and resume it on Cancel. Re-binding is a no-op.

    Raises:
        ValueError: If the program has no Rendez-Vous signals for the edge up->down.
        NotSuspendable: If `up` is not suspendable.
    """
    take, cancel = take_signal(down, up), cancel_signal(down, up)
    if take not in program.signals or cancel not in program.signals:
        raise ValueError(f"No Rendez-Vous edge {up}->{down} in the program")
    program.bind_suspension(up, take, cancel)


# --------------------------------------------------------------------------------------------------
#  Runtime
# --------------------------------------------------------------------------------------------------

@dataclass
class StageCounters:
    """Monotone per-stage counters of a run."""
    estimates: int = 0
    computes: int = 0
    acks: int = 0


class PipelineRun:
    """
    A data-reactive execution of a topology.

    Each tick: stages in their compute phase compute (two_tick), the control program reacts, fired
    stages estimate, and (one_tick) fired stages compute. Ranges handed over on an edge are queued
    at the downstream stage until it fires. Sources are gated by `Data_<src>`, present while the
    input stream still holds a frame.
    """

    def __init__(self, topology: Topology, inputs: Optional[Mapping[str, bytes]] = None,
                 config: Optional[SchedulerConfig] = None,
                 kernel_config: Optional[KernelConfig] = None,
                 trace: Optional[TraceWriter] = None, logger: Optional[logging.Logger] = None):
        """
        Args:
            topology(Topology): The stage graph.
            inputs(Mapping[str, bytes]): Stream bytes per source.
            config(SchedulerConfig): Timing mode, worker count and tick limit.
            kernel_config(KernelConfig): Kernel settings.
            trace(TraceWriter): Optional sink for one trace line per reaction.
            logger(logging.Logger): Optional logger.
        """
        self.logger = logger or logging.getLogger(__name__)
        self.config = config or SchedulerConfig()
        self.kernel_config = kernel_config
        self.trace = trace
        self.pipeline = Pipeline(topology, inputs, self.logger)
        self.program = self._build(self.topology)

        self.reactions: List[Reaction] = []
        self.counters: Dict[str, StageCounters] = {n: StageCounters() for n in self.pipeline.stages}
        self.latched: Dict[str, Deque[SampleRange]] = {}
        self.in_flight: Dict[str, SampleRange] = {}
        self.produced = 0
        self.consumed = 0
        self.skipped = 0
        self.first_source_compute: Optional[int] = None
        self.last_sink_compute: Optional[int] = None

        self._marked: Dict[str, SampleRange] = {}
        self._handed: Dict[str, SampleRange] = {}
        self._pending_switch: Optional[Tuple[str, Topology]] = None
        self.workers = self.config.workers or psutil.cpu_count(logical=False) or 1
        self._executor = ThreadPoolExecutor(self.workers) if self.workers > 1 else None

    @property
    def topology(self) -> Topology:
        """The current topology (changes on retopologize)."""
        return self.pipeline.topology

    @property
    def two_tick(self) -> bool:
        """True in the two-tick protocol."""
        return self.config.mode is TimingMode.TWO_TICK

    @property
    def tick(self) -> int:
        """Ordinal of the next reaction."""
        return self.program.tick

    def _build(self, topology: Topology) -> Program:
        return build_drm(topology, self.config.mode, gated=True, provider=self,
                         kernel_config=self.kernel_config, logger=self.logger)

    # ----------------------------------------------------------------------------------------------
    #  Payload provider
    # ----------------------------------------------------------------------------------------------

    def mark(self, stage: str) -> SampleRange:
        """Estimate of stage in the current tick, performed once on first request."""
        if stage not in self._marked:
            self._marked[stage] = self._estimate(stage)
        return self._marked[stage]

    def handed_over(self, stage: str) -> SampleRange:
        """Range stage hands downstream in the current tick."""
        if self.two_tick:
            return self._handed[stage]
        return self.mark(stage)

    def _estimate(self, name: str) -> SampleRange:
        if self.pipeline.stages[name].descriptor.is_source:
            estimated = self.pipeline.estimate(name)
        else:
            queue = self.latched.setdefault(name, deque())
            if not queue:
                raise InsufficientData(f"Stage {name} fired without a handed-over range")
            estimated = self.pipeline.estimate(name, queue.popleft())
        self.counters[name].estimates += 1
        self.in_flight[name] = estimated
        return estimated

    # ----------------------------------------------------------------------------------------------
    #  Ticks
    # ----------------------------------------------------------------------------------------------

    def _launch_inputs(self) -> Dict[str, object]:
        match self.tick:
            case 0:
                return {}
            case 1:
                return {IP_ADDR: None}
            case 2:
                return {INIT_RANGE: self.topology.init_range}
            case _:
                return {}

    def _source_inputs(self, data_ready: Mapping[str, bool]) -> Dict[str, object]:
        if self.tick < 2:
            return {}
        return {data_signal(src): None for src in self.topology.sources
                if src not in self.in_flight and self.pipeline.has_frame(src)
                and data_ready.get(src, True)}

    def _compute_all(self, names: List[str]) -> Dict[str, SampleRange]:
        """Compute the in-flight range of every named stage, one compute per stage."""
        work = [(name, self.in_flight.pop(name)) for name in names]
        if self._executor is not None and len(work) > 1:
            futures = [self._executor.submit(self.pipeline.compute, n, r) for n, r in work]
            results = [f.result() for f in futures]
        else:
            results = [self.pipeline.compute(n, r) for n, r in work]

        produced = {}
        for (name, _), result in zip(work, results):
            self._account(name, result)
            produced[name] = result
        return produced

    def _account(self, name: str, result: SampleRange):
        descriptor = self.pipeline.stages[name].descriptor
        self.counters[name].computes += 1
        if descriptor.is_source:
            self.produced += 1
            if self.first_source_compute is None:
                self.first_source_compute = self.tick
        if descriptor.is_sink:
            self.last_sink_compute = self.tick
            if result.is_skip:
                self.skipped += 1
            else:
                self.consumed += 1
        self.logger.debug(f"tick {self.tick}: {name} computed {result}")

    def _computing_stages(self) -> List[str]:
        """Stages in their compute phase and not suspended (two_tick)."""
        return [name for name in self.topology.order()
                if LocalState.decode(self.program.state_of(name)).phase == 'COMP'
                and not self.program.is_suspended(name)]

    def step(self, data_ready: Optional[Mapping[str, bool]] = None) -> Reaction:
        """
        Execute one tick.

        Args:
            data_ready(Mapping[str, bool]): Optional per-source availability; a source is offered
                data only if its stream still holds a frame and it is not set to False here.

        Returns:
            Reaction: The control-plane reaction of the tick.
        """
        self._apply_pending_switch()
        tick = self.tick
        inputs = self._launch_inputs()
        inputs.update(self._source_inputs(data_ready or {}))

        self._handed = self._compute_all(self._computing_stages()) if self.two_tick else {}
        reaction = self.program.react(inputs)

        fired = [name for name in self.topology.order() if reaction.emitted(fire_signal(name))]
        for name in fired:
            self.mark(name)
        produced = self._handed if self.two_tick else self._compute_all(fired)

        for up, down in self.topology.edges:
            if reaction.emitted(compute_signal(up, down)):
                self.latched.setdefault(down, deque()).append(produced[up])
            if ack_signal(down, up) in reaction.emitted_by(down):
                self.counters[down].acks += 1

        self._marked = {}
        self._handed = {}
        self.reactions.append(reaction)
        if self.trace is not None:
            self.trace.write(reaction)
        self.logger.debug(f"tick {tick}: fired {fired}")
        return reaction

    @property
    def launched(self) -> bool:
        """True once the launcher handed the initial range."""
        return self.program.state_of(LAUNCHER) == 'RUNNING'

    @property
    def drained(self) -> bool:
        """True when every frame of every source went through and nothing is in flight."""
        if not self.launched:
            return False
        return (not any(self.pipeline.has_frame(src) for src in self.topology.sources)
                and not self.in_flight
                and not any(self.latched.values())
                and not any(s.pending for s in self.pipeline.stages.values())
                and all(c.fill == 0 for c in self.pipeline.connectors.values()))

    def run(self, ticks: Optional[int] = None) -> "PipelineRun":
        """
        Drive the run.

        Args:
            ticks(int): Exact number of reactions to execute; None runs until the pipeline drains
                or the configured tick limit is reached.
        """
        if ticks is not None:
            for _ in range(ticks):
                self.step()
            return self
        while not self.drained:
            if self.tick >= self.config.tick_limit:
                self.logger.warning(f"Tick limit {self.config.tick_limit} reached before the "
                                    f"pipeline drained")
                break
            self.step()
        self.logger.info(self.summary_line())
        return self

    def quit(self) -> Reaction:
        """Halt the control program with User_Quit."""
        reaction = self.program.react({USER_QUIT: None})
        self.reactions.append(reaction)
        if self.trace is not None:
            self.trace.write(reaction, note="quit")
        return reaction

    def close(self):
        """Release the worker pool."""
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None

    # ----------------------------------------------------------------------------------------------
    #  Results
    # ----------------------------------------------------------------------------------------------

    def outputs(self) -> Dict[str, bytes]:
        """Bytes collected by every current sink."""
        return self.pipeline.outputs()

    @property
    def span(self) -> int:
        """Ticks from the first source compute to the last sink compute, both included."""
        if self.first_source_compute is None or self.last_sink_compute is None:
            return 0
        return self.last_sink_compute - self.first_source_compute + 1

    def summary(self) -> Dict[str, object]:
        """Structured run summary."""
        return {
            'stages': len(self.pipeline.stages),
            'ticks': len(self.reactions),
            'produced': self.produced,
            'consumed': self.consumed,
            'skipped': self.skipped,
            'span': self.span,
            'counters': {n: vars(c) for n, c in self.counters.items()},
        }

    def summary_line(self) -> str:
        """`stages=<n> ticks=<t> produced=<p> consumed=<c>`."""
        return (f"stages={len(self.pipeline.stages)} ticks={len(self.reactions)} "
                f"produced={self.produced} consumed={self.consumed}")

    def summary_record(self) -> str:
        """The summary as a JSON record."""
        return json.dumps(self.summary(), sort_keys=True)

    # ----------------------------------------------------------------------------------------------
    #  Retopology
    # ----------------------------------------------------------------------------------------------

    def request_switch(self, root: str, topology: Topology):
        """
        Switch to `topology` at the first reaction boundary where `root` holds no estimated range;
        immediately if it holds none now.
        """
        self._pending_switch = (root, topology)
        self._apply_pending_switch()

    def _apply_pending_switch(self):
        if self._pending_switch is None:
            return
        root, topology = self._pending_switch
        if self.pipeline.stages[root].pending:
            self.logger.debug(f"Retopology around {root} deferred: range in flight")
            return
        self._pending_switch = None
        self._switch(root, topology)

    def _drop(self, name: str):
        stale = list(self.latched.pop(name, ()))
        if name in self.in_flight:
            stale.append(self.in_flight.pop(name))
        for sample_range in stale:
            self.logger.warning(f"Retopology skipped {sample_range} pending at {name}")
            self.skipped += 1
        self.counters.pop(name, None)

    def _carried_states(self, program: Program, root: str,
                        root_downstream: List[str]) -> GlobalState:
        """Control state of the rebuilt program: survivors keep theirs, new stages start idle."""
        old = self.program
        before = old.snapshot()
        launched = old.state_of(LAUNCHER) not in ('START', 'WAIT_IP')
        stages = {d.name for d in self.topology.stages}
        states, suspended = [], []
        for automaton in program.automata:
            name = automaton.name
            if name == root:
                held = LocalState.decode(old.state_of(root))
                credit = dict(zip(root_downstream, held.credits))
                states.append(LocalState(held.phase, tuple(
                    credit.get(w, True) for w in self.topology.downstream(root))).encode())
            elif name in before.layout:
                states.append(before.state_of(name))
            elif name in stages:
                fresh = LocalState('IDLE', (True,) * len(self.topology.downstream(name)))
                states.append(fresh.encode() if launched else 'INIT')
            else:
                states.append(automaton.initial)
            suspended.append(name in before.layout and old.is_suspended(name))
        return GlobalState(tuple(states), tuple(suspended), frozenset(), False,
                           tuple(a.name for a in program.automata))

    def _switch(self, root: str, topology: Topology):
        """Swap topology and control program between two ticks."""
        root_downstream = self.topology.downstream(root)
        dropped = self.pipeline.rewire(topology)
        for name in dropped:
            self._drop(name)
        for descriptor in topology.stages:
            self.counters.setdefault(descriptor.name, StageCounters())

        program = self._build(topology)
        program.restore(self._carried_states(program, root, root_downstream))
        program.tick = self.program.tick
        self.program = program
        self.logger.info(f"Retopology at tick {self.tick} around {root}: dropped {dropped}")


def step_pipeline(run: PipelineRun, data_ready: Optional[Mapping[str, bool]] = None) -> Reaction:
    """Execute one tick of a run (see PipelineRun.step)."""
    return run.step(data_ready)


def _switched_topology(current: Topology, root: str, removed: Set[Edge], added: Set[Edge],
                       catalog: Optional[Topology], logger: logging.Logger) -> Topology:
    """The topology after the switch, with spare stages and their edges taken from the catalog."""
    graph = current.graph.copy()
    graph.remove_edges_from(removed)
    keep = set()
    for source in current.sources:
        keep |= {source} | nx.descendants(graph, source)

    spare: List[str] = []
    for _, down in sorted(added):
        if down not in keep:
            spare += [down] + sorted(nx.descendants(catalog.graph, down))

    rebuilt = Topology(current.name, current.connector_config, current.init_range, logger)
    for descriptor in current.stages:
        if descriptor.name in keep:
            rebuilt.add_stage(descriptor)
    for name in dict.fromkeys(spare):
        rebuilt.add_stage(catalog.stage(name))
    for up, down in current.edges:
        if (up, down) not in removed and down in keep:
            connector = current.connector(up, down)
            rebuilt.connect(up, down, connector.rate, connector.sample_width)
    upstream = current.stage(root)
    for up, down in sorted(added):
        rebuilt.connect(up, down, upstream.out_rate, upstream.out_width)
    for up, down in catalog.edges if catalog is not None else ():
        if up in spare and down in spare:
            connector = catalog.connector(up, down)
            rebuilt.connect(up, down, connector.rate, connector.sample_width)
    return rebuilt.validate()


def retopologize(run: PipelineRun, removed: Iterable[Edge], added: Iterable[Edge],
                 catalog: Optional[Topology] = None):
    """
    Switch a running pipeline from one set of output edges of a stage to another (e.g. from the AM
    to the FM demodulation path behind a channel filter).

    Stages only reachable through removed edges are dropped and the ranges queued for them are
    skipped. Stages behind added edges that are not part of the run are taken from `catalog`
    together with everything downstream of them there. The switch happens at the next reaction
    boundary at which the common upstream stage holds no estimated range.

    Args:
        run(PipelineRun): The running pipeline.
        removed(Iterable[Edge]): Edges switched out.
        added(Iterable[Edge]): Edges switched in.
        catalog(Topology): Spare stages, not necessarily a valid topology on its own.

    Raises:
        TopologyError: If the edges do not share one upstream stage, a removed edge does not
            exist, or a new stage is unknown.
        IncompatibleRates: If a new downstream stage does not accept the upstream rate or width.
    """
    removed, added = set(removed), set(added)
    roots = {up for up, _ in removed | added}
    if len(roots) != 1:
        raise TopologyError(f"Switched edges must share a common upstream stage, got {roots}")
    root = roots.pop()
    current = set(run.topology.edges)
    if not removed & current and added <= current:
        run.logger.debug(f"Retopology around {root}: path already active")
        return
    if not removed <= current:
        raise TopologyError(f"Edges {sorted(removed - current)} are not part of the run")

    known = {d.name for d in run.topology.stages}
    spare = {d.name for d in catalog.stages} if catalog is not None else set()
    upstream = run.topology.stage(root)
    for _, down in sorted(added):
        if down not in known and down not in spare:
            raise TopologyError(f"Stage {down} is neither in the run nor in the catalog")
        target = run.topology.stage(down) if down in known else catalog.stage(down)
        if target.in_rate != upstream.out_rate or target.in_width != upstream.out_width:
            raise IncompatibleRates(
                f"{root} produces rate {upstream.out_rate} width {upstream.out_width}, {down} "
                f"expects rate {target.in_rate} width {target.in_width}")
    run.request_switch(root, _switched_topology(run.topology, root, removed, added, catalog,
                                                run.logger))
