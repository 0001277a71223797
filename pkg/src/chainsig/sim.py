"""Seeded discrete-event model of block verification cost.

Blocks are created at exponentially spaced instants; each block carries
a Poisson-distributed number of transactions, and verifying one
transaction signature costs a per-scheme time drawn from the measured
verify statistic. The reported metric is the mean per-block
verification cost over a run, aggregated over many independent runs.

Network propagation, forks and incentives are out of scope: block
production is a fixed schedule and verification cost is the only
quantity modeled.
"""

from __future__ import annotations

import enum
import heapq
import itertools
from dataclasses import dataclass
from statistics import fmean

import numpy as np

from .bench import StatSummary, summarize
from .errors import UnknownModel

_SEED_MASK = (1 << 64) - 1


class ChainModel(enum.Enum):
    """Supported network profiles; values match the CLI encoding."""

    BITCOIN = 1
    ETHEREUM = 2

    @property
    def label(self) -> str:
        return self.name.capitalize()


class VerifySampling(enum.Enum):
    """Per-block signature-verify cost draw.

    MEAN_ONLY uses the measured mean exactly (calibration mode);
    NORMAL_PER_BLOCK draws Normal(mean, std) once per block, clamped at
    zero.
    """

    MEAN_ONLY = "mean-only"
    NORMAL_PER_BLOCK = "normal-per-block"


class EventKind(enum.Enum):
    BLOCK_CREATED = "block-created"
    BLOCK_VERIFIED = "block-verified"


@dataclass(frozen=True)
class SimulationConfig:
    model: ChainModel
    tx_per_block_mean: float
    blocks_per_run: int
    block_interval_s: float
    runs: int
    seed: int
    verify_sampling: VerifySampling

    def __post_init__(self) -> None:
        if self.tx_per_block_mean <= 0:
            raise ValueError("tx_per_block_mean must be > 0")
        if self.blocks_per_run < 1:
            raise ValueError("blocks_per_run must be >= 1")
        if self.block_interval_s <= 0:
            raise ValueError("block_interval_s must be > 0")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")


@dataclass(frozen=True)
class SimEvent:
    timestamp_s: float
    kind: EventKind
    block_id: int
    tx_count: int


@dataclass(frozen=True)
class RunResult:
    mean_block_verify_ms: float
    blocks: int
    total_tx: int


@dataclass(frozen=True)
class SimulationResult:
    per_run: tuple[RunResult, ...]
    batch: StatSummary


class EventQueue:
    """Min-heap of SimEvents ordered by timestamp, ties by insertion."""

    def __init__(self) -> None:
        self._heap: list[tuple[float, int, SimEvent]] = []
        self._sequence = itertools.count()

    def push(self, event: SimEvent) -> None:
        heapq.heappush(self._heap, (event.timestamp_s, next(self._sequence), event))

    def pop(self) -> SimEvent:
        return heapq.heappop(self._heap)[2]

    def __len__(self) -> int:
        return len(self._heap)


# network profiles: expected transactions per block and mean block spacing
_MODEL_DEFAULTS = {
    ChainModel.BITCOIN: (1729.0, 600.0),
    ChainModel.ETHEREUM: (131.0, 13.0),
}

DEFAULT_BLOCKS_PER_RUN = 16
DEFAULT_SIM_RUNS = 1000
DEFAULT_SEED = 42


def default_config(model: ChainModel | int) -> SimulationConfig:
    """Baseline configuration for a chain model (CLI values 1 and 2)."""
    try:
        resolved = model if isinstance(model, ChainModel) else ChainModel(model)
    except ValueError:
        raise UnknownModel(f"unknown chain model: {model!r}") from None
    tx_mean, interval = _MODEL_DEFAULTS[resolved]
    return SimulationConfig(
        model=resolved,
        tx_per_block_mean=tx_mean,
        blocks_per_run=DEFAULT_BLOCKS_PER_RUN,
        block_interval_s=interval,
        runs=DEFAULT_SIM_RUNS,
        seed=DEFAULT_SEED,
        verify_sampling=VerifySampling.NORMAL_PER_BLOCK,
    )


def simulate_run(
    config: SimulationConfig,
    verify_stat: StatSummary,
    rng: np.random.Generator,
) -> RunResult:
    """One run: schedule blocks_per_run blocks, verify each on arrival.

    Block verification cost is tx_count times the per-signature draw.
    The BlockVerified events only close the loop on the event schedule;
    all bookkeeping happens at BlockCreated.
    """
    queue = EventQueue()
    clock = 0.0
    for block_id in range(config.blocks_per_run):
        clock += float(rng.exponential(config.block_interval_s))
        queue.push(
            SimEvent(
                timestamp_s=clock,
                kind=EventKind.BLOCK_CREATED,
                block_id=block_id,
                tx_count=int(rng.poisson(config.tx_per_block_mean)),
            )
        )
    costs: list[float] = []
    total_tx = 0
    while queue:
        event = queue.pop()
        if event.kind is not EventKind.BLOCK_CREATED:
            continue
        if config.verify_sampling is VerifySampling.MEAN_ONLY:
            per_signature_ms = verify_stat.mean_ms
        else:
            per_signature_ms = max(
                float(rng.normal(verify_stat.mean_ms, verify_stat.std_ms)), 0.0
            )
        cost_ms = event.tx_count * per_signature_ms
        costs.append(cost_ms)
        total_tx += event.tx_count
        queue.push(
            SimEvent(
                timestamp_s=event.timestamp_s + cost_ms / 1000.0,
                kind=EventKind.BLOCK_VERIFIED,
                block_id=event.block_id,
                tx_count=event.tx_count,
            )
        )
    return RunResult(
        mean_block_verify_ms=fmean(costs),
        blocks=len(costs),
        total_tx=total_tx,
    )


def _run_rng(seed: int, run_index: int) -> np.random.Generator:
    # mixing (seed, run index) through SeedSequence keeps the streams
    # independent of execution order
    sequence = np.random.SeedSequence(
        entropy=seed & _SEED_MASK, spawn_key=(run_index,)
    )
    return np.random.Generator(np.random.PCG64(sequence))


def simulate_batch(
    config: SimulationConfig, verify_stat: StatSummary
) -> SimulationResult:
    """config.runs independent runs; batch stats over per-run means."""
    per_run = tuple(
        simulate_run(config, verify_stat, _run_rng(config.seed, index))
        for index in range(config.runs)
    )
    batch = summarize([run.mean_block_verify_ms for run in per_run])
    return SimulationResult(per_run=per_run, batch=batch)


def config_echo(config: SimulationConfig) -> tuple[str, ...]:
    """Flat key=value lines describing a config, for CSV comment headers."""
    return (
        f"model={config.model.label}",
        f"tx_per_block_mean={config.tx_per_block_mean!r}",
        f"blocks_per_run={config.blocks_per_run}",
        f"block_interval_s={config.block_interval_s!r}",
        f"runs={config.runs}",
        f"seed={config.seed}",
        f"verify_sampling={config.verify_sampling.value}",
    )
