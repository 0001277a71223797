"""Wall-clock measurement of keypair, sign and verify operations.

Protocol: a configurable number of warm-up invocations whose timings
are discarded, then the measured runs, each bracketed by two monotonic
clock readings. Means and sample standard deviations are reported per
operation; no outlier trimming of any kind is applied.
"""

from __future__ import annotations

import itertools
import os
import platform
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .errors import ClockUnavailable, CorrectnessViolation, EmptySamples
from .schemes import SchemeInstance

#: verify timings cycle over this many precomputed (message, signature)
#: pairs; enough to defeat trivial caching without paying sign cost per run
VERIFY_POOL_SIZE = 128

_RESOLUTION_PAIRS = 1_000_000


@dataclass(frozen=True)
class StatSummary:
    """Mean and sample standard deviation over n measured durations."""

    mean_ms: float
    std_ms: float
    n: int


@dataclass(frozen=True)
class RunPlan:
    """Iteration counts for one benchmark: warmup discarded, runs kept."""

    warmup: int = 1000
    runs: int = 10000
    message_len: int = 32

    def __post_init__(self) -> None:
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if self.warmup < 0:
            raise ValueError(f"warmup must be >= 0, got {self.warmup}")
        if self.message_len < 1:
            raise ValueError(f"message_len must be >= 1, got {self.message_len}")


@dataclass(frozen=True)
class EnvironmentInfo:
    """Host description attached to benchmark records."""

    cpu_model: str
    memory_bytes: int
    os_descriptor: str
    timer_resolution_ns: float


@dataclass(frozen=True)
class RawSamples:
    keypair: tuple[float, ...]
    sign: tuple[float, ...]
    verify: tuple[float, ...]


@dataclass(frozen=True)
class BenchmarkRecord:
    descriptor: object
    environment: EnvironmentInfo
    keypair_stat: StatSummary
    sign_stat: StatSummary
    verify_stat: StatSummary
    raw_samples: RawSamples | None = None


def _monotonic_clock() -> Callable[[], int]:
    try:
        info = time.get_clock_info("perf_counter")
    except ValueError as exc:  # pragma: no cover - perf_counter always exists
        raise ClockUnavailable(f"no perf_counter clock: {exc}") from exc
    if not info.monotonic:  # pragma: no cover - never true on CPython
        raise ClockUnavailable("perf_counter is not monotonic on this platform")
    return time.perf_counter_ns


def measure_timer_resolution(pairs: int = _RESOLUTION_PAIRS) -> float:
    """Smallest positive delta between consecutive clock readings, in ns.

    Scans at least 10^6 read pairs by default; the result reflects the
    effective granularity of timed intervals (clock quantum plus the
    cost of a reading).
    """
    clock = _monotonic_clock()
    best = None
    previous = clock()
    for _ in range(pairs):
        current = clock()
        delta = current - previous
        if delta > 0 and (best is None or delta < best):
            best = delta
        previous = current
    if best is None:
        raise ClockUnavailable(f"clock never advanced over {pairs} read pairs")
    return float(best)


def time_operation(
    op: Callable[..., object],
    plan: RunPlan,
    setup: Callable[[], object] | None = None,
) -> list[float]:
    """Run op warmup + runs times; return the last runs durations in ms.

    With setup given, each invocation receives setup()'s result as its
    single argument; setup executes outside the timed window. Failures
    during warm-up abort before any measurement is taken.
    """
    clock = _monotonic_clock()
    samples: list[float] = []
    if setup is None:
        for _ in range(plan.warmup):
            op()
        for _ in range(plan.runs):
            start = clock()
            op()
            end = clock()
            samples.append((end - start) / 1e6)
    else:
        for _ in range(plan.warmup):
            op(setup())
        for _ in range(plan.runs):
            argument = setup()
            start = clock()
            op(argument)
            end = clock()
            samples.append((end - start) / 1e6)
    return samples


def summarize(samples: Iterable[float]) -> StatSummary:
    """Arithmetic mean and sample (n-1) standard deviation; n=1 gives std 0."""
    array = np.asarray(list(samples), dtype=np.float64)
    if array.size == 0:
        raise EmptySamples("cannot summarize an empty sample list")
    mean = float(array.mean())
    std = float(array.std(ddof=1)) if array.size > 1 else 0.0
    return StatSummary(mean_ms=mean, std_ms=std, n=int(array.size))


def benchmark_variant(
    instance: SchemeInstance,
    plan: RunPlan,
    environment: EnvironmentInfo | None = None,
    collect_raw: bool = False,
) -> BenchmarkRecord:
    """Measure keypair, sign and verify for one variant.

    keypair generates a fresh pair every iteration. sign reuses one
    keypair and signs a fresh random message of plan.message_len bytes
    per iteration. verify cycles over precomputed (message, signature)
    pairs; every timed verification must return true, otherwise the
    variant is rejected with CorrectnessViolation.
    """
    variant = instance.descriptor.variant
    env = environment if environment is not None else probe_environment()

    keypair_samples = time_operation(instance.keypair, plan)

    public_key, secret_key = instance.keypair()
    sign_samples = time_operation(
        lambda message: instance.sign(secret_key, message),
        plan,
        setup=lambda: os.urandom(plan.message_len),
    )

    pool = []
    for _ in range(min(plan.runs, VERIFY_POOL_SIZE)):
        message = os.urandom(plan.message_len)
        pool.append((message, instance.sign(secret_key, message)))
    pairs = itertools.cycle(pool)

    def checked_verify(pair: tuple[bytes, bytes]) -> None:
        message, signature = pair
        if not instance.verify(public_key, message, signature):
            raise CorrectnessViolation(
                f"{variant}: verification of a freshly produced signature"
                " returned false"
            )

    verify_samples = time_operation(checked_verify, plan, setup=lambda: next(pairs))

    raw = None
    if collect_raw:
        raw = RawSamples(
            keypair=tuple(keypair_samples),
            sign=tuple(sign_samples),
            verify=tuple(verify_samples),
        )
    return BenchmarkRecord(
        descriptor=instance.descriptor,
        environment=env,
        keypair_stat=summarize(keypair_samples),
        sign_stat=summarize(sign_samples),
        verify_stat=summarize(verify_samples),
        raw_samples=raw,
    )


def _cpu_model() -> str:
    try:
        with open("/proc/cpuinfo", encoding="utf-8") as handle:
            for line in handle:
                if line.startswith("model name"):
                    return line.split(":", 1)[1].strip()
    except OSError:
        pass
    return platform.processor() or platform.machine() or "unknown"


def _memory_bytes() -> int:
    try:
        import psutil

        return int(psutil.virtual_memory().total)
    except Exception:
        try:
            return os.sysconf("SC_PHYS_PAGES") * os.sysconf("SC_PAGE_SIZE")
        except (ValueError, OSError, AttributeError):
            return 0


def probe_environment(resolution_pairs: int = _RESOLUTION_PAIRS) -> EnvironmentInfo:
    """Best-effort host introspection; unknown fields degrade gracefully."""
    return EnvironmentInfo(
        cpu_model=_cpu_model(),
        memory_bytes=_memory_bytes(),
        os_descriptor=platform.platform(),
        timer_resolution_ns=measure_timer_resolution(resolution_pairs),
    )


def write_raw_samples(record: BenchmarkRecord, directory: Path) -> list[Path]:
    """Dump raw per-run durations, one file per operation.

    Format: newline-separated decimal milliseconds with six fractional
    digits. Requires the record to have been collected with raw samples.
    """
    if record.raw_samples is None:
        raise ValueError("record carries no raw samples")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    variant = record.descriptor.variant
    for operation in ("keypair", "sign", "verify"):
        samples = getattr(record.raw_samples, operation)
        path = directory / f"{variant}_{operation}.txt"
        path.write_text(
            "".join(f"{value:.6f}\n" for value in samples), encoding="utf-8"
        )
        written.append(path)
    return written
