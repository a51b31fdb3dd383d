"""Deterministic, single-process simulation of the AMPC execution model.

A round runs a batch of tasks (one task = one machine for one round). Tasks read the
table produced by the previous round adaptively, one query at a time, and buffer their
writes; the buffer becomes the readable table only after the round barrier. Every read,
write and declared scratch word is charged to the task, and the per-task total is
checked against the local memory budget ``ceil(C * n**epsilon)``.

Subroutines the algorithms borrow from the AMPC literature as black boxes (sorting,
prefix sums, connectivity, rooting, MST, RMQ construction) go through
:meth:`AmpcRuntime.primitive`, which computes the result centrally and charges a fixed
``ceil(1/epsilon)`` rounds for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Hashable, Iterable, Mapping

DEFAULT_CONSTANT = 8.0
KEPT_VIOLATIONS = 100  # violation records kept per run; all of them are counted


class NondeterminismError(RuntimeError):
    """Two tasks of one round wrote different values under the same key."""


class BudgetExceeded(RuntimeError):
    """A task exceeded the local memory budget in strict mode."""


@dataclass(frozen=True)
class AmpcConfig:
    epsilon: float
    n: int
    m: int = 0
    constant: float = DEFAULT_CONSTANT
    strict: bool = False

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.n < 1 or self.m < 0:
            raise ValueError("problem size must be positive")
        if self.constant <= 0:
            raise ValueError("budget constant must be positive")

    @property
    def local_budget(self) -> int:
        return max(1, math.ceil(self.constant * self.n ** self.epsilon))

    @property
    def total_budget(self) -> int:
        logn = max(1, math.ceil(math.log2(max(self.n, 2))))
        return max(1, math.ceil(self.constant * (self.n + self.m) * logn * logn))

    @property
    def primitive_rounds(self) -> int:
        return math.ceil(1.0 / self.epsilon)


@dataclass
class AmpcStats:
    rounds: int = 0
    peak_task_words: int = 0
    total_table_words: int = 0
    adaptive_queries: int = 0
    tasks: int = 0
    budget_violations: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "rounds": self.rounds,
            "peak_task_words": self.peak_task_words,
            "total_table_words": self.total_table_words,
            "adaptive_queries": self.adaptive_queries,
        }


@dataclass(frozen=True)
class BudgetViolation:
    round: int
    label: str
    task: int
    words: int
    budget: int


@dataclass
class RoundAccount:
    label: str
    tasks: int = 0
    queries: int = 0
    peak_task_words: int = 0
    written_words: int = 0
    violation_count: int = 0
    violations: list[BudgetViolation] = field(default_factory=list)


def words(value: Any) -> int:
    """Word size used for accounting: scalars cost one word, containers their contents."""
    kind = type(value)
    if kind is tuple or kind is list:
        total = 0
        for x in value:
            inner = type(x)
            total += words(x) if inner is tuple or inner is list or inner in _SIZED else 1
        return total or 1
    if kind in _SIZED:
        return len(value) or 1
    return 1


_SIZED = frozenset({set, frozenset, dict, str, bytes})


_MISSING = object()


class TaskContext:
    """Handle given to a task: adaptive reads of the previous table, buffered writes."""

    __slots__ = ("_table", "_sizes", "_buffer", "reads", "read_words", "write_words", "scratch_words")

    def __init__(self, table: Mapping, buffer: dict, sizes: Mapping | None = None) -> None:
        self._table = table
        self._sizes = {} if sizes is None else sizes
        self._buffer = buffer
        self.reads = 0
        self.read_words = 0
        self.write_words = 0
        self.scratch_words = 0

    def _reset(self) -> None:
        self.reads = self.read_words = self.write_words = self.scratch_words = 0

    def read(self, key: Hashable, default: Any = None) -> Any:
        self.reads += 1
        value = self._table.get(key, _MISSING)
        if value is _MISSING:
            self.read_words += 1
            return default
        size = self._sizes.get(key)
        self.read_words += words(value) if size is None else size
        return value

    def charge(self, queries: int) -> None:
        """Account for ``queries`` one-word reads performed through an external index."""
        self.reads += queries
        self.read_words += queries

    def write(self, key: Hashable, value: Any) -> None:
        buffered = self._buffer.get(key, _MISSING)
        if buffered is not _MISSING and buffered != value:
            raise NondeterminismError(f"conflicting writes to key {key!r}")
        self._buffer[key] = value
        self.write_words += words(value)

    def scratch(self, amount: int) -> None:
        if amount > self.scratch_words:
            self.scratch_words = amount

    @property
    def total_words(self) -> int:
        return self.read_words + self.write_words + self.scratch_words


Task = Callable[[TaskContext], None]


def run_round(
    tasks: Iterable[Task],
    table_prev: Mapping,
    config: AmpcConfig,
    label: str = "",
    sizes: Mapping | None = None,
    round_no: int = -1,
) -> tuple[dict, RoundAccount]:
    """Execute one round as a pure function: returns only this round's writes.

    ``sizes`` optionally caches the word size of each table entry.
    """
    buffer: dict = {}
    account = RoundAccount(label)
    ctx = TaskContext(table_prev, buffer, sizes)
    budget = config.local_budget
    for index, task in enumerate(tasks):
        ctx._reset()
        task(ctx)
        used = ctx.total_words
        account.tasks += 1
        account.queries += ctx.reads
        account.written_words += ctx.write_words
        if used > account.peak_task_words:
            account.peak_task_words = used
        if used > budget:
            if config.strict:
                raise BudgetExceeded(f"task {index} of round {label!r} used {used} > {budget} words")
            account.violation_count += 1
            if len(account.violations) < KEPT_VIOLATIONS:
                account.violations.append(BudgetViolation(round_no, label, index, used, budget))
    return buffer, account


class AmpcRuntime:
    """Stateful run: a shared table plus cumulative statistics."""

    def __init__(self, config: AmpcConfig) -> None:
        self.config = config
        self.table: dict = {}
        self._sizes: dict = {}
        self._table_words = 0
        self._stats = AmpcStats()
        self.violations: list[BudgetViolation] = []
        self.log: list[tuple[str, int]] = []

    def fork(self) -> AmpcRuntime:
        return AmpcRuntime(self.config)

    def load(self, data: Mapping) -> None:
        """Place input data in the table without charging a round."""
        self._apply(data)

    def _apply(self, writes: Mapping) -> None:
        table, sizes = self.table, self._sizes
        delta = 0
        for key, value in writes.items():
            delta -= sizes.get(key, 0)
            size = words(value)
            table[key] = value
            sizes[key] = size
            delta += size
        self._table_words += delta
        if self._table_words > self._stats.total_table_words:
            self._stats.total_table_words = self._table_words

    def map_round(self, label: str, items: Iterable, fn: Callable[[TaskContext, Any], None]) -> None:
        """One round with one task per item; ``fn(ctx, item)`` is the task body."""
        self.run_round(((lambda ctx, item=item: fn(ctx, item)) for item in items), label)

    def run_round(self, tasks: Iterable[Task], label: str = "") -> dict:
        round_no = self._stats.rounds + 1
        writes, account = run_round(tasks, self.table, self.config, label, self._sizes, round_no)
        self._stats.rounds = round_no
        self._stats.tasks += account.tasks
        self._stats.adaptive_queries += account.queries
        if account.peak_task_words > self._stats.peak_task_words:
            self._stats.peak_task_words = account.peak_task_words
        self._keep(account.violations)
        self._stats.budget_violations += account.violation_count
        self._apply(writes)
        self.log.append((label or f"round{round_no}", 1))
        return writes

    def primitive(self, label: str, fn: Callable[[], Mapping | None], rounds: int | None = None) -> Mapping:
        """Run a black-box AMPC subroutine; its output (a mapping) lands in the table."""
        out = fn() or {}
        charged = self.config.primitive_rounds if rounds is None else rounds
        self._stats.rounds += charged
        self._apply(out)
        self.log.append((label, charged))
        return out

    def join(self, children: list[AmpcRuntime]) -> None:
        """Merge runs that executed side by side: rounds overlap, work adds up."""
        if not children:
            return
        self._stats.rounds += max(c._stats.rounds for c in children)
        self._stats.adaptive_queries += sum(c._stats.adaptive_queries for c in children)
        self._stats.tasks += sum(c._stats.tasks for c in children)
        self._stats.peak_task_words = max(
            [self._stats.peak_task_words] + [c._stats.peak_task_words for c in children]
        )
        concurrent = self._table_words + sum(c._stats.total_table_words for c in children)
        self._stats.total_table_words = max(self._stats.total_table_words, concurrent)
        for c in children:
            self._keep(c.violations)
        self._stats.budget_violations += sum(c._stats.budget_violations for c in children)
        self.log.append(("parallel", max(c._stats.rounds for c in children)))

    def _keep(self, found: list[BudgetViolation]) -> None:
        room = KEPT_VIOLATIONS - len(self.violations)
        if room > 0:
            self.violations.extend(found[:room])

    def stats(self) -> AmpcStats:
        return replace(self._stats)


def make_runtime(epsilon: float, n: int, m: int = 0, **kwargs) -> AmpcRuntime:
    return AmpcRuntime(AmpcConfig(epsilon=epsilon, n=n, m=m, **kwargs))
