"""Die rolling built on top of an ideal SFE oracle.

Two parties turn one SFE round into a shared uniform value in
{0, ..., |Y|-1}: they run the SFE on uniform inputs, Alice sends a uniform
shift b, Bob reveals his input y together with his output f(x, y), Alice
aborts unless the revealed output matches her own evaluation, and both
output (b + y) mod |Y|.

The SFE subroutine here is an ideal classical oracle (Bob receives exactly
f(x, y), nothing else leaks), so the harness checks the wrapper logic and
the classical cheating identities, not any particular protocol: a blind
guesser forces a fixed outcome at rate 1/|Y|, and a receiver who can
produce the answers for a declared set S of inputs forces it at |S|/|Y|.

Per-trial randomness comes from a counter-based Philox stream keyed by the
master seed, with each trial's draws at a fixed position, so results are
reproducible and independent of how trials are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Collection, Optional, Sequence, Union

import numpy as np

from .tasks import SfeTask, TaskError


@dataclass(frozen=True)
class DrTranscript:
    """One protocol run: inputs, shift, reveal, and the agreed outcome."""

    x: int
    y: int
    b: int
    revealed_y: int
    revealed_f: int
    aborted: bool
    outcome: Optional[int]


@dataclass(frozen=True)
class DrStats:
    trials: int
    outcome_histogram: tuple
    abort_count: int
    tv_distance_from_uniform: float
    forcing_rate: float  # fraction of trials forcing outcome 0 without abort
    seed: int


@dataclass(frozen=True)
class KitaevBound:
    """Stated limits for any quantum die-rolling protocol with N outcomes."""

    product: float  # A * B >= 1/N
    max_single: float  # max(A, B) >= 1/sqrt(N)


@dataclass(frozen=True)
class AliceView:
    """What a cheating sender sees: her input, plus a strategy RNG.

    ``leaked_ys`` is the honest receiver's inputs and exists only to
    exercise the perfect-knowledge endpoint; legitimate strategies use
    ``xs`` and ``rng`` alone.
    """

    task: SfeTask
    xs: np.ndarray
    leaked_ys: np.ndarray
    rng: np.random.Generator


AliceStrategy = Callable[[AliceView], np.ndarray]
BobKnowledge = Union[str, Collection[int], Callable[[SfeTask, int, int], Collection[int]]]


def _trial_rng(seed: int, *stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *stream])))


def _draw_trials(task: SfeTask, trials: int, seed: int):
    rng = _trial_rng(seed, 0)
    xs = rng.integers(0, task.x_size, size=trials)
    ys = rng.integers(0, task.y_size, size=trials)
    bs = rng.integers(0, task.y_size, size=trials)
    return xs, ys, bs


def _table_array(task: SfeTask) -> np.ndarray:
    if task.table is None:
        raise TaskError("die-rolling simulation requires a materialized table")
    return np.asarray(task.table, dtype=np.int64)


def _stats(outcomes: np.ndarray, aborted: np.ndarray, y_size: int, trials: int, seed: int) -> DrStats:
    ok = ~aborted
    hist = np.bincount(outcomes[ok], minlength=y_size)
    tv = 0.5 * float(np.abs(hist / trials - 1.0 / y_size).sum()) if trials else 0.0
    forcing = float(np.count_nonzero(ok & (outcomes == 0))) / trials
    return DrStats(
        trials=trials,
        outcome_histogram=tuple(int(c) for c in hist),
        abort_count=int(np.count_nonzero(aborted)),
        tv_distance_from_uniform=tv,
        forcing_rate=forcing,
        seed=seed,
    )


def run_honest(task: SfeTask, trials: int, seed: int = 0) -> DrStats:
    """Both parties honest: never aborts, outcomes exactly (b + y) mod |Y|."""
    if trials < 1:
        raise ValueError("trials must be positive")
    table = _table_array(task)
    xs, ys, bs = _draw_trials(task, trials, seed)
    revealed = table[xs, ys]
    aborted = revealed != table[xs, ys]  # identical by construction
    outcomes = (bs + ys) % task.y_size
    return _stats(outcomes, aborted, task.y_size, trials, seed)


def honest_transcripts(task: SfeTask, trials: int, seed: int = 0) -> list[DrTranscript]:
    """The same runs as run_honest, materialized one transcript per trial."""
    table = _table_array(task)
    xs, ys, bs = _draw_trials(task, trials, seed)
    out = []
    for x, y, b in zip(xs.tolist(), ys.tolist(), bs.tolist()):
        f = int(table[x, y])
        out.append(
            DrTranscript(
                x=x,
                y=y,
                b=b,
                revealed_y=y,
                revealed_f=f,
                aborted=False,
                outcome=(b + y) % task.y_size,
            )
        )
    return out


def blind_alice(view: AliceView) -> np.ndarray:
    """Guess the receiver's input uniformly, ignoring everything."""
    return view.rng.integers(0, view.task.y_size, size=len(view.xs))


def oracle_alice(view: AliceView) -> np.ndarray:
    """Perfect-knowledge endpoint: read the receiver's input directly."""
    return view.leaked_ys.copy()


def run_cheating_alice(
    task: SfeTask, guesser: AliceStrategy, trials: int, seed: int = 0
) -> DrStats:
    """Cheating sender tries to force outcome 0 against an honest receiver.

    She guesses the receiver's input y and sends the shift b = -guess mod
    |Y|, succeeding exactly when the guess is right.  The receiver is
    honest, so nothing triggers an abort.  ``guesser`` maps an AliceView
    to one guess per trial (vectorized).
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    if task.y_size < 1:
        raise TaskError("y_size must be positive")
    xs, ys, _ = _draw_trials(task, trials, seed)
    view = AliceView(task=task, xs=xs, leaked_ys=ys, rng=_trial_rng(seed, 1))
    guesses = np.asarray(guesser(view), dtype=np.int64)
    if guesses.shape != (trials,):
        raise ValueError(f"strategy returned shape {guesses.shape}, expected ({trials},)")
    if guesses.min() < 0 or guesses.max() >= task.y_size:
        raise ValueError("strategy guessed outside the input range")
    outcomes = (ys - guesses) % task.y_size  # (b + y) mod |Y| with b = -guess
    aborted = np.zeros(trials, dtype=bool)
    return _stats(outcomes, aborted, task.y_size, trials, seed)


def _known_mask_and_fallback(
    task: SfeTask, learner: BobKnowledge, required: np.ndarray, xs: np.ndarray, ys: np.ndarray
):
    trials = len(required)
    if learner == "full":
        return np.ones(trials, dtype=bool), ys
    if learner == "honest":
        return required == ys, ys
    if callable(learner):
        # knowledge is fixed before the shift arrives, so the callable sees
        # only the trial's inputs, never the required reveal
        known = np.zeros(trials, dtype=bool)
        fallback = ys.copy()
        for t in range(trials):
            s = set(learner(task, int(xs[t]), int(ys[t])) or ())
            known[t] = int(required[t]) in s
            if not known[t] and s:
                fallback[t] = min(s)
        return known, fallback
    s = sorted(set(int(y) for y in learner))
    if not s:
        raise ValueError("knowledge set must not be empty")
    if s[0] < 0 or s[-1] >= task.y_size:
        raise ValueError("knowledge set outside the input range")
    known = np.isin(required, np.asarray(s, dtype=np.int64))
    fallback = np.full(trials, s[0], dtype=np.int64)
    return known, fallback


def run_cheating_bob(
    task: SfeTask, learner: BobKnowledge, trials: int, seed: int = 0
) -> DrStats:
    """Cheating receiver tries to force outcome 0 against an honest sender.

    Forcing outcome 0 requires revealing y = -b mod |Y| along with the
    correct f(x, y).  ``learner`` declares which answer entries the
    receiver can produce: "full" (all of them), "honest" (only the entry
    for his honest input), an explicit collection of y indices, or a
    callable (task, x, honest_y) -> collection.  When the required entry
    is unknown he reveals a known one instead, which keeps the sender
    from aborting but forfeits the forcing attempt, so the forcing rate
    converges to |S|/|Y|.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    xs, ys, bs = _draw_trials(task, trials, seed)
    required = (-bs) % task.y_size
    known, fallback = _known_mask_and_fallback(task, learner, required, xs, ys)
    revealed = np.where(known, required, fallback)
    outcomes = (bs + revealed) % task.y_size
    aborted = np.zeros(trials, dtype=bool)  # revealed entries are always correct
    return _stats(outcomes, aborted, task.y_size, trials, seed)


def kitaev_bound(n_outcomes: int) -> KitaevBound:
    """Stated product and max lower bounds, no derivation performed here."""
    if n_outcomes < 2:
        raise ValueError("need at least two outcomes")
    return KitaevBound(product=1.0 / n_outcomes, max_single=1.0 / math.sqrt(n_outcomes))


def stats_to_jsonable(stats: DrStats) -> dict:
    return {
        "trials": stats.trials,
        "histogram": list(stats.outcome_histogram),
        "aborts": stats.abort_count,
        "tv_distance": stats.tv_distance_from_uniform,
        "forcing_rate": stats.forcing_rate,
        "seed": stats.seed,
    }
