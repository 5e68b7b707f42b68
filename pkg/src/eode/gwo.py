"""Grey Wolf Optimizer over positions in [0, 1]^dim with threshold binarisation.

The optimiser minimises.  Wolves move towards the three best wolves (alpha,
beta, delta); a position is decoded into a binary mask by comparing each
coordinate with a threshold.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

LOWER, UPPER = 0.0, 1.0


@dataclass(frozen=True)
class GwoParams:
    population: int = 100
    iterations: int = 50
    threshold: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.population < 3:
            raise ValueError(f"population must be >= 3 to supply three leaders, got {self.population}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must be in (0, 1), got {self.threshold}")


@dataclass
class WolfPopulation:
    positions: np.ndarray  # (P, dim)
    fitness: np.ndarray  # (P,), +inf until evaluated
    t: int = 0
    max_t: int = 1
    leaders: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    @property
    def size(self) -> int:
        return self.positions.shape[0]

    def rank(self) -> None:
        """Recompute alpha, beta, delta; ties resolve to the lower wolf index."""
        order = np.argsort(self.fitness, kind="stable")
        self.leaders = order[:3].copy()

    @property
    def alpha(self) -> np.ndarray:
        return self.positions[self.leaders[0]]

    @property
    def beta(self) -> np.ndarray:
        return self.positions[self.leaders[1]]

    @property
    def delta(self) -> np.ndarray:
        return self.positions[self.leaders[2]]


@dataclass
class GwoResult:
    best_position: np.ndarray
    best_mask: np.ndarray
    best_fitness: float
    history: list[float]
    trace: list[dict] = field(default_factory=list)
    evaluations: int = 0
    cache_hits: int = 0
    warnings: list[str] = field(default_factory=list)


def init_population(P: int, dim: int, seed: int | np.random.Generator) -> WolfPopulation:
    if P < 3:
        raise ValueError(f"population must be >= 3 to supply three leaders, got {P}")
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    positions = rng.uniform(LOWER, UPPER, size=(P, dim))
    return WolfPopulation(positions, np.full(P, np.inf))


def binarize(position, threshold: float) -> np.ndarray:
    """Bit i is set iff coordinate i >= threshold."""
    return np.asarray(position) >= threshold


def convergence_factor(t: int, max_t: int) -> float:
    """Linear schedule a = 2 - 2t/max_t, from 2 at t=0 down to 0 at t=max_t."""
    return 2.0 - 2.0 * t / max_t


def hunt_step(x, leader, r1, r2, a):
    """Move towards one leader: D = |C*X_l - X|, X' = X_l - A*D with A = 2a*r1 - a, C = 2*r2."""
    A = 2.0 * a * r1 - a
    C = 2.0 * r2
    D = np.abs(C * leader - x)
    return leader - A * D


def update_positions(pop: WolfPopulation, rng: np.random.Generator) -> WolfPopulation:
    """One hunting move for every wolf (leaders included), then clamp to [0, 1].

    Fresh r1, r2 are drawn per leader, per wolf and per coordinate.
    """
    if pop.leaders.size < 3:
        raise ValueError("population has no leaders yet; evaluate and rank first")
    a = convergence_factor(pop.t, pop.max_t)
    P, dim = pop.positions.shape
    r = rng.random((3, 2, P, dim))
    X = pop.positions
    x1 = hunt_step(X, pop.alpha, r[0, 0], r[0, 1], a)
    x2 = hunt_step(X, pop.beta, r[1, 0], r[1, 1], a)
    x3 = hunt_step(X, pop.delta, r[2, 0], r[2, 1], a)
    new = np.clip((x1 + x2 + x3) / 3.0, LOWER, UPPER)
    return WolfPopulation(new, np.full(P, np.inf), pop.t, pop.max_t, pop.leaders.copy())


def _mask_key(mask: np.ndarray) -> bytes:
    return np.packbits(mask).tobytes() + mask.size.to_bytes(4, "little")


def optimize(
    fitness: Callable[[np.ndarray], float],
    dim: int,
    params: GwoParams,
    *,
    use_cache: bool = True,
    on_position: bool = False,
    callback: Callable[[dict], None] | None = None,
) -> GwoResult:
    """Minimise ``fitness`` with the grey wolf optimiser.

    ``fitness`` receives the binarised mask of each wolf, or the raw position
    when ``on_position`` is set (mask caching is then disabled). The result
    records the best solution ever evaluated, so ``history`` (initial
    population first, then one entry per iteration) never increases.
    """
    rng = np.random.default_rng(params.seed)
    pop = init_population(params.population, dim, rng)
    pop.max_t = params.iterations
    cache: dict[bytes, float] = {}
    notes: list[str] = []
    counters = {"evals": 0, "hits": 0}
    cacheable = use_cache and not on_position

    def evaluate(position):
        mask = binarize(position, params.threshold)
        key = _mask_key(mask) if cacheable else None
        if key is not None and key in cache:
            counters["hits"] += 1
            return cache[key]
        value = float(fitness(position if on_position else mask))
        counters["evals"] += 1
        if math.isnan(value):
            msg = f"fitness returned NaN for a candidate with {int(mask.sum())} bits set; treated as +inf"
            notes.append(msg)
            warnings.warn(msg, RuntimeWarning, stacklevel=3)
            value = math.inf
        if key is not None:
            cache.setdefault(key, value)
        return value

    def evaluate_all():
        pop.fitness = np.array([evaluate(x) for x in pop.positions])
        pop.rank()

    evaluate_all()
    best_fitness = float(pop.fitness[pop.leaders[0]])
    best_position = pop.alpha.copy()
    history = [best_fitness]
    trace = []

    def record(t):
        entry = {
            "iteration": t,
            "best_fitness": best_fitness,
            "bits_set": int(binarize(best_position, params.threshold).sum()),
        }
        trace.append(entry)
        if callback is not None:
            callback(entry)

    record(0)
    for t in range(params.iterations):
        pop.t = t
        pop = update_positions(pop, rng)
        evaluate_all()
        leader_fit = float(pop.fitness[pop.leaders[0]])
        if leader_fit < best_fitness:
            best_fitness = leader_fit
            best_position = pop.alpha.copy()
        history.append(best_fitness)
        record(t + 1)

    return GwoResult(
        best_position=best_position,
        best_mask=binarize(best_position, params.threshold),
        best_fitness=best_fitness,
        history=history,
        trace=trace,
        evaluations=counters["evals"],
        cache_hits=counters["hits"],
        warnings=notes,
    )
