"""Derivative-free local maximizers used by every supremum search."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class SearchParams:
    """Budget and tolerances for the stochastic supremum searches.

    ``restarts`` applies to the innermost search (rotations inside degenerate
    eigenspaces, pure decompositions for the pseudo-mutual entropy).
    ``outer_restarts`` applies to searches over states, distributions and
    coding/decoding families; when such an outer search evaluates an inner
    supremum at every point it uses ``inner_restarts`` for it.
    """

    restarts: int = 32
    max_sweeps: int = 200
    step_init: float = 0.1
    step_min: float = 1e-5
    gap_tol: float = 1e-8
    m_max: int | None = None
    seed: int = 0
    outer_restarts: int = 8
    inner_restarts: int = 2
    pseudo_iters: int = 400
    ascent_tol: float = 1e-9
    ascent_max_iter: int = 20000

    def inner(self) -> "SearchParams":
        from dataclasses import replace

        return replace(self, restarts=self.inner_restarts)

    def child_seeds(self, n: int, salt: int = 0) -> list[np.random.SeedSequence]:
        return np.random.SeedSequence([self.seed, salt]).spawn(n)


def coordinate_ascent(
    f: Callable[[np.ndarray], float],
    x0: np.ndarray,
    step_init: float = 0.1,
    step_min: float = 1e-5,
    max_sweeps: int = 200,
    fx0: float | None = None,
) -> tuple[np.ndarray, float, int]:
    """Hooke-Jeeves pattern search.

    Each sweep tries ``+-step`` on every coordinate; an improving sweep is
    followed by extrapolation along the sweep's net move for as long as that
    keeps improving, and a failed sweep halves the step.

    Returns ``(x, f(x), evaluations)``.
    """
    x = np.array(x0, dtype=float)
    fx = f(x) if fx0 is None else fx0
    evals = 0 if fx0 is not None else 1
    step = step_init
    for _ in range(max_sweeps):
        if step < step_min or x.size == 0:
            break
        base = x
        for i in range(x.size):
            for sign in (1.0, -1.0):
                y = x.copy()
                y[i] += sign * step
                fy = f(y)
                evals += 1
                if fy > fx:
                    x, fx = y, fy
                    break
        if x is base:
            step *= 0.5
            continue
        move = x - base
        while True:
            y = x + move
            fy = f(y)
            evals += 1
            if not fy > fx:
                break
            x, fx = y, fy
            move = 2 * move
    return x, fx, evals


def hill_climb(
    f: Callable[[object], float],
    x0,
    propose: Callable[[object, float, np.random.Generator], object],
    rng: np.random.Generator,
    step_init: float = 0.1,
    step_min: float = 1e-5,
    max_iters: int = 400,
    patience: int = 8,
    fx0: float | None = None,
) -> tuple[object, float, int]:
    """Random-direction ascent for high-dimensional parametrizations.

    ``propose(x, step, rng)`` returns a neighbour at distance ``~step``. After
    ``patience`` consecutive rejections the step is halved.
    """
    x = x0
    fx = f(x) if fx0 is None else fx0
    evals = 0 if fx0 is not None else 1
    step, fails = step_init, 0
    for _ in range(max_iters):
        if step < step_min:
            break
        y = propose(x, step, rng)
        fy = f(y)
        evals += 1
        if fy > fx:
            x, fx, fails = y, fy, 0
        else:
            fails += 1
            if fails >= patience:
                step *= 0.5
                fails = 0
    return x, fx, evals
