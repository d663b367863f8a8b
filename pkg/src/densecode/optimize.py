"""Optimizer settings and a lockstep Nelder-Mead over many independent problems.

The dense-coding and discord searches solve thousands of tiny (2- to 6-parameter)
problems whose objectives vectorize well. Running every simplex in lockstep and
evaluating all pending points in one numpy call is far cheaper than one scipy
``minimize`` per problem on a single core.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np


class OptimizationWarning(RuntimeWarning):
    """An iterative search stopped at its iteration cap."""


@dataclass(frozen=True)
class OptimizerConfig:
    """Budget for a multi-start search.

    ``restarts`` is the number of random starts for the encoding search (the
    identity start is always added) and the number of polished grid cells for
    the discord search. ``tol`` bounds the spread of objective values across the
    simplex, ``xtol`` its diameter; a simplex stops when both hold.
    """

    restarts: int = 16
    max_iters: int = 2000
    tol: float = 1e-8
    xtol: float = 1e-4
    grid_resolution: int = 64
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1 or self.grid_resolution < 2:
            raise ValueError("restarts, max_iters must be positive and grid_resolution >= 2")
        if not (self.tol > 0 and self.xtol > 0):
            raise ValueError("tolerances must be positive")


#: local-unitary entropy minimization
ENCODING_DEFAULTS = OptimizerConfig()
#: discord: 64x64 grid, then simplex polish of the 3 best cells to diameter 1e-7
DISCORD_DEFAULTS = OptimizerConfig(restarts=3, max_iters=500, tol=np.inf, xtol=1e-7)


@dataclass
class BatchResult:
    x: np.ndarray
    fun: np.ndarray
    nit: np.ndarray
    converged: np.ndarray


def nelder_mead_batch(
    fun: Callable[[np.ndarray, np.ndarray], np.ndarray],
    x0: np.ndarray,
    step: float | np.ndarray,
    xtol: float,
    ftol: float,
    max_iters: int,
) -> BatchResult:
    """Minimize ``B`` problems at once with the standard Nelder-Mead moves.

    ``fun(points, rows)`` evaluates ``points[k]`` for problem ``rows[k]`` and
    returns a 1-D array. ``x0`` has shape ``(B, n)``; the initial simplex is
    ``x0`` plus ``step`` along each axis.
    """
    x0 = np.atleast_2d(np.asarray(x0, dtype=float))
    nprob, n = x0.shape
    rho, chi, psi, sigma = 1.0, 2.0, 0.5, 0.5

    sim = np.repeat(x0[:, None, :], n + 1, axis=1)
    sim[:, 1:, :] += np.eye(n) * np.broadcast_to(np.asarray(step, dtype=float), (n,))
    rows_all = np.repeat(np.arange(nprob), n + 1)
    fsim = np.asarray(fun(sim.reshape(-1, n), rows_all), dtype=float).reshape(nprob, n + 1)

    def order(idx):
        perm = np.argsort(fsim[idx], axis=1, kind="stable")
        sim[idx] = np.take_along_axis(sim[idx], perm[:, :, None], axis=1)
        fsim[idx] = np.take_along_axis(fsim[idx], perm, axis=1)

    def done(idx):
        dx = np.abs(sim[idx, 1:] - sim[idx, :1]).max(axis=(1, 2))
        df = np.abs(fsim[idx, 1:] - fsim[idx, :1]).max(axis=1)
        return (dx <= xtol) & (df <= ftol)

    all_idx = np.arange(nprob)
    order(all_idx)
    nit = np.zeros(nprob, dtype=int)
    converged = done(all_idx)
    active = all_idx[~converged]

    for _ in range(max_iters):
        if active.size == 0:
            break
        nit[active] += 1
        s = sim[active]
        f = fsim[active]
        xbar = s[:, :-1].mean(axis=1)
        worst = s[:, -1]
        xr = (1 + rho) * xbar - rho * worst
        fr = np.asarray(fun(xr, active), dtype=float)

        new_x = xr.copy()
        new_f = fr.copy()
        shrink = np.zeros(active.size, dtype=bool)

        expand = fr < f[:, 0]
        if expand.any():
            xe = (1 + rho * chi) * xbar[expand] - rho * chi * worst[expand]
            fe = np.asarray(fun(xe, active[expand]), dtype=float)
            better = fe < fr[expand]
            sel = np.flatnonzero(expand)[better]
            new_x[sel] = xe[better]
            new_f[sel] = fe[better]

        contract = fr >= f[:, -2]
        if contract.any():
            outside = contract & (fr < f[:, -1])
            inside = contract & ~outside
            xc = np.where(
                outside[:, None],
                (1 + psi * rho) * xbar - psi * rho * worst,
                (1 - psi) * xbar + psi * worst,
            )[contract]
            fc = np.asarray(fun(xc, active[contract]), dtype=float)
            cidx = np.flatnonzero(contract)
            accept = np.where(outside[contract], fc <= fr[contract], fc < f[contract, -1])
            new_x[cidx[accept]] = xc[accept]
            new_f[cidx[accept]] = fc[accept]
            shrink[cidx[~accept]] = True

        keep = ~shrink
        s[keep, -1] = new_x[keep]
        f[keep, -1] = new_f[keep]
        if shrink.any():
            best = s[shrink, :1]
            moved = best + sigma * (s[shrink, 1:] - best)
            rows = np.repeat(active[shrink], n)
            fm = np.asarray(fun(moved.reshape(-1, n), rows), dtype=float).reshape(-1, n)
            s[shrink, 1:] = moved
            f[shrink, 1:] = fm
        sim[active] = s
        fsim[active] = f
        order(active)
        finished = done(active)
        converged[active[finished]] = True
        active = active[~finished]

    return BatchResult(sim[:, 0].copy(), fsim[:, 0].copy(), nit, converged)


def warn_unconverged(result: BatchResult, what: str) -> None:
    missing = int((~result.converged).sum())
    if missing:
        warnings.warn(f"{what}: {missing} of {result.converged.size} searches hit the "
                      "iteration cap", OptimizationWarning, stacklevel=3)
