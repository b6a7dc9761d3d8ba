"""Parameter sweeps, gamma_c scans, crossover search and entanglement maximisation."""

from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .errors import BracketInvalid, ConfigError, DalError
from .model import ModelParams
from .steady import steady_negativity

log = logging.getLogger(__name__)

FREE_NAMES = ("j", "j_c", "omega_c", "gamma_c")


def _safe_negativity(p: ModelParams) -> tuple[float, str | None]:
    try:
        return steady_negativity(p), None
    except DalError as exc:
        return float("nan"), f"{type(exc).__name__}: {exc}"


def _eval_batch(points: list[ModelParams]) -> list[tuple[float, str | None]]:
    return [_safe_negativity(p) for p in points]


def evaluate_many(points: list[ModelParams], jobs: int = 1) -> list[tuple[float, str | None]]:
    """steady_negativity at every point, in input order; failures become NaN."""
    if jobs <= 1 or len(points) < 2:
        return _eval_batch(points)
    chunks = np.array_split(np.arange(len(points)), min(len(points), 4 * jobs))
    batches = [[points[i] for i in c] for c in chunks if len(c)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        results = list(ex.map(_eval_batch, batches))
    return [r for batch in results for r in batch]


@dataclass
class SweepGrid:
    omega_c_axis: np.ndarray
    j_c_axis: np.ndarray
    template: ModelParams
    values: np.ndarray  # values[i, k] at (omega_c_axis[i], j_c_axis[k])
    failures: list[dict] = field(default_factory=list)

    def argmax(self) -> tuple[float, float, float]:
        i, k = np.unravel_index(np.nanargmax(self.values), self.values.shape)
        return float(self.omega_c_axis[i]), float(self.j_c_axis[k]), float(self.values[i, k])

    def write_csv(self, path) -> None:
        with open(Path(path), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["omega_c", "j_c", "negativity"])
            for i, wc in enumerate(self.omega_c_axis):
                for k, jc in enumerate(self.j_c_axis):
                    w.writerow([repr(float(wc)), repr(float(jc)), repr(float(self.values[i, k]))])


def axis(lo: float, hi: float, n: int) -> np.ndarray:
    if n < 2:
        raise ValueError("an axis needs at least 2 points")
    return np.linspace(lo, hi, n)


def sweep_2d(template: ModelParams, omega_c_range: tuple[float, float],
             j_c_range: tuple[float, float], resolution: int | tuple[int, int] = 201,
             jobs: int = 1) -> SweepGrid:
    """Steady-state negativity on an (omega_c, j_c) grid, other parameters from ``template``."""
    nw, nj = (resolution, resolution) if np.isscalar(resolution) else resolution
    wc_axis = axis(*omega_c_range, nw)
    jc_axis = axis(*j_c_range, nj)
    points = [template.with_(omega_c=float(wc), j_c=float(jc)) for wc in wc_axis for jc in jc_axis]
    results = evaluate_many(points, jobs)
    values = np.array([r[0] for r in results]).reshape(nw, nj)
    failures = []
    for idx, (_, err) in enumerate(results):
        if err is not None:
            i, k = divmod(idx, nj)
            failures.append({"omega_c": float(wc_axis[i]), "j_c": float(jc_axis[k]), "error": err})
            log.warning("sweep point (%g, %g) failed: %s", wc_axis[i], jc_axis[k], err)
    return SweepGrid(wc_axis, jc_axis, template, values, failures)


@dataclass
class GammaScan:
    gamma_c: np.ndarray
    negativity: np.ndarray
    failures: list[dict] = field(default_factory=list)

    def peak(self) -> tuple[float, float]:
        i = int(np.nanargmax(self.negativity))
        return float(self.gamma_c[i]), float(self.negativity[i])

    def write_csv(self, path) -> None:
        with open(Path(path), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["gamma_c", "negativity"])
            for g, n in zip(self.gamma_c, self.negativity):
                w.writerow([repr(float(g)), repr(float(n))])


def scan_gamma_c(template: ModelParams, gamma_c_points, jobs: int = 1) -> GammaScan:
    pts = np.asarray(gamma_c_points, dtype=float)
    if np.any(pts <= 0):
        raise ValueError("gamma_c values must be positive")
    results = evaluate_many([template.with_(gamma_c=float(g)) for g in pts], jobs)
    failures = [{"gamma_c": float(g), "error": err} for g, (_, err) in zip(pts, results) if err]
    return GammaScan(pts, np.array([r[0] for r in results]), failures)


def find_crossover(template: ModelParams, bracket: tuple[float, float], reference_n: float,
                   xtol: float = 1e-3) -> float:
    """gamma_c where N(gamma_c) falls through ``reference_n``, by bisection."""
    lo, hi = bracket

    def excess(g):
        return steady_negativity(template.with_(gamma_c=g)) - reference_n

    if not (0 < lo < hi) or not (excess(lo) > 0 > excess(hi)):
        raise BracketInvalid(f"N(gamma_c) does not cross {reference_n} downward on [{lo}, {hi}]")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class Bounds:
    """Box for the free parameters; gamma stays fixed."""

    j: tuple[float, float] = (-1.0, 0.0)
    j_c: tuple[float, float] = (0.0, 1.0)
    omega_c: tuple[float, float] = (-1.0, 1.0)
    gamma_c: tuple[float, float] = (1e-6, 1.0)
    gamma: float = 1e-3

    def __post_init__(self):
        for name in FREE_NAMES:
            lo, hi = getattr(self, name)
            if not lo <= hi:
                raise ConfigError(f"empty interval for {name}: [{lo}, {hi}]")
        if self.gamma_c[0] <= 0 or self.gamma <= 0:
            raise ConfigError("decay rates must stay strictly positive")

    @property
    def lower(self) -> np.ndarray:
        return np.array([getattr(self, n)[0] for n in FREE_NAMES])

    @property
    def upper(self) -> np.ndarray:
        return np.array([getattr(self, n)[1] for n in FREE_NAMES])

    def params(self, x) -> ModelParams:
        x = np.clip(x, self.lower, self.upper)
        return ModelParams(gamma=self.gamma, **{n: float(v) for n, v in zip(FREE_NAMES, x)})

    def to_dict(self) -> dict:
        d = {n: list(getattr(self, n)) for n in FREE_NAMES}
        d["gamma"] = self.gamma
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Bounds":
        if not isinstance(d, dict):
            raise ConfigError("bounds must be a JSON object")
        extra = set(d) - set(FREE_NAMES) - {"gamma"}
        if extra:
            raise ConfigError(f"unknown bounds keys: {sorted(extra)}")
        kw = {}
        try:
            for k, v in d.items():
                if k == "gamma":
                    kw[k] = float(v)
                else:
                    if not (isinstance(v, (list, tuple)) and len(v) == 2):
                        raise ConfigError(f"bounds for {k} must be [lo, hi]")
                    kw[k] = (float(v[0]), float(v[1]))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bounds must be numeric: {exc}") from exc
        return cls(**kw)


@dataclass
class OptResult:
    best_params: ModelParams
    best_n: float
    evaluations: int
    starts: int
    history: list[dict]
    failed_evaluations: int = 0

    def to_dict(self) -> dict:
        return {
            "best_params": self.best_params.to_dict(),
            "best_n": self.best_n,
            "evaluations": self.evaluations,
            "starts": self.starts,
            "failed_evaluations": self.failed_evaluations,
            "history": self.history,
        }

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")


def _local_search(args) -> dict:
    bounds, x0, free, xatol, fatol, maxiter = args
    lower, upper = bounds.lower, bounds.upper
    nfev = 0
    nfail = 0

    def full(z):
        x = lower.copy()
        x[free] = z
        return x

    def objective(z):
        nonlocal nfev, nfail
        nfev += 1
        n, err = _safe_negativity(bounds.params(full(z)))
        if err is not None:
            nfail += 1
            return 1.0  # worse than any attainable -N
        return -n

    z0 = np.asarray(x0)[free]
    res = minimize(objective, z0, method="Nelder-Mead",
                   bounds=list(zip(lower[free], upper[free])),
                   options={"xatol": xatol, "fatol": fatol, "maxiter": maxiter})
    x_best = np.clip(full(res.x), lower, upper)
    value, err = _safe_negativity(bounds.params(x_best))
    return {"seed": [float(v) for v in x0], "converged": [float(v) for v in x_best],
            "value": value if err is None else float("nan"), "nfev": nfev + 1,
            "nfail": nfail + (err is not None)}


def maximize_entanglement(bounds: Bounds | None = None, n_starts: int = 32, seed: int = 0,
                          n_screen: int = 4096, jobs: int = 1, xatol: float = 1e-6,
                          fatol: float = 1e-10, maxiter: int = 4000) -> OptResult:
    """Multi-start Nelder-Mead maximisation of the steady-state negativity.

    Candidate starts come from a scrambled Sobol sequence (seeded).  With
    ``n_screen > 0`` that many Sobol points are evaluated first and the
    ``n_starts`` best become the starts; the objective is exactly zero over
    large parts of the box, so unscreened starts mostly stall on plateaus.
    """
    bounds = bounds or Bounds()
    lower, upper = bounds.lower, bounds.upper
    free = np.flatnonzero(upper > lower)
    if free.size == 0:
        p = bounds.params(lower)
        n = steady_negativity(p)
        rec = {"seed": lower.tolist(), "converged": lower.tolist(), "value": n, "nfev": 1, "nfail": 0}
        return OptResult(p, n, 1, 1, [rec])

    sampler = qmc.Sobol(d=len(FREE_NAMES), scramble=True, seed=seed)
    n_pool = max(n_screen, n_starts)
    unit = sampler.random(1 << int(np.ceil(np.log2(n_pool))))[:n_pool]
    pool = lower + unit * (upper - lower)
    evaluations = 0
    failed = 0
    if n_screen > 0:
        screened = evaluate_many([bounds.params(x) for x in pool], jobs)
        evaluations += len(screened)
        failed += sum(err is not None for _, err in screened)
        vals = np.array([v if err is None else -np.inf for v, err in screened])
        order = np.argsort(-vals, kind="stable")[:n_starts]
        starts = pool[order]
    else:
        starts = pool[:n_starts]

    tasks = [(bounds, x0, free, xatol, fatol, maxiter) for x0 in starts]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            history = list(ex.map(_local_search, tasks))
    else:
        history = [_local_search(t) for t in tasks]
    evaluations += sum(h["nfev"] for h in history)
    failed += sum(h["nfail"] for h in history)

    best = max(range(len(history)), key=lambda i: (np.nan_to_num(history[i]["value"], nan=-1.0), -i))
    best_x = np.array(history[best]["converged"])
    best_params = bounds.params(best_x)
    log.info("best negativity %.6f at %s", history[best]["value"], best_params)
    return OptResult(best_params, history[best]["value"], evaluations, len(history), history, failed)
