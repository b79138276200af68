"""Metropolis simulation of ERGM ensembles with tie/no-tie proposals."""
from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, DegeneracyWarning, ModelError
from ..graph import TradeGraph
from ..streams import check_seed, default_threads, stream
from . import _kernels
from .statistics import ToggleState
from .terms import ModelSpec

STAGE = "ergm_chain"
DEFAULT_CHAINS = 4
_CHUNK = 1 << 16
DEGENERATE_LOW, DEGENERATE_HIGH = 0.01, 0.99


@dataclass(frozen=True)
class SimulationResult:
    nodes: tuple[str, ...]
    samples: list  # (src, dst) index arrays, sample order
    burnin: int
    interval: int
    chains: int
    seed: int
    acceptance_rate: float

    @property
    def densities(self) -> np.ndarray:
        n = len(self.nodes)
        return np.array([len(s) / (n * (n - 1)) for s, _ in self.samples])

    def graphs(self) -> list[TradeGraph]:
        nodes = self.nodes
        return [
            TradeGraph(nodes, ((nodes[i], nodes[j], 1.0) for i, j in sorted(zip(s.tolist(), d.tolist()))))
            for s, d in self.samples
        ]

    def metadata(self) -> dict:
        return {
            "burnin": self.burnin,
            "interval": self.interval,
            "chains": self.chains,
            "seed": self.seed,
            "samples": len(self.samples),
            "acceptance_rate": self.acceptance_rate,
        }


def _run(state: ToggleState, theta, steps, rng, buf):
    model = state.model
    accepted = 0
    while steps > 0:
        k = min(steps, _CHUNK)
        u = rng.random((k, 3))
        state.m, acc = _kernels.metropolis(state.adj, state.sp, state.outdeg, state.indeg, state.es, state.ed,
                                           state.pos, state.m, model.labels, model.codes, model.params,
                                           model.label_index, theta, u, buf)
        state.m = int(state.m)
        accepted += int(acc)
        steps -= k
    return accepted


def run_chains(model: ModelSpec, theta, n_samples: int, *, burnin: int | None = None,
               interval: int | None = None, seed: int = 0, initial: TradeGraph | None = None,
               chains: int = DEFAULT_CHAINS, threads: int | None = None) -> SimulationResult:
    """Draw ``n_samples`` graphs from the ERGM with coefficients ``theta``.

    Sample ``k`` comes from chain ``k % chains``; each chain starts from
    ``initial`` (the empty graph when ``None``), discards ``burnin``
    proposals and then keeps one graph every ``interval`` proposals. Chain
    ``c`` draws from the stream derived from ``(seed, c)``, so output is
    fixed by ``(seed, chains)`` whatever the thread count.
    """
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != (model.n_stats,):
        raise ModelError(f"theta has shape {theta.shape}, model has {model.n_stats} statistics")
    if not np.all(np.isfinite(theta)):
        raise ConfigError("theta must be finite")
    n = len(model.nodes)
    if n < 2:
        raise ModelError("simulation needs at least 2 nodes")
    n_dyads = n * (n - 1)
    burnin = 20 * n_dyads if burnin is None else burnin
    interval = n_dyads if interval is None else interval
    for name, value, low in (("n_samples", n_samples, 1), ("burnin", burnin, 0), ("interval", interval, 1),
                             ("chains", chains, 1)):
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < low:
            raise ConfigError(f"{name} must be an integer >= {low}, got {value!r}")
    seed = check_seed(seed)
    chains = min(int(chains), int(n_samples))
    start = initial if initial is not None else TradeGraph(model.nodes)
    model.check_graph(start)

    def chain(c):
        rng = stream(seed, STAGE, c)
        state = ToggleState(start, model)
        buf = np.empty(model.n_stats, dtype=np.float64)
        acc = _run(state, theta, burnin, rng, buf)
        out = []
        for _ in range(c, n_samples, chains):
            acc += _run(state, theta, interval, rng, buf)
            out.append(state.edge_arrays())
        return out, acc

    threads = threads or default_threads()
    if threads == 1 or chains == 1:
        per_chain = [chain(c) for c in range(chains)]
    else:
        with ThreadPoolExecutor(max_workers=min(threads, chains)) as pool:
            per_chain = list(pool.map(chain, range(chains)))
    samples = [per_chain[k % chains][0][k // chains] for k in range(n_samples)]
    total_steps = chains * burnin + n_samples * interval
    accepted = sum(acc for _, acc in per_chain)
    result = SimulationResult(
        nodes=model.nodes,
        samples=samples,
        burnin=int(burnin),
        interval=int(interval),
        chains=chains,
        seed=seed,
        acceptance_rate=accepted / total_steps if total_steps else 0.0,
    )
    dens = result.densities
    bad = int(np.sum((dens < DEGENERATE_LOW) | (dens > DEGENERATE_HIGH)))
    if bad:
        warnings.warn(
            DegeneracyWarning(
                f"{bad} of {n_samples} simulated graphs have density outside "
                f"[{DEGENERATE_LOW}, {DEGENERATE_HIGH}] (range {dens.min():.4g}..{dens.max():.4g}); "
                "the model may be degenerate"
            ),
            stacklevel=2,
        )
    return result


def simulate_ensemble(model: ModelSpec, theta, n_samples: int, burnin: int | None = None,
                      interval: int | None = None, seed: int = 0, initial: TradeGraph | None = None,
                      chains: int = DEFAULT_CHAINS, threads: int | None = None) -> list[TradeGraph]:
    """Like :func:`run_chains` but returns the samples as unit-weight graphs."""
    return run_chains(model, theta, n_samples, burnin=burnin, interval=interval, seed=seed, initial=initial,
                      chains=chains, threads=threads).graphs()
