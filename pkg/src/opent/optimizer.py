"""Random-restart local search over ensembles of a density matrix.

Two objectives share one search engine:

* ``EF``: ``f(sum_i p_i lambda(psi_i))``, the least pure-state monotone value
  among states whose Schmidt vector is the average over some decomposition.
  Any state LOCC-convertible to ``rho`` is majorized by such a state, so this
  minimum equals the infimum over all of them.
* ``ROOF``: ``sum_i p_i f(lambda(psi_i))``, the convex roof.

Ensembles are parameterized by ``m x r`` isometries ``V`` (see
:mod:`opent.decompositions`).  ``V`` moves by left multiplication with
``exp(t G)`` for the basis generators ``G`` of skew-Hermitian ``m x m``
matrices.  Diagonal generators only rephase members and are skipped; the
off-diagonal ones are Givens rotations on two rows, so each candidate move
changes exactly two ensemble members.  One iteration is a cyclic sweep over
the generators: at each one the four moves ``±t`` (real and imaginary
rotation) are tried and the best improving one is kept.  After a sweep that
improved, the sweep's net rotation ``W`` is extrapolated: ``W**n`` for
``n = 1, 2, 4, ..., 32`` is tried and the best improving power kept, which speeds
up progress along shallow valleys.  A sweep without any improvement shrinks
``t`` geometrically.

Each restart starts from its own Haar-random isometry drawn from the
``(seed, restart)`` stream and evolves independently of the others.  Restarts are
run in lockstep batches for speed.  Results do not depend on batch size or
thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .decompositions import (
    Ensemble,
    average_schmidt_vector,
    default_cardinality,
    hjw_ensemble,
    random_isometry,
    spectral_rows,
)
from .monotones import MonotoneSpec, check_domain, eval_pure
from .states import DensityMatrix, SpectralData, as_density, eigendecompose, schmidt_decompose, schmidt_spectra

EF = "EF"
ROOF = "ROOF"
_ACCEPT_MARGIN = 1e-14
_PATTERN_POWERS = 6


@dataclass(frozen=True)
class SolverConfig:
    restarts: int = 64
    cardinality: int | None = None  # None means rank**2
    max_iters: int = 2000
    objective_tol: float = 1e-9
    stall_iters: int = 100
    step_scale: float = 0.1
    step_decay: float = 0.5
    min_step: float = 1e-12
    agree_tol: float = 1e-6
    seed: int = 0
    threads: int = 1
    batch: int = 64

    def __post_init__(self):
        for name in ("restarts", "max_iters", "stall_iters", "threads", "batch"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        for name in ("objective_tol", "step_scale", "min_step", "agree_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.step_decay < 1:
            raise ValueError("step_decay must lie in (0, 1)")
        if self.cardinality is not None and self.cardinality < 1:
            raise ValueError("cardinality must be positive")

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass
class SolverResult:
    value: float
    witness_vector: np.ndarray
    witness_ensemble: Ensemble
    mode: str
    restarts_within_tol: int
    converged: bool
    restart_values: np.ndarray = field(repr=False)
    iterations: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "value": self.value,
            "converged": self.converged,
            "restarts_within_tol": self.restarts_within_tol,
            "witness_vector": self.witness_vector.tolist(),
            "witness_ensemble": {
                "weights": self.witness_ensemble.weights.tolist(),
                "states": [[[z.real, z.imag] for z in s] for s in self.witness_ensemble.states],
            },
            "restart_values": self.restart_values.tolist(),
            "restart_iterations": self.iterations.tolist(),
        }


def _roof_terms(spec: MonotoneSpec, s: np.ndarray) -> np.ndarray:
    p = s.sum(axis=-1)
    safe = np.where(p > 0, p, 1.0)
    return np.where(p > 0, p * spec(s / safe[..., None]), 0.0)


def _round_robin(m: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Partition all pairs ``j < k`` of ``range(m)`` into rounds of disjoint pairs."""
    n = m + (m % 2)
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        pairs = [(players[i], players[n - 1 - i]) for i in range(n // 2)]
        pairs = sorted((min(p), max(p)) for p in pairs if max(p) < m)
        if pairs:
            rounds.append((np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs])))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


class _Search:
    """Lockstep coordinate descent for one batch of restarts."""

    def __init__(self, spectral: SpectralData, spec: MonotoneSpec, mode: str, cfg: SolverConfig, m: int):
        self.dims = spectral.dims
        self.rows0 = spectral_rows(spectral)
        self.spec = spec
        self.ef = mode == EF
        self.cfg = cfg
        self.rounds = _round_robin(m)
        self.m = m
        self.pattern = m > 2

    def _pattern_move(self, g, w, v, psi, s, h, obj):
        """Extrapolate along the sweep: try ``W**n psi`` for the sweep's net rotation ``W``."""
        wg = w[g]
        powers = [wg]
        for _ in range(_PATTERN_POWERS - 1):
            powers.append(powers[-1] @ powers[-1])
        pw = np.stack(powers, axis=1)
        cand_psi = pw @ psi[g][:, None]
        cand_s = schmidt_spectra(cand_psi, self.dims)
        cand_h = None if self.ef else _roof_terms(self.spec, cand_s)
        cand = self.spec(cand_s.sum(axis=-2)) if self.ef else cand_h.sum(axis=-1)
        best = np.argmin(cand, axis=1)
        idx = np.arange(g.size)
        ok = cand[idx, best] < obj[g] - _ACCEPT_MARGIN
        if not ok.any():
            return
        sel, b = idx[ok], best[ok]
        tgt = g[ok]
        psi[tgt] = cand_psi[sel, b]
        s[tgt] = cand_s[sel, b]
        v[tgt] = pw[sel, b] @ v[tgt]
        obj[tgt] = cand[sel, b]
        if h is not None:
            h[tgt] = cand_h[sel, b]

    def objective(self, s: np.ndarray) -> np.ndarray:
        if self.ef:
            return self.spec(s.sum(axis=-2))
        return _roof_terms(self.spec, s).sum(axis=-1)

    def evaluate(self, v: np.ndarray) -> np.ndarray:
        return self.objective(schmidt_spectra(v @ self.rows0, self.dims))

    def run(self, v: np.ndarray):
        cfg = self.cfg
        v = v.copy()
        nb = v.shape[0]
        m = self.m
        psi = v @ self.rows0
        s = schmidt_spectra(psi, self.dims)
        h = None if self.ef else _roof_terms(self.spec, s)
        obj = self.objective(s)
        step = np.full(nb, cfg.step_scale)
        ref = obj.copy()
        ref_iter = np.zeros(nb, dtype=int)
        iters = np.zeros(nb, dtype=int)
        converged = np.zeros(nb, dtype=bool)
        active = np.full(nb, len(self.rounds) > 0)
        converged[~active] = True

        for it in range(1, cfg.max_iters + 1):
            a = np.flatnonzero(active)
            if a.size == 0:
                break
            iters[a] = it
            improved = np.zeros(a.size, dtype=bool)
            c, sn = np.cos(step[a]), np.sin(step[a])
            # move types: real rotation (+/-), imaginary rotation (+/-)
            alpha = np.stack([sn, -sn, 1j * sn, -1j * sn], axis=1)[:, None, :, None]
            beta = np.stack([-sn, sn, 1j * sn, -1j * sn], axis=1)[:, None, :, None]
            cc = c[:, None, None, None]
            rows = np.arange(a.size)[:, None]
            w = np.broadcast_to(np.eye(m, dtype=complex), (nb, m, m)).copy() if self.pattern else None
            for jj, kk in self.rounds:
                pa = psi[a]
                rj, rk = pa[:, jj, None], pa[:, kk, None]
                new_j = cc * rj + alpha * rk
                new_k = beta * rj + cc * rk
                sj, sk = schmidt_spectra(np.stack([new_j, new_k]), self.dims)
                sa = s[a]
                if self.ef:
                    delta = sj + sk - (sa[:, jj] + sa[:, kk])[:, :, None]
                    tot = sa.sum(axis=1)
                    cand = self.spec(tot[:, None, None] + delta)
                else:
                    hj = _roof_terms(self.spec, sj)
                    hk = _roof_terms(self.spec, sk)
                    delta = hj + hk - (h[a][:, jj] + h[a][:, kk])[:, :, None]
                    cand = obj[a][:, None, None] + delta
                best_t = np.argmin(cand, axis=2)
                best_v = np.take_along_axis(cand, best_t[:, :, None], axis=2)[:, :, 0]
                ok = best_v < obj[a][:, None] - _ACCEPT_MARGIN
                if not ok.any():
                    continue
                # disjoint pairs: try all improving moves at once, else keep the single best
                d = np.take_along_axis(delta, best_t[:, :, None, None] if self.ef else best_t[:, :, None],
                                       axis=2)[:, :, 0]
                d = np.where(ok[..., None] if self.ef else ok, d, 0.0).sum(axis=1)
                comb = self.spec(tot + d) if self.ef else obj[a] + d
                single = np.argmin(best_v, axis=1)
                take_all = comb <= best_v[rows[:, 0], single]
                acc = np.where(take_all[:, None], ok, False)
                acc[rows[:, 0], single] |= ok[rows[:, 0], single] & ~take_all
                improved |= acc.any(axis=1)

                loc, q = np.nonzero(acc)
                g, t, j, k = a[loc], best_t[loc, q], jj[q], kk[q]
                psi[g, j] = new_j[loc, q, t]
                psi[g, k] = new_k[loc, q, t]
                s[g, j] = sj[loc, q, t]
                s[g, k] = sk[loc, q, t]
                al, be, cl = alpha[loc, 0, t], beta[loc, 0, t], c[loc][:, None]
                vj, vk = v[g, j], v[g, k]
                v[g, j], v[g, k] = cl * vj + al * vk, be * vj + cl * vk
                if w is not None:
                    wj, wk = w[g, j], w[g, k]
                    w[g, j], w[g, k] = cl * wj + al * wk, be * wj + cl * wk
                if self.ef:
                    obj[a] = self.spec(s[a].sum(axis=1))
                else:
                    h[g, j] = hj[loc, q, t]
                    h[g, k] = hk[loc, q, t]
                    obj[a] = h[a].sum(axis=1)

            if w is not None and improved.any():
                self._pattern_move(a[improved], w, v, psi, s, h, obj)
            step[a[~improved]] *= cfg.step_decay
            moved = obj[a] < ref[a] - cfg.objective_tol
            ref[a[moved]] = obj[a[moved]]
            ref_iter[a[moved]] = it
            done = (step[a] < cfg.min_step) | (it - ref_iter[a] >= cfg.stall_iters)
            converged[a[done]] = True
            active[a[done]] = False

        return v, self.evaluate(v), iters, converged


def _restart_isometries(seed: int, ids, m: int, r: int) -> np.ndarray:
    out = np.empty((len(ids), m, r), dtype=complex)
    for n, k in enumerate(ids):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(int(k),)))
        out[n] = random_isometry(m, r, rng)
    return out


def resolve_cardinality(rank: int, cfg: SolverConfig) -> int:
    m = default_cardinality(rank) if cfg.cardinality is None else cfg.cardinality
    if m < rank or m > rank * rank + 4:
        raise ValueError(f"cardinality {m} outside [{rank}, {rank * rank + 4}] for rank {rank}")
    return m


def _minimize(rho, spec: MonotoneSpec, cfg: SolverConfig, mode: str) -> SolverResult:
    rho = as_density(rho)
    if not isinstance(rho, DensityMatrix):
        raise TypeError("expected a DensityMatrix or PureState")
    check_domain(spec, rho.dims)
    spectral = eigendecompose(rho)
    r = spectral.rank
    m = resolve_cardinality(r, cfg)
    search = _Search(spectral, spec, mode, cfg, m)

    size = min(cfg.batch, -(-cfg.restarts // cfg.threads))
    batches = [range(i, min(i + size, cfg.restarts)) for i in range(0, cfg.restarts, size)]

    def work(ids):
        return search.run(_restart_isometries(cfg.seed, ids, m, r))

    if cfg.threads > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            outs = list(pool.map(work, batches))
    else:
        outs = [work(b) for b in batches]

    vs = np.concatenate([o[0] for o in outs])
    vals = np.concatenate([o[1] for o in outs])
    iters = np.concatenate([o[2] for o in outs])
    conv = np.concatenate([o[3] for o in outs])
    best = int(np.argmin(vals))

    ens = hjw_ensemble(spectral, vs[best])
    wvec = average_schmidt_vector(ens)
    if mode == EF:
        value = eval_pure(spec, wvec)
    else:
        value = float(sum(p * eval_pure(spec, schmidt_decompose(psi)) for p, psi in ens.members()))
    return SolverResult(
        value=value,
        witness_vector=wvec,
        witness_ensemble=ens,
        mode=mode,
        restarts_within_tol=int(np.sum(vals <= vals[best] + cfg.agree_tol)),
        converged=bool(conv[best]),
        restart_values=vals,
        iterations=iters,
    )


def minimize_ef(rho, spec: MonotoneSpec, cfg: SolverConfig | None = None) -> SolverResult:
    """Estimate the least monotone value of a pure state convertible to ``rho``.

    Returns the best value found; it is an upper bound on the true minimum.
    """
    return _minimize(rho, spec, cfg or SolverConfig(), EF)


def minimize_convex_roof(rho, spec: MonotoneSpec, cfg: SolverConfig | None = None) -> SolverResult:
    """Estimate ``min sum_i p_i F(psi_i)`` over decompositions of ``rho`` (an upper bound)."""
    return _minimize(rho, spec, cfg or SolverConfig(), ROOF)


@dataclass
class CompareReport:
    ef: SolverResult
    roof: SolverResult
    tolerance: float

    @property
    def ef_value(self) -> float:
        return self.ef.value

    @property
    def roof_value(self) -> float:
        return self.roof.value

    @property
    def gap(self) -> float:
        return self.ef.value - self.roof.value

    @property
    def gap_significant(self) -> bool:
        return self.gap > 10 * self.tolerance

    def to_dict(self) -> dict:
        return {
            "ef_value": self.ef_value,
            "roof_value": self.roof_value,
            "gap": self.gap,
            "gap_significant": self.gap_significant,
            "tolerance": self.tolerance,
            "ef": self.ef.to_dict(),
            "roof": self.roof.to_dict(),
        }


def compare(rho, spec: MonotoneSpec, cfg: SolverConfig | None = None, tolerance: float = 2e-3) -> CompareReport:
    """Run both solvers with the same budget and seed schedule and report the gap."""
    cfg = cfg or SolverConfig()
    return CompareReport(minimize_ef(rho, spec, cfg), minimize_convex_roof(rho, spec, cfg), tolerance)


__all__ = [
    "EF",
    "ROOF",
    "SolverConfig",
    "SolverResult",
    "CompareReport",
    "minimize_ef",
    "minimize_convex_roof",
    "compare",
]
