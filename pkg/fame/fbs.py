"""
Equalizer Design: FAME-FBS
Forward-backward splitting on the per-UE MSE with a projection onto scaled
finite-alphabet vectors {beta x}.

Each UE is an independent problem; the implementation stacks the UEs as
columns and never mixes columns, so results match a UE-by-UE run.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from alphabet import alphabet_values, complex_values
from sysmodel import lmmse_equalizer
from utils.errors import ConfigError, DimensionError
from .beta import optimal_beta_columns
from .equalizer import FiniteAlphabetEqualizer
from .flmmse import flmmse_quantize, peak_component, quantize_complex

STEP_RULES = ('fixed', 'inverse-lipschitz')

# relative gain a local-search move must add to be taken
IMPROVE_TOL = 1e-12


@dataclass
class FbsConfig:
    """Forward-backward splitting parameters."""
    max_iters: int = 100
    step_size_rule: str = 'inverse-lipschitz'
    step_size: Optional[float] = None  # required for the fixed rule
    proj_alternations: int = 3
    keep_best: bool = True
    power_iters: int = 50
    power_tol: float = 1e-6
    phase_starts: int = 8
    local_sweeps: int = 20  # 0 disables the local search

    def validate(self) -> None:
        if self.max_iters < 1:
            raise ConfigError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.proj_alternations < 1:
            raise ConfigError(f"proj_alternations must be >= 1, got {self.proj_alternations}")
        if self.step_size_rule not in STEP_RULES:
            raise ConfigError(f"step_size_rule must be one of {STEP_RULES}")
        if self.step_size_rule == 'fixed' and not (self.step_size and self.step_size > 0):
            raise ConfigError("fixed step rule needs a positive step_size")
        if self.power_iters < 1:
            raise ConfigError("power_iters must be >= 1")
        if self.phase_starts < 1:
            raise ConfigError(f"phase_starts must be >= 1, got {self.phase_starts}")
        if self.local_sweeps < 0:
            raise ConfigError(f"local_sweeps must be >= 0, got {self.local_sweeps}")


@dataclass
class FbsTrace:
    """Per-iteration objective of the kept iterate, one list per UE."""
    step_size: float
    objective: List[List[float]] = field(default_factory=list)


def fbs_gradient_columns(Vc: np.ndarray, H: np.ndarray, Es: float, N0: float) -> np.ndarray:
    """Gradient 2 Es H (H^H v_u - e_u) + 2 N0 v_u for every column."""
    E = H.conj().T @ Vc - np.eye(H.shape[1])
    return 2.0 * Es * (H @ E) + 2.0 * N0 * Vc


def fbs_gradient(v_u: np.ndarray, H: np.ndarray, Es: float, N0: float, u: int) -> np.ndarray:
    """
    Gradient of f(v_u) = Es ||H^H v_u - e_u||^2 + N0 ||v_u||^2.

    Uses the conjugate convention df/dRe(v) + j df/dIm(v).
    """
    v_u = np.asarray(v_u, dtype=complex).ravel()
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or v_u.shape[0] != H.shape[0]:
        raise DimensionError(f"v_u of length {v_u.shape[0]} does not match H {H.shape}")
    if not 0 <= u < H.shape[1]:
        raise DimensionError(f"UE index {u} out of range")
    e_u = np.zeros(H.shape[1])
    e_u[u] = 1.0
    return 2.0 * Es * (H @ (H.conj().T @ v_u - e_u)) + 2.0 * N0 * v_u


def max_eigenvalue(H: np.ndarray, iters: int = 50, tol: float = 1e-6) -> float:
    """
    Largest eigenvalue of H H^H by power iteration on the U x U Gram matrix
    (same nonzero spectrum).
    """
    G = H.conj().T @ H
    v = np.ones(G.shape[0], dtype=complex) / np.sqrt(G.shape[0])
    lam = 0.0
    for _ in range(iters):
        w = G @ v
        norm = np.linalg.norm(w)
        if norm == 0:
            return 0.0
        v = w / norm
        new_lam = float(np.vdot(v, G @ v).real)
        if abs(new_lam - lam) <= tol * max(abs(new_lam), 1.0):
            lam = new_lam
            break
        lam = new_lam
    return lam


def step_size(H: np.ndarray, Es: float, N0: float, cfg: FbsConfig) -> float:
    if cfg.step_size_rule == 'fixed':
        return float(cfg.step_size)
    lam = max_eigenvalue(H, cfg.power_iters, cfg.power_tol)
    return 1.0 / (2.0 * (Es * lam + N0))


def project_columns(Z: np.ndarray, K: int, alternations: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Column-wise projection onto {beta x}: alternate x <- Q(z / beta) and
    beta <- x^H z / ||x||^2, starting from beta_0 = peak / (2^K - 1).

    Returns:
        (beta, Xc) with the smallest ||z - beta x|| seen per column
    """
    Z = np.asarray(Z, dtype=complex)
    peak = peak_component(Z)
    if np.any(peak == 0):
        raise DimensionError("Cannot project a zero vector")
    beta = (peak / alphabet_values(K).top).astype(complex)

    def residual(b, X):
        return np.linalg.norm(Z - b[None, :] * X, axis=0)

    X = quantize_complex(Z / beta[None, :], K)
    best_beta, best_X = beta.copy(), X.copy()
    best_res = residual(beta, X)

    for i in range(alternations):
        if i > 0:
            X = quantize_complex(Z / beta[None, :], K)
            res = residual(beta, X)
            better = res < best_res
            best_beta[better], best_X[:, better], best_res[better] = beta[better], X[:, better], res[better]
        refit = np.sum(X.conj() * Z, axis=0) / np.sum(np.abs(X) ** 2, axis=0)
        beta = np.where(refit == 0, beta, refit)
        res = residual(beta, X)
        better = res < best_res
        best_beta[better], best_X[:, better], best_res[better] = beta[better], X[:, better], res[better]

    return best_beta, best_X


def project_scaled_alphabet(z: np.ndarray, K: int, alternations: int = 3) -> Tuple[complex, np.ndarray]:
    """Single-vector form of project_columns."""
    z = np.asarray(z, dtype=complex).ravel()
    if alternations < 1:
        raise ConfigError("alternations must be >= 1")
    beta, X = project_columns(z[:, None], K, alternations)
    return complex(beta[0]), X[:, 0]


def _gain(num: np.ndarray, den: np.ndarray, floor: float) -> np.ndarray:
    """|h^H x|^2 / (x^H A x), zero where x is (numerically) unseen by the channel."""
    safe = np.where(den > floor, den, 1.0)
    return np.where(den > floor, num / safe, 0.0)


def refit_objective_columns(Xc: np.ndarray, H: np.ndarray, Es: float, N0: float,
                            ue: np.ndarray) -> np.ndarray:
    """
    Per-column MSE after the optimal beta refit.

    With A = Es H H^H + N0 I the refit objective of x for UE u is
    Es - Es^2 |h_u^H x|^2 / (x^H A x).

    Args:
        Xc: B x N candidate alphabet vectors
        ue: Length-N UE index of every column
    """
    Hc = H[:, ue]
    A = Es * (H @ H.conj().T) + N0 * np.eye(H.shape[0])
    num = np.abs(np.sum(Hc.conj() * Xc, axis=0)) ** 2
    den = np.real(np.sum(Xc.conj() * (A @ Xc), axis=0))
    return Es - Es ** 2 * _gain(num, den, 0.0)


def local_search_columns(Xc: np.ndarray, H: np.ndarray, Es: float, N0: float, K: int,
                         ue: np.ndarray, sweeps: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Single-entry local search on the refit objective.

    Every sweep visits the antennas in order and replaces entry b by the
    alphabet value that lowers the MSE most; a column stops moving once a
    full sweep finds no strict improvement. Columns never interact.

    Args:
        Xc: B x N starting alphabet vectors
        ue: Length-N UE index of every column
        sweeps: Upper bound on full sweeps (0 only scores the input)

    Returns:
        (B x N improved vectors, length-N refit MSE)
    """
    X = np.array(Xc, dtype=complex)
    B, N = X.shape
    if N == 0 or sweeps == 0:
        return X, refit_objective_columns(X, H, Es, N0, ue)

    levels = np.array(complex_values(K))
    A = Es * (H @ H.conj().T) + N0 * np.eye(B)
    diag = np.real(np.diag(A))
    floor = 1e-12 * float(diag.max()) * B * 2 * alphabet_values(K).top ** 2
    h_conj = H[:, ue].conj()
    cols = np.arange(N)

    AX = A @ X
    p = np.sum(h_conj * X, axis=0)
    q = np.real(np.sum(X.conj() * AX, axis=0))
    g = _gain(np.abs(p) ** 2, q, floor)

    for _ in range(sweeps):
        moved = False
        for b in range(B):
            delta = levels[:, None] - X[b][None, :]
            p_new = p[None, :] + h_conj[b][None, :] * delta
            q_new = (q[None, :] + 2.0 * np.real(delta.conj() * AX[b][None, :])
                     + np.abs(delta) ** 2 * diag[b])
            g_new = _gain(np.abs(p_new) ** 2, q_new, floor)
            pick = np.argmax(g_new, axis=0)
            best = g_new[pick, cols]
            better = best > g * (1.0 + IMPROVE_TOL)
            if not better.any():
                continue
            idx = cols[better]
            d = delta[pick[idx], idx]
            X[b, idx] = levels[pick[idx]]
            AX[:, idx] += A[:, b][:, None] * d[None, :]
            p[idx] = p_new[pick[idx], idx]
            q[idx] = q_new[pick[idx], idx]
            g[idx] = best[idx]
            moved = True
        if not moved:
            break

    return X, refit_objective_columns(X, H, Es, N0, ue)


def phase_starts(Wc: np.ndarray, K: int, count: int) -> np.ndarray:
    """
    Quantized copies of the L-MMSE vectors rotated by j^(p/count), p < count.

    Rotating by a multiple of j maps the alphabet onto itself, so the phases
    cover one quarter turn. p = 0 is the FL-MMSE quantization.

    Returns:
        B x (count * U) matrix, column p * U + u belongs to UE u
    """
    turns = np.exp(0.5j * np.pi * np.arange(count) / count)
    return np.concatenate([flmmse_quantize(Wc * t, K) for t in turns], axis=1)


def fame_fbs_design(
    H: np.ndarray,
    Es: float,
    N0: float,
    K: int,
    cfg: Optional[FbsConfig] = None,
    trace: Optional[FbsTrace] = None,
) -> FiniteAlphabetEqualizer:
    """
    FAME-FBS equalizer.

    Starts every UE at its L-MMSE vector, then repeats a gradient step on the
    smooth MSE followed by the scaled-alphabet projection. Each distinct
    projected x is polished by local_search_columns and scored by the per-UE
    MSE after the closed-form beta refit. With keep_best, the polished
    phase_starts (FL-MMSE among them) seed the incumbent, so the result is
    never worse than FL-MMSE and never worsens with more iterations.

    Args:
        H: B x U channel
        Es: Symbol energy
        N0: Noise variance
        K: Alphabet resolution in bits
        cfg: FbsConfig (defaults if None)
        trace: Optional FbsTrace filled with per-iteration objectives

    Returns:
        FiniteAlphabetEqualizer
    """
    cfg = cfg or FbsConfig()
    cfg.validate()
    H = np.asarray(H, dtype=complex)
    U = H.shape[1]
    ues = np.arange(U)

    tau = step_size(H, Es, N0, cfg)
    Wc = lmmse_equalizer(H, N0 / Es).conj().T

    starts = phase_starts(Wc, K, cfg.phase_starts)
    starts, start_f = local_search_columns(starts, H, Es, N0, K, np.tile(ues, cfg.phase_starts),
                                           cfg.local_sweeps)
    pick = np.argmin(start_f.reshape(cfg.phase_starts, U), axis=0)
    best_X = starts[:, pick * U + ues]
    best_f = start_f[pick * U + ues]
    if trace is not None:
        trace.step_size = tau
        trace.objective = [[] for _ in range(U)]

    polished: List[Dict[bytes, Tuple[np.ndarray, float]]] = [{} for _ in range(U)]
    V = Wc.copy()
    for _ in range(cfg.max_iters):
        Z = V - tau * fbs_gradient_columns(V, H, Es, N0)
        beta, X = project_columns(Z, K, cfg.proj_alternations)
        V = beta[None, :] * X

        keys = [X[:, u].tobytes() for u in ues]
        fresh = [u for u in ues if keys[u] not in polished[u]]
        if fresh:
            Xp, fp = local_search_columns(X[:, fresh], H, Es, N0, K, np.array(fresh), cfg.local_sweeps)
            for i, u in enumerate(fresh):
                polished[u][keys[u]] = (Xp[:, i], float(fp[i]))
        for u in ues:
            x_u, f_u = polished[u][keys[u]]
            if f_u < best_f[u] or not cfg.keep_best:
                best_X[:, u], best_f[u] = x_u, f_u
        if trace is not None:
            for u in ues:
                trace.objective[u].append(float(best_f[u]))

    beta = optimal_beta_columns(best_X, H, Es, N0)
    return FiniteAlphabetEqualizer(
        Xh=best_X.T.conj(),
        beta=beta,
        K=K,
        method='fame_fbs',
        metadata={
            'step_size': tau,
            'max_iters': cfg.max_iters,
            'phase_starts': cfg.phase_starts,
            'local_sweeps': cfg.local_sweeps,
        },
    )
