"""Monte-Carlo engine for the estimation strategies.

Three strategies are supported:

* ``single-copy-optimal`` -- the phase is known; each trial measures n
  copies with the optimal POVM and averages the locally unbiased estimates.
* ``two-step`` -- the phase is hidden; floor(n^e) copies are spent on a
  simple equatorial phase estimate, the rest on the optimal measurement
  built at the estimated phase.
* ``adaptive`` -- the full parameter vector is unknown; copies are consumed
  in batches, with a maximum-likelihood re-estimate (and a re-targeted
  optimal POVM) after every batch.

Trials draw from independent counter-based streams derived from
(seed, trial index), so results are deterministic and order-independent.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import WeightSpec
from .fisher import classical_fisher
from .model import (
    MIN_THETA1,
    SIGMA,
    SIGMA0,
    ThetaParams,
    bloch_derivatives,
    bloch_from_theta,
)
from .povm import Povm, build_optimal_estimator, build_optimal_povm

__all__ = [
    "SimConfig",
    "SimResult",
    "sample_outcomes",
    "run_single_copy_optimal",
    "run_two_step",
    "run_adaptive",
    "mse_from_trials",
    "run",
]

STRATEGIES = ("single-copy-optimal", "two-step", "adaptive")


@dataclass(frozen=True)
class SimConfig:
    theta_true: ThetaParams
    weight: WeightSpec
    strategy: str
    n: int
    trials: int
    seed: int = 0
    phase_fraction_exponent: float = 0.5
    batch_size: int = 100

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.n < 4:
            raise ValueError("n must be at least 4")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0.0 < self.phase_fraction_exponent < 1.0:
            raise ValueError("phase_fraction_exponent must be in (0, 1)")
        if self.strategy == "two-step":
            m = int(self.n ** self.phase_fraction_exponent)
            if m < 1:
                raise ValueError("phase stage receives no copies")
            if self.n - m < 2:
                raise ValueError("main stage receives fewer than 2 copies")

    def trial_rng(self, trial):
        return np.random.default_rng((self.seed, trial))


@dataclass(frozen=True)
class SimResult:
    empirical_mse: np.ndarray
    weighted_mse: float
    n_times_weighted_mse: float
    stderr: float
    diagnostics: dict = field(default_factory=dict)


def sample_outcomes(t, povm, n, rng):
    """Multinomial outcome counts from n copies measured with the POVM."""
    p = povm.probabilities(t)
    return rng.multinomial(n, p / np.sum(p))


def mse_from_trials(estimates, truth, weight, n=1):
    """Empirical MSE matrix and jackknife stderr of its weighted trace.

    estimates: (trials, k) array of per-trial estimates; truth: k-vector.
    The jackknife is over trials; for a plain mean it reduces to the usual
    standard error of the per-trial weighted squared errors.
    """
    estimates = np.asarray(estimates, dtype=float)
    if estimates.ndim != 2 or estimates.shape[0] < 2:
        raise ValueError("need at least 2 trials")
    errors = estimates - np.asarray(truth, dtype=float)
    v = errors.T @ errors / errors.shape[0]
    wfull = weight.full() if isinstance(weight, WeightSpec) else np.asarray(weight)
    wfull = wfull[: errors.shape[1], : errors.shape[1]]
    per_trial = np.einsum("ti,ij,tj->t", errors, wfull, errors)
    weighted = float(np.mean(per_trial))
    ntr = len(per_trial)
    stderr = float(np.std(per_trial, ddof=1) / np.sqrt(ntr))
    return SimResult(v, weighted, n * weighted, stderr)


def run_single_copy_optimal(cfg):
    """Known-phase baseline: optimal POVM and estimator at the truth.

    Each trial measures n copies, averages the n single-copy estimates,
    and the per-copy weighted MSE (n times the trial MSE) is compared
    against the Nagaoka bound.
    """
    t = cfg.theta_true
    w2 = cfg.weight.matrix if cfg.weight.is_block else cfg.weight.full()[:2, :2]
    povm, _ = build_optimal_povm(t, w2)
    estimator = build_optimal_estimator(t, w2, povm)
    est_matrix = estimator.estimate_matrix()
    p = povm.probabilities(t)
    p = p / np.sum(p)
    trial_means = np.empty((cfg.trials, 2))
    for trial in range(cfg.trials):
        rng = cfg.trial_rng(trial)
        counts = rng.multinomial(cfg.n, p)
        trial_means[trial] = counts @ est_matrix / cfg.n
    result = mse_from_trials(trial_means, t.as_array(2), w2, n=cfg.n)
    exact = np.linalg.inv(classical_fisher(t, povm, 2))
    diag = {"analytic_single_copy_mse": exact, "strategy": cfg.strategy}
    return SimResult(
        result.empirical_mse,
        result.weighted_mse,
        result.n_times_weighted_mse,
        cfg.n * result.stderr,
        diag,
    )


def _equatorial_axis_povm(axis):
    proj = 0.5 * (SIGMA0 + SIGMA[axis])
    return Povm([("+", proj), ("-", SIGMA0 - proj)])


def _phase_stage_rough(t, m, rng):
    """Phase estimate from m copies split between sigma1 and sigma2 PVMs.

    Returns (theta3_hat, v33_hat, r_hat, resampled): the estimate, its
    delta-method variance, the implied visibility estimate, and a flag for
    a degenerate draw (both empirical means zero) that forced a redraw.
    """
    s = bloch_from_theta(t)
    m1 = m // 2
    m2 = m - m1
    p1 = 0.5 * (1.0 + s[0])
    p2 = 0.5 * (1.0 + s[1])
    resampled = False
    for _ in range(100):
        mean1 = 2.0 * rng.binomial(m1, p1) / m1 - 1.0 if m1 else 0.0
        mean2 = 2.0 * rng.binomial(m2, p2) / m2 - 1.0 if m2 else 0.0
        if mean1 != 0.0 or mean2 != 0.0:
            break
        resampled = True
    theta3_hat = math.atan2(mean2, mean1)
    r2 = max(mean1 * mean1 + mean2 * mean2, 1e-12)
    var1 = (1.0 - mean1 * mean1) / m1 if m1 else 0.0
    var2 = (1.0 - mean2 * mean2) / m2 if m2 else 0.0
    v33_hat = (mean1 * mean1 * var2 + mean2 * mean2 * var1) / (r2 * r2)
    return theta3_hat, max(v33_hat, 1e-12), math.sqrt(r2), resampled


def _phase_stage(t, m, rng):
    """Two-stage phase estimate from m copies.

    A rough sigma1/sigma2 estimate on 40% of the copies is refined with a
    tangential equatorial PVM (maximal phase sensitivity) on the rest; the
    two are fused by inverse-variance weighting.  Near-efficient:
    m * var(theta3_hat) approaches g33 = 1/theta1^2.

    Returns (theta3_hat, v33_hat, resampled).
    """
    m_rough = max(m * 2 // 5, min(m, 8))
    m_fine = m - m_rough
    rough, v_rough, r_hat, resampled = _phase_stage_rough(t, m_rough, rng)
    if m_fine == 0 or r_hat < 0.05:
        return rough, v_rough, True if r_hat < 0.05 else resampled
    # tangential direction at the rough phase: probability (1 + t1 sin d)/2
    # with d the remaining phase error
    s = bloch_from_theta(t)
    u = np.array([-math.sin(rough), math.cos(rough), 0.0])
    p = 0.5 * (1.0 + float(u @ s))
    mean_t = 2.0 * rng.binomial(m_fine, min(max(p, 0.0), 1.0)) / m_fine - 1.0
    ratio = min(max(mean_t / r_hat, -1.0), 1.0)
    delta_hat = math.asin(ratio)
    v_fine = max((1.0 - mean_t * mean_t), 1e-12) / (
        r_hat * r_hat * max(1.0 - ratio * ratio, 0.25) * m_fine
    )
    w_rough = 1.0 / v_rough
    w_fine = 1.0 / v_fine
    theta3_hat = rough + delta_hat * w_fine / (w_fine + w_rough)
    v33_hat = 1.0 / (w_fine + w_rough)
    return theta3_hat, v33_hat, resampled


def run_two_step(cfg):
    """Two-step strategy: spend floor(n^e) copies on the phase, then measure.

    The estimator for the main stage is anchored at the true interest
    parameters with the estimated phase.  Because the mis-aimed optimal
    measurement reads off theta1 cos(dtheta3) instead of theta1, the raw
    estimate carries an O(dtheta3^2) bias; the first component is debiased
    by the factor 1 + v33_hat/2 using the phase stage's own variance
    estimate, which removes the bias to first order in v33.
    """
    t = cfg.theta_true
    w2 = cfg.weight.matrix if cfg.weight.is_block else cfg.weight.full()[:2, :2]
    m = int(cfg.n ** cfg.phase_fraction_exponent)
    n2 = cfg.n - m
    g33 = 1.0 / (t.theta1 * t.theta1)
    trial_means = np.empty((cfg.trials, 2))
    theta3_errors = np.empty(cfg.trials)
    flagged = 0
    for trial in range(cfg.trials):
        rng = cfg.trial_rng(trial)
        theta3_hat, v33_hat, resampled = _phase_stage(t, m, rng)
        flagged += bool(resampled)
        theta3_errors[trial] = _wrap_angle(theta3_hat - t.theta3)
        anchor = ThetaParams(t.theta1, t.theta2, theta3_hat)
        povm, _ = build_optimal_povm(anchor, w2)
        estimator = build_optimal_estimator(anchor, w2, povm)
        counts = sample_outcomes(t, povm, n2, rng)
        mean = counts @ estimator.estimate_matrix() / n2
        mean[0] *= 1.0 + 0.5 * v33_hat
        trial_means[trial] = mean
    result = mse_from_trials(trial_means, t.as_array(2), w2, n=cfg.n)
    v33_emp = float(np.mean(theta3_errors**2))
    gamma = v33_emp / (v33_emp - g33 / cfg.n) if v33_emp > g33 / cfg.n else math.inf
    diag = {
        "strategy": cfg.strategy,
        "phase_copies": m,
        "v33_empirical": v33_emp,
        "v33_times_m": v33_emp * m,
        "gamma": gamma,
        "resampled_trials": flagged,
    }
    return SimResult(
        result.empirical_mse,
        result.weighted_mse,
        result.n_times_weighted_mse,
        cfg.n * result.stderr,
        diag,
    )


def _wrap_angle(delta):
    """Minimal signed angular distance, in (-pi, pi]."""
    return (delta + math.pi) % (2.0 * math.pi) - math.pi


def _tomographic_povm():
    elements = []
    for i in range(3):
        proj = 0.5 * (SIGMA0 + SIGMA[i])
        elements.append((f"s{i + 1}+", proj / 3.0))
        elements.append((f"s{i + 1}-", (SIGMA0 - proj) / 3.0))
    return Povm(elements)


def _project_theta(vec):
    t1, t2, t3 = vec
    r = math.hypot(t1, t2)
    if r >= 0.99:
        t1, t2 = t1 * 0.99 / r, t2 * 0.99 / r
    if abs(t1) < 1e-6:
        t1 = 1e-6 if t1 >= 0 else -1e-6
    return ThetaParams(t1, t2, t3)


def _mle_update(batches, start, steps=20):
    """Fisher-scoring MLE over accumulated (povm, counts) batches.

    Returns (ThetaParams, converged).  Non-convergence is reported, not
    raised; the caller keeps the previous estimate.
    """
    theta = start
    converged = False
    for _ in range(steps):
        s = bloch_from_theta(theta)
        derivs = np.array(bloch_derivatives(theta, 3))
        grad = np.zeros(3)
        hess = np.zeros((3, 3))
        for povm_vectors, povm_weights, counts in batches:
            # p_x = w_x (1 + <n_x, s>) for elements w_x (I + n_x.sigma)/2
            p = povm_weights * (1.0 + povm_vectors @ s)
            dp = povm_weights[:, None] * (povm_vectors @ derivs.T)
            mask = p > 1e-12
            grad += (counts[mask] / p[mask]) @ dp[mask]
            hess += np.sum(counts) * (dp[mask].T / p[mask]) @ dp[mask]
        try:
            step = np.linalg.solve(hess + 1e-9 * np.eye(3), grad)
        except np.linalg.LinAlgError:
            return theta, False
        new = _project_theta(theta.as_array(3) + step)
        shift = np.max(np.abs(new.as_array(3) - theta.as_array(3)))
        theta = new
        if shift < 1e-9:
            converged = True
            break
    return theta, converged


def _povm_bloch_form(povm):
    """Decompose elements as w (I + n.sigma)/2; returns (vectors, weights)."""
    vectors, weights = [], []
    for _, element in povm:
        w = float(np.trace(element).real)
        if w < 1e-15:
            vectors.append(np.zeros(3))
            weights.append(0.0)
            continue
        vec = np.array([np.trace(element @ SIGMA[i]).real for i in range(3)]) / w
        vectors.append(vec)
        weights.append(w / 2.0)
    return np.array(vectors), np.array(weights)


def run_adaptive(cfg):
    """Batched adaptive strategy with maximum-likelihood re-estimation.

    The first batch is tomographic (sigma1, sigma2, sigma3 thirds); every
    later batch uses the optimal POVM at the current estimate.  The final
    interest-parameter estimate comes from the last MLE.
    """
    t = cfg.theta_true
    w2 = cfg.weight.matrix if cfg.weight.is_block else cfg.weight.full()[:2, :2]
    batch = cfg.batch_size
    n_batches = max(cfg.n // batch, 1)
    tomographic = _tomographic_povm()
    tomo_form = _povm_bloch_form(tomographic)
    trial_means = np.empty((cfg.trials, 2))
    nonconverged = 0
    for trial in range(cfg.trials):
        rng = cfg.trial_rng(trial)
        batches = []
        theta_hat = None
        for b in range(n_batches):
            if theta_hat is None:
                povm, form = tomographic, tomo_form
            else:
                povm, _ = build_optimal_povm(theta_hat, w2)
                form = _povm_bloch_form(povm)
            counts = sample_outcomes(t, povm, batch, rng)
            batches.append((form[0], form[1], counts))
            start = theta_hat if theta_hat is not None else _initial_guess(batches)
            new_hat, ok = _mle_update(batches, start)
            if ok or theta_hat is None:
                theta_hat = new_hat
            else:
                nonconverged += 1
        trial_means[trial] = theta_hat.as_array(2)
    result = mse_from_trials(trial_means, t.as_array(2), w2, n=cfg.n)
    diag = {"strategy": cfg.strategy, "nonconverged_batches": nonconverged}
    return SimResult(
        result.empirical_mse,
        result.weighted_mse,
        result.n_times_weighted_mse,
        cfg.n * result.stderr,
        diag,
    )


def _initial_guess(batches):
    """Moment estimate of the Bloch vector from tomographic counts."""
    vectors, weights, counts = batches[0]
    total = np.sum(counts)
    s = np.zeros(3)
    for axis in range(3):
        plus, minus = counts[2 * axis], counts[2 * axis + 1]
        pair = plus + minus
        if pair:
            s[axis] = (plus - minus) / pair
    t1 = math.hypot(s[0], s[1])
    theta3 = math.atan2(s[1], s[0]) if t1 > 0 else 0.0
    return _project_theta((max(t1, 2e-6), s[2], theta3))


def run(cfg):
    """Dispatch on cfg.strategy."""
    if cfg.strategy == "single-copy-optimal":
        return run_single_copy_optimal(cfg)
    if cfg.strategy == "two-step":
        return run_two_step(cfg)
    return run_adaptive(cfg)
