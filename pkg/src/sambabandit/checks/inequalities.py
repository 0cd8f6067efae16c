"""
Grid checks of the scalar inequalities behind the regret bounds, the Lambert W
solver they rely on, and the deterministic recursions whose decay rates the
bounds are built from.
"""

from __future__ import annotations

import logging
import math
from typing import Literal

import numpy as np
from scipy import optimize, special

from ..exceptions import PreconditionError
from ..rng import make_rng
from .report import CheckReport, CheckResult, CheckStatus

_logger = logging.getLogger(__name__)

SLACK = 1e-12
W_REL_TOL = 1e-12
W_MAX_ITER = 100

Variant = Literal["plain", "log_cooling", "loglog_cooling"]
VARIANTS: tuple[Variant, ...] = ("plain", "log_cooling", "loglog_cooling")


# ---------------------------------------------------------------------------
# Lambert W
# ---------------------------------------------------------------------------


def lambert_w(y: float) -> float:
    """Principal branch W(y) for y >= e, so W >= 1.

    Newton's method on w + log w = log y, started from the asymptotic seed
    log y - log log y.
    """
    if not y >= math.e or math.isinf(y):
        raise PreconditionError(f"lambert_w needs finite y >= e, got {y!r}")
    log_y = math.log(y)
    w = log_y - math.log(log_y)
    for _ in range(W_MAX_ITER):
        step = (w + math.log(w) - log_y) / (1.0 + 1.0 / w)
        w -= step
        if abs(step) <= 1e-16 * w:
            break
    return w


def lambert_w_residual(y: float) -> float:
    """Relative residual |W e^W - y| / y."""
    w = lambert_w(y)
    return abs(w * math.exp(w) - y) / y


def check_lambert_w(resolution: int = 1000, y_max: float = 1e8) -> CheckResult:
    ys = np.geomspace(math.e, y_max, resolution)
    residuals = np.array([lambert_w_residual(float(y)) for y in ys])
    worst = int(np.argmax(residuals))
    status = CheckStatus.PASS if residuals[worst] <= W_REL_TOL else CheckStatus.FAIL
    return CheckResult(
        "lambert_w_accuracy",
        status,
        f"max relative residual {residuals[worst]:.3g} on [e, {y_max:g}]",
        {"y": float(ys[worst]), "residual": float(residuals[worst])},
    )


# ---------------------------------------------------------------------------
# Inequality grid
# ---------------------------------------------------------------------------


def _grid_result(name: str, lhs: np.ndarray, rhs: np.ndarray, points: dict[str, np.ndarray]) -> CheckResult:
    """PASS when lhs <= rhs + SLACK everywhere; worst point is the largest lhs - rhs."""
    excess = lhs - rhs
    worst = int(np.argmax(excess))
    point = {k: float(v[worst]) for k, v in points.items()}
    point.update(lhs=float(lhs[worst]), rhs=float(rhs[worst]))
    status = CheckStatus.PASS if excess[worst] <= SLACK else CheckStatus.FAIL
    return CheckResult(name, status, f"{lhs.size} points, max lhs - rhs = {excess[worst]:.3g}", point)


def check_lambert_lower_bound(resolution: int) -> CheckResult:
    """W(y) >= log(y / log y) on [e, 1e6]."""
    ys = np.geomspace(math.e, 1e6, resolution)
    w = np.array([lambert_w(float(y)) for y in ys])
    return _grid_result("lambert_w_lower_bound", np.log(ys / np.log(ys)), w, {"y": ys})


def check_log_ratio_bound(resolution: int) -> CheckResult:
    """-log(1 - z) / (1 - z) <= z + 4 z^2 on [0, 1/3]."""
    z = np.linspace(0.0, 1.0 / 3.0, resolution)
    lhs = -np.log1p(-z) / (1.0 - z)
    return _grid_result("log_ratio_bound", lhs, z + 4.0 * z * z, {"z": z})


def harmonic_tail(a: np.ndarray, b: np.ndarray, c: np.ndarray, t: np.ndarray) -> np.ndarray:
    """sum_{s=0}^{T-1} A / (B + C s), through the digamma function."""
    x = b / c
    return (a / c) * (special.digamma(x + t) - special.digamma(x))


def check_harmonic_bound(resolution: int, seed: int = 0) -> CheckResult:
    """sum_{s<T} A/(B+Cs) <= (A/C) log T for random A, C, B > 2C and T >= 3."""
    rng = make_rng(seed, 3)
    n = resolution
    a = np.exp(rng.uniform(math.log(1e-2), math.log(1e2), n))
    c = np.exp(rng.uniform(math.log(1e-2), math.log(1e2), n))
    ratio = 2.0 + np.exp(rng.uniform(math.log(1e-6), math.log(50.0), n))
    b = ratio * c
    t = np.floor(np.exp(rng.uniform(math.log(3.0), math.log(1e6), n)))
    t[: min(n, 8)] = np.arange(3, 3 + min(n, 8))
    lhs = harmonic_tail(a, b, c, t)
    rhs = (a / c) * np.log(t)
    return _grid_result("harmonic_sum_bound", lhs, rhs, {"A": a, "B": b, "C": c, "T": t})


def harmonic_two_term_crossover() -> float:
    """Ratio B/C at which 1/x + 1/(x+1) = log 2; the two-term sum exceeds log 2 below it."""
    return float(optimize.brentq(lambda x: 1.0 / x + 1.0 / (x + 1.0) - math.log(2.0), 2.0, 10.0))


def harmonic_two_term_info() -> CheckResult:
    """The harmonic bound fails at T = 2 when 2 < B/C < crossover; reported, not asserted."""
    x_star = harmonic_two_term_crossover()
    b, c = 2.01, 1.0
    lhs = float(harmonic_tail(np.array(1.0), np.array(b), np.array(c), np.array(2.0)))
    return CheckResult(
        "harmonic_sum_bound_T2",
        CheckStatus.INFO,
        f"at T=2 the bound needs B/C >= {x_star:.6f}; B=2.01, C=1 gives {lhs:.4f} > log 2; "
        "the asserted grid samples T >= 3",
        {"A": 1.0, "B": b, "C": c, "T": 2, "lhs": lhs, "rhs": math.log(2.0), "crossover": x_star},
    )


def _theta_grid(resolution: int, low: float, high: float) -> np.ndarray:
    return np.geomspace(low, high, max(10, resolution // 100))


def _worst_over_thetas(name: str, thetas: np.ndarray, sides) -> CheckResult:
    """Run ``sides(theta) -> (T, lhs, rhs)`` per theta and keep the largest lhs - rhs."""
    best: tuple[float, dict[str, float]] | None = None
    n_points = 0
    for theta in thetas:
        t, lhs, rhs = sides(float(theta))
        excess = lhs - rhs
        i = int(np.argmax(excess))
        n_points += t.size
        if best is None or excess[i] > best[0]:
            point = {"theta": float(theta), "T": float(t[i]), "lhs": float(lhs[i]), "rhs": float(rhs[i])}
            best = (float(excess[i]), point)
    assert best is not None
    status = CheckStatus.PASS if best[0] <= SLACK else CheckStatus.FAIL
    return CheckResult(name, status, f"{n_points} points, max lhs - rhs = {best[0]:.3g}", best[1])


def check_log_sum_bound(resolution: int) -> CheckResult:
    """sum_{t=ceil(e/theta)+1}^{T} log(theta t)/(theta t) <= (log theta T)^2 / (2 theta)."""
    t_span = max(1000, 10 * resolution)

    def sides(theta: float):
        t0 = math.ceil(math.e / theta) + 1
        t = np.arange(t0, t0 + t_span, dtype=float)
        lhs = np.cumsum(np.log(theta * t) / (theta * t))
        return t, lhs, np.log(theta * t) ** 2 / (2.0 * theta)

    return _worst_over_thetas("log_sum_bound", _theta_grid(resolution, 1e-3, 1.0), sides)


def check_loglog_sum_bound(resolution: int) -> CheckResult:
    """sum_{t=2}^{T} log(e + log theta t)/t <= log T * log(e + log theta T)."""
    t = np.arange(2, 2 + max(1000, 10 * resolution), dtype=float)

    def sides(theta: float):
        inner = np.log(math.e + np.log(theta * t))
        return t, np.cumsum(inner / t), np.log(t) * inner

    return _worst_over_thetas("loglog_sum_bound", _theta_grid(resolution, 0.1, 10.0), sides)


def check_inequality_suite(resolution: int = 1000, seed: int = 0) -> CheckReport:
    """Grid checks of the five scalar inequalities, each with slack 1e-12."""
    if resolution < 100:
        raise PreconditionError(f"resolution must be >= 100, got {resolution}")
    report = CheckReport(suite="inequalities")
    report.add(check_lambert_lower_bound(resolution))
    report.add(check_log_ratio_bound(resolution))
    report.add(check_harmonic_bound(resolution, seed))
    report.add(harmonic_two_term_info())
    report.add(check_log_sum_bound(resolution))
    report.add(check_loglog_sum_bound(resolution))
    for r in report.results:
        _logger.debug("%s: %s %s", r.name, r.status.value, r.detail)
    return report


# ---------------------------------------------------------------------------
# Deterministic recursions
# ---------------------------------------------------------------------------


def _check_recursion_domain(q0, eta, theta, horizon, variant: str) -> None:
    q0, eta, theta, horizon = map(np.asarray, (q0, eta, theta, horizon))
    if variant not in VARIANTS:
        raise PreconditionError(f"unknown recursion variant {variant!r}")
    if np.any((q0 <= 0) | (q0 >= 1)):
        raise PreconditionError("q0 must lie in (0, 1)")
    if np.any((eta <= 0) | (eta > 1)):
        raise PreconditionError("eta must lie in (0, 1]")
    if np.any(horizon < 0):
        raise PreconditionError("T must be >= 0")
    if variant == "plain":
        return
    if np.any(theta <= 0) or np.any(theta * q0 > 1):
        raise PreconditionError("need theta > 0 and theta * q0 <= 1")
    need = math.e if variant == "log_cooling" else 1.0
    if np.any(eta * horizon / theta < need):
        raise PreconditionError(f"{variant} bound needs eta*T/theta >= {need:.6g}")


def recursion_bound(q0, eta, theta, horizon, variant: Variant):
    """Closed-form upper bound on q(T) for each recursion variant."""
    q0, eta, theta, horizon = (np.asarray(x, dtype=float) for x in (q0, eta, theta, horizon))
    if variant == "plain":
        return q0 / (1.0 + eta * q0 * horizon)
    x = eta * horizon / theta
    if variant == "log_cooling":
        return np.log(x) / (eta * horizon)
    return np.log(math.e + np.log(x)) / (eta * horizon)


def iterate_recursion(q0, eta, theta, horizon, variant: Variant) -> np.ndarray:
    """Iterate the equality recursion; vectorised over cases, each stopped at its own T."""
    q = np.array(q0, dtype=float, ndmin=1)
    eta = np.broadcast_to(np.asarray(eta, dtype=float), q.shape)
    theta = np.broadcast_to(np.asarray(theta, dtype=float), q.shape)
    horizon = np.broadcast_to(np.asarray(horizon, dtype=np.int64), q.shape)
    for t in range(int(horizon.max(initial=0))):
        active = horizon > t
        qa = q[active]
        if variant == "plain":
            denom = 1.0
        elif variant == "log_cooling":
            denom = 1.0 - np.log(theta[active] * qa)
        else:
            denom = np.log(math.e - np.log(theta[active] * qa))
        q[active] = qa - eta[active] * qa * qa / denom
    return q


def check_recursion_bounds(
    q0: float, eta: float, theta: float, horizon: int, variant: Variant = "plain"
) -> CheckResult:
    """Iterate one recursion and assert q(T) <= its closed-form bound."""
    _check_recursion_domain(q0, eta, theta, horizon, variant)
    q_t = float(iterate_recursion(q0, eta, theta, horizon, variant)[0])
    bound = float(recursion_bound(q0, eta, theta, horizon, variant))
    status = CheckStatus.PASS if q_t <= bound + SLACK else CheckStatus.FAIL
    return CheckResult(
        f"recursion_{variant}",
        status,
        f"q(T)={q_t:.9g} bound={bound:.9g}",
        {"q0": q0, "eta": eta, "theta": theta, "T": horizon, "q_T": q_t, "bound": bound},
    )


def random_recursion_cases(variant: Variant, n_cases: int, seed: int = 0):
    """Admissible random (q0, eta, theta, T) for ``variant``."""
    rng = make_rng(seed, VARIANTS.index(variant))
    q0 = rng.uniform(0.01, 0.99, n_cases)
    eta = np.exp(rng.uniform(math.log(1e-2), 0.0, n_cases))
    theta = np.exp(rng.uniform(math.log(1e-3), np.log(np.minimum(1.0 / q0, 10.0))))
    theta = np.minimum(theta, 1.0 / q0)
    need = {"plain": 0.0, "log_cooling": math.e, "loglog_cooling": 1.0}[variant]
    t_min = np.ceil(need * theta / eta).astype(np.int64)
    horizon = t_min + rng.integers(0, 2000, n_cases)
    if variant != "plain":
        horizon = np.maximum(horizon, 1)
    return q0, eta, theta, horizon


def check_random_recursions(variant: Variant, n_cases: int = 1000, seed: int = 0) -> CheckResult:
    q0, eta, theta, horizon = random_recursion_cases(variant, n_cases, seed)
    _check_recursion_domain(q0, eta, theta, horizon, variant)
    q_t = iterate_recursion(q0, eta, theta, horizon, variant)
    with np.errstate(divide="ignore", invalid="ignore"):
        bound = recursion_bound(q0, eta, theta, horizon, variant)
    excess = q_t - bound
    worst = int(np.argmax(excess))
    status = CheckStatus.PASS if excess[worst] <= SLACK else CheckStatus.FAIL
    return CheckResult(
        f"recursion_{variant}_random",
        status,
        f"{n_cases} admissible cases, max q(T) - bound = {excess[worst]:.3g}",
        {
            "q0": float(q0[worst]),
            "eta": float(eta[worst]),
            "theta": float(theta[worst]),
            "T": int(horizon[worst]),
            "q_T": float(q_t[worst]),
            "bound": float(bound[worst]),
        },
    )
