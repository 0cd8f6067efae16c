"""
Learning-rate schedules for the SAMBA update.

A schedule maps the probability ``p`` of a non-leading arm to a rate
``alpha(p)``; the update moves that arm by the step size
``gamma(p) = alpha(p) * p**2``. Four variants are supported:

- ``fixed``           alpha(p) = alpha, 0 < alpha < 1
- ``log_cooling``     alpha(p) = beta / (1 - log p)
- ``loglog_cooling``  alpha(p) = beta / log(e - log p)
- ``slowly_varying``  gamma(p) = int_0^p int_0^v l(u) du dv for a builtin l

Config form::

    {"type": "fixed", "alpha": 0.1}
    {"type": "log_cooling", "beta": 1.0}
    {"type": "loglog_cooling", "beta": 1.0, "unvalidated": false}
    {"type": "slowly_varying", "l": "inv_loglog", "tol": 1e-10}
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Union

import numpy as np
from scipy import integrate

from .exceptions import QuadratureError, ScheduleError

_logger = logging.getLogger(__name__)

DEFAULT_QUAD_TOL = 1e-10

# Largest beta accepted behind the "unvalidated" flag: at p = 1/2 the
# cooled rate beta / (1 - log p) reaches 1 exactly for beta = 1 + log 2.
BETA_VALIDATED_MAX = 1.0
BETA_UNVALIDATED_MAX = 1.0 + math.log(2.0)

ScalarFn = Callable[[float], float]


# ---------------------------------------------------------------------------
# Slowly varying functions for the general schedule
# ---------------------------------------------------------------------------


def _inv_log(u: float) -> float:
    return 1.0 / (1.0 - math.log(u))


def _inv_loglog(u: float) -> float:
    return 1.0 / math.log(math.e - math.log(u))


SLOWLY_VARYING: dict[str, ScalarFn] = {
    "inv_log": _inv_log,
    "inv_loglog": _inv_loglog,
    "one": lambda u: 1.0,
    "zero": lambda u: 0.0,
}


def resolve_l(name: str) -> ScalarFn:
    try:
        return SLOWLY_VARYING[name]
    except KeyError:
        known = ", ".join(sorted(SLOWLY_VARYING))
        raise ScheduleError(f"unknown slowly varying function {name!r} (known: {known})", "l")


def _checked(l: ScalarFn) -> ScalarFn:
    """Wrap ``l``: extend it to u = 0 by its right limit and enforce l in [0, 1]."""
    tiny = np.finfo(float).tiny

    def wrapped(u: float) -> float:
        value = float(l(u if u > 0.0 else tiny))
        if not (0.0 <= value <= 1.0):
            raise ScheduleError(f"l({u!r}) = {value!r} lies outside [0, 1]", "l")
        return value

    return wrapped


def gamma_from_l(l: ScalarFn, p: float, tol: float = DEFAULT_QUAD_TOL, nested: bool = False) -> float:
    """Return gamma(p) = int_0^p int_0^v l(u) du dv with absolute error <= ``tol``.

    By default the Fubini-equivalent single integral int_0^p (p - u) l(u) du
    is evaluated with adaptive Gauss-Kronrod quadrature; ``nested=True``
    evaluates the double integral literally with ``dblquad``.
    """
    if not (0.0 < p <= 1.0):
        raise ScheduleError(f"p must lie in (0, 1], got {p!r}", "p")
    if not tol > 0:
        raise ScheduleError(f"quadrature tolerance must be positive, got {tol!r}", "tol")

    fn = _checked(l)
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            if nested:
                value, abserr = integrate.dblquad(
                    lambda u, v: fn(u), 0.0, p, 0.0, lambda v: v, epsabs=tol, epsrel=0.0
                )
            else:
                value, abserr = integrate.quad(
                    lambda u: (p - u) * fn(u), 0.0, p, epsabs=tol, epsrel=0.0, limit=200
                )
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature for gamma({p!r}) did not converge: {exc}") from exc

    if abserr > tol:
        raise QuadratureError(
            f"quadrature for gamma({p!r}) reached error {abserr:.3g} > tol {tol:.3g}", abserr
        )
    return float(value)


# ---------------------------------------------------------------------------
# Schedule variants
# ---------------------------------------------------------------------------


def _check_beta(beta: float, unvalidated: bool) -> None:
    upper = BETA_UNVALIDATED_MAX if unvalidated else BETA_VALIDATED_MAX
    if not (0.0 < beta <= upper):
        hint = "" if unvalidated else " (set \"unvalidated\": true to allow up to 1 + log 2)"
        raise ScheduleError(f"beta must lie in (0, {upper:.6g}], got {beta!r}{hint}", "beta")


@dataclass(frozen=True)
class FixedSchedule:
    alpha: float

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha < 1.0):
            raise ScheduleError(
                f"fixed alpha must lie in (0, 1), got {self.alpha!r}; the update only keeps "
                "every probability positive for alpha < 1, and convergence to the optimal arm "
                "further requires the admissibility bound alpha < gap / (r* - gap)",
                "alpha",
            )

    def alpha_at(self, p: float) -> float:
        return self.alpha

    def to_dict(self) -> dict[str, Any]:
        return {"type": "fixed", "alpha": self.alpha}

    @property
    def label(self) -> str:
        return f"samba(alpha={self.alpha:g})"


@dataclass(frozen=True)
class LogCoolingSchedule:
    beta: float
    unvalidated: bool = False

    def __post_init__(self) -> None:
        _check_beta(self.beta, self.unvalidated)

    def alpha_at(self, p: float) -> float:
        return self.beta / (1.0 - math.log(p))

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"type": "log_cooling", "beta": self.beta}
        if self.unvalidated:
            out["unvalidated"] = True
        return out

    @property
    def label(self) -> str:
        return f"samba-cooling(beta={self.beta:g})"


@dataclass(frozen=True)
class LogLogCoolingSchedule:
    beta: float
    unvalidated: bool = False

    def __post_init__(self) -> None:
        _check_beta(self.beta, self.unvalidated)

    def alpha_at(self, p: float) -> float:
        return self.beta / math.log(math.e - math.log(p))

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"type": "loglog_cooling", "beta": self.beta}
        if self.unvalidated:
            out["unvalidated"] = True
        return out

    @property
    def label(self) -> str:
        return f"samba-loglog(beta={self.beta:g})"


@dataclass(frozen=True)
class SlowlyVaryingSchedule:
    l: str
    tol: float = DEFAULT_QUAD_TOL

    def __post_init__(self) -> None:
        resolve_l(self.l)
        if not self.tol > 0:
            raise ScheduleError(f"tol must be positive, got {self.tol!r}", "tol")

    def gamma_at(self, p: float) -> float:
        return gamma_from_l(resolve_l(self.l), p, self.tol)

    def alpha_at(self, p: float) -> float:
        return self.gamma_at(p) / (p * p)

    def to_dict(self) -> dict[str, Any]:
        return {"type": "slowly_varying", "l": self.l, "tol": self.tol}

    @property
    def label(self) -> str:
        return f"samba-sv({self.l})"


Schedule = Union[FixedSchedule, LogCoolingSchedule, LogLogCoolingSchedule, SlowlyVaryingSchedule]


def _check_p(p: float) -> None:
    if not (0.0 < p <= 1.0):
        raise ScheduleError(f"probability must lie in (0, 1], got {p!r}", "p")


def schedule_alpha(schedule: Schedule, p: float) -> float:
    """Rate alpha(p) of ``schedule`` at probability ``p`` in (0, 1]."""
    _check_p(p)
    return schedule.alpha_at(p)


def step_size(schedule: Schedule, p: float) -> float:
    """Step size gamma(p) = alpha(p) * p**2 used by the update."""
    _check_p(p)
    if isinstance(schedule, SlowlyVaryingSchedule):
        return schedule.gamma_at(p)
    return schedule.alpha_at(p) * p * p


def schedule_from_dict(data: Mapping[str, Any], key: str = "schedule") -> Schedule:
    """Parse the config form of a schedule, raising :class:`ScheduleError` on bad input."""
    if not isinstance(data, Mapping):
        raise ScheduleError("schedule must be a JSON object", key)
    kind = data.get("type")
    try:
        if kind == "fixed":
            return FixedSchedule(alpha=float(data["alpha"]))
        if kind == "log_cooling":
            return LogCoolingSchedule(
                beta=float(data["beta"]), unvalidated=bool(data.get("unvalidated", False))
            )
        if kind == "loglog_cooling":
            return LogLogCoolingSchedule(
                beta=float(data["beta"]), unvalidated=bool(data.get("unvalidated", False))
            )
        if kind == "slowly_varying":
            return SlowlyVaryingSchedule(
                l=str(data["l"]), tol=float(data.get("tol", DEFAULT_QUAD_TOL))
            )
    except KeyError as exc:
        raise ScheduleError(f"missing field {exc.args[0]!r}", f"{key}.{exc.args[0]}") from None
    except ScheduleError as exc:
        raise ScheduleError(exc.message, f"{key}.{exc.key}" if exc.key else key) from None
    except (TypeError, ValueError) as exc:
        raise ScheduleError(f"invalid value: {exc}", key) from None
    raise ScheduleError(f"unknown schedule type {kind!r}", f"{key}.type")
