"""Lorenz and Rossler trajectories from fixed-step fourth-order Runge-Kutta.

The two built-in systems run through compiled kernels; any other right-hand
side (a plain callable) goes through the slower pure-numpy loop.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Union

import numba
import numpy as np

from .timeseries import TimeSeries

BLOWUP_LIMIT = 1e8

DEFAULT_DT = {"lorenz": 0.001, "rossler": 0.01}
DEFAULT_X0 = (1.0, 1.0, 1.0)


class DivergenceError(RuntimeError):
    """Raised when a state component leaves the blow-up guard."""


class System(str, Enum):
    LORENZ = "lorenz"
    ROSSLER = "rossler"


@dataclass(frozen=True)
class SystemParams:
    """Parameters for one of the two supported flows.

    Only the block matching ``system`` is used: ``sigma, rho, beta`` for
    Lorenz and ``a, b, c`` for Rossler.
    """

    system: System
    sigma: float = 10.0
    rho: float = 28.0
    beta: float = 8.0 / 3.0
    a: float = 0.25
    b: float = 2.0
    c: float = 4.0

    def __post_init__(self):
        object.__setattr__(self, "system", System(self.system))

    @classmethod
    def lorenz(cls, rho: float, sigma: float = 10.0, beta: float = 8.0 / 3.0):
        return cls(System.LORENZ, sigma=sigma, rho=rho, beta=beta)

    @classmethod
    def rossler(cls, a: float, b: float = 2.0, c: float = 4.0):
        return cls(System.ROSSLER, a=a, b=b, c=c)

    @property
    def coefficients(self) -> tuple:
        if self.system is System.LORENZ:
            return (self.sigma, self.rho, self.beta)
        return (self.a, self.b, self.c)

    @property
    def bifurcation_value(self) -> float:
        """The parameter swept in experiments (rho or a)."""
        return self.rho if self.system is System.LORENZ else self.a

    def with_bifurcation_value(self, value: float) -> "SystemParams":
        if self.system is System.LORENZ:
            return SystemParams.lorenz(value, self.sigma, self.beta)
        return SystemParams.rossler(value, self.b, self.c)


@dataclass(frozen=True)
class StateTrajectory:
    states: np.ndarray
    dt: float
    t0: float = 0.0

    def __len__(self):
        return self.states.shape[0]

    @property
    def duration(self) -> float:
        return (self.states.shape[0] - 1) * self.dt


@numba.njit(cache=True)
def _lorenz(s, p):
    return np.array((p[0] * (s[1] - s[0]),
                     s[0] * (p[1] - s[2]) - s[1],
                     s[0] * s[1] - p[2] * s[2]))


@numba.njit(cache=True)
def _rossler(s, p):
    return np.array((-s[1] - s[2],
                     s[0] + p[0] * s[1],
                     p[1] + s[2] * (s[0] - p[2])))


@numba.njit(cache=True)
def _rk4_kernel(kind, p, x0, dt, n_steps, limit):
    out = np.empty((n_steps + 1, 3))
    out[0] = x0
    s = x0.copy()
    for i in range(n_steps):
        if kind == 0:
            k1 = _lorenz(s, p)
            k2 = _lorenz(s + 0.5 * dt * k1, p)
            k3 = _lorenz(s + 0.5 * dt * k2, p)
            k4 = _lorenz(s + dt * k3, p)
        else:
            k1 = _rossler(s, p)
            k2 = _rossler(s + 0.5 * dt * k1, p)
            k3 = _rossler(s + 0.5 * dt * k2, p)
            k4 = _rossler(s + dt * k3, p)
        s = s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        for j in range(3):
            if not np.abs(s[j]) <= limit:
                return out[: i + 1], i + 1
        out[i + 1] = s
    return out, -1


def vector_field(params: SystemParams, state) -> np.ndarray:
    """Right-hand side of the selected ODE at ``state``."""
    s = np.asarray(state, dtype=float)
    p = np.asarray(params.coefficients, dtype=float)
    if params.system is System.LORENZ:
        return _lorenz(s, p)
    return _rossler(s, p)


def _n_steps(dt, t_end):
    return int(np.floor(t_end / dt + 1e-9))


def integrate_rk4(params: Union[SystemParams, Callable], x0, dt: float,
                  t_end: float) -> StateTrajectory:
    """Integrate from ``x0`` over ``[0, t_end]`` with a fixed step ``dt``.

    ``params`` is either a :class:`SystemParams` or a callable ``f(state)``
    returning the time derivative, which lets scalar or toy systems reuse the
    same stepping scheme. The result holds ``floor(t_end / dt) + 1`` states.

    Raises
    ------
    DivergenceError
        If any state component exceeds ``BLOWUP_LIMIT`` in magnitude.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    if not t_end >= dt:
        raise ValueError("t_end must be at least one step")
    n = _n_steps(dt, t_end)

    if isinstance(params, SystemParams):
        kind = 0 if params.system is System.LORENZ else 1
        p = np.asarray(params.coefficients, dtype=float)
        s0 = np.asarray(x0, dtype=float).reshape(3)
        states, bad = _rk4_kernel(kind, p, s0, float(dt), n, BLOWUP_LIMIT)
        if bad >= 0:
            raise DivergenceError(f"state left |x| <= {BLOWUP_LIMIT:g} at step {bad}")
        return StateTrajectory(states, float(dt))

    f = params
    s = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    states = np.empty((n + 1, s.size))
    states[0] = s
    for i in range(n):
        k1 = np.asarray(f(s))
        k2 = np.asarray(f(s + 0.5 * dt * k1))
        k3 = np.asarray(f(s + 0.5 * dt * k2))
        k4 = np.asarray(f(s + dt * k3))
        s = s + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.abs(s) <= BLOWUP_LIMIT):
            raise DivergenceError(f"state left |x| <= {BLOWUP_LIMIT:g} at step {i + 1}")
        states[i + 1] = s
    return StateTrajectory(states, float(dt))


def drop_transient(traj: StateTrajectory, t_cut: float) -> StateTrajectory:
    """Discard every state earlier than ``t_cut`` seconds into ``traj``."""
    if t_cut < 0:
        raise ValueError("t_cut must be non-negative")
    if t_cut >= traj.duration:
        raise ValueError(
            f"transient cut {t_cut} s leaves nothing of a {traj.duration} s trajectory")
    start = int(np.ceil(t_cut / traj.dt - 1e-9))
    return StateTrajectory(traj.states[start:], traj.dt, traj.t0 + start * traj.dt)


def observe(traj: StateTrajectory, component: int = 0) -> TimeSeries:
    """Scalar series of one state coordinate (0 = x by default)."""
    dim = traj.states.shape[1]
    if not 0 <= component < dim:
        raise IndexError(f"component {component} out of range for {dim}-d states")
    return TimeSeries(traj.states[:, component].copy(), traj.dt, traj.t0)


def simulate(params: SystemParams, duration: float, dt: float | None = None,
             t_transient: float = 100.0, component: int = 0,
             x0=DEFAULT_X0) -> TimeSeries:
    """Observable of ``params`` over ``duration`` seconds after the transient."""
    if dt is None:
        dt = DEFAULT_DT[params.system.value]
    traj = integrate_rk4(params, x0, dt, t_transient + duration)
    return observe(drop_transient(traj, t_transient), component)
