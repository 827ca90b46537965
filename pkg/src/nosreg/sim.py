"""Fixed-step closed-loop simulation and overshoot monitoring.

Classical RK4 on a uniform grid, with the exosystem integrated jointly with
the plant.  Fixed stepping keeps runs deterministic (identical inputs give
byte-identical trajectories) and makes sample-bracket overshoot detection
well defined.  The integration loops work on plain Python floats: the state
vectors here have a handful of components, where float arithmetic beats
small-array overhead by an order of magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isfinite

import numpy as np

from .chains import Exosystem, MimoChain, NonlinearPlant
from .errors import DimensionMismatch, NonFiniteState
from .linalg import as_vector
from .regulation import RegulatorGains

DEFAULT_ZERO_BAND = 1e-9


@dataclass(frozen=True)
class SimConfig:
    """Grid and detection parameters for one simulation run."""

    step: float = 1e-3
    horizon: float = 40.0
    record_stride: int = 10
    zero_band: float = DEFAULT_ZERO_BAND

    def __post_init__(self):
        if not (self.step > 0.0):
            raise DimensionMismatch("step must be positive")
        if self.horizon < self.step:
            raise DimensionMismatch("horizon must cover at least one step")
        if self.record_stride < 1:
            raise DimensionMismatch("record_stride must be >= 1")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded closed-loop run on a uniform time grid.

    Arrays are sample-major: ``x`` is (K, n), ``w`` is (K, m) and the output
    blocks ``y``, ``r``, ``e``, ``u``, ``v`` are (K, p), with ``e = r - y``
    at every sample.
    """

    times: np.ndarray
    x: np.ndarray
    w: np.ndarray
    y: np.ndarray
    r: np.ndarray
    e: np.ndarray
    u: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class OvershootReport:
    """Per-output sign-change verdicts for an error trace."""

    sign_changed: tuple[bool, ...]
    first_crossing_time: tuple[float | None, ...]
    final_abs_error: tuple[float, ...]

    @property
    def any_overshoot(self) -> bool:
        return any(self.sign_changed)


def rk4_step(deriv, t: float, z, h: float):
    """One classical 4th-order Runge-Kutta update of ``z' = deriv(t, z)``."""
    if not (h > 0.0):
        raise DimensionMismatch("step h must be positive")
    z = np.asarray(z, dtype=float)
    k1 = np.asarray(deriv(t, z), dtype=float)
    k2 = np.asarray(deriv(t + 0.5 * h, z + (0.5 * h) * k1), dtype=float)
    k3 = np.asarray(deriv(t + 0.5 * h, z + (0.5 * h) * k2), dtype=float)
    k4 = np.asarray(deriv(t + h, z + h * k3), dtype=float)
    z_next = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(z_next)):
        raise NonFiniteState(t + h)
    return z_next


def _rk4_tuple(deriv, t, z, h):
    # float-tuple twin of rk4_step for the hot loops below
    h2 = 0.5 * h
    k1 = deriv(t, z)
    k2 = deriv(t + h2, tuple(zi + h2 * ki for zi, ki in zip(z, k1)))
    k3 = deriv(t + h2, tuple(zi + h2 * ki for zi, ki in zip(z, k2)))
    k4 = deriv(t + h, tuple(zi + h * ki for zi, ki in zip(z, k3)))
    s = h / 6.0
    return tuple(zi + s * (a + 2.0 * (b + c) + d)
                 for zi, a, b, c, d in zip(z, k1, k2, k3, k4))


def _rows(mat) -> tuple[tuple[float, ...], ...]:
    return tuple(tuple(float(v) for v in row) for row in np.atleast_2d(mat))


def _matvec(rows, vec) -> tuple[float, ...]:
    return tuple(sum(a * b for a, b in zip(row, vec)) for row in rows)


def _integrate(deriv, z0, cfg: SimConfig, observe):
    """Run the fixed grid, recording ``observe(t, z)`` every ``record_stride`` steps."""
    total = int(round(cfg.horizon / cfg.step))
    h = cfg.step
    z = tuple(float(v) for v in z0)
    times = [0.0]
    states = [z]
    t = 0.0
    try:
        records = [observe(0.0, z)]
        for k in range(total):
            t = (k + 1) * h
            z = _rk4_tuple(deriv, k * h, z, h)
            if not all(map(isfinite, z)):
                raise NonFiniteState(t)
            if (k + 1) % cfg.record_stride == 0:
                times.append(t)
                states.append(z)
                records.append(observe(t, z))
    except OverflowError as exc:
        # float exponentiation overflow inside a plant map: same diagnosis as
        # a NaN/Inf state, the loop has escaped to infinity
        raise NonFiniteState(t) from exc
    return np.array(times), np.array(states), records


def _assemble(times, states, records, n: int) -> Trajectory:
    y, r, e, u, v = (np.array([rec[i] for rec in records]) for i in range(5))
    return Trajectory(times=times, x=states[:, :n], w=states[:, n:],
                      y=y, r=r, e=e, u=u, v=v)


def _gain_rows(gains: RegulatorGains | None, p: int, gamma: int, m: int):
    if gains is None:
        return (((0.0,) * gamma,) * p, ((0.0,) * m,) * p)
    if gains.F.shape != (p, gamma):
        raise DimensionMismatch(
            f"gain F has shape {gains.F.shape}, expected {(p, gamma)}")
    if gains.G.shape != (p, m):
        raise DimensionMismatch(
            f"gain G has shape {gains.G.shape}, expected {(p, m)}")
    return _rows(gains.F), _rows(gains.G)


def simulate_linear(mimo: MimoChain, exo: Exosystem, gains: RegulatorGains | None,
                    xi0, cfg: SimConfig = SimConfig()) -> tuple[Trajectory, OvershootReport]:
    """Integrate the regulated normal-form loop xi' = Ac xi + Bc (F xi + G w), w' = S w.

    ``gains=None`` runs the open chain (v = 0).
    """
    gamma, m, p = mimo.order, exo.dim, mimo.num_outputs
    if exo.num_outputs != p:
        raise DimensionMismatch("exosystem output count does not match the chain")
    xi0 = as_vector(xi0, length=gamma)
    F_rows, G_rows = _gain_rows(gains, p, gamma, m)

    M = np.zeros((gamma + m, gamma + m))
    M[:gamma, :gamma] = mimo.Ac + mimo.Bc @ np.asarray(F_rows)
    M[:gamma, gamma:] = mimo.Bc @ np.asarray(G_rows)
    M[gamma:, gamma:] = exo.S
    M_rows = _rows(M)

    def deriv(t, z):
        return _matvec(M_rows, z)

    H_rows = _rows(exo.H)
    C_rows = _rows(mimo.Cc)

    def observe(t, z):
        xi = z[:gamma]
        w = z[gamma:]
        y = _matvec(C_rows, xi)
        r = _matvec(H_rows, w)
        e = tuple(ri - yi for ri, yi in zip(r, y))
        v = tuple(fv + gv for fv, gv in zip(_matvec(F_rows, xi), _matvec(G_rows, w)))
        return y, r, e, v, v

    z0 = tuple(xi0) + tuple(exo.w0)
    times, states, records = _integrate(deriv, z0, cfg, observe)
    traj = _assemble(times, states, records, gamma)
    return traj, detect_overshoot(traj.times, traj.e, cfg.zero_band)


def simulate_nonlinear(plant: NonlinearPlant, exo: Exosystem,
                       gains: RegulatorGains | None, x0,
                       cfg: SimConfig = SimConfig()) -> tuple[Trajectory, OvershootReport]:
    """Integrate the plant under the linearizing law driven by v = F T2(x) + G w.

    At every derivative evaluation the chain coordinates are recomputed from
    the plant state, so the loop exercises the actual nonlinear closed loop
    rather than its normal-form idealization.  ``gains=None`` forces v = 0,
    exposing the raw effort the linearizing law spends on cancelling the
    plant nonlinearity.
    """
    n, p, m = plant.state_dim, plant.input_dim, exo.dim
    gamma = sum(plant.degrees)
    if exo.num_outputs != p:
        raise DimensionMismatch("exosystem output count does not match the plant")
    x0 = as_vector(x0, length=n)
    F_rows, G_rows = _gain_rows(gains, p, gamma, m)
    S_rows = _rows(exo.S)
    H_rows = _rows(exo.H)
    dynamics, output = plant.dynamics, plant.output
    normal_map, feedback = plant.normal_map, plant.linearizing_feedback

    def control(x, w):
        xi = normal_map(x)
        v = tuple(fv + gv for fv, gv in zip(_matvec(F_rows, xi), _matvec(G_rows, w)))
        return v, feedback(x, v)

    def deriv(t, z):
        x = z[:n]
        w = z[n:]
        v, u = control(x, w)
        return tuple(dynamics(x, u)) + _matvec(S_rows, w)

    def observe(t, z):
        x = z[:n]
        w = z[n:]
        v, u = control(x, w)
        y = tuple(output(x))
        r = _matvec(H_rows, w)
        e = tuple(ri - yi for ri, yi in zip(r, y))
        return y, r, e, tuple(u), v

    z0 = tuple(x0) + tuple(exo.w0)
    times, states, records = _integrate(deriv, z0, cfg, observe)
    traj = _assemble(times, states, records, n)
    return traj, detect_overshoot(traj.times, traj.e, cfg.zero_band)


def detect_overshoot(times, errors, zero_band: float = DEFAULT_ZERO_BAND) -> OvershootReport:
    """Classify each error component: did it ever cross zero beyond the band?

    The initial sign is taken from the first sample outside ``zero_band``; a
    sign change is a later sample strictly beyond the band with the opposite
    sign.  Components that never leave the band report no change.
    """
    times = as_vector(times)
    e = np.asarray(errors, dtype=float)
    if e.ndim == 1:
        e = e.reshape(-1, 1)
    if e.ndim != 2 or e.shape[0] != times.size or times.size == 0:
        raise DimensionMismatch("errors must provide one row per time sample")
    changed, crossing, final = [], [], []
    for j in range(e.shape[1]):
        col = e[:, j]
        out = np.abs(col) > zero_band
        final.append(float(abs(col[-1])))
        if not out.any():
            changed.append(False)
            crossing.append(None)
            continue
        first = int(np.argmax(out))
        s0 = 1.0 if col[first] > 0 else -1.0
        flipped = out & (s0 * col < -zero_band)
        if flipped.any():
            changed.append(True)
            crossing.append(float(times[int(np.argmax(flipped))]))
        else:
            changed.append(False)
            crossing.append(None)
    return OvershootReport(sign_changed=tuple(changed),
                           first_crossing_time=tuple(crossing),
                           final_abs_error=tuple(final))


def write_csv(traj: Trajectory, path) -> None:
    """Dump a trajectory as CSV: t, x*, w*, y*, r*, e*, u*, v* at full precision."""
    n = traj.x.shape[1]
    m = traj.w.shape[1]
    p = traj.y.shape[1]
    header = (["t"]
              + [f"x{i + 1}" for i in range(n)]
              + [f"w{i + 1}" for i in range(m)]
              + [f"y{i + 1}" for i in range(p)]
              + [f"r{i + 1}" for i in range(p)]
              + [f"e{i + 1}" for i in range(p)]
              + [f"u{i + 1}" for i in range(p)]
              + [f"v{i + 1}" for i in range(p)])
    blocks = np.hstack([traj.times[:, None], traj.x, traj.w, traj.y, traj.r,
                        traj.e, traj.u, traj.v])
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in blocks:
            fh.write(",".join(f"{val:.17g}" for val in row) + "\n")
