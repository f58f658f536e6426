"""ARX system identification workflow for the valve data.

Covers synthetic data generation (slow sinusoid + uniform perturbation + step
changes, output delayed one sample with light noise), ordinary-least-squares
ARX estimation over the full 10x10x10 order grid, free-run simulation fit
scoring, and misfit reporting.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class IdentificationError(ValueError):
    pass


@dataclass(frozen=True)
class SignalDataset:
    t: np.ndarray
    u: np.ndarray
    y: np.ndarray
    dt: float

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        u = np.asarray(self.u, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if not (len(t) == len(u) == len(y)):
            raise IdentificationError("t, u, y must have equal lengths")
        steps = np.diff(t)
        if len(t) > 1 and not np.allclose(steps, self.dt, rtol=1e-9, atol=1e-9):
            raise IdentificationError("time vector must be uniform with step dt")
        for arr in (t, u, y):
            arr.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "y", y)

    def __len__(self) -> int:
        return len(self.t)

    def split_half(self) -> tuple["SignalDataset", "SignalDataset"]:
        """Working/validation halves for the estimation protocol."""
        mid = len(self) // 2
        head = SignalDataset(self.t[:mid], self.u[:mid], self.y[:mid], self.dt)
        tail_t = self.t[mid:] - self.t[mid]
        tail = SignalDataset(tail_t, self.u[mid:], self.y[mid:], self.dt)
        return head, tail

    def to_csv(self) -> str:
        lines = ["t_s,u,y"]
        for ti, ui, yi in zip(self.t, self.u, self.y):
            lines.append(f"{ti:.6f},{ui:.6f},{yi:.6f}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "SignalDataset":
        rows = [line.split(",") for line in text.strip().splitlines()[1:]]
        t = np.array([float(r[0]) for r in rows])
        u = np.array([float(r[1]) for r in rows])
        y = np.array([float(r[2]) for r in rows])
        if len(t) < 2:
            raise IdentificationError("dataset needs at least two samples")
        return cls(t, u, y, float(t[1] - t[0]))


@dataclass(frozen=True)
class ArxOrder:
    na: int  # poles
    nb: int  # zeros + 1
    nk: int  # input delay, samples

    def __post_init__(self):
        for name, v in (("na", self.na), ("nb", self.nb), ("nk", self.nk)):
            if not 1 <= v <= 10:
                raise IdentificationError(f"{name} must be in [1, 10], got {v}")


@dataclass(frozen=True)
class ArxModel:
    order: ArxOrder
    a: np.ndarray  # na coefficients of past outputs
    b: np.ndarray  # nb coefficients of delayed inputs
    intercept: float = 0.0  # absorbs the residual constant after detrending

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if len(a) != self.order.na or len(b) != self.order.nb:
            raise IdentificationError("coefficient lengths do not match the order")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


def generate_valve_data(n: int = 1000, dt: float = 0.5, seed: int = 0,
                        sine_amp: float = 0.30, sine_period: float = 120.0,
                        perturb_amp: float = 0.05, step_every: int = 100,
                        step_amp: float = 0.25, output_noise_std: float = 0.004,
                        ) -> SignalDataset:
    """Synthetic valve records: input in [0,1], output = one-sample-delayed
    input plus Gaussian noise, also clipped to [0,1]."""
    if n < 10:
        raise IdentificationError("need at least 10 samples")
    rng = np.random.default_rng(seed)
    t = np.arange(n) * dt
    steps = np.repeat(rng.uniform(-step_amp, step_amp, size=n // step_every + 1),
                      step_every)[:n]
    u = (0.5 + sine_amp * np.sin(2.0 * np.pi * t / sine_period)
         + rng.uniform(-perturb_amp, perturb_amp, size=n) + steps)
    u = np.clip(u, 0.0, 1.0)
    y = np.empty(n)
    y[0] = u[0]
    y[1:] = u[:-1]
    y = np.clip(y + rng.normal(0.0, output_noise_std, size=n), 0.0, 1.0)
    return SignalDataset(t, u, y, dt)


def _regression(data: SignalDataset, order: ArxOrder,
                ) -> tuple[np.ndarray, np.ndarray, float, float]:
    """Build the mean-removed ARX regression (phi, target, u_mean, y_mean)."""
    na, nb, nk = order.na, order.nb, order.nk
    u_mean, y_mean = float(np.mean(data.u)), float(np.mean(data.y))
    u = data.u - u_mean
    y = data.y - y_mean
    start = max(na, nk + nb - 1)
    if len(data) <= start + 10:
        raise IdentificationError(f"dataset too short for order {order}")
    rows = len(data) - start
    phi = np.empty((rows, na + nb + 1))
    for i in range(na):
        phi[:, i] = -y[start - 1 - i:len(y) - 1 - i]
    for j in range(nb):
        phi[:, na + j] = u[start - nk - j:len(u) - nk - j]
    phi[:, -1] = 1.0  # intercept: detrended signals rarely balance exactly
    return phi, y[start:], u_mean, y_mean


def fit_arx(data: SignalDataset, order: ArxOrder) -> ArxModel:
    """Ordinary least squares on y(t) = -sum a_i y(t-i) + sum b_j u(t-nk-j+1).

    The mean is removed from both signals first; a free intercept absorbs the
    residual constant so coefficients stay unbiased when the empirical means
    are not exactly steady-state-consistent. A rank-deficient regressor
    matrix raises, naming the degenerate order.
    """
    phi, target, _, _ = _regression(data, order)
    theta, _, rank, _ = np.linalg.lstsq(phi, target, rcond=None)
    if rank < phi.shape[1]:
        raise IdentificationError(f"rank-deficient regression for order {order}")
    return ArxModel(order, a=theta[:order.na], b=theta[order.na:-1],
                    intercept=float(theta[-1]))


def simulate_arx(model: ArxModel, data: SignalDataset) -> np.ndarray:
    """Free-run (simulated, not one-step-ahead) response to the dataset input.

    The first max(na, nk+nb-1) outputs are seeded from the measured signal as
    warm-up; everything after uses the model's own past outputs. Implemented
    as the IIR filter A(q) y = B(q) u with warm-up initial conditions.
    """
    from scipy.signal import lfilter, lfiltic

    na, nb, nk = model.order.na, model.order.nb, model.order.nk
    u_mean, y_mean = float(np.mean(data.u)), float(np.mean(data.y))
    u = data.u - u_mean
    y_meas = data.y - y_mean
    start = max(na, nk + nb - 1)
    b_poly = np.concatenate([np.zeros(nk), model.b])
    a_poly = np.concatenate([[1.0], model.a])
    # Split FIR/IIR so the intercept joins the driving signal exactly.
    drive = lfilter(b_poly, [1.0], u) + model.intercept
    zi = lfiltic([1.0], a_poly, y=y_meas[start - 1::-1])
    y_rest, _ = lfilter([1.0], a_poly, drive[start:], zi=zi)
    y_sim = np.concatenate([y_meas[:start], y_rest])
    return y_sim + y_mean


def fit_percent(model: ArxModel, validation: SignalDataset) -> float:
    """Normalized root-mean-square fit of the free-run simulation, percent.

    100 * (1 - ||y - y_sim|| / ||y - mean(y)||); misfit is 100 minus this.
    """
    y = validation.y
    denom = float(np.linalg.norm(y - np.mean(y)))
    if denom == 0.0:
        raise IdentificationError("constant validation output: fit undefined")
    y_sim = simulate_arx(model, validation)
    return 100.0 * (1.0 - float(np.linalg.norm(y - y_sim)) / denom)


GRID_HEADER = "na,nb,nk,misfit_pct"


@dataclass(frozen=True)
class GridResult:
    table: tuple[tuple[ArxOrder, float], ...]  # (order, misfit %) for all cells
    best: ArxOrder
    best_misfit: float

    def to_csv(self) -> str:
        lines = [GRID_HEADER]
        for order, misfit in self.table:
            lines.append(f"{order.na},{order.nb},{order.nk},{misfit:.6f}")
        return "\n".join(lines) + "\n"


def grid_search(data: SignalDataset, max_order: int = 10) -> GridResult:
    """Fit every (na, nb, nk) combination on the working half and score the
    free-run misfit on the validation half.

    Degenerate fits score 100% misfit instead of aborting the grid. Ties break
    toward smaller na, then nb, then nk (the iteration order).
    """
    work, valid = data.split_half()
    table = []
    best_order, best_misfit = None, np.inf
    for na in range(1, max_order + 1):
        for nb in range(1, max_order + 1):
            for nk in range(1, max_order + 1):
                order = ArxOrder(na, nb, nk)
                try:
                    model = fit_arx(work, order)
                    misfit = 100.0 - fit_percent(model, valid)
                    if not np.isfinite(misfit):
                        misfit = 100.0
                except IdentificationError:
                    misfit = 100.0
                table.append((order, misfit))
                if misfit < best_misfit:
                    best_order, best_misfit = order, misfit
    return GridResult(tuple(table), best_order, best_misfit)
