"""Twelve closed-loop performance measures.

Error metrics (MSE/RMSE/MAE), integral metrics (IAE/ISE/ITAE, rectangle rule
with time measured from series start), and dynamic metrics (steady-state
error over the final 10% of samples, 10-90% rise or fall time, band settling
time, and over/undershoot relative to the setpoint).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


class MetricsError(ValueError):
    pass


@dataclass(frozen=True)
class MetricsReport:
    mse: float                      # bar^2
    rmse: float                     # bar
    mae: float                      # bar
    iae: float                      # bar*s
    ise: float                      # bar^2*s
    itae: float                     # bar*s^2
    sse: float                      # bar
    rise_time: Optional[float]      # s, only for runs starting below setpoint
    fall_time: Optional[float]      # s, only for runs starting above setpoint
    settling_time: Optional[float]  # s, absent if the band is never held
    over_under_pct: float           # %
    direction: str                  # "rise" | "fall" | "none"

    CSV_HEADER = "ipe_bar,mse,rmse,mae,iae,ise,itae,sse,rise_s,fall_s,settle_s,over_under_pct"

    def csv_row(self, ipe: float) -> str:
        def fmt(v):
            return "" if v is None else f"{v:.6f}"

        return ",".join([
            f"{ipe:.1f}", fmt(self.mse), fmt(self.rmse), fmt(self.mae), fmt(self.iae),
            fmt(self.ise), fmt(self.itae), fmt(self.sse), fmt(self.rise_time),
            fmt(self.fall_time), fmt(self.settling_time), fmt(self.over_under_pct),
        ])


def error_metrics(series: Sequence[float], setpoint: float) -> tuple[float, float, float]:
    """(mse, rmse, mae) of setpoint minus measured pressure."""
    y = np.asarray(series, dtype=float)
    if y.size == 0:
        raise MetricsError("empty series")
    e = setpoint - y
    mse = float(np.mean(e ** 2))
    return mse, math.sqrt(mse), float(np.mean(np.abs(e)))


def integral_metrics(series: Sequence[float], setpoint: float, dt: float
                     ) -> tuple[float, float, float]:
    """(iae, ise, itae) by the rectangle rule; t runs from 0 at series start."""
    y = np.asarray(series, dtype=float)
    if y.size == 0:
        raise MetricsError("empty series")
    if dt <= 0.0:
        raise MetricsError("dt must be positive")
    e = setpoint - y
    t = np.arange(y.size) * dt
    iae = float(np.sum(np.abs(e)) * dt)
    ise = float(np.sum(e ** 2) * dt)
    itae = float(np.sum(t * np.abs(e)) * dt)
    return iae, ise, itae


def dynamic_metrics(series: Sequence[float], setpoint: float, dt: float,
                    band_pct: float = 2.0,
                    ) -> tuple[float, Optional[float], Optional[float], Optional[float], float]:
    """(sse, rise_time, fall_time, settling_time, over_under_pct).

    Rise/fall thresholds sit at 10% and 90% of the initial-value-to-setpoint
    span; settling requires the pressure to stay within band_pct% of the
    setpoint for the remainder of the run; SSE averages |error| over the
    final 10% of samples so a single noisy endpoint cannot dominate.
    """
    if band_pct not in (2.0, 2, 5.0, 5):
        raise MetricsError(f"band_pct must be 2 or 5, got {band_pct}")
    if setpoint == 0.0:
        raise MetricsError("percentage metrics are undefined for a zero setpoint")
    y = np.asarray(series, dtype=float)
    if y.size == 0:
        raise MetricsError("empty series")
    t = np.arange(y.size) * dt

    tail = max(1, int(round(0.1 * y.size)))
    sse = float(np.mean(np.abs(setpoint - y[-tail:])))

    initial = float(y[0])
    span = setpoint - initial
    rise_time = fall_time = None
    if span > 0.0:
        direction = "rise"
        lo, hi = initial + 0.1 * span, initial + 0.9 * span
        i10 = np.argmax(y >= lo) if np.any(y >= lo) else None
        i90 = np.argmax(y >= hi) if np.any(y >= hi) else None
        if i10 is not None and i90 is not None:
            rise_time = float(t[i90] - t[i10])
    elif span < 0.0:
        direction = "fall"
        lo, hi = initial + 0.1 * span, initial + 0.9 * span  # lo is the 10% mark (higher value)
        i10 = np.argmax(y <= lo) if np.any(y <= lo) else None
        i90 = np.argmax(y <= hi) if np.any(y <= hi) else None
        if i10 is not None and i90 is not None:
            fall_time = float(t[i90] - t[i10])
    else:
        direction = "none"

    band = band_pct / 100.0 * abs(setpoint)
    inside = np.abs(y - setpoint) <= band
    settling_time = None
    if inside[-1]:
        # Earliest index after which every sample stays inside the band.
        outside = np.flatnonzero(~inside)
        first_stay = 0 if outside.size == 0 else int(outside[-1]) + 1
        settling_time = float(t[first_stay])

    overshoot = max(0.0, (float(np.max(y)) - setpoint) / setpoint * 100.0)
    undershoot = max(0.0, (setpoint - float(np.min(y))) / setpoint * 100.0)
    if direction == "rise":
        over_under = overshoot
    elif direction == "fall":
        over_under = undershoot
    else:
        over_under = max(overshoot, undershoot)

    return sse, rise_time, fall_time, settling_time, over_under


def evaluate(series: Sequence[float], setpoint: float, dt: float,
             band_pct: float = 2.0) -> MetricsReport:
    """Full report from one measured-pressure series."""
    mse, rmse, mae = error_metrics(series, setpoint)
    iae, ise, itae = integral_metrics(series, setpoint, dt)
    sse, rise, fall, settle, over_under = dynamic_metrics(series, setpoint, dt, band_pct)
    direction = "rise" if rise is not None else ("fall" if fall is not None else "none")
    y = np.asarray(series, dtype=float)
    if float(y[0]) < setpoint and rise is None:
        direction = "rise"
    elif float(y[0]) > setpoint and fall is None:
        direction = "fall"
    return MetricsReport(mse=mse, rmse=rmse, mae=mae, iae=iae, ise=ise, itae=itae,
                         sse=sse, rise_time=rise, fall_time=fall, settling_time=settle,
                         over_under_pct=over_under, direction=direction)
