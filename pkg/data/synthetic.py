"""
Seeded synthetic smart-meter dataset.

Every consumer follows one of four household archetypes: a base load plus
morning and evening peaks (and a daytime plateau for occupied homes), raised
on weekends. Demand responds to temperature outside the 19-25 degrees C
comfort band in proportion to max(0, T - 25) + max(0, 19 - T), weighted by
household activity. Temperature is a seasonal plus diurnal sinusoid with a
per-day weather anomaly and noise (southern-hemisphere seasons by default).
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from utils.exceptions import DataError

from .matrix import INTERVAL

GENERATOR_VERSION = "1"
COMFORT_LOW_C = 19.0
COMFORT_HIGH_C = 25.0


@dataclass(frozen=True)
class SeasonalTempSpec:
    """
    Temperature model parameters (degrees C and hours).

    Attributes:
        mean_c: Annual mean.
        seasonal_amplitude_c: Half the summer/winter swing.
        diurnal_amplitude_c: Half the day/night swing.
        daily_anomaly_std_c: Spread of the per-day weather offset.
        noise_std_c: Spread of the per-interval noise.
        warmest_day_of_year: Day of year of the seasonal maximum.
        warmest_hour: Hour of the diurnal maximum.
    """

    mean_c: float = 16.0
    seasonal_amplitude_c: float = 6.0
    diurnal_amplitude_c: float = 5.0
    daily_anomaly_std_c: float = 3.0
    noise_std_c: float = 0.5
    warmest_day_of_year: float = 20.0
    warmest_hour: float = 15.0

    @classmethod
    def constant(cls, celsius: float) -> "SeasonalTempSpec":
        """A flat temperature with no variation."""
        return cls(
            mean_c=celsius,
            seasonal_amplitude_c=0.0,
            diurnal_amplitude_c=0.0,
            daily_anomaly_std_c=0.0,
            noise_std_c=0.0,
        )


@dataclass(frozen=True)
class Archetype:
    """
    Daily load shape of a household type, kWh per 30-minute interval.
    """

    name: str
    base_kwh: float
    morning_kwh: float
    morning_hour: float
    evening_kwh: float
    evening_hour: float
    daytime_kwh: float
    weekend_factor: float
    comfort_kwh_per_c: float


ARCHETYPES: List[Archetype] = [
    Archetype("evening-peak", 0.12, 0.20, 7.5, 0.45, 19.0, 0.05, 1.15, 0.020),
    Archetype("twin-peak", 0.15, 0.35, 7.0, 0.35, 18.5, 0.05, 1.10, 0.018),
    Archetype("daytime-occupied", 0.16, 0.15, 8.5, 0.25, 19.5, 0.22, 1.05, 0.025),
    Archetype("low-use", 0.07, 0.10, 7.5, 0.18, 20.0, 0.02, 1.20, 0.010),
]


@dataclass(frozen=True)
class ConsumerTraits:
    """Per-consumer draw around its archetype."""

    consumer_id: str
    cluster_id: int
    archetype: Archetype
    scale: float
    peak_shift_h: float
    sensitivity: float


@dataclass
class SyntheticDataset:
    """
    Output of generate_synthetic.

    Attributes:
        readings: Readings frame (consumer_id, timestamp, kwh), time-major.
        temperature: Degrees C on the 30-minute grid.
        assignment: Ground-truth cluster of every consumer.
        manifest: Generator inputs needed to reproduce the dataset.
    """

    readings: pd.DataFrame
    temperature: pd.Series
    assignment: Dict[str, int]
    manifest: Dict[str, Any] = field(default_factory=dict)


def _bump(hours: np.ndarray, centre: float, width: float) -> np.ndarray:
    return np.exp(-0.5 * ((hours - centre) / width) ** 2)


def comfort_excess(temperature: np.ndarray) -> np.ndarray:
    """Degrees outside the comfort band: max(0, T - 25) + max(0, 19 - T)."""
    temperature = np.asarray(temperature, dtype=np.float64)
    return np.maximum(0.0, temperature - COMFORT_HIGH_C) + np.maximum(0.0, COMFORT_LOW_C - temperature)


def consumer_demand(
    traits: ConsumerTraits,
    timestamps: pd.DatetimeIndex,
    temperature: np.ndarray,
    noise: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Consumption of one household over a time grid.

    Args:
        traits: The household.
        timestamps: Interval start times.
        temperature: Degrees C per interval.
        noise: Additive kWh noise per interval, or None for none.

    Returns:
        Non-negative kWh per interval.
    """
    a = traits.archetype
    hours = timestamps.hour.to_numpy() + timestamps.minute.to_numpy() / 60.0
    weekend = timestamps.dayofweek.to_numpy() >= 5
    morning_hour = a.morning_hour + traits.peak_shift_h + np.where(weekend, 1.5, 0.0)
    evening_hour = a.evening_hour + traits.peak_shift_h

    activity = (
        a.morning_kwh * _bump(hours, morning_hour, 1.0)
        + a.evening_kwh * _bump(hours, evening_hour, 1.75)
        + a.daytime_kwh * _bump(hours, 13.0, 2.5)
    )
    day_load = (a.base_kwh + activity) * np.where(weekend, a.weekend_factor, 1.0)
    peak_activity = a.morning_kwh + a.evening_kwh + a.daytime_kwh
    occupancy = 0.4 + 0.6 * activity / peak_activity
    comfort = a.comfort_kwh_per_c * traits.sensitivity * comfort_excess(temperature) * occupancy

    demand = traits.scale * day_load + comfort
    if noise is not None:
        demand = demand + noise * traits.scale
    return np.maximum(demand, 0.0)


def synthetic_temperature(timestamps: pd.DatetimeIndex, spec: SeasonalTempSpec, rng: np.random.Generator) -> np.ndarray:
    """
    Temperature over a time grid.

    Args:
        timestamps: Interval start times.
        spec: Model parameters.
        rng: Generator for the daily anomaly and noise.

    Returns:
        Degrees C per interval, rounded to 0.01.
    """
    hours = timestamps.hour.to_numpy() + timestamps.minute.to_numpy() / 60.0
    day_of_year = timestamps.dayofyear.to_numpy()
    day_number = (timestamps.normalize() - timestamps[0].normalize()).days.to_numpy()
    anomaly = rng.normal(0.0, 1.0, size=int(day_number.max()) + 1) * spec.daily_anomaly_std_c
    noise = rng.normal(0.0, 1.0, size=len(timestamps)) * spec.noise_std_c
    temperature = (
        spec.mean_c
        + spec.seasonal_amplitude_c * np.cos(2.0 * np.pi * (day_of_year - spec.warmest_day_of_year) / 365.25)
        + spec.diurnal_amplitude_c * np.cos(2.0 * np.pi * (hours - spec.warmest_hour) / 24.0)
        + anomaly[day_number]
        + noise
    )
    return np.round(temperature, 2)


def draw_consumers(consumers: int, rng: np.random.Generator) -> List[ConsumerTraits]:
    """
    Draw household traits; consumer n belongs to cluster (n mod 4) + 1.

    Args:
        consumers: Number of households.
        rng: Generator for the per-household variation.
    """
    traits = []
    for n in range(consumers):
        cluster_id = n % len(ARCHETYPES) + 1
        traits.append(
            ConsumerTraits(
                consumer_id=f"C{n + 1:04d}",
                cluster_id=cluster_id,
                archetype=ARCHETYPES[cluster_id - 1],
                scale=float(rng.uniform(0.7, 1.3)),
                peak_shift_h=float(rng.uniform(-0.5, 0.5)),
                sensitivity=float(rng.uniform(0.6, 1.4)),
            )
        )
    return traits


def generate_synthetic(
    seed: int,
    consumers: int,
    days: int,
    temp_model: SeasonalTempSpec = SeasonalTempSpec(),
    start: str = "2015-03-09",
    missing_leading: int = 0,
    noise_std: float = 0.04,
) -> SyntheticDataset:
    """
    Generate a reproducible smart-meter dataset.

    Args:
        seed: Seed of every random draw.
        consumers: Number of households, at least 1.
        days: Number of days, at least 1.
        temp_model: Temperature model.
        start: First day, YYYY-MM-DD.
        missing_leading: Drop one consumer's reading at each of this many
            leading timestamps (consumer n mod consumers at timestamp n).
        noise_std: Spread of the per-interval demand noise in kWh.

    Returns:
        The SyntheticDataset.
    """
    if consumers < 1 or days < 1:
        raise DataError(f"need at least one consumer and one day, got {consumers} and {days}")
    steps = days * 48
    if missing_leading > steps:
        raise DataError(f"cannot drop readings at {missing_leading} leading timestamps of {steps}")
    temperature_rng, traits_rng, noise_rng = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(3))

    timestamps = pd.date_range(pd.Timestamp(start), periods=steps, freq=INTERVAL)
    temperature = synthetic_temperature(timestamps, temp_model, temperature_rng)
    traits = draw_consumers(consumers, traits_rng)
    noise = noise_rng.normal(0.0, noise_std, size=(steps, consumers))

    wide = np.empty((steps, consumers))
    for n, consumer in enumerate(traits):
        wide[:, n] = consumer_demand(consumer, timestamps, temperature, noise[:, n])
    wide = np.round(wide, 4)

    ids = [t.consumer_id for t in traits]
    readings = pd.DataFrame(
        {
            "consumer_id": pd.Categorical.from_codes(np.tile(np.arange(consumers), steps), categories=ids),
            "timestamp": np.repeat(timestamps.to_numpy(), consumers),
            "kwh": wide.reshape(-1),
        }
    )
    if missing_leading:
        gaps = np.arange(missing_leading)
        readings = readings.drop(index=gaps * consumers + gaps % consumers).reset_index(drop=True)

    manifest = {
        "generator_version": GENERATOR_VERSION,
        "seed": seed,
        "consumers": consumers,
        "days": days,
        "start": start,
        "missing_leading": missing_leading,
        "noise_std": noise_std,
        "temperature_model": asdict(temp_model),
    }
    logging.info(
        f"Generated {len(readings)} synthetic readings for {consumers} consumers over {days} days (seed {seed})"
    )
    return SyntheticDataset(
        readings=readings,
        temperature=pd.Series(temperature, index=timestamps, name="celsius"),
        assignment={t.consumer_id: t.cluster_id for t in traits},
        manifest=manifest,
    )
