"""Crop temperature reference schedules (night/day setpoints by growth phase)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class Species(str, Enum):
    AUBERGINE = "Aubergine"
    CUCUMBER = "Cucumber"
    LETTUCE = "Lettuce"
    PEPPER = "Pepper"
    TOMATO = "Tomato"
    AZALEA = "Azalea"
    CHRYSANTHEMUM = "Chrysanthemum"
    GERBERA = "Gerbera"
    ANTIRRHINUM = "Antirrhinum"
    CARNATION = "Carnation"
    ROSEBUSH = "Rosebush"


@dataclass(frozen=True)
class Setpoint:
    """One table cell: a value, a ``low/high`` range, or a lower bound (``>low``)."""

    low: float
    high: float | None = None
    lower_bound: bool = False

    @property
    def value(self) -> float:
        # ranges resolve to their midpoint; ">x" resolves to x
        if self.high is not None:
            return 0.5 * (self.low + self.high)
        return self.low

    def __str__(self) -> str:
        fmt = lambda x: f"{x:g}"
        if self.lower_bound:
            return f">{fmt(self.low)}"
        if self.high is not None:
            return f"{fmt(self.low)}/{fmt(self.high)}"
        return fmt(self.low)


@dataclass(frozen=True)
class PhaseRow:
    """Setpoints valid until ``until_week`` weeks after planting (``inf`` = to the end)."""

    until_week: float
    night: Setpoint
    day: Setpoint | None
    remark: str = ""


S = Setpoint
_INF = math.inf

TABLE: dict[Species, tuple[PhaseRow, ...]] = {
    Species.AUBERGINE: (
        PhaseRow(4, S(21), S(22), "During 4 weeks after the plant."),
        PhaseRow(_INF, S(19), S(21), "To the end"),
    ),
    Species.CUCUMBER: (
        PhaseRow(4, S(21), S(23), "During 4 weeks after the plant."),
        PhaseRow(10, S(20), S(22), "During the next 6 weeks."),
        PhaseRow(_INF, S(19), S(21), "To the end."),
    ),
    Species.LETTUCE: (
        PhaseRow(2, S(10), S(10), "During 2 weeks after the plant."),
        PhaseRow(_INF, S(6), S(12), "To the end."),
    ),
    Species.PEPPER: (
        PhaseRow(3, S(20), S(23), "During 3 weeks after the plant."),
        PhaseRow(_INF, S(18), S(22), "To the end."),
    ),
    Species.TOMATO: (
        PhaseRow(1, S(20), S(20), "During 1 week after the plant."),
        PhaseRow(6, S(18.5), S(19.5), "During the next 5 weeks."),
        PhaseRow(_INF, S(17.5), S(18.5), "To the end."),
    ),
    Species.AZALEA: (PhaseRow(_INF, S(18, 21), S(18, lower_bound=True)),),
    Species.CHRYSANTHEMUM: (PhaseRow(_INF, S(17), S(18)),),
    Species.GERBERA: (PhaseRow(_INF, S(13, 15), None),),
    Species.ANTIRRHINUM: (PhaseRow(_INF, S(10, 11), None),),
    Species.CARNATION: (PhaseRow(_INF, S(12, 13), S(18)),),
    Species.ROSEBUSH: (PhaseRow(_INF, S(17), S(21)),),
}


@dataclass(frozen=True)
class ReferenceSchedule:
    rows: dict[Species, tuple[PhaseRow, ...]]

    def __post_init__(self):
        for species, rows in self.rows.items():
            bounds = [r.until_week for r in rows]
            if any(b <= a for a, b in zip(bounds, bounds[1:])) or bounds[-1] != _INF:
                raise ValueError(f"{species.value}: phase rows must be contiguous and end with 'to the end'")

    def row_at(self, species: Species | str, weeks_after_plant: float) -> PhaseRow:
        rows = self.rows[Species(species)]
        for row in rows:
            if weeks_after_plant < row.until_week:
                return row
        return rows[-1]

    def cell_at(self, species: Species | str, weeks_after_plant: float, is_day: bool) -> Setpoint:
        row = self.row_at(species, weeks_after_plant)
        cell = row.day if is_day else row.night
        if cell is None:
            raise LookupError(f"{Species(species).value} has no {'day' if is_day else 'night'} reference")
        return cell


DEFAULT_SCHEDULE = ReferenceSchedule(TABLE)


def reference_at(schedule: ReferenceSchedule, species: Species | str, weeks_after_plant: float,
                 is_day: bool) -> float:
    """Temperature setpoint in degC for a species, crop age in weeks and day/night."""
    if weeks_after_plant < 0:
        raise ValueError("weeks_after_plant must be >= 0")
    return schedule.cell_at(species, weeks_after_plant, is_day).value
