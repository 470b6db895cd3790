"""
Pydantic models for the field-space objects: model constants, vacua, sector labels and seeds.
"""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

VacuumLabel = Literal["A", "B", "C", "D", "E"]
Family = Literal["H", "V", "D"]
SeedKind = Literal["H", "V", "D_ansatz", "D_exact_symmetric", "BPS_D"]

VACUUM_LABELS: tuple[VacuumLabel, ...] = ("A", "B", "C", "D", "E")

# Vacuum positions in units of (phi0, psi0)
VACUUM_UNIT_COORDS: dict[str, tuple[int, int]] = {
    "A": (0, 0),
    "B": (-1, 1),
    "C": (1, 1),
    "D": (-1, -1),
    "E": (1, -1),
}


class ModelParams(BaseModel):
    """Constants (phi0, psi0) of the potential; (1, 2) throughout the reference results."""

    model_config = ConfigDict(frozen=True)

    phi0: float = Field(1.0, gt=0)
    psi0: float = Field(2.0, gt=0)

    @property
    def is_dual_symmetric(self) -> bool:
        """True when phi0 == psi0, where phi <-> psi is a symmetry."""
        return self.phi0 == self.psi0

    @property
    def field_scale(self) -> float:
        return max(self.phi0, self.psi0)


class VacuumPoint(BaseModel):
    """A zero of the potential."""

    model_config = ConfigDict(frozen=True)

    label: VacuumLabel
    phi: float
    psi: float

    @property
    def is_center(self) -> bool:
        return self.label == "A"


def family_between(from_vacuum: str, to_vacuum: str) -> Family | None:
    """Family of the single soliton joining two vacua, or None when they are not adjacent."""
    if from_vacuum == to_vacuum:
        return None
    if "A" in (from_vacuum, to_vacuum):
        return "D"
    (fp, fs), (tp, ts) = VACUUM_UNIT_COORDS[from_vacuum], VACUUM_UNIT_COORDS[to_vacuum]
    if fs == ts:
        return "H"
    if fp == tp:
        return "V"
    return None


class SectorLabel(BaseModel):
    """Boundary-condition class of a single soliton, e.g. ``D_AB`` or ``V_EC``."""

    model_config = ConfigDict(frozen=True)

    from_vacuum: VacuumLabel
    to_vacuum: VacuumLabel
    family: Family

    @model_validator(mode="after")
    def _check_adjacent(self) -> "SectorLabel":
        expected = family_between(self.from_vacuum, self.to_vacuum)
        if expected is None:
            raise ValueError(
                f"{self.from_vacuum}->{self.to_vacuum} is not a single-soliton sector"
            )
        if expected != self.family:
            raise ValueError(
                f"{self.from_vacuum}->{self.to_vacuum} is a {expected}-type pair, not {self.family}"
            )
        return self

    @classmethod
    def between(cls, from_vacuum: str, to_vacuum: str) -> "SectorLabel":
        family = family_between(from_vacuum, to_vacuum)
        if family is None:
            raise ValueError(f"{from_vacuum}->{to_vacuum} is not a single-soliton sector")
        return cls(from_vacuum=from_vacuum, to_vacuum=to_vacuum, family=family)

    @classmethod
    def parse(cls, name: str) -> "SectorLabel":
        """Parse ``"H_BC"``-style names."""
        family, sep, pair = name.strip().partition("_")
        if not sep or len(pair) != 2:
            raise ValueError(f"Malformed sector name: {name!r}")
        return cls(from_vacuum=pair[0], to_vacuum=pair[1], family=family)

    @property
    def name(self) -> str:
        return f"{self.family}_{self.from_vacuum}{self.to_vacuum}"

    @property
    def charges(self) -> tuple[float, float]:
        """(Q_H, Q_V) fixed by the boundary vacua."""
        (fp, fs), (tp, ts) = (
            VACUUM_UNIT_COORDS[self.from_vacuum],
            VACUUM_UNIT_COORDS[self.to_vacuum],
        )
        return (tp - fp) / 2, (ts - fs) / 2

    def reversed(self) -> "SectorLabel":
        """Parity mirror: same pair traversed the other way."""
        return SectorLabel(
            from_vacuum=self.to_vacuum, to_vacuum=self.from_vacuum, family=self.family
        )

    def __str__(self) -> str:
        return self.name


class SeedSpec(BaseModel):
    """Which analytic ansatz to build, where, and how fast it moves."""

    model_config = ConfigDict(frozen=True)

    kind: SeedKind
    sector: SectorLabel
    center: float = 0.0
    velocity: float = Field(0.0, gt=-1.0, lt=1.0)
