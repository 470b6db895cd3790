"""
Pydantic models for job configuration and experiment reports.
"""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from soliton_lab.errors import InvalidInputError
from soliton_lab.models.field import SectorLabel

CFL_LIMIT = 0.5
DEFAULT_CFL_FRACTION = 0.4


class RelaxConfig(BaseModel):
    """Settings of the step-wise variational relaxation."""

    model_config = ConfigDict(frozen=True)

    step_amplitude: float = Field(0.01, gt=0)
    anneal_factor: float = Field(0.5, gt=0, lt=1)
    max_sweeps: int = Field(200_000, ge=1)
    tol: float = Field(1e-10, gt=0)
    window: int = Field(100, ge=1)
    min_amplitude: float = Field(1e-9, gt=0)
    rng_seed: int = 42
    # Fraction of phi0 that |phi| may not drop below while a V sector relaxes; 0 disables
    v_core_floor: float = Field(0.165, ge=0, lt=1)
    log_every: int = Field(10_000, ge=1)


class EvolveConfig(BaseModel):
    """Settings of the leapfrog time evolution. ``dt=None`` means 0.4*eps."""

    model_config = ConfigDict(frozen=True)

    dt: float | None = Field(None, gt=0)
    t_end: float = Field(50.0, gt=0)
    snapshot_every: int = Field(50, ge=1)
    boundary: Literal["pinned"] = "pinned"

    def resolve_dt(self, eps: float) -> float:
        """Time step for a grid of spacing ``eps``; enforces dt <= 0.5*eps."""
        dt = self.dt if self.dt is not None else DEFAULT_CFL_FRACTION * eps
        if dt > CFL_LIMIT * eps:
            raise InvalidInputError(
                f"dt={dt} violates the CFL bound dt <= {CFL_LIMIT}*eps = {CFL_LIMIT * eps}"
            )
        return dt

    def n_steps(self, eps: float) -> int:
        return max(1, int(round(self.t_end / self.resolve_dt(eps))))


class CensusRow(BaseModel):
    """One line of the soliton census (mass, charges, stability)."""

    sector: SectorLabel
    mass: float
    QH: float
    QV: float
    stability: Literal["stable", "metastable"] = "stable"
    decay_mode: tuple[SectorLabel, SectorLabel] | None = None
    converged: bool = True
    energy_drift: float | None = None
    center_drift: float | None = None

    @model_validator(mode="after")
    def _check_decay_mode(self) -> "CensusRow":
        if (self.stability == "metastable") != (self.decay_mode is not None):
            raise ValueError("metastable rows carry a decay mode and stable rows do not")
        return self

    @property
    def decay_mode_name(self) -> str:
        if self.decay_mode is None:
            return ""
        first, second = self.decay_mode
        return f"{self.sector.name}->{first.name}+{second.name}"


class DecayProduct(BaseModel):
    sector: SectorLabel
    position: float
    velocity: float


class EnergyBudget(BaseModel):
    """Where the parent's rest energy and the pump energy ended up."""

    parent_rest_energy: float
    pump_energy: float
    product_rest_energy: float
    product_kinetic_energy: float
    radiation_remainder: float
    initial_energy: float
    final_energy: float

    @property
    def closure_error(self) -> float:
        """Relative energy drift of the dynamical run."""
        return abs(self.final_energy - self.initial_energy) / abs(self.initial_energy)


class DecayReport(BaseModel):
    """Outcome of pumping a V-type soliton and evolving it."""

    parent: SectorLabel
    pumped_factor: float
    decayed: bool
    products: list[DecayProduct] = Field(default_factory=list)
    energy_budget: EnergyBudget | None = None
    t_end: float = 0.0
    separation: float | None = None
    clean_asymptotics: bool = True
    # Set when the final state could not be read; decayed is then False but means "unknown"
    tracking_error: str | None = None

    @model_validator(mode="after")
    def _check_products(self) -> "DecayReport":
        if self.tracking_error is not None and (self.decayed or self.products):
            raise ValueError("an untracked run cannot report products")
        positions = [prod.position for prod in self.products]
        if positions != sorted(positions):
            raise ValueError("decay products must be ordered left to right")
        if self.decayed:
            qh = sum(prod.sector.charges[0] for prod in self.products)
            qv = sum(prod.sector.charges[1] for prod in self.products)
            if (qh, qv) != self.parent.charges:
                raise ValueError(
                    f"product charges {(qh, qv)} do not add up to {self.parent.charges}"
                )
        return self

    @property
    def tracking_failed(self) -> bool:
        return self.tracking_error is not None

    @property
    def chirality(self) -> tuple[str, str] | None:
        """(left product, right product) names when the parent decayed into two."""
        if not self.decayed or len(self.products) != 2:
            return None
        return self.products[0].sector.name, self.products[1].sector.name
