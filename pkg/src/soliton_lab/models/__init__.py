from soliton_lab.models.field import (
    VACUUM_LABELS,
    VACUUM_UNIT_COORDS,
    ModelParams,
    SectorLabel,
    SeedSpec,
    VacuumPoint,
    family_between,
)
from soliton_lab.models.runs import (
    CensusRow,
    DecayProduct,
    DecayReport,
    EnergyBudget,
    EvolveConfig,
    RelaxConfig,
)
