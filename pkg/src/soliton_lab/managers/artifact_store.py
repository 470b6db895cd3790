"""
File artifacts of a run: state CSVs, energy traces, snapshot series, census tables, orbits and
JSON summaries.

Every number is written with 9 significant digits. Exported states are rounded to that precision
before derived columns are computed, so export -> import -> export reproduces the file byte for
byte.
"""

import json
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
from loguru import logger
from pydantic import BaseModel

from soliton_lab.errors import InvalidInputError
from soliton_lab.jobs.evolver import RunReport
from soliton_lab.models import CensusRow, ModelParams
from soliton_lab.physics.lattice import FieldState, Grid, energy_density
from soliton_lab.physics.model import DEFAULT_PARAMS
from soliton_lab.physics.seeds import orbit_residuals

FLOAT_FORMAT = "%.9g"
STATE_COLUMNS = ["x", "phi", "psi", "phi_t", "psi_t", "energy_density"]
INDEX_COLUMNS = ["t", "snapshot_path", "total_energy", "QH", "QV"]
CENSUS_COLUMNS = ["sector", "mass", "QH", "QV", "stability", "decay_mode"]

# Orbit-law residuals are reported only where both fields are clear of zero
ORBIT_MIN_ABS = 0.05


def _round9(values: np.ndarray) -> np.ndarray:
    return np.array([float(FLOAT_FORMAT % v) for v in np.asarray(values, dtype=float)])


def _round_floats(payload: Any) -> Any:
    if isinstance(payload, float):
        return float(FLOAT_FORMAT % payload) if np.isfinite(payload) else None
    if isinstance(payload, dict):
        return {key: _round_floats(value) for key, value in payload.items()}
    if isinstance(payload, list | tuple):
        return [_round_floats(value) for value in payload]
    return payload


def rounded_state(s: FieldState) -> FieldState:
    """The state exactly as a CSV export will store it."""
    grid = Grid(
        x_min=float(FLOAT_FORMAT % s.grid.x_min),
        x_max=float(FLOAT_FORMAT % s.grid.x_max),
        n=s.grid.n,
    )
    return FieldState(
        grid=grid,
        phi=_round9(s.phi),
        psi=_round9(s.psi),
        phi_t=_round9(s.phi_t),
        psi_t=_round9(s.psi_t),
    )


def state_frame(s: FieldState, p: ModelParams = DEFAULT_PARAMS) -> pd.DataFrame:
    r = rounded_state(s)
    return pd.DataFrame(
        {
            "x": r.grid.x,
            "phi": r.phi,
            "psi": r.psi,
            "phi_t": r.phi_t,
            "psi_t": r.psi_t,
            "energy_density": energy_density(r, p),
        },
        columns=STATE_COLUMNS,
    )


def read_state_csv(path: str | Path) -> FieldState:
    """Re-import a state written by ``ArtifactStore.write_state_csv``.

    Raises:
        InvalidInputError: Missing columns or a non-uniform x column.
    """
    df = pd.read_csv(path)
    missing = [c for c in STATE_COLUMNS[:-1] if c not in df.columns]
    if missing:
        raise InvalidInputError(f"{path}: missing state columns {missing}")
    x = df["x"].to_numpy(dtype=float)
    grid = Grid(x_min=float(x[0]), x_max=float(x[-1]), n=len(x))
    if not np.allclose(x, grid.x, rtol=0, atol=1e-3 * grid.eps):
        raise InvalidInputError(f"{path}: x column is not a uniform grid")
    return FieldState(
        grid=grid,
        phi=df["phi"].to_numpy(dtype=float),
        psi=df["psi"].to_numpy(dtype=float),
        phi_t=df["phi_t"].to_numpy(dtype=float),
        psi_t=df["psi_t"].to_numpy(dtype=float),
    )


class ArtifactStore:
    """
    Writes the artifacts of one command into an output directory.

    The directory is created on demand. JSON documents carry the config path and hash for
    provenance.
    """

    def __init__(
        self,
        output_dir: str | Path,
        config_path: str | Path | None = None,
        config_hash: str | None = None,
    ):
        self.output_dir = Path(output_dir)
        self.config_path = str(config_path) if config_path is not None else None
        self.config_hash = config_hash
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def path(self, name: str) -> Path:
        return self.output_dir / name

    def write_frame(self, df: pd.DataFrame, name: str) -> Path:
        target = self.path(name)
        target.parent.mkdir(parents=True, exist_ok=True)
        df.to_csv(target, index=False, float_format=FLOAT_FORMAT)
        logger.debug(f"Wrote {target} ({len(df)} rows)")
        return target

    def write_state_csv(
        self, s: FieldState, name: str = "state.csv", p: ModelParams = DEFAULT_PARAMS
    ) -> Path:
        """Columns ``x,phi,psi,phi_t,psi_t,energy_density``."""
        return self.write_frame(state_frame(s, p), name)

    def write_trace(self, trace: pd.DataFrame, name: str = "energy_trace.csv") -> Path:
        return self.write_frame(trace, name)

    def write_snapshots(
        self,
        report: RunReport,
        prefix: str = "snapshots/snapshot",
        index_name: str = "snapshots_index.csv",
        p: ModelParams = DEFAULT_PARAMS,
    ) -> Path:
        """One state CSV per snapshot plus an index ``t,snapshot_path,total_energy,QH,QV``."""
        rows = []
        for k, (snapshot, (_, diag)) in enumerate(
            zip(report.snapshots, report.diagnostics.iterrows(), strict=True)
        ):
            name = f"{prefix}_{k:05d}.csv"
            self.write_state_csv(snapshot, name, p)
            rows.append(
                {
                    "t": diag["t"],
                    "snapshot_path": name,
                    "total_energy": diag["total_energy"],
                    "QH": diag["QH"],
                    "QV": diag["QV"],
                }
            )
        index = self.write_frame(pd.DataFrame(rows, columns=INDEX_COLUMNS), index_name)
        logger.info(f"Wrote {len(rows)} snapshots indexed in {index}")
        return index

    def write_diagnostics(self, report: RunReport, name: str = "diagnostics.csv") -> Path:
        df = report.diagnostics.copy()
        for column in ("positions", "sectors"):
            df[column] = df[column].map(
                lambda v: "" if v is None else ";".join(str(item) for item in v)
            )
        return self.write_frame(df, name)

    def write_census(self, rows: list[CensusRow], name: str = "census.csv") -> Path:
        df = pd.DataFrame(
            [
                {
                    "sector": row.sector.name,
                    "mass": row.mass,
                    "QH": row.QH,
                    "QV": row.QV,
                    "stability": row.stability,
                    "decay_mode": row.decay_mode_name,
                }
                for row in rows
            ],
            columns=CENSUS_COLUMNS,
        )
        return self.write_frame(df, name)

    def write_orbit(
        self,
        s: FieldState,
        name: str = "orbit.csv",
        p: ModelParams = DEFAULT_PARAMS,
        with_residual: bool = True,
    ) -> Path:
        """(phi, psi) along the profile; ``orbit_residual`` is blank near the axes."""
        df = pd.DataFrame({"x": s.grid.x, "phi": s.phi, "psi": s.psi})
        if with_residual:
            df["orbit_residual"] = orbit_residuals(s.phi, s.psi, p, min_abs=ORBIT_MIN_ABS)
        return self.write_frame(df, name)

    def write_json(self, payload: BaseModel | dict[str, Any], name: str) -> Path:
        """JSON document with provenance fields added at the top level."""
        data = payload.model_dump(mode="json") if isinstance(payload, BaseModel) else payload
        document = {
            **_round_floats(data),
            "config_path": self.config_path,
            "config_hash": self.config_hash,
        }
        target = self.path(name)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")
        logger.debug(f"Wrote {target}")
        return target
