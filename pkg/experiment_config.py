"""
Experiment Configuration Module
Defines experiment parameters, named presets, shared error types and exit codes.
"""

import json
import logging
from dataclasses import asdict, dataclass, field, fields, replace
from enum import Enum, IntEnum
from pathlib import Path
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)

TOOL_VERSION = "1.0.0"
SCHEMA_VERSION = 1


class ExitCode(IntEnum):
    """Process exit codes of the expander_lab command line."""
    OK = 0
    CONFIG_ERROR = 2
    BUDGET_EXCEEDED = 3
    CERTIFICATION_FAILED = 4
    SOLVER_FAILED = 5


class LabError(Exception):
    """Base class for failures the command line maps to an exit code."""
    exit_code = ExitCode.CONFIG_ERROR


class ConfigError(LabError):
    """Invalid or unknown configuration value."""
    exit_code = ExitCode.CONFIG_ERROR


class BudgetExceededError(LabError):
    """A vertex, point or memory budget would be exceeded."""
    exit_code = ExitCode.BUDGET_EXCEEDED


class CertificationError(LabError):
    """A generation certificate (BSGS order, Hall criterion, parity) failed."""
    exit_code = ExitCode.CERTIFICATION_FAILED


class SolverError(LabError):
    """An eigensolver or optimizer did not converge."""
    exit_code = ExitCode.SOLVER_FAILED


class HKind(Enum):
    """Point set the building-block group H acts on."""
    NONZERO_VECTORS = "nonzero-vectors"
    PROJECTIVE_PLANE = "projective-plane"


class BaseStyle(Enum):
    """Shape of the small generating set S of H."""
    ELEMENTARY = "elementary"
    INVOLUTION = "involution"


class FamilyKind(Enum):
    """Generating family kinds."""
    F_N = "F_N"
    F_n = "F_n"
    SYM_F_n = "Ft_n"
    C = "C"
    GAMMA = "Gamma"


class SolverMethod(Enum):
    """Eigensolver choice; AUTO picks dense up to the dense cutoff."""
    AUTO = "auto"
    DENSE = "dense"
    POWER_DEFLATION = "power-deflation"
    LANCZOS = "lanczos"


class ExportFormat(Enum):
    """Artifact formats written by the export subcommand."""
    JSON = "json"
    CSV = "csv"
    DOT = "dot"
    MM = "mm"


class BaselineGroup(Enum):
    """Groups available to the random Cayley baseline."""
    CYCLIC = "cyclic"
    ALTERNATING = "alternating"
    SYMMETRIC = "symmetric"


_ENUM_FIELDS = {
    "h_kind": HKind,
    "base_style": BaseStyle,
    "family_kind": FamilyKind,
    "solver_method": SolverMethod,
    "export_format": ExportFormat,
    "baseline_group": BaselineGroup,
}


@dataclass
class ExperimentConfig:
    """
    Flat key-value experiment description.

    Full-scale values are kept in comments next to their desk-scale defaults.
    """
    # Construction (full scale: d = 6, H = SL_{3s}(F_2) with s >= 50)
    K: Optional[int] = None  # derived from the field and h_kind when left unset
    d: int = 2
    field_p: int = 2
    field_m: int = 1
    modulus: Optional[List[int]] = None  # little-endian coefficients, shipped table when unset
    m_mat: int = 3
    h_kind: HKind = HKind.NONZERO_VECTORS
    base_style: BaseStyle = BaseStyle.ELEMENTARY
    family_kind: FamilyKind = FamilyKind.F_N
    n_target: Optional[int] = None
    odd_element: str = "transposition"
    construction_seed: int = 1

    # Spectral
    solver_method: SolverMethod = SolverMethod.AUTO
    solver_tol: float = 1e-10
    max_iterations: int = 5000
    graph_kind: str = "schreier-points"
    tuple_r: int = 2  # full scale: tuples of size K^{5/4}
    c_sample_count: int = 12
    probe_count: int = 20
    delta_power: int = 8

    # Walks (full scale: C^440 on tuples of K^5/10 points)
    transitivity_t: int = 12
    transitivity_pairs: int = 200
    walk_length: Optional[int] = None  # ceil(8 n ln n) when unset
    walk_samples: int = 10_000
    mixing_steps: int = 200

    # Characters
    chars_n: int = 8
    chars_q: float = 0.9
    chars_c: float = 0.05
    chars_support_floor: Optional[int] = None  # every class when unset
    chars_lambda1_cap: Optional[int] = None  # n - ceil(n^(1/4)) when unset

    # Baseline and Kazhdan numerics
    baseline_group: BaselineGroup = BaselineGroup.CYCLIC
    baseline_n: int = 1000
    baseline_set_size: int = 2
    baseline_trials: int = 20
    kazhdan_degree: int = 3
    kazhdan_gens: List[str] = field(default_factory=lambda: ["(0 1)", "(0 1 2)"])
    kazhdan_restarts: int = 8

    # Budgets and run control
    seed: int = 0
    threads: int = 1
    cube_point_budget: int = 20_000
    vertex_budget: int = 250_000
    cayley_cap: int = 50_000
    export_format: ExportFormat = ExportFormat.JSON
    out_dir: str = "out"

    def __post_init__(self):
        if self.K is None:
            self.K = self.derived_K()

    @property
    def field_size(self) -> int:
        return self.field_p ** self.field_m

    def derived_K(self) -> int:
        """Number of points H acts on."""
        q = self.field_size
        if self.h_kind == HKind.PROJECTIVE_PLANE:
            return q * q + q + 1
        return q ** self.m_mat - 1

    @property
    def N(self) -> int:
        return self.K ** self.d

    def validate(self):
        """
        Check value ranges and cross-field consistency.

        Raises:
            ConfigError: naming the offending key
        """
        if self.K != self.derived_K():
            raise ConfigError(
                f"Key 'K' = {self.K} disagrees with field/h_kind, which act on {self.derived_K()} points")
        if self.d < 1:
            raise ConfigError(f"Key 'd' must be >= 1, got {self.d}")
        if self.field_p < 2 or self.field_m < 1 or self.m_mat < 2:
            raise ConfigError("Keys 'field_p' >= 2, 'field_m' >= 1 and 'm_mat' >= 2 are required")
        if self.h_kind == HKind.PROJECTIVE_PLANE and self.m_mat != 3:
            raise ConfigError("Key 'h_kind' = projective-plane needs 'm_mat' = 3")
        if self.odd_element not in ("transposition", "involution"):
            raise ConfigError(f"Key 'odd_element' must be 'transposition' or 'involution', got {self.odd_element!r}")
        if self.graph_kind not in ("schreier-points", "schreier-tuples", "cayley"):
            raise ConfigError(f"Key 'graph_kind' has unsupported value {self.graph_kind!r}")
        if not 0.0 < self.chars_q < 1.0:
            raise ConfigError(f"Key 'chars_q' must lie in (0, 1), got {self.chars_q}")
        if self.chars_c <= 0:
            raise ConfigError(f"Key 'chars_c' must be positive, got {self.chars_c}")
        for key in ("tuple_r", "probe_count", "delta_power", "transitivity_t", "transitivity_pairs",
                    "walk_samples", "baseline_trials", "baseline_set_size", "threads", "kazhdan_restarts"):
            if getattr(self, key) < 1:
                raise ConfigError(f"Key '{key}' must be >= 1, got {getattr(self, key)}")
        if self.walk_length is not None and self.walk_length < 0:
            raise ConfigError(f"Key 'walk_length' must be >= 0, got {self.walk_length}")
        if self.solver_tol <= 0:
            raise ConfigError(f"Key 'solver_tol' must be positive, got {self.solver_tol}")

    def to_dict(self) -> Dict[str, Any]:
        """Every key with its materialized value, enums as their string values."""
        doc = asdict(self)
        for key, value in doc.items():
            if isinstance(value, Enum):
                doc[key] = value.value
        return doc

    @classmethod
    def from_dict(cls, doc: Dict[str, Any], base: Optional["ExperimentConfig"] = None) -> "ExperimentConfig":
        """
        Build a config from a flat document, layered over `base` (defaults when None).

        Raises:
            ConfigError: on unknown keys or invalid enum values
        """
        known = {f.name for f in fields(cls)}
        for key in doc:
            if key not in known:
                raise ConfigError(f"Unknown config key '{key}'")
        values = {}
        for key, value in doc.items():
            enum_type = _ENUM_FIELDS.get(key)
            if enum_type is not None and not isinstance(value, enum_type):
                try:
                    value = enum_type(value)
                except ValueError:
                    allowed = ", ".join(e.value for e in enum_type)
                    raise ConfigError(f"Key '{key}' = {value!r} is not one of: {allowed}") from None
            values[key] = value
        template = base if base is not None else cls()
        # K is re-derived unless the document pins it
        if "K" not in values:
            values["K"] = None
        config = replace(template, **values)
        config.validate()
        return config


class ConfigManager:
    """
    Manages named experiment presets and config files.
    """

    def __init__(self):
        self.presets = self._create_presets()

    def _create_presets(self) -> Dict[str, ExperimentConfig]:
        """Create all preset configurations."""
        presets = {}

        # Desk scale: SL_3(F_2) on 7 points, 7 x 7 square
        presets["desk"] = ExperimentConfig(d=2)

        # Same H on the 7 x 7 x 7 cube
        presets["desk-cube"] = ExperimentConfig(d=3)

        # SL_6(F_2) on 63 points, the next s of the same series
        presets["wide"] = ExperimentConfig(d=2, m_mat=6, vertex_budget=500_000)

        # SL_3(F_3) on the 13 points of the projective plane
        presets["projective"] = ExperimentConfig(d=2, field_p=3, h_kind=HKind.PROJECTIVE_PLANE)

        # Padded Alt(n) and Sym(n) families from the desk square
        presets["padded"] = ExperimentConfig(d=2, family_kind=FamilyKind.F_n, n_target=60)
        presets["padded-sym"] = ExperimentConfig(d=2, family_kind=FamilyKind.SYM_F_n, n_target=60)

        return presets

    def get_preset(self, name: str) -> ExperimentConfig:
        """Get a fresh copy of a preset by name."""
        if name not in self.presets:
            raise ConfigError(f"Unknown preset '{name}' (available: {', '.join(sorted(self.presets))})")
        return replace(self.presets[name])

    def get_all_presets(self) -> List[str]:
        """Get all preset names."""
        return list(self.presets)

    def load(self, path: Path, base: Optional[ExperimentConfig] = None) -> ExperimentConfig:
        """
        Load a JSON config file.

        A top-level "preset" key selects the starting preset; every other key overrides it.
        """
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"Cannot read config {path}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError(f"Config {path} must hold a JSON object")
        preset = doc.pop("preset", None)
        if preset is not None:
            base = self.get_preset(preset)
        logger.debug("Loaded config %s with %d keys (preset=%s)", path, len(doc), preset)
        return ExperimentConfig.from_dict(doc, base=base)


# Example usage
if __name__ == "__main__":
    manager = ConfigManager()

    print("=== Experiment Presets ===\n")
    for name in manager.get_all_presets():
        config = manager.get_preset(name)
        print(f"{name}")
        print(f"  H: SL_{config.m_mat}(F_{config.field_size}) on {config.K} points ({config.h_kind.value})")
        print(f"  Cube: K={config.K}, d={config.d}, N={config.N}")
        print(f"  Family: {config.family_kind.value}")
        print()
