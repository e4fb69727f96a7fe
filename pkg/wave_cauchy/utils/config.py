"""Typed, validated run configuration built from the TOML document."""

import os
import pathlib
from dataclasses import asdict, dataclass, field

from wave_cauchy.forward.fdtd_forward import FdtdConfig
from wave_cauchy.geometry.calc_geometry import Aperture
from wave_cauchy.synthetic.mode_synthetic import Mode
from wave_cauchy.utils.errors import (
    ConfigError,
    DomainError,
    SolverConstraintError,
)
from wave_cauchy.utils.helpers import STDOUT, load_toml_config
from wave_cauchy.utils.logger import WaveCauchyLogger
from wave_cauchy.utils.quadrature_helpers import QuadratureSpec

WaveCauchy_LOGGER = WaveCauchyLogger(__name__)
logger = WaveCauchy_LOGGER.logger

COMMANDS = (
    "kernel-eval", "kernel-check", "decay", "fdtd", "reconstruct", "spectral",
)
DEFAULT_SCHEMA_DIR = (
    pathlib.Path(__file__).resolve().parents[2] / "config" / "schemas"
)
SCHEMA_KEYS = {
    "kernel_eval": "kernel_eval_schema.toml",
    "decay": "decay_schema.toml",
    "report": "report_schema.toml",
    "trace": "trace_schema.toml",
    "probe": "probe_schema.toml",
    "spectral": "spectral_schema.toml",
}
DEFAULT_H_LIST = [0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625]


@dataclass(frozen=True)
class KernelEvalSettings:
    """Grid of (x, t) offsets on which K_h is tabulated."""

    h: float = 0.1
    x_min: float = -2.0
    x_max: float = 2.0
    nx: int = 11
    t_min: float = -1.0
    t_max: float = 1.0
    nt: int = 11

    def __post_init__(self):
        if not self.h > 0:
            raise DomainError(f"kernel_eval.h must be positive, got {self.h}")
        if self.nx < 0 or self.nt < 0:
            raise DomainError("kernel_eval.nx and nt must be >= 0")
        if self.x_max < self.x_min or self.t_max < self.t_min:
            raise DomainError("kernel_eval ranges must be ordered")


@dataclass(frozen=True)
class KernelCheckSettings:
    """Tolerances and grids of the kernel self-check."""

    h_list: list = field(default_factory=lambda: [0.1, 0.03, 0.01])
    nx: int = 10
    nt: int = 10
    x_max: float = 2.0
    t_max: float = 0.95
    dual_tol: float = 1e-6
    bessel_z: list = field(default_factory=lambda: [0, 0.5, 1, 2, 5, 10])
    bessel_tol: float = 1e-10
    g_points: int = 9
    g_max: float = 3.0
    g_tol: float = 1e-8

    def __post_init__(self):
        if not self.h_list or any(not h > 0 for h in self.h_list):
            raise DomainError("kernel_check.h_list must hold positive values")
        if self.nx < 1 or self.nt < 1 or self.g_points < 1:
            raise DomainError("kernel_check grid sizes must be >= 1")
        for name in ("dual_tol", "bessel_tol", "g_tol", "x_max", "g_max"):
            if not getattr(self, name) > 0:
                raise DomainError(f"kernel_check.{name} must be positive")


@dataclass(frozen=True)
class ReconstructSettings:
    """Trace source and h sweep of the reconstruct command."""

    source: str = "modes"
    trace_file: str | None = None
    modes: tuple = ()
    h_list: list = field(default_factory=lambda: list(DEFAULT_H_LIST))
    formula: str = "local"
    x_halfwidth: float | None = None

    def __post_init__(self):
        if self.source not in ("modes", "file"):
            raise DomainError(
                f"reconstruct.source must be 'modes' or 'file', got "
                f"{self.source!r}"
            )
        if self.formula not in ("local", "extended"):
            raise DomainError(
                f"reconstruct.formula must be 'local' or 'extended', got "
                f"{self.formula!r}"
            )
        if self.formula == "extended" and not (
            self.x_halfwidth is not None and self.x_halfwidth > 0
        ):
            raise DomainError("The extended formula needs x_halfwidth > 0")
        if self.source == "file" and not self.trace_file:
            raise DomainError("reconstruct.source = 'file' needs trace_file")
        h_list = list(self.h_list)
        if not h_list or any(not h > 0 for h in h_list):
            raise DomainError("reconstruct.h_list must hold positive values")
        if any(b >= a for a, b in zip(h_list, h_list[1:])):
            raise DomainError("reconstruct.h_list must be strictly decreasing")


@dataclass(frozen=True)
class DecaySettings:
    """Band and h list of the decay diagnostics."""

    epsilon: float = 0.3
    d: float = 2.0
    h_list: list = field(default_factory=lambda: [0.2, 0.1, 0.05, 0.025])
    n_t: int = 21
    n_x: int = 21
    slack: float = 0.2

    def __post_init__(self):
        if not self.epsilon > 0 or not self.d > 0:
            raise DomainError("decay.epsilon and decay.d must be positive")
        if not self.h_list or any(not h > 0 for h in self.h_list):
            raise DomainError("decay.h_list must hold positive values")
        if self.n_t < 2 or self.n_x < 2:
            raise DomainError("decay.n_t and decay.n_x must be >= 2")
        if self.slack < 0:
            raise DomainError("decay.slack must be >= 0")


@dataclass(frozen=True)
class SpectralSettings:
    """Input trace and zero padding of the spectral command."""

    trace_file: str = "output/trace.csv"
    pad: int = 2

    def __post_init__(self):
        if int(self.pad) < 1:
            raise DomainError("spectral.pad must be >= 1")


@dataclass(frozen=True)
class RunConfig:
    """Validated settings of one command run.

    Sections that the command does not use are left as None.
    """

    command: str | None
    out_dir: str = "output"
    threads: int = 1
    timestamp: bool = True
    log_level: str = "INFO"
    aperture: Aperture | None = None
    quad: QuadratureSpec | None = None
    kernel_eval: KernelEvalSettings | None = None
    kernel_check: KernelCheckSettings | None = None
    reconstruct: ReconstructSettings | None = None
    fdtd: FdtdConfig | None = None
    probes: list = field(default_factory=list)
    decay: DecaySettings | None = None
    spectral: SpectralSettings | None = None
    schema_dir: str = str(DEFAULT_SCHEMA_DIR)
    user_settings: dict = field(default_factory=dict)

    @classmethod
    def load(
        cls, path: str | pathlib.Path, command: str | None = None, **overrides
    ) -> "RunConfig":
        """Load and validate a TOML configuration file.

        Raises:
            ConfigError: If the file is missing, malformed or invalid.
        """
        raw = load_toml_config(path)
        if raw is None:
            raise ConfigError(f"Could not load configuration from {path}")
        base_dir = pathlib.Path(path).resolve().parent
        return cls.from_dict(raw, command, base_dir=base_dir, **overrides)

    @classmethod
    def from_dict(
        cls,
        raw: dict,
        command: str | None = None,
        base_dir: pathlib.Path | None = None,
        **overrides,
    ) -> "RunConfig":
        """Build the sections the command needs and validate them.

        Args:
            raw (dict): The TOML document.
            command (str, optional): One of COMMANDS; None builds every
                section.
            base_dir (pathlib.Path, optional): Root for relative paths.
            **overrides: out_dir, threads or timestamp from the command line
                (None values are ignored).

        Raises:
            ConfigError: If a value violates the owning type's invariants.
            SolverConstraintError: If the forward-solver settings violate the
                CFL or positivity limits.
        """
        if command is not None and command not in COMMANDS:
            raise ConfigError(f"Unknown command {command!r}")
        base_dir = pathlib.Path.cwd() if base_dir is None else base_dir
        wanted = set(COMMANDS) if command is None else {command}
        try:
            return cls._build(raw, command, wanted, base_dir, overrides)
        except SolverConstraintError:
            raise
        except (DomainError, TypeError, ValueError, KeyError) as error:
            raise ConfigError(f"Invalid configuration: {error}") from error

    @classmethod
    def _build(cls, raw, command, wanted, base_dir, overrides) -> "RunConfig":
        global_ = dict(raw.get("global", {}))
        global_.update({k: v for k, v in overrides.items() if v is not None})
        threads = int(global_.get("threads", 1))
        if threads < 0:
            raise DomainError("threads must be >= 0")
        threads = threads or (os.cpu_count() or 1)

        values = {
            "command": command,
            "out_dir": str(global_.get("out_dir", "output")),
            "threads": threads,
            "timestamp": bool(global_.get("timestamp", True)),
            "log_level": str(global_.get("log_level", "INFO")),
            "schema_dir": str(_schema_dir(raw, base_dir)),
            "user_settings": dict(raw.get("user_settings", {})),
        }
        if wanted & {"kernel-eval", "kernel-check", "decay", "reconstruct",
                     "spectral"}:
            values["aperture"] = Aperture(**raw.get("aperture", {
                "y0": 1.0, "c": 1.0, "epsilon": 0.5,
            }))
            values["quad"] = QuadratureSpec(**raw.get("quadrature", {}))
        if "kernel-eval" in wanted:
            values["kernel_eval"] = KernelEvalSettings(
                **raw.get("kernel_eval", {})
            )
        if "kernel-check" in wanted:
            values["kernel_check"] = KernelCheckSettings(
                **raw.get("kernel_check", {})
            )
        if "decay" in wanted:
            values["decay"] = DecaySettings(**raw.get("decay", {}))
        if "reconstruct" in wanted:
            values["reconstruct"] = _reconstruct_settings(
                raw.get("reconstruct", {}), base_dir
            )
            if command and values["reconstruct"].source == "file":
                require_file(values["reconstruct"].trace_file)
        if "spectral" in wanted:
            section = dict(raw.get("spectral", {}))
            if "trace_file" in section:
                section["trace_file"] = _resolve(section["trace_file"], base_dir)
            values["spectral"] = SpectralSettings(**section)
            if command:
                require_file(values["spectral"].trace_file)
        if "fdtd" in wanted:
            values["fdtd"], values["probes"] = _fdtd_settings(
                raw.get("fdtd", {})
            )
        return cls(**values)

    def schema_path(self, name: str) -> str:
        """Path of the column schema for an output kind."""
        return os.path.join(self.schema_dir, SCHEMA_KEYS[name])

    def output_path(self, filename: str) -> str:
        """Destination of an artifact, or "-" for standard output."""
        if self.out_dir == STDOUT:
            return STDOUT
        return os.path.join(self.out_dir, filename)

    def provenance(self) -> dict:
        """Every materialised default of the sections in use."""
        result = {"command": self.command, "threads": self.threads}
        for name in (
            "aperture", "quad", "kernel_eval", "kernel_check", "decay",
            "spectral",
        ):
            value = getattr(self, name)
            if value is not None:
                result[name] = asdict(value)
        if self.reconstruct is not None:
            settings = asdict(self.reconstruct)
            settings["modes"] = [
                {"weight": w, **m.to_dict()} for w, m in self.reconstruct.modes
            ]
            result["reconstruct"] = settings
        if self.fdtd is not None:
            result["fdtd"] = self.fdtd.to_dict()
            result["probes"] = [list(p) for p in self.probes]
        return result


def require_file(path: str) -> str:
    """Raise ConfigError unless path names an existing file."""
    if not path or not os.path.isfile(path):
        raise ConfigError(f"Input file does not exist: {path}")
    return path


def _resolve(path: str, base_dir: pathlib.Path) -> str:
    candidate = pathlib.Path(path)
    if candidate.is_absolute() or candidate.exists():
        return str(candidate)
    anchored = base_dir / candidate
    return str(anchored) if anchored.exists() else str(candidate)


def _schema_dir(raw: dict, base_dir: pathlib.Path) -> pathlib.Path:
    configured = raw.get("pipeline_settings", {}).get("schema_path")
    if configured:
        for candidate in (pathlib.Path(configured), base_dir / configured):
            if candidate.is_dir():
                return candidate
        logger.warning(
            f"Schema directory {configured} not found; using the defaults"
        )
    return DEFAULT_SCHEMA_DIR


def _reconstruct_settings(section: dict, base_dir) -> ReconstructSettings:
    section = dict(section)
    modes = []
    for entry in section.pop("modes", []):
        entry = dict(entry)
        weight = float(entry.pop("weight", 1.0))
        modes.append((weight, Mode(**entry)))
    if section.get("trace_file"):
        section["trace_file"] = _resolve(section["trace_file"], base_dir)
    return ReconstructSettings(modes=tuple(modes), **section)


def _fdtd_settings(section: dict):
    section = dict(section)
    probes = [tuple(float(v) for v in p) for p in section.pop("probes", [[0, 1]])]
    if "bump_center" in section:
        section["bump_center"] = tuple(section["bump_center"])
    if section.get("mode") is not None:
        section["mode"] = Mode(**section["mode"])
    try:
        return FdtdConfig(**section), probes
    except TypeError as error:
        raise ConfigError(f"Invalid [fdtd] section: {error}") from error
