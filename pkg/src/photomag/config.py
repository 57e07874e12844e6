"""Plain-text run configuration: `section.key = value` lines.

No external config format: files are UTF-8 text, one `section.key = value`
per line, `#` comments and blank lines ignored. Every key is registered
with its type and (where meaningful) a unit suffix; numbers may carry that
suffix ("pulse.fluence = 88 mJcm2") and any other suffix is rejected with
the offending line number, as are unknown keys and malformed lines (typo
safety). Parsing an empty file yields the full default configuration.

Round-trip contract: parse(serialize(cfg)) == cfg. Serialization is
canonical (sections and keys in fixed order, floats via repr), and the
first 12 hex digits of the SHA-256 of that canonical text are the config
hash stamped into every output file.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

from .energetics import SampleThermo
from .magnetics import MaterialParams
from .photoexcitation import PumpPulse, SpectralModel


class ConfigError(ValueError):
    """Bad configuration text or values."""


@dataclass(frozen=True)
class SimSettings:
    dt_ps: float = 0.05
    t_end_ps: float = 1000.0
    t_pre_ps: float = 10.0

    def __post_init__(self):
        if self.dt_ps <= 0 or self.dt_ps > 0.1:
            raise ValueError("sim.dt_ps must be in (0, 0.1] ps")
        if self.t_end_ps <= 0:
            raise ValueError("sim.t_end_ps must be positive")


@dataclass(frozen=True)
class SweepSettings:
    variable: str = "fluence"
    start: float = 5.0
    stop: float = 150.0
    steps: int = 30

    def __post_init__(self):
        if self.variable not in ("fluence", "polarization", "wavelength"):
            raise ValueError("sweep.variable must be fluence, polarization or wavelength")
        if self.steps < 1:
            raise ValueError("sweep.steps must be at least 1")


@dataclass(frozen=True)
class BeamSettings:
    spot_radius_um: float = 65.0
    center_x_um: float = 0.0
    center_y_um: float = 0.0
    peak_fluence: float = 150.0

    def __post_init__(self):
        if self.spot_radius_um <= 0:
            raise ValueError("beam.spot_radius_um must be positive")
        if self.peak_fluence < 0:
            raise ValueError("beam.peak_fluence must be non-negative")


@dataclass(frozen=True)
class ImageSettings:
    grid_px: int = 256
    size_um: float = 200.0
    pattern: str = "stripes"
    stripe_period_um: float = 40.0
    pattern_file: str = ""

    def __post_init__(self):
        if self.grid_px <= 0:
            raise ValueError("image.grid_px must be positive")
        if self.pattern not in ("uniform", "stripes", "checkerboard", "file"):
            raise ValueError("image.pattern must be uniform, stripes, checkerboard or file")


@dataclass(frozen=True)
class OutputSettings:
    directory: str = "out"


@dataclass(frozen=True)
class RunSettings:
    workers: int = 1
    from_label: str = "L+"

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("run.workers must be a positive integer")


@dataclass(frozen=True)
class RunConfig:
    material: MaterialParams = field(default_factory=MaterialParams)
    pulse: PumpPulse = field(default_factory=PumpPulse)
    spectral: SpectralModel = field(default_factory=SpectralModel)
    sample: SampleThermo = field(default_factory=SampleThermo)
    sim: SimSettings = field(default_factory=SimSettings)
    sweep: SweepSettings = field(default_factory=SweepSettings)
    beam: BeamSettings = field(default_factory=BeamSettings)
    image: ImageSettings = field(default_factory=ImageSettings)
    output: OutputSettings = field(default_factory=OutputSettings)
    run: RunSettings = field(default_factory=RunSettings)
    absorption_table_csv: str = ""


# (section, key) -> (dataclass attr on RunConfig, field name, type tag, unit suffix or None)
# type tags: f float, i int, b bool, s string, optf optional float ("none" allowed)
_REGISTRY = {
    ("material", "k1"): ("material", "k1", "f", "ergcm3"),
    ("material", "ku"): ("material", "ku", "f", "ergcm3"),
    ("material", "four_pi_ms"): ("material", "four_pi_ms", "f", "G"),
    ("material", "alpha"): ("material", "alpha", "f", None),
    ("material", "gamma"): ("material", "gamma", "f", "radsOe"),
    ("material", "miscut_deg"): ("material", "miscut_deg", "f", "deg"),
    ("material", "miscut_azimuth_deg"): ("material", "miscut_azimuth_deg", "f", "deg"),
    ("material", "include_demag"): ("material", "include_demag", "b", None),
    ("material", "neel_temperature_k"): ("material", "neel_temperature_k", "f", "K"),
    ("pulse", "fluence"): ("pulse", "fluence", "f", "mJcm2"),
    ("pulse", "wavelength_nm"): ("pulse", "wavelength_nm", "f", "nm"),
    ("pulse", "polarization_angle_deg"): ("pulse", "polarization_angle_deg", "f", "deg"),
    ("pulse", "lifetime_ps"): ("pulse", "lifetime_ps", "f", "ps"),
    ("pulse", "coupling_at_reference"): ("pulse", "coupling_at_reference", "optf", None),
    ("spectral", "center_nm"): ("spectral", "center_nm", "f", "nm"),
    ("spectral", "width_nm"): ("spectral", "width_nm", "f", "nm"),
    ("spectral", "absorption_table_csv"): (None, "absorption_table_csv", "s", None),
    ("sample", "thickness_cm"): ("sample", "thickness_cm", "f", "cm"),
    ("sample", "heat_capacity"): ("sample", "heat_capacity", "f", None),
    ("sample", "molar_mass"): ("sample", "molar_mass", "f", None),
    ("sample", "density"): ("sample", "density", "f", None),
    ("sample", "photon_energy_ev"): ("sample", "photon_energy_ev", "f", "eV"),
    ("sim", "dt_ps"): ("sim", "dt_ps", "f", "ps"),
    ("sim", "t_end_ps"): ("sim", "t_end_ps", "f", "ps"),
    ("sim", "t_pre_ps"): ("sim", "t_pre_ps", "f", "ps"),
    ("sweep", "variable"): ("sweep", "variable", "s", None),
    ("sweep", "start"): ("sweep", "start", "f", None),
    ("sweep", "stop"): ("sweep", "stop", "f", None),
    ("sweep", "steps"): ("sweep", "steps", "i", None),
    ("beam", "spot_radius_um"): ("beam", "spot_radius_um", "f", "um"),
    ("beam", "center_x_um"): ("beam", "center_x_um", "f", "um"),
    ("beam", "center_y_um"): ("beam", "center_y_um", "f", "um"),
    ("beam", "peak_fluence"): ("beam", "peak_fluence", "f", "mJcm2"),
    ("image", "grid_px"): ("image", "grid_px", "i", None),
    ("image", "size_um"): ("image", "size_um", "f", "um"),
    ("image", "pattern"): ("image", "pattern", "s", None),
    ("image", "stripe_period_um"): ("image", "stripe_period_um", "f", "um"),
    ("image", "pattern_file"): ("image", "pattern_file", "s", None),
    ("output", "directory"): ("output", "directory", "s", None),
    ("run", "workers"): ("run", "workers", "i", None),
    ("run", "from_label"): ("run", "from_label", "s", None),
}

_SECTION_ORDER = ("material", "pulse", "spectral", "sample", "sim", "sweep",
                  "beam", "image", "output", "run")


def _parse_scalar(raw: str, tag: str, unit, where: str):
    raw = raw.strip()
    if tag == "s":
        return raw
    if tag == "b":
        low = raw.lower()
        if low in ("true", "yes", "on", "1"):
            return True
        if low in ("false", "no", "off", "0"):
            return False
        raise ConfigError(f"{where}: expected a boolean, got {raw!r}")
    parts = raw.split()
    if len(parts) == 2:
        if unit is None:
            raise ConfigError(f"{where}: no unit suffix allowed here, got {parts[1]!r}")
        if parts[1] != unit:
            raise ConfigError(f"{where}: unit suffix {parts[1]!r} does not match expected {unit!r}")
        raw = parts[0]
    elif len(parts) != 1:
        raise ConfigError(f"{where}: cannot parse value {raw!r}")
    if tag == "optf" and raw.lower() == "none":
        return None
    try:
        if tag == "i":
            return int(raw)
        value = float(raw)
    except ValueError as exc:
        raise ConfigError(f"{where}: not a number: {raw!r}") from exc
    return value


def parse_config(text: str) -> RunConfig:
    """Parse config text into a validated RunConfig (defaults filled in)."""
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'section.key = value'")
        keypart, _, rawvalue = stripped.partition("=")
        keypart = keypart.strip()
        if "." not in keypart:
            raise ConfigError(f"line {lineno}: key must be 'section.key', got {keypart!r}")
        section, _, key = keypart.partition(".")
        regkey = (section.strip(), key.strip())
        if regkey not in _REGISTRY:
            raise ConfigError(f"line {lineno}: unknown key {keypart!r}")
        attr, name, tag, unit = _REGISTRY[regkey]
        values[(attr, name)] = _parse_scalar(rawvalue, tag, unit, f"line {lineno} ({keypart})")

    grouped: dict = {}
    top: dict = {}
    for (attr, name), v in values.items():
        if attr is None:
            top[name] = v
        else:
            grouped.setdefault(attr, {})[name] = v

    kwargs = dict(top)
    builders = {
        "material": MaterialParams, "pulse": PumpPulse, "spectral": SpectralModel,
        "sample": SampleThermo, "sim": SimSettings, "sweep": SweepSettings,
        "beam": BeamSettings, "image": ImageSettings, "output": OutputSettings,
        "run": RunSettings,
    }
    for attr, cls in builders.items():
        try:
            kwargs[attr] = cls(**grouped.get(attr, {}))
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{attr}: {exc}") from exc

    cfg = RunConfig(**kwargs)
    if cfg.absorption_table_csv:
        table = load_absorption_csv(cfg.absorption_table_csv)
        cfg = replace(cfg, spectral=replace(cfg.spectral, absorption_table=table))
    return cfg


def load_absorption_csv(path: str) -> tuple:
    """(nm, absorbed fraction) pairs from a two-column CSV, sorted by nm."""
    rows = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [p for p in line.replace(",", " ").split() if p]
            if parts[0].lower() in ("nm", "wavelength", "lambda"):
                continue
            if len(parts) < 2:
                raise ConfigError(f"absorption table: bad row {line!r}")
            rows.append((float(parts[0]), float(parts[1])))
    if not rows:
        raise ConfigError(f"absorption table {path!r} is empty")
    rows.sort()
    return tuple(rows)


def _format_scalar(value, tag: str) -> str:
    if tag == "b":
        return "true" if value else "false"
    if tag == "optf":
        return "none" if value is None else repr(float(value))
    if tag == "i":
        return str(int(value))
    if tag == "s":
        return str(value)
    return repr(float(value))


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text form; parse(serialize(cfg)) == cfg."""
    lines = ["# photomag run configuration"]
    for section in _SECTION_ORDER:
        for (sec, key), (attr, name, tag, unit) in sorted(_REGISTRY.items()):
            if sec != section:
                continue
            holder = cfg if attr is None else getattr(cfg, attr)
            value = getattr(holder, name) if attr is not None else getattr(cfg, name)
            lines.append(f"{sec}.{key} = {_format_scalar(value, tag)}")
    return "\n".join(lines) + "\n"


def config_hash(cfg: RunConfig) -> str:
    """First 12 hex digits of the SHA-256 of the canonical serialization.

    Execution details that cannot affect any computed number (the output
    directory and the worker count) are normalized away first, so the same
    physics run hashes identically no matter where or how wide it ran.
    """
    normalized = replace(cfg, output=OutputSettings(),
                         run=replace(cfg.run, workers=1))
    return hashlib.sha256(serialize_config(normalized).encode("utf-8")).hexdigest()[:12]
