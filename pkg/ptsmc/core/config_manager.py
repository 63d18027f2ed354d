from math import sqrt
from os import getenv

from ..helper.control_utils.sliding import is_hurwitz
from ..helper.ext_utils.exceptions import ConfigParseError, ConfigValidationError

ENV_PREFIX = "PTSMC_"


class AppConfig:
    LOG_FILE = "log.txt"
    LOG_LEVEL = "INFO"
    TIMEZONE = "UTC"
    SWEEP_WORKERS = 4

    @classmethod
    def get(cls, key):
        return getattr(cls, key) if hasattr(cls, key) else None

    @classmethod
    def set(cls, key, value):
        if hasattr(cls, key):
            value = cls._convert_env_type(key, value)
            setattr(cls, key, value)
        else:
            raise KeyError(f"{key} is not a valid configuration key.")

    @classmethod
    def get_all(cls):
        return {
            key: getattr(cls, key)
            for key in cls.__dict__.keys()
            if not key.startswith("_") and key.isupper() and not callable(getattr(cls, key))
        }

    @classmethod
    def load(cls):
        cls.load_env()

    @classmethod
    def load_env(cls):
        for key in cls.get_all():
            env_value = getenv(f"{ENV_PREFIX}{key}")
            if env_value is not None:
                cls.set(key, env_value)

    @classmethod
    def _convert_env_type(cls, key, value):
        original_value = getattr(cls, key, None)
        if original_value is None:
            return value
        elif isinstance(original_value, bool):
            if isinstance(value, bool):
                return value
            return str(value).lower() in ("true", "1", "yes")
        elif isinstance(original_value, int):
            if isinstance(value, int):
                return value
            try:
                return int(value)
            except (ValueError, TypeError):
                return original_value
        return str(value).strip()


SCENARIOS = ("second_order", "third_order", "attitude")

KEY_TYPES = {
    "t_f": float,
    "eta": float,
    "delta": float,
    "K": float,
    "K1": float,
    "phi": float,
    "dt": float,
    "t_end": float,
    "record_stride": int,
    "renorm": bool,
    "dist_amp": float,
    "dist_omega": float,
    "x0": tuple,
    "a": tuple,
    "J": tuple,
    "q0": tuple,
    "w0": tuple,
    "L": tuple,
    "e0_bound": float,
    "ref_rate": float,
}

COMMON_KEYS = (
    "t_f",
    "eta",
    "delta",
    "K",
    "K1",
    "phi",
    "dt",
    "t_end",
    "record_stride",
    "renorm",
    "dist_amp",
    "dist_omega",
)
SCALAR_KEYS = COMMON_KEYS + ("x0", "a")
ATTITUDE_KEYS = COMMON_KEYS + ("J", "q0", "w0", "L", "e0_bound", "ref_rate")

# None marks a default derived from other keys at validation
_SCALAR_DEFAULTS = {
    "t_f": 5.0,
    "eta": 3.0,
    "delta": 0.01,
    "K": 0.01,
    "K1": 1.0,
    "phi": 0.0,
    "dt": 1e-4,
    "t_end": None,
    "record_stride": 10,
    "renorm": True,
    "dist_amp": 0.01,
    "dist_omega": 1.0,
    "x0": (5.0, 3.0),
    "a": (1.0,),
}

SCENARIO_DEFAULTS = {
    "second_order": dict(_SCALAR_DEFAULTS),
    "third_order": {**_SCALAR_DEFAULTS, "eta": 4.0, "x0": (5.0, 3.0, 2.0), "a": (2.0, 3.0)},
    "attitude": {
        "t_f": 30.0,
        "eta": 3.0,
        "delta": 0.05,
        "K": 0.01,
        "K1": 1.0,
        "phi": 0.0,
        "dt": 1e-3,
        "t_end": None,
        "record_stride": 10,
        "renorm": True,
        "dist_amp": 0.01,
        "dist_omega": 0.1,
        "J": (10.0, 12.0, 14.0),
        "q0": (sqrt(2) / 3, -1 / 3, sqrt(3) / 3, sqrt(3) / 3),
        "w0": (0.0, 0.0, 0.0),
        "L": (10.0, 10.0, 10.0),
        "e0_bound": None,
        "ref_rate": 0.0,
    },
}

PRESETS = {
    "fig1": ("second_order", {}),
    "fig2": ("third_order", {}),
    "case1_30": ("attitude", {"t_f": 30.0}),
    "case1_40": ("attitude", {"t_f": 40.0}),
    "case2_eta3": ("attitude", {"t_f": 35.0, "eta": 3.0}),
    "case2_eta5": ("attitude", {"t_f": 35.0, "eta": 5.0}),
}


def resolve_scenario(name):
    """Scenario kind and preset overrides for a kind or preset name."""
    if name in SCENARIOS:
        return name, {}
    if name in PRESETS:
        kind, overrides = PRESETS[name]
        return kind, dict(overrides)
    raise ConfigValidationError(
        "scenario", f"unknown scenario or preset {name!r} (kinds: {', '.join(SCENARIOS)}; presets: {', '.join(PRESETS)})"
    )


def format_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


class ScenarioConfig:
    def __init__(self, scenario="second_order"):
        if scenario not in SCENARIOS:
            raise ConfigValidationError("scenario", f"unknown scenario kind {scenario!r}")
        self.scenario = scenario
        self._values = dict(SCENARIO_DEFAULTS[scenario])
        self._explicit = set()

    @property
    def keys(self):
        return ATTITUDE_KEYS if self.scenario == "attitude" else SCALAR_KEYS

    @property
    def order(self):
        return 3 if self.scenario == "third_order" else 2

    def __getattr__(self, key):
        values = self.__dict__.get("_values")
        if values is not None and key in values:
            return values[key]
        raise AttributeError(key)

    def get(self, key):
        return self._values.get(key)

    def set(self, key, value):
        if key not in self.keys:
            raise KeyError(f"{key} is not a valid configuration key for {self.scenario}.")
        self._values[key] = self._convert_type(key, value)
        self._explicit.add(key)

    def get_all(self):
        return {key: self._values[key] for key in self.keys}

    def copy(self):
        other = ScenarioConfig(self.scenario)
        other._values = dict(self._values)
        other._explicit = set(self._explicit)
        return other

    def is_explicit(self, key):
        return key in self._explicit

    @staticmethod
    def _convert_type(key, value):
        kind = KEY_TYPES[key]
        if kind is bool:
            if isinstance(value, bool):
                return value
            text = str(value).strip().lower()
            if text in ("true", "1", "yes"):
                return True
            if text in ("false", "0", "no"):
                return False
            raise ValueError(f"expected a boolean, got {value!r}")
        if kind is int:
            number = float(value) if isinstance(value, str) else value
            if isinstance(number, float) and not number.is_integer():
                raise ValueError(f"expected an integer, got {value!r}")
            return int(number)
        if kind is tuple:
            if isinstance(value, str):
                items = [v for v in value.replace(";", ",").split(",") if v.strip()]
                return tuple(float(v) for v in items)
            return tuple(float(v) for v in value)
        return float(value)

    def load_dict(self, config_dict):
        for key, value in config_dict.items():
            self.set(key, value)

    def load_env(self):
        for key in self.keys:
            env_value = getenv(f"{ENV_PREFIX}{key.upper()}")
            if env_value is not None:
                try:
                    self.set(key, env_value)
                except ValueError as e:
                    raise ConfigValidationError(key, f"bad environment value: {e}") from e

    def _derive(self):
        if "t_end" not in self._explicit:
            margin = 5.0 if self.scenario == "attitude" else 2.0
            self._values["t_end"] = self.t_f + margin
        if self.scenario == "attitude" and "e0_bound" not in self._explicit:
            # d_hat(0) = z(0) + L w0 with z(0) = 0
            d_hat0 = max(abs(l * w) for l, w in zip(self.L, self.w0))
            self._values["e0_bound"] = d_hat0 + self.K

    def validate(self):
        n = self.order
        self._check("t_f", self.t_f > 0, "must be positive")
        self._check("eta", self.eta > n, f"must exceed the system order {n}")
        self._check("delta", 0 <= self.delta < self.t_f, "must satisfy 0 <= delta < t_f")
        self._check("K", self.K > 0, "must be positive")
        self._check("K1", self.K1 > 0, "must be positive")
        self._check("phi", self.phi >= 0, "must be non-negative")
        self._check("dt", self.dt > 0, "must be positive")
        if self.delta > 0:
            self._check(
                "dt",
                self.dt <= self.delta / 10 * (1 + 1e-9),
                f"must be <= delta/10 = {self.delta / 10} to resolve the switch",
            )
        self._check("record_stride", self.record_stride >= 1, "must be >= 1")
        self._check("dist_amp", self.dist_amp >= 0, "must be non-negative")
        self._derive()
        self._check("t_end", self.t_end > 0, "must be positive")
        if self.scenario == "attitude":
            self._check("J", len(self.J) == 3 and min(self.J) > 0, "needs three positive entries")
            self._check("L", len(self.L) == 3 and min(self.L) > 0, "needs three positive entries")
            self._check("w0", len(self.w0) == 3, "needs three entries")
            self._check("q0", len(self.q0) == 4, "needs four entries")
            norm = sqrt(sum(v * v for v in self.q0))
            self._check("q0", abs(norm - 1.0) <= 1e-6, f"must be unit norm, got |q0|={norm}")
            if abs(norm - 1.0) > 1e-12:
                self._values["q0"] = tuple(v / norm for v in self.q0)
            self._check("e0_bound", self.e0_bound >= 0, "must be non-negative")
        else:
            self._check("x0", len(self.x0) == n, f"needs {n} entries")
            self._check("a", len(self.a) == n - 1, f"needs {n - 1} entries")
            self._check("a", is_hurwitz(self.a), "classical surface must be Hurwitz")
        return self

    @staticmethod
    def _check(key, ok, message):
        if not ok:
            raise ConfigValidationError(key, message)

    def dumps(self):
        lines = [f"scenario = {self.scenario}"]
        lines.extend(f"{key} = {format_value(value)}" for key, value in self.get_all().items())
        return "\n".join(lines) + "\n"


def parse_key_values(text):
    """(line_no, key, raw value) triples of a `key = value` text with # comments."""
    entries = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(line_no, f"expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigParseError(line_no, "missing key")
        entries.append((line_no, key, value))
    return entries


def loads_config(text, scenario=None):
    entries = parse_key_values(text)
    file_scenario = next((value for _, key, value in entries if key == "scenario"), None)
    name = scenario or file_scenario
    if name is None:
        raise ConfigValidationError("scenario", "no scenario given on the command line or in the file")
    kind, overrides = resolve_scenario(name)
    config = ScenarioConfig(kind)
    config.load_dict(overrides)
    for line_no, key, value in entries:
        if key == "scenario":
            continue
        if key not in config.keys:
            raise ConfigParseError(line_no, f"unknown key {key!r} for scenario {kind}")
        try:
            config.set(key, value)
        except ValueError as e:
            raise ConfigParseError(line_no, f"{key}: {e}") from e
    config.load_env()
    return config.validate()


def load_config(path=None, scenario=None):
    text = ""
    if path is not None:
        with open(path) as f:
            text = f.read()
    return loads_config(text, scenario)
