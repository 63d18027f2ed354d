from ..core.config_manager import PRESETS, format_value


def preset_lines():
    lines = []
    for name, (kind, overrides) in PRESETS.items():
        extra = " ".join(f"{k}={format_value(v)}" for k, v in overrides.items())
        lines.append(f"{name}: {kind} {extra}".rstrip())
    return lines
