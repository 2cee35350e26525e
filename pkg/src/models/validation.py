from typing import Any, Dict, Iterable

from ..errors import ConfigError


def reject_unknown(data: Dict[str, Any], allowed: Iterable[str], section: str) -> None:
    """Raise ConfigError naming any key outside the allowed set"""
    if not isinstance(data, dict):
        raise ConfigError(f"{section}: expected an object, got {type(data).__name__}")
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"{section}: unknown keys {', '.join(unknown)}")


def require(data: Dict[str, Any], key: str, section: str) -> Any:
    if key not in data:
        raise ConfigError(f"{section}: missing required key '{key}'")
    return data[key]
