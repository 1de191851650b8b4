import json
from typing import Any, Dict, Iterable, List, Optional

from skylink.errors import ConfigError


def load_json_object(text: str, source: str = "<config>") -> Dict[str, Any]:
    """Parse a JSON document that must be a single object.

    Unlike a lenient parser this never guesses: fences, trailing text and
    duplicate keys are all errors, reported with line and column.
    """
    def _no_duplicates(pairs: List[Any]) -> Dict[str, Any]:
        out: Dict[str, Any] = {}
        for key, value in pairs:
            if key in out:
                raise ConfigError(f"{source}: duplicate key '{key}'")
            out[key] = value
        return out

    try:
        obj = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{source}:{e.lineno}:{e.colno}: {e.msg}") from e
    if not isinstance(obj, dict):
        raise ConfigError(f"{source}: top level must be a JSON object, got {type(obj).__name__}")
    return obj


def reject_unknown_keys(obj: Dict[str, Any], allowed: Iterable[str], path: str) -> None:
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {', '.join(unknown)}")


def require(obj: Dict[str, Any], key: str, path: str, kind: Optional[type] = None) -> Any:
    if key not in obj:
        raise ConfigError(f"{path}.{key}: required field missing")
    value = obj[key]
    if kind is not None and not _is_kind(value, kind):
        raise ConfigError(f"{path}.{key}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def optional(obj: Dict[str, Any], key: str, path: str, kind: type, default: Any) -> Any:
    if key not in obj:
        return default
    value = obj[key]
    if not _is_kind(value, kind):
        raise ConfigError(f"{path}.{key}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def _is_kind(value: Any, kind: type) -> bool:
    if kind is float:
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if kind is int:
        return isinstance(value, int) and not isinstance(value, bool)
    return isinstance(value, kind)
