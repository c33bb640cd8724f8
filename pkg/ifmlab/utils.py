import os
import re
import json
from typing import Dict, Iterable, List, Tuple

from .errors import UsageError

KEY_VALUE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*?)\s*$")

SIGNIFICANT_DIGITS = 12


def parse_key_value(text: str) -> Tuple[str, str]:
    m = KEY_VALUE.match(text or "")
    if not m:
        raise UsageError("expected key=value, got %r" % text)
    return m.group(1), m.group(2)


def parse_params(items: Iterable[str]) -> Dict[str, str]:
    # later occurrences win, like repeated flags usually do
    return dict(parse_key_value(item) for item in items)


def parse_grid(text: str) -> Tuple[str, List[str]]:
    """'R=0.5,0.25,0.1' -> ('R', ['0.5', '0.25', '0.1'])"""
    name, values = parse_key_value(text)
    grid = [v.strip() for v in values.split(",") if v.strip()]
    if not grid:
        raise UsageError("grid for %r is empty" % name)
    return name, grid


def round_sig(x: float, digits: int = SIGNIFICANT_DIGITS) -> float:
    return float(f"{x:.{digits}g}")


def round_probs(probs: Dict[str, float]) -> Dict[str, float]:
    return {label: round_sig(p) for label, p in probs.items()}


def format_number(x) -> str:
    if isinstance(x, bool) or not isinstance(x, float):
        return str(x)
    return f"{x:.{SIGNIFICANT_DIGITS}g}"


def ensure_outdir(path: str) -> None:
    os.makedirs(path, exist_ok=True)


def save_run_to_file(path: str, data: Dict):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, ensure_ascii=False, indent=2)


def load_run_from_file(path: str) -> Dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
