"""TOML run configuration with device defaults for every omitted section."""

from __future__ import annotations

import ast
import logging
import math
import operator
import re
import tomllib
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, ValidationError
from sfqsim.shared.errors import ConfigParseError
from sfqsim.shared.files import read_input_bytes
from sfqsim.shared.schemas import (
    BasisSettings,
    CalibrationSettings,
    CircuitParams,
    DecompositionSettings,
    OptimizerSettings,
    ScheduleTemplate,
    SearchSpace,
)

logger = logging.getLogger(__name__)

ANGLE_KEYS = frozenset({"kick_angle", "clock_kick_pairs"})

# Clock frequency (GHz) -> kick angle that gives the same rotation per qubit period.
KNOWN_KICK_PAIRS: dict[float, float] = {20.0: math.pi / 100, 40.0: math.pi / 200}

_NUMBER = r"\d+(?:\.\d*)?"
_PI_EXPR = re.compile(
    rf"(?:{_NUMBER}\s*\*\s*)?\bpi\b(?:\s*[*/]\s*(?:{_NUMBER}|\bpi\b))*"
)
_SECTION = re.compile(r"^\s*\[([^\]]+)\]\s*(?:#.*)?$")
_ASSIGN = re.compile(r"^\s*([A-Za-z_][\w-]*)\s*=")

_BINARY_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY_OPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    target: str = "cz"
    output_dir: Path | None = None
    circuit: CircuitParams = CircuitParams()
    basis: BasisSettings = BasisSettings()
    calibration: CalibrationSettings = CalibrationSettings()
    schedule: ScheduleTemplate = ScheduleTemplate()
    optimizer: OptimizerSettings = OptimizerSettings()
    search: SearchSpace = SearchSpace()
    decomposition: DecompositionSettings = DecompositionSettings()

    @property
    def target_freq(self) -> float:
        """Calibration target in rad/ns."""
        return 2.0 * math.pi * self.calibration.target_freq_ghz


def evaluate_angle(expression: str) -> float:
    """Evaluate arithmetic over numbers and ``pi`` without ``eval``."""
    try:
        tree = ast.parse(expression.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"invalid angle expression {expression!r}") from exc
    return float(_eval_node(tree.body, expression))


def _eval_node(node: ast.AST, source: str) -> float:
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.BinOp) and type(node.op) in _BINARY_OPS:
        left = _eval_node(node.left, source)
        right = _eval_node(node.right, source)
        return _BINARY_OPS[type(node.op)](left, right)
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY_OPS:
        return _UNARY_OPS[type(node.op)](_eval_node(node.operand, source))
    raise ValueError(f"unsupported element in angle expression {source!r}")


def _quote_angle_expressions(text: str) -> str:
    lines = text.splitlines()
    for index, line in enumerate(lines):
        match = _ASSIGN.match(line)
        if match is None or match.group(1) not in ANGLE_KEYS or '"' in line:
            continue
        key_end = match.end()
        value = _PI_EXPR.sub(lambda m: f'"{m.group(0)}"', line[key_end:])
        lines[index] = line[:key_end] + value
    return "\n".join(lines)


def _resolve_angles(data: Any, key: str | None = None) -> Any:
    if isinstance(data, dict):
        return {k: _resolve_angles(v, k) for k, v in data.items()}
    if isinstance(data, list):
        return [_resolve_angles(item, key) for item in data]
    if isinstance(data, str) and key in ANGLE_KEYS:
        return evaluate_angle(data)
    return data


def _locate(text: str, loc: tuple[str | int, ...]) -> int | None:
    """Best-effort 1-based line of a dotted config key."""
    names = [str(part) for part in loc if isinstance(part, str)]
    if not names:
        return None
    section: list[str] = []
    for number, line in enumerate(text.splitlines(), start=1):
        header = _SECTION.match(line)
        if header:
            section = [part.strip() for part in header.group(1).split(".")]
            if section == names:
                return number
            continue
        assign = _ASSIGN.match(line)
        if assign and section + [assign.group(1)] == names[: len(section) + 1]:
            return number
    return None


def _warn_on_unusual_pairing(config: RunConfig) -> None:
    expected = KNOWN_KICK_PAIRS.get(config.schedule.clock_freq)
    if expected is not None and not math.isclose(
        config.schedule.kick_angle, expected, rel_tol=1e-9
    ):
        logger.warning(
            "kick angle %.6g rad is unusual for a %.0f GHz clock (expected %.6g)",
            config.schedule.kick_angle,
            config.schedule.clock_freq,
            expected,
        )


def parse_config(text: str) -> RunConfig:
    """Parse TOML text into a validated RunConfig."""
    try:
        raw = tomllib.loads(_quote_angle_expressions(text))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigParseError(
            f"invalid TOML: {exc}", line=getattr(exc, "lineno", None)
        ) from exc

    try:
        data = _resolve_angles(raw)
    except ValueError as exc:
        raise ConfigParseError(str(exc)) from exc

    try:
        config = RunConfig.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = tuple(first["loc"])
        key = ".".join(str(part) for part in loc) or None
        raise ConfigParseError(
            f"{key}: {first['msg']}", key=key, line=_locate(text, loc)
        ) from exc

    _warn_on_unusual_pairing(config)
    return config


def load_config(path: Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    data = read_input_bytes(path, "config file")
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ConfigParseError(f"config file {path} is not UTF-8 text") from exc
    return parse_config(text)
