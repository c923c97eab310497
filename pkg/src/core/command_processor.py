from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple
import asyncio
import json
import logging
import time

from .config import Settings, configure, get_settings, load_settings
from .errors import GroupEngineError, InvalidParameters, UnknownCommand

logger = logging.getLogger(__name__)

USAGE_ERRORS = ("ConfigError", "GroupSpecError", "InvalidParameters", "UnknownCommand")

_TYPES = {
    "string": (str,),
    "integer": (int,),
    "number": (int, float),
    "boolean": (bool,),
    "array": (list, tuple),
}


@dataclass
class Check:
    name: str
    passed: bool
    expected: Any = None
    actual: Any = None
    detail: str = ""
    skipped: bool = False

    def to_dict(self) -> Dict[str, Any]:
        out = {"name": self.name, "passed": self.passed}
        if self.skipped:
            out["skipped"] = True
        if not self.passed or self.expected is not None:
            out["expected"] = self.expected
            out["actual"] = self.actual
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class RunReport:
    command: str
    inputs: Dict[str, Any]
    results: Dict[str, Any] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)
    status: str = "passed"
    error_type: Optional[str] = None
    timing: Dict[str, Any] = field(default_factory=dict)
    started: Optional[datetime] = None

    @property
    def passed(self) -> bool:
        return self.status == "passed"

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        """Serialized report; timing is kept out unless asked for so the output is reproducible"""
        out = {
            "command": self.command,
            "inputs": self.inputs,
            "status": self.status,
            "results": self.results,
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.error_type:
            out["error_type"] = self.error_type
        if include_timing:
            out["timing"] = dict(self.timing)
            if self.started is not None:
                out["timing"]["started"] = self.started.isoformat()
        return out

    def render_text(self) -> str:
        lines = [f"# {self.command} ({self.status})"]
        for key, value in self.inputs.items():
            lines.append(f"  {key}: {value}")
        if self.results:
            lines.append("")
            lines.extend(_render_value(self.results, 0))
        if self.checks:
            lines.append("")
            passed = sum(c.passed for c in self.checks)
            lines.append(f"checks: {passed}/{len(self.checks)} passed")
            for c in self.checks:
                mark = "skip" if c.skipped else ("ok" if c.passed else "FAIL")
                line = f"  [{mark}] {c.name}"
                if not c.passed:
                    line += f": expected {c.expected}, got {c.actual}"
                if c.detail:
                    line += f" ({c.detail})"
                lines.append(line)
        return "\n".join(lines)


def _render_value(value: Any, depth: int) -> List[str]:
    pad = "  " * depth
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_render_value(v, depth + 1))
            else:
                lines.append(f"{pad}{k}: {_flat(v)}")
        return lines
    if isinstance(value, list):
        lines = []
        for item in value:
            if isinstance(item, dict):
                lines.append(f"{pad}-")
                lines.extend(_render_value(item, depth + 1))
            else:
                lines.append(f"{pad}- {_flat(item)}")
        return lines
    return [f"{pad}{_flat(value)}"]


def _is_flat(v: Any) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _is_flat(x)) for x in v)
    return False


def _flat(v: Any) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_flat(x) for x in v) + "]"
    return str(v)


class CommandProcessor:
    def __init__(self, commands_file: str, settings_file: Optional[str] = None):
        """Initialize the command processor

        Args:
            commands_file: Path to the command catalogue JSON
            settings_file: Optional settings YAML; replaces the process-wide settings when given
        """
        self.commands_file = commands_file
        self.settings_file = settings_file
        self.commands: Dict = self._load_json(commands_file)
        if settings_file:
            self.settings: Settings = configure(load_settings(settings_file))
        else:
            self.settings = get_settings()
        self.implementations: Dict[str, Callable] = {}
        self.history: List[RunReport] = []

    def _load_json(self, file_path: str) -> Dict:
        """Load JSON configuration file"""
        with open(file_path, "r") as f:
            return json.load(f)

    def register_command(self, name: str, implementation: Callable):
        """Register a command implementation"""
        if self._command(name) is None:
            raise UnknownCommand(f"{name} is not in {self.commands_file}")
        self.implementations[name] = implementation

    def _command(self, name: str) -> Optional[Dict]:
        return next((cmd for cmd in self.commands["commands"] if cmd["name"] == name), None)

    def _validate_command_params(self, name: str, params: Dict[str, Any]) -> Tuple[bool, str]:
        """Validates presence, names, types and enum values of the parameters"""
        command = self._command(name)
        if command is None:
            return False, f"Unknown command: {name}"
        spec = command.get("parameters", {})

        unknown = set(params) - set(spec)
        if unknown:
            return False, f"Unknown parameters: {', '.join(sorted(unknown))}"
        required = {p for p, s in spec.items() if s.get("required", False)}
        missing = required - {p for p, v in params.items() if v is not None}
        if missing:
            return False, f"Missing required parameters: {', '.join(sorted(missing))}"

        for p, value in params.items():
            if value is None:
                continue
            kind = spec[p].get("type")
            if kind in _TYPES:
                ok = isinstance(value, _TYPES[kind]) and not (kind in ("integer", "number") and isinstance(value, bool))
                if not ok:
                    return False, f"Parameter {p} must be of type {kind}, got {value!r}"
            if "enum" in spec[p] and value not in spec[p]["enum"]:
                return False, f"Parameter {p} must be one of {spec[p]['enum']}, got {value!r}"
        return True, ""

    def _resolve_params(self, name: str, params: Dict[str, Any]) -> Dict[str, Any]:
        ok, message = self._validate_command_params(name, params)
        if not ok:
            raise InvalidParameters(message)
        spec = self._command(name).get("parameters", {})
        resolved = {p: s.get("default") for p, s in spec.items()}
        resolved.update({p: v for p, v in params.items() if v is not None})
        return resolved

    async def execute_command(self, name: str, params: Dict[str, Any]) -> RunReport:
        """Run a command and record its report in history.

        The implementation returns {"results": ..., "checks": [...]}.  Engine
        errors become an error report instead of propagating.
        """
        report = RunReport(command=name, inputs=dict(params), started=datetime.now())
        start = time.perf_counter()
        try:
            if self._command(name) is None:
                raise UnknownCommand(f"Unknown command: {name}")
            if name not in self.implementations:
                raise UnknownCommand(f"No implementation registered for command: {name}")
            resolved = self._resolve_params(name, params)
            report.inputs = resolved
            implementation = self.implementations[name]
            if asyncio.iscoroutinefunction(implementation):
                outcome = await implementation(resolved)
            else:
                loop = asyncio.get_running_loop()
                outcome = await loop.run_in_executor(None, implementation, resolved)
            report.results = outcome.get("results", {})
            report.checks = list(outcome.get("checks", []))
            report.timing.update(outcome.get("timing", {}))
            report.status = "passed" if all(c.passed for c in report.checks) else "failed"
        except GroupEngineError as exc:
            logger.error("%s failed: %s", name, exc)
            report.status = "error"
            report.error_type = type(exc).__name__
            report.checks.append(Check(name=name, passed=False, detail=str(exc)))
        report.timing["seconds"] = time.perf_counter() - start
        self.history.append(report)
        logger.info("%s finished with status %s", name, report.status)
        return report

    async def run_cells(self, func: Callable, cells: Iterable[Any]) -> List[Any]:
        """Apply func to independent cells on a thread pool; exceptions are returned in place of results"""
        cells = list(cells)
        loop = asyncio.get_running_loop()
        with ThreadPoolExecutor(max_workers=self.settings.workers) as pool:
            futures = [loop.run_in_executor(pool, func, cell) for cell in cells]
            return await asyncio.gather(*futures, return_exceptions=True)
