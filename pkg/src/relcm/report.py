"""Report envelopes and their JSON / text renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import __version__

SCHEMA = "relcm.report/1"


@dataclass
class ReportEnvelope:
    command: str
    args: dict
    seed: int
    budget: dict
    result: dict
    ring: str = ""
    wall_clock: float | None = None
    text_lines: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"schema": SCHEMA, "tool": {"name": "relcm", "version": __version__},
               "command": {"name": self.command, "args": self.args}, "ring": self.ring,
               "seed": self.seed, "budget": self.budget, "result": self.result}
        if self.wall_clock is not None:
            out["wallClockSeconds"] = round(self.wall_clock, 3)
        return out


def _clean(obj):
    """Make nested data JSON-safe with deterministic key types."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float) and obj in (float("inf"), float("-inf")):
        return "+inf" if obj > 0 else "-inf"
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


def to_json_text(env: ReportEnvelope) -> str:
    return json.dumps(_clean(env.to_json()), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _walk_lines(obj, prefix=""):
    if isinstance(obj, dict):
        if "verdict" in obj and "route" in obj:
            yield f"{prefix}verdict: {obj['verdict']} (route: {obj['route']})"
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)):
                yield from _walk_lines(v, f"{prefix}{k}.")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _walk_lines(v, f"{prefix}{i}.")


def to_text(env: ReportEnvelope) -> str:
    lines = [f"relcm {__version__}: {env.command} {' '.join(f'--{k} {v}' for k, v in sorted(env.args.items()))}",
             f"ring: {env.ring}", f"seed: {env.seed}  budget: {json.dumps(env.budget, sort_keys=True)}"]
    res = env.result
    for h in res.get("hypotheses", []) if isinstance(res, dict) else []:
        lines.append(f"hypothesis: {h['hypothesis']} [{h['status']}] {h.get('detail', '')}".rstrip())
    for entry in res.get("ledger", []) if isinstance(res, dict) else []:
        lines.append(f"ledger: {entry}")
    lines.extend(env.text_lines)
    if not env.text_lines:
        lines.extend(_walk_lines(res))
    if env.wall_clock is not None:
        lines.append(f"wall clock: {env.wall_clock:.3f} s")
    return "\n".join(lines) + "\n"


def emit(env: ReportEnvelope, fmt: str = "json") -> bytes:
    text = to_json_text(env) if fmt == "json" else to_text(env)
    return text.encode("utf-8")
