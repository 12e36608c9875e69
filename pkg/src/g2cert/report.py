"""Check records and reports, with a text rendering and a lossless JSON form."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

from . import __version__


def _plain(v: Any) -> Any:
    """Turn numpy scalars/arrays and tuples into JSON-native values."""
    if hasattr(v, "tolist"):
        return _plain(v.tolist())
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, float):
        return v + 0.0  # no negative zero in output
    return v


@dataclass
class CheckRecord:
    check: str
    value: Any
    passed: bool
    anchor: str
    tol: float | None = None
    detail: str = ""

    def __post_init__(self):
        self.value = _plain(self.value)
        self.passed = bool(self.passed)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tol = "" if self.tol is None else f" tol={self.tol!r}"
        detail = f" ({self.detail})" if self.detail else ""
        return f"{status}  {self.check:<28} {json.dumps(self.value)}{tol}  [{self.anchor}]{detail}"


@dataclass
class Report:
    command: str
    subject: str
    params: dict[str, float] = field(default_factory=dict)
    records: list[CheckRecord] = field(default_factory=list)
    rng_seed: int | None = None
    data: dict[str, Any] = field(default_factory=dict)
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def add(self, *records: CheckRecord) -> None:
        self.records.extend(records)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["data"] = _plain(d["data"])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        d = dict(d)
        d["records"] = [CheckRecord(**r) for r in d.get("records", [])]
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def render(self) -> str:
        head = f"g2cert {self.version} {self.command} {self.subject}"
        if self.params:
            head += " " + ",".join(f"{k}={v!r}" for k, v in sorted(self.params.items()))
        if self.rng_seed is not None:
            head += f" rng_seed={self.rng_seed}"
        lines = [head]
        lines += [r.line() for r in self.records]
        for key, val in self.data.items():
            lines.append(f"{key}: {json.dumps(_plain(val), sort_keys=True)}")
        n_fail = sum(not r.passed for r in self.records)
        lines.append(f"{len(self.records) - n_fail}/{len(self.records)} checks passed")
        return "\n".join(lines)
