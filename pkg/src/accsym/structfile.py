"""Structure files: a JSON document describing a chart and a pair (omega, Omega).

Example::

    {
      "chart": ["q", "p", "z"],
      "omega": {"q": "-p", "z": "1"},
      "Omega": {"q^p": "1"},
      "policy": {"mode": "exact", "samples": 50, "seed": 0, "tol": 1e-09}
    }

``omega`` maps coordinate names to DSL expressions, ``Omega`` maps wedge keys
``a^b`` (``a`` before ``b`` in chart order) to DSL expressions.  ``policy`` is
optional.  Dumping writes keys in chart order with two-space indentation and a
trailing newline, so fixtures are byte-stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .chart import Chart
from .errors import AccSymError, ChartError, ParseError
from .exterior import DiffForm
from .symexpr import Policy, parse_expr


class StructureFileError(AccSymError):
    pass


@dataclass(frozen=True)
class StructureSpec:
    chart: Chart
    omega: dict
    Omega: dict
    policy: Policy | None = None
    extra: dict = field(default_factory=dict)

    def forms(self) -> tuple[DiffForm, DiffForm]:
        omega = DiffForm(self.chart, 1, {(self.chart.index(k),): _parse(v, self.chart, f"omega.{k}")
                                         for k, v in self.omega.items()})
        Omega = DiffForm(self.chart, 2, {tuple(self.chart.index(n) for n in k.split("^")):
                                         _parse(v, self.chart, f"Omega.{k}")
                                         for k, v in self.Omega.items()})
        return omega, Omega

    def to_dict(self) -> dict:
        names = self.chart.names
        out = {"chart": list(names),
               "omega": {k: self.omega[k] for k in sorted(self.omega, key=names.index)},
               "Omega": {k: self.Omega[k] for k in sorted(self.Omega, key=lambda k: _wedge_order(k, names))}}
        if self.policy is not None:
            p = self.policy
            out["policy"] = {"mode": p.mode, "samples": p.samples, "seed": p.seed, "tol": p.tol}
        out.update(self.extra)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def _wedge_order(key: str, names) -> tuple:
    return tuple(names.index(n) for n in key.split("^"))


def _parse(text, chart: Chart, where: str):
    if not isinstance(text, str):
        if isinstance(text, int) and not isinstance(text, bool):
            text = str(text)
        else:
            raise StructureFileError(f"{where}: expression must be a string")
    try:
        return parse_expr(text, chart)
    except ParseError as exc:
        raise StructureFileError(f"{where}: {exc}") from None


def from_dict(data: dict) -> StructureSpec:
    if not isinstance(data, dict):
        raise StructureFileError("structure file must be a JSON object")
    unknown = set(data) - {"chart", "omega", "Omega", "policy", "conserved", "notes"}
    if unknown:
        raise StructureFileError(f"unknown keys: {', '.join(sorted(unknown))}")
    names = data.get("chart")
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise StructureFileError("chart must be a list of coordinate names")
    try:
        chart = Chart(tuple(names))
    except ChartError as exc:
        raise StructureFileError(str(exc)) from None
    omega = data.get("omega", {})
    Omega = data.get("Omega", {})
    if not isinstance(omega, dict) or not isinstance(Omega, dict):
        raise StructureFileError("omega and Omega must be maps")
    for k in omega:
        if k not in names:
            raise StructureFileError(f"omega: unknown coordinate {k!r}")
    for k in Omega:
        parts = k.split("^")
        if len(parts) != 2 or not all(p in names for p in parts):
            raise StructureFileError(f"Omega: bad wedge key {k!r}")
        if names.index(parts[0]) >= names.index(parts[1]):
            raise StructureFileError(f"Omega: wedge key {k!r} is not strictly increasing")
    policy = None
    if "policy" in data:
        p = data["policy"]
        try:
            policy = Policy(p.get("mode", "exact"), int(p.get("samples", 50)),
                            int(p.get("seed", 0)), float(p.get("tol", 1e-9)))
        except (ValueError, TypeError, AttributeError) as exc:
            raise StructureFileError(f"policy: {exc}") from None
    extra = {k: data[k] for k in ("conserved", "notes") if k in data}
    spec = StructureSpec(chart, dict(omega), dict(Omega), policy, extra)
    spec.forms()  # surface parse errors early
    return spec


def loads(text: str) -> StructureSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureFileError(f"invalid JSON at byte {exc.pos}: {exc.msg}") from None
    return from_dict(data)


def load(path) -> StructureSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StructureFileError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)
