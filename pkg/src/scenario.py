"""
Scenario files: named effects, states, observables and instruments plus the
suites to run on them.

A scenario is parsed, validated against ``schemas/scenario.schema.json`` and
then resolved into validated objects. Every error names the offending object;
parse errors carry the line and column.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

import jsonschema

from .effects import Effect, State
from .errors import QMIError, ScenarioError
from .hermitian import matrix_from_json
from .instruments import (
    Instrument,
    SubInstrument,
    constant_state_instrument,
    finite_holevo_instrument,
    holevo_instrument,
    kraus_instrument,
    luders_instrument,
)
from .observables import Observable, OutcomeSpace, SubObservable, as_observable, is_observable

SCENARIO_SCHEMA_PATH = Path(__file__).resolve().parent.parent / "schemas" / "scenario.schema.json"

logger = logging.getLogger(__name__)


@dataclass
class Scenario:
    dimension: int
    seed: Optional[int] = None
    trials: Optional[int] = None
    tol: Optional[float] = None
    effects: Dict[str, Effect] = field(default_factory=dict)
    states: Dict[str, State] = field(default_factory=dict)
    observables: Dict[str, SubObservable] = field(default_factory=dict)
    instruments: Dict[str, SubInstrument] = field(default_factory=dict)
    checks: List[str] = field(default_factory=list)
    name: str = ""
    path: Optional[Path] = None


def _reject_constant(token: str):
    raise ScenarioError(f"non-decimal literal {token!r} is not allowed in scenarios")


def parse_scenario_text(text: str, source: str = "<scenario>") -> Dict[str, Any]:
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _schema() -> Dict[str, Any]:
    with SCENARIO_SCHEMA_PATH.open(encoding="utf-8") as f:
        return json.load(f)


def validate_scenario_data(data: Any, source: str = "<scenario>") -> None:
    """Raise :class:`ScenarioError` if ``data`` does not match the scenario schema."""
    try:
        jsonschema.validate(instance=data, schema=_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ScenarioError(f"{source}: schema violation at {where}: {exc.message}") from exc


def _named(what: str, name: str, build):
    """Run ``build`` and prefix any toolkit error with the object it concerns."""
    try:
        return build()
    except ScenarioError:
        raise
    except QMIError as exc:
        raise type(exc)(f"{what} {name!r}: {exc}") from exc


def _lookup(table: Mapping[str, Any], kind: str, name: str, owner: str):
    try:
        return table[name]
    except KeyError:
        raise ScenarioError(f"{owner} refers to unknown {kind} {name!r}") from None


def _square(m, dim: int, what: str, name: str):
    if m.shape != (dim, dim):
        raise ScenarioError(f"{what} {name!r} is {m.shape[0]}x{m.shape[1]}, scenario dimension is {dim}")
    return m


class ScenarioResolver:
    """Turns validated scenario JSON into toolkit objects."""

    def __init__(self, data: Mapping[str, Any], source: str = "<scenario>"):
        self.data = data
        self.source = source
        self.dim = int(data["dimension"])
        self.logger = logging.getLogger(__name__)
        self.effects: Dict[str, Effect] = {}
        self.states: Dict[str, State] = {}
        self.observables: Dict[str, SubObservable] = {}
        self.instruments: Dict[str, SubInstrument] = {}
        self._resolving: List[str] = []

    def resolve(self) -> Scenario:
        for name, raw in self.data.get("effects", {}).items():
            self.effects[name] = _named(
                "effect", name, lambda: Effect(_square(matrix_from_json(raw, "matrix"), self.dim, "effect", name))
            )
        for name, raw in self.data.get("states", {}).items():
            self.states[name] = _named(
                "state", name, lambda: State(_square(matrix_from_json(raw, "matrix"), self.dim, "state", name))
            )
        for name, mapping in self.data.get("observables", {}).items():
            self.observables[name] = self._observable(name, mapping)
        for name in self.data.get("instruments", {}):
            self._instrument(name)
        self.logger.info(
            "Loaded %s: dimension %d, %d effect(s), %d state(s), %d observable(s), %d instrument(s)",
            self.source, self.dim, len(self.effects), len(self.states), len(self.observables), len(self.instruments),
        )
        return Scenario(
            dimension=self.dim,
            seed=self.data.get("seed"),
            trials=self.data.get("trials"),
            tol=self.data.get("tol"),
            effects=self.effects,
            states=self.states,
            observables=self.observables,
            instruments=self.instruments,
            checks=list(self.data.get("checks", [])),
            name=self.data.get("name", ""),
        )

    def _observable(self, name: str, mapping: Mapping[str, str]) -> SubObservable:
        owner = f"observable {name!r}"
        effects = {label: _lookup(self.effects, "effect", ref, owner) for label, ref in mapping.items()}

        def build() -> SubObservable:
            A = SubObservable(OutcomeSpace(tuple(mapping)), effects)
            return as_observable(A) if is_observable(A) else A

        return _named("observable", name, build)

    def _require_observable(self, ref: str, owner: str) -> Observable:
        A = _lookup(self.observables, "observable", ref, owner)
        if not isinstance(A, Observable):
            raise ScenarioError(f"{owner} needs an observable, but {ref!r} does not sum to I")
        return A

    def _instrument(self, name: str) -> SubInstrument:
        if name in self.instruments:
            return self.instruments[name]
        specs = self.data.get("instruments", {})
        if name in self._resolving:
            cycle = " -> ".join(self._resolving + [name])
            raise ScenarioError(f"instrument references form a cycle: {cycle}")
        spec = _lookup(specs, "instrument", name, "scenario")
        owner = f"instrument {name!r}"
        self._resolving.append(name)
        try:
            kind = spec["type"]
            if kind == "luders":
                A = self._require_observable(spec["observable"], owner)
                I = _named("instrument", name, lambda: luders_instrument(A))
            elif kind == "holevo":
                A = self._require_observable(spec["observable"], owner)
                alpha = _lookup(self.states, "state", spec["state"], owner)
                I = _named("instrument", name, lambda: holevo_instrument(alpha, A))
            elif kind == "finite_holevo":
                A = self._require_observable(spec["observable"], owner)
                alphas = {x: _lookup(self.states, "state", ref, owner) for x, ref in spec["states"].items()}
                I = _named("instrument", name, lambda: finite_holevo_instrument(alphas, A))
            elif kind == "constant_state":
                source = self._instrument(spec["source"])
                if not isinstance(source, Instrument):
                    raise ScenarioError(f"{owner}: source {spec['source']!r} is not an instrument")
                alpha = _lookup(self.states, "state", spec["state"], owner)
                I = _named("instrument", name, lambda: constant_state_instrument(source, alpha))
            else:
                kraus = {
                    x: [_square(matrix_from_json(k, f"{owner} Kraus[{x}]"), self.dim, "Kraus operator of", name) for k in ops]
                    for x, ops in spec["kraus"].items()
                }
                I = _named("instrument", name, lambda: kraus_instrument(tuple(kraus), kraus))
        finally:
            self._resolving.pop()
        self.instruments[name] = I
        return I


def load_scenario_data(data: Any, source: str = "<scenario>") -> Scenario:
    validate_scenario_data(data, source)
    return ScenarioResolver(data, source).resolve()


def load_scenario(path: Path | str) -> Scenario:
    """Parse, schema-check and resolve a scenario file."""
    path = Path(path)
    if not path.is_file():
        raise ScenarioError(f"scenario file not found: {path}")
    text = path.read_text(encoding="utf-8")
    scenario = load_scenario_data(parse_scenario_text(text, str(path)), str(path))
    scenario.path = path
    return scenario
