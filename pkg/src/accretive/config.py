"""Problem specifications: JSON files describing one experiment.

A minimal file::

    {
      "version": 1,
      "space": {"norm": "euclidean"},
      "operator": {"kind": "diagonal", "fns": [{"type": "power", "exp": 3}]},
      "x0": [0.5]
    }

Unknown keys are rejected everywhere.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import ConfigError, DomainError
from .operator import from_descriptor
from .space import SpaceInstance
from .verify import Instance, SamplingPlan, Slack

__all__ = ["ProblemSpec", "load_spec", "dump_spec"]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SpaceSpec(_Strict):
    norm: Literal["euclidean", "lp"]
    p: Optional[float] = None

    @model_validator(mode="after")
    def _p_given(self):
        if self.norm == "lp" and self.p is None:
            raise ValueError("lp spaces need an exponent p")
        if self.norm == "euclidean" and self.p not in (None, 2.0):
            raise ValueError("euclidean spaces take no exponent")
        return self


class ScalarFnSpec(_Strict):
    type: Literal["linear", "power", "exp"]
    slope: Optional[float] = None
    offset: Optional[float] = None
    exp: Optional[float] = None
    coef: Optional[float] = None


class OperatorSpec(_Strict):
    kind: Literal["linear_psd", "diagonal", "constant"]
    matrix: Optional[List[List[float]]] = None
    q: Optional[List[float]] = None
    fns: Optional[List[ScalarFnSpec]] = None
    lambda0: Optional[float] = None

    @model_validator(mode="after")
    def _fields_match_kind(self):
        need = {"linear_psd": ("matrix",), "diagonal": ("fns",), "constant": ("q",)}[self.kind]
        for name in need:
            if getattr(self, name) is None:
                raise ValueError(f"operator kind {self.kind} needs {name!r}")
        if self.kind != "diagonal" and self.fns is not None:
            raise ValueError("fns only applies to diagonal operators")
        if self.kind != "linear_psd" and self.matrix is not None:
            raise ValueError("matrix only applies to linear_psd operators")
        return self

    def descriptor(self):
        d = self.model_dump(exclude_none=True)
        if "fns" in d:
            d["fns"] = [{k: v for k, v in f.items() if v is not None} for f in d["fns"]]
        return d


class RatesSpec(_Strict):
    b: Optional[int] = Field(default=None, ge=1)
    n: Optional[int] = Field(default=None, ge=1)
    E: Optional[int] = Field(default=None, ge=1)
    D: Optional[float] = Field(default=None, gt=0)
    K: Optional[float] = None
    auto_raise_b: bool = False


class SamplingSpec(_Strict):
    grid: Literal["geometric", "uniform"] = "geometric"
    per_decade: int = Field(default=32, ge=1)
    decades: float = Field(default=4.0, gt=0)
    above_factor: float = Field(default=64.0, gt=1)
    samples: int = Field(default=100, ge=1)
    seed: int = Field(default=0, ge=0)


class SlackSpec(_Strict):
    sigma: float = Field(default=0.05, ge=0)
    kappa: float = Field(default=1e-7, ge=0)


class OutputSpec(_Strict):
    dir: Optional[str] = None


class ProblemSpec(_Strict):
    version: Literal[1]
    label: str = ""
    space: SpaceSpec
    operator: OperatorSpec
    x0: List[float]
    rates: RatesSpec = RatesSpec()
    sampling: SamplingSpec = SamplingSpec()
    slack: SlackSpec = SlackSpec()
    output: OutputSpec = OutputSpec()

    @model_validator(mode="after")
    def _finite_point(self):
        if not self.x0 or not all(math.isfinite(v) for v in self.x0):
            raise ValueError("x0 must be a nonempty list of finite numbers")
        return self

    # -- builders ------------------------------------------------------------

    def build_space(self):
        s = self.space
        return SpaceInstance(len(self.x0), s.norm, s.p if s.p is not None else 2.0)

    def build_operator(self, strict=True):
        op = from_descriptor(self.operator.descriptor(), strict=strict)
        if op.dimension != len(self.x0):
            raise ConfigError(f"operator has dimension {op.dimension}, x0 has {len(self.x0)}")
        return op

    def build(self):
        """``(Instance, notes)`` after validating the ``b`` bound."""
        try:
            space = self.build_space()
            op = self.build_operator()
            op.check_accretive(space)
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc
        inst = Instance(op, space, self.x0, self.label)
        notes = []
        need = max(inst.norm(inst.x), inst.norm(inst.v))
        if self.rates.b is not None and self.rates.b < need:
            if not self.rates.auto_raise_b:
                raise ConfigError(f"rates.b={self.rates.b} is below max(||x0||, ||Ax0||)={need:g}")
            notes.append(f"b raised from {self.rates.b} to {math.ceil(need)}")
        return inst, notes

    def effective_b(self, inst):
        need = max(1, math.ceil(max(inst.norm(inst.x), inst.norm(inst.v))))
        if self.rates.b is None:
            return need
        return max(self.rates.b, need) if self.rates.auto_raise_b else self.rates.b

    def plan(self):
        return SamplingPlan(**self.sampling.model_dump())

    def slack_policy(self):
        return Slack(**self.slack.model_dump())


def load_spec(path_or_text):
    """Parse a spec from a path or a JSON string; raise ``ConfigError`` on any problem."""
    try:
        p = Path(path_or_text)
        text = p.read_text() if p.exists() else str(path_or_text)
    except (OSError, ValueError):
        text = str(path_or_text)
    try:
        return ProblemSpec.model_validate(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"spec is not valid JSON: {exc}") from exc
    except ValidationError as exc:
        raise ConfigError(f"invalid spec:\n{exc}") from exc


def dump_spec(spec):
    return json.dumps(spec.model_dump(exclude_none=True), indent=2, sort_keys=True)
