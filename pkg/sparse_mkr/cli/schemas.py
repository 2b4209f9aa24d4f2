"""
Declarative configuration files for the `fit` and `compare` commands.

Configs are TOML documents validated by the pydantic models below. Errors
name the file, the line of the offending key (or of its section header when
the key is missing) and the dotted field path.
"""

import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PrivateAttr,
    ValidationError,
    ValidationInfo,
    field_validator,
    model_validator,
)

from sparse_mkr.errors import InvalidConfig
from sparse_mkr.experiments import EstimatorSpec, Method, SyntheticTask, default_methods
from sparse_mkr.experiments.estimators import GTV_ALPHA
from sparse_mkr.multigrid import RefinementConfig
from sparse_mkr.solvers import DEFAULT_PENALTY, SolverConfig


class DataSection(BaseModel):
    model_config = ConfigDict(extra='forbid')

    csv: str


class OutputSection(BaseModel):
    model_config = ConfigDict(extra='forbid')

    directory: str = 'results'


class FitSection(BaseModel):
    model_config = ConfigDict(extra='forbid', allow_inf_nan=False, populate_by_name=True)

    method: Method
    lam: float = Field(alias='lambda', ge=0.0)
    widths: list[float] = Field(min_length=1)
    family: Literal['gaussian', 'exponential'] | None = None
    alpha: float = Field(GTV_ALPHA, gt=0.0, le=2.0)
    mkl_penalty: float = Field(DEFAULT_PENALTY, gt=0.0)

    @field_validator('widths')
    @classmethod
    def _check_widths(cls, widths, info: ValidationInfo):
        method = info.data.get('method')
        if method is None:
            return widths
        if method.multi_kernel and len(widths) < 2:
            raise ValueError(f"{method.value} needs at least two widths")
        if not method.multi_kernel and len(widths) != 1:
            raise ValueError(f"{method.value} fits exactly one width")
        return widths


class FitConfig(BaseModel):
    model_config = ConfigDict(extra='forbid')

    data: DataSection | None = None
    task: SyntheticTask | None = None
    fit: FitSection
    solver: SolverConfig = SolverConfig()
    refinement: RefinementConfig | None = None
    output: OutputSection = OutputSection()

    _estimator: EstimatorSpec | None = PrivateAttr(None)

    @model_validator(mode='after')
    def _build(self):
        if (self.data is None) == (self.task is None):
            raise ValueError("give exactly one of a [data] or a [task] section")
        try:
            self._estimator = EstimatorSpec(
                method=self.fit.method,
                family=self.fit.family,
                alpha=self.fit.alpha,
                widths=tuple(self.fit.widths),
                lambdas=(self.fit.lam,),
                mkl_penalty=self.fit.mkl_penalty,
                solver=self.solver,
                refinement=self.refinement,
            )
        except ValidationError as exc:
            raise ValueError("; ".join(error['msg'] for error in exc.errors())) from exc
        return self

    def estimator(self) -> EstimatorSpec:
        return self._estimator


class CompareConfig(BaseModel):
    model_config = ConfigDict(extra='forbid')

    task: SyntheticTask = SyntheticTask()
    folds: int = Field(5, ge=2)
    methods: list[EstimatorSpec] = Field(default_factory=default_methods, min_length=1)
    output: OutputSection = OutputSection()


_HEADER = re.compile(r'^\s*(\[\[?)\s*([^\]]+?)\s*\]\]?\s*(#.*)?$')
_KEY = re.compile(r'^\s*("?)([A-Za-z0-9_\-]+)\1\s*=')


def _key_lines(text: str) -> dict[tuple, int]:
    """Map every section path and key path in a TOML text to its line number."""
    lines: dict[tuple, int] = {}
    counts: dict[tuple, int] = {}
    current: tuple = ()
    for number, line in enumerate(text.splitlines(), start=1):
        header = _HEADER.match(line)
        if header:
            path = tuple(part.strip().strip('"') for part in header.group(2).split('.'))
            if header.group(1) == '[[':
                index = counts.get(path, 0)
                counts[path] = index + 1
                current = path + (index,)
            else:
                current = path
            lines.setdefault(current, number)
            continue
        key = _KEY.match(line)
        if key:
            lines.setdefault(current + (key.group(2),), number)
    return lines


def _locate(lines: dict[tuple, int], loc: tuple) -> int:
    for end in range(len(loc), 0, -1):
        if loc[:end] in lines:
            return lines[loc[:end]]
    return 1


def format_validation_error(path, text: str, exc: ValidationError) -> str:
    lines = _key_lines(text)
    messages = []
    for error in exc.errors():
        loc = tuple(error['loc'])
        dotted = '.'.join(str(part) for part in loc) or '<root>'
        messages.append(f"{path}:{_locate(lines, loc)}: {dotted}: {error['msg']}")
    return "\n".join(messages)


def load_config(path, model: type[BaseModel]) -> BaseModel:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InvalidConfig(f"cannot read config {path}: {exc}") from exc
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise InvalidConfig(f"{path}: {exc}") from exc
    try:
        return model.model_validate(raw)
    except ValidationError as exc:
        raise InvalidConfig(format_validation_error(path, text, exc)) from exc
