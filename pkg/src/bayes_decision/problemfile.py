"""YAML problem files: loading, schema validation and conversion."""
from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np
import yaml

from .criterion import BoundsConfig
from .dist import (
    ConditionalTable,
    Decision,
    DiscreteDistribution,
    binomial_outcome_dist,
    mixture_binomial_outcome_dist,
)
from .exceptions import DecisionError
from .utility import UtilityModel, calibrate_weber

ROW_TOL = Decimal("1e-6")
# ways of specifying a decision's outcome distribution
FORMS = {
    "table": ("prior", "table", "outcome_values"),
    "distribution": ("distribution",),
    "binomial": ("binomial",),
    "mixture_binomial": ("mixture_binomial",),
}


class ProblemFileError(DecisionError):
    """A problem file cannot be parsed or does not match the schema."""

    def __init__(self, message, *, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field {field}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.field = field


def load_schema() -> dict:
    text = resources.files(__package__).joinpath("schemas/problem.schema.json").read_text()
    return json.loads(text)


@dataclass(frozen=True)
class Problem:
    """Everything needed to run an analysis."""

    labels: tuple[str, ...]
    outcomes: tuple[DiscreteDistribution, ...]
    model: UtilityModel
    config: BoundsConfig
    decisions: tuple[Decision | None, ...]
    source: dict


def _path(err) -> str:
    parts = []
    for p in err.absolute_path:
        if isinstance(p, int):
            parts.append(f"[{p}]")
        else:
            parts.append(("." if parts else "") + str(p))
    return "".join(parts) or "<root>"


def _decimal(x, field) -> Decimal:
    # str(float) is the shortest repr, so a hand-typed 0.049 stays 0.049
    try:
        d = Decimal(str(x).strip())
    except InvalidOperation:
        raise ProblemFileError(f"{x!r} is not a decimal number", field=field) from None
    if not (Decimal(0) <= d <= Decimal(1)):
        raise ProblemFileError(f"probability {d} outside [0, 1]", field=field)
    return d


def _probability_row(values, field) -> np.ndarray:
    ds = [_decimal(v, f"{field}[{i}]") for i, v in enumerate(values)]
    total = sum(ds)
    if abs(total - 1) > ROW_TOL:
        raise ProblemFileError(f"probabilities sum to {total}, not 1 within {ROW_TOL}", field=field)
    row = np.array([float(d) for d in ds])
    return row / row.sum()


def _form(entry: dict, field: str) -> str:
    used = [name for name, keys in FORMS.items() if any(k in entry for k in keys)]
    if len(used) != 1:
        raise ProblemFileError(
            "give exactly one of prior/table/outcome_values, distribution, binomial, mixture_binomial",
            field=field,
        )
    missing = [k for k in FORMS[used[0]] if k not in entry]
    if missing:
        raise ProblemFileError(f"missing {', '.join(missing)}", field=field)
    return used[0]


def _decision(entry: dict, field: str):
    label = entry["label"]
    _form(entry, field)
    if "binomial" in entry:
        b = entry["binomial"]
        p = float(_decimal(b["p"], f"{field}.binomial.p"))
        return None, binomial_outcome_dist(b["n"], p, b.get("fee", 0.0))
    if "mixture_binomial" in entry:
        m = entry["mixture_binomial"]
        return None, mixture_binomial_outcome_dist(m["n"], m["N"], m.get("fee", 0.0))
    if "distribution" in entry:
        d = entry["distribution"]
        if len(d["values"]) != len(d["probs"]):
            raise ProblemFileError("values and probs differ in length", field=f"{field}.distribution")
        probs = _probability_row(d["probs"], f"{field}.distribution.probs")
        return None, DiscreteDistribution(d["values"], probs)
    prior = _probability_row(entry["prior"], f"{field}.prior")
    rows = [_probability_row(r, f"{field}.table[{j}]") for j, r in enumerate(entry["table"])]
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ProblemFileError("table rows differ in length", field=f"{field}.table")
    if len(rows) != len(prior):
        raise ProblemFileError(
            f"{len(prior)} prior entries but {len(rows)} table rows", field=f"{field}.table"
        )
    if len(entry["outcome_values"]) != widths.pop():
        raise ProblemFileError("one outcome value per table column required", field=f"{field}.outcome_values")
    table = ConditionalTable(rows, rows=entry.get("events"), columns=entry.get("outcomes"))
    decision = Decision(label, tuple(prior), table, tuple(entry["outcome_values"]))
    return decision, decision.outcome_distribution()


def _utility(entry: dict | None) -> UtilityModel:
    if entry is None or entry["kind"] == "linear":
        return UtilityModel.linear()
    kind = entry["kind"]
    if "reference" not in entry:
        raise ProblemFileError(f"{kind} needs a reference amount", field="utility.reference")
    if "calibrate" in entry:
        c = entry["calibrate"]
        q = calibrate_weber(c["reference"], c["jnd"], kind)
    else:
        q = entry.get("q", 1.0)
    return UtilityModel(kind, q, entry["reference"], entry.get("gamma", 1.0))


def _criterion(entry: dict | None) -> BoundsConfig:
    entry = entry or {}
    return BoundsConfig(
        k=entry.get("k", 1.0),
        caution=entry.get("caution"),
        opportunity=entry.get("opportunity"),
        mode=entry.get("mode", "sum_of_bounds"),
        clip_to_support=entry.get("clip", True),
    )


def parse_problem(text: str) -> Problem:
    """Parse and validate a problem document.

    Raises :class:`ProblemFileError` with the line of a YAML syntax error
    or the dotted path of the first schema violation.
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        problem = getattr(exc, "problem", None) or str(exc)
        raise ProblemFileError(problem, line=line) from None
    validator = jsonschema.Draft202012Validator(load_schema())
    err = jsonschema.exceptions.best_match(validator.iter_errors(data))
    if err is not None:
        raise ProblemFileError(err.message, field=_path(err))
    labels, outcomes, decisions = [], [], []
    for i, entry in enumerate(data["decisions"]):
        decision, dist = _decision(entry, f"decisions[{i}]")
        labels.append(entry["label"])
        outcomes.append(dist)
        decisions.append(decision)
    if len(set(labels)) != len(labels):
        raise ProblemFileError("decision labels must be unique", field="decisions")
    try:
        model = _utility(data.get("utility"))
        config = _criterion(data.get("criterion"))
    except ValueError as exc:
        if isinstance(exc, DecisionError):
            raise
        raise ProblemFileError(str(exc)) from None
    return Problem(tuple(labels), tuple(outcomes), model, config, tuple(decisions), data)


def load_problem(path) -> Problem:
    return parse_problem(Path(path).read_text())
