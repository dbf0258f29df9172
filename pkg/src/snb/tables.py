"""Tabular output shared by the command line and the service.

Tables hold plain numeric cells; serialization uses 17 significant digits
so every double round-trips exactly through either encoding.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from . import bayes
from .dist import Endpoint, SnbParams, endpoint_split, moments, success_probability
from .errors import DomainError

FORMATS = ("csv", "json")


def format_cell(value: float) -> str:
    """One numeric cell: integers verbatim, floats at 17 significant digits."""
    if isinstance(value, bool):
        raise DomainError(f"table cells must be numbers, got {value!r}")
    if isinstance(value, int):
        return str(value)
    return f"{value:.17g}"


@dataclass
class OutputTable:
    """A rectangular table of numbers plus free-form metadata.

    Attributes:
        columns: Column names.
        rows: Equal-length rows of int or float cells.
        meta: Key/value annotations (seeds, totals) carried into both
            encodings.
        format: Either 'csv' or 'json'; selects what render() emits.
    """

    columns: list[str]
    rows: list[list[float]]
    meta: dict[str, str] = field(default_factory=dict)
    format: str = "csv"

    def __post_init__(self) -> None:
        if self.format not in FORMATS:
            raise DomainError(f"format must be one of {FORMATS}, got {self.format!r}")
        width = len(self.columns)
        for row in self.rows:
            if len(row) != width:
                raise DomainError(
                    f"table is not rectangular: {width} columns but a row of {len(row)} cells"
                )

    def render(self) -> str:
        return self._to_csv() if self.format == "csv" else self._to_json()

    def _to_csv(self) -> str:
        lines = [f"# {key}={value}" for key, value in self.meta.items()]
        lines.append(",".join(self.columns))
        lines.extend(",".join(format_cell(cell) for cell in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    def _to_json(self) -> str:
        # Assembled by hand so numeric cells keep the exact 17-digit form
        # instead of whatever json.dumps would choose.
        columns = json.dumps(self.columns)
        meta = json.dumps(self.meta, sort_keys=False)
        rows = ",\n    ".join(
            "[" + ", ".join(format_cell(cell) for cell in row) + "]" for row in self.rows
        )
        body = f'{{\n  "columns": {columns},\n  "meta": {meta},\n  "rows": [\n    {rows}\n  ]\n}}'
        if not self.rows:
            body = f'{{\n  "columns": {columns},\n  "meta": {meta},\n  "rows": []\n}}'
        return body + "\n"


def parse_grid(text: str) -> list[float]:
    """Parse a 'start:end:step' grid specification into its values.

    Values are rounded to 10 decimal places so grids like 0:1:0.01 land on
    the decimals a reader wrote down rather than accumulated float dust.

    Raises:
        DomainError: If the specification is malformed or the step is not
            positive or the range is empty.
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"grid must look like start:end:step, got {text!r}")
    try:
        start, end, step = (float(part) for part in parts)
    except ValueError as exc:
        raise DomainError(f"grid must be numeric start:end:step, got {text!r}") from exc
    if math.isnan(start) or math.isnan(end) or math.isnan(step):
        raise DomainError(f"grid bounds must be numbers, got {text!r}")
    if step <= 0.0:
        raise DomainError(f"grid step must be positive, got {text!r}")
    if end < start:
        raise DomainError(f"grid end must not precede start, got {text!r}")
    count = math.floor((end - start) / step + 1e-9)
    return [round(start + i * step, 10) for i in range(count + 1)]


def pmf_table(params: SnbParams) -> OutputTable:
    rows: list[list[float]] = []
    running = 0.0
    for k in range(min(params.s, params.t), params.s + params.t):
        split = endpoint_split(params, k)
        # Same accumulation order as dist.cdf, so the column is identical
        # to calling it pointwise.
        running += split.total
        rows.append([k, split.total, split.success_mass, split.failure_mass, min(running, 1.0)])
    return OutputTable(
        columns=["k", "pmf", "success_mass", "failure_mass", "cdf"],
        rows=rows,
        meta={
            "p": format_cell(params.p),
            "s": format_cell(params.s),
            "t": format_cell(params.t),
        },
    )


def moments_table(s: int, t: int, p_grid: list[float]) -> OutputTable:
    rows = []
    for p in p_grid:
        mom = moments(SnbParams(p, s, t))
        rows.append([p, mom.mean, mom.variance])
    return OutputTable(
        columns=["p", "mean", "variance"],
        rows=rows,
        meta={"s": format_cell(s), "t": format_cell(t)},
    )


def design_table(p0: float, alpha_level: float, max_n: int) -> OutputTable:
    """Designs meeting the type-I bound, cheapest expected enrollment first."""
    p0 = float(p0)
    alpha_level = float(alpha_level)
    if math.isnan(p0) or not 0.0 < p0 < 1.0:
        raise DomainError(f"p0 must lie strictly inside (0, 1), got {p0!r}")
    if math.isnan(alpha_level) or not 0.0 < alpha_level < 1.0:
        raise DomainError(f"alpha-level must lie strictly inside (0, 1), got {alpha_level!r}")
    if max_n < 1:
        raise DomainError(f"max-n must be at least 1, got {max_n}")
    rows = []
    for n in range(1, max_n + 1):
        for s in range(1, n + 1):
            params = SnbParams(p0, s, n + 1 - s)
            mass = success_probability(params)
            if mass <= alpha_level:
                rows.append([s, params.t, n, mass, moments(params).mean])
    rows.sort(key=lambda row: (row[4], row[2], row[0]))
    return OutputTable(
        columns=["s", "t", "n", "type_i_mass", "expected_enrollment"],
        rows=rows,
        meta={"p0": format_cell(p0), "alpha_level": format_cell(alpha_level)},
    )


def posterior_table(
    prior: bayes.BetaPrior, s: int, t: int, k: int, endpoint: Endpoint | None
) -> OutputTable:
    meta = {
        "alpha": format_cell(prior.alpha),
        "beta": format_cell(prior.beta),
        "s": format_cell(s),
        "t": format_cell(t),
        "k": format_cell(k),
    }
    rows = []
    if endpoint is None:
        mixture = bayes.posterior(prior, s, t, k)
        if mixture.component_success is not None:
            a, b = mixture.component_success
            rows.append([1, mixture.weight_success, a, b])
        if mixture.component_failure is not None:
            a, b = mixture.component_failure
            rows.append([0, mixture.weight_failure, a, b])
    else:
        a, b = bayes.posterior_given_endpoint(prior, s, t, k, endpoint)
        meta["endpoint"] = endpoint.value
        rows.append([1 if endpoint is Endpoint.SUCCESS else 0, 1.0, a, b])
    return OutputTable(columns=["is_success", "weight", "alpha", "beta"], rows=rows, meta=meta)


def predictive_table(prior: bayes.BetaPrior, s: int, t: int) -> OutputTable:
    rows = [
        [k, bayes.predictive_pmf(prior, s, t, k)] for k in range(min(s, t), s + t)
    ]
    return OutputTable(
        columns=["k", "predictive_pmf"],
        rows=rows,
        meta={
            "alpha": format_cell(prior.alpha),
            "beta": format_cell(prior.beta),
            "s": format_cell(s),
            "t": format_cell(t),
        },
    )
