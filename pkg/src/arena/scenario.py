"""Scenario data: exogenous macro/industry series, company setup, and rule parameters.

A scenario bundle is a directory of macro.csv, industry.csv, company.json and
rules.json (plus an optional meta.json carrying id, horizon and per-month
regime labels). Scenarios are immutable after load and safe to share across
concurrently running episodes.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, asdict
from pathlib import Path

from .errors import InvariantViolation, MissingSeries, OutOfRange, SchemaError
from .money import Cents

MACRO_COLUMNS = (
    "month_index", "gdp_growth", "cpi", "unemployment", "fed_funds", "sofr",
    "tsy2y", "tsy5y", "tsy10y", "tsy30y", "baa_oas", "vix", "pe_ratio", "ps_ratio",
)
INDUSTRY_COLUMNS = ("month_index", "user_growth", "gross_margin", "ebitda_margin")

REGIMES = ("expansion", "neutral", "recession")

_MONTH_NAMES = ("Jan", "Feb", "Mar", "Apr", "May", "Jun",
                "Jul", "Aug", "Sep", "Oct", "Nov", "Dec")


@dataclass(frozen=True)
class MacroSnapshot:
    month_index: int
    gdp_growth: float
    cpi: float
    unemployment: float
    fed_funds: float
    sofr: float
    tsy2y: float
    tsy5y: float
    tsy10y: float
    tsy30y: float
    baa_oas: float
    vix: float
    pe_ratio: float
    ps_ratio: float


@dataclass(frozen=True)
class IndustrySnapshot:
    month_index: int
    user_growth: float
    gross_margin: float
    ebitda_margin: float


@dataclass(frozen=True)
class NoiseSpec:
    """Additive Gaussian noise parameters for one operational indicator."""

    sigma: float
    clip_min: float | None = None
    clip_max: float | None = None
    anchored: bool = False
    anchor_value: float | None = None


@dataclass(frozen=True)
class ProbMap:
    """Piecewise-linear map from a driver signal to a probability.

    Knots are (x, p) pairs sorted by x; the map is flat beyond the end knots
    and the output is clamped to [0, 1].
    """

    knots: tuple[tuple[float, float], ...]

    def value(self, x: float) -> float:
        knots = self.knots
        if x <= knots[0][0]:
            p = knots[0][1]
        elif x >= knots[-1][0]:
            p = knots[-1][1]
        else:
            p = knots[-1][1]
            for (x0, p0), (x1, p1) in zip(knots, knots[1:]):
                if x0 <= x <= x1:
                    w = 0.0 if x1 == x0 else (x - x0) / (x1 - x0)
                    p = p0 + w * (p1 - p0)
                    break
        return min(1.0, max(0.0, p))


@dataclass(frozen=True)
class UnitEconomics:
    monthly_yield: float        # fraction of the loan book accrued as revenue per month
    opex_floor: Cents           # fixed operating spend per month
    receivable_lag: int = 1     # months between accrual and collection


@dataclass(frozen=True)
class DebtTerms:
    maturity_months: int = 36
    repayment: str = "bullet"


@dataclass(frozen=True)
class EquityPricing:
    min_share_price: Cents = 100


@dataclass(frozen=True)
class Valuation:
    multiple: int = 5
    tool_penalty: Cents = 500_000   # per successful tool call, at terminal scoring


@dataclass(frozen=True)
class RuleConfig:
    noise_specs: dict[str, NoiseSpec]
    prob_maps: dict[str, ProbMap]
    unit_economics: UnitEconomics
    debt_terms: DebtTerms
    equity_pricing: EquityPricing
    valuation: Valuation
    tool_budget: int = 20
    fill_range: tuple[float, float] = (0.70, 1.00)
    delay_range: tuple[int, int] = (1, 6)
    coupling: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class CompanyConfig:
    initial_cash: Cents
    initial_borrowers: int
    avg_loan_size: Cents
    initial_debt: Cents
    shares_outstanding: int
    initial_share_price: Cents
    board_materials: dict[str, str] = field(default_factory=dict)
    vendor_contracts: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Scenario:
    id: str
    horizon: int
    macro_series: tuple[MacroSnapshot, ...]
    industry_series: tuple[IndustrySnapshot, ...]
    initial_company: CompanyConfig
    rules: RuleConfig
    regime_labels: tuple[str, ...]


@dataclass(frozen=True)
class EpochConfig:
    """Masked-calendar settings: where month 0 falls and how far labels may go."""

    horizon: int
    start_month: int = 0    # calendar month of month_index 0; 0 = January


def anonymize_label(month_index: int, epoch: EpochConfig) -> str:
    """Masked calendar label for a month index, e.g. 0 -> "Jan 2xx0".

    The year token is "2xx" plus the number of whole years elapsed, so the
    label advances one masked step every 12 months and never contains a real
    calendar year.
    """
    if not 0 <= month_index < epoch.horizon:
        raise OutOfRange(f"month {month_index} outside horizon {epoch.horizon}")
    absolute = epoch.start_month + month_index
    return f"{_MONTH_NAMES[absolute % 12]} 2xx{absolute // 12}"


def validate_scenario(scenario: Scenario) -> list[str]:
    """Every invariant violation with its path; empty iff the scenario is usable."""
    problems: list[str] = []
    t = scenario.horizon

    if t <= 0:
        problems.append(f"horizon: must be positive, got {t}")
    if len(scenario.macro_series) != t:
        problems.append(f"macro_series: expected {t} months, got {len(scenario.macro_series)}")
    if len(scenario.industry_series) != t:
        problems.append(f"industry_series: expected {t} months, got {len(scenario.industry_series)}")
    if len(scenario.regime_labels) != t:
        problems.append(f"regime_labels: expected {t} entries, got {len(scenario.regime_labels)}")
    for i, label in enumerate(scenario.regime_labels):
        if label not in REGIMES:
            problems.append(f"regime_labels[{i}]: unknown regime {label!r}")

    for i, snap in enumerate(scenario.macro_series):
        if snap.month_index != i:
            problems.append(f"macro_series[{i}].month_index: expected {i}, got {snap.month_index}")
        for name in MACRO_COLUMNS[1:]:
            value = getattr(snap, name)
            if not _finite(value):
                problems.append(f"macro_series[{i}].{name}: not finite")
        if snap.vix <= 0:
            problems.append(f"macro_series[{i}].vix: must be > 0, got {snap.vix}")
        if snap.pe_ratio <= 0:
            problems.append(f"macro_series[{i}].pe_ratio: must be > 0, got {snap.pe_ratio}")
        if snap.ps_ratio <= 0:
            problems.append(f"macro_series[{i}].ps_ratio: must be > 0, got {snap.ps_ratio}")

    for i, snap in enumerate(scenario.industry_series):
        if snap.month_index != i:
            problems.append(f"industry_series[{i}].month_index: expected {i}, got {snap.month_index}")
        for name in ("gross_margin", "ebitda_margin"):
            value = getattr(snap, name)
            if not -100.0 <= value <= 100.0:
                problems.append(f"industry_series[{i}].{name}: outside [-100, 100], got {value}")

    company = scenario.initial_company
    if company.initial_cash < 0:
        problems.append(f"company.initial_cash: must be >= 0, got {company.initial_cash}")
    if company.shares_outstanding <= 0:
        problems.append(f"company.shares_outstanding: must be > 0, got {company.shares_outstanding}")
    if company.initial_borrowers < 0:
        problems.append(f"company.initial_borrowers: must be >= 0, got {company.initial_borrowers}")
    if company.avg_loan_size < 0:
        problems.append(f"company.avg_loan_size: must be >= 0, got {company.avg_loan_size}")
    if company.initial_debt < 0:
        problems.append(f"company.initial_debt: must be >= 0, got {company.initial_debt}")

    rules = scenario.rules
    for name, spec in rules.noise_specs.items():
        if spec.sigma < 0:
            problems.append(f"rules.noise_specs.{name}.sigma: must be >= 0, got {spec.sigma}")
        if spec.clip_min is not None and spec.clip_max is not None and not spec.clip_min < spec.clip_max:
            problems.append(f"rules.noise_specs.{name}: clip_min must be < clip_max")
        if spec.anchored and spec.anchor_value is None:
            problems.append(f"rules.noise_specs.{name}: anchored without anchor_value")
    for name, prob_map in rules.prob_maps.items():
        if not prob_map.knots:
            problems.append(f"rules.prob_maps.{name}: no knots")
            continue
        xs = [x for x, _ in prob_map.knots]
        if xs != sorted(xs):
            problems.append(f"rules.prob_maps.{name}: knots not sorted by driver value")
        for x, p in prob_map.knots:
            if not 0.0 <= p <= 1.0:
                problems.append(f"rules.prob_maps.{name}: output {p} outside [0, 1]")
    lo, hi = rules.fill_range
    if not (0.0 < lo <= hi <= 1.0):
        problems.append(f"rules.fill_range: {rules.fill_range} not within (0, 1]")
    dlo, dhi = rules.delay_range
    if not (isinstance(dlo, int) and isinstance(dhi, int) and 1 <= dlo <= dhi):
        problems.append(f"rules.delay_range: {rules.delay_range} must be integer months >= 1")
    if rules.tool_budget < 0:
        problems.append(f"rules.tool_budget: must be >= 0, got {rules.tool_budget}")
    if rules.unit_economics.monthly_yield < 0:
        problems.append("rules.unit_economics.monthly_yield: must be >= 0")
    if rules.unit_economics.receivable_lag < 1:
        problems.append("rules.unit_economics.receivable_lag: must be >= 1")
    if rules.debt_terms.maturity_months < 1:
        problems.append("rules.debt_terms.maturity_months: must be >= 1")
    if rules.valuation.multiple <= 0:
        problems.append("rules.valuation.multiple: must be > 0")

    return problems


# ---------------------------------------------------------------------------
# Bundle I/O
# ---------------------------------------------------------------------------

def _finite(x: float) -> bool:
    return x == x and x not in (float("inf"), float("-inf"))


def _read_csv(path: Path, columns: tuple[str, ...]) -> list[dict[str, float]]:
    if not path.exists():
        raise SchemaError(f"{path.name}: file missing from bundle")
    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path.name}: empty file") from None
        if tuple(header) != columns:
            raise SchemaError(f"{path.name}: header {header} != expected {list(columns)}")
        rows = []
        for line_no, raw in enumerate(reader, start=2):
            if len(raw) != len(columns):
                raise SchemaError(f"{path.name}:{line_no}: expected {len(columns)} fields, got {len(raw)}")
            row: dict[str, float] = {}
            for name, text in zip(columns, raw):
                try:
                    row[name] = int(text) if name == "month_index" else float(text)
                except ValueError:
                    raise SchemaError(f"{path.name}:{line_no}: non-numeric {name}={text!r}") from None
            rows.append(row)
    return rows


def _check_dense(rows: list[dict[str, float]], filename: str) -> None:
    seen = sorted(int(r["month_index"]) for r in rows)
    if not rows:
        raise MissingSeries(f"{filename}: no rows")
    expected = list(range(len(rows)))
    if seen != expected:
        gaps = sorted(set(expected) - set(seen))
        if gaps:
            raise MissingSeries(f"{filename}: missing month(s) {gaps[:5]}")
        raise MissingSeries(f"{filename}: month indices {seen[:5]}... are not 0..{len(rows) - 1}")


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise SchemaError(f"{context}: missing key {key!r}")
    return mapping[key]


def _company_from_json(data: dict) -> CompanyConfig:
    return CompanyConfig(
        initial_cash=int(_require(data, "initial_cash", "company.json")),
        initial_borrowers=int(_require(data, "initial_borrowers", "company.json")),
        avg_loan_size=int(_require(data, "avg_loan_size", "company.json")),
        initial_debt=int(_require(data, "initial_debt", "company.json")),
        shares_outstanding=int(_require(data, "shares_outstanding", "company.json")),
        initial_share_price=int(_require(data, "initial_share_price", "company.json")),
        board_materials=dict(data.get("board_materials", {})),
        vendor_contracts=dict(data.get("vendor_contracts", {})),
    )


def _rules_from_json(data: dict) -> RuleConfig:
    noise_specs = {}
    for name, spec in _require(data, "noise_specs", "rules.json").items():
        noise_specs[name] = NoiseSpec(
            sigma=float(_require(spec, "sigma", f"rules.json noise_specs.{name}")),
            clip_min=None if spec.get("clip_min") is None else float(spec["clip_min"]),
            clip_max=None if spec.get("clip_max") is None else float(spec["clip_max"]),
            anchored=bool(spec.get("anchored", False)),
            anchor_value=None if spec.get("anchor_value") is None else float(spec["anchor_value"]),
        )
    prob_maps = {}
    for name, knots in _require(data, "prob_maps", "rules.json").items():
        prob_maps[name] = ProbMap(knots=tuple((float(x), float(p)) for x, p in knots))
    economics = _require(data, "unit_economics", "rules.json")
    debt = _require(data, "debt_terms", "rules.json")
    pricing = _require(data, "equity_pricing", "rules.json")
    valuation = _require(data, "valuation", "rules.json")
    fill = _require(data, "fill_range", "rules.json")
    delay = _require(data, "delay_range", "rules.json")
    return RuleConfig(
        noise_specs=noise_specs,
        prob_maps=prob_maps,
        unit_economics=UnitEconomics(
            monthly_yield=float(_require(economics, "monthly_yield", "rules.json unit_economics")),
            opex_floor=int(_require(economics, "opex_floor", "rules.json unit_economics")),
            receivable_lag=int(economics.get("receivable_lag", 1)),
        ),
        debt_terms=DebtTerms(
            maturity_months=int(_require(debt, "maturity_months", "rules.json debt_terms")),
            repayment=str(debt.get("repayment", "bullet")),
        ),
        equity_pricing=EquityPricing(min_share_price=int(_require(pricing, "min_share_price", "rules.json equity_pricing"))),
        valuation=Valuation(
            multiple=int(_require(valuation, "multiple", "rules.json valuation")),
            tool_penalty=int(_require(valuation, "tool_penalty", "rules.json valuation")),
        ),
        tool_budget=int(_require(data, "tool_budget", "rules.json")),
        fill_range=(float(fill[0]), float(fill[1])),
        delay_range=(int(delay[0]), int(delay[1])),
        coupling={k: float(v) for k, v in data.get("coupling", {}).items()},
    )


def _rules_to_json(rules: RuleConfig) -> dict:
    data = asdict(rules)
    data["prob_maps"] = {name: [list(knot) for knot in pm.knots] for name, pm in rules.prob_maps.items()}
    data["fill_range"] = list(rules.fill_range)
    data["delay_range"] = list(rules.delay_range)
    return data


def load_scenario(path: str | Path) -> Scenario:
    """Load and fully validate a scenario bundle directory."""
    root = Path(path)
    if not root.is_dir():
        raise SchemaError(f"{root}: not a directory")

    macro_rows = _read_csv(root / "macro.csv", MACRO_COLUMNS)
    industry_rows = _read_csv(root / "industry.csv", INDUSTRY_COLUMNS)
    _check_dense(macro_rows, "macro.csv")
    _check_dense(industry_rows, "industry.csv")

    for name in ("company.json", "rules.json"):
        if not (root / name).exists():
            raise SchemaError(f"{name}: file missing from bundle")
    company = _company_from_json(json.loads((root / "company.json").read_text()))
    rules = _rules_from_json(json.loads((root / "rules.json").read_text()))

    meta_path = root / "meta.json"
    if meta_path.exists():
        meta = json.loads(meta_path.read_text())
        scenario_id = str(meta.get("id", root.name))
        horizon = int(meta.get("horizon", len(macro_rows)))
        regime_labels = tuple(meta.get("regime_labels", ["neutral"] * horizon))
    else:
        scenario_id = root.name
        horizon = len(macro_rows)
        regime_labels = tuple(["neutral"] * horizon)

    macro_rows.sort(key=lambda r: r["month_index"])
    industry_rows.sort(key=lambda r: r["month_index"])
    scenario = Scenario(
        id=scenario_id,
        horizon=horizon,
        macro_series=tuple(MacroSnapshot(month_index=int(r["month_index"]),
                                         **{k: r[k] for k in MACRO_COLUMNS[1:]})
                           for r in macro_rows),
        industry_series=tuple(IndustrySnapshot(month_index=int(r["month_index"]),
                                               **{k: r[k] for k in INDUSTRY_COLUMNS[1:]})
                              for r in industry_rows),
        initial_company=company,
        rules=rules,
        regime_labels=regime_labels,
    )
    problems = validate_scenario(scenario)
    if problems:
        raise InvariantViolation("; ".join(problems[:10]))
    return scenario


def save_scenario(scenario: Scenario, path: str | Path) -> Path:
    """Write a scenario as a bundle directory (inverse of load_scenario)."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)

    with (root / "macro.csv").open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(MACRO_COLUMNS)
        for snap in scenario.macro_series:
            writer.writerow([getattr(snap, c) for c in MACRO_COLUMNS])
    with (root / "industry.csv").open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(INDUSTRY_COLUMNS)
        for snap in scenario.industry_series:
            writer.writerow([getattr(snap, c) for c in INDUSTRY_COLUMNS])

    (root / "company.json").write_text(json.dumps(asdict(scenario.initial_company), indent=2, sort_keys=True) + "\n")
    (root / "rules.json").write_text(json.dumps(_rules_to_json(scenario.rules), indent=2, sort_keys=True) + "\n")
    (root / "meta.json").write_text(json.dumps(
        {"id": scenario.id, "horizon": scenario.horizon, "regime_labels": list(scenario.regime_labels)},
        indent=2, sort_keys=True) + "\n")
    return root
