"""Long-horizon enterprise finance survival simulator.

A seedable monthly simulator of a cash-constrained lending company: dual
accrual/cash ledgers, exogenous macro and industry trajectories, budgeted
observation tools, three CFO actions with stochastic fundraising feedback,
hard cash-survival termination, and terminal valuation scoring. Ships with a
scripted-policy evaluation harness and an HTTP session service.
"""

from .dynamics import OperationalIndicators, external_at, perturb_indicators
from .engine import ACTIONS, Episode, EpisodeConfig, new_episode, replay, step_month
from .errors import ArenaError
from .fundraising import (
    FundraisingOutcome,
    FundraisingRequest,
    PendingSettlement,
    company_multiplier,
    contract_rate,
    indicative_rate,
    macro_probability,
    resolve_request,
)
from .harness import MetricsRow, aggregate, emit_table, metrics_from_transcripts, run_policy
from .ledger import (
    EnterpriseState,
    FinancialStatements,
    close_books,
    post_month_operations,
    ttm_revenue,
)
from .policies import PolicySpec, StewardParams
from .scenario import (
    EpochConfig,
    Scenario,
    anonymize_label,
    load_scenario,
    save_scenario,
    validate_scenario,
)
from .server import ScenarioCatalog, create_app
from .synth import default_scenario, generate_synthetic_scenario
from .tools import ToolSuite

__version__ = "0.1.0"

__all__ = [
    "ACTIONS",
    "ArenaError",
    "Episode",
    "EpisodeConfig",
    "EpochConfig",
    "EnterpriseState",
    "FinancialStatements",
    "FundraisingOutcome",
    "FundraisingRequest",
    "MetricsRow",
    "OperationalIndicators",
    "PendingSettlement",
    "PolicySpec",
    "Scenario",
    "ScenarioCatalog",
    "StewardParams",
    "ToolSuite",
    "aggregate",
    "anonymize_label",
    "close_books",
    "company_multiplier",
    "contract_rate",
    "create_app",
    "default_scenario",
    "emit_table",
    "external_at",
    "generate_synthetic_scenario",
    "indicative_rate",
    "load_scenario",
    "macro_probability",
    "metrics_from_transcripts",
    "new_episode",
    "perturb_indicators",
    "post_month_operations",
    "replay",
    "resolve_request",
    "run_policy",
    "save_scenario",
    "step_month",
    "ttm_revenue",
    "validate_scenario",
]
