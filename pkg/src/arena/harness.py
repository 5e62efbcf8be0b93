"""Policy evaluation: run seeds, aggregate the results-table metrics.

Every metric is recomputable from transcripts alone; run_policy and
metrics_from_transcripts share the same per-episode extraction and the same
aggregation fold, so the two routes agree exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields
from pathlib import Path

from .engine import Episode, EpisodeConfig
from .money import to_millions
from .policies import PolicySpec, make_policy
from .scenario import Scenario


@dataclass(frozen=True)
class EpisodeStats:
    seed: int
    score: int
    survived: bool
    months_lived: int
    n_tools: int
    equity_raised: int
    debt_raised: int
    fr_attempts: int
    fr_successes: int
    pass_count: int
    close_count: int
    peak_cash: int
    end_cash: int
    low_cash: int


@dataclass(frozen=True)
class MetricsRow:
    policy: str
    seeds: int
    score_mean: float           # $M
    score_std: float
    survival_pct: float
    months_mean: float
    months_std: float
    equity_raised: float        # $M, mean per seed
    debt_raised: float
    total_raised: float
    fr_success_pct: float | None   # pooled successes / attempts
    peak_cash: float            # $M, mean per seed
    end_cash: float
    low_cash: float
    tools_per_month: float
    fr_attempt_pct: float       # share of all actions
    fr_success_share: float
    bookclose_pct: float
    pass_count: float           # mean per seed
    pass_pct: float


def episode_stats_from_records(records: list[dict]) -> EpisodeStats:
    """Extract one episode's metrics from its transcript records."""
    seed = None
    terminal = None
    n_tools = 0
    equity = debt = 0
    attempts = successes = 0
    passes = closes = 0
    cash_series: list[int] = []
    for record in records:
        kind = record["kind"]
        payload = record["payload"]
        if kind == "config":
            seed = payload["seed"]
        elif kind == "tool_call" and payload.get("ok"):
            n_tools += 1
        elif kind == "action":
            name = payload["name"]
            if name == "pass":
                passes += 1
            elif name == "book_closing":
                closes += 1
        elif kind == "env_feedback" and payload.get("action") == "fund_raising_request":
            attempts += 1
            outcome = payload["outcome"]
            if outcome["success"]:
                successes += 1
                if payload["instrument"] == "equity":
                    equity += outcome["amount_actual"]
                else:
                    debt += outcome["amount_actual"]
        elif kind == "monthly_snapshot":
            cash_series.append(payload["cash"])
        elif kind == "terminal":
            terminal = payload
    if seed is None or terminal is None:
        raise ValueError("transcript missing config or terminal record")
    if not cash_series:
        cash_series = [0]
    return EpisodeStats(
        seed=seed,
        score=terminal["score"],
        survived=terminal["survived"],
        months_lived=terminal["months_lived"],
        n_tools=n_tools,
        equity_raised=equity,
        debt_raised=debt,
        fr_attempts=attempts,
        fr_successes=successes,
        pass_count=passes,
        close_count=closes,
        peak_cash=max(cash_series),
        end_cash=cash_series[-1],
        low_cash=min(cash_series),
    )


def _mean(values: list[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def _std(values: list[float]) -> float:
    if len(values) < 2:
        return 0.0
    mu = _mean(values)
    return math.sqrt(sum((v - mu) ** 2 for v in values) / (len(values) - 1))


def aggregate(policy: str, stats: list[EpisodeStats]) -> MetricsRow:
    """Deterministic fold over seed-sorted episode stats."""
    if not stats:
        raise ValueError("no episodes to aggregate")
    stats = sorted(stats, key=lambda s: s.seed)
    scores = [to_millions(s.score) for s in stats]
    months = [float(s.months_lived) for s in stats]
    attempts = sum(s.fr_attempts for s in stats)
    successes = sum(s.fr_successes for s in stats)
    total_actions = sum(s.fr_attempts + s.pass_count + s.close_count for s in stats)
    share = (lambda n: 100.0 * n / total_actions) if total_actions else (lambda n: 0.0)
    return MetricsRow(
        policy=policy,
        seeds=len(stats),
        score_mean=_mean(scores),
        score_std=_std(scores),
        survival_pct=100.0 * sum(1 for s in stats if s.survived) / len(stats),
        months_mean=_mean(months),
        months_std=_std(months),
        equity_raised=_mean([to_millions(s.equity_raised) for s in stats]),
        debt_raised=_mean([to_millions(s.debt_raised) for s in stats]),
        total_raised=_mean([to_millions(s.equity_raised + s.debt_raised) for s in stats]),
        fr_success_pct=(100.0 * successes / attempts) if attempts else None,
        peak_cash=_mean([to_millions(s.peak_cash) for s in stats]),
        end_cash=_mean([to_millions(s.end_cash) for s in stats]),
        low_cash=_mean([to_millions(s.low_cash) for s in stats]),
        tools_per_month=_mean([s.n_tools / max(1, s.months_lived) for s in stats]),
        fr_attempt_pct=share(attempts),
        fr_success_share=share(successes),
        bookclose_pct=share(sum(s.close_count for s in stats)),
        pass_count=_mean([float(s.pass_count) for s in stats]),
        pass_pct=share(sum(s.pass_count for s in stats)),
    )


def run_policy(
    spec: PolicySpec,
    scenario: Scenario,
    seeds: list[int],
    out_dir: Path | str | None = None,
) -> tuple[MetricsRow, list[EpisodeStats]]:
    """One episode per seed; optionally writes per-seed transcripts to out_dir."""
    out_path = Path(out_dir) if out_dir is not None else None
    if out_path is not None:
        out_path.mkdir(parents=True, exist_ok=True)
    stats = []
    for seed in seeds:
        policy = make_policy(spec, seed)
        episode = Episode(EpisodeConfig(seed=seed, agent_label=spec.kind), scenario)
        outcome = episode.start()
        while "terminal" not in outcome:
            outcome = policy.play_month(episode, outcome["observation"])
        stats.append(episode_stats_from_records(episode.records))
        if out_path is not None:
            (out_path / f"{spec.kind}-seed{seed:04d}.ndjson").write_bytes(episode.transcript_bytes())
    return aggregate(spec.kind, stats), stats


def metrics_from_transcripts(paths: list[Path | str], policy: str | None = None) -> MetricsRow:
    """Recompute a MetricsRow from transcript files alone."""
    stats = []
    label = policy
    for path in paths:
        records = [json.loads(line) for line in Path(path).read_text().splitlines() if line.strip()]
        stats.append(episode_stats_from_records(records))
        if label is None and records and records[0]["kind"] == "config":
            label = records[0]["payload"]["agent_label"]
    return aggregate(label or "unknown", stats)


_TABLE_COLUMNS = [
    ("policy", "Policy", "{}"),
    ("seeds", "Seeds", "{}"),
    ("score_mean", "Score($M)", "{:.1f}"),
    ("score_std", "±", "{:.1f}"),
    ("survival_pct", "Surv.%", "{:.0f}"),
    ("months_mean", "Mon.", "{:.0f}"),
    ("months_std", "±", "{:.0f}"),
    ("equity_raised", "Eq.R($M)", "{:.1f}"),
    ("debt_raised", "Debt.R($M)", "{:.1f}"),
    ("total_raised", "Tot.R($M)", "{:.1f}"),
    ("fr_success_pct", "FR%", "{:.0f}"),
    ("peak_cash", "Pk.Cash", "{:.1f}"),
    ("end_cash", "End.Cash", "{:.1f}"),
    ("low_cash", "Low.Cash", "{:.1f}"),
    ("tools_per_month", "T/Mo", "{:.1f}"),
    ("fr_attempt_pct", "FR.A%", "{:.1f}"),
    ("fr_success_share", "FR.S%", "{:.1f}"),
    ("bookclose_pct", "BC%", "{:.1f}"),
    ("pass_count", "Pass#", "{:.0f}"),
    ("pass_pct", "Pass%", "{:.1f}"),
]


def emit_table(rows: list[MetricsRow]) -> tuple[str, str]:
    """(text table, CSV) for a list of policy rows."""
    headers = [header for _, header, _ in _TABLE_COLUMNS]
    rendered = []
    for row in rows:
        cells = []
        for name, _, fmt in _TABLE_COLUMNS:
            value = getattr(row, name)
            cells.append("--" if value is None else fmt.format(value))
        rendered.append(cells)
    widths = [max(len(headers[i]), *(len(r[i]) for r in rendered)) if rendered else len(headers[i])
              for i in range(len(headers))]
    lines = [
        "  ".join(h.rjust(w) for h, w in zip(headers, widths)),
        "  ".join("-" * w for w in widths),
    ]
    for cells in rendered:
        lines.append("  ".join(c.rjust(w) for c, w in zip(cells, widths)))
    text = "\n".join(lines) + "\n"

    field_names = [f.name for f in fields(MetricsRow)]
    csv_lines = [",".join(field_names)]
    for row in rows:
        csv_lines.append(",".join(
            "" if getattr(row, name) is None else str(getattr(row, name))
            for name in field_names))
    return text, "\n".join(csv_lines) + "\n"
