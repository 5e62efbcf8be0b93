"""Dual accrual/cash ledgers, monthly operations posting, and statements.

Everything is integer cents so the balance-sheet identity holds to the cent.
Monthly postings follow a fixed order: settlement arrivals, revenue accrual,
collection of aged receivables (uncollected remainder written off), cost of
goods and operating spend, interest, bullet principal repayments, borrower
update. Cash is reconstructed from the cash ledger after every post as a
corruption guard.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .dynamics import OperationalIndicators
from .errors import EpisodeOver, InvariantViolation
from .money import Cents, round_cents, round_rate_bp
from .scenario import CompanyConfig, MacroSnapshot, RuleConfig

if TYPE_CHECKING:
    from .fundraising import PendingSettlement

ENTRY_KINDS = (
    "revenue_accrual", "cash_collection", "cogs", "opex", "interest",
    "principal_repayment", "funding_inflow", "receivable_writeoff",
)
_OPERATING_CASH_KINDS = ("cash_collection", "cogs", "opex", "interest")
_FINANCING_CASH_KINDS = ("funding_inflow", "principal_repayment")


@dataclass(frozen=True)
class LedgerEntry:
    month: int
    kind: str
    amount: Cents   # inflows positive, outflows negative
    memo: str = ""


@dataclass
class DebtContract:
    principal: Cents
    annual_rate: float
    start_month: int
    maturity_month: int
    repaid: bool = False

    def accrues_interest(self, month: int) -> bool:
        # First coupon one month after settlement, last at maturity.
        return not self.repaid and self.start_month < month <= self.maturity_month


@dataclass
class EquityRound:
    month: int
    shares_issued: int
    price_per_share: Cents
    amount: Cents


@dataclass
class CapTable:
    shares_outstanding: int
    rounds: list[EquityRound] = field(default_factory=list)


@dataclass(frozen=True)
class IncomeRow:
    month: int
    revenue: Cents
    cogs: Cents
    gross_profit: Cents
    opex: Cents
    ebitda: Cents
    interest_expense: Cents
    net_income: Cents


@dataclass(frozen=True)
class CashFlowRow:
    month: int
    operating: Cents
    financing: Cents
    net_change: Cents


@dataclass(frozen=True)
class BalanceSheet:
    cash: Cents
    receivables: Cents
    total_assets: Cents
    debt: Cents
    equity: Cents
    retained_earnings: Cents


@dataclass(frozen=True)
class FinancialStatements:
    as_of_month: int
    income_statement: tuple[IncomeRow, ...]
    balance_sheet: BalanceSheet
    cash_flow: tuple[CashFlowRow, ...]


@dataclass
class EnterpriseState:
    month: int
    cash: Cents
    initial_cash: Cents
    initial_book_equity: Cents
    active_borrowers: int
    avg_loan_size: Cents
    indicators: OperationalIndicators
    accrual_ledger: list[LedgerEntry] = field(default_factory=list)
    cash_ledger: list[LedgerEntry] = field(default_factory=list)
    receivables: Cents = 0
    receivable_queue: list[tuple[int, Cents]] = field(default_factory=list)  # (month accrued, amount)
    monthly_revenue: dict[int, Cents] = field(default_factory=dict)
    debt_contracts: list[DebtContract] = field(default_factory=list)
    pending_settlements: list["PendingSettlement"] = field(default_factory=list)
    cap_table: CapTable = field(default_factory=lambda: CapTable(shares_outstanding=1))
    contributed_capital: Cents = 0
    last_close_month: int | None = None
    successful_equity_rounds: int = 0
    tool_calls_total: int = 0
    alive: bool = True
    posted_through: int = -1


def new_enterprise_state(
    company: CompanyConfig,
    rules: RuleConfig,
    indicators: OperationalIndicators,
    month_zero_macro: MacroSnapshot,
) -> EnterpriseState:
    state = EnterpriseState(
        month=0,
        cash=company.initial_cash,
        initial_cash=company.initial_cash,
        initial_book_equity=company.initial_cash - company.initial_debt,
        active_borrowers=company.initial_borrowers,
        avg_loan_size=company.avg_loan_size,
        indicators=indicators,
        cap_table=CapTable(shares_outstanding=company.shares_outstanding),
        contributed_capital=company.initial_cash - company.initial_debt,
    )
    if company.initial_debt > 0:
        # Config carries no rate; price pre-existing debt at the month-0 base lending rate.
        rate = round_rate_bp((month_zero_macro.tsy2y + month_zero_macro.baa_oas) / 100.0)
        state.debt_contracts.append(DebtContract(
            principal=company.initial_debt,
            annual_rate=rate,
            start_month=0,
            maturity_month=rules.debt_terms.maturity_months,
        ))
    return state


def book_debt(state: EnterpriseState) -> Cents:
    return sum(c.principal for c in state.debt_contracts if not c.repaid)


def book_equity(state: EnterpriseState) -> Cents:
    return state.cash + state.receivables - book_debt(state)


def leverage(state: EnterpriseState) -> float:
    """Book debt over book equity; +inf when equity is non-positive."""
    equity = book_equity(state)
    if equity <= 0:
        return math.inf
    return book_debt(state) / equity


def ttm_revenue(state: EnterpriseState, as_of: int | None = None) -> Cents:
    """Trailing-twelve-month accrued revenue through `as_of` (default: current month)."""
    t = state.month if as_of is None else as_of
    return sum(state.monthly_revenue.get(m, 0) for m in range(max(0, t - 11), t + 1))


def _post_accrual(state: EnterpriseState, kind: str, amount: Cents, memo: str = "") -> None:
    state.accrual_ledger.append(LedgerEntry(state.month, kind, amount, memo))


def _post_cash(state: EnterpriseState, kind: str, amount: Cents, memo: str = "") -> None:
    state.cash_ledger.append(LedgerEntry(state.month, kind, amount, memo))
    state.cash += amount


def apply_settlement(state: EnterpriseState, settlement: "PendingSettlement",
                     macro: MacroSnapshot, rules: RuleConfig) -> None:
    """Post an arrived raise: cash in, then the instrument's lasting effects.

    Debt: a contract priced off this month's macro and pre-inflow leverage.
    Equity: shares issued at max(floor, P/S * trailing revenue per share).
    """
    from .fundraising import contract_rate  # runtime import, fundraising imports this module

    t = state.month
    amount = settlement.amount_actual
    if settlement.instrument == "debt":
        rate = contract_rate(macro, leverage(state))
        _post_cash(state, "funding_inflow", amount,
                   f"debt settlement (requested month {settlement.origin_request_month})")
        state.debt_contracts.append(DebtContract(
            principal=amount,
            annual_rate=rate,
            start_month=t,
            maturity_month=t + rules.debt_terms.maturity_months,
        ))
    else:
        _post_cash(state, "funding_inflow", amount,
                   f"equity settlement (requested month {settlement.origin_request_month})")
        price = max(rules.equity_pricing.min_share_price,
                    round_cents(macro.ps_ratio * ttm_revenue(state) / state.cap_table.shares_outstanding))
        shares = round_cents(amount / price)
        state.cap_table.rounds.append(EquityRound(month=t, shares_issued=shares,
                                                  price_per_share=price, amount=amount))
        state.cap_table.shares_outstanding += shares
        state.contributed_capital += amount


def post_month_operations(state: EnterpriseState, indicators: OperationalIndicators,
                          macro: MacroSnapshot, rules: RuleConfig) -> None:
    """Post one month of lending operations in the fixed order. Exactly once per month."""
    if not state.alive:
        raise EpisodeOver("cannot post operations after the episode ended")
    t = state.month
    if state.posted_through >= t:
        raise InvariantViolation(f"month {t} already posted")
    state.indicators = indicators

    # 1. Settlement arrivals due this month, in request order.
    for settlement in [s for s in state.pending_settlements if s.due_month == t]:
        apply_settlement(state, settlement, macro, rules)
    state.pending_settlements = [s for s in state.pending_settlements if s.due_month != t]

    # 2. Revenue accrual on the loan book.
    revenue = round_cents(state.active_borrowers * state.avg_loan_size * rules.unit_economics.monthly_yield)
    state.monthly_revenue[t] = revenue
    if revenue:
        _post_accrual(state, "revenue_accrual", revenue, "monthly loan yield")
        state.receivable_queue.append((t, revenue))
        state.receivables += revenue

    # 3. Collect receivables aged past the lag; write off the shortfall now.
    lag = rules.unit_economics.receivable_lag
    while state.receivable_queue and t - state.receivable_queue[0][0] >= lag:
        accrued_month, amount = state.receivable_queue.pop(0)
        collected = round_cents(amount * indicators.collection_rate)
        _post_cash(state, "cash_collection", collected, f"receivables from month {accrued_month}")
        _post_accrual(state, "receivable_writeoff", -(amount - collected),
                      f"uncollected from month {accrued_month}")
        state.receivables -= amount

    # 4. Cost of goods and operating spend, paid in cash as incurred.
    gm = indicators.gross_margin
    em = min(indicators.ebitda_margin, gm)  # margins walk independently and can cross
    cogs = round_cents(revenue * (1.0 - gm / 100.0))
    opex = round_cents(revenue * (gm - em) / 100.0) + rules.unit_economics.opex_floor
    if cogs:
        _post_accrual(state, "cogs", -cogs)
        _post_cash(state, "cogs", -cogs)
    if opex:
        _post_accrual(state, "opex", -opex)
        _post_cash(state, "opex", -opex)

    # 5. Interest on live contracts.
    for contract in state.debt_contracts:
        if contract.accrues_interest(t):
            interest = round_cents(contract.principal * contract.annual_rate / 12.0)
            if interest:
                _post_accrual(state, "interest", -interest)
                _post_cash(state, "interest", -interest)

    # 6. Bullet repayment for contracts maturing this month.
    for contract in state.debt_contracts:
        if not contract.repaid and contract.maturity_month == t:
            _post_cash(state, "principal_repayment", -contract.principal)
            contract.repaid = True

    # 7. Borrower base update.
    state.active_borrowers = max(0, round_cents(state.active_borrowers * (1.0 + indicators.user_growth / 100.0)))

    state.posted_through = t
    state.alive = state.cash >= 0
    _check_cash_reconstruction(state)


def _check_cash_reconstruction(state: EnterpriseState) -> None:
    rebuilt = state.initial_cash + sum(e.amount for e in state.cash_ledger)
    if rebuilt != state.cash:
        raise InvariantViolation(f"cash {state.cash} != ledger reconstruction {rebuilt}")


def statements_through(state: EnterpriseState, month: int) -> FinancialStatements:
    """Three statements from the ledgers through `month` inclusive (pure)."""
    last_row = min(month, state.posted_through)

    accrual_by_month: dict[int, dict[str, Cents]] = {}
    for entry in state.accrual_ledger:
        if entry.month <= last_row:
            bucket = accrual_by_month.setdefault(entry.month, {})
            bucket[entry.kind] = bucket.get(entry.kind, 0) + entry.amount
    cash_by_month: dict[int, dict[str, Cents]] = {}
    for entry in state.cash_ledger:
        if entry.month <= month:
            bucket = cash_by_month.setdefault(entry.month, {})
            bucket[entry.kind] = bucket.get(entry.kind, 0) + entry.amount

    income_rows = []
    for m in range(0, last_row + 1):
        bucket = accrual_by_month.get(m, {})
        revenue = bucket.get("revenue_accrual", 0)
        cogs = -bucket.get("cogs", 0)
        # Write-offs are bad-debt operating expense; statement rows carry no separate line.
        opex = -bucket.get("opex", 0) - bucket.get("receivable_writeoff", 0)
        interest = -bucket.get("interest", 0)
        gross = revenue - cogs
        ebitda = gross - opex
        income_rows.append(IncomeRow(month=m, revenue=revenue, cogs=cogs, gross_profit=gross,
                                     opex=opex, ebitda=ebitda, interest_expense=interest,
                                     net_income=ebitda - interest))

    cash_rows = []
    for m in range(0, last_row + 1):
        bucket = cash_by_month.get(m, {})
        operating = sum(bucket.get(kind, 0) for kind in _OPERATING_CASH_KINDS)
        financing = sum(bucket.get(kind, 0) for kind in _FINANCING_CASH_KINDS)
        cash_rows.append(CashFlowRow(month=m, operating=operating, financing=financing,
                                     net_change=operating + financing))

    cash = state.initial_cash + sum(b for m in cash_by_month.values() for b in m.values())
    receivables = sum(
        bucket.get("revenue_accrual", 0) + bucket.get("receivable_writeoff", 0)
        for bucket in accrual_by_month.values()
    ) - sum(bucket.get("cash_collection", 0) for bucket in cash_by_month.values())
    debt = sum(c.principal for c in state.debt_contracts
               if c.start_month <= month < c.maturity_month)
    retained = sum(b for bucket in accrual_by_month.values() for b in bucket.values())
    contributed = state.initial_book_equity + sum(
        r.amount for r in state.cap_table.rounds if r.month <= month)
    equity = contributed + retained
    total_assets = cash + receivables
    if total_assets != debt + equity:
        raise InvariantViolation(
            f"balance sheet broken at month {month}: assets {total_assets} != debt {debt} + equity {equity}")

    return FinancialStatements(
        as_of_month=month,
        income_statement=tuple(income_rows),
        balance_sheet=BalanceSheet(cash=cash, receivables=receivables, total_assets=total_assets,
                                   debt=debt, equity=equity, retained_earnings=retained),
        cash_flow=tuple(cash_rows),
    )


def close_books(state: EnterpriseState) -> FinancialStatements:
    """Reconcile: consolidate the ledgers into authoritative statements."""
    if not state.alive:
        raise EpisodeOver("cannot close books after the episode ended")
    statements = statements_through(state, state.month)
    state.last_close_month = state.month
    return statements


def statements_to_dict(statements: FinancialStatements) -> dict:
    return {
        "as_of_month": statements.as_of_month,
        "income_statement": [
            {"month": r.month, "revenue": r.revenue, "cogs": r.cogs, "gross_profit": r.gross_profit,
             "opex": r.opex, "ebitda": r.ebitda, "interest_expense": r.interest_expense,
             "net_income": r.net_income}
            for r in statements.income_statement
        ],
        "balance_sheet": {
            "cash": statements.balance_sheet.cash,
            "receivables": statements.balance_sheet.receivables,
            "total_assets": statements.balance_sheet.total_assets,
            "debt": statements.balance_sheet.debt,
            "equity": statements.balance_sheet.equity,
            "retained_earnings": statements.balance_sheet.retained_earnings,
        },
        "cash_flow": [
            {"month": r.month, "operating": r.operating, "financing": r.financing,
             "net_change": r.net_change}
            for r in statements.cash_flow
        ],
    }


def raw_events(state: EnterpriseState, since_month: int) -> list[dict]:
    """Uncategorized event view for months > since_month: accrual then cash per month."""
    events = []
    for m in range(max(0, since_month + 1), state.posted_through + 1):
        for ledger in (state.accrual_ledger, state.cash_ledger):
            for entry in ledger:
                if entry.month == m:
                    events.append({"month": m, "amount": entry.amount, "memo": entry.memo})
    return events


def unreconciled_count(state: EnterpriseState) -> int:
    since = state.last_close_month if state.last_close_month is not None else -1
    return sum(1 for ledger in (state.accrual_ledger, state.cash_ledger)
               for entry in ledger if entry.month > since)


def export_ledger_csv(state: EnterpriseState) -> str:
    """Both ledgers as audit CSV: ledger,month,kind,amount,memo."""
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["ledger", "month", "kind", "amount", "memo"])
    for name, ledger in (("accrual", state.accrual_ledger), ("cash", state.cash_ledger)):
        for entry in ledger:
            writer.writerow([name, entry.month, entry.kind, entry.amount, entry.memo])
    return buffer.getvalue()
