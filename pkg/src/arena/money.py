"""Money is 64-bit integer cents everywhere; ledger identities must hold exactly."""

from __future__ import annotations

import math

Cents = int

CENTS_PER_DOLLAR = 100
CENTS_PER_MILLION = 100_000_000


def round_cents(x: float) -> Cents:
    """Nearest cent, half away from zero. Plain round() is banker's rounding."""
    if x >= 0:
        return int(math.floor(x + 0.5))
    return -int(math.floor(-x + 0.5))


def dollars(amount: float | int) -> Cents:
    return round_cents(amount * CENTS_PER_DOLLAR)


def millions(amount: float | int) -> Cents:
    return round_cents(amount * CENTS_PER_MILLION)


def to_millions(cents: Cents) -> float:
    return cents / CENTS_PER_MILLION


def fmt_money(cents: Cents) -> str:
    """"$15,000,000.00" style, sign in front."""
    sign = "-" if cents < 0 else ""
    mag = abs(cents)
    return f"{sign}${mag // 100:,}.{mag % 100:02d}"


def round_rate_bp(rate: float) -> float:
    """Round an annual rate (fraction) to basis-point precision."""
    return round_cents(rate * 10_000) / 10_000.0
