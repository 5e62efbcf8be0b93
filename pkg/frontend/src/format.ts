// Formatting helpers. Money is integer cents on the wire.

export function fmtMoney(cents: number): string {
  const sign = cents < 0 ? "-" : "";
  const mag = Math.abs(cents);
  const dollars = Math.floor(mag / 100).toLocaleString("en-US");
  const rem = String(mag % 100).padStart(2, "0");
  return `${sign}$${dollars}.${rem}`;
}

export function fmtMillions(cents: number): string {
  return `$${(cents / 100_000_000).toFixed(2)}M`;
}

export function fmtPct(fraction: number, digits = 1): string {
  return `${(fraction * 100).toFixed(digits)}%`;
}

export function fmtRate(fraction: number): string {
  return `${(fraction * 100).toFixed(2)}%`;
}

/** Dollars typed in a form field to integer cents; null when unparseable. */
export function parseDollars(text: string): number | null {
  const cleaned = text.replace(/[$,\s]/g, "");
  if (!cleaned || !/^-?\d+(\.\d{0,2})?$/.test(cleaned)) return null;
  return Math.round(parseFloat(cleaned) * 100);
}
