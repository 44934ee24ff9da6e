/** Display formatting. The UI never derives domain values; it only formats
 * numbers the service reported: weights and accuracies at two decimals,
 * MMAC figures with thousands separators. */

export function formatWeight(value: number): string {
  return value.toFixed(2);
}

export function formatAccuracy(value: number): string {
  return value.toFixed(2);
}

export function formatMmacs(value: number): string {
  const rounded = Math.round(value);
  const sign = rounded < 0 ? '-' : '';
  const digits = Math.abs(rounded).toString();
  let grouped = '';
  for (let i = 0; i < digits.length; i++) {
    const fromEnd = digits.length - i;
    grouped += digits[i];
    if (fromEnd > 1 && (fromEnd - 1) % 3 === 0) grouped += ',';
  }
  return sign + grouped;
}

export function formatReward(value: number): string {
  return value.toFixed(4);
}
