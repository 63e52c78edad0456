/** Small HTML string helpers; components render to strings, the entry point
 * swaps innerHTML and delegates events. */

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;');
}

export function attr(value: string): string {
  return escapeHtml(value);
}
