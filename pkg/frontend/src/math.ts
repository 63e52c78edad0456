/** Display-time treatment of inline TeX math: stored text stays verbatim,
 * `$...$` spans render in a math style. No TeX engine here; display only. */

import { escapeHtml } from './dom.js';

export function formatMath(text: string): string {
  const parts: string[] = [];
  let i = 0;
  while (i < text.length) {
    const open = text.indexOf('$', i);
    if (open < 0) {
      parts.push(escapeHtml(text.slice(i)));
      break;
    }
    parts.push(escapeHtml(text.slice(i, open)));
    let close = open + 1;
    while (close < text.length) {
      if (text[close] === '\\') {
        close += 2;
        continue;
      }
      if (text[close] === '$') break;
      close += 1;
    }
    if (close >= text.length) {
      parts.push(escapeHtml(text.slice(open)));
      break;
    }
    const body = text.slice(open + 1, close);
    parts.push(`<span class="math">${escapeHtml(body)}</span>`);
    i = close + 1;
  }
  return parts.join('');
}
