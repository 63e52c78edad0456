/** Referee inbox: assignments with manuscript download and review upload. */

import type { ApiClient } from './api.js';
import { attr, escapeHtml } from './dom.js';
import { formatMath } from './math.js';
import type { InboxRow } from './types.js';

export async function loadInbox(client: ApiClient): Promise<InboxRow[]> {
  const body = await client.assigned();
  return body.assignments;
}

export function renderInbox(client: ApiClient, rows: InboxRow[]): string {
  if (!rows.length) {
    return '<section class="inbox"><h2>Referee inbox</h2><p class="empty">No assignments.</p></section>';
  }
  const items = rows.map((row) => renderRow(client, row)).join('\n');
  return `<section class="inbox"><h2>Referee inbox</h2>${items}</section>`;
}

function renderRow(client: ApiClient, row: InboxRow): string {
  const a = row.assignment;
  const m = row.manuscript;
  const title = m ? formatMath(m.title) : escapeHtml(a.manuscript_id);
  const downloads = (m?.files ?? [])
    .filter((d) => d.role === 'source_latex' || d.role === 'source_pdf')
    .map(
      (d) =>
        `<a href="${attr(client.documentUrl(a.manuscript_id, d.content_hash))}" download="${attr(d.filename)}">${escapeHtml(d.filename)}</a>`,
    )
    .join(' ');
  let actions = '';
  if (a.status === 'invited') {
    actions = `<button data-action="inbox-accept" data-ms="${attr(a.manuscript_id)}">Accept</button>
      <button data-action="inbox-decline" data-ms="${attr(a.manuscript_id)}">Decline</button>`;
  } else if (a.status === 'accepted') {
    actions = `<select data-role="recommendation" data-ms="${attr(a.manuscript_id)}">
        <option value="accept">accept</option>
        <option value="minor">minor revision</option>
        <option value="major">major revision</option>
        <option value="reject">reject</option>
      </select>
      <input type="file" data-role="review-file" data-ms="${attr(a.manuscript_id)}">
      <button data-action="inbox-review" data-ms="${attr(a.manuscript_id)}">Upload review</button>`;
  } else {
    actions = `<span class="status">${escapeHtml(a.status)}</span>`;
  }
  const author = m ? `<p class="meta">submitted by ${escapeHtml(m.submitted_by)}</p>` : '';
  return `<article class="assignment" data-ms="${attr(a.manuscript_id)}" data-status="${attr(a.status)}">
    <h4>${title}</h4>
    ${author}
    <div class="downloads">${downloads}</div>
    <div class="actions">${actions}</div>
  </article>`;
}
