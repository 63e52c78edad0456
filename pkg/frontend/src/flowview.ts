/** Paper-flow view: renders exactly what the server returned for this
 * session; referee anonymization happens server-side and the client never
 * holds an unredacted payload for author sessions. */

import type { ApiClient } from './api.js';
import { attr, escapeHtml } from './dom.js';
import { formatMath } from './math.js';
import type { FlowView } from './types.js';

export function renderFlow(client: ApiClient, view: FlowView): string {
  const m = view.manuscript;
  const records = view.records
    .map((record) => {
      const docs = record.documents
        .map(
          (d) =>
            `<a href="${attr(client.documentUrl(m.manuscript_id, d.content_hash))}" download="${attr(d.filename)}">${escapeHtml(d.filename)}</a> <span class="uploader">(${escapeHtml(d.uploaded_by)})</span>`,
        )
        .join(', ');
      const arrow =
        record.from_stage === record.to_stage
          ? escapeHtml(record.to_stage)
          : `${escapeHtml(record.from_stage)} &rarr; ${escapeHtml(record.to_stage)}`;
      return `<li class="record">
        <span class="when">${escapeHtml(record.timestamp)}</span>
        <span class="stages">${arrow}</span>
        <span class="actor">${escapeHtml(record.actor_user)} [${escapeHtml(record.actor_role)}]</span>
        ${record.note ? `<span class="note">${escapeHtml(record.note)}</span>` : ''}
        ${docs ? `<span class="docs">${docs}</span>` : ''}
      </li>`;
    })
    .join('\n');
  return `<section class="flow" data-ms="${attr(m.manuscript_id)}" data-viewer-role="${attr(view.viewer_role)}">
    <h2>${formatMath(m.title)}</h2>
    <p class="meta">${escapeHtml(m.manuscript_id)} · ${escapeHtml(m.journal_id)} · stage <b>${escapeHtml(m.current_stage)}</b></p>
    ${m.abstract ? `<p class="abstract">${formatMath(m.abstract)}</p>` : ''}
    <ol class="records">${records}</ol>
  </section>`;
}
