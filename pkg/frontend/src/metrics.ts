/** Journal metrics view.
 *
 * Every number shown is the API payload string, byte for byte; the client
 * never reformats or re-rounds values.
 */

import type { ApiClient } from './api.js';
import { attr, escapeHtml } from './dom.js';
import type { ComparisonReport, ImpactFactor } from './types.js';

export interface MetricsData {
  journalId: string;
  year: number;
  horizon: number;
  impacts: ImpactFactor[];
  report: ComparisonReport;
}

export async function loadMetrics(
  client: ApiClient,
  journalId: string,
  year: number,
  horizon: number,
  peers: string[] = [],
): Promise<MetricsData> {
  const [integral, restricted, report] = await Promise.all([
    client.impactFactor(journalId, year, horizon, 'integral'),
    client.impactFactor(journalId, year, horizon, 'restricted'),
    client.report(journalId, year, horizon, peers),
  ]);
  return { journalId, year, horizon, impacts: [integral, restricted], report };
}

export function renderMetrics(data: MetricsData): string {
  if (!data.report.rows.length && !data.impacts.some((i) => i.citations || i.defined)) {
    return '<section class="metrics"><p class="empty">no data</p></section>';
  }
  const impactRows = data.impacts
    .map(
      (impact) => `<tr data-mode="${attr(impact.mode)}">
        <td>${escapeHtml(impact.mode)}</td>
        <td>${impact.citations}</td>
        <td>${impact.citable_items}</td>
        <td class="if-value">${impact.rounded === null ? '--' : escapeHtml(impact.rounded)}</td>
      </tr>`,
    )
    .join('\n');
  const reportRows = data.report.rows
    .map(
      (row) => `<tr data-journal="${attr(row.journal_id)}">
        <td>${escapeHtml(row.journal)}</td>
        <td>${escapeHtml(row.integral_citations)}</td>
        <td>${escapeHtml(row.integral_if)}</td>
        <td>${escapeHtml(row.restricted_citations)}</td>
        <td>${escapeHtml(row.restricted_if)}</td>
      </tr>`,
    )
    .join('\n');
  return `<section class="metrics" data-journal="${attr(data.journalId)}">
    <h2>Impact factors ${data.year}, ${data.horizon}-year window</h2>
    <table class="impact">
      <thead><tr><th>mode</th><th>citations</th><th>citable items</th><th>impact factor</th></tr></thead>
      <tbody>${impactRows}</tbody>
    </table>
    <h3>Journal comparison</h3>
    <table class="comparison">
      <thead><tr><th>journal</th><th>citations</th><th>IF</th><th>citations (restricted)</th><th>IF (restricted)</th></tr></thead>
      <tbody>${reportRows}</tbody>
    </table>
  </section>`;
}
