/** Per-journal stage board.
 *
 * Manuscripts group by current stage; each card offers only the moves the
 * server's transition table allows from that stage, so an illegal move is
 * never even presented. Moves apply optimistically and reconcile against
 * the server response; conflict or permission errors trigger a full refetch.
 */

import { ApiError, type ApiClient } from './api.js';
import { attr, escapeHtml } from './dom.js';
import { formatMath } from './math.js';
import type { Manuscript, TransitionEdge, TransitionTable } from './types.js';

export interface BoardData {
  journalId: string;
  stages: string[];
  terminal: string[];
  edges: TransitionEdge[];
  manuscripts: Manuscript[];
}

export async function loadBoard(client: ApiClient, journalId: string): Promise<BoardData> {
  const [table, listing] = await Promise.all([
    client.transitions(),
    client.boardManuscripts(journalId),
  ]);
  return {
    journalId,
    stages: table.stages,
    terminal: table.terminal,
    edges: table.edges,
    manuscripts: listing.manuscripts,
  };
}

export function allowedMoves(edges: TransitionEdge[], stage: string): string[] {
  return edges.filter((e) => e.from === stage).map((e) => e.to);
}

export function clientEdgeSet(table: TransitionTable): Set<string> {
  return new Set(table.edges.map((e) => `${e.from}->${e.to}`));
}

export function groupByStage(board: BoardData): Map<string, Manuscript[]> {
  const columns = new Map<string, Manuscript[]>();
  for (const stage of board.stages) columns.set(stage, []);
  for (const manuscript of board.manuscripts) {
    const column = columns.get(manuscript.current_stage);
    if (column) column.push(manuscript);
  }
  return columns;
}

export async function moveManuscript(
  client: ApiClient,
  board: BoardData,
  manuscriptId: string,
  toStage: string,
): Promise<BoardData> {
  const previous = board.manuscripts;
  // optimistic: show the card in its target column immediately
  board.manuscripts = previous.map((m) =>
    m.manuscript_id === manuscriptId ? { ...m, current_stage: toStage } : m,
  );
  try {
    const record = await client.transition(manuscriptId, toStage);
    board.manuscripts = previous.map((m) =>
      m.manuscript_id === manuscriptId ? { ...m, current_stage: record.to_stage } : m,
    );
    return board;
  } catch (error) {
    if (error instanceof ApiError && (error.status === 409 || error.status === 403)) {
      // stale board: reconcile with the server's truth
      return loadBoard(client, board.journalId);
    }
    board.manuscripts = previous;
    throw error;
  }
}

export function renderBoard(board: BoardData): string {
  const columns = groupByStage(board);
  const rendered = board.stages
    .map((stage) => {
      const cards = (columns.get(stage) ?? [])
        .map((m) => renderCard(board, m))
        .join('\n');
      const cls = board.terminal.includes(stage) ? 'column terminal' : 'column';
      return `<div class="${cls}" data-stage="${attr(stage)}">
        <h3>${escapeHtml(stage)} <span class="count">${(columns.get(stage) ?? []).length}</span></h3>
        ${cards}
      </div>`;
    })
    .join('\n');
  return `<section class="board" data-journal="${attr(board.journalId)}">
    <h2>Stage board: ${escapeHtml(board.journalId)}</h2>
    <div class="columns">${rendered}</div>
  </section>`;
}

function renderCard(board: BoardData, manuscript: Manuscript): string {
  const moves = allowedMoves(board.edges, manuscript.current_stage)
    .map(
      (to) =>
        `<button data-action="board-move" data-ms="${attr(manuscript.manuscript_id)}" data-to="${attr(to)}">${escapeHtml(to)}</button>`,
    )
    .join(' ');
  return `<article class="card" data-ms="${attr(manuscript.manuscript_id)}">
    <h4>${formatMath(manuscript.title)}</h4>
    <p class="meta">${escapeHtml(manuscript.manuscript_id)} · ${escapeHtml(manuscript.submitted_by)}</p>
    <div class="moves">${moves}</div>
    <div class="extra">
      <button data-action="board-assign" data-ms="${attr(manuscript.manuscript_id)}">Assign referee</button>
      <a href="#/flow/${attr(manuscript.manuscript_id)}">flow</a>
    </div>
  </article>`;
}
