/**
 * End-to-end flow against a live gateway on the demonstration store:
 * author submits through the wizard, editor drives the stage board,
 * referee reviews from the inbox, the author's flow view stays anonymous,
 * and the metrics view shows the API numbers verbatim.
 */

import { spawn, spawnSync, type ChildProcess } from 'node:child_process';
import { mkdtempSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiClient, ApiError } from '../src/api.js';
import { allowedMoves, loadBoard, moveManuscript, renderBoard } from '../src/board.js';
import { renderFlow } from '../src/flowview.js';
import { loadInbox, renderInbox } from '../src/inbox.js';
import { loadMetrics, renderMetrics } from '../src/metrics.js';
import { newWizard, next, renderWizard, submitWizard, type WizardState } from '../src/wizard.js';

const PORT = 8644;
const BASE = `http://127.0.0.1:${PORT}`;
const REFEREE_REAL_NAME = 'P. P. Retsenzentov';

let server: ChildProcess | null = null;

async function waitForHealth(): Promise<void> {
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/api/v1/health`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error('gateway did not come up');
}

beforeAll(async () => {
  const dir = mkdtempSync(join(tmpdir(), 'webui-e2e-'));
  const storePath = join(dir, 'store.ndjson');
  const built = spawnSync('python3', ['-m', 'sciarchive.demo', storePath], {
    encoding: 'utf-8',
  });
  if (built.status !== 0) {
    throw new Error(`demo store build failed: ${built.stderr}`);
  }
  const configPath = join(dir, 'gateway.conf');
  writeFileSync(
    configPath,
    `store_path = ${storePath}\nlisten_addr = 127.0.0.1:${PORT}\n`,
    'utf-8',
  );
  server = spawn(
    'python3',
    ['-m', 'sciarchive.gateway.cli', '--config', configPath, 'archive', 'serve'],
    { stdio: ['ignore', 'pipe', 'pipe'] },
  );
  await waitForHealth();
});

afterAll(() => {
  server?.kill();
});

function client(): ApiClient {
  return new ApiClient(BASE);
}

describe('editorial dashboard end to end', () => {
  let manuscriptId = '';

  it('author completes the submission wizard; manuscript reaches Submitted', async () => {
    const author = client();
    await author.login('author1', 'pw-author1');

    let wizard: WizardState = newWizard('mat-sb');
    wizard = { ...wizard, title: 'Wizard driven submission', abstract: 'Via the UI.' };
    wizard = next(wizard);
    expect(wizard.step).toBe('authors');
    wizard = { ...wizard, authors: ['auth-p01'] };
    wizard = next(wizard);
    wizard = { ...wizard, keywords: ['end-to-end'] };
    wizard = next(wizard);
    expect(wizard.step).toBe('files');
    // client-side gate: confirm is unreachable without both files
    expect(next(wizard).step).toBe('files');
    wizard = {
      ...wizard,
      latex: { filename: 'w.tex', data: Buffer.from('\\documentclass{article}').toString('base64') },
      pdf: { filename: 'w.pdf', data: Buffer.from('%PDF-1.4 wizard').toString('base64') },
    };
    wizard = next(wizard);
    expect(wizard.step).toBe('confirm');
    wizard = await submitWizard(author, wizard);
    expect(wizard.error).toBeNull();
    expect(wizard.manuscriptId).toBeTruthy();
    manuscriptId = wizard.manuscriptId as string;

    const flow = await author.flow(manuscriptId);
    expect(flow.manuscript.current_stage).toBe('Submitted');

    // bypassing the client gate is caught server-side
    try {
      await author.submitManuscript({
        journal_id: 'mat-sb',
        title: 'No pdf',
        abstract: 'x',
        keywords: [],
        authors: ['auth-p01'],
        source_latex: { filename: 'a.tex', data: 'eA==' },
        source_pdf: undefined as never,
      });
      expect.unreachable('server must reject a missing PDF');
    } catch (error) {
      expect((error as ApiError).code).toMatch(/missing_file|malformed_record/);
    }
  });

  it('editor moves the manuscript Submitted -> Classification -> PeerReview on the board', async () => {
    const editor = client();
    await editor.login('editor1', 'pw-editor1');

    let board = await loadBoard(editor, 'mat-sb');
    const html = renderBoard(board);
    expect(html).toContain(`data-ms="${manuscriptId}"`);

    // the disabled-edge set mirrors the server's transition table: probing a
    // non-edge is rejected with illegal_transition
    expect(allowedMoves(board.edges, 'Submitted')).not.toContain('PublishedPrint');
    try {
      await editor.transition(manuscriptId, 'PublishedPrint');
      expect.unreachable('illegal edge must be rejected');
    } catch (error) {
      expect((error as ApiError).code).toBe('illegal_transition');
    }

    expect(allowedMoves(board.edges, 'Submitted')).toContain('Classification');
    board = await moveManuscript(editor, board, manuscriptId, 'Classification');
    let card = board.manuscripts.find((m) => m.manuscript_id === manuscriptId);
    expect(card?.current_stage).toBe('Classification');

    board = await moveManuscript(editor, board, manuscriptId, 'PeerReview');
    card = board.manuscripts.find((m) => m.manuscript_id === manuscriptId);
    expect(card?.current_stage).toBe('PeerReview');

    await editor.assignReferee(manuscriptId, 'referee1');
  });

  it('author sessions hide the board entirely (authorization is server-side)', async () => {
    const author = client();
    await author.login('author1', 'pw-author1');
    try {
      await author.boardManuscripts('mat-sb');
      expect.unreachable('board must be editor-only');
    } catch (error) {
      expect((error as ApiError).status).toBe(403);
    }
    try {
      await author.transition(manuscriptId, 'ScientificEditing');
      expect.unreachable('raw transition bypass must fail');
    } catch (error) {
      expect((error as ApiError).status).toBe(403);
    }
  });

  it('referee accepts from the inbox and uploads a review', async () => {
    const referee = client();
    await referee.login('referee1', 'pw-referee1');

    let rows = await loadInbox(referee);
    let mine = rows.find((r) => r.assignment.manuscript_id === manuscriptId);
    expect(mine?.assignment.status).toBe('invited');
    // the inbox renders download links for the manuscript sources
    const inboxHtml = renderInbox(referee, rows);
    expect(inboxHtml).toContain('w.tex');
    expect(inboxHtml).toContain('documents/');

    await referee.respondToAssignment(manuscriptId, true);
    await referee.submitReview(
      manuscriptId,
      'minor',
      'review.txt',
      Buffer.from('Sound; fix notation.').toString('base64'),
    );
    rows = await loadInbox(referee);
    mine = rows.find((r) => r.assignment.manuscript_id === manuscriptId);
    expect(mine?.assignment.status).toBe('reported');

    // the source download actually serves the uploaded bytes
    const doc = mine?.manuscript?.files.find((d) => d.role === 'source_latex');
    const response = await fetch(referee.documentUrl(manuscriptId, doc!.content_hash), {
      headers: { Authorization: `Bearer ${referee.token}` },
    });
    expect(response.status).toBe(200);
    expect(await response.text()).toBe('\\documentclass{article}');
  });

  it("author's flow view shows Referee 1 and never the referee identity", async () => {
    const author = client();
    await author.login('author1', 'pw-author1');
    const view = await author.flow(manuscriptId);
    const html = renderFlow(author, view);
    expect(html).toContain('Referee 1');
    expect(html).not.toContain('referee1');
    expect(html).not.toContain(REFEREE_REAL_NAME);
    expect(JSON.stringify(view)).not.toContain('referee1');
    // single-blind: the referee sees the author's name
    const referee = client();
    await referee.login('referee1', 'pw-referee1');
    const refereeView = await referee.flow(manuscriptId);
    expect(JSON.stringify(refereeView)).toContain('author1');
  });

  it('metrics view renders the 0.813 / 0.567 row verbatim from the API', async () => {
    const viewer = client();
    await viewer.login('author1', 'pw-author1');
    const data = await loadMetrics(viewer, 'mat-sb', 2011, 2, [
      'trudy-mi', 'avtomat-telemekh', 'diskret-mat', 'semr', 'rjnd',
    ]);
    const html = renderMetrics(data);
    expect(html).toContain('>0.813<');
    expect(html).toContain('>0.567<');
    expect(html).toContain('>130<');
    expect(html).toContain('>85<');
    const diskret = html.slice(html.indexOf('data-journal="diskret-mat"'));
    expect(diskret.slice(0, 400)).toContain('>--<');
  });

  it('client edge computation matches the server transition table endpoint', async () => {
    const viewer = client();
    await viewer.login('editor1', 'pw-editor1');
    const table = await viewer.transitions();
    for (const stage of table.stages) {
      const fromClient = new Set(allowedMoves(table.edges, stage));
      const fromServer = new Set(
        table.edges.filter((e) => e.from === stage).map((e) => e.to),
      );
      expect(fromClient).toEqual(fromServer);
      if (table.terminal.includes(stage)) expect(fromClient.size).toBe(0);
    }
  });
});
