/** Browser entry point: hash routing, event delegation, session handling.
 *
 * All state mutations run through the gateway; this shell only decides what
 * to show and re-renders from server responses.
 */

import { ApiClient, ApiError } from './api.js';
import { loadBoard, moveManuscript, renderBoard, type BoardData } from './board.js';
import { escapeHtml } from './dom.js';
import { renderFlow } from './flowview.js';
import { loadInbox, renderInbox } from './inbox.js';
import { loadMetrics, renderMetrics } from './metrics.js';
import {
  back,
  newWizard,
  next,
  renderWizard,
  restoreDraft,
  serializeDraft,
  submitWizard,
  type WizardState,
} from './wizard.js';

const client = new ApiClient('');
let wizard: WizardState | null = null;
let board: BoardData | null = null;

const app = () => document.getElementById('app') as HTMLElement;

function setStatus(text: string): void {
  const node = document.getElementById('status');
  if (node) node.textContent = text;
}

function saveSession(): void {
  if (client.token) {
    sessionStorage.setItem(
      'session',
      JSON.stringify({ token: client.token, userId: client.userId, roles: client.roles }),
    );
  } else {
    sessionStorage.removeItem('session');
  }
}

function restoreSession(): void {
  const raw = sessionStorage.getItem('session');
  if (!raw) return;
  try {
    const data = JSON.parse(raw);
    client.token = data.token;
    client.userId = data.userId;
    client.roles = data.roles;
  } catch {
    sessionStorage.removeItem('session');
  }
}

function renderLogin(message = ''): string {
  return `<section class="login">
    <h2>Sign in</h2>
    ${message ? `<p class="error">${escapeHtml(message)}</p>` : ''}
    <label>User <input name="user" id="login-user"></label>
    <label>Password <input type="password" name="password" id="login-password"></label>
    <button data-action="login">Sign in</button>
  </section>`;
}

function renderHome(): string {
  const who = client.userId
    ? `signed in as <b>${escapeHtml(client.userId)}</b>`
    : 'not signed in';
  const journals = [...new Set(client.roles.map(([j]) => j))];
  const links = journals
    .map(
      (j) => `<li>
        <a href="#/board/${j}">board ${escapeHtml(j)}</a> ·
        <a href="#/metrics/${j}">metrics ${escapeHtml(j)}</a> ·
        <a href="#/submit/${j}">submit to ${escapeHtml(j)}</a>
      </li>`,
    )
    .join('');
  return `<section class="home">
    <h2>Editorial dashboard</h2>
    <p>${who}</p>
    <ul>${links}</ul>
    <p><a href="#/inbox">referee inbox</a></p>
  </section>`;
}

async function route(): Promise<void> {
  const hash = window.location.hash || '#/';
  const parts = hash.slice(2).split('/').filter(Boolean);
  try {
    if (!client.loggedIn && parts[0] !== 'login') {
      window.location.hash = '#/login';
      return;
    }
    switch (parts[0]) {
      case 'login':
        app().innerHTML = renderLogin();
        return;
      case 'submit': {
        const journal = parts[1] ?? 'mat-sb';
        if (!wizard || wizard.journalId !== journal) {
          wizard = restoreDraft(sessionStorage.getItem(`draft:${journal}`)) ?? newWizard(journal);
        }
        app().innerHTML = renderWizard(wizard);
        return;
      }
      case 'board': {
        const journal = parts[1] ?? '';
        board = await loadBoard(client, journal);
        app().innerHTML = renderBoard(board);
        return;
      }
      case 'inbox': {
        const rows = await loadInbox(client);
        app().innerHTML = renderInbox(client, rows);
        return;
      }
      case 'flow': {
        const view = await client.flow(parts[1] ?? '');
        app().innerHTML = renderFlow(client, view);
        return;
      }
      case 'metrics': {
        const journal = parts[1] ?? '';
        const listing = await client.journals();
        const peers = listing.items.map((j) => j.journal_id).filter((j) => j !== journal);
        const data = await loadMetrics(client, journal, 2011, 2, peers);
        app().innerHTML = renderMetrics(data);
        return;
      }
      default:
        app().innerHTML = renderHome();
    }
  } catch (error) {
    if (error instanceof ApiError && error.status === 401) {
      // session expired: keep the draft, return to login
      if (wizard) sessionStorage.setItem(`draft:${wizard.journalId}`, serializeDraft(wizard));
      client.token = null;
      saveSession();
      app().innerHTML = renderLogin('Session expired, sign in again.');
      return;
    }
    const message = error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
    app().innerHTML = `<p class="error">${escapeHtml(message)}</p>`;
  }
}

async function fileToPayload(input: HTMLInputElement) {
  const file = input.files?.[0];
  if (!file) return null;
  const buffer = await file.arrayBuffer();
  let binary = '';
  for (const byte of new Uint8Array(buffer)) binary += String.fromCharCode(byte);
  return { filename: file.name, data: btoa(binary) };
}

function wizardFieldsFromDom(state: WizardState): WizardState {
  const updated = { ...state };
  const read = (field: string): string =>
    (document.querySelector(`[data-field="${field}"]`) as HTMLInputElement | null)?.value ?? '';
  if (state.step === 'metadata') {
    updated.title = read('title');
    updated.abstract = read('abstract');
    updated.translatedTitle = read('translatedTitle');
  } else if (state.step === 'authors') {
    updated.authors = read('authors').split(',').map((s) => s.trim()).filter(Boolean);
  } else if (state.step === 'keywords') {
    updated.keywords = read('keywords').split(',').map((s) => s.trim()).filter(Boolean);
  }
  return updated;
}

async function handleAction(target: HTMLElement): Promise<void> {
  const action = target.dataset['action'];
  if (!action) return;
  try {
    switch (action) {
      case 'login': {
        const user = (document.getElementById('login-user') as HTMLInputElement).value;
        const password = (document.getElementById('login-password') as HTMLInputElement).value;
        await client.login(user, password);
        saveSession();
        setStatus(`signed in as ${client.userId}`);
        window.location.hash = '#/';
        await route();
        return;
      }
      case 'wizard-next': {
        if (!wizard) return;
        wizard = wizardFieldsFromDom(wizard);
        if (wizard.step === 'files') {
          const latexInput = document.querySelector('[data-field="latex"]') as HTMLInputElement;
          const pdfInput = document.querySelector('[data-field="pdf"]') as HTMLInputElement;
          wizard.latex = (await fileToPayload(latexInput)) ?? wizard.latex;
          wizard.pdf = (await fileToPayload(pdfInput)) ?? wizard.pdf;
        }
        wizard = next(wizard);
        sessionStorage.setItem(`draft:${wizard.journalId}`, serializeDraft(wizard));
        app().innerHTML = renderWizard(wizard);
        return;
      }
      case 'wizard-back': {
        if (!wizard) return;
        wizard = back(wizardFieldsFromDom(wizard));
        app().innerHTML = renderWizard(wizard);
        return;
      }
      case 'wizard-submit': {
        if (!wizard) return;
        wizard = await submitWizard(client, wizard);
        if (wizard.manuscriptId) sessionStorage.removeItem(`draft:${wizard.journalId}`);
        app().innerHTML = renderWizard(wizard);
        return;
      }
      case 'board-move': {
        if (!board) return;
        board = await moveManuscript(client, board, target.dataset['ms'] ?? '', target.dataset['to'] ?? '');
        app().innerHTML = renderBoard(board);
        return;
      }
      case 'board-assign': {
        const referee = window.prompt('Referee user id');
        if (!referee) return;
        await client.assignReferee(target.dataset['ms'] ?? '', referee);
        setStatus(`referee ${referee} invited`);
        return;
      }
      case 'inbox-accept':
      case 'inbox-decline': {
        await client.respondToAssignment(target.dataset['ms'] ?? '', action === 'inbox-accept');
        await route();
        return;
      }
      case 'inbox-review': {
        const ms = target.dataset['ms'] ?? '';
        const select = document.querySelector(
          `[data-role="recommendation"][data-ms="${ms}"]`,
        ) as HTMLSelectElement;
        const fileInput = document.querySelector(
          `[data-role="review-file"][data-ms="${ms}"]`,
        ) as HTMLInputElement;
        const payload = await fileToPayload(fileInput);
        if (!payload) {
          setStatus('choose a review file first');
          return;
        }
        await client.submitReview(ms, select.value, payload.filename, payload.data);
        await route();
        return;
      }
    }
  } catch (error) {
    const message = error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
    setStatus(message);
    if (error instanceof ApiError && error.status === 401) {
      if (wizard) sessionStorage.setItem(`draft:${wizard.journalId}`, serializeDraft(wizard));
      client.token = null;
      saveSession();
      app().innerHTML = renderLogin('Session expired, sign in again.');
    }
  }
}

export function start(): void {
  restoreSession();
  window.addEventListener('hashchange', () => void route());
  document.addEventListener('click', (event) => {
    const target = (event.target as HTMLElement).closest('[data-action]');
    if (target) void handleAction(target as HTMLElement);
  });
  void route();
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  start();
}
