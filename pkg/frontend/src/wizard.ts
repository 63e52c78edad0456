/** Submission wizard: metadata -> authors -> keywords -> files -> confirm.
 *
 * The state is a plain serializable object so a draft survives a forced
 * re-login (session expiry mid-wizard). Validation runs per step; the file
 * step refuses to advance without both the LaTeX and the PDF payload, and
 * the server re-checks everything anyway.
 */

import { ApiError } from './api.js';
import { escapeHtml, attr } from './dom.js';
import type { FilePayload, SubmissionPayload } from './types.js';

export const WIZARD_STEPS = ['metadata', 'authors', 'keywords', 'files', 'confirm'] as const;
export type WizardStep = (typeof WIZARD_STEPS)[number];

export interface WizardState {
  step: WizardStep;
  journalId: string;
  title: string;
  abstract: string;
  translatedTitle: string;
  authors: string[];
  keywords: string[];
  latex: FilePayload | null;
  pdf: FilePayload | null;
  error: string | null;
  manuscriptId: string | null;
}

export function newWizard(journalId: string): WizardState {
  return {
    step: 'metadata',
    journalId,
    title: '',
    abstract: '',
    translatedTitle: '',
    authors: [],
    keywords: [],
    latex: null,
    pdf: null,
    error: null,
    manuscriptId: null,
  };
}

export function stepErrors(state: WizardState): string[] {
  switch (state.step) {
    case 'metadata': {
      const errors: string[] = [];
      if (!state.title.trim()) errors.push('title is required');
      if (!state.abstract.trim()) errors.push('abstract is required');
      return errors;
    }
    case 'authors':
      return state.authors.length ? [] : ['at least one registered author is required'];
    case 'keywords':
      return state.keywords.length ? [] : ['at least one keyword is required'];
    case 'files': {
      const errors: string[] = [];
      if (!state.latex) errors.push('LaTeX source file is required');
      if (!state.pdf) errors.push('PDF file is required');
      return errors;
    }
    case 'confirm':
      return [];
  }
}

export function canAdvance(state: WizardState): boolean {
  return stepErrors(state).length === 0;
}

export function next(state: WizardState): WizardState {
  if (!canAdvance(state)) {
    return { ...state, error: stepErrors(state).join('; ') };
  }
  const index = WIZARD_STEPS.indexOf(state.step);
  if (index >= WIZARD_STEPS.length - 1) return state;
  const upcoming = WIZARD_STEPS[index + 1] as WizardStep;
  return { ...state, step: upcoming, error: null };
}

export function back(state: WizardState): WizardState {
  const index = WIZARD_STEPS.indexOf(state.step);
  if (index === 0) return state;
  const previous = WIZARD_STEPS[index - 1] as WizardStep;
  return { ...state, step: previous, error: null };
}

export function serializeDraft(state: WizardState): string {
  return JSON.stringify(state);
}

export function restoreDraft(raw: string | null): WizardState | null {
  if (!raw) return null;
  try {
    const parsed = JSON.parse(raw) as WizardState;
    if (!WIZARD_STEPS.includes(parsed.step)) return null;
    return parsed;
  } catch {
    return null;
  }
}

export interface SubmitCapable {
  submitManuscript(
    payload: SubmissionPayload,
  ): Promise<{ manuscript_id: string; current_stage: string }>;
}

export async function submitWizard(
  client: SubmitCapable,
  state: WizardState,
): Promise<WizardState> {
  if (state.step !== 'confirm') {
    return { ...state, error: 'complete all steps before confirming' };
  }
  if (!state.latex || !state.pdf) {
    return { ...state, error: 'missing_file: both files are required' };
  }
  try {
    const created = await client.submitManuscript({
      journal_id: state.journalId,
      title: state.title,
      abstract: state.abstract,
      keywords: state.keywords,
      authors: state.authors,
      translated_title: state.translatedTitle || undefined,
      source_latex: state.latex,
      source_pdf: state.pdf,
    });
    return { ...state, manuscriptId: created.manuscript_id, error: null };
  } catch (error) {
    if (error instanceof ApiError && error.status !== 401) {
      return { ...state, error: `${error.code}: ${error.message}` };
    }
    throw error; // 401 propagates: the shell redirects to login, draft kept
  }
}

const STEP_TITLES: Record<WizardStep, string> = {
  metadata: 'Manuscript metadata',
  authors: 'Authors',
  keywords: 'Keywords',
  files: 'Files (LaTeX + PDF)',
  confirm: 'Confirm submission',
};

export function renderWizard(state: WizardState): string {
  if (state.manuscriptId) {
    return `<section class="wizard" data-step="done">
      <h2>Submission complete</h2>
      <p>Manuscript <b>${escapeHtml(state.manuscriptId)}</b> is now <b>Submitted</b>.</p>
      <p><a href="#/flow/${attr(state.manuscriptId)}">View paper flow</a></p>
    </section>`;
  }
  const items = WIZARD_STEPS.map((step) => {
    const cls = step === state.step ? 'crumb active' : 'crumb';
    return `<span class="${cls}">${escapeHtml(STEP_TITLES[step])}</span>`;
  }).join(' → ');
  const body = renderStepBody(state);
  const error = state.error
    ? `<p class="error" data-role="wizard-error">${escapeHtml(state.error)}</p>`
    : '';
  const buttons = [
    state.step !== 'metadata' ? '<button data-action="wizard-back">Back</button>' : '',
    state.step !== 'confirm'
      ? `<button data-action="wizard-next" ${canAdvance(state) ? '' : 'disabled'}>Next</button>`
      : `<button data-action="wizard-submit" ${state.latex && state.pdf ? '' : 'disabled'}>Submit manuscript</button>`,
  ].join(' ');
  return `<section class="wizard" data-step="${attr(state.step)}">
    <h2>New submission to ${escapeHtml(state.journalId)}</h2>
    <nav class="crumbs">${items}</nav>
    ${body}
    ${error}
    <div class="buttons">${buttons}</div>
  </section>`;
}

function renderStepBody(state: WizardState): string {
  switch (state.step) {
    case 'metadata':
      return `<div class="fields">
        <label>Title <input name="title" value="${attr(state.title)}" data-field="title"></label>
        <label>Abstract <textarea name="abstract" data-field="abstract">${escapeHtml(state.abstract)}</textarea></label>
        <label>Translated title (optional) <input name="translated_title" value="${attr(state.translatedTitle)}" data-field="translatedTitle"></label>
      </div>`;
    case 'authors':
      return `<div class="fields">
        <label>Person ids, comma separated
          <input name="authors" value="${attr(state.authors.join(', '))}" data-field="authors">
        </label>
      </div>`;
    case 'keywords':
      return `<div class="fields">
        <label>Keywords, comma separated
          <input name="keywords" value="${attr(state.keywords.join(', '))}" data-field="keywords">
        </label>
      </div>`;
    case 'files':
      return `<div class="fields">
        <label>LaTeX source <input type="file" accept=".tex" data-field="latex"></label>
        <span data-role="latex-name">${state.latex ? escapeHtml(state.latex.filename) : 'none'}</span>
        <label>PDF <input type="file" accept=".pdf" data-field="pdf"></label>
        <span data-role="pdf-name">${state.pdf ? escapeHtml(state.pdf.filename) : 'none'}</span>
      </div>`;
    case 'confirm':
      return `<dl class="summary">
        <dt>Title</dt><dd>${escapeHtml(state.title)}</dd>
        <dt>Authors</dt><dd>${escapeHtml(state.authors.join(', '))}</dd>
        <dt>Keywords</dt><dd>${escapeHtml(state.keywords.join(', '))}</dd>
        <dt>Files</dt><dd>${escapeHtml(state.latex?.filename ?? '?')}, ${escapeHtml(state.pdf?.filename ?? '?')}</dd>
      </dl>`;
  }
}
