/** Pure HTML renderers for the three screens. No DOM access and no domain
 * arithmetic here, so every screen is testable as string output. */

import type { ResultsViewModel } from './analysis.js';
import { formatWeight } from './format.js';
import type { StagingViewModel } from './staging.js';
import type { FieldErrors } from './setup.js';

function esc(text: string): string {
  return text
    .replaceAll('&', '&amp;')
    .replaceAll('<', '&lt;')
    .replaceAll('>', '&gt;')
    .replaceAll('"', '&quot;');
}

function fieldError(errors: FieldErrors, key: keyof FieldErrors): string {
  const message = errors[key];
  return message ? `<p class="field-error" data-error-for="${key}">${esc(message)}</p>` : '';
}

export function renderSetup(errors: FieldErrors = {}, banner = ''): string {
  return `
<section class="screen" id="setup-screen">
  <h1>New experiment</h1>
  ${banner ? `<div class="banner error">${esc(banner)} <button id="retry">Retry</button></div>` : ''}
  <form id="setup-form">
    <label>Model repository (JSON)
      <textarea name="repositoryText" rows="6" placeholder='{"version": 1, "models": [...]}'></textarea>
    </label>
    ${fieldError(errors, 'repositoryText')}
    <label>Dataset manifest (JSON)
      <textarea name="manifestText" rows="3" placeholder='{"version": 1, "name": "...", "n_samples": 100, "seed": 1}'></textarea>
    </label>
    ${fieldError(errors, 'manifestText')}
    <label>Synthetic zoo spec (JSON, optional)
      <textarea name="zooText" rows="3" placeholder="leave empty to evaluate through the external service"></textarea>
    </label>
    ${fieldError(errors, 'zooText')}
    <label>Use case
      <textarea name="useCase" rows="2" placeholder="Recommend a model for ..."></textarea>
    </label>
    ${fieldError(errors, 'useCase')}
    <label>Selection strategy
      <select name="strategy">
        <option value="thompson">Thompson sampling</option>
        <option value="ucb">Upper confidence bound</option>
        <option value="epsilon_greedy">Epsilon greedy</option>
      </select>
    </label>
    ${fieldError(errors, 'strategy')}
    <label>Evaluation budget <input name="budget" type="number" min="1" value="100"></label>
    ${fieldError(errors, 'budget')}
    <label>Seed <input name="seed" type="number" min="0" value="0"></label>
    ${fieldError(errors, 'seed')}
    <button type="submit">Create &amp; stage</button>
  </form>
</section>`;
}

function slider(name: string, label: string, value: number): string {
  return `
    <label class="slider-row">
      <span>${label}</span>
      <input type="range" name="${name}" min="0" max="1" step="0.01" value="${value}">
      <output data-output-for="${name}">${formatWeight(value)}</output>
    </label>`;
}

export function renderStaging(model: StagingViewModel): string {
  return `
<section class="screen" id="staging-screen">
  <h1>Stage experiment</h1>
  <p class="hint">Suggested weights for this use case; adjust before running.</p>
  <div class="sliders">
    ${slider('weight_acc', 'Accuracy', model.edited.weight_acc)}
    ${slider('weight_size', 'Model size', model.edited.weight_size)}
    ${slider('weight_complexity', 'Model complexity', model.edited.weight_complexity)}
  </div>
  <p class="dirty-indicator" data-dirty="${model.dirty}">${model.dirty ? 'unsaved edits' : 'weights saved'}</p>
  <h2>Justification</h2>
  <p id="justification">${esc(model.justification)}</p>
  <h2>Tradeoffs</h2>
  <p id="tradeoffs">${esc(model.tradeoffs)}</p>
  <div class="actions">
    <button id="save-weights">Save weights</button>
    <button id="run-experiment" class="primary">Run experiment</button>
  </div>
</section>`;
}

export function renderProgress(callsSpent: number, budget: number): string {
  const pct = budget > 0 ? Math.min(100, Math.round((callsSpent / budget) * 100)) : 0;
  return `
<section class="screen" id="progress-screen">
  <h1>Running…</h1>
  <div class="progress-track"><div class="progress-fill" style="width: ${pct}%"></div></div>
  <p id="progress-text">${callsSpent} / ${budget} evaluation calls</p>
</section>`;
}

export function renderFailure(diagnostic: string): string {
  return `
<section class="screen" id="failure-screen">
  <h1>Experiment failed</h1>
  <pre class="diagnostic">${esc(diagnostic)}</pre>
</section>`;
}

export function renderAnalysis(model: ResultsViewModel): string {
  const cards = model.topCards
    .map(
      (card) => `
    <div class="top-card" data-model="${esc(card.modelId)}">
      <div class="rank">#${card.rank}</div>
      <div class="model-id">${esc(card.modelId)}</div>
      <dl>
        <dt>Accuracy (target)</dt><dd>${card.accuracyText}</dd>
        <dt>Reward</dt><dd>${card.rewardText}</dd>
        <dt>Size</dt><dd>${esc(card.sizeText)}</dd>
        <dt>Complexity</dt><dd>${esc(card.complexityText)}</dd>
        <dt>Times selected</dt><dd>${card.pulls}</dd>
      </dl>
    </div>`,
    )
    .join('');

  const bars = model.bars
    .map(
      (bar) => `
    <div class="bar-row" data-model="${esc(bar.modelId)}" data-pulls="${bar.pulls}">
      <span class="bar-label">${esc(bar.modelId)}</span>
      <div class="bar" style="width: ${(bar.fraction * 100).toFixed(1)}%"></div>
      <span class="bar-count">${bar.pulls}</span>
    </div>`,
    )
    .join('');

  const rows = model.ranking
    .map(
      (row) => `
      <tr><td>${row.rank}</td><td>${esc(row.modelId)}</td><td>${row.rewardText}</td>
      <td>${row.accuracyText}</td><td>${row.pulls}</td></tr>`,
    )
    .join('');

  return `
<section class="screen" id="analysis-screen">
  <h1>Results</h1>
  <div class="summary">
    <div class="stat"><span class="stat-label">Computational savings</span>
      <span class="stat-value" id="savings">${model.savingsText}</span></div>
    <div class="stat"><span class="stat-label">Spent</span>
      <span class="stat-value">${model.mmacsUsedText}</span></div>
    <div class="stat"><span class="stat-label">Brute-force equivalent</span>
      <span class="stat-value">${model.bruteForceEquivalentText}</span></div>
    <div class="stat"><span class="stat-label">Evaluation calls</span>
      <span class="stat-value" id="eval-calls">${model.evalCallsUsed}${model.budget ? ` / ${model.budget}` : ''}</span></div>
  </div>
  <h2>Top 3 models</h2>
  <div class="top-cards">${cards}</div>
  <h2>Selection counts</h2>
  <div class="bar-chart" data-total="${model.barTotal}">${bars}</div>
  <h2>Full ranking</h2>
  <table class="ranking">
    <thead><tr><th>#</th><th>Model</th><th>Reward</th><th>Accuracy</th><th>Pulls</th></tr></thead>
    <tbody>${rows}</tbody>
  </table>
  <div class="actions">
    <a id="download-json" download="report.json">Download report (JSON)</a>
    <a id="download-csv" download="report.csv">Download table (CSV)</a>
  </div>
</section>`;
}

/** CSV export of the ranking; mirrors the service's delimited layout. */
export function rankingCsv(model: ResultsViewModel, method = 'bandit'): string {
  const header = 'method,model,accuracy,size_mb,complexity_mmac,eval_calls';
  const rows = model.ranking.map(
    (row) =>
      `${method},${row.modelId},${row.accuracyText},${row.sizeMb},${row.complexityMmac},${row.pulls}`,
  );
  return [header, ...rows].join('\n') + '\n';
}
