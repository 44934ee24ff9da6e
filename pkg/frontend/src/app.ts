/** DOM wiring: hash routing, event handlers, and the 1 s run poller.
 * All domain content comes from the view-model modules; this file only
 * mounts HTML and forwards events. */

import { ApiClient } from './api.js';
import { buildResultsViewModel } from './analysis.js';
import { pollUntilSettled } from './poll.js';
import {
  renderAnalysis,
  renderFailure,
  renderProgress,
  renderSetup,
  renderStaging,
  rankingCsv,
} from './render.js';
import { hashFor, parseHash, screenFor } from './router.js';
import { StagingController, type SliderName } from './staging.js';
import { submitSetup, type SetupForm } from './setup.js';
import { formatWeight } from './format.js';
import type { ExperimentRecord } from './types.js';

const params = new URLSearchParams(window.location.search);
const API_BASE = params.get('api') ?? window.location.origin;

const api = new ApiClient(API_BASE);
const root = document.getElementById('app')!;

function navigate(screen: 'setup' | 'staging' | 'analysis', experimentId: string | null = null) {
  window.location.hash = hashFor({ screen, experimentId });
}

function readSetupForm(form: HTMLFormElement): SetupForm {
  const value = (name: string) =>
    (form.elements.namedItem(name) as HTMLInputElement | HTMLTextAreaElement | HTMLSelectElement)
      .value;
  return {
    repositoryText: value('repositoryText'),
    manifestText: value('manifestText'),
    zooText: value('zooText'),
    useCase: value('useCase'),
    strategy: value('strategy'),
    budget: value('budget'),
    seed: value('seed'),
  };
}

function mountSetup(banner = '') {
  root.innerHTML = renderSetup({}, banner);
  const form = document.getElementById('setup-form') as HTMLFormElement;
  document.getElementById('retry')?.addEventListener('click', () => mountSetup());
  form.addEventListener('submit', async (event) => {
    event.preventDefault();
    const data = readSetupForm(form);
    const { record, errors, serviceError } = await submitSetup(api, data);
    if (record) {
      navigate('staging', record.id);
      return;
    }
    if (serviceError) {
      mountSetup(serviceError);
      return;
    }
    root.innerHTML = renderSetup(errors);
    rebindSetup(data);
  });
}

function rebindSetup(previous: SetupForm) {
  const form = document.getElementById('setup-form') as HTMLFormElement;
  for (const [name, value] of Object.entries(previous)) {
    const field = form.elements.namedItem(name) as HTMLInputElement | null;
    if (field) field.value = value;
  }
  form.addEventListener('submit', async (event) => {
    event.preventDefault();
    const data = readSetupForm(form);
    const { record, errors, serviceError } = await submitSetup(api, data);
    if (record) navigate('staging', record.id);
    else if (serviceError) mountSetup(serviceError);
    else {
      root.innerHTML = renderSetup(errors);
      rebindSetup(data);
    }
  });
}

async function mountStaging(experimentId: string) {
  const controller = new StagingController(api, experimentId);
  let model;
  try {
    model = await controller.load();
  } catch (error) {
    // Wrong-state loads route to the screen the record actually belongs to.
    const record = await api.getExperiment(experimentId).catch(() => null);
    if (record) navigate(screenFor(record.state), experimentId);
    else mountSetup(error instanceof Error ? error.message : String(error));
    return;
  }
  root.innerHTML = renderStaging(model);

  const sliders = root.querySelectorAll<HTMLInputElement>('input[type="range"]');
  sliders.forEach((input) => {
    input.addEventListener('input', () => {
      const updated = controller.setSlider(input.name as SliderName, Number(input.value));
      const output = root.querySelector(`[data-output-for="${input.name}"]`)!;
      output.textContent = formatWeight(
        updated.edited[input.name as keyof typeof updated.edited],
      );
      const indicator = root.querySelector<HTMLElement>('.dirty-indicator')!;
      indicator.dataset.dirty = String(updated.dirty);
      indicator.textContent = updated.dirty ? 'unsaved edits' : 'weights saved';
    });
  });

  const saveButton = document.getElementById('save-weights') as HTMLButtonElement;
  const runButton = document.getElementById('run-experiment') as HTMLButtonElement;
  saveButton.addEventListener('click', async () => {
    saveButton.disabled = runButton.disabled = true;
    try {
      const updated = await controller.save();
      const indicator = root.querySelector<HTMLElement>('.dirty-indicator')!;
      indicator.dataset.dirty = String(updated.dirty);
      indicator.textContent = 'weights saved';
    } finally {
      saveButton.disabled = runButton.disabled = false;
    }
  });
  runButton.addEventListener('click', async () => {
    saveButton.disabled = runButton.disabled = true;
    try {
      await controller.run(); // flushes unsaved edits first
      navigate('analysis', experimentId);
    } catch (error) {
      runButton.disabled = saveButton.disabled = false;
      alert(error instanceof Error ? error.message : String(error));
    }
  });
}

async function mountAnalysis(experimentId: string) {
  const record = await api.getExperiment(experimentId);
  if (record.state === 'draft' || record.state === 'staged') {
    navigate('staging', experimentId);
    return;
  }
  if (record.state === 'running') {
    root.innerHTML = renderProgress(record.progress.calls_spent, record.progress.budget);
    const settled = await pollUntilSettled(api, experimentId, (snapshot: ExperimentRecord) => {
      if (snapshot.state === 'running') {
        root.innerHTML = renderProgress(snapshot.progress.calls_spent, snapshot.progress.budget);
      }
    });
    return mountSettled(settled);
  }
  mountSettled(record);
}

async function mountSettled(record: ExperimentRecord) {
  if (record.state === 'failed') {
    root.innerHTML = renderFailure(record.error ?? 'unknown failure');
    return;
  }
  const report = await api.getReport(record.id);
  const model = buildResultsViewModel(report, record.budget);
  root.innerHTML = renderAnalysis(model);
  const jsonLink = document.getElementById('download-json') as HTMLAnchorElement;
  jsonLink.href = URL.createObjectURL(
    new Blob([JSON.stringify(report, null, 2)], { type: 'application/json' }),
  );
  const csvLink = document.getElementById('download-csv') as HTMLAnchorElement;
  csvLink.href = URL.createObjectURL(
    new Blob([rankingCsv(model, record.strategy)], { type: 'text/csv' }),
  );
}

function route() {
  const { screen, experimentId } = parseHash(window.location.hash);
  if (screen === 'staging' && experimentId) void mountStaging(experimentId);
  else if (screen === 'analysis' && experimentId) void mountAnalysis(experimentId);
  else mountSetup();
}

window.addEventListener('hashchange', route);
route();
