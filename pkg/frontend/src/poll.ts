/** Run-progress polling: re-read the record every second until it leaves
 * `running`. The interval and sleeper are injectable for tests. */

import type { ApiClient } from './api.js';
import type { ExperimentRecord } from './types.js';

export const POLL_INTERVAL_MS = 1000;

export type Sleeper = (ms: number) => Promise<void>;

const defaultSleep: Sleeper = (ms) => new Promise((resolve) => setTimeout(resolve, ms));

export async function pollUntilSettled(
  api: ApiClient,
  experimentId: string,
  onProgress: (record: ExperimentRecord) => void,
  sleep: Sleeper = defaultSleep,
  intervalMs: number = POLL_INTERVAL_MS,
): Promise<ExperimentRecord> {
  for (;;) {
    const record = await api.getExperiment(experimentId);
    onProgress(record);
    if (record.state !== 'running') {
      return record;
    }
    await sleep(intervalMs);
  }
}
