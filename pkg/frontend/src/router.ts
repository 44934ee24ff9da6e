/** Screen routing is a pure function of the record's state field. */

import type { ExperimentState } from './types.js';

export type Screen = 'setup' | 'staging' | 'analysis';

export function screenFor(state: ExperimentState): Screen {
  switch (state) {
    case 'draft':
    case 'staged':
      return 'staging';
    case 'running':
    case 'complete':
    case 'failed':
      return 'analysis';
  }
}

export interface Route {
  screen: Screen;
  experimentId: string | null;
}

/** Parse a location hash like "#/staging/abc123". */
export function parseHash(hash: string): Route {
  const parts = hash.replace(/^#\/?/, '').split('/');
  if (parts[0] === 'staging' && parts[1]) return { screen: 'staging', experimentId: parts[1] };
  if (parts[0] === 'analysis' && parts[1]) return { screen: 'analysis', experimentId: parts[1] };
  return { screen: 'setup', experimentId: null };
}

export function hashFor(route: Route): string {
  if (route.screen === 'setup' || !route.experimentId) return '#/setup';
  return `#/${route.screen}/${route.experimentId}`;
}
