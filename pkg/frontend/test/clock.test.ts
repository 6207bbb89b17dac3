import { describe, expect, it } from 'vitest';

import { SessionClock } from '../src/clock.js';

describe('SessionClock', () => {
  it('starts at zero on first use and runs in session milliseconds', () => {
    let now = 5000;
    const clock = new SessionClock(() => now);
    expect(clock.started()).toBe(false);
    expect(clock.now()).toBe(0);
    now = 5750;
    expect(clock.now()).toBe(750);
    expect(clock.started()).toBe(true);
  });

  it('never goes backwards even if the source does', () => {
    let now = 100;
    const clock = new SessionClock(() => now);
    clock.now();
    now = 400;
    expect(clock.now()).toBe(300);
    now = 250; // coarse timer jitter
    expect(clock.now()).toBe(300);
  });
});
