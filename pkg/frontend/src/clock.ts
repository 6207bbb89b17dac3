// Milliseconds since the session epoch (first interaction). The service
// requires event timestamps to be monotone per session, so the clock also
// clamps backwards jumps from coarse timers.

export class SessionClock {
  private epoch: number | null = null;
  private last = 0;

  constructor(private readonly source: () => number = () => performance.now()) {}

  now(): number {
    const raw = this.source();
    if (this.epoch === null) {
      this.epoch = raw;
    }
    const t = Math.max(0, raw - this.epoch);
    this.last = Math.max(this.last, t);
    return this.last;
  }

  started(): boolean {
    return this.epoch !== null;
  }
}
