/**
 * Server-audio playback queue and the talking-face panel state.
 *
 * The mouth is a two-state animation gated on the smoothed RMS envelope of
 * the audio currently playing: open while the 50 ms window's RMS clears
 * the threshold AND the server says we are inside a speaking interval.
 * Out-of-order server-audio frames are dropped (protocol rule); an
 * underrun while speaking inserts silence and counts.
 */

export const ENVELOPE_WINDOW_MS = 50;
export const MOUTH_OPEN_THRESHOLD = 0.02; // full-scale RMS

export interface FacePanelState {
  speaking: boolean;
  envelope: number;
  mouthOpen: boolean;
}

interface QueuedChunk {
  seq: number;
  samples: Int16Array;
  sampleRateHz: number;
}

export class PlaybackEngine {
  readonly state: FacePanelState = { speaking: false, envelope: 0, mouthOpen: false };
  droppedOutOfOrder = 0;
  underruns = 0;
  /** invoked for each accepted chunk; the browser schedules WebAudio here */
  onChunk: ((samples: Int16Array, sampleRateHz: number) => void) | null = null;

  private queue: QueuedChunk[] = [];
  private lastSeq = 0;
  private current: QueuedChunk | null = null;
  private positionSamples = 0;

  onSpeakingStart(): void {
    this.state.speaking = true;
  }

  onSpeakingEnd(): void {
    this.state.speaking = false;
    this.state.mouthOpen = false;
    this.state.envelope = 0;
    this.queue = [];
    this.current = null;
    this.positionSamples = 0;
  }

  enqueue(seq: number, samples: Int16Array, sampleRateHz: number): boolean {
    if (seq <= this.lastSeq) {
      this.droppedOutOfOrder += 1;
      return false;
    }
    this.lastSeq = seq;
    this.queue.push({ seq, samples, sampleRateHz });
    if (this.onChunk) this.onChunk(samples, sampleRateHz);
    return true;
  }

  /**
   * Advance playback by elapsedMs of wall time, updating the face panel.
   * The browser glue calls this from the render loop; tests drive it with
   * a simulated clock.
   */
  advance(elapsedMs: number): FacePanelState {
    let remainingMs = elapsedMs;
    while (remainingMs > 0) {
      if (this.current === null) {
        this.current = this.queue.shift() ?? null;
        this.positionSamples = 0;
        if (this.current === null) {
          if (this.state.speaking) {
            this.underruns += 1; // silence inserted
          }
          this.state.envelope = 0;
          this.state.mouthOpen = false;
          return this.state;
        }
      }
      const chunk = this.current;
      const windowSamples = Math.min(
        Math.round((ENVELOPE_WINDOW_MS * chunk.sampleRateHz) / 1000),
        chunk.samples.length - this.positionSamples,
      );
      let sumSquares = 0;
      for (let i = 0; i < windowSamples; i++) {
        const sample = chunk.samples[this.positionSamples + i] / 32768;
        sumSquares += sample * sample;
      }
      this.state.envelope = windowSamples > 0 ? Math.sqrt(sumSquares / windowSamples) : 0;
      this.state.mouthOpen = this.state.speaking && this.state.envelope > MOUTH_OPEN_THRESHOLD;

      const stepMs = Math.min(remainingMs, (windowSamples * 1000) / chunk.sampleRateHz);
      this.positionSamples += Math.round((stepMs * chunk.sampleRateHz) / 1000);
      remainingMs -= stepMs;
      if (this.positionSamples >= chunk.samples.length) {
        this.current = null;
      }
      if (stepMs <= 0) break;
    }
    return this.state;
  }

  get queuedChunks(): number {
    return this.queue.length + (this.current !== null ? 1 : 0);
  }
}
