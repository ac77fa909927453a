/**
 * Client-side rational downsampler to 16 kHz (windowed-sinc polyphase),
 * halving upstream bandwidth before packets leave the browser.
 *
 * Supports the two capture rates browsers actually produce: 44100 (L=160,
 * D=441) and 48000 (L=1, D=3). Output length per block is
 * round(n * 16000 / fromRate), so a 2048-sample block at 44.1 kHz becomes
 * exactly 743 samples.
 */

const TARGET_RATE = 16000;

interface Ratio {
  up: number;
  down: number;
}

function ratioFor(fromRate: number): Ratio {
  if (fromRate === 44100) return { up: 160, down: 441 };
  if (fromRate === 48000) return { up: 1, down: 3 };
  if (fromRate === TARGET_RATE) return { up: 1, down: 1 };
  throw new Error(`unsupported capture rate ${fromRate}`);
}

export class RationalDownsampler {
  private readonly up: number;
  private readonly down: number;
  private readonly taps: number;
  private readonly center: number;
  private readonly phases: Float64Array[]; // [up][taps]

  constructor(readonly fromRate: number, attenuationDb = 80, transitionHz = 1200) {
    const { up, down } = ratioFor(fromRate);
    this.up = up;
    this.down = down;
    const fsUp = fromRate * up;
    const deltaOmega = (2 * Math.PI * transitionHz) / fsUp;
    const halfLen = Math.ceil((attenuationDb - 7.95) / (2.285 * deltaOmega) / 2);
    const cutoff = (TARGET_RATE / 2 - transitionHz / 2) / fsUp; // cycles/sample
    const beta = 0.1102 * (attenuationDb - 8.7);
    const proto = new Float64Array(2 * halfLen + 1);
    for (let i = 0; i < proto.length; i++) {
      const n = i - halfLen;
      proto[i] = 2 * cutoff * sinc(2 * cutoff * n) * kaiser(n / halfLen, beta) * up;
    }
    this.center = halfLen;
    this.taps = Math.ceil(proto.length / up);
    this.phases = [];
    for (let r = 0; r < up; r++) {
      const phase = new Float64Array(this.taps);
      for (let j = 0; j < this.taps; j++) {
        const idx = j * up + r;
        phase[j] = idx < proto.length ? proto[idx] : 0;
      }
      this.phases.push(phase);
    }
  }

  /** Resample one float block ([-1, 1]) to 16 kHz PCM16. Stateless per block. */
  process(input: Float32Array): Int16Array {
    if (this.up === 1 && this.down === 1) {
      return floatToPcm16(input);
    }
    const n = input.length;
    const nOut = Math.round((n * this.up) / this.down);
    const pad = this.taps;
    const x = new Float64Array(n + 2 * pad + 64);
    for (let i = 0; i < n; i++) x[pad + i] = input[i];
    const out = new Int16Array(nOut);
    for (let m = 0; m < nOut; m++) {
      const q = m * this.down + this.center;
      const k0 = Math.floor(q / this.up);
      const r = q - k0 * this.up;
      const coeffs = this.phases[r];
      const base = k0 + pad;
      let acc = 0;
      for (let j = 0; j < this.taps; j++) {
        acc += coeffs[j] * x[base - j];
      }
      out[m] = clampPcm(acc * 32767);
    }
    return out;
  }
}

function sinc(x: number): number {
  if (x === 0) return 1;
  const px = Math.PI * x;
  return Math.sin(px) / px;
}

/** Kaiser window on t in [-1, 1]. */
function kaiser(t: number, beta: number): number {
  const arg = 1 - t * t;
  if (arg < 0) return 0;
  return besselI0(beta * Math.sqrt(arg)) / besselI0(beta);
}

function besselI0(x: number): number {
  // power series; converges quickly for the betas used here
  let sum = 1;
  let term = 1;
  for (let k = 1; k < 64; k++) {
    term *= (x / (2 * k)) * (x / (2 * k));
    sum += term;
    if (term < 1e-16 * sum) break;
  }
  return sum;
}

export function floatToPcm16(input: Float32Array): Int16Array {
  const out = new Int16Array(input.length);
  for (let i = 0; i < input.length; i++) {
    out[i] = clampPcm(input[i] * 32767);
  }
  return out;
}

function clampPcm(value: number): number {
  const rounded = Math.round(value);
  if (rounded > 32767) return 32767;
  if (rounded < -32768) return -32768;
  return rounded;
}
