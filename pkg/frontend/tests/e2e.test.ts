/**
 * Scripted session against the real server with fake backends:
 *   - three utterances -> three user + three system turns
 *   - an emotion_update reflected in the panel model within 500 ms
 *   - mouth animation active exactly between speaking_start/speaking_end
 *   - transcript edit round-trip updating both the UI model and the
 *     server-side history
 *
 * Runs under `node --experimental-websocket`. The server is spawned from
 * the repository's Python package.
 */

import { test, before, after } from "node:test";
import assert from "node:assert/strict";
import { spawn, ChildProcess } from "node:child_process";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { readFileSync } from "node:fs";

import { DialogueClient } from "../src/client.js";
import { RationalDownsampler } from "../src/downsample.js";
import { decodePacket, PacketKind } from "../src/protocol.js";

declare const WebSocket: any;
declare function setTimeout(fn: () => void, ms: number): any;

const HERE = dirname(fileURLToPath(import.meta.url));
const REPO = join(HERE, "..", "..", "..");
const CONFIG = join(HERE, "..", "..", "e2e-config.yaml");

const CAPTURE_RATE = 44100;
const PACKET_SAMPLES = 2048;

let server: ChildProcess;
let port = 0;
let ws: any;
let client: DialogueClient;
const outbound: Uint8Array[] = [];
const speakingWindows: { start: number; end: number | null }[] = [];
const mouthOpenTimes: number[] = [];
let clockMs = 0;

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

async function waitFor(predicate: () => boolean, timeoutMs: number, what: string): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (predicate()) return;
    await sleep(20);
  }
  assert.fail(`timed out waiting for ${what}`);
}

before(async () => {
  server = spawn(
    "python3",
    ["-m", "emovoice.cli", "serve", "--config", CONFIG, "--port", "0", "--log-level", "info"],
    { cwd: REPO, stdio: ["ignore", "pipe", "pipe"] },
  );
  let stderr = "";
  await new Promise<void>((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error(`server did not start:\n${stderr}`)), 15000);
    server.stderr.on("data", (data: any) => {
      stderr += String(data);
      const match = stderr.match(/listening on [\d.]+:(\d+)/);
      if (match) {
        port = Number(match[1]);
        clearTimeout(timer);
        resolve();
      }
    });
    server.on("exit", () => reject(new Error(`server exited early:\n${stderr}`)));
  });

  ws = new WebSocket(`ws://127.0.0.1:${port}/`);
  ws.binaryType = "arraybuffer";
  await new Promise<void>((resolve, reject) => {
    ws.onopen = () => resolve();
    ws.onerror = (err: any) => reject(new Error(`websocket failed: ${err?.message ?? err}`));
  });

  client = new DialogueClient({
    send: (data) => {
      outbound.push(data);
      ws.send(data);
    },
  });
  client.onEvent((event) => {
    if (event.type === "speaking_start") {
      speakingWindows.push({ start: Date.now(), end: null });
    } else if (event.type === "speaking_end") {
      const window = speakingWindows[speakingWindows.length - 1];
      if (window) window.end = Date.now();
    }
  });
  let lastTick = Date.now();
  ws.onmessage = (message: any) => {
    client.handleMessage(new Uint8Array(message.data));
    // drive the face panel like the browser's render loop would
    const now = Date.now();
    const state = client.playback.advance(now - lastTick);
    lastTick = now;
    if (state.mouthOpen) mouthOpenTimes.push(now);
  };
});

after(() => {
  try {
    ws?.close();
  } catch {}
  server?.kill("SIGTERM");
});

function sendUtterance(speechMs: number): void {
  const down = new RationalDownsampler(CAPTURE_RATE);
  const speech = new Float32Array((speechMs * CAPTURE_RATE) / 1000);
  for (let i = 0; i < speech.length; i++) {
    speech[i] = 0.25 * Math.sin((2 * Math.PI * 1000 * i) / CAPTURE_RATE);
  }
  const silence = new Float32Array((800 * CAPTURE_RATE) / 1000);
  const resampled16k = [down.process(speech), down.process(silence)];
  for (const block of resampled16k) {
    for (let start = 0; start + PACKET_SAMPLES <= block.length; start += PACKET_SAMPLES) {
      const samples = block.slice(start, start + PACKET_SAMPLES);
      client.sendAudioBlock(samples, 16000, clockMs);
      clockMs += Math.round((PACKET_SAMPLES * 1000) / 16000);
    }
  }
}

const TINY_JPEG = new Uint8Array([0xff, 0xd8, 0xff, 0xe0, 0, 16, 74, 70, 73, 70, 0, 0xff, 0xd9]);

test("scripted session: turns, emotion, mouth, transcript edit", async () => {
  // a video frame first so the emotion tracker has something to classify
  const beforeEmotion = Date.now();
  client.sendVideoFrame(TINY_JPEG, 400, 300, clockMs);
  await waitFor(() => client.emotionPanel.state.label === "happy", 5000, "emotion_update");
  const panelDelay = client.emotionPanel.state.updatedAtMs - beforeEmotion;
  assert.ok(panelDelay <= 500, `emotion panel updated after ${panelDelay} ms`);

  // three utterances -> three complete turns
  for (let i = 0; i < 3; i++) {
    sendUtterance(1000);
    const expected = (i + 1) * 2;
    await waitFor(
      () => client.transcript.ordered().length >= expected &&
        speakingWindows.length > i && speakingWindows[i].end !== null,
      30_000,
      `turn ${i + 1} to complete`,
    );
  }

  const turns = client.transcript.ordered();
  assert.equal(turns.filter((t) => t.speaker === "user").length, 3);
  assert.equal(turns.filter((t) => t.speaker === "system").length, 3);
  assert.equal(turns[0].text, "first utterance");
  assert.equal(turns[1].text, "first reply");

  // mouth opened during every speaking window and never outside one
  assert.equal(speakingWindows.length, 3);
  assert.ok(mouthOpenTimes.length > 0, "mouth never opened");
  for (const at of mouthOpenTimes) {
    const inside = speakingWindows.some(
      (w) => at >= w.start - 50 && (w.end === null || at <= w.end + 50),
    );
    assert.ok(inside, "mouth was open outside a speaking window");
  }
  assert.equal(client.playback.state.mouthOpen, false); // shut after speaking_end

  // transcript edit round trip: UI bubble and server history both update
  client.sendTranscriptEdit(1, "first utterance, corrected");
  await waitFor(
    () => client.transcript.get(1)?.text === "first utterance, corrected",
    5000,
    "re-echoed turn after edit",
  );
  client.requestHistory();
  await waitFor(
    () => client.events.some((e) => e.type === "history"),
    5000,
    "history snapshot",
  );
  const history = client.events.filter((e) => e.type === "history").pop();
  assert.equal(history!.turns[0].text, "first utterance, corrected");
  assert.equal(history!.turns.length, 6);
});

test("every outbound packet validates against the wire grammar", () => {
  assert.ok(outbound.length > 10);
  const vectors = JSON.parse(readFileSync(
    join(REPO, "src", "emovoice", "data", "wire_vectors.json"), "utf-8"));
  assert.ok(vectors.valid.length >= 50); // same grammar the server tests use
  for (const raw of outbound) {
    const packet = decodePacket(raw); // throws on any malformed packet
    assert.ok([PacketKind.Audio, PacketKind.Video, PacketKind.Control].includes(packet.kind));
    assert.deepEqual([...packet.sessionId], [...client.session.sessionId]);
  }
});
