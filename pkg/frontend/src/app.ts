/**
 * Browser entry point: three panels (emotion, transcript, talking face),
 * microphone/camera capture, and the packet socket. All protocol and
 * panel-state logic lives in the imported modules; this file is the DOM
 * and media glue.
 */

import { DialogueClient } from "./client.js";
import { RationalDownsampler } from "./downsample.js";

const PACKET_SAMPLES = 2048; // per audio packet at 16 kHz
const VIDEO_WIDTH = 400;
const VIDEO_HEIGHT = 300;
const VIDEO_MIN_GAP_MS = 50; // <= 20 FPS

let client: DialogueClient;
let socket: WebSocket;
let sampleClock = 0; // sent samples at 16 kHz, the capture timestamp base

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el;
}

function banner(text: string): void {
  const el = $("banner");
  el.textContent = text;
  el.style.display = text ? "block" : "none";
}

function connect(): void {
  const url = `${location.protocol === "https:" ? "wss" : "ws"}://${location.host}/`;
  socket = new WebSocket(url);
  socket.binaryType = "arraybuffer";
  if (client === undefined) {
    client = new DialogueClient({ send: (data) => socket.send(data as Uint8Array<ArrayBuffer>) });
    client.onEvent(renderEvent);
  }
  socket.onmessage = (message) => client.handleMessage(new Uint8Array(message.data as ArrayBuffer));
  socket.onopen = () => {
    banner("");
    client.requestHistory(); // repaint after a reconnect
  };
  socket.onclose = () => {
    banner("connection lost, reconnecting...");
    setTimeout(connect, 1000); // same session id: the server dedups by seq
  };
}

// -- audio capture ------------------------------------------------------------

async function startAudio(): Promise<void> {
  let stream: MediaStream;
  try {
    stream = await navigator.mediaDevices.getUserMedia({ audio: { channelCount: 1 } });
  } catch {
    banner("microphone permission denied");
    return;
  }
  const context = new AudioContext();
  await context.audioWorklet.addModule("pcm-capture-worklet.js");
  const source = context.createMediaStreamSource(stream);
  const node = new AudioWorkletNode(context, "pcm-capture");
  source.connect(node);

  const downsampler = new RationalDownsampler(context.sampleRate);
  // overlap-discard streaming: keep filter-length context between blocks
  const contextSamples = 2048;
  const discardOut = Math.round((contextSamples * 16000) / context.sampleRate);
  let tail = new Float32Array(0);
  let captured: Float32Array[] = [];
  let capturedLen = 0;
  let outPending = new Int16Array(0);

  node.port.onmessage = (event) => {
    const block = event.data as Float32Array;
    captured.push(block);
    capturedLen += block.length;
    if (capturedLen < 8192) return;

    const input = new Float32Array(tail.length + capturedLen);
    input.set(tail, 0);
    let offset = tail.length;
    for (const chunk of captured) {
      input.set(chunk, offset);
      offset += chunk.length;
    }
    captured = [];
    capturedLen = 0;
    tail = input.slice(Math.max(0, input.length - contextSamples));

    const resampled = downsampler.process(input);
    const fresh = resampled.slice(tail.length > 0 && input.length > contextSamples ? discardOut : 0);

    const merged = new Int16Array(outPending.length + fresh.length);
    merged.set(outPending, 0);
    merged.set(fresh, outPending.length);
    let start = 0;
    while (merged.length - start >= PACKET_SAMPLES) {
      const packetSamples = merged.slice(start, start + PACKET_SAMPLES);
      if (socket.readyState === WebSocket.OPEN) {
        client.sendAudioBlock(packetSamples, 16000, Math.round((sampleClock * 1000) / 16000));
      }
      sampleClock += PACKET_SAMPLES;
      start += PACKET_SAMPLES;
    }
    outPending = merged.slice(start);
  };
}

// -- video capture ------------------------------------------------------------

async function startVideo(): Promise<void> {
  let stream: MediaStream;
  try {
    stream = await navigator.mediaDevices.getUserMedia({
      video: { width: VIDEO_WIDTH, height: VIDEO_HEIGHT },
    });
  } catch {
    banner("camera denied: audio-only session");
    return;
  }
  const video = $("preview") as HTMLVideoElement;
  video.srcObject = stream;
  await video.play();

  const canvas = document.createElement("canvas");
  canvas.width = VIDEO_WIDTH;
  canvas.height = VIDEO_HEIGHT;
  const ctx = canvas.getContext("2d");
  if (!ctx) return;

  let lastSent = 0;
  let encodeFailures = 0;
  const tick = () => {
    const now = performance.now();
    if (now - lastSent >= VIDEO_MIN_GAP_MS && socket.readyState === WebSocket.OPEN) {
      lastSent = now;
      ctx.drawImage(video, 0, 0, VIDEO_WIDTH, VIDEO_HEIGHT);
      canvas.toBlob(
        (blob) => {
          if (!blob) {
            encodeFailures += 1;
            return;
          }
          blob.arrayBuffer().then((buffer) => {
            client.sendVideoFrame(new Uint8Array(buffer), VIDEO_WIDTH, VIDEO_HEIGHT, Date.now());
          });
        },
        "image/jpeg",
        0.7,
      );
    }
    setTimeout(tick, VIDEO_MIN_GAP_MS);
  };
  tick();
}

// -- rendering ------------------------------------------------------------------

function renderEvent(event: { type: string; [key: string]: any }): void {
  if (event.type === "turn" || event.type === "history") {
    renderTranscript();
  } else if (event.type === "emotion_update") {
    $("emotion-label").textContent =
      `${client.emotionPanel.state.label} (${(client.emotionPanel.state.confidence * 100).toFixed(0)}%)`;
  } else if (event.type === "error") {
    banner(`server error at ${event.stage}: ${event.code}`);
  }
}

function renderTranscript(): void {
  const list = $("transcript");
  list.innerHTML = "";
  for (const turn of client.transcript.ordered()) {
    const bubble = document.createElement("div");
    bubble.className = `bubble ${turn.speaker}`;
    bubble.textContent = turn.text;
    if (turn.speaker === "user") {
      bubble.title = "click to correct the transcript";
      bubble.onclick = () => {
        const corrected = window.prompt("Correct your words:", turn.text);
        if (corrected && corrected.trim() && corrected !== turn.text) {
          client.sendTranscriptEdit(turn.turnId, corrected.trim());
        }
      };
    }
    list.appendChild(bubble);
  }
  list.scrollTop = list.scrollHeight;
}

function startFaceLoop(): void {
  const canvas = $("face") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  let last = performance.now();
  const draw = () => {
    const now = performance.now();
    const state = client.playback.advance(now - last);
    last = now;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.fillStyle = "#f2c9a0";
    ctx.beginPath();
    ctx.arc(150, 150, 110, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = "#333";
    ctx.beginPath();
    ctx.arc(110, 120, 12, 0, 2 * Math.PI);
    ctx.arc(190, 120, 12, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = "#a33";
    if (state.mouthOpen) {
      ctx.beginPath();
      ctx.ellipse(150, 200, 34, 10 + state.envelope * 60, 0, 0, 2 * Math.PI);
      ctx.fill();
    } else {
      ctx.fillRect(116, 196, 68, 6);
    }
    requestAnimationFrame(draw);
  };
  requestAnimationFrame(draw);
}

// -- server audio playback --------------------------------------------------------

function startSpeakerLoop(): void {
  const context = new AudioContext({ sampleRate: 16000 });
  let playCursor = 0;
  client.playback.onChunk = (samples, sampleRateHz) => {
    const buffer = context.createBuffer(1, samples.length, sampleRateHz);
    const channel = buffer.getChannelData(0);
    for (let i = 0; i < samples.length; i++) channel[i] = samples[i] / 32768;
    const source = context.createBufferSource();
    source.buffer = buffer;
    source.connect(context.destination);
    playCursor = Math.max(playCursor, context.currentTime + 0.02); // gapless scheduling
    source.start(playCursor);
    playCursor += buffer.duration;
  };
}

async function boot(): Promise<void> {
  connect();
  startFaceLoop();
  startSpeakerLoop();
  await startAudio();
  await startVideo();
}

if (typeof document !== "undefined" && document.getElementById("face")) {
  boot();
}
