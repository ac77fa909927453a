/**
 * Transport-agnostic dialogue client: wires inbound packets to the panel
 * models and exposes the outbound operations (audio/video/control). The
 * socket is any object with send() and callback hooks, so the browser
 * passes a WebSocket and tests can pass whatever they like.
 */

import { EmotionPanelModel, TranscriptModel } from "./history.js";
import { PlaybackEngine } from "./playback.js";
import { PacketKind, decodeAudioPayload, decodeEventPayload, decodePacket } from "./protocol.js";
import { ClientSession } from "./session.js";

export interface PacketSocket {
  send(data: Uint8Array): void;
}

export type EventHook = (event: { type: string; [key: string]: any }) => void;

export class DialogueClient {
  readonly session: ClientSession;
  readonly transcript = new TranscriptModel();
  readonly emotionPanel = new EmotionPanelModel();
  readonly playback = new PlaybackEngine();
  readonly events: { type: string; [key: string]: any }[] = [];
  droppedServerPackets = 0;

  private hooks: EventHook[] = [];

  constructor(
    private readonly socket: PacketSocket,
    private readonly now: () => number = () => Date.now(),
    session?: ClientSession,
  ) {
    this.session = session ?? new ClientSession();
  }

  onEvent(hook: EventHook): void {
    this.hooks.push(hook);
  }

  /** Feed one inbound binary message (an encoded packet). */
  handleMessage(data: Uint8Array): void {
    const packet = decodePacket(data);
    if (packet.kind === PacketKind.ServerEvent) {
      const event = decodeEventPayload(packet.payload);
      this.events.push(event);
      this.applyEvent(event);
      for (const hook of this.hooks) hook(event);
      return;
    }
    if (packet.kind === PacketKind.ServerAudio) {
      const { sampleRateHz, samples } = decodeAudioPayload(packet.payload);
      this.playback.enqueue(packet.seq, samples, sampleRateHz);
      return;
    }
    // server must only send kinds 3 and 4
    this.droppedServerPackets += 1;
  }

  private applyEvent(event: { type: string; [key: string]: any }): void {
    switch (event.type) {
      case "turn":
        this.transcript.applyTurnEvent(event as any);
        break;
      case "history":
        this.transcript.applyHistorySnapshot(event.turns ?? []);
        break;
      case "emotion_update":
        this.emotionPanel.applyEmotionUpdate(event as any, this.now());
        break;
      case "speaking_start":
        this.playback.onSpeakingStart();
        break;
      case "speaking_end":
        this.playback.onSpeakingEnd();
        break;
      default:
        break; // error/metrics events are surfaced through hooks only
    }
  }

  sendAudioBlock(samples: Int16Array, sampleRateHz: number, timestampMs: number): void {
    this.socket.send(this.session.audioPacket(samples, sampleRateHz, timestampMs));
  }

  sendVideoFrame(jpeg: Uint8Array, width: number, height: number, timestampMs: number): void {
    this.socket.send(this.session.videoPacket(jpeg, width, height, timestampMs));
  }

  sendTranscriptEdit(turnId: number, text: string): void {
    this.socket.send(this.session.controlPacket(
      { type: "transcript_edit", turn_id: turnId, text }, this.now()));
  }

  requestHistory(): void {
    this.socket.send(this.session.controlPacket({ type: "get_history" }, this.now()));
  }

  requestMetrics(): void {
    this.socket.send(this.session.controlPacket({ type: "get_metrics" }, this.now()));
  }
}
