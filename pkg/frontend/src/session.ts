/**
 * Outbound packet construction for one client session: a random 16-byte
 * session id and strictly-increasing per-kind sequence counters. The
 * client only ever builds kinds 0 (audio), 1 (video) and 2 (control);
 * server-audio and server-event are inbound-only.
 */

import {
  Packet,
  PacketKind,
  encodeAudioPayload,
  encodeControlPayload,
  encodePacket,
  encodeVideoPayload,
} from "./protocol.js";

export class ClientSession {
  readonly sessionId: Uint8Array;
  private seqs: Map<PacketKind, number> = new Map();

  constructor(sessionId?: Uint8Array) {
    if (sessionId !== undefined) {
      if (sessionId.length !== 16) throw new Error("session id must be 16 bytes");
      this.sessionId = sessionId;
    } else {
      const fresh = new Uint8Array(16);
      crypto.getRandomValues(fresh);
      this.sessionId = fresh;
    }
  }

  nextSeq(kind: PacketKind): number {
    const next = (this.seqs.get(kind) ?? 0) + 1;
    this.seqs.set(kind, next);
    return next;
  }

  lastSeq(kind: PacketKind): number {
    return this.seqs.get(kind) ?? 0;
  }

  private build(kind: PacketKind, payload: Uint8Array, timestampMs: number): Uint8Array {
    const packet: Packet = {
      kind,
      sessionId: this.sessionId,
      seq: this.nextSeq(kind),
      timestampMs: BigInt(Math.round(timestampMs)),
      payload,
    };
    return encodePacket(packet);
  }

  audioPacket(samples: Int16Array, sampleRateHz: number, timestampMs: number): Uint8Array {
    return this.build(PacketKind.Audio, encodeAudioPayload(samples, sampleRateHz), timestampMs);
  }

  videoPacket(jpeg: Uint8Array, width: number, height: number, timestampMs: number): Uint8Array {
    return this.build(PacketKind.Video, encodeVideoPayload(jpeg, width, height), timestampMs);
  }

  controlPacket(control: { type: string; [key: string]: unknown }, timestampMs: number): Uint8Array {
    return this.build(PacketKind.Control, encodeControlPayload(control), timestampMs);
  }
}
