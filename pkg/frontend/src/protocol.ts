/**
 * Binary packet codec, byte-for-byte the server's wire format:
 *
 *   magic "FC" (2) | version u8 (=1) | kind u8 | session_id (16)
 *   | seq u32 BE | timestamp_ms u64 BE | payload_len u32 BE | payload
 *
 * Kinds: 0 audio, 1 video, 2 control, 3 server-audio, 4 server-event.
 * Audio payload: sample_rate u32 BE + PCM16 little-endian mono.
 * Video payload: width u16 BE + height u16 BE + JPEG bytes.
 */

export const MAGIC0 = 0x46; // "F"
export const MAGIC1 = 0x43; // "C"
export const VERSION = 1;
export const HEADER_SIZE = 36;

export enum PacketKind {
  Audio = 0,
  Video = 1,
  Control = 2,
  ServerAudio = 3,
  ServerEvent = 4,
}

export interface Packet {
  kind: PacketKind;
  sessionId: Uint8Array; // 16 bytes
  seq: number;
  timestampMs: bigint; // u64: beyond Number's 2^53 integer range
  payload: Uint8Array;
}

export class ProtocolError extends Error {
  constructor(readonly code: string, message: string) {
    super(message);
  }
}

export function encodePacket(packet: Packet): Uint8Array {
  if (packet.sessionId.length !== 16) {
    throw new ProtocolError("bad_session_id", "session_id must be 16 bytes");
  }
  const out = new Uint8Array(HEADER_SIZE + packet.payload.length);
  const view = new DataView(out.buffer);
  out[0] = MAGIC0;
  out[1] = MAGIC1;
  out[2] = VERSION;
  out[3] = packet.kind;
  out.set(packet.sessionId, 4);
  view.setUint32(20, packet.seq);
  view.setBigUint64(24, packet.timestampMs);
  view.setUint32(32, packet.payload.length);
  out.set(packet.payload, HEADER_SIZE);
  return out;
}

export function decodePacket(data: Uint8Array): Packet {
  if (data.length < HEADER_SIZE) {
    throw new ProtocolError("truncated_payload", `packet of ${data.length} bytes`);
  }
  if (data[0] !== MAGIC0 || data[1] !== MAGIC1) {
    throw new ProtocolError("bad_magic", "bad magic");
  }
  if (data[2] !== VERSION) {
    throw new ProtocolError("unsupported_version", `version ${data[2]}`);
  }
  const kind = data[3];
  if (kind > 4) {
    throw new ProtocolError("unknown_kind", `kind ${kind}`);
  }
  const view = new DataView(data.buffer, data.byteOffset, data.byteLength);
  const payloadLen = view.getUint32(32);
  if (payloadLen !== data.length - HEADER_SIZE) {
    throw new ProtocolError(
      "truncated_payload",
      `payload_len=${payloadLen} but ${data.length - HEADER_SIZE} bytes follow`,
    );
  }
  return {
    kind,
    sessionId: data.slice(4, 20),
    seq: view.getUint32(20),
    timestampMs: view.getBigUint64(24),
    payload: data.slice(HEADER_SIZE),
  };
}

export function encodeAudioPayload(samples: Int16Array, sampleRateHz: number): Uint8Array {
  const out = new Uint8Array(4 + samples.length * 2);
  const view = new DataView(out.buffer);
  view.setUint32(0, sampleRateHz);
  for (let i = 0; i < samples.length; i++) {
    view.setInt16(4 + 2 * i, samples[i], true); // little-endian PCM
  }
  return out;
}

export function decodeAudioPayload(payload: Uint8Array): { sampleRateHz: number; samples: Int16Array } {
  if (payload.length < 6 || (payload.length - 4) % 2 !== 0) {
    throw new ProtocolError("truncated_payload", "bad audio payload length");
  }
  const view = new DataView(payload.buffer, payload.byteOffset, payload.byteLength);
  const sampleRateHz = view.getUint32(0);
  const samples = new Int16Array((payload.length - 4) / 2);
  for (let i = 0; i < samples.length; i++) {
    samples[i] = view.getInt16(4 + 2 * i, true);
  }
  return { sampleRateHz, samples };
}

export function encodeVideoPayload(jpeg: Uint8Array, width: number, height: number): Uint8Array {
  if (jpeg[0] !== 0xff || jpeg[1] !== 0xd8) {
    throw new ProtocolError("undecodable_frame", "missing JPEG SOI marker");
  }
  const out = new Uint8Array(4 + jpeg.length);
  const view = new DataView(out.buffer);
  view.setUint16(0, width);
  view.setUint16(2, height);
  out.set(jpeg, 4);
  return out;
}

export function encodeControlPayload(control: { type: string; [key: string]: unknown }): Uint8Array {
  return new TextEncoder().encode(JSON.stringify(control));
}

export function decodeEventPayload(payload: Uint8Array): { type: string; [key: string]: any } {
  const parsed = JSON.parse(new TextDecoder().decode(payload));
  if (typeof parsed !== "object" || parsed === null || typeof parsed.type !== "string") {
    throw new ProtocolError("truncated_payload", "event payload is not a typed JSON object");
  }
  return parsed;
}
