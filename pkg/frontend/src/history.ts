/**
 * Transcript and emotion-panel models behind the second and first UI
 * panels. Pure state, DOM-free, so the render layer stays a thin map from
 * these structures to elements and tests can drive them headlessly.
 */

export interface TranscriptTurn {
  turnId: number;
  speaker: "user" | "system";
  text: string;
  emotion?: string;
}

export class TranscriptModel {
  private turns: Map<number, TranscriptTurn> = new Map();
  version = 0; // bumped on every change so renderers know to repaint

  applyTurnEvent(event: { turn_id: number; speaker: string; text: string; emotion?: string }): void {
    const turn: TranscriptTurn = {
      turnId: event.turn_id,
      speaker: event.speaker === "user" ? "user" : "system",
      text: event.text,
      emotion: event.emotion,
    };
    this.turns.set(turn.turnId, turn); // same id replaces: edits re-echo
    this.version += 1;
  }

  applyHistorySnapshot(turns: { turn_id: number; speaker: string; text: string }[]): void {
    this.turns.clear();
    for (const turn of turns) {
      this.applyTurnEvent(turn);
    }
  }

  ordered(): TranscriptTurn[] {
    return [...this.turns.values()].sort((a, b) => a.turnId - b.turnId);
  }

  get(turnId: number): TranscriptTurn | undefined {
    return this.turns.get(turnId);
  }
}

export interface EmotionPanelState {
  label: string;
  confidence: number;
  updatedAtMs: number; // client clock when the update landed
}

export class EmotionPanelModel {
  readonly state: EmotionPanelState = { label: "neutral", confidence: 0, updatedAtMs: 0 };

  applyEmotionUpdate(event: { label: string; confidence: number }, nowMs: number): void {
    this.state.label = event.label;
    this.state.confidence = event.confidence;
    this.state.updatedAtMs = nowMs;
  }
}
