"""Dialog history and deterministic prompt assembly.

The rendered prompt has four components in fixed order: persona,
instruction (which directs the model to account for the user's emotional
state), dialog history, and the emotion-tagged current query. The template
is configuration: a UTF-8 file with {persona}, {instruction}, {history},
{emotion_text} and {user_text} placeholders can replace the default
wording without touching code.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum
from importlib import resources

from .emotion import Emotion, EmotionLabel, emotion_to_text
from .errors import BudgetUnsatisfiable, NonMonotonicTurnId, NotUserTurn, UnknownTurnId

DEFAULT_MAX_CHARS = 6000

DEFAULT_TEMPLATE = "{persona}\n\n{instruction}\n\n{history}User ({emotion_text}): {user_text}\nAI:"


class Speaker(str, Enum):
    USER = "user"
    SYSTEM = "system"


@dataclass
class DialogTurn:
    speaker: Speaker
    text: str
    turn_id: int
    created_at_ms: float
    emotion: EmotionLabel | None = None

    def __post_init__(self):
        self.speaker = Speaker(self.speaker)
        if self.speaker is Speaker.SYSTEM and self.emotion is not None:
            raise ValueError("system turns carry no emotion")
        if not self.text.strip():
            raise ValueError("turn text must be non-empty after trimming")


class DialogHistory:
    """Per-session turn list; mutations serialize against concurrent reads."""

    def __init__(self):
        self._turns: list[DialogTurn] = []
        self._lock = threading.Lock()

    @property
    def next_turn_id(self) -> int:
        with self._lock:
            return self._turns[-1].turn_id + 1 if self._turns else 1

    def append_turn(self, turn: DialogTurn) -> None:
        with self._lock:
            expected = self._turns[-1].turn_id + 1 if self._turns else 1
            if turn.turn_id != expected:
                raise NonMonotonicTurnId(f"expected turn_id {expected}, got {turn.turn_id}")
            self._turns.append(turn)

    def edit_turn(self, turn_id: int, new_text: str) -> DialogTurn:
        if not new_text.strip():
            raise ValueError("turn text must be non-empty after trimming")
        with self._lock:
            for turn in self._turns:
                if turn.turn_id == turn_id:
                    if turn.speaker is not Speaker.USER:
                        raise NotUserTurn(f"turn {turn_id} is a system turn")
                    turn.text = new_text
                    return turn
        raise UnknownTurnId(f"no turn with id {turn_id}")

    def turns(self) -> list[DialogTurn]:
        with self._lock:
            return list(self._turns)

    def __len__(self) -> int:
        with self._lock:
            return len(self._turns)


@dataclass
class PromptBudget:
    max_chars: int = DEFAULT_MAX_CHARS


@dataclass
class PromptDocument:
    persona: str
    instruction: str
    history: list[DialogTurn]
    current_user_text: str
    current_emotion: Emotion | EmotionLabel

    def __post_init__(self):
        if not self.persona.strip() or not self.instruction.strip():
            raise ValueError("persona and instruction must be non-empty")


def _history_block(turns: list[DialogTurn]) -> str:
    if not turns:
        return ""
    lines = []
    for turn in turns:
        prefix = "User" if turn.speaker is Speaker.USER else "AI"
        lines.append(f"{prefix}: {turn.text}")
    return "\n".join(lines) + "\n"


def render_prompt(doc: PromptDocument, budget: PromptBudget | None = None,
                  template: str = DEFAULT_TEMPLATE) -> str:
    """Render the four-component prompt, deterministically.

    When the render exceeds the budget, whole history turns are dropped
    oldest-first (never split, never reordered) until it fits.
    """
    budget = budget or PromptBudget()
    kept = list(doc.history)

    def render(turns: list[DialogTurn]) -> str:
        return template.format(
            persona=doc.persona,
            instruction=doc.instruction,
            history=_history_block(turns),
            emotion_text=emotion_to_text(doc.current_emotion),
            user_text=doc.current_user_text,
        )

    text = render(kept)
    while len(text) > budget.max_chars and kept:
        kept.pop(0)
        text = render(kept)
    if len(text) > budget.max_chars:
        raise BudgetUnsatisfiable(
            f"fixed prompt components need {len(text)} chars, budget is {budget.max_chars}"
        )
    return text


def load_default_persona() -> str:
    return resources.files("emovoice.data").joinpath("default_persona.txt").read_text().strip()


def load_default_instruction() -> str:
    return resources.files("emovoice.data").joinpath("default_instruction.txt").read_text().strip()


def load_template(path: str | None = None) -> str:
    if path is None:
        return DEFAULT_TEMPLATE
    with open(path, encoding="utf-8") as fh:
        return fh.read().rstrip("\n")
