import pytest

from emovoice.dialogue import (
    DEFAULT_TEMPLATE,
    DialogHistory,
    DialogTurn,
    PromptBudget,
    PromptDocument,
    Speaker,
    load_default_instruction,
    load_default_persona,
    render_prompt,
)
from emovoice.emotion import Emotion, EmotionLabel
from emovoice.errors import (
    BudgetUnsatisfiable,
    NonMonotonicTurnId,
    NotUserTurn,
    UnknownTurnId,
)

from oracles import greedy_budget_render

PERSONA = "I am a test persona."
INSTRUCTION = "Reply briefly and account for the user's emotional state."


def user_turn(turn_id, text, emotion=None):
    return DialogTurn(Speaker.USER, text, turn_id, turn_id * 1000.0, emotion)


def system_turn(turn_id, text):
    return DialogTurn(Speaker.SYSTEM, text, turn_id, turn_id * 1000.0)


def doc(history, text="Hi", emotion=Emotion.HAPPY):
    return PromptDocument(PERSONA, INSTRUCTION, history, text, emotion)


def test_append_to_empty():
    history = DialogHistory()
    history.append_turn(user_turn(1, "hello"))
    assert len(history) == 1


def test_duplicate_turn_id_rejected():
    history = DialogHistory()
    history.append_turn(user_turn(1, "hello"))
    with pytest.raises(NonMonotonicTurnId):
        history.append_turn(user_turn(1, "again"))


def test_hundred_sequential_appends():
    history = DialogHistory()
    for i in range(1, 101):
        speaker = Speaker.USER if i % 2 else Speaker.SYSTEM
        history.append_turn(DialogTurn(speaker, f"turn {i}", i, float(i)))
    assert [t.turn_id for t in history.turns()] == list(range(1, 101))


def test_edit_turn_replaces_text():
    history = DialogHistory()
    history.append_turn(user_turn(1, "helo wrld"))
    history.append_turn(system_turn(2, "hi"))
    history.edit_turn(1, "hello world")
    rendered = render_prompt(doc(history.turns()))
    assert "hello world" in rendered
    assert "helo wrld" not in rendered


def test_edit_system_turn_rejected():
    history = DialogHistory()
    history.append_turn(user_turn(1, "hello"))
    history.append_turn(system_turn(2, "hi"))
    with pytest.raises(NotUserTurn):
        history.edit_turn(2, "nope")


def test_edit_unknown_turn():
    history = DialogHistory()
    with pytest.raises(UnknownTurnId):
        history.edit_turn(42, "nothing here")


def test_edit_then_render_deterministic():
    history = DialogHistory()
    history.append_turn(user_turn(1, "first"))
    history.edit_turn(1, "first, corrected")
    a = render_prompt(doc(history.turns()))
    b = render_prompt(doc(history.turns()))
    assert a == b


def test_system_turn_cannot_carry_emotion():
    with pytest.raises(ValueError):
        DialogTurn(Speaker.SYSTEM, "hello", 1, 0.0, EmotionLabel(Emotion.HAPPY, 1.0, 0.0))


def test_empty_text_rejected():
    with pytest.raises(ValueError):
        DialogTurn(Speaker.USER, "   ", 1, 0.0)


def test_render_empty_history_happy():
    rendered = render_prompt(doc([], text="Hi", emotion=Emotion.HAPPY))
    assert rendered.endswith("User (the user looks happy): Hi\nAI:")
    assert rendered.startswith(PERSONA + "\n\n" + INSTRUCTION + "\n\n")


def test_render_deterministic_bytes():
    history = [user_turn(1, "hello"), system_turn(2, "hi there")]
    a = render_prompt(doc(history))
    b = render_prompt(doc(history))
    assert a.encode() == b.encode()


def test_component_order_fixed():
    history = [user_turn(1, "hello"), system_turn(2, "hi there")]
    rendered = render_prompt(doc(history, text="what's up"))
    positions = [
        rendered.index(PERSONA),
        rendered.index(INSTRUCTION),
        rendered.index("User: hello"),
        rendered.index("AI: hi there"),
        rendered.index("User (the user looks happy): what's up"),
    ]
    assert positions == sorted(positions)
    assert rendered.endswith("AI:")


def test_emotion_changes_only_final_user_line():
    history = [user_turn(1, "hello"), system_turn(2, "hi")]
    happy = render_prompt(doc(history, emotion=Emotion.HAPPY))
    sad = render_prompt(doc(history, emotion=Emotion.SAD))
    happy_lines = happy.splitlines()
    sad_lines = sad.splitlines()
    assert len(happy_lines) == len(sad_lines)
    diffs = [i for i, (a, b) in enumerate(zip(happy_lines, sad_lines)) if a != b]
    assert len(diffs) == 1
    assert happy_lines[diffs[0]].startswith("User (the user looks happy):")
    assert sad_lines[diffs[0]].startswith("User (the user looks sad):")


def test_budget_drops_oldest_whole_turns():
    history = []
    for i in range(1, 51):
        speaker = Speaker.USER if i % 2 else Speaker.SYSTEM
        history.append(DialogTurn(speaker, f"turn {i:03d} " + "x" * 120, i, float(i)))
    budget = PromptBudget(max_chars=6000)
    rendered = render_prompt(doc(history), budget)
    assert len(rendered) <= 6000
    assert "turn 050" in rendered  # newest retained
    assert "turn 001" not in rendered  # oldest dropped

    # greedy re-render oracle agrees
    def render_fn(turns):
        return render_prompt(PromptDocument(PERSONA, INSTRUCTION, turns, "Hi", Emotion.HAPPY),
                             PromptBudget(max_chars=10**9))

    expected, kept = greedy_budget_render(render_fn, history, 6000)
    assert rendered == expected
    # kept turns are a suffix, order preserved
    kept_ids = [t.turn_id for t in kept]
    assert kept_ids == list(range(kept_ids[0], 51))


def test_budget_unsatisfiable():
    with pytest.raises(BudgetUnsatisfiable):
        render_prompt(doc([]), PromptBudget(max_chars=10))


def test_default_template_and_configs_load():
    persona = load_default_persona()
    instruction = load_default_instruction()
    assert persona and instruction
    assert "emotional state" in instruction
    rendered = render_prompt(
        PromptDocument(persona, instruction, [], "Hello!", Emotion.NEUTRAL),
        template=DEFAULT_TEMPLATE,
    )
    assert rendered.endswith("User (the user looks neutral): Hello!\nAI:")
