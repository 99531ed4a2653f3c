"""Instruction idioms for performer programming, plus a virtual-performer
simulator and the performatized bubble sort.

Steps are symbolic: an id is whatever names a sound or image (a store id in
production, a bare token like "SHLOOEEP" in tests and simulations). The
simulator interprets step streams the way a trained performer would: trigger
sounds resolve through learned bindings, layered if-tones gate the following
sound, and an else-sound inverts on whether the previous sound was performed.
No audio is rendered here.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Protocol, Sequence, Union

from .errors import RejectedError

IF_MARKER = "__if__"
ELSE_MARKER = "__else__"
TOGGLE_POSTURE = "toggle-posture"

# actions with a posture the simulator can test ("ask yourself if you are
# performing the action")
_POSTURE_OF_ACTION = {"stand": "standing", "sit": "sitting"}


# -- steps ----------------------------------------------------------------


@dataclass(frozen=True)
class PlayStep:
    audio_id: str


@dataclass(frozen=True)
class ShowStep:
    image_id: str


@dataclass(frozen=True)
class PauseStep:
    ms: int

    def __post_init__(self):
        if self.ms < 0:
            raise RejectedError("pause must be >= 0 ms")


@dataclass(frozen=True)
class LayerStep:
    audio_ids: tuple[str, ...]

    def __post_init__(self):
        if not self.audio_ids:
            raise RejectedError("layer needs at least one audio id")


Step = Union[PlayStep, ShowStep, PauseStep, LayerStep]


# -- meanings -------------------------------------------------------------


@dataclass(frozen=True)
class TriggerBinding:
    """Training outcome: hearing ``trigger`` means performing ``action``."""

    trigger: str
    action: str


@dataclass(frozen=True)
class ConditionalMeaning:
    condition_action: str
    then_action: str
    else_action: str


Meaning = Union[TriggerBinding, ConditionalMeaning]


@dataclass(frozen=True)
class PerplInstruction:
    steps: tuple[Step, ...]
    meanings: tuple[Meaning, ...] = ()
    name: str = ""

    def is_training(self) -> bool:
        return any(isinstance(m, TriggerBinding) for m in self.meanings)


def concat(*instructions: PerplInstruction, name: str = "") -> PerplInstruction:
    """The ``+`` of the pseudocode: steps and meanings in order."""
    steps: list[Step] = []
    meanings: list[Meaning] = []
    for ins in instructions:
        steps.extend(ins.steps)
        meanings.extend(ins.meanings)
    return PerplInstruction(steps=tuple(steps), meanings=tuple(meanings), name=name)


def practice(*items, name: str = "") -> PerplInstruction:
    """Build a practice block: str plays, int pauses, list/tuple layers."""
    steps: list[Step] = []
    for it in items:
        if isinstance(it, str):
            steps.append(PlayStep(it))
        elif isinstance(it, int):
            steps.append(PauseStep(it))
        elif isinstance(it, (list, tuple)):
            steps.append(LayerStep(tuple(it)))
        else:
            raise RejectedError(f"cannot turn {it!r} into a step")
    return PerplInstruction(steps=tuple(steps), name=name)


# -- builders -------------------------------------------------------------


def build_training(trigger: str, body: str,
                   when: str = "When you hear this sound") -> PerplInstruction:
    """'When you hear this sound' + trigger + body, binding trigger to body."""
    if not trigger:
        raise RejectedError("training needs an audio trigger")
    if not body:
        raise RejectedError("training needs a body")
    return PerplInstruction(
        steps=(PlayStep(when), PlayStep(trigger), PlayStep(body)),
        meanings=(TriggerBinding(trigger=trigger, action=body),),
    )


def build_action_training(pairs: Sequence[tuple[str, str]],
                          preamble: Sequence[str] = ("When you hear each sound",
                                                     "perform the action that follows"),
                          name: str = "") -> PerplInstruction:
    """Sound/action association training: preamble then trigger/description pairs."""
    if not pairs:
        raise RejectedError("association training needs at least one pair")
    steps: list[Step] = [PlayStep(p) for p in preamble]
    meanings: list[Meaning] = []
    for trigger, action in pairs:
        steps.extend((PlayStep(trigger), PlayStep(action)))
        meanings.append(TriggerBinding(trigger=trigger, action=action))
    return PerplInstruction(steps=tuple(steps), meanings=tuple(meanings), name=name)


def build_if_else_training(if_tone: str, else_sound: str, name: str = "") -> PerplInstruction:
    """Teach the layered-if and the else-sound conventions."""
    steps = (
        PlayStep("if you hear the sound for an action"),
        PlayStep("overlaid with this sound"),
        PlayStep(if_tone),
        PlayStep("ask yourself if you are performing the action"),
        PlayStep("if you are"),
        PlayStep("perform the action for the next sound you hear"),
        PlayStep("if you are not"),
        PlayStep("do not perform the next sound you hear"),
        PlayStep("when you hear the sound"),
        PlayStep(else_sound),
        PlayStep("if you did not perform the previous sound"),
        PlayStep("perform the action for the next sound you hear"),
    )
    meanings = (
        TriggerBinding(trigger=if_tone, action=IF_MARKER),
        TriggerBinding(trigger=else_sound, action=ELSE_MARKER),
    )
    return PerplInstruction(steps=steps, meanings=meanings, name=name)


def build_two_part_trigger_practice(trigger: str, pauses: Sequence[int]) -> PerplInstruction:
    """Trigger, pause, trigger, pause, ..., trigger; zero pauses are elided."""
    if not trigger:
        raise RejectedError("practice needs an audio trigger")
    steps: list[Step] = []
    for p in pauses:
        steps.append(PlayStep(trigger))
        if p < 0:
            raise RejectedError("pause must be >= 0 ms")
        if p > 0:
            steps.append(PauseStep(p))
    steps.append(PlayStep(trigger))
    return PerplInstruction(steps=tuple(steps))


def encode_conditional(condition_action: str, then_action: str, else_action: str,
                       if_tone: str, else_sound: str) -> PerplInstruction:
    """if (performing condition_action) then_action; else else_action."""
    for label, v in (("condition action", condition_action), ("then action", then_action),
                     ("else action", else_action), ("if tone", if_tone),
                     ("else sound", else_sound)):
        if not v:
            raise RejectedError(f"conditional needs a {label}")
    return PerplInstruction(
        steps=(
            LayerStep((if_tone, condition_action)),
            PlayStep(then_action),
            PlayStep(else_sound),
            PlayStep(else_action),
        ),
        meanings=(ConditionalMeaning(condition_action=condition_action,
                                     then_action=then_action,
                                     else_action=else_action),),
    )


# -- virtual performers ---------------------------------------------------


@dataclass(frozen=True)
class TimelineEvent:
    step_index: int
    kind: str  # "action" | "confused"
    detail: str  # performed action, or the unbound token


@dataclass
class PerformerState:
    posture: str = "standing"
    bindings: dict[str, str] = field(default_factory=dict)
    last_action: Optional[str] = None
    performed_last: bool = False
    gate_next: Optional[bool] = None  # set by an if-layer or an else-sound


class PerformerPolicy(Protocol):
    deterministic: bool

    def interpret(self, step: Step, state: PerformerState) -> list[tuple[str, str]]:
        """(kind, detail) events for one received step, mutating state."""
        ...


class ObedientPolicy:
    """Performs exactly what training established; never improvises."""

    deterministic = True

    def interpret(self, step: Step, state: PerformerState) -> list[tuple[str, str]]:
        if isinstance(step, PauseStep):
            return []
        if isinstance(step, ShowStep):
            return [("action", f"view {step.image_id}")]
        if isinstance(step, LayerStep):
            return self._layer(step, state)
        return self._play(step.audio_id, state)

    def _layer(self, step: LayerStep, state: PerformerState) -> list[tuple[str, str]]:
        resolved = [(t, self._resolve(t, state)) for t in step.audio_ids]
        if any(a == IF_MARKER for _, a in resolved):
            conditions = [a for _, a in resolved if a not in (IF_MARKER, None)]
            state.gate_next = any(self._is_performing(a, state) for a in conditions)
            return []
        out: list[tuple[str, str]] = []
        for token, _ in resolved:
            out.extend(self._play(token, state))
        return out

    def _play(self, token: str, state: PerformerState) -> list[tuple[str, str]]:
        action = self._resolve(token, state)
        if action == ELSE_MARKER:
            # "if you did not perform the previous sound, perform the next"
            state.gate_next = not state.performed_last
            return []
        if state.gate_next is not None:
            gated, state.gate_next = state.gate_next, None
            if not gated:
                state.performed_last = False
                return []
        if action is None:
            state.performed_last = False
            return [("confused", token)]
        return [("action", self._perform(action, state))]

    @staticmethod
    def _resolve(token: str, state: PerformerState) -> Optional[str]:
        seen = set()
        while token in state.bindings and token not in seen:
            seen.add(token)
            token = state.bindings[token]
        if token in state.bindings:
            # cyclic alias chain never reaches a performable action
            return None
        return token if seen else (token if token in (IF_MARKER, ELSE_MARKER) else None)

    @staticmethod
    def _is_performing(action: str, state: PerformerState) -> bool:
        posture = _POSTURE_OF_ACTION.get(action)
        if posture is not None:
            return state.posture == posture
        return state.last_action == action

    @staticmethod
    def _perform(action: str, state: PerformerState) -> str:
        if action == TOGGLE_POSTURE:
            action = "sit" if state.posture == "standing" else "stand"
        if action in _POSTURE_OF_ACTION:
            state.posture = _POSTURE_OF_ACTION[action]
        state.last_action = action
        state.performed_last = True
        return action


def simulate(instructions: Sequence[PerplInstruction],
             policies: Sequence[PerformerPolicy],
             intrinsic: Optional[Mapping[str, str]] = None,
             initial_postures: Optional[Sequence[str]] = None) -> list[list[TimelineEvent]]:
    """Run one instruction stream against every performer (same stream to all).

    Training instructions install their bindings and are not performed;
    everything else is interpreted step by step. Unbound triggers become
    "confused" events, never exceptions.
    """
    if not policies:
        raise RejectedError("at least one performer required")
    states = [PerformerState(bindings=dict(intrinsic or {})) for _ in policies]
    if initial_postures:
        for st, posture in zip(states, initial_postures):
            st.posture = posture
    timelines: list[list[TimelineEvent]] = [[] for _ in policies]
    step_index = 0
    for ins in instructions:
        if ins.is_training():
            for st in states:
                for m in ins.meanings:
                    if isinstance(m, TriggerBinding):
                        st.bindings[m.trigger] = m.action
            step_index += len(ins.steps)
            continue
        for step in ins.steps:
            for policy, st, tl in zip(policies, states, timelines):
                for kind, detail in policy.interpret(step, st):
                    tl.append(TimelineEvent(step_index=step_index, kind=kind, detail=detail))
            step_index += 1
    return timelines


# -- performatized bubble sort -------------------------------------------


@dataclass(frozen=True)
class Comparison:
    left: int
    right: int
    swapped: bool


@dataclass(frozen=True)
class Iteration:
    comparisons: tuple[Comparison, ...]
    flag_raised_at_end: bool
    order: tuple  # the line after this iteration; one melodic contour record


@dataclass(frozen=True)
class PerformatizationTrace:
    initial: tuple
    iterations: tuple[Iteration, ...]
    final: tuple
    verdict: str  # "terminated" (flag stayed raised) | "nonterminating" (cap hit)

    def to_jsonl(self) -> str:
        lines = []
        for i, it in enumerate(self.iterations, start=1):
            lines.append(json.dumps({
                "iteration": i,
                "comparisons": [[c.left, c.right, c.swapped] for c in it.comparisons],
                "flag-raised-at-end": it.flag_raised_at_end,
                "order": list(it.order),
            }, separators=(",", ":")))
        lines.append(json.dumps({
            "final": list(self.final),
            "verdict": self.verdict,
            "iterations": len(self.iterations),
        }, separators=(",", ":")))
        return "\n".join(lines) + "\n"


class SwapPolicy(Protocol):
    def decide(self, left, right) -> bool:
        """True means the pair swaps."""
        ...


class ObedientSwapPolicy:
    """Swap exactly when the pair is out of ascending order."""

    def decide(self, left, right) -> bool:
        return left > right


class WillfulSwapPolicy:
    """Defies the comparison with probability p: performers have brains."""

    def __init__(self, p: float, seed: int):
        if not 0.0 <= p <= 1.0:
            raise RejectedError("defiance probability must be in [0,1]")
        self.p = p
        self.rng = random.Random(seed)

    def decide(self, left, right) -> bool:
        correct = left > right
        if self.rng.random() < self.p:
            return not correct
        return correct


def performatize_bubble_sort(initial: Sequence, policy: SwapPolicy,
                             max_iterations: int = 100) -> PerformatizationTrace:
    """Iterate full passes until the flag stays raised, or give a verdict.

    The flag goes up at the start of each iteration and comes down on the
    first swap; raised at the end means done. A willful line may never
    settle, so the iteration cap turns forever into a verdict.
    """
    if not initial:
        raise RejectedError("at least one value required")
    line = list(initial)
    iterations: list[Iteration] = []
    while len(iterations) < max_iterations:
        comparisons: list[Comparison] = []
        swaps = 0
        for i in range(len(line) - 1):
            swapped = policy.decide(line[i], line[i + 1])
            if swapped:
                line[i], line[i + 1] = line[i + 1], line[i]
                swaps += 1
            comparisons.append(Comparison(left=i, right=i + 1, swapped=swapped))
        flag = swaps == 0
        iterations.append(Iteration(comparisons=tuple(comparisons),
                                    flag_raised_at_end=flag,
                                    order=tuple(line)))
        if flag:
            return PerformatizationTrace(initial=tuple(initial),
                                         iterations=tuple(iterations),
                                         final=tuple(line), verdict="terminated")
    return PerformatizationTrace(initial=tuple(initial), iterations=tuple(iterations),
                                 final=tuple(line), verdict="nonterminating")
