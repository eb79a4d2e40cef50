# -*- coding: utf-8 -*-

"""
Alice ↔ 증명자 메시지와 추가 전용(append-only) 대화록

JSON lines 형식 (한 줄에 한 메시지, 필드 이름 고정):
  {"round": 3, "direction": "alice->bob", "payload": {"type": "angle_instruction", "delta": 5, ...}}
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable

PHASE_ONE = "phase_one"
PHASE_TWO = "phase_two"
CLOSING = "closing"


class ProtocolViolation(RuntimeError):
    """증명자가 형식에 맞지 않는 응답을 주거나 단계 밖 메시지가 나타남"""


class MessageKind(str, Enum):
    REQUEST_PAIR = "request_pair"
    PAIR_DELIVERED = "pair_delivered"
    MEASURE_INSTRUCTION = "measure_instruction"
    OUTCOME_REPORT = "outcome_report"
    ANGLE_INSTRUCTION = "angle_instruction"
    RESULT_REPORT = "result_report"
    ABORT_NOTICE = "abort_notice"
    ACCEPT_NOTICE = "accept_notice"

    @property
    def phase(self) -> str:
        if self in (MessageKind.ANGLE_INSTRUCTION, MessageKind.RESULT_REPORT):
            return PHASE_TWO
        if self in (MessageKind.ABORT_NOTICE, MessageKind.ACCEPT_NOTICE):
            return CLOSING
        return PHASE_ONE


_PHASE_RANK = {PHASE_ONE: 0, PHASE_TWO: 1, CLOSING: 2}


@dataclass(frozen=True)
class Message:
    kind: MessageKind
    round: int
    direction: str
    fields: tuple = ()

    @property
    def payload(self) -> dict:
        return {"type": self.kind.value, **dict(self.fields)}

    def to_dict(self) -> dict:
        return {"round": self.round, "direction": self.direction, "payload": self.payload}

    @classmethod
    def create(cls, kind: MessageKind, round_index: int, direction: str, **payload) -> "Message":
        return cls(MessageKind(kind), int(round_index), direction, tuple(sorted(payload.items())))

    @classmethod
    def from_dict(cls, data: dict) -> "Message":
        payload = dict(data["payload"])
        kind = MessageKind(payload.pop("type"))
        for key, value in payload.items():
            if isinstance(value, list):
                payload[key] = tuple(value)
        return cls.create(kind, data["round"], data["direction"], **payload)


@dataclass
class Transcript:
    """
    라운드는 방향(채널)별로 감소하지 않고, 같은 (라운드, 방향, 종류) 는 한 번만 허용됩니다.
    1단계 → 2단계 → 종료 순서를 거스르는 메시지는 ProtocolViolation 입니다.
    """
    messages: list = field(default_factory=list)
    verdict: str | None = None
    _last_round: dict = field(default_factory=dict, repr=False)
    _seen: set = field(default_factory=set, repr=False)
    _phase: int = 0

    def append(self, message: Message) -> Message:
        if self.verdict is not None:
            raise ProtocolViolation(f"판정 이후 메시지: {message.kind.value}")
        rank = _PHASE_RANK[message.kind.phase]
        if rank < self._phase:
            raise ProtocolViolation(f"단계 밖 메시지: {message.kind.value} (round {message.round})")
        last = self._last_round.get(message.direction, -1)
        if message.round < last:
            raise ProtocolViolation(f"{message.direction}: round {message.round} < {last}")
        key = (message.round, message.direction, message.kind)
        if key in self._seen:
            raise ProtocolViolation(f"중복 메시지: {key}")
        self._seen.add(key)
        self._last_round[message.direction] = message.round
        self._phase = rank
        self.messages.append(message)
        return message

    def record(self, kind: MessageKind, round_index: int, direction: str, **payload) -> Message:
        return self.append(Message.create(kind, round_index, direction, **payload))

    def close(self, accepted: bool, round_index: int, reason: str = "") -> None:
        kind = MessageKind.ACCEPT_NOTICE if accepted else MessageKind.ABORT_NOTICE
        payload = {"reason": reason} if reason else {}
        self.record(kind, round_index, "alice->bob", **payload)
        self.verdict = "accept" if accepted else "reject"

    def next_round(self) -> int:
        return max(self._last_round.values(), default=-1) + 1

    def of_kind(self, kind: MessageKind) -> list[Message]:
        return [m for m in self.messages if m.kind is kind]

    def entries(self) -> list[tuple[int, int, int]]:
        """2단계 (round, δ, b) 목록"""
        deltas = {m.round: m.payload["delta"] for m in self.of_kind(MessageKind.ANGLE_INSTRUCTION)}
        return [(m.round, deltas[m.round], m.payload["bit"]) for m in self.of_kind(MessageKind.RESULT_REPORT)]

    def results_by_vertex(self) -> dict:
        """{vertex: b}"""
        return {tuple(m.payload["vertex"]): m.payload["bit"] for m in self.of_kind(MessageKind.RESULT_REPORT)}

    def to_jsonl(self) -> str:
        return "".join(json.dumps(m.to_dict(), ensure_ascii=False, sort_keys=True) + "\n" for m in self.messages)

    def digest(self) -> str:
        return hashlib.sha256(self.to_jsonl().encode("utf-8")).hexdigest()

    def write_jsonl(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_jsonl(), encoding="utf-8")
        return path

    @classmethod
    def from_jsonl(cls, lines: Iterable[str] | str) -> "Transcript":
        if isinstance(lines, str):
            lines = lines.splitlines()
        transcript = cls()
        for line in lines:
            if line.strip():
                transcript.append(Message.from_dict(json.loads(line)))
        if transcript.messages and transcript.messages[-1].kind.phase == CLOSING:
            accepted = transcript.messages[-1].kind is MessageKind.ACCEPT_NOTICE
            transcript.verdict = "accept" if accepted else "reject"
        return transcript
