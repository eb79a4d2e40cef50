# -*- coding: utf-8 -*-

"""
시행(trial)별 난수 스트림

(seed, trial, 참가자) 마다 SeedSequence spawn key 로 독립된 Philox 스트림을 만듭니다.
같은 seed/trial 이면 스레드 수나 실행 순서와 상관없이 같은 스트림이 나옵니다.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from qstate import party_stream


@dataclass
class TrialStreams:
    seed: int
    trial: int
    alice: np.random.Generator = field(init=False)
    alice_device: np.random.Generator = field(init=False)
    bob: np.random.Generator = field(init=False)

    def __post_init__(self):
        if int(self.seed) < 0:
            raise ValueError(f"seed 는 0 이상이어야 합니다: {self.seed}")
        self.alice = party_stream(self.seed, "alice", self.trial)
        self.alice_device = party_stream(self.seed, "alice_device", self.trial)
        self.bob = party_stream(self.seed, "bob", self.trial)


def trial_streams(seed: int, trials: int) -> list[TrialStreams]:
    if trials < 1:
        raise ValueError(f"trials 는 1 이상이어야 합니다: {trials}")
    return [TrialStreams(seed, t) for t in range(trials)]
