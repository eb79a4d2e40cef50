# -*- coding: utf-8 -*-

"""
당사자별 난수 스트림과 무작위 상태/연산자 생성

각 프로토콜 당사자(Alice, Alice의 측정 장치, Bob)는 독립된 카운터 기반(Philox)
스트림을 하나씩 소유합니다. 스트림은 (seed, trial, party) 로부터 SeedSequence 의
spawn_key 로 결정적으로 파생되므로 같은 설정이면 같은 기록이 재현됩니다.
"""

from __future__ import annotations

import zlib

import numpy as np

from qstate.state import StateVector

PARTY_CODES = {
    "alice": 0,
    "alice_device": 1,
    "bob": 2,
}


def party_code(party: str) -> int:
    return PARTY_CODES.get(party, zlib.crc32(party.encode("utf-8")))


def party_stream(seed: int, party: str, trial: int = 0) -> np.random.Generator:
    """(seed, trial, party) 전용 Philox 스트림"""
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial), party_code(party)))
    return np.random.Generator(np.random.Philox(seq))


def random_state(num_qubits: int, rng: np.random.Generator, labels=()) -> StateVector:
    """Haar 무작위 순수 상태"""
    dim = 2 ** num_qubits
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return StateVector.from_amplitudes(amps, labels)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """QR 분해 기반 Haar 무작위 유니터리"""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_reflection(dim: int, rng: np.random.Generator) -> np.ndarray:
    """U diag(±1) U† 형태의 Hermitian 유니터리 (±1 스펙트럼, 양쪽 고유값 모두 포함)"""
    u = random_unitary(dim, rng)
    signs = np.ones(dim)
    signs[: dim // 2] = -1.0
    m = (u * signs) @ u.conj().T
    return 0.5 * (m + m.conj().T)
