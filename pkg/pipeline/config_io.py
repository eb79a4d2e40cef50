# -*- coding: utf-8 -*-

"""
설정 로드

1️⃣ config/settings.yaml: 기본값 (모든 키는 cfg.get(key, default) 로 읽음)
2️⃣ 세션 JSON (--config): "schema": 1, params / pattern / strategies / seed / trials / expect / sweep
3️⃣ CLI 플래그 (--seed, --trials) 가 파일 값을 덮어씀
"""

from __future__ import annotations

import copy
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

import yaml

from mbqc import COMPUTATIONS
from protocol import SETTING_DRAWS, STRATEGIES
from selftest import SecurityParams
from selftest.bounds import CONFIDENCE_VARIANTS

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
DEFAULT_SETTINGS_PATH = Path("config/settings.yaml")
EXPECTATIONS = ("accept", "reject", "abort", "any")
SWEEP_MODES = ("selftest", "full")
TRAP_SCHEMES = ("tape", "single")
STRATEGY_SLOTS = ("alice_device", "bob")


class ConfigError(ValueError):
    """설정 파일 파싱/스키마 오류"""


# =============================================================================
# settings.yaml
# =============================================================================

DEFAULT_SECURITY = {
    "p": 0.5,
    "epsilon": 0.5,
    "delta_frac": 0.25,
    "c": 1.0,
    "n_tilde": 89,
}

DEFAULT_PATTERN = {
    "rows": 4,
    "cols": 9,
    "computation": "identity",
    "trap_scheme": "tape",
}


def load_settings(path: str | Path | None = None) -> dict:
    """
    settings.yaml 을 읽어 기본값과 합침 (파일이 없으면 기본값만)

    Raises:
        ConfigError: YAML 파싱 실패 또는 최상위가 mapping 이 아님
    """
    path = Path(path) if path is not None else DEFAULT_SETTINGS_PATH
    cfg: dict = {}
    if path.exists():
        try:
            with open(path, "r", encoding="utf-8") as f:
                cfg = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"설정 파일 파싱 실패 ({path}): {e}") from e
        if not isinstance(cfg, dict):
            raise ConfigError(f"설정 파일 최상위는 mapping 이어야 합니다: {path}")
    else:
        logger.warning("설정 파일이 없어 기본값을 사용합니다: %s", path)

    resource = cfg.get("resource") or {}
    return {
        "security": {**DEFAULT_SECURITY, **(cfg.get("security") or {})},
        "confidence_variant": cfg.get("confidence_variant", "per_session"),
        "setting_draw": cfg.get("setting_draw", "balanced"),
        "resource": {
            "eps0": resource.get("eps0", 1.0),
            "target_confidence": resource.get("target_confidence", 0.9),
        },
        "pattern": {**DEFAULT_PATTERN, **(cfg.get("pattern") or {})},
        "output_dir": cfg.get("output_dir", "outputs"),
        "workers": int(cfg.get("workers", 1)),
    }


# =============================================================================
# 세션 JSON
# =============================================================================

@dataclass(frozen=True)
class PatternConfig:
    rows: int = 4
    cols: int = 9
    delta_frac: float = 0.25
    computation: str = "identity"
    trap_scheme: str = "tape"
    phi: tuple | None = None


@dataclass(frozen=True)
class SweepConfig:
    target: str
    values: tuple
    mode: str = "full"
    monotone: str | None = None


@dataclass(frozen=True)
class SessionConfig:
    security: Mapping[str, Any]
    pattern: PatternConfig
    strategies: Mapping[str, Mapping[str, Any]]
    seed: int
    trials: int = 1
    expect: str = "any"
    variant: str = "per_session"
    setting_draw: str = "balanced"
    sweep: SweepConfig | None = None
    m: int | None = None
    extra: Mapping[str, Any] = field(default_factory=dict)

    def params(self, m: int) -> SecurityParams:
        """SecurityParams (m 은 패턴 꼭짓점 수 또는 명시값)"""
        fields = {k: self.security[k] for k in ("p", "epsilon", "delta_frac", "c", "n_tilde")}
        return SecurityParams(m=m, **fields)

    def with_overrides(self, seed: int | None = None, trials: int | None = None) -> "SessionConfig":
        updated = self
        if seed is not None:
            updated = replace(updated, seed=int(seed))
        if trials is not None:
            if trials < 1:
                raise ConfigError(f"trials 는 1 이상이어야 합니다: {trials}")
            updated = replace(updated, trials=int(trials))
        return updated

    def with_strategy_value(self, target: str, value: Any) -> "SessionConfig":
        """target="bob.q" → strategies["bob"]["q"] = value"""
        slot, _, key = target.partition(".")
        if slot not in STRATEGY_SLOTS or not key:
            raise ConfigError(f"sweep target 은 'bob.<param>' 또는 'alice_device.<param>' 형식이어야 합니다: {target!r}")
        strategies = copy.deepcopy(dict(self.strategies))
        strategies[slot] = {**strategies[slot], key: value}
        return replace(self, strategies=strategies)


def _require(data: Mapping, key: str, kind: type, where: str):
    if key not in data:
        raise ConfigError(f"{where}: '{key}' 가 필요합니다")
    value = data[key]
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ConfigError(f"{where}.{key}: {kind.__name__} 이어야 합니다 ({value!r})")
    return value


def _strategy_spec(raw: Any, slot: str) -> dict:
    if raw is None:
        return {"name": "honest"}
    if isinstance(raw, str):
        raw = {"name": raw}
    if not isinstance(raw, Mapping):
        raise ConfigError(f"strategies.{slot}: mapping 이어야 합니다")
    name = raw.get("name")
    if name not in STRATEGIES:
        raise ConfigError(f"strategies.{slot}: 알 수 없는 전략 {name!r} (가능: {', '.join(sorted(STRATEGIES))})")
    return dict(raw)


def parse_session(data: Mapping, settings: Mapping | None = None) -> SessionConfig:
    """
    세션 JSON dict → SessionConfig (settings.yaml 값이 기본값)

    Raises:
        ConfigError: 스키마 누락/불일치, 알 수 없는 전략/계산/모드
    """
    settings = settings if settings is not None else load_settings()
    if not isinstance(data, Mapping):
        raise ConfigError("세션 설정 최상위는 object 여야 합니다")
    schema = data.get("schema")
    if schema != SCHEMA_VERSION:
        raise ConfigError(f"지원하지 않는 schema: {schema!r} (필요: {SCHEMA_VERSION})")

    security = {**settings["security"], **(data.get("params") or {})}
    m = security.pop("m", None)

    pat = {**settings["pattern"], "delta_frac": security["delta_frac"], **(data.get("pattern") or {})}
    if pat["computation"] not in COMPUTATIONS:
        raise ConfigError(f"pattern.computation: {pat['computation']!r} (가능: {', '.join(COMPUTATIONS)})")
    if pat["trap_scheme"] not in TRAP_SCHEMES:
        raise ConfigError(f"pattern.trap_scheme: {pat['trap_scheme']!r} (가능: {', '.join(TRAP_SCHEMES)})")
    security["delta_frac"] = pat["delta_frac"]
    phi = pat.get("phi")
    pattern = PatternConfig(
        rows=int(pat["rows"]),
        cols=int(pat["cols"]),
        delta_frac=float(pat["delta_frac"]),
        computation=pat["computation"],
        trap_scheme=pat["trap_scheme"],
        phi=tuple(int(k) for k in phi) if phi is not None else None,
    )

    raw_strategies = data.get("strategies") or {}
    strategies = {slot: _strategy_spec(raw_strategies.get(slot), slot) for slot in STRATEGY_SLOTS}

    seed = _require(data, "seed", int, "session")
    trials = int(data.get("trials", 1))
    if trials < 1:
        raise ConfigError(f"trials 는 1 이상이어야 합니다: {trials}")
    expect = data.get("expect", "any")
    if expect not in EXPECTATIONS:
        raise ConfigError(f"expect: {expect!r} (가능: {', '.join(EXPECTATIONS)})")

    variant = data.get("confidence_variant", settings["confidence_variant"])
    if variant not in CONFIDENCE_VARIANTS:
        raise ConfigError(f"confidence_variant: {variant!r}")
    setting_draw = data.get("setting_draw", settings["setting_draw"])
    if setting_draw not in SETTING_DRAWS:
        raise ConfigError(f"setting_draw: {setting_draw!r}")

    sweep = None
    if data.get("sweep") is not None:
        raw = data["sweep"]
        values = _require(raw, "values", list, "sweep")
        if not values:
            raise ConfigError("sweep.values 가 비어 있습니다")
        mode = raw.get("mode", "full")
        if mode not in SWEEP_MODES:
            raise ConfigError(f"sweep.mode: {mode!r} (가능: {', '.join(SWEEP_MODES)})")
        sweep = SweepConfig(_require(raw, "target", str, "sweep"), tuple(values), mode, raw.get("monotone"))

    session = SessionConfig(
        security=security,
        pattern=pattern,
        strategies=strategies,
        seed=int(seed),
        trials=trials,
        expect=expect,
        variant=variant,
        setting_draw=setting_draw,
        sweep=sweep,
        m=int(m) if m is not None else None,
    )
    if sweep is not None:
        session.with_strategy_value(sweep.target, sweep.values[0])
    try:
        session.params(m if m is not None else 1)
    except ValueError as e:
        raise ConfigError(f"params: {e}") from e
    return session


def load_session(path: str | Path, settings: Mapping | None = None) -> SessionConfig:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"세션 설정 파일이 없습니다: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"세션 설정 JSON 파싱 실패 ({path}): {e}") from e
    return parse_session(data, settings)


def session_to_dict(session: SessionConfig) -> dict:
    """세션 설정을 다시 schema 1 JSON 형태로"""
    data = {
        "schema": SCHEMA_VERSION,
        "params": {**session.security, **({"m": session.m} if session.m is not None else {})},
        "pattern": {
            "rows": session.pattern.rows,
            "cols": session.pattern.cols,
            "delta_frac": session.pattern.delta_frac,
            "computation": session.pattern.computation,
            "trap_scheme": session.pattern.trap_scheme,
        },
        "strategies": {k: dict(v) for k, v in session.strategies.items()},
        "seed": session.seed,
        "trials": session.trials,
        "expect": session.expect,
        "confidence_variant": session.variant,
        "setting_draw": session.setting_draw,
    }
    if session.pattern.phi is not None:
        data["pattern"]["phi"] = list(session.pattern.phi)
    if session.sweep is not None:
        data["sweep"] = {
            "target": session.sweep.target,
            "values": list(session.sweep.values),
            "mode": session.sweep.mode,
            "monotone": session.sweep.monotone,
        }
    return data
