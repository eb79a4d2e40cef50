# -*- coding: utf-8 -*-

"""
리포트 파일 저장

- CSV: 헤더 한 줄, 명령별 고정 컬럼 순서, 실수는 유효숫자 17자리 (BOM 없이 UTF-8)
- JSON: records 배열 (같은 17자리 표현)
"""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

REPORT_FORMATS = ("csv", "json")
FLOAT_FORMAT = "%.17g"


def to_frame(rows: Sequence[dict] | pd.DataFrame, columns: Sequence[str] | None = None) -> pd.DataFrame:
    """dict 행 목록 → 컬럼 순서가 고정된 DataFrame (trial 컬럼이 있으면 정렬)"""
    df = rows.copy() if isinstance(rows, pd.DataFrame) else pd.DataFrame(list(rows))
    if columns is not None:
        for col in columns:
            if col not in df.columns:
                df[col] = pd.NA
        df = df[list(columns)]
    if "trial" in df.columns and not df.empty:
        df = df.sort_values("trial", kind="stable").reset_index(drop=True)
    return df


def _json_value(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return None
        return float(FLOAT_FORMAT % value)
    if isinstance(value, np.bool_):
        return bool(value)
    if value is pd.NA:
        return None
    return value


def write_report(df: pd.DataFrame, path: str | Path, fmt: str = "csv") -> Path:
    """
    Raises:
        ValueError: 지원하지 않는 형식
    """
    if fmt not in REPORT_FORMATS:
        raise ValueError(f"지원하지 않는 형식: {fmt!r} (가능: {', '.join(REPORT_FORMATS)})")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        df.to_csv(path, index=False, encoding="utf-8", float_format=FLOAT_FORMAT)
    else:
        records = [{k: _json_value(v) for k, v in row.items()} for row in df.to_dict(orient="records")]
        with open(path, "w", encoding="utf-8") as f:
            json.dump(records, f, ensure_ascii=False, indent=2)
            f.write("\n")
    logger.info("리포트 저장: %s (%d행)", path, len(df))
    return path


def read_report(path: str | Path) -> pd.DataFrame:
    path = Path(path)
    if path.suffix == ".json":
        with open(path, "r", encoding="utf-8") as f:
            return pd.DataFrame(json.load(f))
    return pd.read_csv(path)
