"""
Report Export Module

Writes tables as CSV and summaries as JSON under the output directory.
Every JSON document carries the resolved configuration; CSV tables are
listed, with the configuration, in a manifest written on close. Outputs
contain no timestamps so identical runs produce identical bytes.
"""

import json
import logging
import math
from dataclasses import is_dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from mpmath import mp

logger = logging.getLogger(__name__)


def to_jsonable(obj: Any) -> Any:
    """Convert results to plain JSON values; huge or exact numbers become strings."""
    if hasattr(obj, 'to_dict') and (is_dataclass(obj) or not isinstance(obj, pd.DataFrame)):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, pd.DataFrame):
        return to_jsonable(obj.to_dict(orient='records'))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, int):
        return obj if abs(obj) < 2 ** 53 else str(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else str(value)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, mp.mpf):
        return mp.nstr(obj, 17)
    return str(obj)


class ReportWriter:
    """
    Emits CSV and JSON artifacts for one run.

    Args:
        directory: Output directory, created on demand
        config: Resolved configuration embedded in every artifact
        fmt: Preferred format for results that can be either
    """

    def __init__(self, directory: str, config: Dict[str, Any], fmt: str = 'json'):
        self.directory = Path(directory)
        self.config = config
        self.fmt = fmt
        self.files: List[str] = []

    def _path(self, name: str, suffix: str) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        return self.directory / f"{name}.{suffix}"

    def write_table(self, name: str, frame: pd.DataFrame) -> Path:
        path = self._path(name, 'csv')
        frame.to_csv(path, index=False, lineterminator='\n')
        self.files.append(path.name)
        logger.info(f"Table written to {path}")
        return path

    def write_json(self, name: str, payload: Any) -> Path:
        path = self._path(name, 'json')
        document = {'config': to_jsonable(self.config), 'result': to_jsonable(payload)}
        path.write_text(json.dumps(document, indent=2, sort_keys=True) + '\n', encoding='utf-8')
        self.files.append(path.name)
        logger.info(f"Summary written to {path}")
        return path

    def write(self, name: str, payload: Any, frame: Optional[pd.DataFrame] = None) -> Path:
        """Write a table when the format is csv and one is given, else the JSON summary."""
        if self.fmt == 'csv' and frame is not None:
            return self.write_table(name, frame)
        return self.write_json(name, payload)

    def close(self, status: Dict[str, Any]) -> Path:
        """Write the manifest listing every artifact of the run."""
        path = self._path('manifest', 'json')
        document = {
            'config': to_jsonable(self.config),
            'files': sorted(self.files),
            'status': to_jsonable(status),
        }
        path.write_text(json.dumps(document, indent=2, sort_keys=True) + '\n', encoding='utf-8')
        return path
