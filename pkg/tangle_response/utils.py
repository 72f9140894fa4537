"""
Shared output helpers: deterministic CSV and versioned JSON documents.
"""

import json
import sys
from typing import Any, Dict, Mapping, Optional

import pandas as pd
from pydantic import BaseModel

from . import __version__
from .models import SCHEMA

CSV_FLOAT_FORMAT = "%.17g"


def provenance(command: str, seed: int, flags: Mapping[str, Any]) -> str:
    """
    One-line provenance comment for CSV outputs.

    Only the version, seed and flags are recorded (no timestamps), so that
    identical invocations produce identical files.

    Args:
        command: subcommand name
        seed: base seed of the run
        flags: remaining command-line options

    Returns:
        Comment line starting with '#'
    """
    parts = [f"{k}={flags[k]}" for k in sorted(flags)]
    return " ".join([f"# tangle-response {__version__}", command, f"seed={seed}", *parts])


def frame_to_csv(df: pd.DataFrame, comment: str) -> str:
    body = df.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    return f"{comment}\n{body}"


def frame_to_json(df: pd.DataFrame, meta: Dict[str, Any]) -> str:
    doc = {
        "schema": SCHEMA,
        "version": __version__,
        "meta": meta,
        "rows": df.to_dict(orient="records"),
    }
    return json.dumps(doc, indent=2, default=lambda o: o.item()) + "\n"


def model_to_json(model: BaseModel) -> str:
    return model.model_dump_json(by_alias=True, indent=2) + "\n"


def emit(text: str, out: Optional[str] = None) -> None:
    """Write text to a file, or to stdout when no path is given. Raises OSError."""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
