"""Append-only JSONL result cache with exact numeric serialization.

One structured object per line: {kind, p, payload, config_fingerprint,
timestamp}.  Integers travel as decimal strings (h_p^- outgrows native
widths early); balls as {mid, rad, bits} where mid and rad are decimal
strings carrying the minimal digit count MPFR guarantees to reread
exactly at the stated precision.  parse(print(x)) is therefore the
identity, and re-serializing produces byte-identical fields.
"""

from __future__ import annotations

import json
import os
from datetime import datetime, timezone

import gmpy2
from gmpy2 import mpfr

from .balls import RADIUS_PREC, BallReal


def _decimal_string(x: mpfr, bits: int) -> str:
    x = mpfr(x, bits)  # normalize the precision attribute
    mantissa, exp, _ = x.digits(10, 0)
    sign = ""
    if mantissa.startswith("-"):
        sign, mantissa = "-", mantissa[1:]
    if mantissa.strip("0") == "":
        return sign + "0"
    return f"{sign}{mantissa[0]}.{mantissa[1:]}e{exp - 1}"


def ball_to_payload(b: BallReal) -> dict:
    return {
        "mid": _decimal_string(b.mid, b.prec),
        "rad": _decimal_string(b.rad, RADIUS_PREC),
        "bits": b.prec,
    }


def ball_from_payload(d: dict) -> BallReal:
    bits = int(d["bits"])
    return BallReal(mpfr(d["mid"], bits),
                    gmpy2.mpfr(d["rad"], RADIUS_PREC),
                    bits)


def int_to_payload(n: int) -> str:
    return str(n)


def int_from_payload(s: str) -> int:
    return int(s)


class Cache:
    """Line-delimited append-only store keyed by (kind, p, fingerprint)."""

    def __init__(self, path: str):
        self.path = path
        self.n_cached = 0
        self.n_computed = 0

    def _iter_lines(self):
        if not os.path.exists(self.path):
            return
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    yield json.loads(line)

    def load(self, fingerprint: str) -> dict:
        """{(kind, p): payload} for entries matching the fingerprint.

        Later lines win, so a re-appended record supersedes older ones.
        """
        out = {}
        for obj in self._iter_lines():
            if obj.get("config_fingerprint") == fingerprint:
                out[(obj["kind"], int(obj["p"]))] = obj["payload"]
        return out

    def append(self, kind: str, p: int, payload: dict,
               fingerprint: str) -> None:
        obj = {
            "kind": kind,
            "p": p,
            "payload": payload,
            "config_fingerprint": fingerprint,
            "timestamp": datetime.now(timezone.utc).isoformat(),
        }
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(obj, sort_keys=True) + "\n")


# -------------------------------------------------- record payload schema


def hminus_payload(record, siegel_report) -> dict:
    """Scan-row payload: class number record plus the Siegel column."""
    beta = None
    if siegel_report is not None and siegel_report.present:
        beta = ball_to_payload(siegel_report.beta)
    return {
        "h_minus": int_to_payload(record.h_minus),
        "log_G": ball_to_payload(record.log_g),
        "log_ratio": ball_to_payload(record.log_ratio),
        "siegel_beta": beta,
        "precision_bits": record.precision_bits,
        "method": record.method,
        "certified": record.certified,
    }


CSV_COLUMNS = ("p", "h_minus", "log_G", "log_ratio", "siegel_beta",
               "precision_bits", "method", "certified")


def payload_to_csv_row(p: int, payload: dict) -> list[str]:
    beta = payload.get("siegel_beta")
    return [
        str(p),
        payload["h_minus"],
        payload["log_G"]["mid"],
        payload["log_ratio"]["mid"],
        "" if beta is None else beta["mid"],
        str(payload["precision_bits"]),
        payload["method"],
        "true" if payload["certified"] else "false",
    ]
