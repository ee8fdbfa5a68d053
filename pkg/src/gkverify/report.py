"""Deterministic report rendering for check runs.

Two formats: a JSON document that is byte-identical across runs of the
same configuration (timings are included only on request, since they
vary), and a plain text listing.  All scalar data is rendered through
the exact literal grammar, never through floats.
"""

from __future__ import annotations

import json

SCHEMA_VERSION = 1
TOOL = "gkverify"
VERSION = "0.1.0"


def report_dict(config: dict, results, timing: bool = False) -> dict:
    checks = []
    for r in results:
        entry = {
            "name": r.name,
            "anchor": r.anchor,
            "status": r.status,
            "witness": r.witness,
        }
        if timing:
            entry["elapsed"] = round(r.elapsed, 3)
        checks.append(entry)
    summary = {
        "pass": sum(1 for r in results if r.status == "pass"),
        "fail": sum(1 for r in results if r.status == "fail"),
        "skipped": sum(1 for r in results if r.status == "skipped"),
    }
    return {
        "tool": TOOL,
        "version": VERSION,
        "schema_version": SCHEMA_VERSION,
        "config": dict(sorted(config.items())),
        "checks": checks,
        "summary": summary,
    }


def render_json(config: dict, results, timing: bool = False) -> str:
    doc = report_dict(config, results, timing)
    return json.dumps(doc, indent=2) + "\n"


def render_text(config: dict, results, timing: bool = False) -> str:
    lines = [f"{TOOL} {VERSION}"]
    lines.append(" ".join(f"{k}={v}" for k, v in sorted(config.items())))
    width = max((len(r.name) for r in results), default=0)
    for r in results:
        suffix = f"  [{r.elapsed:.2f}s]" if timing else ""
        lines.append(f"  {r.status:<7s} {r.name:<{width}s}  "
                     f"{r.witness}{suffix}")
    summary = report_dict(config, results)["summary"]
    lines.append(f"summary: {summary['pass']} pass, {summary['fail']} fail, "
                 f"{summary['skipped']} skipped")
    return "\n".join(lines) + "\n"
