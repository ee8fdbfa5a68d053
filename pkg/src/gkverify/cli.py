"""Command line entry point.

Configuration can come from flags or from a flat key=value file; flags
win.  Exit status: 0 when every selected check passes or is skipped,
1 when any check fails, 2 on a configuration problem.
"""

from __future__ import annotations

import argparse
import sys

from .checks import REGISTRY, CheckContext, run_checks
from .clifford import load_product_cache, save_product_cache
from .exactfield import Matrix, format_scalar, parse_scalar
from .presets import (BOREL_CHOICES, PRESET_NAMES, build_group,
                      pair_from_vectors, parse_basis, preset_pair)
from .report import render_json, render_text

_CONFIG_KEYS = ("group", "preset", "t10-plus", "t10-minus", "field-d",
                "center-gram", "borel", "checks", "format", "cache")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkverify",
        description="Exact verification of generalized Kahler data "
                    "on compact group targets.")
    parser.add_argument(
        "group", nargs="?",
        help="group token, comma-separated factors (A1,U1  A1,A1  A2  T2)")
    parser.add_argument(
        "--preset", metavar="NAME",
        help=f"named torus-line pair: {', '.join(PRESET_NAMES)}")
    parser.add_argument(
        "--t10-plus", metavar="BASIS",
        help="holomorphic torus line(s) of the plus half; vectors split "
             "by ';', components by ','")
    parser.add_argument(
        "--t10-minus", metavar="BASIS",
        help="holomorphic torus line(s) of the minus half")
    parser.add_argument(
        "--field-d", type=int, metavar="N",
        help="squarefree radicand of the scalar field (default 3 when an "
             "A2 factor is present, else 1)")
    parser.add_argument(
        "--center-gram", metavar="M",
        help="Gram matrix of the central torus; rows split by ';', "
             "entries by ','")
    parser.add_argument(
        "--borel", choices=BOREL_CHOICES, default=None,
        help="positive system shared by both halves (default standard)")
    parser.add_argument(
        "--checks", metavar="LIST",
        help="comma separated check names (default: all)")
    parser.add_argument(
        "--format", choices=("json", "text"), default=None,
        help="output format (default json)")
    parser.add_argument(
        "--cache", metavar="PATH",
        help="directory for the Clifford product cache")
    parser.add_argument(
        "--config", metavar="PATH",
        help="flat key=value file; command line flags override it")
    parser.add_argument(
        "--timing", action="store_true",
        help="include elapsed seconds per check in the report")
    parser.add_argument(
        "--list-checks", action="store_true",
        help="print the check registry and exit")
    return parser


def _read_config_file(path: str) -> dict:
    out = {}
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.read().splitlines()
    except OSError as exc:
        raise ValueError(f"cannot read config file: {exc}") from exc
    for number, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{number}: expected key=value")
        key, value = line.split("=", 1)
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{number}: unknown key {key!r}")
        out[key] = value.strip()
    return out


def _merge_settings(args) -> dict:
    settings = {}
    if args.config:
        settings.update(_read_config_file(args.config))
    overrides = {
        "group": args.group,
        "preset": args.preset,
        "t10-plus": args.t10_plus,
        "t10-minus": args.t10_minus,
        "field-d": None if args.field_d is None else str(args.field_d),
        "center-gram": args.center_gram,
        "borel": args.borel,
        "checks": args.checks,
        "format": args.format,
        "cache": args.cache,
    }
    for key, value in overrides.items():
        if value is not None:
            settings[key] = value
    return settings


def _parse_gram(text: str, d: int) -> Matrix:
    rows = [[parse_scalar(entry, d) for entry in row.split(",")]
            for row in text.split(";")]
    return Matrix(rows)


def _format_gram(gram) -> str:
    if gram is None:
        return ""
    return ";".join(",".join(format_scalar(entry) for entry in row)
                    for row in gram.data)


def _format_basis(vectors) -> str:
    return ";".join(",".join(format_scalar(c) for c in vec)
                    for vec in vectors)


def _resolve(settings: dict):
    """Build the group, the pair and the config echo from raw settings."""
    token = settings.get("group")
    if not token:
        raise ValueError("a group token is required")
    field_d = None
    if "field-d" in settings:
        try:
            field_d = int(settings["field-d"])
        except ValueError:
            raise ValueError(
                f"field-d must be an integer, got {settings['field-d']!r}")
    gram_text = settings.get("center-gram")
    preset = settings.get("preset")
    plus_text = settings.get("t10-plus")
    minus_text = settings.get("t10-minus")
    if preset and (plus_text or minus_text):
        raise ValueError("pass either a preset or explicit torus lines")
    if (plus_text is None) != (minus_text is None):
        raise ValueError("explicit torus lines require both sides")

    setup = build_group(token, field_d=field_d, center_gram=None)
    d = setup.algebra.d
    if gram_text:
        gram = _parse_gram(gram_text, d)
        setup = build_group(token, field_d=field_d, center_gram=gram)

    borel = settings.get("borel", "standard")
    if borel not in BOREL_CHOICES:
        raise ValueError(f"unknown borel choice {borel!r}")

    echo = {
        "group": token,
        "field_d": str(d),
        "center_gram": _format_gram(setup.spec.center_gram),
        "borel": borel,
    }
    if plus_text is not None:
        plus = parse_basis(plus_text, setup.algebra.dim, d)
        minus = parse_basis(minus_text, setup.algebra.dim, d)
        pair = pair_from_vectors(setup.frame, plus, minus, borel)
        echo["t10_plus"] = _format_basis(plus)
        echo["t10_minus"] = _format_basis(minus)
    else:
        preset = preset or "canonical"
        pair = preset_pair(setup, preset, borel)
        echo["preset"] = preset

    names = None
    if settings.get("checks"):
        names = [n.strip() for n in settings["checks"].split(",") if n.strip()]
        if not names:
            raise ValueError("empty check list")
    echo["checks"] = ",".join(sorted(names)) if names else "all"
    return setup, pair, names, echo


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list_checks:
        width = max(len(name) for name in REGISTRY)
        for name in sorted(REGISTRY):
            print(f"{name:<{width}s}  {REGISTRY[name][0]}")
        return 0
    settings = None
    try:
        settings = _merge_settings(args)
        setup, pair, names, echo = _resolve(settings)
        if names is not None:
            unknown = [n for n in names if n not in REGISTRY]
            if unknown:
                raise ValueError(
                    f"unknown checks: {', '.join(sorted(unknown))}")
        fmt = settings.get("format", "json")
        if fmt not in ("json", "text"):
            raise ValueError(f"unknown format {fmt!r}")
    except ValueError as exc:
        print(f"gkverify: error: {exc}", file=sys.stderr)
        return 2

    cache_dir = settings.get("cache")
    if cache_dir:
        load_product_cache(setup.algebra, cache_dir)
    results = run_checks(CheckContext(setup, pair), names)
    if cache_dir:
        save_product_cache(setup.algebra, cache_dir)

    render = render_json if fmt == "json" else render_text
    sys.stdout.write(render(echo, results, timing=args.timing))
    return 1 if any(r.status == "fail" for r in results) else 0


if __name__ == "__main__":
    sys.exit(main())
