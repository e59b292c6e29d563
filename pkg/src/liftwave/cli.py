"""Command-line tools for lifted biorthogonal wavelet filter banks.

Subcommands: ``filters``, ``freqz``, ``dwt``, ``idwt``, ``train``, ``dataset``.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import io as lwio
from .dwt2d import dwt2, idwt2
from .lifting import INIT_MODES, LiftingError, LiftingParams, build_filters, init_params
from .spectral import freqz
from .training import TrainConfig, make_toy_dataset, train

FORMAT_VERSION = 1
CSV_HEADER = ("omega", "magnitude", "phase")
EXIT_ERROR = 2
EXIT_DIVERGED = 3


class CLIError(Exception):
    pass


def load_schema(name: str) -> dict:
    text = resources.files("liftwave").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def default_config() -> dict:
    return json.loads(resources.files("liftwave").joinpath("default_config.json").read_text())


def schema_errors(doc, name: str) -> list[str]:
    """One ``path: message`` line per schema violation, sorted by path."""
    validator = jsonschema.Draft202012Validator(load_schema(name))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    return [f"{'.'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}" for e in errors]


def config_from_json(doc) -> TrainConfig:
    problems = schema_errors(doc, "train_config")
    if problems:
        raise CLIError("invalid config:\n  " + "\n  ".join(problems))
    doc = dict(doc)
    doc.pop("format_version")
    cfg = TrainConfig.from_dict(doc)
    try:
        cfg.validate()
    except (ValueError, LiftingError) as e:
        raise CLIError(f"invalid config:\n  {e}") from None
    return cfg


def _read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise CLIError(f"{path}: malformed JSON: {e}") from None
    except OSError as e:
        raise CLIError(f"cannot read {path}: {e.strerror}") from None


def resolve_params(args) -> LiftingParams:
    """Lifting coefficients from ``--params`` or ``--init`` plus ``--steps``."""
    if args.params is not None and args.init is not None:
        raise CLIError("give either --params or --init, not both")
    if args.params is not None:
        text = args.params.strip()
        try:
            values = tuple(float(v) for v in text.split(",")) if text else ()
        except ValueError:
            raise CLIError(f"cannot parse --params {args.params!r}") from None
        if args.steps is not None and len(values) != args.steps:
            raise CLIError(f"--params has {len(values)} values but --steps is {args.steps}")
        return LiftingParams(values)
    if args.init is not None:
        params = init_params(args.init, steps=args.steps)
        if args.steps is not None and params.steps != args.steps:
            raise CLIError(f"--init {args.init} has {params.steps} steps, not {args.steps}")
        return params
    return LiftingParams((0.0,) * (args.steps or 0))


def _fmt4(values) -> str:
    return ", ".join(f"{v:.4f}" for v in values)


def cmd_filters(args, out):
    params = resolve_params(args)
    fp = build_filters(params)
    if args.format == "json":
        doc = {
            "format_version": FORMAT_VERSION,
            "steps": params.steps,
            "params": list(params.a),
            "h0": fp.h0.tolist(),
            "h1": fp.h1.tolist(),
            "base_delay": fp.base_delay,
        }
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(f"steps: {params.steps}\n")
        out.write(f"a: {_fmt4(params.a)}\n")
        out.write(f"h0: {_fmt4(fp.h0)}\n")
        out.write(f"h1: {_fmt4(fp.h1)}\n")


def write_freqz_csv(fr, stream):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in fr.rows():
        w.writerow([repr(float(v)) for v in row])


def cmd_freqz(args, out):
    if args.samples < 2:
        raise CLIError(f"--samples must be >= 2, got {args.samples}")
    params = resolve_params(args)
    fp = build_filters(params)
    taps = fp.h0 if args.which == "h0" else fp.h1
    fr = freqz(taps, args.samples, {"steps": params.steps, "a": list(params.a), "which": args.which})
    if args.out in (None, "-"):
        write_freqz_csv(fr, out)
        return
    try:
        with open(args.out, "w", newline="") as f:
            write_freqz_csv(fr, f)
    except OSError as e:
        raise CLIError(f"cannot write {args.out}: {e.strerror}") from None


def cmd_dwt(args, out):
    try:
        img, maxval = lwio.read_pgm(args.input)
    except OSError as e:
        raise CLIError(f"cannot read {args.input}: {e.strerror}") from None
    fp = build_filters(resolve_params(args))
    s = dwt2(lwio.to_unit_range(img, maxval), fp)
    lwio.write_archive(args.out, s, extra={"maxval": maxval})


def cmd_idwt(args, out):
    try:
        s, header = lwio.read_archive(args.input)
    except OSError as e:
        raise CLIError(f"cannot read {args.input}: {e.strerror}") from None
    maxval = int(header.get("maxval", 255))
    x = idwt2(s, build_filters(LiftingParams(s.params)))
    lwio.write_pgm(args.out, lwio.quantize(x, maxval), maxval)


def _load_config(path) -> TrainConfig:
    doc = default_config() if path is None else _read_json(path)
    return config_from_json(doc)


def cmd_train(args, out):
    cfg = _load_config(args.config)
    report = train(cfg)
    doc = {"format_version": FORMAT_VERSION, "config": cfg.to_dict()} | report.to_dict()
    text = json.dumps(doc, indent=2) + "\n"
    if args.out in (None, "-"):
        out.write(text)
    else:
        Path(args.out).write_text(text)
    if report.diverged:
        print(f"error: training diverged at epoch {report.diverged_epoch}", file=sys.stderr)
        return EXIT_DIVERGED
    final = report.train_accuracy[-1], report.test_accuracy[-1]
    print(f"final train accuracy {final[0]:.4f}, test accuracy {final[1]:.4f}", file=sys.stderr)
    return 0


def cmd_dataset(args, out):
    cfg = _load_config(args.spec)
    data = make_toy_dataset(cfg.dataset, cfg.seed)
    root = Path(args.out)
    rows = []
    for split, xs, ys in (("train", data.x_train, data.y_train), ("test", data.x_test, data.y_test)):
        (root / split).mkdir(parents=True, exist_ok=True)
        for i, (x, y) in enumerate(zip(xs, ys)):
            name = f"{split}/{i:05d}.pgm"
            lwio.write_pgm(root / name, lwio.quantize(np.clip(x[0], 0.0, 1.0)))
            rows.append((name, split, int(y)))
    with open(root / "labels.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(("file", "split", "label"))
        w.writerows(rows)


def _add_param_args(p):
    p.add_argument("--steps", type=int, default=None, help="number of lifting steps")
    p.add_argument("--params", default=None, help="comma-separated a_1,...,a_N")
    p.add_argument("--init", choices=INIT_MODES, default=None,
                   help="named initialization instead of --params")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="liftwave", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filters", help="print analysis filter taps")
    _add_param_args(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_filters)

    p = sub.add_parser("freqz", help="frequency response as CSV")
    _add_param_args(p)
    p.add_argument("--which", choices=("h0", "h1"), default="h1")
    p.add_argument("--samples", type=int, default=512)
    p.add_argument("--out", default=None, help="CSV path (stdout if omitted)")
    p.set_defaults(func=cmd_freqz)

    p = sub.add_parser("dwt", help="decompose a P5 PGM into a subband archive")
    _add_param_args(p)
    p.add_argument("--input", required=True, help="P5 PGM with even dimensions")
    p.add_argument("--out", required=True, help="subband archive path")
    p.set_defaults(func=cmd_dwt)

    p = sub.add_parser("idwt", help="reconstruct a P5 PGM from a subband archive")
    p.add_argument("--input", required=True, help="subband archive written by dwt")
    p.add_argument("--out", required=True, help="P5 PGM path")
    p.set_defaults(func=cmd_idwt)

    p = sub.add_parser("train", help="train the wavelet unit on stripe textures")
    p.add_argument("--config", default=None, help="TrainConfig JSON (shipped default if omitted)")
    p.add_argument("--out", default=None, help="report path (stdout if omitted)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("dataset", help="export the toy dataset as PGM files")
    p.add_argument("--spec", default=None, help="TrainConfig JSON supplying seed and dataset")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_dataset)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out) or 0
    except (CLIError, LiftingError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
