"""Command-line entry point."""
import argparse
import json
import sys

from .config import build_config, deep_merge
from .exceptions import ConfigError, InvalidInputError, NumericalError
from .runner import PRESETS, run_experiment

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4
SCENARIOS = ("obstruction", "robustness", "mobility", "multiuser")


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON experiment configuration")
    common.add_argument("--out", help="output directory (overrides output_dir)")
    common.add_argument("--paper-mode", action="store_true", default=None,
                        help="paper amplitude/blocking conventions")
    common.add_argument("--log-base", type=int, choices=(2, 10), help="logarithm base for SE")
    common.add_argument("--threads", type=int, help="worker threads for grid sweeps")

    p = argparse.ArgumentParser(prog="airybeam", description="Airy-beam XL-MIMO numerical laboratory")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("field", parents=[common], help="field magnitude/phase on an (x, z) grid")
    sub.add_parser("trajectory", parents=[common], help="theory vs measured main-lobe trajectory")
    sub.add_parser("constraints", parents=[common], help="aperture/spacing design quantities")
    sc = sub.add_parser("scenario", parents=[common], help="obstruction and SE studies")
    sc.add_argument("kind", choices=SCENARIOS)
    rp = sub.add_parser("reproduce", parents=[common], help="run a figure preset")
    rp.add_argument("preset", choices=sorted(PRESETS))
    sub.add_parser("list-presets", help="list figure presets")
    return p


def _flag_overrides(args):
    flags = {}
    if args.paper_mode:
        flags["paper_mode"] = True
    if args.log_base is not None:
        flags["log_base"] = args.log_base
    if args.threads is not None:
        flags["threads"] = args.threads
    over = {"flags": flags} if flags else {}
    if args.out:
        over["output_dir"] = args.out
    return over


def _load(args, preset_overrides=None):
    over = deep_merge(preset_overrides or {}, _flag_overrides(args))
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            try:
                user = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"invalid JSON: {exc}") from exc
        return build_config(deep_merge(preset_overrides or {}, user), _flag_overrides(args))
    return build_config(over)


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        if args.command == "list-presets":
            for name in sorted(PRESETS):
                print(f"{name:28s} {PRESETS[name].description}")
            return EXIT_OK
        if args.command == "reproduce":
            preset = PRESETS[args.preset]
            cfg = _load(args, preset.overrides)
            runner, stem = preset.runner, args.preset
        else:
            cfg = _load(args)
            runner = args.kind if args.command == "scenario" else args.command
            stem = runner
        paths = run_experiment(cfg, runner, command=" ".join(["airybeam"] + list(argv or sys.argv[1:])),
                               stem=stem)
        for path in paths:
            print(path)
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except InvalidInputError as exc:
        print(f"invalid experiment parameters: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
