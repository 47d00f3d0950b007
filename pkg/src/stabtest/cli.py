"""Command-line entry point: ``stabtest {gen,analyze,test,cover,sweep}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cover import canonical_form, fidelity_from_subgroup, purity_bound_check, stabilizer_cover
from .errors import ConfigurationError, NumericalIntegrityError, ResourceGuardError, StabtestError
from .f2 import F2Subspace
from .harness import (
    KINDS,
    SweepConfig,
    StateSpec,
    generate_state,
    read_state,
    records_csv,
    run_sweep,
    state_to_dict,
)
from .sampler import SampleChannel, tolerant_test
from .spectra import (
    gowers_norm_pow,
    spectrum_csv,
    stabilizer_fidelity_exact,
    weyl_distribution,
    weyl_spectrum,
    weyl_uniformity,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RESOURCE = 3
EXIT_NUMERICAL = 4


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _add_state_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", choices=KINDS)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--file", help="state JSON file (implies --kind file)")


def _state_from_args(args):
    if args.file:
        return read_state(args.file)
    if not args.kind:
        raise ConfigurationError("give --kind or --file")
    return generate_state(StateSpec(args.kind, args.n, args.seed, args.noise))


def cmd_gen(args) -> int:
    s = _state_from_args(args)
    _emit(json.dumps(state_to_dict(s)) + "\n", args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    s = _state_from_args(args)
    if args.what == "gowers":
        print(repr(gowers_norm_pow(s, args.k)))
    elif args.what == "spectrum":
        spec = weyl_spectrum(s)
        _emit(spectrum_csv(spec, weyl_distribution(spec)), args.out)
    elif args.what == "uniformity":
        spec = weyl_spectrum(s)
        print(repr(weyl_uniformity(spec, weyl_distribution(spec))))
    else:
        w = stabilizer_fidelity_exact(s)
        print(json.dumps({"fidelity": w.fidelity, "group": w.group.pauli_strings(), "signs": list(w.generator_signs)}))
    return EXIT_OK


def cmd_test(args) -> int:
    s = _state_from_args(args)
    eps2 = args.eps2 if args.eps2 is not None else args.eps1**6 / 2
    ch = SampleChannel(s, seed=args.seed)
    verdict = tolerant_test(ch, args.eps1, eps2, args.fail_prob)
    print(verdict.to_json())
    return EXIT_OK


def _subgroup_from_args(args) -> F2Subspace:
    if args.subgroup_file:
        text = Path(args.subgroup_file).read_text()
        data = json.loads(text)
        strings = data["generators"] if isinstance(data, dict) else data
    elif args.subgroup is not None:
        strings = [t for t in args.subgroup.replace(" ", "").split(",") if t]
    else:
        raise ConfigurationError("give --subgroup or --subgroup-file")
    if not strings:
        if args.n is None:
            raise ConfigurationError("an empty subgroup needs --n")
        return F2Subspace(args.n, ())
    return F2Subspace.from_strings(strings, args.n)


def cmd_cover(args) -> int:
    V = _subgroup_from_args(args)
    cover = stabilizer_cover(V)
    out = cover.to_dict()
    out["subgroup"] = V.pauli_strings()
    if args.state:
        s = read_state(args.state)
        spec = weyl_spectrum(s)
        bound, group = fidelity_from_subgroup(spec, V)
        pb = purity_bound_check(spec, V)
        out["bound"] = bound
        out["best_group"] = group.pauli_strings()
        out["purity"] = {"lhs": pb.lhs, "rhs": pb.rhs, "ok": pb.ok}
    print(json.dumps(out))
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = SweepConfig.load(args.config)
    records, summary = run_sweep(config)
    _emit(records_csv(records), args.out)
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    if args.summary:
        Path(args.summary).write_text(text)
    else:
        sys.stderr.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stabtest", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a state file")
    _add_state_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("analyze", help="analyze a state")
    p.add_argument("what", choices=["gowers", "spectrum", "fidelity", "uniformity"])
    _add_state_args(p)
    p.add_argument("--k", type=int, default=3, help="Gowers order (2 or 3)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("test", help="run the tolerant stabilizer tester")
    _add_state_args(p)
    p.add_argument("--eps1", type=float, required=True)
    p.add_argument("--eps2", type=float, help="default eps1^6 / 2")
    p.add_argument("--fail-prob", type=float, default=0.05)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("cover", help="canonical form and stabilizer cover of a subgroup")
    p.add_argument("--subgroup", help='comma-separated generators, e.g. "XI,ZI"')
    p.add_argument("--subgroup-file", help="JSON list of Pauli strings")
    p.add_argument("--n", type=int)
    p.add_argument("--state", help="state file for fidelity bounds")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("sweep", help="run a config-driven sweep to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--summary", help="write the summary JSON here instead of stderr")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        code, msg = EXIT_CONFIG, exc
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        code, msg = EXIT_CONFIG, exc
    except ResourceGuardError as exc:
        code, msg = EXIT_RESOURCE, exc
    except NumericalIntegrityError as exc:
        code, msg = EXIT_NUMERICAL, exc
    except StabtestError as exc:
        code, msg = 1, exc
    print(f"stabtest: error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
