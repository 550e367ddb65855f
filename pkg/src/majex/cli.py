"""Command-line front end.

Subcommands:

    run      sample the exchange (or tomography) experiment, emit JSON/CSV
    compile  print the device-compiled circuit in the text format
    export   print an ideal or compiled circuit in the text format
    lattice  dump a lattice and its exchange schedule as JSON

All randomness flows from --seed; reports embed the seed and config hashes
so runs are reproducible. Exit codes: 0 success, 2 usage, 3 statistics
undefined (post-selection emptied the table), 4 routing.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import backend
from .circuit_text import format_circuit
from .compiler import (QubitAssignment, ROLES, assign_qubits, assignment_cost,
                       build_compiled, decode_exchange_table)
from .device import DeviceModel, example_device, load_device
from .errors import ParseError, RoutingError, UndefinedStatisticError
from .exchange import (ExperimentDef, ShotTable, correlation, correlation_stderr,
                       outcome_counts, postselect, reconstruct, run_shots,
                       tomography_circuit, tomography_expectation)
from .lattice import build_lattice, exchange_schedule, minimal_exchange_patch, schedule_to_json
from .noise import NoiseConfig

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNDEFINED = 3
EXIT_ROUTING = 4


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _parse_assignment(text: str, device: DeviceModel) -> QubitAssignment:
    if text == "auto":
        return assign_qubits(device)
    mapping: dict[str, int] = {}
    for part in text.split(","):
        role, _, phys = part.partition("=")
        role = role.strip()
        if role not in ROLES or not phys.isdigit():
            raise ValueError(
                f"assignment must be 'auto' or 'v1=Q,v2=Q,v3=Q,e1=Q,e12=Q', got {text!r}")
        mapping[role] = int(phys)
    if sorted(mapping) != sorted(ROLES):
        raise ValueError(f"assignment must cover the roles {ROLES}")
    return QubitAssignment(mapping, 0.0)


def _experiment_circuits(args, device: DeviceModel | None,
                         settings: tuple[str, ...]) -> dict[str, object]:
    circuits = {}
    for setting in settings:
        if args.compiled:
            assignment = assign_qubits(device)
            circuits[setting] = build_compiled(device, assignment, setting)
        else:
            circuits[setting] = tomography_circuit(ExperimentDef(), setting)
    return circuits


def _run_one(circuit, shots: int, noise: NoiseConfig | None, seed: int,
             compiled: bool) -> ShotTable:
    table = run_shots(circuit, shots, noise=noise, seed=seed)
    if compiled:
        table = decode_exchange_table(table)
    return table


def cmd_run(args) -> int:
    device = None
    noise = None
    if args.device or args.compiled or args.noise:
        device = load_device(args.device) if args.device else example_device()
    if args.noise:
        noise = NoiseConfig.from_device(load_device(args.noise))
    if args.compiled and device is None:
        device = example_device()

    metadata = {
        "seed": args.seed,
        "backend": backend.BACKEND_NAME,
        "generator": "PCG64",
        "compiled": bool(args.compiled),
        "device": device.config_id if device else None,
        "noise": noise.config_id if noise else None,
    }

    if args.experiment == "exchange":
        circuit = _experiment_circuits(args, device, ("z",))["z"]
        table = _run_one(circuit, args.shots, noise, args.seed, args.compiled)
        retained = postselect(table)
        metadata["circuit_id"] = table.meta["circuit_id"]
        if args.format == "csv":
            _write(retained.to_csv(), args.out)
            return EXIT_OK
        report = {
            "experiment": "exchange",
            "shots": args.shots,
            "retained": retained.num_shots,
            "outcome_counts": outcome_counts(retained),
            "metadata": metadata,
        }
        if retained.num_shots == 0:
            report["error"] = "post-selection retained zero shots; C undefined"
            _write(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out)
            return EXIT_UNDEFINED
        report["C"] = correlation(retained)
        report["stderr_C"] = correlation_stderr(retained)
        _write(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out)
        return EXIT_OK

    # tomography: three settings, each with its own shot batch
    if args.format == "csv":
        print("CSV output is only available for --experiment exchange",
              file=sys.stderr)
        return EXIT_USAGE
    circuits = _experiment_circuits(args, device, ("x", "y", "z"))
    settings_report = {}
    expectations = {}
    total_retained = 0
    for i, (setting, circuit) in enumerate(sorted(circuits.items())):
        table = _run_one(circuit, args.shots, noise, args.seed + i, args.compiled)
        retained = postselect(table)
        total_retained += retained.num_shots
        if retained.num_shots == 0:
            report = {
                "experiment": "tomography",
                "shots": args.shots,
                "retained": total_retained,
                "error": f"setting {setting}: post-selection retained zero shots",
                "metadata": metadata,
            }
            _write(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out)
            return EXIT_UNDEFINED
        expectations[setting] = tomography_expectation(retained, setting)
        settings_report[setting] = {
            "shots": args.shots,
            "retained": retained.num_shots,
            "expectation": expectations[setting],
        }
    result = reconstruct(expectations)
    report = {
        "experiment": "tomography",
        "shots": args.shots,
        "retained": total_retained,
        "tomography": {
            "bloch": list(result.bloch),
            "fidelity": result.fidelity_to_target,
            "closest_pure": result.closest_pure_fidelity,
            "settings": settings_report,
        },
        "metadata": metadata,
    }
    _write(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def cmd_compile(args) -> int:
    device = load_device(args.device) if args.device else example_device()
    assignment = _parse_assignment(args.assign, device)
    if args.assign != "auto":
        assignment = QubitAssignment(assignment.mapping,
                                     assignment_cost(device, assignment))
    circuit = build_compiled(device, assignment, args.setting)
    header = {
        "assignment": assignment.mapping,
        "score": assignment.score,
        "device": device.name,
        "device_id": device.config_id,
    }
    text = format_circuit(circuit, comments=[json.dumps(header, sort_keys=True)])
    _write(text, args.out)
    return EXIT_OK


def cmd_export(args) -> int:
    if args.compiled:
        device = load_device(args.device) if args.device else example_device()
        circuit = build_compiled(device, assign_qubits(device), args.setting)
    else:
        circuit = tomography_circuit(ExperimentDef(), args.setting)
    _write(format_circuit(circuit), args.out)
    return EXIT_OK


def cmd_lattice(args) -> int:
    if args.minimal_exchange:
        lat, zz_a, zz_b = minimal_exchange_patch()
        sched = exchange_schedule(lat, zz_a, zz_b)
        _write(schedule_to_json(sched) + "\n", args.out)
        return EXIT_OK
    lat = build_lattice(args.rows, args.cols)
    _write(json.dumps(lat.to_json_dict(), indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="majex",
        description="Five-qubit defect-exchange experiment simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="sample the experiment and report statistics")
    p_run.add_argument("--experiment", choices=("exchange", "tomography"),
                       default="exchange")
    p_run.add_argument("--shots", type=int, required=True)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--noise", metavar="FILE", help="noise config (device format)")
    p_run.add_argument("--device", metavar="FILE", help="device file for compilation")
    p_run.add_argument("--compiled", action="store_true",
                       help="run the device-compiled circuit")
    p_run.add_argument("--out", metavar="FILE", help="write the report to a file")
    p_run.add_argument("--format", choices=("json", "csv"), default="json")
    p_run.set_defaults(func=cmd_run)

    p_comp = sub.add_parser("compile", help="compile the exchange circuit for a device")
    p_comp.add_argument("--device", metavar="FILE")
    p_comp.add_argument("--assign", default="auto",
                        help="'auto' or explicit v1=Q,v2=Q,v3=Q,e1=Q,e12=Q")
    p_comp.add_argument("--setting", choices=("x", "y", "z"), default="z")
    p_comp.add_argument("--out", metavar="FILE")
    p_comp.set_defaults(func=cmd_compile)

    p_exp = sub.add_parser("export", help="print a circuit in the text format")
    p_exp.add_argument("--setting", choices=("x", "y", "z"), default="z")
    p_exp.add_argument("--compiled", action="store_true")
    p_exp.add_argument("--device", metavar="FILE")
    p_exp.add_argument("--out", metavar="FILE")
    p_exp.set_defaults(func=cmd_export)

    p_lat = sub.add_parser("lattice", help="dump lattice / schedule JSON")
    p_lat.add_argument("--rows", type=int, default=1)
    p_lat.add_argument("--cols", type=int, default=1)
    p_lat.add_argument("--minimal-exchange", action="store_true",
                       help="the smallest patch embedding the exchange, with schedule")
    p_lat.add_argument("--out", metavar="FILE")
    p_lat.set_defaults(func=cmd_lattice)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "shots", 1) < 1:
        parser.error("--shots must be a positive integer")
    try:
        return args.func(args)
    except RoutingError as exc:
        print(f"routing error: {exc}", file=sys.stderr)
        return EXIT_ROUTING
    except UndefinedStatisticError as exc:
        print(json.dumps({"error": str(exc)}, indent=2))
        return EXIT_UNDEFINED
    except (ParseError, OSError, ValueError) as exc:
        parser.error(str(exc))
        return EXIT_USAGE  # unreachable; parser.error exits 2


if __name__ == "__main__":
    sys.exit(main())
