"""Command-line entry point.

Subcommands: ``code info``, ``dataset gen``, ``sweep``, ``eval``, ``serve``.
Exit status is 0 on success, nonzero with a one-line reason on stderr
otherwise.  The environment variable QGEC_THREADS caps sweep parallelism.
"""

from __future__ import annotations

import argparse
import sys

from . import harness, protocol
from .css import CodeConstructionError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgolay",
        description="Golay/toric quantum code simulator and decoder harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    code = sub.add_parser("code", help="code inspection")
    code_sub = code.add_subparsers(dest="code_command", required=True)
    info = code_sub.add_parser("info", help="print code parameters")
    info.add_argument("id", help="code id, e.g. golay:h1 or toric:5")

    dataset = sub.add_parser("dataset", help="dataset files")
    dataset_sub = dataset.add_subparsers(dest="dataset_command", required=True)
    gen = dataset_sub.add_parser("gen", help="generate (syndrome, label) records")
    gen.add_argument("--code", required=True)
    gen.add_argument("--p", type=float, required=True)
    gen.add_argument("--eta", type=float, default=1.0)
    gen.add_argument("--count", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True)
    gen.add_argument(
        "--p-max",
        type=float,
        default=None,
        help="sample each record's p uniformly from the grid [--p, --p-max]",
    )
    gen.add_argument("--p-step", type=float, default=None)

    sweep = sub.add_parser("sweep", help="Monte Carlo logical-error-rate sweep")
    sweep.add_argument("--code", required=True)
    sweep.add_argument(
        "--decoder",
        required=True,
        help="table | match | external:<command or host:port>",
    )
    sweep.add_argument("--p-min", type=float, required=True)
    sweep.add_argument("--p-max", type=float, required=True)
    sweep.add_argument("--p-step", type=float, required=True)
    sweep.add_argument("--trials", type=int, default=10_000)
    sweep.add_argument("--eta", type=float, default=1.0)
    sweep.add_argument("--seed", type=int, required=True)
    sweep.add_argument("--out", required=True)

    ev = sub.add_parser("eval", help="score a predictions file against a dataset")
    ev.add_argument("--dataset", required=True)
    ev.add_argument("--predictions", required=True)
    ev.add_argument("--out", default=None, help="optional CSV output path")

    serve = sub.add_parser("serve", help="serve a decoder over the wire protocol")
    serve.add_argument("--code", required=True)
    serve.add_argument("--decoder", default="table", choices=["table", "match"])
    serve.add_argument(
        "--listen",
        default=None,
        metavar="HOST:PORT",
        help="serve on a TCP socket instead of stdin/stdout (port 0 picks a free port)",
    )
    return parser


def _cmd_code_info(args: argparse.Namespace) -> int:
    print(harness.code_info(args.id))
    return 0


def _cmd_dataset_gen(args: argparse.Namespace) -> int:
    header = harness.generate_dataset(
        code_id=args.code,
        p=args.p,
        eta=args.eta,
        count=args.count,
        seed=args.seed,
        out_path=args.out,
        p_max=args.p_max,
        p_step=args.p_step,
    )
    print(f"wrote {header.count} records for {header.code} to {args.out}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = harness.SweepConfig(
        code_id=args.code,
        decoder_id=args.decoder,
        p_min=args.p_min,
        p_max=args.p_max,
        p_step=args.p_step,
        trials=args.trials,
        eta=args.eta,
        seed=args.seed,
    )
    harness.write_sweep_sidecar(args.out, config)
    external = None
    if config.decoder_id.startswith("external:"):
        target = config.decoder_id.partition(":")[2]
        channel = protocol.open_channel(target)
        external = protocol.ExternalDecoder(channel, harness.get_code(config.code_id).code)
    done = 0
    try:
        with open(args.out, "w") as f:
            f.write(harness.CSV_HEADER + "\n")
            for point in harness.iter_sweep(config, decoder=external):
                f.write(point.csv_row() + "\n")
                f.flush()
                done += 1
    except protocol.ProtocolError as exc:
        print(
            f"error: external decoder failed after {done} completed points "
            f"(partial results in {args.out}): {exc}",
            file=sys.stderr,
        )
        return 1
    finally:
        if external is not None:
            external.close()
    print(f"wrote {done} sweep points to {args.out}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    report = harness.evaluate_predictions(args.dataset, args.predictions)
    lo, hi = report.ci
    print(f"code: {report.code}")
    print(f"records: {report.trials}")
    print(f"logical failures: {report.failures}")
    print(f"logical error rate: {report.rate:.6g} (95% CI [{lo:.6g}, {hi:.6g}])")
    print(
        f"breakdown: logical_x={report.fail_x} logical_z={report.fail_z} "
        f"logical_y={report.fail_y} syndrome_inconsistent={report.inconsistent}"
    )
    if args.out:
        with open(args.out, "w") as f:
            f.write(harness.CSV_HEADER + "\n")
            row = harness.PointResult(
                p=float("nan"),
                trials=report.trials,
                failures=report.failures,
                fail_x=report.fail_x,
                fail_z=report.fail_z,
                fail_y=report.fail_y,
                inconsistent=report.inconsistent,
            )
            f.write(row.csv_row() + "\n")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    bundle = harness.get_code(args.code)
    decoder = harness.make_decoder(args.decoder, bundle)
    if args.listen is None:
        protocol.serve_stdio(decoder)
        return 0
    host, _, port = args.listen.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"--listen expects HOST:PORT, got {args.listen!r}")
    protocol.serve_tcp(decoder, host, int(port))
    return 0


_COMMANDS = {
    ("code", "info"): _cmd_code_info,
    ("dataset", "gen"): _cmd_dataset_gen,
    ("sweep", None): _cmd_sweep,
    ("eval", None): _cmd_eval,
    ("serve", None): _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    sub = getattr(args, f"{args.command}_command", None)
    handler = _COMMANDS[(args.command, sub)]
    try:
        return handler(args)
    except (ValueError, CodeConstructionError, protocol.ProtocolError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
