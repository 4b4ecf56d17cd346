"""Command-line workflows: keygen, encrypt, decrypt, analyze, demo.

Exit codes: 0 on success, 2 for invalid parameters or arguments, 3 for
malformed or unreadable files.  All randomness is driven by --seed
(default 0), so identical invocations produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import report as figures
from .protocol import (
    PublicKey,
    WalkConfig,
    decrypt,
    encrypt,
    generate_public_key,
    sample_secret_key,
)
from .security import exhaustive_eavesdropper, holevo_report
from .serialize import (
    StateFormatError,
    config_from_dict,
    config_to_dict,
    read_secret_key,
    read_sidecar,
    read_state,
    write_secret_key,
    write_sidecar,
    write_state,
)

# sweep emitted by `analyze --grid`: message bits x coin-family size x step-set size
GRID_MESSAGE_BITS = (2, 3, 4)
GRID_DIVISORS = (1, 2, 4)
GRID_STEP_COUNTS = (1, 2, 4)


def _seed(value: str) -> int:
    seed = int(value)
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return seed


def _add_config_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="JSON file with public parameters")
    parser.add_argument("--n", type=int, help="message length in bits")
    parser.add_argument("--N", type=int, dest="circle", help="number of cycle positions (default 2^n)")
    parser.add_argument("--d", type=int, help="size of the coin family (default 2^n)")
    parser.add_argument("--t-min", type=int, help="smallest step count (default n)")
    parser.add_argument("--t-max", type=int, help="largest step count (default n^2)")


def _resolve_config(args: argparse.Namespace) -> WalkConfig:
    fields: dict = {}
    if args.config:
        with open(args.config) as fh:
            text = fh.read()
        try:
            fields = json.loads(text)
        except json.JSONDecodeError as exc:
            raise StateFormatError(f"{args.config}: not valid JSON: {exc}") from exc
        if not isinstance(fields, dict):
            raise StateFormatError(f"{args.config}: expected a JSON object")
    overrides = {
        "n": args.n,
        "N": args.circle,
        "d": args.d,
        "t_min": args.t_min,
        "t_max": args.t_max,
    }
    fields.update({k: v for k, v in overrides.items() if v is not None})
    if "n" not in fields:
        raise ValueError("message length --n is required (flag or config file)")
    return config_from_dict(fields)


def cmd_keygen(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    rng = np.random.default_rng(args.seed)
    sk = sample_secret_key(config, rng)
    pk = generate_public_key(sk, config)

    prefix = Path(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    sk_path = Path(f"{prefix}.sk.json")
    pk_path = Path(f"{prefix}.pk.qws")
    write_secret_key(sk, config, sk_path)
    write_state(pk.state, pk_path)
    write_sidecar(config, pk_path)
    if args.verbose:
        print(f"secret key -> {sk_path}", file=sys.stderr)
        print(f"public key -> {pk_path} (+ sidecar)", file=sys.stderr)
    return 0


def cmd_encrypt(args: argparse.Namespace) -> int:
    config = read_sidecar(args.public_key)
    state = read_state(args.public_key)
    if state.n_positions != config.circle_size:
        raise StateFormatError(
            f"public-key state has {state.n_positions} positions, "
            f"sidecar says {config.circle_size}"
        )
    cipher = encrypt(PublicKey(config, state), args.message)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_state(cipher, out)
    write_sidecar(config, out)
    return 0


def cmd_decrypt(args: argparse.Namespace) -> int:
    sk, config = read_secret_key(args.secret_key)
    cipher = read_state(args.cipher)
    if cipher.n_positions != config.circle_size:
        raise StateFormatError(
            f"cipher has {cipher.n_positions} positions, "
            f"secret key expects {config.circle_size}"
        )
    message = decrypt(cipher, sk, config, np.random.default_rng(args.seed))
    print(message)
    return 0


def _emit(text: str, out: str | None) -> None:
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n")
    else:
        print(text)


def cmd_analyze(args: argparse.Namespace) -> int:
    report_dir = Path(args.report_dir) if args.report_dir else None
    if report_dir:
        report_dir.mkdir(parents=True, exist_ok=True)

    if args.grid:
        rows = []
        for bits in GRID_MESSAGE_BITS:
            for divisor in GRID_DIVISORS:
                for t_count in GRID_STEP_COUNTS:
                    config = WalkConfig(
                        message_bits=bits,
                        coin_divisor=divisor,
                        t_min=1,
                        t_max=t_count,
                    )
                    rep = holevo_report(config)
                    rows.append({**config_to_dict(config), **rep.as_dict()})
        lines = [json.dumps(row, sort_keys=True) for row in rows]
        _emit("\n".join(lines), args.out)
        if report_dir:
            figures.write_grid_csv(rows, report_dir / "grid.csv")
            figures.save_grid_figure(rows, report_dir / "grid.png")
            (report_dir / "grid.jsonl").write_text("\n".join(lines) + "\n")
            if args.verbose:
                print(f"grid report -> {report_dir}", file=sys.stderr)
        return 0

    config = _resolve_config(args)
    coin_index = args.k if args.k is not None else 1
    steps = args.t if args.t is not None else config.t_min
    rep = holevo_report(config, coin_index, steps)
    payload = rep.as_dict()

    table = None
    if args.brute_force:
        if args.cipher:
            cipher = read_state(args.cipher)
        else:
            # no cipher supplied: run one honest encryption under --seed
            rng = np.random.default_rng(args.seed)
            sk = sample_secret_key(config, rng)
            pk = generate_public_key(sk, config)
            message = int(rng.integers(0, config.message_space))
            cipher = encrypt(pk, message)
        table = exhaustive_eavesdropper(cipher, config)
        payload["consistent_key_count"] = table.total_keys - table.ambiguous
        payload["eavesdropper"] = {
            "message_counts": {str(m): c for m, c in sorted(table.message_counts.items())},
            "ambiguous": table.ambiguous,
            "total_keys": table.total_keys,
        }

    _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    if report_dir:
        title = (
            f"n={config.message_bits} d={config.coin_divisor} "
            f"|T|={config.t_set_size}"
        )
        figures.save_report_figure(rep, title, report_dir / "report.png")
        (report_dir / "report.json").write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n"
        )
        if table is not None:
            figures.save_message_count_figure(table, report_dir / "eavesdropper.png")
        if args.verbose:
            print(f"analysis report -> {report_dir}", file=sys.stderr)
    return 0


def cmd_demo(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    rng = np.random.default_rng(args.seed)
    sk = sample_secret_key(config, rng)
    pk = generate_public_key(sk, config)
    message = args.message
    if message is None:
        message = int(rng.integers(0, config.message_space))
    cipher = encrypt(pk, message)
    recovered = decrypt(cipher, sk, config, rng)

    def top_positions(state, limit=4):
        probs = state.position_probabilities()
        order = np.argsort(probs)[::-1]
        shown = [f"{i}:{probs[i]:.3f}" for i in order[:limit] if probs[i] > 1e-12]
        return " ".join(shown)

    print(f"parameters : n={config.message_bits} N={config.circle_size} "
          f"d={config.coin_divisor} T={config.t_min}..{config.t_max}")
    print(f"secret key : k={sk.coin_index} t={sk.steps} "
          f"l={sk.start_position} s={sk.start_coin}")
    print(f"message    : {message}")
    print(f"public key : positions {top_positions(pk.state)}")
    print(f"cipher     : positions {top_positions(cipher)}")
    print(f"decoded    : position {(recovered + sk.start_position) % config.circle_size}")
    print(f"recovered  : {recovered}")
    print(f"roundtrip  : {'ok' if recovered == message else 'MISMATCH'}")

    if args.report_dir:
        report_dir = Path(args.report_dir)
        report_dir.mkdir(parents=True, exist_ok=True)
        figures.save_position_figure(
            [("public key", pk.state), (f"cipher (m={message})", cipher)],
            report_dir / "states.png",
        )
        if args.verbose:
            print(f"figures -> {report_dir}", file=sys.stderr)
    return 0 if recovered == message else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwpkc",
        description="Public-key encryption from coined quantum walks on a cycle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=_seed, default=0,
                       help="RNG seed, unsigned 64-bit (default 0)")
        p.add_argument("--verbose", "-v", action="store_true")

    p = sub.add_parser("keygen", help="sample a secret key and publish the walk state")
    _add_config_arguments(p)
    common(p)
    p.add_argument("--out", required=True, metavar="PREFIX",
                   help="writes PREFIX.sk.json, PREFIX.pk.qws and its sidecar")
    p.set_defaults(handler=cmd_keygen)

    p = sub.add_parser("encrypt", help="translate a public-key state by the message")
    common(p)
    p.add_argument("--public-key", required=True, metavar="PATH")
    p.add_argument("--message", required=True, type=int)
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(handler=cmd_encrypt)

    p = sub.add_parser("decrypt", help="invert the walk and read the message")
    common(p)
    p.add_argument("--cipher", required=True, metavar="PATH")
    p.add_argument("--secret-key", required=True, metavar="PATH")
    p.set_defaults(handler=cmd_decrypt)

    p = sub.add_parser("analyze", help="entropy report and optional key enumeration")
    _add_config_arguments(p)
    common(p)
    p.add_argument("--k", type=int, help="fix the walk choice (default 1)")
    p.add_argument("--t", type=int, help="fix the step count (default t_min)")
    p.add_argument("--brute-force", action="store_true",
                   help="enumerate all keys against a cipher (toy sizes only)")
    p.add_argument("--cipher", metavar="PATH",
                   help="cipher for --brute-force (default: honest one from --seed)")
    p.add_argument("--grid", action="store_true",
                   help="sweep a small parameter grid, one JSON object per line")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    p.add_argument("--report-dir", metavar="DIR",
                   help="also render figures and delimited tables into DIR")
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("demo", help="run one honest protocol round and show the transcript")
    _add_config_arguments(p)
    common(p)
    p.add_argument("--message", type=int, help="message to send (default: random)")
    p.add_argument("--report-dir", metavar="DIR",
                   help="render state figures into DIR")
    p.set_defaults(handler=cmd_demo)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (StateFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
