"""Command-line interface.

Subcommands: construct, encode, decode, classify, latency, simulate.
Bit and LLR vectors travel as whitespace-separated text on the standard
streams; codes travel as JSON descriptor files.
"""

import argparse
import json
import sys

import numpy as np

from .classify import PlanOptions, classify, plan_stats
from .codec import encode, sc_decode
from .construction import construct_code, load_descriptor, save_descriptor
from .crc import CRC8, CRC16
from .fastsc import fast_ssc_decode
from .fastscl import fast_scl_decode
from .latency import latency_table
from .listdec import scl_decode
from .sim import load_sim_config, run_bler

_CRC = {"none": None, "crc8": CRC8, "crc16": CRC16}


def _read_vector(stream, dtype):
    data = stream.read().split()
    return np.array([dtype(tok) for tok in data])


def _write_vector(stream, vec, fmt):
    stream.write(" ".join(fmt % v for v in vec) + "\n")


def _node_options(args):
    names = args.nodes
    return PlanOptions(
        enable_grep=names in ("grep", "gpc", "rgpc"),
        enable_gpc=names in ("gpc", "rgpc"),
        max_af=args.max_af if names == "rgpc" else 0,
    )


def cmd_construct(args):
    code = construct_code(args.n, args.K, args.sigma)
    save_descriptor(code, args.out)
    print(f"wrote N={code.N} K={code.K} sigma={code.design_sigma} -> {args.out}")


def cmd_encode(args):
    code = load_descriptor(args.code)
    u = _read_vector(sys.stdin, int).astype(np.uint8)
    _write_vector(sys.stdout, encode(u, code), "%d")


def cmd_decode(args):
    code = load_descriptor(args.code)
    llrs = _read_vector(sys.stdin, float)
    if args.algo == "sc":
        u_hat, _ = sc_decode(llrs, code, minsum=args.minsum)
    elif args.algo == "fastssc":
        plan = classify(code, _node_options(args))
        u_hat, _ = fast_ssc_decode(llrs, plan, minsum=args.minsum)
    elif args.algo == "scl":
        u_hat, _ = scl_decode(llrs, code, args.list, _CRC[args.crc], minsum=args.minsum)
    else:
        plan = classify(code, _node_options(args))
        u_hat, _ = fast_scl_decode(llrs, code, plan, args.list, _CRC[args.crc],
                                   minsum=args.minsum)
    _write_vector(sys.stdout, u_hat, "%d")


def cmd_classify(args):
    code = load_descriptor(args.code)
    plan = classify(code, _node_options(args))
    if args.json:
        json.dump(plan.to_dict(), sys.stdout, indent=2)
        print()
    else:
        print("\n".join(plan.pretty()))
        print("stats:", json.dumps(plan_stats(plan), sort_keys=True))


def cmd_latency(args):
    code = load_descriptor(args.code)
    table = latency_table(code)
    labels = [r.node_set for r in table["sc"]]
    if args.csv:
        print("decoder,node_set,steps")
        for dec in ("sc", "scl"):
            for rep in table[dec]:
                print(f"{dec},{rep.node_set},{rep.total_steps}")
    else:
        width = max(len(s) for s in labels) + 2
        print(" " * 6 + "".join(s.rjust(width) for s in labels))
        for dec in ("sc", "scl"):
            cells = "".join(str(r.total_steps).rjust(width) for r in table[dec])
            print(dec.ljust(6) + cells)


def cmd_simulate(args):
    cfg = load_sim_config(args.config)
    result = run_bler(cfg)
    with open(args.out, "w") as fh:
        result.to_csv(fh)
    if args.emit_plotdata:
        with open(args.emit_plotdata, "w") as fh:
            fh.write(f"# {result.config_label}\n")
            for p in result.points:
                fh.write(f"{p.snr_db:g} {p.bler:.8e}\n")
    print(f"wrote {args.out}")


def build_parser():
    ap = argparse.ArgumentParser(prog="fastpolar",
                                 description="polar coding with generalized fast decoding")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a frozen set and write a code descriptor")
    p.add_argument("-n", type=int, required=True, help="log2 of the block length")
    p.add_argument("-K", type=int, required=True, help="number of unfrozen bit-channels")
    p.add_argument("--sigma", type=float, default=0.5, help="design noise std dev")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("encode", help="encode a bit vector from stdin")
    p.add_argument("--code", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode an LLR vector from stdin")
    p.add_argument("--code", required=True)
    p.add_argument("--algo", choices=["sc", "fastssc", "scl", "ssclspc"], default="sc")
    p.add_argument("--list", type=int, default=4)
    p.add_argument("--crc", choices=list(_CRC), default="none")
    p.add_argument("--nodes", choices=["base", "grep", "gpc", "rgpc"], default="gpc")
    p.add_argument("--max-af", dest="max_af", type=int, default=0)
    p.add_argument("--minsum", action="store_true")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("classify", help="print the pruned decode tree")
    p.add_argument("--code", required=True)
    p.add_argument("--nodes", choices=["base", "grep", "gpc", "rgpc"], default="gpc")
    p.add_argument("--max-af", dest="max_af", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("latency", help="emit the node-set sweep of time-step costs")
    p.add_argument("--code", required=True)
    p.add_argument("--sweep", action="store_true", help="kept for compatibility; always sweeps")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_latency)

    p = sub.add_parser("simulate", help="run a Monte-Carlo BLER sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--emit-plotdata", dest="emit_plotdata")
    p.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
