"""Branch amplitudes, their superposition and the split-operator reference on x >= -2.8."""

import argparse
import json
from pathlib import Path

from complexaction.config import load_config
from complexaction.runs import run_compare, run_interfere, run_reference


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/fig3")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    out = Path(args.out)

    cfg = load_config("fig3")
    print("reference:", run_reference(cfg, out))
    nodes = run_interfere(cfg, out, threads=args.threads)
    print("nodes of |psi1 + psi2|:", [round(x, 3) for x in nodes["nodes_sum"]])
    print("nodes of |psi1|, |psi2|:", nodes["nodes_reflected"], nodes["nodes_direct"])
    rep = run_compare(cfg, out, threads=args.threads)
    print(json.dumps({k: rep[k] for k in ("nodes_reference", "max_node_displacement", "rel_l2_modulus", "excluded_below")}, indent=2))


if __name__ == "__main__":
    main()
