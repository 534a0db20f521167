"""Sizes of P, P^kappa + P_g and P^HT + P_g on generated programs (or .lp files given as arguments)."""

import argparse
from pathlib import Path

from paracoherent.bench import GeneratorConfig, format_size_table, generate_instances, report_transform_sizes
from paracoherent.program import parse


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("files", nargs="*")
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--atoms", type=int, default=8)
    ap.add_argument("--rules", type=int, default=12)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    instances = [(Path(f).stem, parse(Path(f).read_text())) for f in args.files]
    if not instances:
        gen = GeneratorConfig(count=args.count, atoms=args.atoms, rules=args.rules)
        instances = generate_instances(gen, args.seed)
    print(format_size_table(report_transform_sizes(instances)))


if __name__ == "__main__":
    main()
