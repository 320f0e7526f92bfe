#!/usr/bin/env python3
"""Write the Ionosphere data as an expose CSV (32 numeric columns + label).

Reads the copy bundled with the keel-ds package (pip install keel-ds), or a
raw UCI ionosphere.data file given with --raw. The binary first attribute and
the constant second attribute are dropped; class "b" becomes "anomaly".
"""
import argparse
import importlib.resources
import sys


def load_rows(raw):
    if raw:
        with open(raw) as f:
            text = f.read()
    else:
        text = importlib.resources.files("keel_ds").joinpath("data/balanced/raw/ionosphere.dat").read_text()
    rows = []
    for line in text.splitlines():
        fields = [f.strip() for f in line.split(",")]
        if len(fields) < 3:
            continue
        values, cls = fields[:-1], fields[-1]
        # UCI has 34 attributes, the KEEL copy already lacks the constant one.
        values = values[2:] if len(values) == 34 else values[1:]
        rows.append((values, "anomaly" if cls == "b" else "normal"))
    return rows


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("out")
    parser.add_argument("--raw", help="UCI ionosphere.data instead of the keel-ds copy")
    args = parser.parse_args()
    rows = load_rows(args.raw)
    if len(rows) != 351 or any(len(v) != 32 for v, _ in rows):
        sys.exit("unexpected shape")
    with open(args.out, "w") as f:
        f.write(",".join(f"x{i + 1}" for i in range(32)) + ",label\n")
        for values, label in rows:
            f.write(",".join(str(float(v)) for v in values) + "," + label + "\n")


if __name__ == "__main__":
    main()
