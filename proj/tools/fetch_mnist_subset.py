#!/usr/bin/env python3
"""Write a small MNIST subset as an IDX image/label pair.

The source is either the official IDX files (optionally gzipped) or a CSV with
784 pixel columns followed by a label column. The first `--per-digit` images of
each requested digit are kept, in file order.

    python3 tools/fetch_mnist_subset.py --idx train-images-idx3-ubyte.gz train-labels-idx1-ubyte.gz \
        --digits 2,4,6,8 --per-digit 500 --out tests/data
"""
import argparse
import gzip
import struct
from pathlib import Path

import numpy as np


def _open(path):
    return gzip.open(path, "rb") if str(path).endswith(".gz") else open(path, "rb")


def read_idx(images_path, labels_path):
    with _open(images_path) as f:
        magic, count, rows, cols = struct.unpack(">IIII", f.read(16))
        if magic != 0x803:
            raise SystemExit(f"{images_path}: bad magic {magic:#x}")
        images = np.frombuffer(f.read(count * rows * cols), dtype=np.uint8).reshape(count, rows * cols)
    with _open(labels_path) as f:
        magic, count = struct.unpack(">II", f.read(8))
        if magic != 0x801:
            raise SystemExit(f"{labels_path}: bad magic {magic:#x}")
        labels = np.frombuffer(f.read(count), dtype=np.uint8)
    return images, labels


def read_csv(path):
    with _open(path) as f:
        table = np.loadtxt(f, delimiter=",")
    return table[:, :-1].astype(np.uint8), table[:, -1].astype(np.uint8)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--idx", nargs=2, metavar=("IMAGES", "LABELS"))
    src.add_argument("--csv")
    ap.add_argument("--digits", default="2,4,6,8")
    ap.add_argument("--per-digit", type=int, default=500)
    ap.add_argument("--out", default="tests/data")
    ap.add_argument("--prefix", default="mnist-subset")
    args = ap.parse_args()

    images, labels = read_idx(*args.idx) if args.idx else read_csv(args.csv)
    keep = []
    for digit in (int(d) for d in args.digits.split(",")):
        keep.extend(np.flatnonzero(labels == digit)[: args.per_digit])
    keep = np.sort(np.array(keep, dtype=np.int64))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / f"{args.prefix}-images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x803, len(keep), 28, 28))
        f.write(images[keep].astype(np.uint8).tobytes())
    with open(out / f"{args.prefix}-labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x801, len(keep)))
        f.write(labels[keep].astype(np.uint8).tobytes())
    print(f"wrote {len(keep)} images to {out}")


if __name__ == "__main__":
    main()
