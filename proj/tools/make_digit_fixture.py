#!/usr/bin/env python3
# Copyright 2026 The CGLRAM Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Converts an MNIST CSV dump (784 pixels + label per row) to IDX3/IDX1.

Takes the first count/10 images of every digit class and interleaves them
class by class, so any prefix of the output stays balanced. The checked-in
fixture under tests/data was produced from mlxtend's mnist_5k.csv.gz (itself
a subset of MNIST):

    pip download mlxtend --no-deps -d /tmp/mlx
    python3 -c "import zipfile; zipfile.ZipFile('/tmp/mlx/<wheel>').extract(
        'mlxtend/data/data/mnist_5k.csv.gz', '/tmp/mlx')"
    tools/make_digit_fixture.py /tmp/mlx/mlxtend/data/data/mnist_5k.csv.gz \
        tests/data/digits1k --count 1000
"""

import argparse
import gzip
import struct


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", help="CSV or CSV.gz with 784 pixels then a label per row")
    parser.add_argument("prefix", help="writes <prefix>-images.idx3-ubyte and -labels.idx1-ubyte")
    parser.add_argument("--count", type=int, default=1000)
    args = parser.parse_args()

    opener = gzip.open if args.csv.endswith(".gz") else open
    per_class = args.count // 10
    by_class = {d: [] for d in range(10)}
    with opener(args.csv, "rt") as f:
        for line in f:
            cells = [int(float(v)) for v in line.strip().split(",")]
            if len(cells) != 785:
                raise SystemExit(f"expected 785 columns, got {len(cells)}")
            bucket = by_class[cells[784]]
            if len(bucket) < per_class:
                bucket.append(bytes(cells[:784]))

    images, labels = [], []
    for i in range(per_class):
        for digit in range(10):
            if i < len(by_class[digit]):
                images.append(by_class[digit][i])
                labels.append(digit)

    with open(args.prefix + "-images.idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, len(images), 28, 28))
        for img in images:
            f.write(img)
    with open(args.prefix + "-labels.idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x00000801, len(labels)))
        f.write(bytes(labels))


if __name__ == "__main__":
    main()
