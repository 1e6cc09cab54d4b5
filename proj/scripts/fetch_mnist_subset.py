#!/usr/bin/env python3
# Copyright 2026 The lotdepth Authors
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
"""Writes the 5000-image MNIST subset bundled with mlxtend as gzipped IDX files.

The subset (500 images per digit) is the one shipped inside the mlxtend wheel
as mlxtend/data/data/mnist_5k.csv.gz. Usage:

    python3 scripts/fetch_mnist_subset.py [--wheel PATH] [--out data/mnist]

Without --wheel the wheel is fetched with `pip download mlxtend --no-deps`.
"""

import argparse
import glob
import gzip
import io
import struct
import subprocess
import sys
import tempfile
import zipfile

MEMBER = "mlxtend/data/data/mnist_5k.csv.gz"


def find_wheel(explicit):
    if explicit:
        return explicit
    tmp = tempfile.mkdtemp(prefix="mlxtend-")
    subprocess.check_call([sys.executable, "-m", "pip", "download", "mlxtend",
                           "--no-deps", "-d", tmp])
    wheels = glob.glob(tmp + "/mlxtend-*.whl")
    if not wheels:
        sys.exit("mlxtend wheel not found after pip download")
    return wheels[0]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--wheel")
    ap.add_argument("--out", default="data/mnist")
    args = ap.parse_args()

    with zipfile.ZipFile(find_wheel(args.wheel)) as z:
        text = gzip.decompress(z.read(MEMBER)).decode()

    images, labels = [], []
    for line in io.StringIO(text):
        line = line.strip()
        if not line:
            continue
        vals = [int(float(v)) for v in line.split(",")]
        images.append(bytes(vals[:784]))
        labels.append(vals[784])

    n = len(images)
    img_path = f"{args.out}/mnist5k-images-idx3-ubyte.gz"
    lbl_path = f"{args.out}/mnist5k-labels-idx1-ubyte.gz"
    # mtime=0 keeps the output byte-stable across runs.
    with open(img_path, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as f:
        f.write(struct.pack(">IIII", 0x00000803, n, 28, 28))
        for img in images:
            f.write(img)
    with open(lbl_path, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as f:
        f.write(struct.pack(">II", 0x00000801, n))
        f.write(bytes(labels))
    print(f"wrote {n} images to {img_path} and {lbl_path}")


if __name__ == "__main__":
    main()
