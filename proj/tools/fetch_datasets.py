#!/usr/bin/env python3
# Copyright 2026 The qfusion Authors
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
"""Prepare the benchmark datasets under data/ in the formats qfusion_bench reads.

  wine.csv, breast_cancer.csv   header row, 13 / 30 features, label in last column
  covtype.csv                   no header, 54 features, label 1..7 in last column
  steel_faults.csv              no header, 27 features followed by 7 one-hot target columns
  fashion-mnist/*-ubyte         IDX images (0x00000803) and labels (0x00000801)

Wine and WDBC come from the copies bundled with scikit-learn. Fashion-MNIST is
taken from the `fashion-mnist` npm package (via `npm pack`) or from the
official gzip files. Covertype and Steel Plates Faults are downloaded from the
UCI repository. Each source is optional; failures are reported and skipped.
"""

import argparse
import gzip
import io
import json
import os
import shutil
import struct
import subprocess
import sys
import tarfile
import tempfile
import urllib.request

COVTYPE_URL = "https://archive.ics.uci.edu/ml/machine-learning-databases/covtype/covtype.data.gz"
STEEL_URL = "https://archive.ics.uci.edu/ml/machine-learning-databases/00198/Faults.NNA"
FASHION_URLS = {
    "train-images-idx3-ubyte": "http://fashion-mnist.s3-website.eu-central-1.amazonaws.com/train-images-idx3-ubyte.gz",
    "train-labels-idx1-ubyte": "http://fashion-mnist.s3-website.eu-central-1.amazonaws.com/train-labels-idx1-ubyte.gz",
}


def sklearn_csv(name):
    import sklearn

    return os.path.join(os.path.dirname(sklearn.__file__), "datasets", "data", name)


def write_sklearn_table(src, dst, prefix):
    with open(src) as f:
        header = f.readline().strip().split(",")
        n_features = int(header[1])
        rows = [line.strip() for line in f if line.strip()]
    with open(dst, "w") as out:
        out.write(",".join([f"{prefix}{i}" for i in range(n_features)] + ["target"]) + "\n")
        for row in rows:
            out.write(row + "\n")
    print(f"wrote {dst} ({len(rows)} rows)")


def fetch(url, timeout=20):
    with urllib.request.urlopen(url, timeout=timeout) as resp:
        return resp.read()


def prepare_covtype(out_dir):
    raw = gzip.decompress(fetch(COVTYPE_URL))
    dst = os.path.join(out_dir, "covtype.csv")
    with open(dst, "wb") as f:
        f.write(raw)
    print(f"wrote {dst}")


def prepare_steel(out_dir):
    raw = fetch(STEEL_URL).decode()
    dst = os.path.join(out_dir, "steel_faults.csv")
    with open(dst, "w") as f:
        for line in raw.splitlines():
            fields = line.split()
            if fields:
                f.write(",".join(fields) + "\n")
    print(f"wrote {dst}")


def write_idx(out_dir, images, labels):
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "train-images-idx3-ubyte"), "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, len(images), 28, 28))
        for img in images:
            f.write(bytes(img))
    with open(os.path.join(out_dir, "train-labels-idx1-ubyte"), "wb") as f:
        f.write(struct.pack(">II", 0x00000801, len(labels)))
        f.write(bytes(labels))
    print(f"wrote {out_dir} ({len(images)} images)")


def prepare_fashion_from_npm(out_dir, classes):
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(["npm", "pack", "fashion-mnist@1.1.0"], cwd=tmp, check=True,
                       stdout=subprocess.DEVNULL)
        tarball = [p for p in os.listdir(tmp) if p.endswith(".tgz")][0]
        images, labels = [], []
        with tarfile.open(os.path.join(tmp, tarball)) as tar:
            for c in classes:
                member = tar.extractfile(f"package/src/clothes/{c}.json")
                data = json.load(io.TextIOWrapper(member))["data"]
                for img in data:
                    if len(img) != 28 * 28:
                        continue  # the package carries a few empty records
                    images.append([int(v) for v in img])
                    labels.append(c)
    write_idx(out_dir, images, labels)


def prepare_fashion_from_official(out_dir):
    os.makedirs(out_dir, exist_ok=True)
    for name, url in FASHION_URLS.items():
        with open(os.path.join(out_dir, name), "wb") as f:
            f.write(gzip.decompress(fetch(url)))
    print(f"wrote {out_dir}")


def main():
    parser = argparse.ArgumentParser(description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    parser.add_argument("--only", nargs="*",
                        default=["wine", "breast_cancer", "fashion_mnist", "covertype", "steel"])
    args = parser.parse_args()
    out = os.path.abspath(args.out)
    os.makedirs(out, exist_ok=True)

    failures = []
    steps = {
        "wine": lambda: write_sklearn_table(sklearn_csv("wine_data.csv"),
                                            os.path.join(out, "wine.csv"), "f"),
        "breast_cancer": lambda: write_sklearn_table(sklearn_csv("breast_cancer.csv"),
                                                     os.path.join(out, "breast_cancer.csv"), "f"),
        "covertype": lambda: prepare_covtype(out),
        "steel": lambda: prepare_steel(out),
    }

    def fashion():
        target = os.path.join(out, "fashion-mnist")
        try:
            prepare_fashion_from_official(target)
        except Exception as err:  # noqa: BLE001
            print(f"official Fashion-MNIST download failed ({err}); trying npm package")
            if shutil.which("npm") is None:
                raise
            # Only classes 0..2 are used by the benchmark.
            prepare_fashion_from_npm(target, classes=[0, 1, 2])

    steps["fashion_mnist"] = fashion

    for name in args.only:
        try:
            steps[name]()
        except Exception as err:  # noqa: BLE001
            failures.append(name)
            print(f"[skip] {name}: {err}", file=sys.stderr)
    if failures:
        print("unavailable: " + ", ".join(failures), file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
