#!/usr/bin/env python3
# Copyright 2026 The Prefrank Authors.
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

"""Step-by-step estimate of the three-college fixture, by bisection.

Inverts every interval numerically (no closed forms) and prints each row of
the transition matrix, for both inversion modes. The printed numbers are
frozen into tests/unit/test_estimation.cpp.
"""
import csv
import math
import os

Z = 1.959964
HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "data")


def wilson(s, m):
    c = (2 * s * m + Z * Z) / (2 * m + 2 * Z * Z)
    h = Z / (2 * m + 2 * Z * Z) * math.sqrt(4 * s * (1 - s) * m + Z * Z)
    return c, h


def bisect_size(target, f):
    """Smallest m with f(m) = target, f increasing in log m."""
    lo, hi = -30.0, 40.0
    for _ in range(400):
        mid = (lo + hi) / 2
        if f(math.exp(mid)) < target:
            lo = mid
        else:
            hi = mid
    return math.exp((lo + hi) / 2)


def size_from_lower(s, eta):
    return bisect_size(eta, lambda m: wilson(s, m)[0] - wilson(s, m)[1])


def size_from_length(s, length):
    return bisect_size(-length, lambda m: -2 * wilson(s, m)[1])


def main():
    with open(os.path.join(DATA, "three_institutions.csv")) as f:
        inst = list(csv.DictReader(f))
    with open(os.path.join(DATA, "three_preferences.csv")) as f:
        prefs = list(csv.DictReader(f))
    ids = [r["id"] for r in inst]
    enrolled = {r["id"]: int(r["enrolled"]) for r in inst}
    admits = {r["id"]: int(r["admits"]) for r in inst}
    obs = {}
    for r in prefs:
        s, lo, hi = float(r["share"]), float(r["ci_lower"]), float(r["ci_upper"])
        size = int(r["survey_size"]) if r["survey_size"] else None
        obs[(r["from_id"], r["to_id"])] = (s, lo, hi, size)
        obs[(r["to_id"], r["from_id"])] = (1 - s, 1 - hi, 1 - lo, size)

    for mode in ("lower-bound", "length"):
        print("mode", mode)
        for i in ids:
            e_max = max(enrolled[k] for k in ids if k != i)
            n = {}
            for j in ids:
                if j == i or (i, j) not in obs:
                    continue
                s, lo, hi, size = obs[(i, j)]
                if size is not None:
                    m = float(size)
                elif mode == "lower-bound":
                    m = size_from_lower(s, lo)
                else:
                    m = size_from_length(s, hi - lo)
                c, h = wilson(s, m)
                f = math.sqrt(enrolled[j] / e_max)
                if mode == "lower-bound":
                    m2 = size_from_lower(s, s - f * (s - (c - h)))
                else:
                    m2 = size_from_length(s, 2 * f * h)
                n[j] = s * m2
                print(f"  {i}->{j} raw_M={m!r} scaled_M={m2!r} N={s * m2!r}")
            rate = enrolled[i] / admits[i]
            total = sum(n.values())
            row = [rate if j == i else n.get(j, 0.0) / total * (1 - rate)
                   for j in ids]
            print("  row", i, ", ".join(repr(v) for v in row))


if __name__ == "__main__":
    main()
