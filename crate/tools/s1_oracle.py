#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Brute-force reference for the S1 synthetic fixture.

Re-derives every S1 record from the closed-form model, independently of the
Rust crate, and prints the values the acceptance suite freezes.
"""
import math
from fractions import Fraction

TRIP = 64
FACTORS = [2, 4, 8, 16, 32, 64]
CAPS = {"lut": 53200, "ff": 106400, "dsp": 220, "bram": 280}
WEIGHTS = {"lut": 0.1, "ff": 0.1, "dsp": 0.4, "bram": 0.4}


def loop_options():
    return [("none", 0), ("pipeline", 0)] + [("unroll", f) for f in FACTORS]


def array_options():
    opts = [("none", 0), ("complete", 0)]
    opts += [("cyclic", f) for f in FACTORS] + [("block", f) for f in FACTORS]
    return opts


def evaluate(l1, l2, a1):
    ports = {"none": 1, "cyclic": a1[1], "block": 1, "complete": 64}[a1[0]]
    u2 = l2[1] if l2[0] == "unroll" else 1
    e2 = min(u2, ports)
    if l2[0] == "pipeline":
        c2 = 74
    elif l2[0] == "unroll":
        c2 = 2 * math.ceil(64 / e2)
    else:
        c2 = 192
    if l1[0] == "unroll":
        r = l1[1] * e2
    elif l1[0] == "pipeline":
        r = 64
    else:
        r = e2
    if l1[0] == "pipeline":
        if e2 != 64:
            return ("error", None)
        c = 74 + c2
    elif l1[0] == "unroll":
        c = math.ceil(64 / l1[1]) * c2
    else:
        c = 64 * c2
    if r > 256:
        return ("timeout", None)
    counts = {
        "dsp": 2 * r,
        "ff": 500 + 80 * r + (1152 if a1[0] == "complete" else 0),
        "lut": 800 + 120 * r,
        "bram": {"none": 1, "complete": 0}.get(a1[0], a1[1]),
    }
    latency = c * 0.01
    resource = sum(WEIGHTS[k] * counts[k] / CAPS[k] for k in CAPS)
    return ("ok", (latency, resource, counts))


def front(points):
    """Non-dominated subset; among equal-resource ties the lower latency wins."""
    keep = []
    for i, (l, r, name) in enumerate(points):
        beaten = False
        for j, (l2, r2, _) in enumerate(points):
            if j == i:
                continue
            weakly = l2 <= l and r2 <= r
            if weakly and ((l2, r2) != (l, r) or j < i):
                beaten = True
                break
        if not beaten:
            keep.append((l, r, name))
    return sorted(keep)


def hypervolume(pts, ref):
    area, prev_r = 0.0, ref[1]
    for l, r, _ in sorted(pts):
        if l < ref[0] and r < prev_r:
            area += (ref[0] - l) * (prev_r - r)
            prev_r = r
    return area


def main():
    records = []
    for l1 in loop_options():
        for l2 in loop_options():
            for a1 in array_options():
                records.append(((l1, l2, a1), evaluate(l1, l2, a1)))
    status = {s: sum(1 for _, (st, _) in records if st == s) for s in ("ok", "error", "timeout")}
    print("records", len(records), status)
    ok = [(v[0], v[1], k) for k, (st, v) in records if st == "ok"]
    ref = (1.1 * max(p[0] for p in ok), 1.1 * max(p[1] for p in ok))
    f = front(ok)
    print("reference", repr(ref[0]), repr(ref[1]))
    print("true hypervolume", repr(hypervolume(f, ref)))
    for l, r, k in f:
        print(f"  {l!r:>22} {r!r:>22} {k}")
    # Exact rational check of the minimum-latency resource.
    l, r, k = f[0]
    _, (_, (_, _, counts)) = next(x for x in records if x[0] == k)
    exact = sum(Fraction(WEIGHTS[t]).limit_denominator() * Fraction(counts[t], CAPS[t]) for t in CAPS)
    print("min latency", repr(l), "resource", float(exact), k)
    pipe = evaluate(("pipeline", 0), ("unroll", 64), ("complete", 0))
    print("pipeline/unroll64/complete", pipe[1][:2])


if __name__ == "__main__":
    main()
