#!/usr/bin/env python3
"""Toy external learner for the acl line protocol.

Skill is a per-bin table over the first task parameter; training on a bin
nudges it up, resets clear it. Rewards follow the surrogate's span.
"""
import json
import sys

BINS = 20
LOW, HIGH = 0.0, 3.0
skill = [0.0] * BINS


def bin_of(x):
    i = int((x - LOW) / (HIGH - LOW) * BINS)
    return min(max(i, 0), BINS - 1)


for line in sys.stdin:
    req = json.loads(line)
    cmd = req["cmd"]
    if cmd == "reset":
        if req["mode"] == "scratch":
            skill = [0.0] * BINS
        print(json.dumps({"ok": True}), flush=True)
        continue
    b = bin_of(req["params"][0])
    if cmd == "train" and (b == 0 or skill[b - 1] > 0.5):
        skill[b] += 0.05 * (1.0 - skill[b])
    print(json.dumps({"reward": -150.0 + 500.0 * skill[b]}), flush=True)
