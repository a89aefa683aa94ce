"""Auditing what the wire actually reveals.

Every classical message a protocol sends is logged; replaying sessions
over different plaintexts and comparing the per-slot message
distributions bounds what an eavesdropper learns. A deliberately broken
scheme that ships its key in clear is included as a positive control.
"""
import time

import numpy as np

from qhelab.paulis import Circuit, Gate
from qhelab.protocol import audit_transcript, canary_session, run_session

print("=== 1. A T-gate session and its transcript ===")
out, ref, transcript = run_session(
    "perm", "+", Circuit(1, (Gate("T", (0,)),)), np.random.default_rng(3), m=1)
print(transcript.to_jsonl())

print("=== 2. Audit: 1000 sessions per plaintext ===")
t0 = time.time()
factory = lambda p, rng: run_session(
    "perm", p, Circuit(1, (Gate("T", (0,)),)), rng, m=1)[2]
report = audit_transcript(factory, ["0", "1"], 1000)
print(f"max total-variation distance over all classical slots: "
      f"{report['max_tv']:.3f}  ({time.time() - t0:.1f}s)")
for slot, tv in report["slots"].items():
    print(f"  slot {slot}: TV {tv:.3f}")
print("statistical noise at 1000 samples; nothing to read off the wire.\n")

print("=== 3. The canary: key sent in clear ===")
leaky = audit_transcript(
    lambda p, rng: canary_session(p, Circuit(1, ()), rng)[2], ["0", "1"], 1000)
print(f"max TV distance: {leaky['max_tv']:.3f}")
print("the audit flags a real leak at full strength, so a quiet report "
      "above is evidence, not absence of a test.")
