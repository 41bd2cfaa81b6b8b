"""Classify every catalog group and print the rule behind each verdict.

The x1x2x3 entry needs an evaluation-rank computation and takes about half a
minute; everything else is quick.
"""

import time

from poissonblocks import analyze, build

NAMES = ["lamplighter(1,2)", "lamplighter(2,3)", "lamplighter(3,2)", "baumslag(2,2)",
         "baumslag(3,3)", "g23x", "xyz", "lbs(2)", "g_alpha(2,2)", "g_alpha(-1,2)",
         "met_p(2,3)", "lattice(2)", "x1x2x3"]

for name in NAMES:
    start = time.perf_counter()
    entry = build(name)
    v = analyze(entry.spec).verdict
    took = time.perf_counter() - start
    print(f"{name:18s} {v.outcome.value:12s} {v.moment_class.value:32s} ({took:.1f}s)")
    for line in v.citation_trail():
        print("    " + line)
    if entry.expected_verdict is not None:
        ev = entry.expected_verdict
        print(f"    catalog expects {ev.outcome} ({ev.reason})")
