"""
Two sources sharing a relay
===========================

With several sources the LP keeps per-source rates and lets the sources pool
keys on shared edges.
"""

from pathlib import Path

from secnet import parse_network
from secnet.formulations import FormulationConfig, solve_scheme

net = parse_network((Path(__file__).parent / "networks" / "two_sources.net").read_text())
scheme = solve_scheme(net, FormulationConfig("5"))
print("total secure rate", round(scheme.rate, 6))
for src in net.sources:
    print(" ", src, round(scheme.source_rate(src, net), 6))

# --- who uses which edge ---
for (src, edge), rates in sorted(scheme.per_source.items()):
    if rates.m or rates.k or rates.r:
        print(f"{src:>3} on {edge:>3}: m={rates.m:.3f} k={rates.k:.3f} r={rates.r:.3f}")
