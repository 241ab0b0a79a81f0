"""
Secure rates on small erasure networks
======================================

Every edge erases a packet with probability delta toward its head and
delta_e toward Eve. The formulations turn that into an LP whose optimum is
an achievable secure message rate.
"""

from pathlib import Path

from secnet import Network, parse_network
from secnet.formulations import FormulationConfig, solve_rate, solve_scheme

here = Path(__file__).parent / "networks"


# --- one channel ---
# Eve misses half the packets, so half of the channel can carry secrets
single = parse_network((here / "single_edge.net").read_text())
scheme = solve_scheme(single, FormulationConfig("1"))
print("single edge rate", scheme.rate)
print("  per-edge schedule", scheme.per_edge["e1"])


# --- Eve's erasure rate sweeps the whole range ---
for de in (0.0, 0.25, 0.5, 0.75, 1.0):
    net = Network.build([("e1", "s", "d", 0.2, de)], "s", "d")
    print(f"delta_e={de:4.2f}  rate={solve_rate(net, '1'):.4f}")


# --- richer accounting pays off on longer paths ---
diamond = parse_network((here / "diamond.net").read_text())
for algo in ("1", "2", "3", "snc"):
    print(f"diamond  algo {algo:>3}: {solve_rate(diamond, algo):.6f}")


# --- lossless graphs reduce to secure network coding ---
butterfly = parse_network((here / "butterfly.net").read_text())
print("butterfly (mincut 2):", solve_rate(butterfly, "1"))
