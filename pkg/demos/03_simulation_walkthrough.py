"""
Running the scheme packet by packet
===================================

Solve for a schedule, then play it out over GF(2^16) with random erasures.
Eve's knowledge is measured by rank, not estimated.
"""

from pathlib import Path

from secnet import parse_network
from secnet.fieldsim import arq_overhear_prob, measure_concentration, simulate, simulate_trials, summarize
from secnet.formulations import EdgeRates, FormulationConfig, SchemeSolution, solve_scheme

here = Path(__file__).parent / "networks"
net = parse_network((here / "single_edge.net").read_text())
scheme = solve_scheme(net, FormulationConfig("1"))

# --- one run ---
rep = simulate(net, scheme, slots=20000, eve_edge="e1", seed=1)
print("delivered", rep.delivered_message_packets, "of", rep.sent_message_packets, "sent")
print("Eve overheard", rep.eve_observed_message, "and learned", rep.message_leak)
print("secure rate", rep.empirical_secure_rate, "LP", scheme.rate)

# --- averaging over seeds ---
reps = simulate_trials(net, scheme, 20000, "e1", trials=10, seed=7)
s = summarize(reps)
print("mean secure rate %.4f +- %.4f" % (s["empirical_secure_rate"], s["empirical_secure_rate_std"]))
print("mean leaked fraction %.4f" % s["leaked_key_fraction"])

# --- how many messages does Eve overhear under ARQ? ---
lossy = net.with_edge("e1", delta=0.2, delta_e=0.6)
plain = SchemeSolution(0.0, {"e1": EdgeRates(0.3, 0.0, 0.0, 0.0)})
conc = measure_concentration(lossy, plain, 10000, "e1", trials=50)
print("overheard per trial: mean", conc.mean_overheard, "std", round(conc.std_overheard, 1))
print("predicted", 0.3 * 10000 * arq_overhear_prob(0.2, 0.6))

# --- a two-hop line with a relay ---
line = parse_network((here / "two_hop_fig5.net").read_text())
for algo in ("1", "2", "3"):
    sch = solve_scheme(line, FormulationConfig(algo))
    r = simulate(line, sch, 8192, "e1", seed=3)
    print(f"algo {algo}: LP {sch.rate:.4f}  simulated {r.empirical_secure_rate:.4f}  decoded {r.decode_success}")
