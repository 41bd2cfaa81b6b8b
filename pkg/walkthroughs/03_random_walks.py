"""Random-walk signatures on lattices and lamplighters.

Shows range growth, return-probability decay against the exact propagated
distribution, the cautiousness probability and the delta-rank statistic.
"""

from poissonblocks import WalkConfig, build, simulate
from poissonblocks.catalog import default_measure
from poissonblocks.walks import (cautiousness_probe, exact_return_probabilities,
                                 strong_transience_probe)


def lattice(d):
    e = build(f"lattice({d})")
    return e.spec, default_measure(e)


# Range: Z^2 visits a vanishing fraction of new sites, Z^3 a positive one.
for d in (2, 3):
    spec, mu = lattice(d)
    ws = simulate(WalkConfig(spec, mu, 10_000, 200, seed=1, checkpoints=[100, 1000, 10_000],
                             project=True))
    print(f"Z^{d} range/n:", {t: round(v / t, 3) for t, v in ws.range.items()})

# Return probabilities decay like t^(-d/2).
for d in (1, 2):
    spec, mu = lattice(d)
    probe = strong_transience_probe(WalkConfig(spec, mu, 200, 100_000, seed=2))
    exact = exact_return_probabilities(spec, mu, 20)
    print(f"Z^{d} fitted decay {probe['fitted_exponent']:.3f};"
          f" t=20 simulated {probe['return_freq'][20]:.4f} exact {exact[20]:.4f}")

# Cautiousness: the chance of staying within sqrt(t) of the start stays bounded below.
spec, mu = lattice(2)
rows = cautiousness_probe(WalkConfig(spec, mu, 4096, 4000, seed=3, checkpoints=[256, 1024, 4096]))
print("Z^2 cautious:", [(r["t"], round(r["prob"], 3)) for r in rows])

# Delta-rank: how many independent lamp configurations the walk has written.
for d in (2, 3):
    e = build(f"lamplighter({d},2)")
    cfg = WalkConfig(e.spec, default_measure(e, "base_plus_lamp"), 5000, 100, seed=4,
                     checkpoints=[500, 5000])
    ws = simulate(cfg, delta=([], ["delta"]), stats=["deltarank"])
    print(f"lamplighter({d},2) delta_rank/n:", {t: round(v / t, 4) for t, v in ws.delta_rank.items()})
