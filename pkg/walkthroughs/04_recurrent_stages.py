"""Build the first stages of a recurrent measure on Z and Z^2.

Each stage picks the horizon N at which the halved partial sum of return
probabilities reaches the stage number, then sets the next weight so the
tail mass is at most 1/(2N).
"""

from poissonblocks import recurrent_measure_stages

for dim in (1, 2):
    print(f"Z^{dim}")
    for s in recurrent_measure_stages(dim, 2):
        print(f"  stage {s.n}: a={s.a}  N={s.N}  b={s.b}  half-sum={s.partial_sum:.4f}"
              f"  checks={s.inequalities()}")
