"""Find the basic blocks of a matrix group and measure how big their modules are.

Run with ``python3 walkthroughs/01_blocks_and_dimensions.py``.
"""

from poissonblocks import build, decompose, dimension_estimate
from poissonblocks.catalog import one_relator_quotient
from poissonblocks.matrices import eval_word, word_str

# The 3x3 group "xyz" has three blocks.  The (1,3) block needs a commutator
# before a unipotent element with a lone corner entry shows up.
spec = build("xyz").spec
report = decompose(spec, depth=8)
for pair in sorted(report.valid_pairs()):
    status = report.pairs[pair]
    corner = eval_word(spec, status.witness).entry(*pair)
    phis = sorted(str(v) for _, v in report.phi_values[pair])
    print(f"block {pair}: witness {' '.join(word_str(status.witness))}")
    print(f"    entry at {pair} = {corner}, phi values {phis}")

# Dimension of each block module: exact shortcuts when they apply, always
# backed by a growth fit of span ranks over balls of increasing radius.
print()
for name in ["lamplighter(3,2)", "baumslag(2,3)", "g23x", "g_alpha(2,2)"]:
    blocks = decompose(build(name).spec, 8)
    rep = dimension_estimate(blocks.module_spec((1, 2)))
    print(f"{name:18s} dim {rep.dimension}  via {rep.provenance:11s} fit {rep.fitted_exponent:.3f}")

# A single relation drops the dimension by one.
rep = dimension_estimate(one_relator_quotient(3, 2))
print(f"{'F_2[Z^3]/(1+X+Y+Z)':18s} dim {rep.dimension}  via {rep.provenance:11s} "
      f"fit {rep.fitted_exponent:.3f}")
print("span table:", rep.span_table)
