"""Classical rank-frequency laws fitted to one inventory.

These R^2 fits on log frequencies are what older studies reported. They are
shown for comparison only; a high R^2 says little about which law generated
the counts.
"""
import numpy as np

from tailfit import RankModelKind, expected_spectrum, fit_rank_model, rank_spectrum, simulate_stick_breaking
from tailfit.corpus import parse_frequency_table

TSV = """language\tsegment\tcount
demo\ta\t412
demo\ti\t305
demo\tn\t251
demo\tk\t198
demo\tt\t187
demo\tu\t160
demo\tm\t131
demo\ts\t104
demo\tr\t97
demo\te\t80
demo\tl\t66
demo\to\t59
demo\tp\t41
demo\tw\t30
demo\tj\t22
demo\th\t19
demo\tb\t9
demo\td\t6
"""

(table,) = parse_frequency_table(TSV)
observed = rank_spectrum(table)

for kind in RankModelKind:
    fit = fit_rank_model(observed, kind)
    params = ", ".join(f"{k}={v:.3f}" for k, v in fit.params.items()) or "-"
    print(f"{kind.value:<15} R^2={fit.r_squared:.4f}  {params}")

# Where the parameter-free Whitworth law comes from: break a stick at random.
parts = simulate_stick_breaking(len(observed), runs=20000, seed=0).mean(axis=0)
theory = expected_spectrum("whitworth", len(observed))
print("\nstick-breaking mean vs Whitworth, first ranks:")
print(np.round(np.c_[parts[:5], theory[:5]], 4))
