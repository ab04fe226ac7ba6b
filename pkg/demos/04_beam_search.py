"""Beam search over WHERE clauses versus greedy decoding.

A WHERE clause is a (column, operator, value-span) triple scored by the sum
of its log-probabilities. Greedy decoding commits to the best triple at
every step; the beam keeps several partial combinations alive and can trade
a weaker column for a much stronger operator/value pairing.
"""

import numpy as np

from sqlsketch.decode import beam, best_hypothesis, greedy
from sqlsketch.heads import SlotDistributions
from sqlsketch.tokens import tokenize

question = "wins above 20 when coach is arteta"
tokens = tokenize(question)
n, m = len(tokens), 3

# A hand-built distribution set where greedy goes wrong: column 0 has the
# highest standalone probability, but everything downstream of it is weak.
start = np.log(np.full((m, 3, n), 1e-3))
end = np.log(np.full((m, 3, n), 1e-3))
start[0, 0, 3], end[0, 0, 3] = np.log(0.30), np.log(0.30)   # col 0: weak span
start[1, 0, 5], end[1, 0, 6] = np.log(0.95), np.log(0.95)   # col 1: confident span
p_wo = np.full((m, 3), 1 / 3)
p_wo[0] = [0.40, 0.30, 0.30]
p_wo[1] = [0.90, 0.05, 0.05]

dists = SlotDistributions(
    p_sa=np.eye(6)[0],
    p_sc=np.eye(m)[2],
    p_wn=np.eye(5)[1],
    p_wc=np.array([0.60, 0.55, 0.10]),
    p_wo=p_wo,
    wv_start_logp=start,
    wv_end_logp=end,
)

g = greedy(dists, question, tokens)
b = beam(dists, question, tokens, width=8)
print("question:", question)
print("greedy :", [(c.col, int(c.op), c.value) for c in g.conds])
print("beam-8 :", [(c.col, int(c.op), c.value) for c in b.conds])

print("\nbest total log-probability by width:")
for width in (1, 2, 4, 8, 16):
    hyp = best_hypothesis(dists, width, limits=None)
    print(f"  width {width:>2}: {hyp.score:8.4f}  clauses {hyp.clauses}")
print("(scores never decrease as the width grows)")
