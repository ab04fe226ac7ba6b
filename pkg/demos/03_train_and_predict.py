"""Train the toy encoder plus all six heads on the synthetic corpus.

This is the whole pipeline end to end: generate a demo corpus, train for a
few dozen epochs, then translate fresh questions into SQL. Training sees
questions and schemas only, never rows.
"""

import numpy as np

from sqlsketch import heads, synth
from sqlsketch.decode import beam
from sqlsketch.sketch import serialize

tables = synth.build_tables()
schemas = {tid: schema for tid, (schema, _) in tables.items()}
examples = synth.generate_examples(32, seed=13)
print(f"corpus: {len(examples)} examples over {len(tables)} tables")
print("sample:", examples[1].question)

cfg = heads.TrainConfig(
    embed_dim=24, hidden_dim=24, epochs=150, lr=0.15, momentum=0.85,
    batch_size=8, seed=0, log_every=30,
)
result = heads.train(examples, schemas, cfg)
print(f"loss: {result.loss_curve[0]:.3f} (epoch 1) -> {result.loss_curve[-1]:.4f} (epoch {cfg.epochs})")

print("\npredictions on training questions (the model has these nailed down):")
for ex in (examples[1], examples[8], examples[14]):
    feats = heads.featurize_question(ex.question, schemas[ex.table_id], result.vocab)
    dists = heads.forward(result.params, result.config, feats)
    query = beam(dists, ex.question, feats.tokens, width=8)
    marker = "ok " if query == ex.gold else "x  "
    print(f"  [{marker}] {ex.question}")
    print(f"        -> {serialize(query, schemas[ex.table_id])}")
    top = int(np.argmax(dists.p_sc))
    print(f"           select column confidence: {dists.p_sc[top]:.3f}")

# A question the corpus never contained. At 32 training examples the toy
# encoder generalizes only roughly; schema words it knows still steer it.
novel = "what is the lowest rank when nationality is spain"
feats = heads.featurize_question(novel, schemas["players"], result.vocab)
dists = heads.forward(result.params, result.config, feats)
query = beam(dists, novel, feats.tokens, width=8)
print(f"\nnovel question: {novel}")
print(f"  -> {serialize(query, schemas['players'])}")
