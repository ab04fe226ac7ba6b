"""The zero-shot protocol: evaluate only on tables never seen in training.

Because the model trains on schemas rather than cell contents, it can be
asked about tables it has never encountered. The split construction drops
every test example whose table also backs a training example.
"""

from sqlsketch import build_zero_shot_split
from sqlsketch.corpus import Example
from sqlsketch.sketch import Aggregate, SQLQuery


def ex(question, table_id):
    return Example(question, table_id, SQLQuery(Aggregate.NONE, 0, ()))


train = [
    ex("highest wins for arsenal", "teams"),
    ex("population of madrid", "cities"),
    ex("how many films by tarkovsky", "films"),
]
test = [
    ex("lowest losses for ajax", "teams"),      # table seen in training: dropped
    ex("rank of marcus camby", "players"),      # unseen table: kept
    ex("country of nairobi", "cities"),         # seen: dropped
    ex("points of pau gasol", "players"),       # unseen: kept
]

kept = build_zero_shot_split(train, test)
train_tables = sorted({e.table_id for e in train})
print("train tables:", train_tables)
print(f"\ntest examples ({len(test)}):")
for e in test:
    verdict = "kept" if e in kept else "dropped"
    print(f"  [{verdict:7}] ({e.table_id}) {e.question}")

print(f"\nzero-shot set: {len(kept)} of {len(test)} examples, tables "
      f"{sorted({e.table_id for e in kept})}")
assert not {e.table_id for e in kept} & set(train_tables)
