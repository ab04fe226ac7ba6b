"""Knowledge vectors: schema-aware features without touching table data.

Two boolean vectors tie a question to a table schema. The question mark
vector (QMV) flags question tokens that also occur in the header
vocabulary; the header mark vector (HMV) flags headers mentioned, even
partially, by the question. Both are computed from text alone, so nothing
here ever needs the table's rows.
"""

from sqlsketch import knowledge, tokenize

question = "What is the nationality of the player Marcus Camby"
headers = ["player", "no.", "nationality", "years in toronto"]

tokens = [t.text for t in tokenize(question)]
print("question tokens:", tokens)
print("headers:        ", headers)

kv = knowledge.build(tokens, headers)

print("\nQMV (one bit per question token):")
for tok, bit in zip(tokens, kv.qmv):
    print(f"  {bit}  {tok}")

print("\nHMV (one bit per header):")
for h, bit in zip(headers, kv.hmv):
    print(f"  {bit}  {h}")

print("\nconcatenated feature vector:", kv.concatenated)

# Partial word matches mark multi-word headers too.
q2 = [t.text for t in tokenize("how many years did he spend in toronto")]
kv2 = knowledge.build(q2, ["years in toronto"])
print("\npartial match: 'years in toronto' against", " ".join(q2))
print("HMV:", kv2.hmv, "(the header words 'years', 'in', 'toronto' appear)")

# Matching is full-token: 'played' never matches 'play'.
print("\nfull-token rule:", knowledge.contains_full_match(["played"], "play"), "(no partial credit)")
