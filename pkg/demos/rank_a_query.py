#!/usr/bin/env python3
# Run the whole offline pipeline for one query and show how each result's
# score decomposes into the nine weighted parameters.
from pathlib import Path

from serpfuse.config import load_config
from serpfuse.pipeline import AppContext, run_search

config = load_config(Path(__file__).parent.parent / "fixtures" / "config.json")
ctx = AppContext(config)

outcome = run_search(ctx, "alcoholism", k=10)
print(f"query: {outcome.query.key}  kind: {outcome.query.kind.value}")
print(f"synonyms in play: {outcome.query.expansions}")
print()
for r in outcome.ranked:
    print(f"#{r.position}  {r.record.canonical}  (score {r.score:.4f})")
    for name, value in r.features.as_dict().items():
        bar = "#" * round(value * 20)
        print(f"      {name:<12}{value:>6.3f}  {bar}")
    sources = ", ".join(f"{e}#{rank}" for e, rank in r.record.sources)
    print(f"      found by: {sources}")
    print()

# The same query with the snippet parameter amplified: keyword-stuffed
# pages climb, which is exactly why the weights are adjustable.
boosted = run_search(ctx, "alcoholism", k=10, weight_overrides={"snippet": 5.0})
print("order with snippet weight x5:")
for r in boosted.ranked:
    print(f"  #{r.position} {r.record.canonical}")
