#!/usr/bin/env python3
# Score each raw engine and the merged ranking against the bundled
# relevance judgments, then print the comparison table.
from pathlib import Path

from serpfuse.config import load_config
from serpfuse.evaluator import comparison_table
from serpfuse.pipeline import AppContext, run_eval

config = load_config(Path(__file__).parent.parent / "fixtures" / "config.json")
reports = run_eval(AppContext(config))

for report in reports:
    print(f"{report.system_id}: mean precision@{report.k} = {report.mean:.3f}")
    for query, value in report.per_query.items():
        print(f"    {query!r}: {value:.2f}")
print()
print(comparison_table(reports))
