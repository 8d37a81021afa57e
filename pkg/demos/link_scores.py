#!/usr/bin/env python3
# Walk through the damped link-score recurrence on a four-page web:
# B links to T1, and T1 and T2 both link to A.
from serpfuse import LinkGraph, PageRankParams, pagerank

graph = LinkGraph(
    nodes={"A", "B", "T1", "T2"},
    edges={("B", "T1"), ("T1", "A"), ("T2", "A")},
)

result = pagerank(graph, PageRankParams(epsilon=1e-12))
print(f"converged after {result.iterations} sweeps (residual {result.residual:.2e})")
for node in sorted(result.values):
    print(f"  {node:>3}: {result.values[node]:.6f}")

# Pages nobody links to settle at 1 - d = 0.15. A is the only page with
# two in-links, so it collects the most: 0.15 + 0.85 * (0.2775 + 0.15).
print()
print("isolated page:", pagerank(LinkGraph(nodes={"X"}, edges=set())).values)

# A two-page cycle feeds itself and settles at exactly 1.0 per page.
cycle = LinkGraph(nodes={"A", "B"}, edges={("A", "B"), ("B", "A")})
print("two-page cycle:", pagerank(cycle).values)
