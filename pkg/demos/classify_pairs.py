"""Which pairs of networks can oscillate at all?

Undirected communication and belief graphs never oscillate: their spectra
are real, so eigenvalues cross the imaginary axis only through zero. When
one graph can be switched to an eventually positive one, the other graph's
complex eigenvalues may drive an oscillation once its gain clears a
threshold. Outside both cases nothing general can be said.

    python demos/classify_pairs.py
"""

from hopfnet import ModelParams, classify_graphs, complete_graph, graph_from_spec, signed_cycle
from hopfnet.experiments import asynchronous_graph, belief_system_graph

params = ModelParams(d=1.0, u=1.0, alpha=0.1, gamma=0.1, beta=0.25, delta=0.25)
path = graph_from_spec({"n": 3, "edges": [[1, 2, 1], [2, 1, 1], [2, 3, -1], [3, 2, -1]]})
pairs = {
    "undirected path + undirected pair": (path, graph_from_spec({"n": 2, "edges": [[1, 2, -1], [2, 1, -1]]})),
    "complete graph + companion beliefs": (complete_graph(4), belief_system_graph()),
    "antagonistic ring + companion beliefs": (signed_cycle(7, range(1, 8), reverse=True), belief_system_graph()),
    "asynchronous graph + companion beliefs": (asynchronous_graph(), belief_system_graph()),
}
for label, (ga, go) in pairs.items():
    c = classify_graphs(ga, go, params)
    extra = ", ".join(f"{k} = {v:.4f}" for k, v in c.thresholds.items() if v is not None)
    print(f"{label:40s} {c.verdict.value:22s} {c.reason.value}{'  (' + extra + ')' if extra else ''}")
