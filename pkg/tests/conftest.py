import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from ghostcover.covers import CoverDatum, DecoratedGraph, VertexMonodromy, vertex_options  # noqa: E402
from ghostcover.graphs import Graph  # noqa: E402
from ghostcover.groups import builtin_group  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def realize(G, n, ends, genus, r, c, voltages=None, H=None, marks=None):
    """Cover datum from per-oriented-edge indices ``c`` (the mate entries must already obey
    the branch relation).  ``H`` picks each vertex image as a list of element tuples;
    otherwise the first achievable image is used.  Returns None if a vertex has no tuple."""
    graph = Graph(n, tuple(tuple(e) for e in ends))
    base = DecoratedGraph(graph, tuple(genus), tuple(r), tuple(len(m) for m in marks) if marks else ())
    if voltages is None:
        voltages = [G.identity] * (2 * graph.edge_count)
    mons = []
    for v in range(n):
        branch = [c[o] for o in graph.out_edges(v)]
        if marks:
            branch.extend(marks[v])
        opts = vertex_options(G, genus[v], branch)
        if not opts:
            return None
        if H is not None:
            want = sum(1 << x for x in H[v])
            if want not in opts:
                return None
            w = opts[want]
        else:
            w = opts[min(opts)]
        mons.append(VertexMonodromy(v, genus[v], w))
    return CoverDatum(base, G, tuple(mons), tuple(voltages))


@pytest.fixture
def S3():
    return builtin_group("S3")


def s3_elements(G):
    """(identity, rho, rho^-1, three transpositions) by cycle label."""
    lab = {G.label(x): x for x in G.elements}
    return lab


RESULTS: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for k in sorted(RESULTS):
        ok, line = RESULTS[k]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {k}: {line}")
