import itertools

import pytest

from spanmackey.groups import catalog


CATALOG = catalog()


@pytest.fixture(params=sorted(CATALOG), ids=sorted(CATALOG))
def group(request):
    return CATALOG[request.param]


def brute_subgroups(G):
    """Every subset containing 0 and closed under multiplication, found by closure of subsets."""
    found = set()
    for r in range(0, 3):
        for gens in itertools.combinations(range(G.order), r):
            span = {0, *gens}
            while True:
                new = {G.mult[a][b] for a in span for b in span} | span
                if new == span:
                    break
                span = new
            found.add(tuple(sorted(span)))
    return found
