import pytest

from ramsey_lab import GraphParams, complete_layered, generate_random


def random_graph(k, m, p, seed):
    return generate_random(GraphParams(k=k, part_size=m, edge_prob=p, seed=seed))


@pytest.fixture
def tiny_complete():
    return complete_layered(3, 2)
