import pytest
from hypothesis import HealthCheck, settings, strategies as st

from autfix.free_group import Word, reduce

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def words(rank, max_size=10):
    letters = st.sampled_from([i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)])
    return st.lists(letters, max_size=max_size).map(lambda raw: reduce(raw, rank))


@pytest.fixture
def xyz():
    from autfix.free_group import parse_word

    return lambda text: parse_word(text, 3)
