import pytest

from tcpnsched import builtin_paper_workload


@pytest.fixture
def table1():
    return builtin_paper_workload()
