import pytest

from admp import adm_solve, admp_solve, catalog


@pytest.fixture(scope="session")
def solved():
    """Memoized access to the expensive order-10 solves, shared across modules."""
    cache = {}

    def get(problem_id: str, method: str, order: int = 10):
        key = (problem_id, method, order)
        if key not in cache:
            solver = admp_solve if method == "ADMP" else adm_solve
            cache[key] = solver(catalog(problem_id), order)
        return cache[key]

    return get
