import pytest

from qslfield import EigenRequest, PowerLawField, solve
from qslfield.constants import from_dimensionless_field


def field_for(b0: float, n: float) -> PowerLawField:
    """Field with the given dimensionless strength at exponent n."""
    return PowerLawField(B0=from_dimensionless_field(b0, n), n=n)


@pytest.fixture(scope="session")
def solved():
    """Session-wide memo of eigen-solutions, keyed on the request parameters."""
    memo = {}

    def get(n, b0, spin, m=0, levels=2, tol=1.0e-6):
        key = (n, b0, spin, m, levels, tol)
        if key not in memo:
            req = EigenRequest(field=field_for(b0, n), spin=spin, m=m, levels=levels, tol=tol)
            memo[key] = solve(req)
        return memo[key]

    return get
