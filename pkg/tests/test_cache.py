import numpy as np
import pytest

from qslfield.cache import CacheKey, EigenCache
from qslfield.eigensolver import EigenRequest, solve

from conftest import field_for


@pytest.fixture()
def request_small():
    return EigenRequest(field=field_for(1.0, 0.0), spin="up", levels=2)


def test_round_trip_reproduces_solution(tmp_path, request_small):
    cache = EigenCache(tmp_path)
    first = cache.get_or_solve(request_small)
    assert cache.path_for(request_small).exists()
    second = cache.get_or_solve(request_small)
    np.testing.assert_array_equal(first.alphas, second.alphas)
    np.testing.assert_array_equal(first.radials, second.radials)
    assert first.grid == second.grid
    assert second.converged


def test_cached_matches_direct_solve(tmp_path, request_small):
    cache = EigenCache(tmp_path)
    cached = cache.get_or_solve(request_small)
    direct = solve(request_small)
    np.testing.assert_allclose(cached.alphas, direct.alphas, rtol=0, atol=0)


def test_any_parameter_change_makes_a_new_key(request_small):
    base = CacheKey.for_request(request_small).digest()
    variants = [
        EigenRequest(field=field_for(1.0 + 1e-12, 0.0), spin="up", levels=2),
        EigenRequest(field=field_for(1.0, 0.5), spin="up", levels=2),
        EigenRequest(field=field_for(1.0, 0.0), spin="down", levels=2),
        EigenRequest(field=field_for(1.0, 0.0), spin="up", m=1, levels=2),
        EigenRequest(field=field_for(1.0, 0.0), spin="up", levels=3),
        EigenRequest(field=field_for(1.0, 0.0), spin="up", levels=2, tol=1e-5),
    ]
    digests = {CacheKey.for_request(v).digest() for v in variants}
    assert base not in digests
    assert len(digests) == len(variants)


def test_identical_requests_share_a_key(request_small):
    again = EigenRequest(field=field_for(1.0, 0.0), spin="up", levels=2)
    assert CacheKey.for_request(request_small).digest() == CacheKey.for_request(again).digest()


def test_scheme_version_enters_the_key(request_small):
    key = CacheKey.for_request(request_small)
    assert key.scheme_version >= 1


def test_no_partial_files_after_write(tmp_path, request_small):
    cache = EigenCache(tmp_path)
    cache.get_or_solve(request_small)
    leftovers = [p for p in tmp_path.iterdir() if p.suffix == ".tmp"]
    assert leftovers == []
