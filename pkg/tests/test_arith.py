import pytest

from artifact.arith import (
    Factorization,
    factorize,
    is_prime,
    is_square,
    jacobi,
    legendre,
    squarefree_part,
    valuation,
)


def test_is_prime_small():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}
    for n in range(-3, 40):
        assert is_prime(n) == (n in primes)


def test_is_prime_large():
    assert is_prime(2 ** 61 - 1)
    assert not is_prime(2 ** 61 + 1)
    assert is_prime(10 ** 18 + 9)


def test_legendre_known():
    # squares mod 7 are {1, 2, 4}
    assert [legendre(a, 7) for a in range(7)] == [0, 1, 1, -1, 1, -1, -1]
    assert legendre(3, 13) == 1          # 4^2 = 3 mod 13
    assert legendre(2, 37) == -1
    assert legendre(-11 % 37, 37) == 1
    assert legendre(-11 % 13, 13) == -1


def test_legendre_rejects_non_prime():
    with pytest.raises(ValueError):
        legendre(3, 15)
    with pytest.raises(ValueError):
        legendre(3, 2)


def test_jacobi_matches_legendre():
    for p in (3, 5, 7, 11, 13):
        for a in range(1, p):
            assert jacobi(a, p) == legendre(a, p)


def test_valuation():
    assert valuation(48, 2) == 4
    assert valuation(48, 3) == 1
    assert valuation(-27, 3) == 3
    assert valuation(1, 5) == 0
    with pytest.raises(ValueError):
        valuation(0, 2)


def test_factorize():
    f = factorize(2 ** 5 * 3 ** 2 * 37)
    assert tuple(f.factors) == ((2, 5), (3, 2), (37, 1))
    assert isinstance(f, Factorization)
    # a semiprime beyond the trial-division limit
    n = 1000003 * 1000033
    assert tuple(factorize(n).factors) == ((1000003, 1), (1000033, 1))


def test_is_square():
    assert is_square(0) and is_square(1) and is_square(144)
    assert not is_square(-4) and not is_square(2)


def test_squarefree_part():
    assert squarefree_part(12) == 3
    assert squarefree_part(1) == 1
    assert squarefree_part(121) == 1
    assert squarefree_part(11 * 121) == 11
    with pytest.raises(ValueError):
        squarefree_part(-12)
