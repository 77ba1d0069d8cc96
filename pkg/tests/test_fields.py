import itertools

import pytest

from almostlocal.fields import SUPPORTED_ORDERS, FieldError, field


@pytest.mark.parametrize("q", SUPPORTED_ORDERS)
def test_field_axioms(q):
    K = field(q)
    els = range(q)
    for a, b in itertools.product(els, els):
        assert K.add[a][b] == K.add[b][a]
        assert K.mul[a][b] == K.mul[b][a]
    for a, b, c in itertools.product(els, els, els):
        assert K.mul[a][K.add[b][c]] == K.add[K.mul[a][b]][K.mul[a][c]]
        assert K.mul[K.mul[a][b]][c] == K.mul[a][K.mul[b][c]]
    for a in els:
        assert K.add[a][K.neg[a]] == 0
        if a:
            assert K.mul[a][K.inv[a]] == 1


@pytest.mark.parametrize("q", SUPPORTED_ORDERS)
def test_generator_and_squares(q):
    K = field(q)
    seen, x = set(), 1
    for _ in range(q - 1):
        x = K.mul[x][K.generator]
        seen.add(x)
    assert seen == set(range(1, q))
    assert len(K.squares) == ((q - 1) // 2 if q % 2 else q - 1)


def test_characteristic():
    assert field(9).p == 3 and field(9).k == 2
    assert field(16).p == 2 and field(16).k == 4


def test_unsupported_order():
    with pytest.raises(FieldError):
        field(6)
