import itertools

import pytest

from weil1.rig import Rig, add, check_coeff, mul, psi

VALUES = range(5)


def test_bool2_one_plus_one():
    assert add(1, 1, Rig.BOOL2) == 1


def test_nat_examples():
    assert add(0, 7, Rig.NAT) == 7
    assert add(2, 3, Rig.NAT) == 5
    assert mul(2, 3, Rig.NAT) == 6


def test_bool2_mul_examples():
    assert mul(1, 1, Rig.BOOL2) == 1
    assert mul(1, 0, Rig.BOOL2) == 0


@pytest.mark.parametrize("rig", [Rig.BOOL2, Rig.NAT])
def test_rig_laws_exhaustive(rig):
    vals = [v for v in VALUES if rig is Rig.NAT or v <= 1]
    for a, b in itertools.product(vals, repeat=2):
        assert add(a, b, rig) == add(b, a, rig)
        assert mul(a, b, rig) == mul(b, a, rig)
    for a, b, c in itertools.product(vals, repeat=3):
        assert add(add(a, b, rig), c, rig) == add(a, add(b, c, rig), rig)
        assert mul(mul(a, b, rig), c, rig) == mul(a, mul(b, c, rig), rig)
        assert mul(a, add(b, c, rig), rig) == add(mul(a, b, rig), mul(a, c, rig), rig)
    for a in vals:
        assert add(a, 0, rig) == a
        assert mul(a, 1, rig) == a
        assert mul(a, 0, rig) == 0


def test_bool2_add_idempotent():
    for a in (0, 1):
        assert add(a, a, Rig.BOOL2) == a


def test_psi_is_a_rig_morphism():
    for a, b in itertools.product(VALUES, repeat=2):
        assert psi(add(a, b, Rig.NAT)) == add(psi(a), psi(b), Rig.BOOL2)
        assert psi(mul(a, b, Rig.NAT)) == mul(psi(a), psi(b), Rig.BOOL2)


def test_check_coeff():
    assert check_coeff(1, Rig.BOOL2) == 1
    assert check_coeff(7, Rig.NAT) == 7
    with pytest.raises(ValueError):
        check_coeff(2, Rig.BOOL2)
    with pytest.raises(ValueError):
        check_coeff(-1, Rig.NAT)
    with pytest.raises(ValueError):
        check_coeff(True, Rig.NAT)
