import pytest

from gnprove.fields import (FieldElem, FieldError, RationalFunctionField, default_modulus, field_make,
                            frobenius_orbits)


@pytest.fixture
def f4():
    return field_make(2, 2)


@pytest.fixture
def f16():
    return field_make(2, 4)


def test_default_moduli_are_irreducible():
    from gnprove import gf2x
    for m in range(1, 17):
        modulus = default_modulus(m)
        assert gf2x.degree(modulus) == m
        assert gf2x.is_irreducible(modulus)


def test_f4_arithmetic(f4):
    u = f4.gen
    assert u * u == u + 1
    assert u ** 3 == 1
    assert (u / u) == 1
    assert u.inverse() == u + 1


def test_parse_and_format(f4):
    a = f4.parse('u^2')
    assert a.value == 0b11
    assert str(a) == 'u + 1'


def test_frobenius_has_order_m(f16):
    for v in range(1, 16):
        assert f16.frob(v, 4) == v
        assert f16.frob(f16.frob(v, 1), -1) == v


def test_trace_is_additive(f16):
    for a in range(16):
        for b in range(16):
            assert f16.trace(a ^ b) == f16.trace(a) ^ f16.trace(b)
    assert {f16.trace(a) for a in range(16)} == {0, 1}


def test_inverse_of_zero(f4):
    with pytest.raises(ZeroDivisionError):
        f4.inv(0)


def test_reducible_modulus_names_factor():
    with pytest.raises(FieldError, match=r"u \+ 1"):
        field_make(2, 2, 'u^2 + 1')


def test_only_characteristic_two():
    with pytest.raises(FieldError):
        field_make(3, 1)


def test_mixed_fields_rejected(f4, f16):
    with pytest.raises(FieldError):
        f4.gen + f16.gen


def test_frobenius_orbits_f8():
    f8 = field_make(2, 3)
    orbits = frobenius_orbits(f8)
    assert len(orbits.orbits) == 2
    assert len(orbits.representatives) == 2
    for orbit in orbits.orbits:
        assert len(orbit) == 3


def test_frobenius_orbits_f16(f16):
    orbits = frobenius_orbits(f16)
    # three orbits of size 4, one of size 2 from F_4
    assert sorted(len(o) for o in orbits.orbits) == [2, 4, 4, 4]
    assert len(orbits.representatives) == 3
    for r in orbits.representatives:
        assert not f16.in_subfield(r.value, 2)


class TestRationalFunctionField:

    def test_reduced_fractions(self):
        K = RationalFunctionField('a')
        a = K.gen
        x = a / (a + 1) + 1 / (a + 1)
        assert x == 1

    def test_format(self):
        K = RationalFunctionField('a')
        a = K.gen
        assert str((a + 1) / (a * a)) == '(a + 1)/a^2'
        assert K.parse('a^2 + 1') == (a + 1) * (a + 1)

    def test_frobenius(self):
        K = RationalFunctionField('a')
        a = K.gen
        assert (a + 1).frob(1) == a * a + 1
        with pytest.raises(FieldError):
            a.frob(-1)

    def test_specialize(self, f4):
        K = RationalFunctionField('a')
        x = (K.gen ** 2 + 1).value
        g = f4.gen.value
        assert K.specialize(x, f4, g) == f4.add(f4.mul(g, g), 1)

    def test_infinite(self):
        with pytest.raises(FieldError):
            RationalFunctionField().elements()


def test_field_elem_int_comparison(f4):
    assert FieldElem(f4, 1) == 1
    assert FieldElem(f4, 0) == 0
    assert FieldElem(f4, 2) != 1
