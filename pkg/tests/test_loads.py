import pytest

from stiffplate.loads import Loads, PolyField, StripLoad, parse_field, parse_loads


def test_constant_field():
    f = PolyField.constant(2.5)
    assert f(0.3, -1.0, 4.0) == pytest.approx(2.5)
    assert PolyField.constant(0.0).is_zero()


def test_polynomial_eval():
    f = PolyField.of([(2.0, (1, 0, 0)), (-1.0, (0, 2, 1))])
    x1, x2, x3 = 0.5, 2.0, 3.0
    assert f(x1, x2, x3) == pytest.approx(2 * 0.5 - 4.0 * 3.0)


def test_thickness_moments_exact():
    f = PolyField.of([(1.0, (0, 0, 1))])  # linear in the thickness coordinate
    t = 0.7
    m0 = f.moment_x3(0.0, t, 0)
    m1 = f.moment_x3(0.0, t, 1)
    assert m0(0.0) == pytest.approx(t**2 / 2)
    assert m1(0.0) == pytest.approx(t**3 / 3)


def test_section_moments_exact():
    w, h = 0.4, 1.1
    f = PolyField.of([(3.0, (2, 0, 0))])
    q = f.section_moment(w, h, 0, 0)
    assert q(2.0) == pytest.approx(3.0 * 4.0 * 2 * w * h)
    # odd transverse moments vanish by symmetry
    assert f.section_moment(w, h, 1, 0).is_zero() or f.section_moment(w, h, 1, 0)(2.0) == 0.0
    m3 = f.section_moment(w, h, 0, 1)
    assert m3(1.0) == pytest.approx(3.0 * 2 * w * h**2 / 2)


def test_parse_field_variants():
    assert parse_field(None).is_zero()
    assert parse_field(2)(0.0) == 2.0
    assert parse_field({"constant": -1.5})(0.0) == -1.5
    f = parse_field({"polynomial": [{"coef": 1.0, "powers": [2]}]})
    assert f(3.0) == 9.0
    with pytest.raises(ValueError):
        parse_field("nope")
    with pytest.raises(ValueError):
        parse_field({"polynomial": [{"coef": 1.0, "powers": [-1, 0, 0]}]})


def test_parse_loads_round_trip():
    cfg = {
        "plate_b3": {"constant": 0.1},
        "torque": {"polynomial": [{"coef": 1.0, "powers": [1, 0, 0]}]},
        "beam_strips": [{"component": 3, "x_lo": -1.0, "x_hi": -0.9, "density": 5.0}],
    }
    loads = parse_loads(cfg)
    assert loads.plate[2](0.0) == pytest.approx(0.1)
    assert loads.torque(2.0) == pytest.approx(2.0)
    assert loads.beam_strips == (StripLoad(component=3, x_lo=-1.0, x_hi=-0.9, density=5.0),)
    assert not loads.is_zero()
    assert parse_loads(None).is_zero()


def test_loads_zero_detection():
    assert Loads().is_zero()
    assert not Loads(torque=PolyField.constant(1.0)).is_zero()
