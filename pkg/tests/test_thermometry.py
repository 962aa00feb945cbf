import math

import numpy as np
import pytest

from bosonbunch import InternalConsistencyError, ValidationError
from bosonbunch.bunching import mean_bunch_closed
from bosonbunch.partitions import majorizes
from bosonbunch.thermometry import EnergySpectrum, gibbs, invert_temperature, thermo_curve


def _random_spectrum(rng, L=None):
    L = L or int(rng.integers(2, 6))
    return EnergySpectrum.from_unsorted(rng.exponential(size=L))


def test_spectrum_validation():
    with pytest.raises(ValidationError):
        EnergySpectrum((0.5, 1.0))
    with pytest.raises(ValidationError):
        EnergySpectrum((0.0, 2.0, 1.0))
    with pytest.raises(ValidationError):
        EnergySpectrum(())
    s = EnergySpectrum.from_unsorted([3.0, 1.0, 2.0])
    assert s.levels == (0.0, 1.0, 2.0) and s.L == 3 and not s.degenerate
    assert EnergySpectrum((0.0, 0.0)).degenerate


def test_gibbs_examples():
    s = EnergySpectrum((0.0, 1.0))
    assert gibbs(s, 0.0).tolist() == [0.5, 0.5]
    assert gibbs(s, math.log(3)) == pytest.approx([0.75, 0.25], abs=1e-15)
    assert gibbs(EnergySpectrum((0.0, 0.0, 2.0)), math.inf).tolist() == [0.5, 0.5, 0.0]
    with pytest.raises(ValidationError):
        gibbs(s, -0.1)
    with pytest.raises(ValidationError):
        gibbs(s, math.nan)


def test_gibbs_extreme_beta_is_stable():
    p = gibbs(EnergySpectrum((0.0, 1.0, 1000.0)), 1e4)
    assert np.all(np.isfinite(p)) and abs(p.sum() - 1) < 1e-14 and p[0] == 1.0


def test_gibbs_majorization_in_beta(rng):
    for _ in range(100):
        s = _random_spectrum(rng)
        b1, b2 = sorted(rng.exponential(2.0, size=2))
        hot, cold = gibbs(s, b1), gibbs(s, b2)
        assert abs(hot.sum() - 1) < 1e-14
        assert majorizes(cold, hot)


def test_curve_examples():
    s = EnergySpectrum((0.0, 1.0))
    curve = thermo_curve(s, 2, 4, 2, [0.0, 60.0])
    assert curve.values[0] == pytest.approx(0.26666666666666666, abs=1e-15)
    assert curve.values[1] == pytest.approx(0.3, abs=1e-12)
    flat = thermo_curve(EnergySpectrum((0.0, 1.0, 2.0)), 1, 5, 2, np.linspace(0, 5, 6))
    assert np.allclose(flat.values, 2 / 5, atol=1e-15)
    assert flat.to_csv().splitlines()[0] == "beta,mean_bunching"
    with pytest.raises(ValidationError):
        thermo_curve(EnergySpectrum((0.0, 1.0)), 3, 4, 2, [0.0])


@pytest.mark.parametrize("n", [2, 3])
def test_curve_strictly_increasing(n, rng):
    for _ in range(10):
        s = _random_spectrum(rng, int(rng.integers(n, 6)))
        m = int(rng.integers(n, 7))
        k = int(rng.integers(1, m))
        curve = thermo_curve(s, n, m, k, np.linspace(0, 10, 50))
        assert np.all(np.diff(curve.values) > -1e-12)


def test_curve_parallel_matches_serial(rng):
    s = _random_spectrum(rng, 3)
    a = thermo_curve(s, 3, 5, 2, np.linspace(0, 4, 17))
    b = thermo_curve(s, 3, 5, 2, np.linspace(0, 4, 17), workers=4)
    assert a.to_csv() == b.to_csv()


def test_curve_monotonicity_fault(monkeypatch):
    from bosonbunch import thermometry

    monkeypatch.setattr(thermometry, "_curve_value", lambda s, n, m, k, b: -b)
    with pytest.raises(InternalConsistencyError):
        thermo_curve(EnergySpectrum((0.0, 1.0)), 2, 3, 1, [0.0, 1.0])


@pytest.mark.parametrize("beta", [0.1, 0.5, 1.0, 2.0, 5.0])
def test_invert_round_trip(beta):
    s = EnergySpectrum((0.0, 0.7, 1.3))
    target = mean_bunch_closed(3, 5, 2, gibbs(s, beta))
    got = invert_temperature(s, 3, 5, 2, target)
    assert abs(got - beta) / max(beta, 0.1) < 1e-6


def test_invert_edges():
    s = EnergySpectrum((0.0, 1.0))
    y0 = mean_bunch_closed(2, 4, 2, gibbs(s, 0.0))
    assert invert_temperature(s, 2, 4, 2, y0) == 0.0
    with pytest.raises(ValidationError, match="outside"):
        invert_temperature(s, 2, 4, 2, 0.3 + 1e-6)
    with pytest.raises(ValidationError):
        invert_temperature(s, 2, 4, 2, y0 - 1e-3)
    with pytest.raises(ValidationError, match="n=1"):
        invert_temperature(s, 1, 4, 2, 0.5)
    with pytest.raises(ValidationError, match="degenerate"):
        invert_temperature(EnergySpectrum((0.0, 0.0)), 2, 4, 2, 0.28)
