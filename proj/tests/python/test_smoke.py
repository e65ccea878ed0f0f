# Copyright 2026 The qtoa Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import pytest

import qtoa


@pytest.fixture(scope="module")
def gauss():
    return qtoa.Spectrum.gaussian(50.0, 1.0)


def test_moments(gauss):
    m = qtoa.moments(gauss)
    assert m.delta_tau == pytest.approx(0.5, rel=1e-7)
    assert m.delta_omega == pytest.approx(1.0, rel=1e-9)
    assert qtoa.moments(qtoa.Spectrum.lorentzian(50.0, 1.0)).delta_tau == pytest.approx(1 / math.sqrt(2), rel=1e-6)


def test_tabulated_spectrum():
    omega = [50.0 + 0.05 * i for i in range(-240, 241)]
    power = [math.exp(-0.5 * (w - 50.0) ** 2) for w in omega]
    s = qtoa.Spectrum.tabulated(omega, power)
    assert s.kind == qtoa.SpectrumKind.Tabulated
    assert qtoa.moments(s).delta_tau == pytest.approx(0.5, rel=1e-4)


def test_analytic_accuracy(gauss):
    ef = qtoa.analytic_accuracy(qtoa.StateModel.entangled_fock(gauss, 2, 2))
    cc = qtoa.analytic_accuracy(qtoa.StateModel.classical_coherent(gauss, 2, 2.0))
    assert ef.delta_t == pytest.approx(0.125)
    assert cc.delta_t / ef.delta_t == pytest.approx(2.0)
    with pytest.raises(qtoa.DegenerateEfficiencyError):
        qtoa.analytic_accuracy(qtoa.StateModel.entangled_singles(gauss, 2), 0.0)


def test_campaign_and_fit(gauss):
    reports = [qtoa.run_campaign(qtoa.StateModel.entangled_singles(gauss, m), trials=20000, seed=m) for m in (1, 2, 4, 8)]
    assert reports[-1].empirical_std == pytest.approx(0.5 / 8, rel=0.03)
    fit = qtoa.fit_scaling(reports, qtoa.ScalingAxis.M)
    assert fit.exponent == pytest.approx(-1.0, abs=0.05)
    assert qtoa.bound_violations(reports) == []


def test_trial_estimates_are_deterministic(gauss):
    model = qtoa.StateModel.unentangled_singles(gauss, 3)
    a = qtoa.trial_estimates(model, eta=0.5, trials=2000, seed=4)
    b = qtoa.trial_estimates(model, eta=0.5, trials=2000, seed=4, threads=3)
    assert a == b
    assert {w for _, w in a} <= {0.0, 1.0, 2.0, 3.0}


def test_thresholds_and_region_map():
    assert qtoa.threshold_entangled(3) == pytest.approx(3 ** -0.5)
    assert qtoa.threshold_partial_pairs() == 0.5
    with pytest.raises(qtoa.UndefinedThresholdError):
        qtoa.threshold_entangled(1)
    rm = qtoa.region_map([4, 5], [0.3, 0.6, 0.99])
    assert rm.is_monotone()
    assert rm.at(0, 1) == qtoa.Strategy.PartialPairs
    assert rm.at(1, 2) == qtoa.Strategy.Entangled


def test_invalid_model(gauss):
    with pytest.raises(qtoa.InvalidModelError):
        qtoa.StateModel.partial_pairs(gauss, 3).validate()
    with pytest.raises(qtoa.Error):
        qtoa.run_campaign(qtoa.StateModel.entangled_singles(gauss, 16), eta=0.3, trials=1000)
