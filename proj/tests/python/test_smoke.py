# Copyright 2026 The iqpnoise Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import json
import math

import pytest

import iqpnoise


def test_generate_and_round_trip():
    c = iqpnoise.generate_circuit(3, 2, seed=7)
    assert (c.n, c.m) == (3, 6)
    assert iqpnoise.Circuit.from_json(c.to_json()) == c
    assert iqpnoise.generate_circuit(3, 2, seed=7) == c


def test_encoding_identity():
    c = iqpnoise.generate_circuit(2, 2, seed=3)
    enc = iqpnoise.encode(c)
    assert enc.width == 6
    joint = iqpnoise.full_iqp_distribution(enc)
    for xp in range(1 << c.m):
        label = "".join("1" if (xp >> j) & 1 else "0" for j in range(c.m))
        pq = iqpnoise.statevector_probs(c, label)
        for x in range(1 << c.n):
            assert abs(2 ** c.m * joint[x | (xp << c.n)] - pq[x]) < 1e-12


def test_f_examples():
    enc = iqpnoise.encode(iqpnoise.Circuit.from_json(
        '{"n": 1, "gates": [{"j": {"wire": 0, "angle": 1.5707963267948966}}]}'))
    assert abs(enc.f("10") - 1j) < 1e-15
    assert enc.f("00") == 1


def test_noise_paths_agree():
    c = iqpnoise.generate_circuit(2, 2, seed=5)
    eps = 0.3
    joint = iqpnoise.noisy_distribution_exact(iqpnoise.encode(c), eps)
    channel = iqpnoise.noisy_channel_distribution(c, "0000", eps)
    for x in range(4):
        assert abs(16 * joint[x] - channel[x]) < 1e-12


def test_spectrum_sample_and_metrics():
    c = iqpnoise.generate_circuit(3, 2, seed=2)
    enc = iqpnoise.encode(c)
    params = iqpnoise.choose_params(0.3, 0.3, 2.0, c.n, c.m)
    assert params.L == math.ceil(math.log(2.0 / 0.09) / 0.6)
    params.exhaustive = True
    spec = iqpnoise.build_truncated_spectrum(enc, params)
    assert len(spec) == iqpnoise.truncated_entry_count(9, params.L)
    assert iqpnoise.Spectrum.from_json(spec.to_json()) == spec
    samples = iqpnoise.sample(spec, count=300, seed=4)
    assert len(samples) == 300
    assert all(0 <= s < 8 for s in samples)
    alg = iqpnoise.walk_distribution(spec)
    assert abs(sum(alg) - 1.0) < 1e-12
    exp = iqpnoise.noisy_channel_distribution(c, "0" * c.m, 0.3)
    assert iqpnoise.l1_distance(alg, exp) < 1.0


def test_bounds_and_integrals():
    assert iqpnoise.chebyshev_tail(10.0) == pytest.approx(0.02)
    assert iqpnoise.sampler_bound(2.0, 0.1) == pytest.approx(1.0)
    e = iqpnoise.euler_integrals()
    assert e["gamma"] == pytest.approx(0.5772156649, abs=1e-6)
    assert e["residual"] < 1e-8


def test_walk_on_signed_vector():
    alg = iqpnoise.walk_distribution_signed([0.6, 0.3, -0.1, 0.2], 2)
    assert alg == pytest.approx([0.5, 0.3, 0.0, 0.2])


def test_errors_surface_as_exceptions():
    with pytest.raises(iqpnoise.IqpnoiseError, match="Config"):
        iqpnoise.run_experiment({"delta": 0.5, "k": 2.0})
    with pytest.raises(iqpnoise.IqpnoiseError, match="BadRange"):
        iqpnoise.sampler_bound(2.0, 0.5)


def test_run_preset_experiment():
    cfg = iqpnoise.preset_config("noise-free-exhaustive")
    assert cfg["epsilon"] == 0.0
    result = iqpnoise.run_experiment(cfg)
    assert result["aggregates"]["lambda_av"] < 1e-8
    assert all(c["pass"] for c in result["checks"] if c["asserted"])
    again = iqpnoise.run_experiment(json.dumps(cfg))
    assert again == result
