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

"""Noisy IQP simulation: circuits, encodings, spectra, sampling, metrics."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import IqpnoiseError, preset_config_json, run_experiment_json


def preset_config(name):
    """Built-in experiment preset as a dict."""
    return _json.loads(preset_config_json(name))


def run_experiment(config):
    """Runs an experiment from a dict (or JSON text); returns the result dict."""
    text = config if isinstance(config, str) else _json.dumps(config)
    return _json.loads(run_experiment_json(text))

