# Copyright 2026 The fairlabel Authors.
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

"""Label-bias correction by learned example weights."""

import json

from ._core import (
    Error,
    InvalidArgument,
    TrainingError,
    bias_score,
    debias_score,
    example_weight,
    fit,
    generate,
    predict_proba,
    prepare,
    train,
    violation,
)
from . import _core

__all__ = [
    "Error",
    "InvalidArgument",
    "TrainingError",
    "bias_score",
    "debias_score",
    "example_weight",
    "fit",
    "generate",
    "predict_proba",
    "prepare",
    "run_experiment",
    "train",
    "validate_report",
    "violation",
]


def run_experiment(config, seed=None, write=False):
    """Runs a JSON experiment config; returns the report as a dict."""
    return json.loads(_core.run_experiment_json(str(config), seed, write))


def validate_report(report):
    """Raises Error if `report` (dict) is not a well-formed report."""
    _core.validate_report_json(json.dumps(report))
