# SPDX-License-Identifier: Apache-2.0
#
# chanlingo: channel prediction over vocabularies of channel changes
# Copyright (C) 2026 The chanlingo authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------
"""Channel prediction over vocabularies of channel changes."""

from ._chanlingo import (
    Error,
    Model,
    Vocabulary,
    __version__,
    attention_map,
    build_vocabulary,
    cli,
    doppler_frequency,
    generate_channel,
    load_csf,
    load_model,
    load_vocabulary,
    nmse,
    predict_series,
    prediction_diversity,
    save_csf,
    splice,
    train_model,
    wavelength_span,
    zoh_baseline,
)

__all__ = [
    "Error",
    "Model",
    "Vocabulary",
    "__version__",
    "attention_map",
    "build_vocabulary",
    "cli",
    "doppler_frequency",
    "generate_channel",
    "load_csf",
    "load_model",
    "load_vocabulary",
    "nmse",
    "predict_series",
    "prediction_diversity",
    "save_csf",
    "splice",
    "train_model",
    "wavelength_span",
    "zoh_baseline",
]
