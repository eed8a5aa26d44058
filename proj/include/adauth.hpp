// SPDX-License-Identifier: Apache-2.0
//
// adauth: angle-delay physical-layer authentication laboratory
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Umbrella header.

#pragma once

#include "adauth/config.hpp"
#include "adauth/channel.hpp"
#include "adauth/angle_delay.hpp"
#include "adauth/png.hpp"
#include "adauth/detector.hpp"
#include "adauth/features.hpp"
#include "adauth/mlp.hpp"
#include "adauth/baseline.hpp"
#include "adauth/roc.hpp"
#include "adauth/dataset.hpp"
#include "adauth/records.hpp"
#include "adauth/checkpoint.hpp"
#include "adauth/pipeline.hpp"
