// SPDX-License-Identifier: Apache-2.0
//
// irsnav - radio-map based robot path planning with intelligent reflecting surfaces
// Copyright (C) 2026 The irsnav Authors
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

#ifndef IRSNAV_IRSNAV_HPP
#define IRSNAV_IRSNAV_HPP

#include "irsnav/channel.hpp"
#include "irsnav/config.hpp"
#include "irsnav/errors.hpp"
#include "irsnav/experiments.hpp"
#include "irsnav/geometry.hpp"
#include "irsnav/phase.hpp"
#include "irsnav/planner.hpp"
#include "irsnav/radio_map.hpp"
#include "irsnav/scenario.hpp"
#include "irsnav/units.hpp"

#endif // IRSNAV_IRSNAV_HPP
