// Copyright 2026 The tempograph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include "tempograph/time.hpp"
#include "tempograph/event.hpp"
#include "tempograph/xml.hpp"
#include "tempograph/xes.hpp"
#include "tempograph/line_protocol.hpp"
#include "tempograph/replay.hpp"
#include "tempograph/channel.hpp"
#include "tempograph/net.hpp"
#include "tempograph/model.hpp"
#include "tempograph/model_io.hpp"
#include "tempograph/stats.hpp"
#include "tempograph/miner.hpp"
#include "tempograph/cost.hpp"
#include "tempograph/alignment.hpp"
#include "tempograph/checker.hpp"
#include "tempograph/report_io.hpp"
#include "tempograph/eval.hpp"
