// Copyright 2026 The mgspa Authors. All rights reserved.
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

#include <string>

#include "doctest.h"
#include "mgspa/model.h"
#include "mgspa/serialize.h"
#include "mgspa/stage_game.h"

namespace mgspa {
namespace {

TEST_CASE("model round-trips exactly through text") {
  Rng rng(4);
  for (int k = 0; k < 10; ++k) {
    const MgSpaModel m = k == 0 ? BuildToyTwoPlayer(0.9) : RandomModel({}, rng);
    const std::string text = ModelToJson(m).dump();
    const MgSpaModel back = ModelFromJson(Json::parse(text));
    CHECK(back.params().transition == m.params().transition);
    CHECK(back.params().rewards == m.params().rewards);
    CHECK(back.params().perturb.tables == m.params().perturb.tables);
    CHECK(back.gamma() == m.gamma());
    CHECK(back.epsilon() == m.epsilon());
    CHECK(ModelToJson(back).dump() == text);
  }
}

TEST_CASE("stage game round-trips and accepts a bare matrix") {
  const MgSpaModel m = BuildToyTwoPlayer();
  const std::vector<double> v{0.1, 1.0 / 3.0};
  const StageGame g = BuildStageGame(m, v);
  const StageGame back = StageGameFromJson(Json::parse(StageGameToJson(g).dump()));
  CHECK(back.payoff == g.payoff);
  CHECK(back.infoset == g.infoset);
  const StageGame mat = StageGameFromJson(Json::parse(R"({"matrix": [[3,1],[2,2]]})"));
  CHECK(mat.num_actions == 2);
  CHECK(mat.Payoff(0, 1, 0) == 1.0);
}

TEST_CASE("unknown model keys are rejected by name") {
  Json j = ModelToJson(BuildToyTwoPlayer());
  j["gamme"] = 0.5;
  try {
    ModelFromJson(j);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kParse);
    CHECK(std::string(e.what()).find("gamme") != std::string::npos);
  }
}

}  // namespace
}  // namespace mgspa
