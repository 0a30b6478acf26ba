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

#ifndef MGSPA_SERIALIZE_H_
#define MGSPA_SERIALIZE_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "mgspa/model.h"
#include "mgspa/stage_game.h"
#include "mgspa/stage_solver.h"

namespace mgspa {

using Json = nlohmann::json;

// Doubles are written with round-trip precision, so every *ToJson /
// *FromJson pair is exact.
Json ModelToJson(const MgSpaModel& model);
MgSpaModel ModelFromJson(const Json& j);

Json PerturbToJson(const PerturbFn& fn);
PerturbFn PerturbFromJson(const Json& j);

Json StageGameToJson(const StageGame& game);
StageGame StageGameFromJson(const Json& j);

Json StrategyToJson(const BehavioralStrategy& strat);
BehavioralStrategy StrategyFromJson(const Json& j);
Json SolveReportToJson(const SolveReport& report);

Json PolicyToJson(const JointPolicy& policy);
JointPolicy PolicyFromJson(const Json& j);

Json ReadJsonFile(const std::string& path);
void WriteJsonFile(const std::string& path, const Json& j);
void WriteTextFile(const std::string& path, const std::string& text);

// Rejects keys outside `allowed`, naming the first offender.
void CheckKeys(const Json& j, std::initializer_list<const char*> allowed,
               const std::string& where);

// Reads `key` as T, raising a parse error that names the key.
template <typename T>
T GetKey(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) {
    throw Error(ErrorKind::kParse, where + ": missing key '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw Error(ErrorKind::kParse,
                where + ": key '" + key + "' has the wrong type");
  }
}

// Overwrites `out` when `key` is present.
template <typename T>
void MaybeGetKey(const Json& j, const char* key, const std::string& where,
                 T* out) {
  if (j.contains(key)) *out = GetKey<T>(j, key, where);
}

// Results table: a versioned schema comment line, a header and rows.
struct CsvTable {
  std::string schema;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string ToString() const;
  // Inverse of ToString. Throws a parse error on ragged rows.
  static CsvTable Parse(const std::string& text);
  int Column(const std::string& name) const;
};

// Shortest decimal form that reads back to the same double.
std::string FormatDouble(double x);
double ParseDouble(const std::string& s);

}  // namespace mgspa

#endif  // MGSPA_SERIALIZE_H_
