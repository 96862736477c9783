// Copyright 2026 The seedcomp Authors
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


#include "seedcomp/cli/run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace seedcomp::cli {

namespace {

double parse_real(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw UsageError("config: " + key + " expects a number, got '" + value + "'");
  }
  return out;
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  std::size_t out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw UsageError("config: " + key + " expects an unsigned integer, got '" + value + "'");
  }
  return out;
}

std::string real_text(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "learning_rate") train.learning_rate = parse_real(key, value);
  else if (key == "beta1") train.beta1 = parse_real(key, value);
  else if (key == "beta2") train.beta2 = parse_real(key, value);
  else if (key == "epsilon") train.epsilon = parse_real(key, value);
  else if (key == "decay") train.decay = parse_real(key, value);
  else if (key == "decay_every") train.decay_every = parse_count(key, value);
  else if (key == "steps") steps = parse_count(key, value);
  else if (key == "batch") batch = parse_count(key, value);
  else {
    try {
      model.set(key, value);
    } catch (const ContractError& e) {
      throw UsageError(e.what());
    }
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  auto out = model.entries();
  out.emplace_back("learning_rate", real_text(train.learning_rate));
  out.emplace_back("beta1", real_text(train.beta1));
  out.emplace_back("beta2", real_text(train.beta2));
  out.emplace_back("epsilon", real_text(train.epsilon));
  out.emplace_back("decay", real_text(train.decay));
  out.emplace_back("decay_every", std::to_string(train.decay_every));
  out.emplace_back("steps", std::to_string(steps));
  out.emplace_back("batch", std::to_string(batch));
  return out;
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries()) out += k + " = " + v + "\n";
  return out;
}

pipeline::ModelConfig preset(const std::string& name) {
  if (name == "desk") return pipeline::ModelConfig::desk();
  if (name == "paper") return pipeline::ModelConfig::paper();
  if (name == "paper_8k") return pipeline::ModelConfig::paper_8k();
  throw UsageError("unknown preset '" + name + "' (desk, paper, paper_8k)");
}

RunConfig resolve_config(const std::string& preset_name, const std::filesystem::path& file,
                         const std::vector<std::string>& overrides) {
  RunConfig run;
  run.model = preset(preset_name);
  if (!file.empty()) {
    std::ifstream is(file);
    if (!is) throw UsageError("cannot read config file " + file.string());
    std::stringstream text;
    text << is.rdbuf();
    for (const auto& [k, v] : pipeline::parse_key_values(text.str())) run.set(k, v);
  }
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("override '" + kv + "' is not key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    run.set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
  }
  run.model.validate();
  if (run.batch == 0) throw ContractError("config: batch must be >= 1");
  if (!(run.train.learning_rate >= 0.0)) throw ContractError("config: learning_rate must be >= 0");
  return run;
}

}  // namespace seedcomp::cli
