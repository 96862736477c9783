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

#include "seedcomp/pipeline/config.hpp"

#include <charconv>
#include <sstream>

#include "seedcomp/core/errors.hpp"

namespace seedcomp::pipeline {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ContractError("config: " + key + " expects an unsigned integer, got '" + value + "'");
  }
  return out;
}

std::vector<std::size_t> parse_list(const std::string& key, const std::string& value) {
  std::vector<std::size_t> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_uint(key, trim(item)));
  return out;
}

generator::AttentionMode parse_mode(const std::string& value) {
  const auto colon = value.find(':');
  if (colon == std::string::npos) return generator::AttentionMode::parse(value);
  return generator::AttentionMode::parse(value.substr(0, colon),
                                         std::stod(value.substr(colon + 1)));
}

std::string mode_text(const generator::AttentionMode& m) {
  if (m.kind != generator::AttentionKind::kScaled) return m.name();
  std::ostringstream os;
  os.precision(17);
  os << m.name() << ':' << m.lambda;
  return os.str();
}

}  // namespace

ModelConfig ModelConfig::paper() { return ModelConfig{}; }

ModelConfig ModelConfig::paper_8k() {
  ModelConfig c;
  c.rates = {1, 4, 4};
  return c;
}

ModelConfig ModelConfig::desk() {
  ModelConfig c;
  c.input_points = 512;
  c.sa1_points = 256;
  c.sa1_channels = 32;
  c.patches = 64;
  c.patch_channels = 64;
  c.seed_rate = 2;
  c.seed_channels = 32;
  c.coarse_points = 128;
  c.channels = 32;
  c.rates = {1, 2, 2};
  c.k_group = 16;
  c.k_attention = 8;
  c.k_interp = 3;
  return c;
}

std::vector<std::size_t> ModelConfig::stage_sizes() const {
  std::vector<std::size_t> sizes{coarse_points};
  for (auto r : rates) sizes.push_back(sizes.back() * r);
  return sizes;
}

void ModelConfig::validate() const {
  auto fail = [](const std::string& why) { throw ContractError("config: " + why); };
  if (rates.empty()) fail("rates must be nonempty");
  for (auto r : rates) {
    if (r == 0) fail("every rate must be >= 1");
  }
  if (sa1_points > input_points) fail("sa1_points exceeds input_points");
  if (patches > sa1_points) fail("patches exceeds sa1_points");
  if (seed_rate == 0) fail("seed_rate must be >= 1");
  if (coarse_points > seed_count() + input_points) fail("coarse_points exceeds seeds + input");
  if (k_group == 0 || k_attention == 0 || k_interp == 0) fail("neighborhood sizes must be >= 1");
  if (k_interp > seed_count()) fail("k_interp exceeds the seed count");
  if (k_attention > patches || k_attention > coarse_points) {
    fail("k_attention exceeds a point set it is applied to");
  }
  if (sa1_channels == 0 || patch_channels == 0 || seed_channels == 0 || channels == 0) {
    fail("channel widths must be >= 1");
  }
}

void ModelConfig::set(const std::string& key, const std::string& value) {
  auto u = [&] { return static_cast<std::size_t>(parse_uint(key, value)); };
  if (key == "input_points") input_points = u();
  else if (key == "sa1_points") sa1_points = u();
  else if (key == "sa1_channels") sa1_channels = u();
  else if (key == "patches") patches = u();
  else if (key == "patch_channels") patch_channels = u();
  else if (key == "seed_rate") seed_rate = u();
  else if (key == "seed_channels") seed_channels = u();
  else if (key == "coarse_points") coarse_points = u();
  else if (key == "channels") channels = u();
  else if (key == "rates") rates = parse_list(key, value);
  else if (key == "k_group") k_group = u();
  else if (key == "k_attention") k_attention = u();
  else if (key == "k_interp") k_interp = u();
  else if (key == "seed_attention") seed_attention = parse_mode(value);
  else if (key == "stage_attention") stage_attention = parse_mode(value);
  else if (key == "generator") generator = generator::parse_generator(value);
  else if (key == "precision") {
    if (value == "single") precision = ad::Precision::kSingle;
    else if (value == "double") precision = ad::Precision::kDouble;
    else throw ContractError("config: precision must be single or double");
  } else if (key == "seed") seed = parse_uint(key, value);
  else throw ContractError("config: unknown key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> ModelConfig::entries() const {
  std::string rate_text;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (i) rate_text += ',';
    rate_text += std::to_string(rates[i]);
  }
  return {
      {"input_points", std::to_string(input_points)},
      {"sa1_points", std::to_string(sa1_points)},
      {"sa1_channels", std::to_string(sa1_channels)},
      {"patches", std::to_string(patches)},
      {"patch_channels", std::to_string(patch_channels)},
      {"seed_rate", std::to_string(seed_rate)},
      {"seed_channels", std::to_string(seed_channels)},
      {"coarse_points", std::to_string(coarse_points)},
      {"channels", std::to_string(channels)},
      {"rates", rate_text},
      {"k_group", std::to_string(k_group)},
      {"k_attention", std::to_string(k_attention)},
      {"k_interp", std::to_string(k_interp)},
      {"seed_attention", mode_text(seed_attention)},
      {"stage_attention", mode_text(stage_attention)},
      {"generator", generator::generator_name(generator)},
      {"precision", precision == ad::Precision::kSingle ? "single" : "double"},
      {"seed", std::to_string(seed)},
  };
}

std::string ModelConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries()) out += k + " = " + v + "\n";
  return out;
}

ModelConfig ModelConfig::from_text(const std::string& text) {
  ModelConfig c;
  for (const auto& [k, v] : parse_key_values(text)) c.set(k, v);
  c.validate();
  return c;
}

std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("config line " + std::to_string(line_no) + ": empty key");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

}  // namespace seedcomp::pipeline
