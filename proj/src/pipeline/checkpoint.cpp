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

#include "seedcomp/pipeline/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "seedcomp/core/errors.hpp"

namespace seedcomp::pipeline {

namespace {

static_assert(std::endian::native == std::endian::little, "little-endian host required");

constexpr std::uint32_t kMaxString = 1u << 24;
constexpr std::uint32_t kMaxRank = 8;

void put_bytes(std::ostream& os, const void* p, std::size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void put_u32(std::ostream& os, std::uint32_t v) { put_bytes(os, &v, 4); }
void put_u64(std::ostream& os, std::uint64_t v) { put_bytes(os, &v, 8); }

void put_string(std::ostream& os, const std::string& s) {
  put_u32(os, static_cast<std::uint32_t>(s.size()));
  put_bytes(os, s.data(), s.size());
}

void get_bytes(std::istream& is, void* p, std::size_t n, const char* what) {
  is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(is.gcount()) != n) {
    throw FormatError(std::string("checkpoint: truncated while reading ") + what);
  }
}

std::uint32_t get_u32(std::istream& is, const char* what) {
  std::uint32_t v = 0;
  get_bytes(is, &v, 4, what);
  return v;
}

std::uint64_t get_u64(std::istream& is, const char* what) {
  std::uint64_t v = 0;
  get_bytes(is, &v, 8, what);
  return v;
}

std::string get_string(std::istream& is, const char* what) {
  const auto n = get_u32(is, what);
  if (n > kMaxString) throw FormatError(std::string("checkpoint: oversized ") + what);
  std::string s(n, '\0');
  get_bytes(is, s.data(), n, what);
  return s;
}

TensorRecord record_of(const std::string& name, const ad::Shape& shape,
                       std::span<const double> values) {
  TensorRecord r{name, shape, {}};
  r.values.reserve(values.size());
  for (double v : values) r.values.push_back(static_cast<float>(v));
  return r;
}

}  // namespace

void write_checkpoint(std::ostream& os, const CheckpointData& data) {
  put_bytes(os, kCheckpointMagic, 4);
  put_u32(os, kCheckpointVersion);
  put_string(os, data.config_text);
  put_u64(os, data.optimizer_step);
  put_u32(os, static_cast<std::uint32_t>(data.records.size()));
  for (const auto& r : data.records) {
    put_string(os, r.name);
    put_u32(os, static_cast<std::uint32_t>(r.shape.size()));
    for (auto e : r.shape) put_u32(os, static_cast<std::uint32_t>(e));
    put_bytes(os, r.values.data(), r.values.size() * sizeof(float));
  }
  if (!os) throw FormatError("checkpoint: write failed");
}

CheckpointData read_checkpoint(std::istream& is) {
  char magic[4] = {};
  get_bytes(is, magic, 4, "magic");
  if (std::memcmp(magic, kCheckpointMagic, 4) != 0) throw FormatError("checkpoint: bad magic");
  const auto version = get_u32(is, "version");
  if (version != kCheckpointVersion) {
    throw FormatError("checkpoint: unsupported version " + std::to_string(version));
  }
  CheckpointData data;
  data.config_text = get_string(is, "config");
  data.optimizer_step = get_u64(is, "optimizer step");
  const auto count = get_u32(is, "record count");
  for (std::uint32_t i = 0; i < count; ++i) {
    TensorRecord r;
    r.name = get_string(is, "record name");
    const auto rank = get_u32(is, "rank");
    if (rank > kMaxRank) throw FormatError("checkpoint: implausible rank for " + r.name);
    std::size_t numel = 1;
    for (std::uint32_t a = 0; a < rank; ++a) {
      r.shape.push_back(get_u32(is, "extent"));
      numel *= r.shape.back();
    }
    if (numel > (std::size_t{1} << 32)) throw FormatError("checkpoint: oversized " + r.name);
    r.values.resize(numel);
    get_bytes(is, r.values.data(), numel * sizeof(float), "values");
    data.records.push_back(std::move(r));
  }
  return data;
}

void save_checkpoint(const std::filesystem::path& path, const CompletionModel& model,
                     const AdamState* optimizer) {
  CheckpointData data;
  data.config_text = model.config().to_text();
  const auto& params = model.parameters().parameters();
  for (const auto& p : params) data.records.push_back(record_of(p.name, p.tensor.shape(), p.tensor.values()));
  if (optimizer) {
    if (optimizer->m.size() != params.size() || optimizer->v.size() != params.size()) {
      throw ContractError("save_checkpoint: optimizer state does not match the model");
    }
    data.optimizer_step = optimizer->step;
    for (std::size_t i = 0; i < params.size(); ++i) {
      data.records.push_back(record_of("adam.m/" + params[i].name, params[i].tensor.shape(), optimizer->m[i]));
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
      data.records.push_back(record_of("adam.v/" + params[i].name, params[i].tensor.shape(), optimizer->v[i]));
    }
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FormatError("checkpoint: cannot open " + path.string() + " for writing");
  write_checkpoint(os, data);
}

namespace {

CheckpointData read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("checkpoint: cannot open " + path.string());
  return read_checkpoint(is);
}

void copy_record(const TensorRecord& r, ad::Tensor& t) {
  auto dst = t.mutable_values();
  for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = static_cast<double>(r.values[j]);
}

}  // namespace

std::optional<AdamState> load_into(const std::filesystem::path& path, CompletionModel& model) {
  const auto data = read_file(path);
  const auto& params = model.parameters().parameters();
  const std::size_t n = params.size();
  if (data.records.size() != n && data.records.size() != 3 * n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i >= data.records.size() || data.records[i].name != params[i].name) {
        throw FormatError("checkpoint: parameter mismatch at " + params[i].name);
      }
    }
    throw FormatError("checkpoint: unexpected record count " +
                      std::to_string(data.records.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = data.records[i];
    if (r.name != params[i].name || r.shape != params[i].tensor.shape()) {
      throw FormatError("checkpoint: parameter mismatch at " + params[i].name + " (file has " +
                        r.name + " " + ad::shape_str(r.shape) + ")");
    }
  }
  std::optional<AdamState> state;
  if (data.records.size() == 3 * n) {
    state.emplace();
    state->step = data.optimizer_step;
    for (std::size_t k = 0; k < 2; ++k) {
      auto& dst = k == 0 ? state->m : state->v;
      const std::string prefix = k == 0 ? "adam.m/" : "adam.v/";
      for (std::size_t i = 0; i < n; ++i) {
        const auto& r = data.records[n * (k + 1) + i];
        if (r.name != prefix + params[i].name || r.shape != params[i].tensor.shape()) {
          throw FormatError("checkpoint: optimizer record mismatch at " + r.name);
        }
        dst.emplace_back(r.values.begin(), r.values.end());
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto t = params[i].tensor;
    copy_record(data.records[i], t);
  }
  return state;
}

ModelConfig read_checkpoint_config(const std::filesystem::path& path) {
  const auto data = read_file(path);
  try {
    return ModelConfig::from_text(data.config_text);
  } catch (const Error& e) {
    throw FormatError(std::string("checkpoint: bad config block: ") + e.what());
  }
}

}  // namespace seedcomp::pipeline
