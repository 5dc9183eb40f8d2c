// Copyright 2026 The svrl Authors
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

#include "svrl/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "svrl/errors.hpp"

namespace svrl {
namespace {

class Writer {
 public:
  void u32(std::uint32_t v) { put_le(v, 4); }
  void u64(std::uint64_t v) { put_le(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(const std::string& s) { out_.insert(out_.end(), s.begin(), s.end()); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void put_le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& in) : in_(in) {}

  std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
  std::uint64_t u64() { return get_le(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s(in_.begin() + pos_, in_.begin() + pos_ + n);
    pos_ += n;
    return s;
  }
  bool at_end() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw ConfigError("checkpoint truncated");
  }
  std::uint64_t get_le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += n;
    return v;
  }
  const std::vector<std::uint8_t>& in_;
  std::size_t pos_ = 0;
};

std::string encode_config(const NetConfig& c) {
  char ls[40];
  std::snprintf(ls, sizeof(ls), "%.17g", c.log_std_init);
  std::ostringstream out;
  out << "kind=" << net_kind_name(c.kind) << '\n'
      << "obs_channels=" << c.obs_channels << '\n'
      << "obs_height=" << c.obs_height << '\n'
      << "obs_width=" << c.obs_width << '\n'
      << "conv1_filters=" << c.conv1_filters << '\n'
      << "conv1_kernel=" << c.conv1_kernel << '\n'
      << "conv1_stride=" << c.conv1_stride << '\n'
      << "conv2_filters=" << c.conv2_filters << '\n'
      << "conv2_kernel=" << c.conv2_kernel << '\n'
      << "conv2_stride=" << c.conv2_stride << '\n'
      << "dense_units=" << c.dense_units << '\n'
      << "lstm_units=" << c.lstm_units << '\n'
      << "mlp_inputs=" << c.mlp_inputs << '\n'
      << "mlp_hidden=" << c.mlp_hidden << '\n'
      << "log_std_init=" << ls << '\n';
  return out.str();
}

NetConfig decode_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto get = [&kv](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError(std::string("checkpoint config missing '") + key + "'");
    return it->second;
  };
  auto geti = [&get](const char* key) { return std::stoi(get(key)); };
  NetConfig c;
  c.kind = parse_net_kind(get("kind"));
  c.obs_channels = geti("obs_channels");
  c.obs_height = geti("obs_height");
  c.obs_width = geti("obs_width");
  c.conv1_filters = geti("conv1_filters");
  c.conv1_kernel = geti("conv1_kernel");
  c.conv1_stride = geti("conv1_stride");
  c.conv2_filters = geti("conv2_filters");
  c.conv2_kernel = geti("conv2_kernel");
  c.conv2_stride = geti("conv2_stride");
  c.dense_units = geti("dense_units");
  c.lstm_units = geti("lstm_units");
  c.mlp_inputs = geti("mlp_inputs");
  c.mlp_hidden = geti("mlp_hidden");
  c.log_std_init = std::strtod(get("log_std_init").c_str(), nullptr);
  return c;
}

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const PolicyNetwork& net) {
  Writer w;
  w.bytes(std::string(kCheckpointMagic, 4));
  w.u32(kCheckpointVersion);
  const std::string config = encode_config(net.config());
  w.u32(static_cast<std::uint32_t>(config.size()));
  w.bytes(config);
  const TensorList& params = net.parameters();
  w.u32(static_cast<std::uint32_t>(params.size()));
  for (const NamedTensor& nt : params) {
    w.u32(static_cast<std::uint32_t>(nt.name.size()));
    w.bytes(nt.name);
    w.u32(static_cast<std::uint32_t>(nt.tensor.rank()));
    for (std::size_t d : nt.tensor.shape()) w.u64(d);
  }
  for (const NamedTensor& nt : params)
    for (double v : nt.tensor.values()) w.f64(v);
  return w.take();
}

PolicyNetwork decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  if (r.bytes(4) != std::string(kCheckpointMagic, 4)) throw ConfigError("not a checkpoint (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion)
    throw ConfigError("unsupported checkpoint version " + std::to_string(version));
  const NetConfig config = decode_config(r.bytes(r.u32()));
  const std::uint32_t count = r.u32();
  TensorList params;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = r.bytes(r.u32());
    const std::uint32_t rank = r.u32();
    Shape shape(rank);
    for (auto& d : shape) d = r.u64();
    params.push_back({std::move(name), Tensor(std::move(shape))});
  }
  for (NamedTensor& nt : params)
    for (double& v : nt.tensor.span()) v = r.f64();
  if (!r.at_end()) throw ConfigError("trailing bytes after checkpoint payload");
  return PolicyNetwork(config, std::move(params));
}

void save_checkpoint(const PolicyNetwork& net, const std::string& path) {
  const std::vector<std::uint8_t> bytes = encode_checkpoint(net);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to '" + path + "'");
}

PolicyNetwork load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace svrl
