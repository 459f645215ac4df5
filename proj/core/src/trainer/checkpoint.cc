// core/src/trainer/checkpoint.cc

// Copyright 2026  srak authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "srak/trainer/checkpoint.h"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "srak/common/error.h"

namespace srak {
namespace trainer {

namespace {

const char kMagic[4] = {'S', 'R', 'A', 'K'};

void write_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  os.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  os.write(reinterpret_cast<const char*>(b), 8);
}

void write_f32(std::ostream& os, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  write_u32(os, bits);
}

void write_string(std::ostream& os, const std::string& s) {
  write_u32(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void read_exact(std::istream& is, char* dst, std::size_t n, const std::string& path) {
  is.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(is.gcount()) != n)
    throw IoError("truncated checkpoint: " + path);
}

std::uint32_t read_u32(std::istream& is, const std::string& path) {
  unsigned char b[4];
  read_exact(is, reinterpret_cast<char*>(b), 4, path);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t read_u64(std::istream& is, const std::string& path) {
  unsigned char b[8];
  read_exact(is, reinterpret_cast<char*>(b), 8, path);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

float read_f32(std::istream& is, const std::string& path) {
  std::uint32_t bits = read_u32(is, path);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

std::string read_string(std::istream& is, const std::string& path, std::size_t max_len) {
  std::uint32_t n = read_u32(is, path);
  if (n > max_len) throw ValidationError("corrupt checkpoint string length: " + path);
  std::string s(n, '\0');
  if (n > 0) read_exact(is, s.data(), n, path);
  return s;
}

grad::Tensor buffer_tensor(const std::vector<float>& buf) {
  return grad::Tensor::from_vector({static_cast<std::int64_t>(buf.size())}, buf);
}

std::map<std::string, grad::Tensor> tensor_map(const Checkpoint& ckpt) {
  std::map<std::string, grad::Tensor> m;
  for (const auto& [name, t] : ckpt.tensors) {
    if (!m.emplace(name, t).second)
      throw ValidationError("duplicate tensor in checkpoint: " + name);
  }
  return m;
}

void copy_param(std::map<std::string, grad::Tensor>& m, const std::string& name,
                grad::Tensor& dst) {
  auto it = m.find(name);
  if (it == m.end()) throw ValidationError("checkpoint missing tensor: " + name);
  if (it->second.shape() != dst.shape()) {
    std::ostringstream os;
    os << "checkpoint tensor shape mismatch for " << name;
    throw ValidationError(os.str());
  }
  dst.data_vector() = it->second.data_vector();
  m.erase(it);
}

void copy_buffer(std::map<std::string, grad::Tensor>& m, const std::string& name,
                 std::vector<float>* dst) {
  auto it = m.find(name);
  if (it == m.end()) throw ValidationError("checkpoint missing tensor: " + name);
  if (it->second.numel() != static_cast<std::int64_t>(dst->size()))
    throw ValidationError("checkpoint buffer size mismatch for " + name);
  *dst = it->second.data_vector();
  m.erase(it);
}

void restore_named(const Checkpoint& ckpt,
                   std::vector<std::pair<std::string, grad::Tensor>> params,
                   std::vector<std::pair<std::string, std::vector<float>*>> buffers) {
  auto m = tensor_map(ckpt);
  for (auto& [name, t] : params) copy_param(m, name, t);
  for (auto& [name, buf] : buffers) copy_buffer(m, name, buf);
  if (!m.empty()) throw ValidationError("unexpected tensor in checkpoint: " + m.begin()->first);
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open checkpoint for writing: " + path);
  os.write(kMagic, 4);
  write_u32(os, kCheckpointVersion);
  write_string(os, ckpt.kind);
  write_u32(os, static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const auto& [name, t] : ckpt.tensors) {
    write_string(os, name);
    write_u32(os, static_cast<std::uint32_t>(t.rank()));
    for (int i = 0; i < t.rank(); ++i) write_u64(os, static_cast<std::uint64_t>(t.dim(i)));
    for (float v : t.data_vector()) write_f32(os, v);
  }
  std::string meta;
  for (const auto& [k, v] : ckpt.metadata) meta += k + "=" + v + "\n";
  write_string(os, meta);
  os.flush();
  if (!os) throw IoError("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path, const std::string& expect_kind) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint: " + path);
  char magic[4];
  read_exact(is, magic, 4, path);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw ValidationError("bad checkpoint magic: " + path);
  std::uint32_t version = read_u32(is, path);
  if (version != kCheckpointVersion) {
    std::ostringstream os;
    os << "unsupported checkpoint version " << version << ": " << path;
    throw ValidationError(os.str());
  }
  Checkpoint ckpt;
  ckpt.kind = read_string(is, path, 256);
  if (!expect_kind.empty() && ckpt.kind != expect_kind)
    throw ValidationError("checkpoint kind is '" + ckpt.kind + "', expected '" + expect_kind +
                          "': " + path);
  std::uint32_t count = read_u32(is, path);
  if (count > 100000) throw ValidationError("corrupt checkpoint tensor count: " + path);
  ckpt.tensors.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = read_string(is, path, 4096);
    std::uint32_t rank = read_u32(is, path);
    if (rank > 8) throw ValidationError("corrupt checkpoint tensor rank: " + path);
    std::vector<std::int64_t> shape(rank);
    std::int64_t numel = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      std::uint64_t dim = read_u64(is, path);
      if (dim == 0 || dim > (1ULL << 32))
        throw ValidationError("corrupt checkpoint tensor dim: " + path);
      shape[d] = static_cast<std::int64_t>(dim);
      numel *= shape[d];
    }
    if (numel > (1LL << 28)) throw ValidationError("corrupt checkpoint tensor size: " + path);
    std::vector<float> data(static_cast<std::size_t>(numel));
    for (auto& v : data) v = read_f32(is, path);
    ckpt.tensors.emplace_back(name, grad::Tensor::from_vector(std::move(shape), std::move(data)));
  }
  std::string meta = read_string(is, path, 1 << 20);
  std::istringstream ms(meta);
  std::string line;
  while (std::getline(ms, line)) {
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("malformed checkpoint metadata line: " + line);
    ckpt.metadata[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return ckpt;
}

Checkpoint attacker_to_checkpoint(models::AttackerNet& net) {
  Checkpoint ckpt;
  ckpt.kind = "attacker";
  ckpt.tensors = models::attacker_named_parameters(net);
  for (auto& [name, buf] : models::attacker_named_buffers(net))
    ckpt.tensors.emplace_back(name, buffer_tensor(*buf));
  return ckpt;
}

models::AttackerNet attacker_from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.kind != "attacker")
    throw ValidationError("checkpoint kind is '" + ckpt.kind + "', expected 'attacker'");
  models::AttackerNet net = models::attacker_init(0);
  restore_named(ckpt, models::attacker_named_parameters(net),
                models::attacker_named_buffers(net));
  return net;
}

Checkpoint speaker_to_checkpoint(models::SpeakerNet& net) {
  Checkpoint ckpt;
  ckpt.kind = "speaker";
  ckpt.tensors = models::speaker_named_parameters(net);
  for (auto& [name, buf] : models::speaker_named_buffers(net))
    ckpt.tensors.emplace_back(name, buffer_tensor(*buf));
  ckpt.metadata["num_speakers"] = std::to_string(net.num_speakers);
  return ckpt;
}

models::SpeakerNet speaker_from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.kind != "speaker")
    throw ValidationError("checkpoint kind is '" + ckpt.kind + "', expected 'speaker'");
  int num_speakers = 0;
  for (const auto& [name, t] : ckpt.tensors)
    if (name == "fc2.weight" && t.rank() == 2) num_speakers = static_cast<int>(t.dim(0));
  if (num_speakers < 2) throw ValidationError("speaker checkpoint lacks a valid fc2.weight");
  models::SpeakerNet net = models::speaker_init(0, num_speakers);
  restore_named(ckpt, models::speaker_named_parameters(net),
                models::speaker_named_buffers(net));
  return net;
}

Checkpoint phoneme_to_checkpoint(models::PhonemeNet& net) {
  Checkpoint ckpt;
  ckpt.kind = "phoneme";
  ckpt.tensors = models::phoneme_named_parameters(net);
  for (auto& [name, buf] : models::phoneme_named_buffers(net))
    ckpt.tensors.emplace_back(name, buffer_tensor(*buf));
  ckpt.metadata["num_phonemes"] = std::to_string(net.num_phonemes);
  return ckpt;
}

models::PhonemeNet phoneme_from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.kind != "phoneme")
    throw ValidationError("checkpoint kind is '" + ckpt.kind + "', expected 'phoneme'");
  int num_phonemes = 0;
  for (const auto& [name, t] : ckpt.tensors)
    if (name == "fc2.weight" && t.rank() == 2) num_phonemes = static_cast<int>(t.dim(0));
  if (num_phonemes < 2) throw ValidationError("phoneme checkpoint lacks a valid fc2.weight");
  models::PhonemeNet net = models::phoneme_init(0, num_phonemes);
  restore_named(ckpt, models::phoneme_named_parameters(net),
                models::phoneme_named_buffers(net));
  return net;
}

std::uint64_t parameter_hash(const std::vector<std::pair<std::string, grad::Tensor>>& tensors) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const unsigned char* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  for (const auto& [name, t] : tensors) {
    mix(reinterpret_cast<const unsigned char*>(name.data()), name.size());
    for (float v : t.data_vector()) {
      std::uint32_t bits;
      std::memcpy(&bits, &v, 4);
      unsigned char b[4];
      for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
      mix(b, 4);
    }
  }
  return h;
}

}  // namespace trainer
}  // namespace srak
