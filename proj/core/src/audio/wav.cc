// core/src/audio/wav.cc

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

#include "srak/audio/wav.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "srak/common/error.h"

namespace srak {
namespace audio {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

void write_u16(std::ostream& os, std::uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
  os.write(b, 2);
}

void write_u32(std::ostream& os, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 4);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

Waveform load_wav(const std::string& path, int expected_rate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open wav file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw ValidationError("not a RIFF/WAVE file: " + path);
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data_ptr = nullptr;
  std::uint32_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t len = read_u32(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + len > bytes.size()) throw ValidationError("truncated wav chunk in " + path);
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (len < 16) throw ValidationError("malformed fmt chunk in " + path);
      const unsigned char* f = bytes.data() + body;
      format = read_u16(f);
      channels = read_u16(f + 2);
      rate = read_u32(f + 4);
      bits = read_u16(f + 14);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data_ptr = bytes.data() + body;
      data_len = len;
      // fmt may legally follow data only in broken writers; require fmt first
      break;
    }
    pos = body + len + (len & 1);  // chunks are word aligned
  }

  if (!have_fmt) throw ValidationError("missing fmt chunk in " + path);
  if (data_ptr == nullptr) throw ValidationError("missing data chunk in " + path);
  if (channels != 1) {
    throw ValidationError("expected mono audio, got " + std::to_string(channels) +
                          " channels: " + path);
  }

  Waveform w;
  w.sample_rate = static_cast<int>(rate);
  if (expected_rate > 0 && w.sample_rate != expected_rate) {
    throw ValidationError("sample rate " + std::to_string(w.sample_rate) + " != required " +
                          std::to_string(expected_rate) + " (resampling unsupported): " + path);
  }

  if (format == kFormatPcm && bits == 16) {
    const std::size_t n = data_len / 2;
    w.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::int16_t s =
          static_cast<std::int16_t>(read_u16(data_ptr + 2 * i));
      w.samples[i] = static_cast<float>(s) / 32768.0f;
    }
  } else if (format == kFormatFloat && bits == 32) {
    const std::size_t n = data_len / 4;
    w.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t u = read_u32(data_ptr + 4 * i);
      float f;
      std::memcpy(&f, &u, 4);
      w.samples[i] = f;
    }
  } else {
    throw ValidationError("unsupported wav encoding (format " + std::to_string(format) +
                          ", " + std::to_string(bits) + " bit): " + path);
  }
  return w;
}

void save_wav(const Waveform& w, const std::string& path, WavEncoding encoding) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);

  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bytes_per_sample = pcm ? 2 : 4;
  const std::uint32_t data_len =
      static_cast<std::uint32_t>(w.samples.size()) * bytes_per_sample;

  out.write("RIFF", 4);
  write_u32(out, 36 + data_len);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, pcm ? kFormatPcm : kFormatFloat);
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<std::uint32_t>(w.sample_rate));
  write_u32(out, static_cast<std::uint32_t>(w.sample_rate) * bytes_per_sample);
  write_u16(out, bytes_per_sample);
  write_u16(out, static_cast<std::uint16_t>(bytes_per_sample * 8));
  out.write("data", 4);
  write_u32(out, data_len);

  for (float s : w.samples) {
    const float c = std::clamp(s, -1.0f, 1.0f);
    if (pcm) {
      const int q = static_cast<int>(std::lrintf(c * 32768.0f));
      const std::int16_t v = static_cast<std::int16_t>(std::clamp(q, -32768, 32767));
      write_u16(out, static_cast<std::uint16_t>(v));
    } else {
      std::uint32_t u;
      std::memcpy(&u, &c, 4);
      write_u32(out, u);
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace audio
}  // namespace srak
