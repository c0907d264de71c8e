// Copyright 2026 The frida-doa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wav.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace frida {

namespace {

std::uint32_t rd_u32(const unsigned char* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t rd_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

MultichannelSignal load_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("wav: cannot open file: " + path);
  std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  auto fail = [&](const std::string& why) -> IoError {
    return IoError("wav: " + why + ": " + path);
  };
  if (data.size() < 44 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
      std::memcmp(data.data() + 8, "WAVE", 4) != 0)
    throw fail("not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  const unsigned char* pcm = nullptr;
  std::size_t pcm_len = 0;

  std::size_t off = 12;
  while (off + 8 <= data.size()) {
    const char* id = reinterpret_cast<const char*>(data.data() + off);
    const std::uint32_t len = rd_u32(data.data() + off + 4);
    if (off + 8 + len > data.size()) throw fail("truncated chunk");
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (len < 16) throw fail("short fmt chunk");
      const unsigned char* f = data.data() + off + 8;
      format = rd_u16(f);
      channels = rd_u16(f + 2);
      sample_rate = rd_u32(f + 4);
      bits = rd_u16(f + 14);
    } else if (std::memcmp(id, "data", 4) == 0) {
      pcm = data.data() + off + 8;
      pcm_len = len;
    }
    off += 8 + len + (len % 2);  // chunks are word-aligned
  }
  if (!pcm) throw fail("missing data chunk");
  if (channels == 0 || sample_rate == 0) throw fail("missing fmt chunk");
  const bool pcm16 = (format == 1 && bits == 16);
  const bool f32 = (format == 3 && bits == 32);
  if (!pcm16 && !f32) throw fail("unsupported sample format (need 16-bit PCM or float32)");

  const std::size_t bytes_per = pcm16 ? 2 : 4;
  const std::size_t frames = pcm_len / (bytes_per * channels);
  MultichannelSignal sig;
  sig.sample_rate = sample_rate;
  sig.channels.assign(channels, std::vector<double>(frames));
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::uint16_t c = 0; c < channels; ++c) {
      const unsigned char* p = pcm + (t * channels + c) * bytes_per;
      if (pcm16) {
        const std::int16_t v = static_cast<std::int16_t>(rd_u16(p));
        sig.channels[c][t] = v / 32768.0;
      } else {
        float v;
        std::uint32_t u = rd_u32(p);
        std::memcpy(&v, &u, 4);
        sig.channels[c][t] = v;
      }
    }
  }
  return sig;
}

void save_wav(const std::string& path, const MultichannelSignal& sig) {
  const int channels = sig.num_channels();
  const std::int64_t frames = sig.num_samples();
  if (channels == 0 || frames == 0) throw std::invalid_argument("wav: empty signal");

  double peak = 1.0;
  for (const auto& ch : sig.channels)
    for (double v : ch) peak = std::max(peak, std::abs(v));

  std::vector<unsigned char> out;
  out.reserve(44 + static_cast<std::size_t>(frames) * channels * 2);
  auto w32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
  };
  auto w16 = [&](std::uint16_t v) {
    out.push_back(v & 0xff);
    out.push_back((v >> 8) & 0xff);
  };
  const std::uint32_t data_len = static_cast<std::uint32_t>(frames * channels * 2);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  w32(36 + data_len);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  w32(16);
  w16(1);
  w16(static_cast<std::uint16_t>(channels));
  w32(static_cast<std::uint32_t>(sig.sample_rate));
  w32(static_cast<std::uint32_t>(sig.sample_rate) * channels * 2);
  w16(static_cast<std::uint16_t>(channels * 2));
  w16(16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  w32(data_len);
  for (std::int64_t t = 0; t < frames; ++t)
    for (int c = 0; c < channels; ++c) {
      const double v = sig.channels[c][t] / peak;
      const int s = static_cast<int>(std::lround(v * 32767.0));
      w16(static_cast<std::uint16_t>(static_cast<std::int16_t>(s)));
    }

  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("wav: cannot write file: " + path);
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
}

}  // namespace frida
