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

#ifndef FRIDA_WAV_HPP_
#define FRIDA_WAV_HPP_

#include <string>

#include "sim.hpp"

namespace frida {

// Reads a RIFF/WAVE file with 16-bit integer or 32-bit float little-endian
// PCM samples, any channel count. Samples are scaled to [-1, 1] for the
// integer format. Throws IoError on malformed input (message names the path).
MultichannelSignal load_wav(const std::string& path);

// Minimal writer (16-bit PCM), used by tools and tests to round-trip data.
void save_wav(const std::string& path, const MultichannelSignal& sig);

}  // namespace frida

#endif  // FRIDA_WAV_HPP_
