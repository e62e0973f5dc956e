// Copyright 2026 The asrprobe Authors
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

#pragma once

#include <string>

#include "core/waveform.hpp"

namespace asrprobe {

/// Reads a RIFF/WAVE file holding mono 16-bit PCM or 32-bit IEEE float samples.
/// PCM is scaled by 1/32768 into [-1, 1). Multi-channel files are rejected.
Waveform ReadWav(const std::string& path, const std::string& id = {});

enum class WavEncoding { kPcm16, kFloat32 };

void WriteWav(const std::string& path, const Waveform& x,
              WavEncoding encoding = WavEncoding::kFloat32);

}  // namespace asrprobe
