// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef RNSE_WAVE_IO_HPP_
#define RNSE_WAVE_IO_HPP_

#include <filesystem>

#include "rnse/signal.hpp"

namespace rnse {

// RIFF/WAVE, PCM format code 1, 16 bit, mono, little endian.
// Samples map as q = round(32767 * clamp(x, -1, 1)) on write and
// x = q / 32767 on read, so a write/read round trip stays within half a
// quantization step.
Waveform read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const Waveform& wave);

}  // namespace rnse

#endif  // RNSE_WAVE_IO_HPP_
