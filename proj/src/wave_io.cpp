// Copyright 2026 the rnse authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "rnse/wave_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "rnse/errors.hpp"

namespace rnse {
namespace {

constexpr double kScale = 32767.0;

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  put_u16(out, static_cast<std::uint16_t>(v & 0xffff));
  put_u16(out, static_cast<std::uint16_t>(v >> 16));
}

std::uint16_t get_u16(const std::string& buf, std::size_t pos) {
  return static_cast<std::uint16_t>(
      static_cast<unsigned char>(buf[pos]) |
      (static_cast<unsigned char>(buf[pos + 1]) << 8));
}

std::uint32_t get_u32(const std::string& buf, std::size_t pos) {
  return static_cast<std::uint32_t>(get_u16(buf, pos)) |
         (static_cast<std::uint32_t>(get_u16(buf, pos + 2)) << 16);
}

}  // namespace

Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string buf((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path.string());

  if (buf.size() < 12 || buf.compare(0, 4, "RIFF") != 0 ||
      buf.compare(8, 4, "WAVE") != 0) {
    throw FormatError("not a RIFF/WAVE file: " + path.string());
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t data_pos = 0, data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const std::string id = buf.substr(pos, 4);
    const std::uint32_t len = get_u32(buf, pos + 4);
    const std::size_t body = pos + 8;
    if (body + len > buf.size()) {
      throw FormatError("truncated chunk in " + path.string());
    }
    if (id == "fmt ") {
      if (len < 16) throw FormatError("fmt chunk too short");
      format = get_u16(buf, body);
      channels = get_u16(buf, body + 2);
      rate = get_u32(buf, body + 4);
      bits = get_u16(buf, body + 14);
      have_fmt = true;
    } else if (id == "data") {
      data_pos = body;
      data_len = len;
    }
    pos = body + len + (len % 2);  // chunks are word aligned
  }

  if (!have_fmt || data_pos == 0) {
    throw FormatError("missing fmt or data chunk in " + path.string());
  }
  if (channels != 1) throw MultichannelError("only mono WAV is supported");
  if (format != 1 || bits != 16) {
    throw UnsupportedFormatError("only 16-bit PCM WAV is supported");
  }
  if (rate == 0) throw FormatError("zero sample rate");
  if (data_len % 2 != 0) throw FormatError("odd data chunk length");

  Waveform wave;
  wave.sample_rate = static_cast<int>(rate);
  wave.samples.resize(data_len / 2);
  for (std::size_t i = 0; i < wave.samples.size(); ++i) {
    const std::uint16_t u = get_u16(buf, data_pos + 2 * i);
    const std::int16_t q = static_cast<std::int16_t>(u);
    wave.samples[i] = static_cast<double>(q) / kScale;
  }
  return wave;
}

void write_wav(const std::filesystem::path& path, const Waveform& wave) {
  validate(wave);
  const std::uint32_t data_len =
      static_cast<std::uint32_t>(wave.samples.size() * 2);

  std::string out;
  out.reserve(44 + data_len);
  out.append("RIFF");
  put_u32(out, 36 + data_len);
  out.append("WAVE");
  out.append("fmt ");
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(wave.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(wave.sample_rate) * 2);
  put_u16(out, 2);   // block align
  put_u16(out, 16);  // bits
  out.append("data");
  put_u32(out, data_len);
  for (double s : wave.samples) {
    const double clamped = std::clamp(s, -1.0, 1.0);
    const long q = std::lround(clamped * kScale);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot create " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("write failure on " + path.string());
}

}  // namespace rnse
