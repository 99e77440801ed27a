#include "coughdx/audio/wav.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "coughdx/core/error.hpp"

namespace coughdx {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint32_t>(b[off]) |
         (static_cast<std::uint32_t>(b[off + 1]) << 8) |
         (static_cast<std::uint32_t>(b[off + 2]) << 16) |
         (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint16_t>(static_cast<std::uint16_t>(b[off]) |
                                    (static_cast<std::uint16_t>(b[off + 1]) << 8));
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t off, const char* tag) {
  return std::memcmp(b.data() + off, tag, 4) == 0;
}

double decode_sample(const std::uint8_t* p, std::uint16_t format,
                     std::uint16_t bits) {
  if (format == kFormatFloat) {
    float f;
    std::memcpy(&f, p, 4);
    return static_cast<double>(f);
  }
  switch (bits) {
    case 16: {
      std::int16_t s;
      std::memcpy(&s, p, 2);
      return static_cast<double>(s) / 32768.0;
    }
    case 24: {
      std::int32_t s = static_cast<std::int32_t>(p[0]) |
                       (static_cast<std::int32_t>(p[1]) << 8) |
                       (static_cast<std::int32_t>(static_cast<std::int8_t>(p[2]))
                        << 16);
      return static_cast<double>(s) / 8388608.0;
    }
    default: {  // 32
      std::int32_t s;
      std::memcpy(&s, p, 4);
      return static_cast<double>(s) / 2147483648.0;
    }
  }
}

}  // namespace

AudioClip decode_wav(std::span<const std::uint8_t> bytes) {
  require(bytes.size() >= 12, ErrorCode::decode, "file too short for RIFF header");
  require(tag_is(bytes, 0, "RIFF") && tag_is(bytes, 8, "WAVE"), ErrorCode::decode,
          "not a RIFF/WAVE container");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  bool have_fmt = false;
  std::size_t data_off = 0, data_len = 0;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t chunk_size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    require(body + chunk_size <= bytes.size(), ErrorCode::decode,
            "truncated chunk");
    if (tag_is(bytes, pos, "fmt ")) {
      require(chunk_size >= 16, ErrorCode::decode, "fmt chunk too short");
      format = read_u16(bytes, body);
      channels = read_u16(bytes, body + 2);
      sample_rate = read_u32(bytes, body + 4);
      bits = read_u16(bytes, body + 14);
      if (format == kFormatExtensible) {
        // Actual format code is the first word of the SubFormat GUID.
        require(chunk_size >= 40, ErrorCode::decode, "extensible fmt too short");
        format = read_u16(bytes, body + 24);
      }
      have_fmt = true;
    } else if (tag_is(bytes, pos, "data")) {
      data_off = body;
      data_len = chunk_size;
      have_data = true;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  require(have_fmt, ErrorCode::decode, "missing fmt chunk");
  require(have_data, ErrorCode::decode, "missing data chunk");
  require(sample_rate > 0, ErrorCode::decode, "sample rate is zero");
  require(channels == 1 || channels == 2, ErrorCode::unsupported,
          "only mono and stereo are supported");

  if (format == kFormatPcm) {
    require(bits == 16 || bits == 24 || bits == 32, ErrorCode::unsupported,
            "unsupported PCM bit depth");
  } else if (format == kFormatFloat) {
    require(bits == 32, ErrorCode::unsupported, "only 32-bit float supported");
  } else {
    raise(ErrorCode::unsupported, "unsupported codec");
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  require(data_len % frame_bytes == 0, ErrorCode::decode,
          "data chunk size not a multiple of the frame size");
  const std::size_t n_frames = data_len / frame_bytes;
  require(n_frames > 0, ErrorCode::empty_audio, "zero-length payload");

  AudioClip clip;
  clip.sample_rate = static_cast<int>(sample_rate);
  clip.samples.resize(n_frames);
  const std::uint8_t* p = bytes.data() + data_off;
  for (std::size_t i = 0; i < n_frames; ++i) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < channels; ++c) {
      acc += decode_sample(p + i * frame_bytes + c * bytes_per_sample, format, bits);
    }
    double s = acc / channels;
    require(std::isfinite(s), ErrorCode::invalid_signal,
            "non-finite sample in float data");
    if (s > 1.0) s = 1.0;
    if (s < -1.0) s = -1.0;
    clip.samples[i] = s;
  }
  return clip;
}

AudioClip load_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::io, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_wav(bytes);
}

}  // namespace coughdx
