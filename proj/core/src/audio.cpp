#include "lav/audio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>

#include "byte_io.hpp"
#include "lav/error.hpp"

namespace lav {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

FmtChunk parse_fmt(detail::ByteReader chunk, std::uint32_t size) {
  if (size < 16) throw Error(Errc::MalformedContainer, "fmt chunk shorter than 16 bytes");
  FmtChunk fmt;
  fmt.format = chunk.u16();
  fmt.channels = chunk.u16();
  fmt.rate = chunk.u32();
  chunk.skip(4);  // byte rate
  fmt.block_align = chunk.u16();
  fmt.bits = chunk.u16();
  if (fmt.format == kFormatExtensible) {
    if (size < 40) throw Error(Errc::MalformedContainer, "extensible fmt chunk shorter than 40 bytes");
    chunk.skip(8);  // cbSize, valid bits, channel mask
    fmt.format = chunk.u16();  // leading two bytes of the subformat GUID
  }
  return fmt;
}

void validate(const FmtChunk& fmt) {
  if (fmt.channels == 0 || fmt.rate == 0)
    throw Error(Errc::MalformedContainer, "zero channels or sample rate");
  const bool pcm16 = fmt.format == kFormatPcm && fmt.bits == 16;
  const bool float32 = fmt.format == kFormatFloat && fmt.bits == 32;
  if (!pcm16 && !float32)
    throw Error(Errc::UnsupportedEncoding, "format tag " + std::to_string(fmt.format) + " with " +
                                               std::to_string(fmt.bits) + " bits");
  if (fmt.channels > 2)
    throw Error(Errc::UnsupportedEncoding, std::to_string(fmt.channels) + " channels");
  if (fmt.block_align != fmt.channels * fmt.bits / 8)
    throw Error(Errc::MalformedContainer, "block align inconsistent with channels and bit depth");
  if (fmt.rate > static_cast<std::uint32_t>(std::numeric_limits<int>::max()))
    throw Error(Errc::MalformedContainer, "sample rate out of range");
}

double kaiser(double u, double beta) {
  if (std::abs(u) > 1.0) return 0.0;
  return std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - u * u)) / std::cyl_bessel_i(0.0, beta);
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

class PolyphaseKernel {
 public:
  static constexpr double kBeta = 8.6;
  static constexpr double kZeroCrossings = 64.0;
  static constexpr long long kMaxTabulatedPhases = 4096;

  PolyphaseKernel(long long up, double cutoff)
      : up_(up),
        cutoff_(cutoff),
        half_width_(kZeroCrossings / cutoff),
        reach_(static_cast<long long>(std::ceil(half_width_))) {
    if (up_ <= kMaxTabulatedPhases) {
      table_.resize(static_cast<std::size_t>(up_ * taps()));
      for (long long phase = 0; phase < up_; ++phase)
        fill(phase, std::span<double>(table_).subspan(offset(phase), static_cast<std::size_t>(taps())));
    }
  }

  long long reach() const { return reach_; }
  long long taps() const { return 2 * reach_ + 1; }

  // Tap k (0-based) weighs input sample base - reach + k for the given phase.
  std::span<const double> phase_taps(long long phase, std::vector<double>& scratch) const {
    if (!table_.empty())
      return std::span<const double>(table_).subspan(offset(phase), static_cast<std::size_t>(taps()));
    scratch.resize(static_cast<std::size_t>(taps()));
    fill(phase, scratch);
    return scratch;
  }

 private:
  std::size_t offset(long long phase) const { return static_cast<std::size_t>(phase * taps()); }

  void fill(long long phase, std::span<double> out) const {
    const double frac = static_cast<double>(phase) / static_cast<double>(up_);
    double sum = 0.0;
    for (long long k = 0; k < taps(); ++k) {
      const double tau = static_cast<double>(k - reach_) - frac;
      const double h = cutoff_ * sinc(cutoff_ * tau) * kaiser(tau / half_width_, kBeta);
      out[static_cast<std::size_t>(k)] = h;
      sum += h;
    }
    // Unit DC gain for every phase.
    for (double& h : out) h /= sum;
  }

  long long up_;
  double cutoff_;
  double half_width_;
  long long reach_;
  std::vector<double> table_;
};

}  // namespace

AudioBuffer decode_wav(std::span<const std::uint8_t> bytes) {
  detail::ByteReader in(bytes);
  if (!in.has(12) || !in.tag_is("RIFF")) throw Error(Errc::MalformedContainer, "missing RIFF magic");
  in.skip(4);
  const std::uint32_t riff_size = in.u32();
  if (!in.tag_is("WAVE")) throw Error(Errc::MalformedContainer, "missing WAVE form type");
  in.skip(4);
  if (static_cast<std::uint64_t>(riff_size) + 8 > bytes.size())
    throw Error(Errc::MalformedContainer, "RIFF size exceeds file length");

  std::optional<FmtChunk> fmt;
  std::span<const std::uint8_t> data;
  bool have_data = false;
  while (in.has(8) && !have_data) {
    const bool is_fmt = in.tag_is("fmt ");
    const bool is_data = in.tag_is("data");
    in.skip(4);
    const std::uint32_t size = in.u32();
    if (!in.has(size)) throw Error(Errc::MalformedContainer, "chunk size exceeds file length");
    const auto body = bytes.subspan(in.position(), size);
    if (is_fmt) {
      fmt = parse_fmt(detail::ByteReader(body), size);
    } else if (is_data) {
      if (!fmt) throw Error(Errc::MalformedContainer, "data chunk precedes fmt chunk");
      data = body;
      have_data = true;
    }
    in.skip(size);
    if (size % 2 == 1 && in.has(1)) in.skip(1);
  }
  if (!fmt) throw Error(Errc::MalformedContainer, "no fmt chunk");
  if (!have_data) throw Error(Errc::MalformedContainer, "no data chunk");
  validate(*fmt);
  if (data.size() % fmt->block_align != 0)
    throw Error(Errc::MalformedContainer, "data chunk is not a whole number of frames");
  if (data.empty()) throw Error(Errc::EmptyAudio, "zero frames");

  AudioBuffer out;
  out.sample_rate = static_cast<int>(fmt->rate);
  out.channels = fmt->channels;
  detail::ByteReader samples(data);
  const std::size_t count = data.size() / (fmt->bits / 8);
  out.samples.resize(count);
  if (fmt->format == kFormatPcm) {
    for (auto& s : out.samples) s = static_cast<double>(samples.i16()) / 32768.0;
  } else {
    for (auto& s : out.samples) {
      const float v = samples.f32();
      if (!std::isfinite(v)) throw Error(Errc::MalformedContainer, "non-finite float sample");
      s = std::clamp(static_cast<double>(v), -1.0, 1.0);
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_wav(const AudioBuffer& buf, WavEncoding encoding) {
  if (buf.channels < 1 || buf.channels > 2 || buf.sample_rate <= 0)
    throw Error(Errc::InvalidArgument, "encode_wav needs 1-2 channels and a positive rate");
  const std::uint16_t bits = encoding == WavEncoding::Pcm16 ? 16 : 32;
  const auto channels = static_cast<std::uint16_t>(buf.channels);
  const auto block = static_cast<std::uint16_t>(channels * bits / 8);
  const auto payload = static_cast<std::uint32_t>(buf.samples.size() * (bits / 8));

  detail::ByteWriter out;
  out.reserve(44 + payload);
  out.tag("RIFF");
  out.u32(36 + payload);
  out.tag("WAVE");
  out.tag("fmt ");
  out.u32(16);
  out.u16(encoding == WavEncoding::Pcm16 ? kFormatPcm : kFormatFloat);
  out.u16(channels);
  out.u32(static_cast<std::uint32_t>(buf.sample_rate));
  out.u32(static_cast<std::uint32_t>(buf.sample_rate) * block);
  out.u16(block);
  out.u16(bits);
  out.tag("data");
  out.u32(payload);
  for (double s : buf.samples) {
    const double clipped = std::clamp(s, -1.0, 1.0);
    if (encoding == WavEncoding::Pcm16) {
      const double q = std::clamp(std::round(clipped * 32768.0), -32768.0, 32767.0);
      out.i16(static_cast<std::int16_t>(q));
    } else {
      out.f32(static_cast<float>(clipped));
    }
  }
  return std::move(out).take();
}

AudioBuffer to_mono(const AudioBuffer& buf, int channels) {
  if (channels < 1) throw Error(Errc::InvalidArgument, "channel count must be positive");
  const auto ch = static_cast<std::size_t>(channels);
  if (buf.samples.size() % ch != 0)
    throw Error(Errc::LengthMismatch, std::to_string(buf.samples.size()) +
                                          " samples is not a multiple of " + std::to_string(ch) +
                                          " channels");
  if (ch == 1) {
    AudioBuffer out = buf;
    out.channels = 1;
    return out;
  }
  AudioBuffer out;
  out.sample_rate = buf.sample_rate;
  out.channels = 1;
  out.samples.resize(buf.samples.size() / ch);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < ch; ++c) sum += buf.samples[i * ch + c];
    out.samples[i] = sum / static_cast<double>(ch);
  }
  return out;
}

AudioBuffer resample(const AudioBuffer& buf, int target_rate) {
  if (buf.samples.empty()) throw Error(Errc::EmptyAudio, "cannot resample empty audio");
  if (buf.channels != 1) throw Error(Errc::InvalidArgument, "resample expects mono audio");
  if (target_rate <= 0 || buf.sample_rate <= 0)
    throw Error(Errc::InvalidArgument, "sample rates must be positive");
  if (target_rate == buf.sample_rate) return buf;

  const long long g = std::gcd(target_rate, buf.sample_rate);
  const long long up = target_rate / g;
  const long long down = buf.sample_rate / g;
  const auto in_len = static_cast<long long>(buf.samples.size());
  const long long out_len = (in_len * target_rate + buf.sample_rate / 2) / buf.sample_rate;
  const double cutoff = std::min(1.0, static_cast<double>(target_rate) / buf.sample_rate);
  const PolyphaseKernel kernel(up, cutoff);

  AudioBuffer out;
  out.sample_rate = target_rate;
  out.channels = 1;
  out.samples.resize(static_cast<std::size_t>(out_len));
  std::vector<double> scratch;
  for (long long n = 0; n < out_len; ++n) {
    const long long base = (n * down) / up;
    const long long phase = (n * down) % up;
    const auto taps = kernel.phase_taps(phase, scratch);
    const long long first = base - kernel.reach();
    const long long k_lo = std::max(0LL, -first);
    const long long k_hi = std::min(kernel.taps(), in_len - first);
    double acc = 0.0;
    for (long long k = k_lo; k < k_hi; ++k)
      acc += taps[static_cast<std::size_t>(k)] * buf.samples[static_cast<std::size_t>(first + k)];
    out.samples[static_cast<std::size_t>(n)] = acc;
  }
  return out;
}

AudioBuffer load_canonical(std::span<const std::uint8_t> wav_bytes) {
  return resample(to_mono(decode_wav(wav_bytes)), kCanonicalRate);
}

}  // namespace lav
