#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "fixtures.hpp"

using namespace lav;

namespace {

std::vector<std::uint8_t> fixture(const char* name) {
  return test::read_bytes(std::string(LAV_TEST_DATA_DIR) + "/" + name);
}

// Minimal header builder for malformed-input cases.
std::vector<std::uint8_t> wav_with_fmt(std::uint16_t format, std::uint16_t channels, std::uint16_t bits,
                                       std::uint32_t data_bytes) {
  AudioBuffer buf;
  buf.sample_rate = 16000;
  buf.channels = 1;
  auto bytes = encode_wav(buf);  // 44-byte header, empty payload
  auto put16 = [&](std::size_t at, std::uint16_t v) {
    bytes[at] = static_cast<std::uint8_t>(v);
    bytes[at + 1] = static_cast<std::uint8_t>(v >> 8);
  };
  auto put32 = [&](std::size_t at, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
  };
  put16(20, format);
  put16(22, channels);
  put16(32, static_cast<std::uint16_t>(channels * bits / 8));
  put16(34, bits);
  put32(40, data_bytes);
  put32(4, 36 + data_bytes);
  bytes.resize(44 + data_bytes, 0);
  return bytes;
}

}  // namespace

TEST_CASE("decode_wav reads the hand-built constant fixture") {
  const auto buf = decode_wav(fixture("const_16384_24k_mono.wav"));
  CHECK(buf.sample_rate == 24000);
  CHECK(buf.channels == 1);
  REQUIRE(buf.samples.size() == 24000);
  CHECK(std::all_of(buf.samples.begin(), buf.samples.end(), [](double s) { return s == 0.5; }));
}

TEST_CASE("decode_wav normalizes int16 extremes and keeps stereo interleaved") {
  const auto buf = decode_wav(fixture("stereo_edges_8k.wav"));
  CHECK(buf.sample_rate == 8000);
  CHECK(buf.channels == 2);
  REQUIRE(buf.samples.size() == 6);
  CHECK(buf.samples[0] == -1.0);
  CHECK(buf.samples[1] == 32767.0 / 32768.0);
  CHECK(buf.samples[2] == 0.0);
  CHECK(buf.samples[3] == 0.5);
}

TEST_CASE("single zero sample decodes to zero") {
  AudioBuffer one;
  one.sample_rate = 22050;
  one.samples = {0.0};
  const auto buf = decode_wav(encode_wav(one));
  CHECK(buf.sample_rate == 22050);
  REQUIRE(buf.samples.size() == 1);
  CHECK(buf.samples[0] == 0.0);
}

TEST_CASE("int16 values round-trip exactly through encode/decode") {
  Xoshiro256 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    AudioBuffer buf;
    buf.channels = 1 + trial % 2;
    buf.sample_rate = 8000 + 1000 * trial;
    buf.samples.resize(static_cast<std::size_t>(2 * (1 + rng.next() % 500)));
    for (double& s : buf.samples) {
      const auto v = static_cast<std::int16_t>(static_cast<std::uint16_t>(rng.next()));
      s = v / 32768.0;
    }
    const auto bytes = encode_wav(buf);
    const auto decoded = decode_wav(bytes);
    CHECK(decoded.samples == buf.samples);
    CHECK(decoded.channels == buf.channels);
    CHECK(encode_wav(decoded) == bytes);
  }
}

TEST_CASE("float32 WAV decodes and clips") {
  AudioBuffer buf;
  buf.samples = {0.25, -0.75, 1.0};
  const auto decoded = decode_wav(encode_wav(buf, WavEncoding::Float32));
  CHECK(decoded.samples == buf.samples);

  auto bytes = encode_wav(buf, WavEncoding::Float32);
  const float loud = 1.5f;
  std::memcpy(bytes.data() + 44, &loud, 4);
  CHECK(decode_wav(bytes).samples[0] == 1.0);
}

TEST_CASE("decode_wav error paths") {
  auto code_of = [](const std::vector<std::uint8_t>& bytes) {
    try {
      decode_wav(bytes);
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("expected an error");
    return Errc::InvalidArgument;
  };

  auto good = encode_wav(test::sine(440.0, 0.01, 16000));
  auto bad_magic = good;
  bad_magic[0] = 'X';
  CHECK(code_of(bad_magic) == Errc::MalformedContainer);

  auto truncated = good;
  truncated.resize(100);
  CHECK(code_of(truncated) == Errc::MalformedContainer);

  CHECK(code_of(wav_with_fmt(1, 1, 24, 6)) == Errc::UnsupportedEncoding);
  CHECK(code_of(wav_with_fmt(2, 1, 16, 4)) == Errc::UnsupportedEncoding);  // ADPCM
  CHECK(code_of(wav_with_fmt(1, 3, 16, 12)) == Errc::UnsupportedEncoding);
  CHECK(code_of(wav_with_fmt(1, 1, 16, 0)) == Errc::EmptyAudio);
  CHECK(code_of(wav_with_fmt(1, 2, 16, 6)) == Errc::MalformedContainer);  // partial frame
  CHECK(code_of({}) == Errc::MalformedContainer);
}

TEST_CASE("to_mono") {
  SUBCASE("mono input is bit-identical and idempotent") {
    const auto buf = test::white_noise(0.1, 3);
    const auto once = to_mono(buf, 1);
    CHECK(once.samples == buf.samples);
    CHECK(to_mono(once, 1).samples == once.samples);
  }
  SUBCASE("stereo averaging") {
    AudioBuffer st;
    st.channels = 2;
    st.samples = {0.5, -0.5};
    CHECK(to_mono(st).samples == std::vector<double>{0.0});
    st.samples = {1.0, 0.0, 0.0, 1.0};
    CHECK(to_mono(st).samples == std::vector<double>{0.5, 0.5});
  }
  SUBCASE("length mismatch") {
    AudioBuffer st;
    st.samples = {0.1, 0.2, 0.3};
    CHECK_THROWS_AS(to_mono(st, 2), Error);
  }
}

TEST_CASE("resample identity and length") {
  const auto buf = test::white_noise(0.05, 5);
  CHECK(resample(buf, kCanonicalRate).samples == buf.samples);

  AudioBuffer cd = test::silence(1.0, 44100);
  cd.samples.resize(44101);
  const auto out = resample(cd, 24000);
  CHECK(out.samples.size() == static_cast<std::size_t>(std::llround(44101.0 * 24000 / 44100)));
  CHECK(out.sample_rate == 24000);
}

TEST_CASE("resample preserves DC in the interior") {
  AudioBuffer dc;
  dc.sample_rate = 48000;
  dc.samples.assign(48000, 0.25);
  const auto out = resample(dc, 24000);
  REQUIRE(out.samples.size() == 24000);
  double worst = 0.0;
  for (std::size_t i = 200; i + 200 < out.samples.size(); ++i) worst = std::max(worst, std::abs(out.samples[i] - 0.25));
  CHECK(worst < 1e-3);
}

TEST_CASE("resample 440 Hz 48k -> 24k matches the closed-form sine") {
  const auto in = test::sine(440.0, 1.0, 48000);
  const auto out = resample(in, 24000);
  const auto expected = test::sine(440.0, 1.0, 24000);
  REQUIRE(out.samples.size() == expected.samples.size());
  double worst = 0.0;
  for (std::size_t i = 200; i + 200 < out.samples.size(); ++i)
    worst = std::max(worst, std::abs(out.samples[i] - expected.samples[i]));
  CHECK(worst < 1e-2);

  const auto s_out = stft_magnitude(out);
  const auto s_ref = stft_magnitude(expected);
  const std::size_t t = s_out.frame_count() / 2;
  const auto peak = [&](const Spectrogram& s) {
    const auto row = s.mags.row(t);
    return std::distance(row.begin(), std::max_element(row.begin(), row.end()));
  };
  CHECK(peak(s_out) == peak(s_ref));
}

TEST_CASE("resample upsampling 16k -> 24k keeps a tone") {
  const auto out = resample(test::sine(1000.0, 0.5, 16000), 24000);
  const auto expected = test::sine(1000.0, 0.5, 24000);
  REQUIRE(out.samples.size() == expected.samples.size());
  double worst = 0.0;
  for (std::size_t i = 200; i + 200 < out.samples.size(); ++i)
    worst = std::max(worst, std::abs(out.samples[i] - expected.samples[i]));
  CHECK(worst < 1e-2);
}

TEST_CASE("load_canonical mixes and resamples") {
  AudioBuffer st;
  st.sample_rate = 48000;
  st.channels = 2;
  st.samples.assign(2 * 48000, 0.25);
  const auto canon = load_canonical(encode_wav(st));
  CHECK(canon.sample_rate == kCanonicalRate);
  CHECK(canon.channels == 1);
  CHECK(canon.samples.size() == 24000);
  CHECK(canon.samples[12000] == doctest::Approx(0.25).epsilon(1e-3));
}
