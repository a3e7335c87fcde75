#include "turbcloud/rng.hpp"

#include <cmath>

#include "turbcloud/errors.hpp"

namespace turbcloud {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// PCG64 XSL-RR 128/64 multiplier (O'Neill).
constexpr unsigned __int128 kPcgMult =
    (static_cast<unsigned __int128>(2549297995355413924ULL) << 64) |
    4865540595714422341ULL;

} // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  // 128-bit init state and increment from four independent mixes.
  const std::uint64_t a = mix64(seed);
  const std::uint64_t b = mix64(seed ^ 0xda3e39cb94b95bdbULL);
  const std::uint64_t c = mix64(stream_id + 0x6a09e667f3bcc909ULL);
  const std::uint64_t d = mix64(stream_id ^ mix64(seed + 0xbb67ae8584caa73bULL));
  const unsigned __int128 initstate =
      (static_cast<unsigned __int128>(a) << 64) | b;
  const unsigned __int128 initseq =
      (static_cast<unsigned __int128>(c) << 64) | d;
  // Standard PCG seeding: odd increment, one warm-up step around the
  // state injection.
  inc_ = (initseq << 1) | 1;
  state_ = 0;
  next_u64();
  state_ += initstate;
  next_u64();
}

std::uint64_t RngStream::next_u64() {
  state_ = state_ * kPcgMult + inc_;
  const std::uint64_t rot = static_cast<std::uint64_t>(state_ >> 122);
  const std::uint64_t xored =
      static_cast<std::uint64_t>(state_ >> 64) ^ static_cast<std::uint64_t>(state_);
  return (xored >> rot) | (xored << ((-rot) & 63));
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal(double mean, double std) {
  if (std < 0.0) {
    throw InvalidParameter("normal(): std must be >= 0, got " +
                           std::to_string(std));
  }
  double z;
  if (has_spare_) {
    z = spare_normal_;
    has_spare_ = false;
  } else {
    // u1 in (0,1] so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = kTwoPi * u2;
    z = r * std::cos(theta);
    spare_normal_ = r * std::sin(theta);
    has_spare_ = true;
  }
  return mean + std * z;
}

std::array<double, 3> RngStream::uniform_unit_vector(int dim) {
  std::array<double, 3> v{0.0, 0.0, 0.0};
  switch (dim) {
    case 1:
      v[0] = (uniform() < 0.5) ? -1.0 : 1.0;
      break;
    case 2: {
      const double theta = kTwoPi * uniform();
      v[0] = std::cos(theta);
      v[1] = std::sin(theta);
      break;
    }
    case 3: {
      // Archimedes: z uniform on [-1,1), azimuth uniform.
      const double z = 2.0 * uniform() - 1.0;
      const double theta = kTwoPi * uniform();
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      v[0] = rho * std::cos(theta);
      v[1] = rho * std::sin(theta);
      v[2] = z;
      break;
    }
    default:
      throw UnsupportedDimension("uniform_unit_vector(): dim must be 1, 2 or 3, got " +
                                 std::to_string(dim));
  }
  return v;
}

} // namespace turbcloud
