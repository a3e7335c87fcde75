/// @file rng.hpp
/// @brief Deterministic, seedable random streams (PCG64 XSL-RR 128/64).
///
/// Every stochastic component draws from an RngStream identified by
/// (seed, stream_id). Identical identifiers give identical draw sequences
/// on every run and thread count; distinct stream_ids select distinct
/// PCG increments, i.e. statistically independent sequences. Parallel
/// ensembles derive one substream per realization from
/// (master seed, realization index), so results never depend on
/// scheduling order.
#pragma once

#include <array>
#include <cstdint>

namespace turbcloud {

class RngStream {
public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Fresh stream with the same master seed; the only sharing mechanism.
  RngStream substream(std::uint64_t new_stream_id) const {
    return RngStream(seed_, new_stream_id);
  }

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53 random bits.
  double uniform();

  /// Gaussian variate via Box-Muller (exact transform, no rejection, so
  /// draw counts per pair of calls are fixed and streams stay aligned).
  /// std == 0 returns exactly `mean`; std < 0 is an invalid parameter.
  double normal(double mean, double std);

  /// Unit vector, isotropic on the (d-1)-sphere; d = 1 gives +-1 with
  /// equal probability. Components beyond d are zeroed.
  std::array<double, 3> uniform_unit_vector(int dim);

private:
  unsigned __int128 state_;
  unsigned __int128 inc_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer; used to turn (seed, stream_id) into PCG init
/// material and anywhere a cheap stateless 64-bit mix is needed.
std::uint64_t mix64(std::uint64_t x);

} // namespace turbcloud
