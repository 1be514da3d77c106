#pragma once

#include <cstdint>
#include <limits>

namespace levyreg {

// Counter-based generator: the n-th draw of a stream is a pure function of
// (seed, stream_id, n), so replicas can be evaluated in any order or thread.
class RngStream {
public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on the open interval (0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::uint64_t poisson(double mean);

  // Independent stream derived from this one's key; does not advance it.
  RngStream substream(std::uint64_t tag) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t draws() const { return counter_; }

private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace levyreg
