#include "levyreg/rng.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

namespace levyreg {

std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), key_(mix64(mix64(seed) ^ (stream_id * 0xd1b54a32d192ed03ULL))) {}

RngStream::result_type RngStream::operator()() {
  const std::uint64_t n = counter_++;
  return mix64(key_ ^ mix64(n + 0x632be59bd9b4e019ULL));
}

double RngStream::uniform() {
  // 53 random bits, shifted by half an ulp so 0 is never returned.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  boost::random::normal_distribution<double> dist(0.0, 1.0);
  return dist(*this);
}

std::uint64_t RngStream::poisson(double mean) {
  if (mean <= 0.0) {
    return 0;
  }
  boost::random::poisson_distribution<std::uint64_t, double> dist(mean);
  return dist(*this);
}

RngStream RngStream::substream(std::uint64_t tag) const {
  return RngStream(seed_, mix64(stream_id_ ^ mix64(tag + 0x5851f42d4c957f2dULL)));
}

}  // namespace levyreg
