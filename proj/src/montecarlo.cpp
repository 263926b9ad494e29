// Counter-derived random streams, scalar variate generation, and the
// worker scheduling used by the Monte Carlo risk estimator.

#include "wishrisk/montecarlo.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace wishrisk {

namespace {

// 64-bit avalanche mixer (the splitmix64 finalizer): every input bit
// affects every output bit, which is what lets adjacent sample indices
// yield statistically unrelated streams.
std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t kSeedSalt = 0x2545F4914F6CDD1DULL;
constexpr std::uint64_t kWeylStep = 0x9E3779B97F4A7C15ULL;
const double kTwoPi = 2.0 * std::acos(-1.0);

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t sample_index)
    : state_(mix64(mix64(seed ^ kSeedSalt) + sample_index)) {}

std::uint64_t RngStream::next_raw() {
  state_ += kWeylStep;
  return mix64(state_);
}

double RngStream::uniform() {
  // Top 53 bits, shifted into (0, 1]: the +1 keeps 0 out of range so
  // logarithms of uniforms are finite.
  return (static_cast<double>(next_raw() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::normal() {
  if (have_cached_normal_) {
    have_cached_normal_ = false;
    return cached_normal_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform()));
  const double angle = kTwoPi * uniform();
  cached_normal_ = radius * std::sin(angle);
  have_cached_normal_ = true;
  return radius * std::cos(angle);
}

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) {
    throw std::invalid_argument("gamma shape must be positive, got " +
                                std::to_string(shape));
  }
  if (shape < 1.0) {
    // Boost through G(a) = G(a + 1) U^{1/a}.
    const double boost = std::pow(uniform(), 1.0 / shape);
    return boost * gamma(shape + 1.0);
  }
  // Rejection from a cubed shifted normal, with the quartic squeeze
  // accepting the bulk of proposals without a logarithm.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("WISHRISK_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && parsed > 0) {
      return static_cast<int>(std::min<long>(parsed, 1024));
    }
  }
  const unsigned hardware = std::thread::hardware_concurrency();
  return hardware > 0 ? static_cast<int>(hardware) : 1;
}

namespace detail {

void run_indexed_chunks(
    std::int64_t count, int threads,
    const std::function<void(std::int64_t, std::int64_t)>& chunk_body) {
  const int workers =
      static_cast<int>(std::min<std::int64_t>(resolve_thread_count(threads),
                                              std::max<std::int64_t>(count, 1)));
  if (workers <= 1) {
    chunk_body(0, count);
    return;
  }

  // Contiguous chunks; results are indexed by sample, so the split has no
  // effect on values, only on wall time.
  const std::int64_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_lock;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = std::min<std::int64_t>(w * chunk, count);
    const std::int64_t hi = std::min<std::int64_t>(lo + chunk, count);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        chunk_body(lo, hi);
      } catch (...) {
        const std::lock_guard<std::mutex> guard(error_lock);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& worker : pool) worker.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

}  // namespace wishrisk
