#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace modet {

enum class errc {
  non_square,
  negative_entry,
  nonzero_diagonal,
  non_finite,
  asymmetry_beyond_tolerance,
  length_mismatch,
  invalid_p,
  empty_input,
  negative_mass,
  vertex_count_mismatch,
  metric_kind_mismatch,
  degenerate_input,
  no_positive_eigenvalues,
  size_mismatch,
  invalid_k,
  too_few_observations,
  unsupported_family,
  invalid_probability,
  beta_density_overflow,
  pool_too_small,
  single_class,
  invalid_argument,
  parse_error,
  io_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::non_square: return "NonSquare";
    case errc::negative_entry: return "NegativeEntry";
    case errc::nonzero_diagonal: return "NonZeroDiagonal";
    case errc::non_finite: return "NonFinite";
    case errc::asymmetry_beyond_tolerance: return "AsymmetryBeyondTolerance";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::invalid_p: return "InvalidP";
    case errc::empty_input: return "EmptyInput";
    case errc::negative_mass: return "NegativeMass";
    case errc::vertex_count_mismatch: return "VertexCountMismatch";
    case errc::metric_kind_mismatch: return "MetricKindMismatch";
    case errc::degenerate_input: return "DegenerateInput";
    case errc::no_positive_eigenvalues: return "NoPositiveEigenvalues";
    case errc::size_mismatch: return "SizeMismatch";
    case errc::invalid_k: return "InvalidK";
    case errc::too_few_observations: return "TooFewObservations";
    case errc::unsupported_family: return "UnsupportedFamily";
    case errc::invalid_probability: return "InvalidProbability";
    case errc::beta_density_overflow: return "BetaDensityOverflow";
    case errc::pool_too_small: return "PoolTooSmall";
    case errc::single_class: return "SingleClass";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::parse_error: return "ParseError";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, errc code, const std::string& message) {
  if (!condition) fail(code, message);
}

/// Shortest decimal representation that round-trips back to the same double.
inline std::string format_double(double value) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline bool try_parse_double(std::string_view text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc{} && res.ptr == end;
}

inline double parse_double(std::string_view text, const std::string& context) {
  double v = 0.0;
  if (!try_parse_double(text, v))
    fail(errc::parse_error, context + ": cannot parse '" + std::string(text) + "' as a number");
  return v;
}

/// Runs fn(begin, end) over a block partition of [0, count). Each index is
/// handled exactly once, so output is schedule-independent as long as fn
/// writes to disjoint slots.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (count == 0) return;
  if (threads <= 1 || count == 1) {
    fn(std::size_t{0}, count);
    return;
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(count, static_cast<std::size_t>(t) * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace modet
