#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sgir {

// Error taxonomy used across the library. Everything derives from Error so
// callers can catch one type at the CLI boundary.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ParameterError : public Error {
public:
  explicit ParameterError(const std::string& msg) : Error(msg) {}
};

class CapacityError : public Error {
public:
  explicit CapacityError(const std::string& msg) : Error(msg) {}
};

// Eigensolver failure; carries the residuals of the non-converged pairs.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& msg, std::vector<double> residuals)
      : Error(msg), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const { return residuals_; }

private:
  std::vector<double> residuals_;
};

// FNV-1a, used for provenance hashes and seed fan-out.
constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

inline std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a(std::uint64_t h, double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  __builtin_memcpy(&bits, &v, 8);
  return fnv1a(h, bits);
}

// Mixes a master seed with cell coordinates so that adding a coordinate
// never perturbs sibling cells.
template <typename... Parts>
std::uint64_t derive_seed(std::uint64_t master, const Parts&... parts) {
  std::uint64_t h = fnv1a(kFnvOffset, master);
  ((h = fnv1a(h, parts)), ...);
  return h;
}

// Bit i of x is the value of qubit/vertex i; rendered with qubit 0 leftmost.
inline std::string to_bitstring(std::uint64_t x, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if ((x >> i) & 1) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

inline std::uint64_t from_bitstring(std::string_view s) {
  if (s.size() > 63) throw ParameterError("bitstring longer than 63 bits");
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      x |= (1ull << i);
    else if (s[i] != '0')
      throw ParameterError("bitstring must contain only 0/1: '" + std::string(s) + "'");
  }
  return x;
}

// Shortest round-trip decimal form, locale independent.
std::string format_double(double v);

}  // namespace sgir
