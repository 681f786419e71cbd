#ifndef CORNERFEM_COMMON_UTIL_HPP
#define CORNERFEM_COMMON_UTIL_HPP

#include <Eigen/Dense>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cornerfem {

using Vec2 = Eigen::Vector2d;

/// Invalid input: bad config, malformed file, violated precondition.
/// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: singular system, non-coercive operator, solver
/// breakdown. The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Global worker count for element loops (set once by the CLI / tests).
int num_threads();
void set_num_threads(int n);

/// Runs fn(begin, end) over a partition of [0, n). Each chunk gets its own
/// slot index so results can be merged in deterministic order afterwards.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t chunk, std::size_t begin, std::size_t end)>& fn,
                     std::size_t* n_chunks_out = nullptr);

/// Deterministic 17-significant-digit formatting used by all text outputs.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace cornerfem

#endif
