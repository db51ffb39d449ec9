#include "hedmatch/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "hedmatch/error.hpp"
#include "hedmatch/matrix.hpp"

namespace hedmatch {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidMap: return "invalid-map";
    case ErrorKind::kLengthMismatch: return "length-mismatch";
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ErrorKind::kMissingTable: return "missing-table";
    case ErrorKind::kUnsupported: return "unsupported";
    case ErrorKind::kSingularPoint: return "singular-point";
    case ErrorKind::kNonFinite: return "non-finite";
    case ErrorKind::kRationalMass: return "rational-mass";
    case ErrorKind::kUnbalanced: return "unbalanced";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kParse: return "parse";
  }
  return "unknown";
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) {
      throw Error(ErrorKind::kLengthMismatch, "ragged matrix rows");
    }
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

unsigned configured_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("HEDMATCH_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  try {
    long requested = std::stol(env);
    if (requested <= 0) return hw;
    return static_cast<unsigned>(requested);
  } catch (const std::exception&) {
    return hw;
  }
}

void parallel_for(std::size_t n, std::size_t cost_hint,
                  const std::function<void(std::size_t)>& body) {
  constexpr std::size_t kSerialWork = 1 << 15;
  unsigned workers = configured_threads();
  if (workers <= 1 || n < 2 || n * std::max<std::size_t>(cost_hint, 1) < kSerialWork) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace hedmatch
