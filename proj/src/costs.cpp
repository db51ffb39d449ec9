#include "hedmatch/costs.hpp"

#include <cmath>
#include <string>

#include "hedmatch/error.hpp"

namespace hedmatch {
namespace {

void require_same_dim(const Point& a, const Point& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "source point has dimension " +
                                                   std::to_string(a.size()) +
                                                   ", z point has dimension " +
                                                   std::to_string(b.size()));
  }
}

double squared_distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double norm(const Point& p) {
  double s = 0.0;
  for (double c : p) s += c * c;
  return std::sqrt(s);
}

double distance(const Point& a, const Point& b) { return std::sqrt(squared_distance(a, b)); }

// Central differences along a regular 1D source grid (one-sided at the ends).
CheckReport table_check(const CostSpec& spec, const SpaceGrid& source_grid,
                        const SpaceGrid& z_grid) {
  CheckReport report;
  const Matrix& t = spec.table;
  if (t.rows() != source_grid.size() || t.cols() != z_grid.size()) {
    report.status = CheckStatus::kFail;
    report.message = "table shape does not match the grids";
    return report;
  }
  auto regular = detect_regular_grid(source_grid);
  if (source_grid.dim != 1 || !regular || source_grid.size() < 2) {
    report.status = CheckStatus::kPassWithWarning;
    report.message = "table cost on an irregular or non-1D source grid: injectivity not checkable";
    return report;
  }
  // Walk atoms in coordinate order.
  const std::size_t n = source_grid.size();
  const double h = regular->spacing[0];
  std::vector<Index> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = regular->lookup[k];
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == n ? k : k + 1;
    const double width = h * static_cast<double>(hi - lo);
    std::vector<double> grad(z_grid.size());
    for (Index j = 0; j < z_grid.size(); ++j) {
      grad[j] = spec.sign * (t(order[hi], j) - t(order[lo], j)) / width;
    }
    for (Index a = 0; a < grad.size(); ++a) {
      for (Index b = a + 1; b < grad.size(); ++b) {
        if (std::abs(grad[a] - grad[b]) <= kGradientCollisionTol) {
          report.witnesses.push_back({order[k], a, b});
        }
      }
    }
  }
  if (!report.witnesses.empty()) {
    report.status = CheckStatus::kFail;
    report.message = "finite-difference gradients collide";
  }
  return report;
}

}  // namespace

const char* to_string(CostFamily family) {
  switch (family) {
    case CostFamily::kBilinear: return "bilinear";
    case CostFamily::kScaledQuadratic: return "scaled_quadratic";
    case CostFamily::kPower: return "power";
    case CostFamily::kTable: return "table";
  }
  return "unknown";
}

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "fail";
    case CheckStatus::kPassWithWarning: return "pass-with-warning";
  }
  return "unknown";
}

CostSpec CostSpec::bilinear(int sign) {
  CostSpec s;
  s.family = CostFamily::kBilinear;
  s.sign = sign;
  return s;
}

CostSpec CostSpec::scaled_quadratic(int sign, double alpha) {
  CostSpec s;
  s.family = CostFamily::kScaledQuadratic;
  s.sign = sign;
  s.alpha = alpha;
  return s;
}

CostSpec CostSpec::power(int sign, double alpha) {
  CostSpec s;
  s.family = CostFamily::kPower;
  s.sign = sign;
  s.alpha = alpha;
  return s;
}

CostSpec CostSpec::tabulated(Matrix values) {
  CostSpec s;
  s.family = CostFamily::kTable;
  s.table = std::move(values);
  return s;
}

double eval_cost(const CostSpec& spec, const Point& source, const Point& z) {
  switch (spec.family) {
    case CostFamily::kBilinear: {
      require_same_dim(source, z);
      double dot = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) dot += source[i] * z[i];
      return spec.sign * dot;
    }
    case CostFamily::kScaledQuadratic:
      require_same_dim(source, z);
      return spec.sign * 0.5 * spec.alpha * squared_distance(source, z);
    case CostFamily::kPower:
      require_same_dim(source, z);
      return spec.sign * std::pow(distance(source, z), spec.alpha);
    case CostFamily::kTable:
      throw Error(ErrorKind::kMissingTable,
                  "table costs are indexed by atom, not evaluated at coordinates");
  }
  throw Error(ErrorKind::kUnsupported, "unknown cost family");
}

double eval_cost(const CostSpec& spec, const SpaceGrid& source_grid, Index source,
                 const SpaceGrid& z_grid, Index z) {
  if (spec.family != CostFamily::kTable) {
    return eval_cost(spec, source_grid[source], z_grid[z]);
  }
  if (spec.table.empty() || source >= spec.table.rows() || z >= spec.table.cols()) {
    throw Error(ErrorKind::kMissingTable, "no table entry for atom pair (" +
                                              std::to_string(source) + ", " +
                                              std::to_string(z) + ")");
  }
  return spec.sign * spec.table(source, z);
}

Matrix cost_matrix(const CostSpec& spec, const SpaceGrid& source_grid,
                   const SpaceGrid& z_grid) {
  if (spec.family == CostFamily::kTable &&
      (spec.table.rows() != source_grid.size() || spec.table.cols() != z_grid.size())) {
    throw Error(ErrorKind::kMissingTable,
                "table is " + std::to_string(spec.table.rows()) + "x" +
                    std::to_string(spec.table.cols()) + ", grids need " +
                    std::to_string(source_grid.size()) + "x" + std::to_string(z_grid.size()));
  }
  Matrix m(source_grid.size(), z_grid.size());
  for (Index i = 0; i < source_grid.size(); ++i) {
    for (Index j = 0; j < z_grid.size(); ++j) {
      m(i, j) = eval_cost(spec, source_grid, i, z_grid, j);
    }
  }
  return m;
}

Point eval_cost_gradient_x(const CostSpec& spec, const Point& source, const Point& z) {
  Point g(source.size());
  switch (spec.family) {
    case CostFamily::kBilinear:
      require_same_dim(source, z);
      for (std::size_t i = 0; i < z.size(); ++i) g[i] = spec.sign * z[i];
      return g;
    case CostFamily::kScaledQuadratic:
      require_same_dim(source, z);
      for (std::size_t i = 0; i < z.size(); ++i) g[i] = spec.sign * spec.alpha * (source[i] - z[i]);
      return g;
    case CostFamily::kPower: {
      require_same_dim(source, z);
      const double r = distance(source, z);
      if (r == 0.0) {
        throw Error(ErrorKind::kSingularPoint, "power cost gradient is undefined at x = z");
      }
      const double scale = spec.sign * spec.alpha * std::pow(r, spec.alpha - 2.0);
      for (std::size_t i = 0; i < z.size(); ++i) g[i] = scale * (source[i] - z[i]);
      return g;
    }
    case CostFamily::kTable:
      throw Error(ErrorKind::kUnsupported, "table costs have no analytic gradient");
  }
  throw Error(ErrorKind::kUnsupported, "unknown cost family");
}

CheckReport spence_mirrlees_check(const CostSpec& spec, const SpaceGrid& source_grid,
                                  const SpaceGrid& z_grid) {
  CheckReport report;
  switch (spec.family) {
    case CostFamily::kBilinear:
      report.message = "D_x u = z is injective";
      return report;
    case CostFamily::kScaledQuadratic:
      report.message = "D_x u is affine and injective in z";
      return report;
    case CostFamily::kTable:
      return table_check(spec, source_grid, z_grid);
    case CostFamily::kPower:
      break;
  }

  for (Index i = 0; i < source_grid.size(); ++i) {
    std::vector<Point> grads(z_grid.size());
    std::vector<bool> singular(z_grid.size(), false);
    for (Index j = 0; j < z_grid.size(); ++j) {
      if (distance(source_grid[i], z_grid[j]) == 0.0) {
        singular[j] = true;
        continue;
      }
      grads[j] = eval_cost_gradient_x(spec, source_grid[i], z_grid[j]);
    }
    for (Index a = 0; a < z_grid.size(); ++a) {
      if (singular[a]) continue;
      for (Index b = a + 1; b < z_grid.size(); ++b) {
        if (singular[b]) continue;
        Point diff(grads[a].size());
        for (std::size_t c = 0; c < diff.size(); ++c) diff[c] = grads[a][c] - grads[b][c];
        if (norm(diff) <= kGradientCollisionTol) report.witnesses.push_back({i, a, b});
      }
    }
  }
  const bool bad_exponent = spec.alpha == 0.0 || spec.alpha == 1.0;
  if (bad_exponent || !report.witnesses.empty()) {
    report.status = CheckStatus::kFail;
    report.message = bad_exponent ? "power exponent must differ from 0 and 1"
                                  : "gradients collide between z atoms";
  } else {
    report.message = "no gradient collisions";
  }
  return report;
}

double lipschitz_bound_k(const CostSpec& spec, const SpaceGrid& source_grid,
                         const SpaceGrid& z_grid) {
  if (!spec.analytic()) {
    throw Error(ErrorKind::kUnsupported, "lipschitz bound needs an analytic cost family");
  }
  double k = 0.0;
  for (Index i = 0; i < source_grid.size(); ++i) {
    for (Index j = 0; j < z_grid.size(); ++j) {
      if (spec.family == CostFamily::kPower && distance(source_grid[i], z_grid[j]) == 0.0) {
        continue;
      }
      k = std::max(k, norm(eval_cost_gradient_x(spec, source_grid[i], z_grid[j])));
    }
  }
  return k;
}

}  // namespace hedmatch
