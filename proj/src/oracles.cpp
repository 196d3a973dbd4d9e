#include "sigker/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sigker/errors.hpp"
#include "sigker/tile_series.hpp"

namespace sigker::oracle {
namespace {

void require_depth(int depth) {
  if (depth < 0) throw std::invalid_argument("truncation depth must be >= 0");
}

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

double bessel_series_kernel(double rho, int order) {
  if (order < 0 || order > tile::kMaxOrder)
    throw std::invalid_argument("bessel_series_kernel: order must lie in [0, 64]");
  double term = 1.0;
  double sum = 1.0;
  for (int i = 1; i <= order; ++i) {
    term *= rho / (static_cast<double>(i) * static_cast<double>(i));
    sum += term;
  }
  return sum;
}

double two_tile_closed_form(double d11, double d12, int order) {
  if (order < 0 || order > tile::kMaxOrder)
    throw std::invalid_argument("two_tile_closed_form: order must lie in [0, 64]");
  const auto fact = tile::detail::factorials();
  const int cap = 2 * order;
  double sum = 0.0;
  double pi = 1.0;  // d11^i
  for (int i = 0; i <= cap; ++i) {
    double pj = 1.0;  // d12^j
    for (int j = 0; i + j <= cap; ++j) {
      sum += pi * pj / (fact[i + j] * fact[i] * fact[j]);
      pj *= d12;
    }
    pi *= d11;
  }
  return sum;
}

SignatureTensor SignatureTensor::identity(std::size_t dim, int depth) {
  require_depth(depth);
  SignatureTensor s;
  s.dim = dim;
  s.depth = depth;
  s.levels.resize(static_cast<std::size_t>(depth) + 1);
  s.levels[0] = {1.0};
  for (int m = 1; m <= depth; ++m) s.levels[m].assign(ipow(dim, m), 0.0);
  return s;
}

SignatureTensor SignatureTensor::segment(std::span<const double> increment, int depth) {
  SignatureTensor s = identity(increment.size(), depth);
  for (int m = 1; m <= depth; ++m) {
    const auto& prev = s.levels[m - 1];
    auto& cur = s.levels[m];
    // level m = level_{m-1} (x) increment / m
    const double inv = 1.0 / static_cast<double>(m);
    std::size_t out = 0;
    for (double p : prev)
      for (double a : increment) cur[out++] = p * a * inv;
  }
  return s;
}

void SignatureTensor::concat(const SignatureTensor& other) {
  if (dim != other.dim || depth != other.depth)
    throw std::invalid_argument("signature concat: shape mismatch");
  for (int m = depth; m >= 1; --m) {
    auto& out = levels[m];
    for (int q = 1; q <= m; ++q) {
      const auto& mine = levels[m - q];
      const auto& theirs = other.levels[q];
      const std::size_t block = theirs.size();
      for (std::size_t u = 0; u < mine.size(); ++u) {
        const double lv = mine[u];
        if (lv == 0.0) continue;
        double* dst = out.data() + u * block;
        for (std::size_t t = 0; t < block; ++t) dst[t] += lv * theirs[t];
      }
    }
  }
}

void SignatureTensor::concat_segment(std::span<const double> increment) {
  if (increment.size() != dim)
    throw std::invalid_argument("signature concat: increment dimension mismatch");
  // Powers increment^{x q} / q!, built once.
  std::vector<std::vector<double>> apow(static_cast<std::size_t>(depth) + 1);
  apow[0] = {1.0};
  for (int q = 1; q <= depth; ++q) {
    const auto& prev = apow[q - 1];
    auto& cur = apow[q];
    cur.resize(prev.size() * dim);
    const double inv = 1.0 / static_cast<double>(q);
    std::size_t out = 0;
    for (double p : prev)
      for (double a : increment) cur[out++] = p * a * inv;
  }
  for (int m = depth; m >= 1; --m) {
    auto& out = levels[m];
    for (int q = 1; q <= m; ++q) {
      const auto& mine = levels[m - q];
      const auto& seg = apow[q];
      const std::size_t block = seg.size();
      for (std::size_t u = 0; u < mine.size(); ++u) {
        const double lv = mine[u];
        if (lv == 0.0) continue;
        double* dst = out.data() + u * block;
        for (std::size_t t = 0; t < block; ++t) dst[t] += lv * seg[t];
      }
    }
  }
}

std::size_t SignatureTensor::coefficient_count() const {
  std::size_t total = 0;
  for (const auto& level : levels) total += level.size();
  return total;
}

double signature_inner(const SignatureTensor& a, const SignatureTensor& b) {
  if (a.dim != b.dim) throw std::invalid_argument("signature_inner: dimension mismatch");
  const int depth = std::min(a.depth, b.depth);
  double sum = 0.0;
  for (int m = 0; m <= depth; ++m) {
    const auto& la = a.levels[m];
    const auto& lb = b.levels[m];
    double lvl = 0.0;
    for (std::size_t t = 0; t < la.size(); ++t) lvl += la[t] * lb[t];
    sum += lvl;
  }
  return sum;
}

SignatureTensor path_signature(const TimeSeries& ts, int depth,
                               std::size_t memory_budget_bytes) {
  require_depth(depth);
  std::size_t coeffs = 0;
  for (int m = 0; m <= depth; ++m) {
    coeffs += ipow(ts.dim(), m);
    if (coeffs > memory_budget_bytes / (2 * sizeof(double)))
      throw ResourceBudgetError("signature of depth " + std::to_string(depth) + " in dimension " +
                                std::to_string(ts.dim()) + " exceeds the tensor memory budget");
  }
  SignatureTensor sig = SignatureTensor::identity(ts.dim(), depth);
  if (ts.length() < 2) return sig;
  const auto incs = increments(ts);
  for (std::size_t k = 0; k + 1 < ts.length(); ++k)
    sig.concat_segment({incs.data() + k * ts.dim(), ts.dim()});
  return sig;
}

double truncated_signature_kernel(const TimeSeries& x, const TimeSeries& y, int depth,
                                  std::size_t memory_budget_bytes) {
  if (x.dim() != y.dim())
    throw std::invalid_argument("truncated_signature_kernel: dimension mismatch");
  const SignatureTensor sx = path_signature(x, depth, memory_budget_bytes);
  const SignatureTensor sy = path_signature(y, depth, memory_budget_bytes);
  return signature_inner(sx, sy);
}

namespace {

// Per-tile polynomial storage for the levelwise iteration: tile (i, j) holds
// coefficients of u^a v^b with u along x and v along y, both local to [0,1].
struct TilePolys {
  std::size_t rows, cols;
  int stride;  // depth + 2 coefficients per variable
  std::vector<double> data;

  TilePolys(std::size_t r, std::size_t c, int depth)
      : rows(r), cols(c), stride(depth + 2), data(r * c * stride * stride, 0.0) {}

  double* tile(std::size_t i, std::size_t j) {
    return data.data() + (i * cols + j) * static_cast<std::size_t>(stride) * stride;
  }
  const double* tile(std::size_t i, std::size_t j) const {
    return data.data() + (i * cols + j) * static_cast<std::size_t>(stride) * stride;
  }
  void clear() { std::fill(data.begin(), data.end(), 0.0); }
};

}  // namespace

double truncated_kernel_levelwise(const TimeSeries& x, const TimeSeries& y, int depth) {
  require_depth(depth);
  if (x.dim() != y.dim())
    throw std::invalid_argument("truncated_kernel_levelwise: dimension mismatch");
  if (x.length() < 2 || y.length() < 2)
    return 1.0;  // a single point contributes level 0 only

  const IncrementTable table(x, y);
  const std::size_t cols = table.x_count();
  const std::size_t rows = table.y_count();
  std::vector<double> delta(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) delta[i * cols + j] = table.rho(j, i);

  TilePolys cur(rows, cols, depth), next(rows, cols, depth);
  const int stride = cur.stride;
  for (std::size_t t = 0; t < rows * cols; ++t)
    cur.data[t * static_cast<std::size_t>(stride) * stride] = 1.0;  // level 0: constant one

  double value = 1.0;  // level 0 at (1,1)

  // Scratch for the prefix accumulators.
  std::vector<double> full_prefix((rows + 1) * (cols + 1), 0.0);
  std::vector<double> col_poly(cols * static_cast<std::size_t>(stride), 0.0);
  std::vector<double> row_poly(stride, 0.0);
  std::vector<double> g(stride), h(stride);

  for (int m = 1; m <= depth; ++m) {
    const int deg = m - 1;  // degree of the current level's polynomials
    next.clear();
    std::fill(full_prefix.begin(), full_prefix.end(), 0.0);
    std::fill(col_poly.begin(), col_poly.end(), 0.0);

    for (std::size_t i = 0; i < rows; ++i) {
      std::fill(row_poly.begin(), row_poly.end(), 0.0);
      for (std::size_t j = 0; j < cols; ++j) {
        const double* c = cur.tile(i, j);
        const double dlt = delta[i * cols + j];
        double* out = next.tile(i, j);

        // Contributions from strictly dominated tiles (full double integrals),
        // via the running 2-D prefix of delta * total.
        out[0] += full_prefix[i * (cols + 1) + j];

        // Same row, tiles to the left: full in u, partial in v -> poly in v.
        for (int b = 1; b <= deg + 1; ++b) out[b] += row_poly[b];

        // Same column, tiles below: full in v, partial in u -> poly in u.
        const double* cp = col_poly.data() + j * static_cast<std::size_t>(stride);
        for (int a = 1; a <= deg + 1; ++a) out[a * stride] += cp[a];

        // This tile's own partial double integral, plus the univariate
        // reductions feeding the accumulators.
        double total = 0.0;
        std::fill(g.begin(), g.begin() + deg + 1, 0.0);
        for (int a = 0; a <= deg; ++a) {
          const double* crow = c + a * stride;
          double hrow = 0.0;
          for (int b = 0; b <= deg; ++b) {
            const double w = crow[b] / ((a + 1.0) * (b + 1.0));
            out[(a + 1) * stride + (b + 1)] += dlt * w;
            total += w;
            hrow += crow[b] / (b + 1.0);
            g[b] += crow[b] / (a + 1.0);
          }
          h[a] = hrow;
        }

        // Fold this tile into the accumulators for its neighbors.
        full_prefix[(i + 1) * (cols + 1) + (j + 1)] =
            full_prefix[(i + 1) * (cols + 1) + j] + full_prefix[i * (cols + 1) + (j + 1)] -
            full_prefix[i * (cols + 1) + j] + dlt * total;
        for (int b = 0; b <= deg; ++b) row_poly[b + 1] += dlt * g[b] / (b + 1.0);
        double* cpw = col_poly.data() + j * static_cast<std::size_t>(stride);
        for (int a = 0; a <= deg; ++a) cpw[a + 1] += dlt * h[a] / (a + 1.0);
      }
    }

    double corner = 0.0;
    const double* last = next.tile(rows - 1, cols - 1);
    for (int a = 0; a <= m; ++a)
      for (int b = 0; b <= m; ++b) corner += last[a * stride + b];
    value += corner;
    std::swap(cur.data, next.data);
  }
  return value;
}

std::vector<double> goursat_fd_grid(const TimeSeries& x, const TimeSeries& y, int refinement) {
  if (refinement < 1) throw std::invalid_argument("goursat_fd_grid: refinement must be >= 1");
  if (x.dim() != y.dim()) throw std::invalid_argument("goursat_fd_grid: dimension mismatch");
  const IncrementTable table(x, y);
  const std::size_t cols = table.x_count();
  const std::size_t rows = table.y_count();
  const std::size_t r = static_cast<std::size_t>(refinement);
  const std::size_t ns = cols * r + 1;
  const std::size_t nt = rows * r + 1;
  const double hs = 1.0 / static_cast<double>(cols * r);
  const double ht = 1.0 / static_cast<double>(rows * r);
  const double scale = static_cast<double>(cols) * static_cast<double>(rows);

  std::vector<double> grid(ns * nt, 0.0);
  for (std::size_t a = 0; a < ns; ++a) grid[a * nt] = 1.0;
  for (std::size_t b = 0; b < nt; ++b) grid[b] = 1.0;
  for (std::size_t a = 0; a + 1 < ns; ++a) {
    const std::size_t tile_j = a / r;
    for (std::size_t b = 0; b + 1 < nt; ++b) {
      const std::size_t tile_i = b / r;
      const double q = scale * table.rho(tile_j, tile_i) * hs * ht;
      // Corner average with the q^2/12 adjustment (exact through O(h^4) on a
      // constant-coefficient cell) plus a deferred curvature correction: the
      //residual of every corner stencil is -q (h_s^2 K_ss + h_t^2 K_tt)/12,
      // estimated here from already-marched second differences. The stencils
      // are disabled where they would straddle a tile edge, since K_ss and
      // K_tt jump with the coefficient there.
      double curvature = 0.0;
      if (a >= 1 && a % r != 0)
        curvature += grid[(a + 1) * nt + b] - 2.0 * grid[a * nt + b] + grid[(a - 1) * nt + b];
      if (b >= 1 && b % r != 0)
        curvature += grid[a * nt + (b + 1)] - 2.0 * grid[a * nt + b] + grid[a * nt + (b - 1)];
      grid[(a + 1) * nt + (b + 1)] =
          (grid[(a + 1) * nt + b] + grid[a * nt + (b + 1)]) *
              (1.0 + 0.5 * q + q * q / 12.0) -
          grid[a * nt + b] * (1.0 - q * q / 12.0) - q * curvature / 12.0;
    }
  }
  return grid;
}

double goursat_fd_solve(const TimeSeries& x, const TimeSeries& y, int refinement) {
  const auto grid = goursat_fd_grid(x, y, refinement);
  return grid.back();
}

PicardResult picard_global(const TimeSeries& x, const TimeSeries& y, int refinement,
                           int max_iterations) {
  if (refinement < 1) throw std::invalid_argument("picard_global: refinement must be >= 1");
  if (max_iterations < 1) throw std::invalid_argument("picard_global: need at least one iteration");
  if (x.dim() != y.dim()) throw std::invalid_argument("picard_global: dimension mismatch");
  const IncrementTable table(x, y);
  const std::size_t cols = table.x_count();
  const std::size_t rows = table.y_count();
  const std::size_t r = static_cast<std::size_t>(refinement);
  const std::size_t ns = cols * r + 1;
  const std::size_t nt = rows * r + 1;
  const double hs = 1.0 / static_cast<double>(cols * r);
  const double ht = 1.0 / static_cast<double>(rows * r);
  const double scale = static_cast<double>(cols) * static_cast<double>(rows);

  std::vector<double> k(ns * nt, 1.0), integral(ns * nt, 0.0), knext(ns * nt);
  PicardResult result;
  for (int it = 1; it <= max_iterations; ++it) {
    // integral(s,t) = trapezoidal cumulative double sum of rho * k
    for (std::size_t a = 0; a + 1 < ns; ++a) {
      const std::size_t tile_j = a / r;
      for (std::size_t b = 0; b + 1 < nt; ++b) {
        const std::size_t tile_i = b / r;
        const double rho_cell = scale * table.rho(tile_j, tile_i);
        const double quad = 0.25 * (k[a * nt + b] + k[(a + 1) * nt + b] +
                                    k[a * nt + (b + 1)] + k[(a + 1) * nt + (b + 1)]);
        integral[(a + 1) * nt + (b + 1)] = integral[(a + 1) * nt + b] +
                                           integral[a * nt + (b + 1)] -
                                           integral[a * nt + b] + hs * ht * rho_cell * quad;
      }
    }
    double diff = 0.0;
    for (std::size_t t = 0; t < ns * nt; ++t) {
      knext[t] = 1.0 + integral[t];
      diff = std::max(diff, std::abs(knext[t] - k[t]));
    }
    std::swap(k, knext);
    result.iterations = it;
    result.corner_history.push_back(k.back());
    if (diff < 1e-13) {
      result.converged = true;
      break;
    }
  }
  result.value = k.back();
  return result;
}

}  // namespace sigker::oracle
