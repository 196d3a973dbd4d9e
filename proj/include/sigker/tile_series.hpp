#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace sigker::tile {

// Truncation orders above 64 gain nothing in double precision: the diagonal
// weights 1/(N!)^2 fall below 1e-178 and the adaptive search never goes there.
inline constexpr int kMaxOrder = 64;

/// Coefficients of a bivariate power series sum_{i,j<=N} c[i][j] u^i v^j in
/// tile-local coordinates (u, v) in [0,1]^2. Entry (i, j) multiplies u^i v^j;
/// u runs along the first series' axis, v along the second's. Immutable by
/// convention once built.
struct CoeffMatrix {
  int order = 0;                 // N
  std::vector<double> entries;   // (N+1)^2, row-major in i

  double at(int i, int j) const { return entries[static_cast<std::size_t>(i) * (order + 1) + j]; }
  double& at(int i, int j) { return entries[static_cast<std::size_t>(i) * (order + 1) + j]; }
};

enum class BoundaryAxis {
  AlongU,  // series in u: a tile's bottom edge (v = 0), the alpha data
  AlongV,  // series in v: a tile's left edge (u = 0), the beta data
};

/// Univariate series along one tile edge: the only data exchanged between
/// tiles. The leading coefficient is the shared corner value, so the alpha
/// and beta entering one tile must agree at index 0.
struct BoundarySeries {
  BoundaryAxis axis = BoundaryAxis::AlongU;
  std::vector<double> a;  // N+1 coefficients

  static BoundarySeries unit(BoundaryAxis axis, int order);
};

// Power map eta(x) = (1, x, x^2, ..., x^N) with 0^0 := 1.
std::vector<double> power_vector(double x, int order);

// Factorial weight table w[i][j] = (|i-j|)! / (max(i,j)! min(i,j)!).
// Symmetric, w[0][0] = 1. Requires 0 <= order <= kMaxOrder.
CoeffMatrix build_W(int order);

// Increment-product powers a[i][j] = delta^min(i,j) with 0^0 := 1. The first
// row and column are all ones.
CoeffMatrix build_A(double delta, int order);

// Toeplitz boundary table: alpha occupies the lower triangle (b[i][j] =
// alpha.a[i-j] for i >= j), beta the strict upper triangle (b[i][j] =
// beta.a[j-i] for j > i). With entries pairing u^i v^j this is the placement
// that restricts to alpha on v = 0 and beta on u = 0, matching the tile
// recursion's proof and the Toeplitz step of the diagonal sweep. Throws
// InconsistentBoundaryError when the corner values alpha.a[0], beta.a[0]
// disagree beyond 1e-9 relative.
CoeffMatrix build_B(const BoundarySeries& alpha, const BoundarySeries& beta, int order);

// Tile-centered coefficients: entrywise product build_A o build_B o build_W.
// With unit boundaries this is the diagonal delta^i / (i!)^2.
CoeffMatrix tile_coeffs(double delta, const BoundarySeries& alpha,
                        const BoundarySeries& beta, int order);

// sum_{i,j<=N} c[i][j] u^i v^j by nested Horner recurrence.
double eval_series(const CoeffMatrix& c, double u, double v);

// Restriction to the top edge v = 1 as a series in u (row sums): the alpha
// for the tile above. For the pass-through matrix of a delta = 0 tile this
// keeps alpha's higher coefficients and replaces the corner with the beta sum.
BoundarySeries top_boundary(const CoeffMatrix& c);

// Restriction to the right edge u = 1 as a series in v (column sums): the
// beta for the tile to the right.
BoundarySeries right_boundary(const CoeffMatrix& c);

// Independent slow path: the origin-centered Neumann recursion
// C_{n+1} = delta * S C_n T summed for n <= iters, with C_0 assembled from
// the alpha/beta/corner data and S, T the shift-and-divide operators (the
// tile-local specialization where both tile offsets vanish). Agrees with
// tile_coeffs entrywise up to order N once iters >= N.
CoeffMatrix neumann_coeffs_slow(double delta, const BoundarySeries& alpha,
                                const BoundarySeries& beta, int order, int iters);

// Coefficient picked up by a monomial u^l under n applications of the tile
// integration operator: delta^n * l! / ((l+n)! n!). Test support for the
// two-tile closed form.
double monomial_propagation(double delta, int power, int n);

// Diagnostics: dump a coefficient matrix as CSV, one coefficient row per
// line (row i holds the u^i coefficients).
void dump_csv(const CoeffMatrix& c, std::ostream& out);

namespace detail {

// Factorials 0!..170! as doubles.
std::span<const double> factorials();

// Allocation-free builders used by the propagation engine. All spans must
// hold (order+1)^2 (matrices) or order+1 (series) entries.
void build_W_into(std::span<double> w, int order);
void build_A_into(std::span<double> a, double delta, int order);
void check_corner(double alpha0, double beta0);

// Negative-control hook: flips the sign of the w[1][1] factorial weight so
// validation suites can prove they catch a corrupted build. Never set on the
// production path.
void set_w_fault_for_testing(bool enabled);
bool w_fault_for_testing();

}  // namespace detail

}  // namespace sigker::tile
