#include <cmath>

#include "blab/error.hpp"
#include "blab/wavelets.hpp"

namespace blab {

namespace {

void indices_rec(int dim, int j, int remaining, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (j == dim - 1) {
    cur[j] = remaining;
    out.push_back(cur);
    return;
  }
  for (int c = remaining; c >= 0; --c) {
    cur[j] = c;
    indices_rec(dim, j + 1, remaining - c, cur, out);
  }
}

double binomial(int b, int i) {
  double r = 1.0;
  for (int t = 1; t <= i; ++t) r = r * (b - i + t) / t;
  return r;
}

// int_0^B u^b x^{2 lambda} dx with u = (x - c) / h; used only when c and B are O(h).
double moment_from_zero(double big_b, double c, double h, int b, double lambda) {
  if (big_b <= 0.0) return 0.0;
  const double p = 2.0 * lambda + 1.0;
  double sum = 0.0;
  for (int i = 0; i <= b; ++i)
    sum += binomial(b, i) * std::pow(big_b / h, i) * std::pow(-c / h, b - i) / (i + p);
  return std::pow(big_b, p) * sum;
}

// int_A^B u^b x^{2 lambda} dx for A > 2 (B - A) / 2: expand x^{2 lambda} about the midpoint.
double moment_series(double a, double big_b, double c, double h, int b, double lambda) {
  const double mid = 0.5 * (a + big_b);
  const double hw = 0.5 * (big_b - a);
  const double rho = hw / mid;
  const double p0 = (mid - c) / h;
  const double q0 = hw / h;
  // u^b = sum_i ui[i] tau^i
  std::vector<double> ui(b + 1);
  for (int i = 0; i <= b; ++i) ui[i] = binomial(b, i) * std::pow(p0, b - i) * std::pow(q0, i);
  double sum = 0.0;
  double g = 1.0;  // binom(2 lambda, j) rho^j
  for (int j = 0; j < 400; ++j) {
    double term = 0.0;
    for (int i = 0; i <= b; ++i)
      if ((i + j) % 2 == 0) term += ui[i] * 2.0 / (i + j + 1);
    sum += g * term;
    if (j > b && std::abs(g) < 1e-18 * std::abs(sum)) break;
    g *= (2.0 * lambda - j) / (j + 1) * rho;
    if (g == 0.0) break;
  }
  return std::pow(mid, 2.0 * lambda) * hw * sum;
}

double weighted_coordinate_moment(double a, double big_b, double c, double h, int b, double lambda) {
  if (big_b <= a) return 0.0;
  if (a <= big_b - a) return moment_from_zero(big_b, c, h, b, lambda) - moment_from_zero(a, c, h, b, lambda);
  return moment_series(a, big_b, c, h, b, lambda);
}

}  // namespace

std::vector<MultiIndex> multi_indices(int dim, int max_degree) {
  require(dim >= 1 && max_degree >= 0, ErrorKind::invalid_input, "invalid multi-index range");
  std::vector<MultiIndex> out;
  MultiIndex cur(dim, 0);
  for (int deg = 0; deg <= max_degree; ++deg) indices_rec(dim, 0, deg, cur, out);
  return out;
}

double weighted_moment(const SpaceParams& params, const Box& box, std::span<const int> beta) {
  const int d = params.dim();
  require(box.dim() == d && static_cast<int>(beta.size()) == d, ErrorKind::invalid_input, "moment dimension mismatch");
  require(box.lo[d - 1] >= 0.0, ErrorKind::invalid_input, "box leaves the half-space");
  double v = 1.0;
  for (int j = 0; j < d - 1; ++j)
    v *= (std::pow(box.hi[j], beta[j] + 1) - std::pow(box.lo[j], beta[j] + 1)) / (beta[j] + 1);
  const double p = beta[d - 1] + 2.0 * params.lambda + 1.0;
  return v * (std::pow(box.hi[d - 1], p) - std::pow(box.lo[d - 1], p)) / p;
}

LocalFrame LocalFrame::of(const Box& box) {
  LocalFrame f;
  f.center = box.center();
  for (int j = 0; j < box.dim(); ++j) f.scale.push_back(box.side(j));
  return f;
}

double local_moment(const SpaceParams& params, const Box& box, const LocalFrame& frame, std::span<const int> beta) {
  const int d = params.dim();
  require(box.dim() == d && static_cast<int>(beta.size()) == d, ErrorKind::invalid_input, "moment dimension mismatch");
  require(box.lo[d - 1] >= 0.0, ErrorKind::invalid_input, "box leaves the half-space");
  double v = 1.0;
  for (int j = 0; j < d - 1; ++j) {
    const double ul = (box.lo[j] - frame.center[j]) / frame.scale[j];
    const double uh = (box.hi[j] - frame.center[j]) / frame.scale[j];
    v *= frame.scale[j] * (std::pow(uh, beta[j] + 1) - std::pow(ul, beta[j] + 1)) / (beta[j] + 1);
  }
  return v * weighted_coordinate_moment(box.lo[d - 1], box.hi[d - 1], frame.center[d - 1], frame.scale[d - 1],
                                        beta[d - 1], params.lambda);
}

PiecewisePolynomial::PiecewisePolynomial(Box support, LocalFrame frame, std::vector<Box> pieces,
                                         std::vector<MultiIndex> monomials, std::vector<std::vector<double>> coefficients)
    : support_(std::move(support)),
      frame_(std::move(frame)),
      pieces_(std::move(pieces)),
      monomials_(std::move(monomials)),
      coefficients_(std::move(coefficients)) {
  require(coefficients_.size() == pieces_.size(), ErrorKind::invalid_input, "one coefficient row per piece");
  for (const auto& row : coefficients_)
    require(row.size() == monomials_.size(), ErrorKind::invalid_input, "coefficient row length mismatch");
}

double PiecewisePolynomial::piece_value(std::size_t piece, Coords x) const {
  const int d = support_.dim();
  double u[8];
  for (int j = 0; j < d; ++j) u[j] = frame_.coord(x, j);
  double sum = 0.0;
  for (std::size_t m = 0; m < monomials_.size(); ++m) {
    double t = coefficients_[piece][m];
    for (int j = 0; j < d; ++j)
      for (int r = 0; r < monomials_[m][j]; ++r) t *= u[j];
    sum += t;
  }
  return sum;
}

double PiecewisePolynomial::operator()(Coords x) const {
  for (std::size_t p = 0; p < pieces_.size(); ++p)
    if (pieces_[p].contains(x)) return piece_value(p, x);
  return 0.0;
}

double PiecewisePolynomial::sup_norm(int samples_per_side) const {
  const int d = support_.dim();
  const int s = std::max(samples_per_side, 2);
  double best = 0.0;
  std::vector<double> x(d);
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= s;
  for (std::size_t p = 0; p < pieces_.size(); ++p) {
    for (std::size_t i = 0; i < total; ++i) {
      std::size_t rest = i;
      for (int j = 0; j < d; ++j) {
        x[j] = pieces_[p].lo[j] + pieces_[p].side(j) * static_cast<double>(rest % s) / (s - 1);
        rest /= s;
      }
      best = std::max(best, std::abs(piece_value(p, x)));
    }
  }
  return best;
}

double PiecewisePolynomial::local_pairing(const SpaceParams& params, std::span<const int> beta) const {
  const int d = params.dim();
  MultiIndex sum_idx(d);
  double total = 0.0;
  for (std::size_t p = 0; p < pieces_.size(); ++p) {
    for (std::size_t m = 0; m < monomials_.size(); ++m) {
      for (int j = 0; j < d; ++j) sum_idx[j] = monomials_[m][j] + beta[j];
      total += coefficients_[p][m] * local_moment(params, pieces_[p], frame_, sum_idx);
    }
  }
  return total;
}

double PiecewisePolynomial::exact_inner(const SpaceParams& params, const PiecewisePolynomial& g) const {
  require(g.pieces_ == pieces_ && g.frame_.center == frame_.center && g.frame_.scale == frame_.scale,
          ErrorKind::invalid_input, "exact inner product needs matching pieces and frames");
  const int d = params.dim();
  MultiIndex idx(d);
  double total = 0.0;
  for (std::size_t p = 0; p < pieces_.size(); ++p)
    for (std::size_t a = 0; a < monomials_.size(); ++a)
      for (std::size_t b = 0; b < g.monomials_.size(); ++b) {
        for (int j = 0; j < d; ++j) idx[j] = monomials_[a][j] + g.monomials_[b][j];
        total += coefficients_[p][a] * g.coefficients_[p][b] * local_moment(params, pieces_[p], frame_, idx);
      }
  return total;
}

}  // namespace blab
