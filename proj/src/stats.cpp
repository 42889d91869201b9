#include "oofa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oofa/contrasts.hpp"
#include "oofa/errors.hpp"

namespace oofa {

namespace {

constexpr double kPivotTol = 1e-10;  // relative rank-detection threshold

std::string degree_suffix(int degree) {
  switch (degree) {
    case 1: return "l";
    case 2: return "q";
    default: return std::to_string(degree);
  }
}

// Continued-fraction evaluation of the regularized incomplete beta function
// (modified Lentz), the classical route to the t tail.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int it = 1; it <= kMaxIter; ++it) {
    const int m2 = 2 * it;
    double aa = it * (b - it) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + it) * (qab + it) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

double betai(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

double t_pvalue(double t, int df) {
  if (t == 0.0) return 1.0;
  const double nu = static_cast<double>(df);
  return betai(0.5 * nu, 0.5, nu / (nu + t * t));
}

int ModelMatrix::column_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  throw UnknownLabel("no model column labeled '" + label + "'");
}

ModelMatrix model_matrix(const BlockOofaDesign& d, ModelOrder order) {
  const int m = d.m();
  const int k = d.blocked() ? d.k() : 1;
  const int n = d.runs();
  const ContrastTable pos = contrast_table(m);

  int cols = 1 + (k > 1 ? k - 1 : 0) + m;
  if (order != ModelOrder::First) cols += m;
  if (order == ModelOrder::SecondOrder) cols += m * (m - 1) / 2;

  ModelMatrix mm;
  mm.m = m;
  mm.k = k;
  mm.X.resize(n, cols);
  mm.labels.reserve(cols);

  int c = 0;
  mm.X.col(c).setOnes();
  mm.labels.push_back("Intercept");
  ++c;
  if (k > 1) {
    const ContrastTable blk = block_contrast_table(k);
    for (int s = 1; s < k; ++s, ++c) {
      for (int i = 0; i < n; ++i) mm.X(i, c) = blk.at(s, d.block(i));
      mm.labels.push_back("B^" + degree_suffix(s));
    }
  }
  for (int j = 0; j < m; ++j, ++c) {
    for (int i = 0; i < n; ++i) mm.X(i, c) = pos.at(1, d.position(i, j));
    mm.labels.push_back("Z" + std::to_string(j + 1) + "^l");
  }
  if (order != ModelOrder::First) {
    for (int j = 0; j < m; ++j, ++c) {
      for (int i = 0; i < n; ++i) mm.X(i, c) = pos.at(2, d.position(i, j));
      mm.labels.push_back("Z" + std::to_string(j + 1) + "^q");
    }
  }
  if (order == ModelOrder::SecondOrder) {
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b, ++c) {
        for (int i = 0; i < n; ++i) {
          mm.X(i, c) = pos.at(1, d.position(i, a)) * pos.at(1, d.position(i, b));
        }
        mm.labels.push_back("Z" + std::to_string(a + 1) + "^lZ" + std::to_string(b + 1) + "^l");
      }
    }
  }
  return mm;
}

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
           const std::vector<std::string>& labels) {
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  if (n <= p) {
    throw RankDeficient("no residual degrees of freedom: " + std::to_string(n) + " rows for " +
                        std::to_string(p) + " columns");
  }

  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
  const Eigen::MatrixXd R = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  for (int j = 0; j < p; ++j) {
    const double norm = X.col(j).norm();
    if (std::abs(R(j, j)) <= kPivotTol * (norm > 0 ? norm : 1.0)) {
      throw RankDeficient("column '" + (j < static_cast<int>(labels.size()) ? labels[j]
                                                                            : std::to_string(j)) +
                          "' is numerically dependent on earlier columns");
    }
  }

  OlsFit fit;
  fit.estimate = qr.solve(y);
  const Eigen::VectorXd resid = y - X * fit.estimate;
  fit.df_residual = n - p;
  fit.sigma2 = resid.squaredNorm() / fit.df_residual;

  // (X'X)^-1 = R^-1 R^-T, so the diagonal is the squared row norms of R^-1
  const Eigen::MatrixXd Rinv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  fit.std_error.resize(p);
  fit.t_value.resize(p);
  fit.p_value.resize(p);
  for (int j = 0; j < p; ++j) {
    fit.std_error(j) = std::sqrt(fit.sigma2 * Rinv.row(j).squaredNorm());
    fit.t_value(j) = fit.estimate(j) / fit.std_error(j);
    fit.p_value(j) = t_pvalue(fit.t_value(j), fit.df_residual);
  }
  return fit;
}

ForwardFit forward_select(const ModelMatrix& mm, const Eigen::VectorXd& y, double alpha) {
  const int n = mm.rows();
  const int P = mm.cols();
  const Eigen::MatrixXd G = mm.X.transpose() * mm.X;
  const Eigen::VectorXd c = mm.X.transpose() * y;

  // Incremental Cholesky of the Gram matrix restricted to the selected
  // columns: R grows one row per entered term, z = R^-T X_S'y, and a
  // candidate's entry t statistic comes from its residual direction.
  std::vector<int> sel{0};
  Eigen::MatrixXd R(1, 1);
  R(0, 0) = std::sqrt(G(0, 0));
  Eigen::VectorXd z(1);
  z(0) = c(0) / R(0, 0);
  double rss = std::max(y.squaredNorm() - z(0) * z(0), 0.0);

  std::vector<int> entered;
  std::vector<double> entry_p;
  std::vector<char> in_model(P, 0);
  in_model[0] = 1;

  while (static_cast<int>(sel.size()) < std::min(P, n - 1)) {
    const int sz = static_cast<int>(sel.size());
    const int df = n - sz - 1;
    int best = -1;
    double best_t = -1.0;
    Eigen::VectorXd best_w;
    double best_d = 0.0, best_q = 0.0;
    for (int j = 1; j < P; ++j) {
      if (in_model[j]) continue;
      Eigen::VectorXd g(sz);
      for (int i = 0; i < sz; ++i) g(i) = G(sel[i], j);
      const Eigen::VectorXd w = R.triangularView<Eigen::Upper>().transpose().solve(g);
      const double d2 = G(j, j) - w.squaredNorm();
      if (d2 <= kPivotTol * G(j, j)) continue;  // collinear with the current model
      const double d = std::sqrt(d2);
      const double q = (c(j) - w.dot(z)) / d;
      const double rss_new = std::max(rss - q * q, 0.0);
      const double s2 = rss_new / df;
      const double t = s2 > 0 ? std::abs(q) / std::sqrt(s2) : std::numeric_limits<double>::infinity();
      if (t > best_t) {
        best_t = t;
        best = j;
        best_w = w;
        best_d = d;
        best_q = q;
      }
    }
    if (best < 0) break;
    const double p = t_pvalue(best_t, df);
    if (!(p < alpha)) break;

    Eigen::MatrixXd R2(sz + 1, sz + 1);
    R2.setZero();
    R2.topLeftCorner(sz, sz) = R;
    R2.topRightCorner(sz, 1) = best_w;
    R2(sz, sz) = best_d;
    R = std::move(R2);
    z.conservativeResize(sz + 1);
    z(sz) = best_q;
    rss = std::max(rss - best_q * best_q, 0.0);
    sel.push_back(best);
    in_model[best] = 1;
    entered.push_back(best);
    entry_p.push_back(p);
  }

  ForwardFit out;
  out.selected = entered;
  out.entry_pvalue = entry_p;
  Eigen::MatrixXd Xs(n, sel.size());
  for (std::size_t i = 0; i < sel.size(); ++i) {
    Xs.col(i) = mm.X.col(sel[i]);
    out.labels.push_back(mm.labels[sel[i]]);
  }
  out.fit = ols(Xs, y, out.labels);
  return out;
}

CorrelationMatrix correlation_matrix(const ModelMatrix& mm) {
  const int n = mm.rows();
  const int P = mm.cols();
  CorrelationMatrix out;
  std::vector<int> cols;
  for (int j = 1; j < P; ++j) {
    cols.push_back(j);
    out.labels.push_back(mm.labels[j]);
  }
  const int q = static_cast<int>(cols.size());
  Eigen::MatrixXd centered(n, q);
  Eigen::VectorXd sd(q);
  for (int j = 0; j < q; ++j) {
    const Eigen::VectorXd col = mm.X.col(cols[j]);
    centered.col(j) = col.array() - col.mean();
    const double ss = centered.col(j).squaredNorm();
    if (ss <= 0.0) throw ZeroVariance("column '" + out.labels[j] + "' is constant");
    sd(j) = std::sqrt(ss);
  }
  out.r.resize(q, q);
  for (int i = 0; i < q; ++i) {
    out.r(i, i) = 1.0;
    for (int j = i + 1; j < q; ++j) {
      const double v = centered.col(i).dot(centered.col(j)) / (sd(i) * sd(j));
      out.r(i, j) = v;
      out.r(j, i) = v;
    }
  }
  return out;
}

}  // namespace oofa
