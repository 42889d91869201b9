#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "oofa/design.hpp"

namespace oofa {

enum class ModelOrder { First, Quadratic, SecondOrder };

/**
 * Regression matrix of a block-position model. Column order is fixed:
 * intercept, block contrasts (labels B^l, B^q, B^3, ...), linear position
 * contrasts Z1^l..Zm^l, quadratic Z1^q..Zm^q (Quadratic and SecondOrder),
 * then the linear-by-linear interactions Zi^lZj^l for i < j (SecondOrder).
 * Unblocked designs get no block columns.
 */
struct ModelMatrix {
  Eigen::MatrixXd X;
  std::vector<std::string> labels;
  int m = 0;
  int k = 1;

  int cols() const { return static_cast<int>(X.cols()); }
  int rows() const { return static_cast<int>(X.rows()); }
  int block_columns() const { return k > 1 ? k - 1 : 0; }
  /// Column index of a label; throws UnknownLabel.
  int column_of(const std::string& label) const;
};

ModelMatrix model_matrix(const BlockOofaDesign& design, ModelOrder order);

struct OlsFit {
  Eigen::VectorXd estimate;
  Eigen::VectorXd std_error;
  Eigen::VectorXd t_value;
  Eigen::VectorXd p_value;
  double sigma2 = 0.0;  // residual variance
  int df_residual = 0;
};

/**
 * Least squares by Householder QR; standard errors from the inverse Gram
 * matrix via R^-1. Throws RankDeficient naming the first column that is
 * numerically dependent on its predecessors (relative pivot below 1e-10),
 * or when there are no residual degrees of freedom.
 */
OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
           const std::vector<std::string>& labels);

/**
 * Two-sided tail probability of the t distribution via the regularized
 * incomplete beta function; absolute accuracy about 1e-10 over |t| <= 50,
 * df <= 1e4.
 */
double t_pvalue(double t, int df);

struct ForwardFit {
  std::vector<int> selected;          // model-matrix columns in entry order (intercept excluded)
  std::vector<std::string> labels;    // intercept + entered terms, entry order
  std::vector<double> entry_pvalue;   // p-value at admission, aligned with selected
  OlsFit fit;                         // refit on the final term set, rows aligned with labels
};

/**
 * Forward variable selection: every non-intercept column competes; at each
 * step the candidate with the smallest entry p-value joins if that p-value
 * is below alpha (ties keep the earliest column). Candidates that are
 * numerically collinear with the current model are skipped. Deterministic
 * given (X, y, alpha).
 */
ForwardFit forward_select(const ModelMatrix& mm, const Eigen::VectorXd& y, double alpha);

struct CorrelationMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd r;
};

/// Pearson correlations of all non-intercept columns. Throws ZeroVariance
/// naming any constant column.
CorrelationMatrix correlation_matrix(const ModelMatrix& mm);

}  // namespace oofa
