#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adjustkit/dataset.hpp"
#include "adjustkit/inverse_regression.hpp"
#include "adjustkit/subset.hpp"

namespace adjustkit {

enum class Variant { Normal, Copula };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view text);

/// Sigma_{-A,-A} - Sigma_{-A,A} Sigma_{A,A}^{-1} Sigma_{A,-A}: the conditional
/// covariance of X_{-A} given X_A under normality. A = {} gives sigma itself,
/// A = full gives a 0x0 matrix. Throws SingularBlock if Sigma_{A,A} has
/// smallest eigenvalue <= 1e-10.
Eigen::MatrixXd schur_complement(const Eigen::MatrixXd& sigma, SubsetId a);

/// Sum over s of the spectral norm of left_{-A}' * schur(sigma_s, A) * right_{-A}.
/// Computed directly through the Schur complement; zero for the full set.
double dual_norm(const Eigen::MatrixXd& left, const Eigen::MatrixXd& right,
                 const std::array<Eigen::MatrixXd, 2>& sigmas, SubsetId a);

/// Sample criterion for one subset from estimated candidate matrices.
double f_value(const CandidateMatrix& m_y, const CandidateMatrix& m_t,
               const Eigen::MatrixXd& sigma0, const Eigen::MatrixXd& sigma1, SubsetId a);

/// Noise-free criterion from central-subspace bases.
double population_f(const Eigen::MatrixXd& sigma0, const Eigen::MatrixXd& sigma1,
                    const Eigen::MatrixXd& beta_y, const Eigen::MatrixXd& beta_t, SubsetId a);

/// Largest singular value.
double spectral_norm(const Eigen::MatrixXd& m);

/// Evaluates the criterion over many subsets against fixed moment estimates.
///
/// When an arm covariance is well conditioned the Schur complement over -A is
/// obtained as the inverse of the -A block of its precision matrix, which
/// needs one small Cholesky solve per subset. Otherwise subsets fall back to
/// the direct route and singular blocks score +inf.
class CriterionEvaluator {
 public:
  CriterionEvaluator(Eigen::MatrixXd m_y, Eigen::MatrixXd m_t, std::array<Eigen::MatrixXd, 2> sigmas);

  /// +inf if a required block is singular.
  double operator()(SubsetId a) const;

  int p() const { return static_cast<int>(m_y_.rows()); }

 private:
  Eigen::MatrixXd m_y_;
  Eigen::MatrixXd m_t_;
  std::array<Eigen::MatrixXd, 2> sigmas_;
  std::array<std::optional<Eigen::MatrixXd>, 2> precisions_;
};

struct CriterionConfig {
  EstimatorOptions estimators;
  unsigned threads = 0;
  /// Subsets to evaluate; empty means all 2^p.
  std::vector<std::uint32_t> universe;
};

struct TableMetadata {
  Eigen::Index n = 0;
  int p = 0;
  int outcome_slices = 0;
  int treatment_slices = 0;
  Method outcome_method = Method::SIR;
  Method treatment_method = Method::SIR;
  std::size_t singular_count = 0;
  bool outcome_degenerate = false;
  std::vector<int> degenerate_pooling;  // 1-based coordinates (copula variant only)
};

/// f-hat_t over the enumerated (or supplied) universe, in ascending mask order.
struct CriterionTable {
  std::vector<std::uint32_t> masks;
  std::vector<double> values;
  int arm = 0;
  Variant variant = Variant::Normal;
  TableMetadata meta;

  std::size_t size() const { return masks.size(); }
  SubsetId subset(std::size_t k) const { return {masks[k], meta.p}; }
};

/// Estimate M_{Y(t)}, M_T and both arm covariances once, then score every subset.
/// The copula variant transforms the dataset first.
CriterionTable criterion_table(const Dataset& d, int arm, Variant variant, const CriterionConfig& config);

/// Same, on a dataset that has already been transformed (or not) as desired.
CriterionTable criterion_table_prepared(const Dataset& d, int arm, Variant variant,
                                        const CriterionConfig& config);

}  // namespace adjustkit
