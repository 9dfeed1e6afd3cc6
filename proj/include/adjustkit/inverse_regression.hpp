#pragma once

#include <Eigen/Dense>

#include <string_view>
#include <utility>
#include <vector>

#include "adjustkit/dataset.hpp"

namespace adjustkit {

enum class SliceKind { Quantile, Discrete };

/// Slice label per observation. Labels are 0-based internally (0..h-1);
/// every slice is nonempty.
struct SliceAssignment {
  std::vector<int> labels;
  int h = 0;
  SliceKind kind = SliceKind::Quantile;
  /// Set when the response takes a single value (one slice).
  bool degenerate = false;

  std::vector<Eigen::Index> count() const;
};

/// Responses with at most this many distinct values are sliced by category.
inline constexpr int kDiscreteThreshold = 10;
inline constexpr int kDefaultSlices = 5;
/// Covariances whose smallest eigenvalue is at or below this are treated as singular.
inline constexpr double kSingularThreshold = 1e-10;

/// Equiprobable quantile slicing, or one slice per distinct value when there
/// are at most kDiscreteThreshold of them. Ties always share a slice; slices
/// emptied by ties are merged into the next one.
SliceAssignment slice_response(const Eigen::VectorXd& values, int h);

/// Slices given by an existing categorical label (e.g. the treatment).
SliceAssignment slices_from_labels(const std::vector<int>& labels);

enum class Method { SIR, SAVE };
enum class Target { OutcomeInArm, Treatment };

std::string_view to_string(Method m);
Method parse_method(std::string_view text);

/// Candidate matrix: p x h for SIR, p x (p*h) for SAVE (block k occupies columns [k*p, (k+1)*p)).
struct CandidateMatrix {
  Eigen::MatrixXd m;
  Method method = Method::SIR;
  Target target = Target::OutcomeInArm;
  int h = 0;
};

struct EstimatorOptions {
  int slices = kDefaultSlices;
  Method outcome_method = Method::SIR;
  Method treatment_method = Method::SIR;
  /// Added to the diagonal of covariances before inversion. Zero (the default)
  /// means singular covariances raise SingularCovariance instead.
  double ridge = 0.0;
};

/// sigma^{-1} times the slice means of xc (already centered), one column per slice.
CandidateMatrix sir_matrix(const Eigen::MatrixXd& xc, const SliceAssignment& slices,
                           const Eigen::MatrixXd& sigma, double ridge = 0.0);

/// Block h is sigma^{-1}(sigma - within-slice covariance). Slices need >= 2 rows.
CandidateMatrix save_matrix(const Eigen::MatrixXd& xc, const SliceAssignment& slices,
                            const Eigen::MatrixXd& sigma, double ridge = 0.0);

/// M_{Y(t)}: rows with T = arm, centered at the arm mean, Y sliced within the arm,
/// arm covariance.
CandidateMatrix outcome_candidate(const Dataset& d, int arm, Method method, int h,
                                  double ridge = 0.0);

/// M_T: all rows, centered at the marginal mean, sliced by treatment, marginal covariance.
CandidateMatrix treatment_candidate(const Dataset& d, Method method, double ridge = 0.0);

struct GroupMoments {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd sigma_marginal;
  Eigen::Index n_s = 0;
  /// Set when the arm covariance is identically zero.
  bool degenerate = false;
};

/// Column means and covariance (divisor rows - 1).
Eigen::VectorXd column_means(const Eigen::MatrixXd& x);
Eigen::MatrixXd covariance(const Eigen::MatrixXd& x);

/// Per-arm mean and covariance plus the marginal covariance. Needs >= 2 rows per arm.
std::pair<GroupMoments, GroupMoments> group_moments(const Dataset& d);

/// Smallest eigenvalue of a symmetric matrix (+inf for an empty matrix).
double min_eigenvalue(const Eigen::MatrixXd& sym);

}  // namespace adjustkit
