#include "adjustkit/criterion.hpp"

#include <cmath>
#include <limits>

#include "adjustkit/copula.hpp"
#include "adjustkit/error.hpp"
#include "adjustkit/parallel.hpp"

namespace adjustkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Eigen::Index> to_index(const std::vector<int>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

std::string_view to_string(Variant v) { return v == Variant::Normal ? "mn" : "gc"; }

Variant parse_variant(std::string_view text) {
  if (text == "mn" || text == "MN") return Variant::Normal;
  if (text == "gc" || text == "GC") return Variant::Copula;
  throw Error(ErrorKind::Schema, "unknown variant '" + std::string(text) + "'");
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

Eigen::MatrixXd schur_complement(const Eigen::MatrixXd& sigma, SubsetId a) {
  const auto in = to_index(a.positions());
  const auto out = to_index(a.complement().positions());
  const Eigen::MatrixXd s_oo = sigma(out, out);
  if (in.empty()) return s_oo;
  const Eigen::MatrixXd s_aa = sigma(in, in);
  if (!(min_eigenvalue(s_aa) > kSingularThreshold)) {
    throw Error(ErrorKind::SingularBlock, "Sigma_{A,A} singular for A = " + a.to_string());
  }
  const Eigen::MatrixXd s_ao = sigma(in, out);
  Eigen::MatrixXd schur = s_oo - s_ao.transpose() * s_aa.ldlt().solve(s_ao);
  return (schur + schur.transpose()) * 0.5;
}

double dual_norm(const Eigen::MatrixXd& left, const Eigen::MatrixXd& right,
                 const std::array<Eigen::MatrixXd, 2>& sigmas, SubsetId a) {
  if (a.is_full()) return 0.0;
  const auto out = to_index(a.complement().positions());
  const Eigen::MatrixXd l = left(out, Eigen::all);
  const Eigen::MatrixXd r = right(out, Eigen::all);
  double total = 0.0;
  for (const auto& sigma : sigmas) total += spectral_norm(l.transpose() * schur_complement(sigma, a) * r);
  return total;
}

double f_value(const CandidateMatrix& m_y, const CandidateMatrix& m_t,
               const Eigen::MatrixXd& sigma0, const Eigen::MatrixXd& sigma1, SubsetId a) {
  return dual_norm(m_y.m, m_t.m, {sigma0, sigma1}, a);
}

double population_f(const Eigen::MatrixXd& sigma0, const Eigen::MatrixXd& sigma1,
                    const Eigen::MatrixXd& beta_y, const Eigen::MatrixXd& beta_t, SubsetId a) {
  return dual_norm(beta_y, beta_t, {sigma0, sigma1}, a);
}

CriterionEvaluator::CriterionEvaluator(Eigen::MatrixXd m_y, Eigen::MatrixXd m_t,
                                       std::array<Eigen::MatrixXd, 2> sigmas)
    : m_y_(std::move(m_y)), m_t_(std::move(m_t)), sigmas_(std::move(sigmas)) {
  for (std::size_t s = 0; s < 2; ++s) {
    // Interlacing: every principal block inherits the full matrix's eigenvalue floor.
    if (min_eigenvalue(sigmas_[s]) > kSingularThreshold) {
      Eigen::MatrixXd prec = sigmas_[s].ldlt().solve(Eigen::MatrixXd::Identity(p(), p()));
      precisions_[s] = (prec + prec.transpose()) * 0.5;
    }
  }
}

double CriterionEvaluator::operator()(SubsetId a) const {
  if (a.is_full()) return 0.0;
  const auto out = to_index(a.complement().positions());
  const Eigen::MatrixXd l = m_y_(out, Eigen::all);
  const Eigen::MatrixXd r = m_t_(out, Eigen::all);
  double total = 0.0;
  for (std::size_t s = 0; s < 2; ++s) {
    if (precisions_[s]) {
      const Eigen::MatrixXd block = (*precisions_[s])(out, out);
      Eigen::LLT<Eigen::MatrixXd> llt(block);
      if (llt.info() != Eigen::Success) return kInf;
      total += spectral_norm(l.transpose() * llt.solve(r));
    } else {
      try {
        total += spectral_norm(l.transpose() * schur_complement(sigmas_[s], a) * r);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::SingularBlock) return kInf;
        throw;
      }
    }
  }
  return total;
}

CriterionTable criterion_table_prepared(const Dataset& d, int arm, Variant variant,
                                        const CriterionConfig& config) {
  check_dimension(d.p());
  if (arm != 0 && arm != 1) throw Error(ErrorKind::Schema, "arm must be 0 or 1");
  const auto& opt = config.estimators;
  const auto [m0, m1] = group_moments(d);
  const CandidateMatrix m_y = outcome_candidate(d, arm, opt.outcome_method, opt.slices, opt.ridge);
  const CandidateMatrix m_t = treatment_candidate(d, opt.treatment_method, opt.ridge);
  const CriterionEvaluator eval(m_y.m, m_t.m, {m0.sigma, m1.sigma});

  CriterionTable table;
  table.arm = arm;
  table.variant = variant;
  table.meta.n = d.n();
  table.meta.p = d.p();
  table.meta.outcome_slices = m_y.h;
  table.meta.treatment_slices = m_t.h;
  table.meta.outcome_method = opt.outcome_method;
  table.meta.treatment_method = opt.treatment_method;
  table.meta.outcome_degenerate = m_y.h == 1;

  if (config.universe.empty()) {
    const std::size_t count = std::size_t{1} << d.p();
    table.masks.resize(count);
    for (std::size_t m = 0; m < count; ++m) table.masks[m] = static_cast<std::uint32_t>(m);
  } else {
    table.masks = config.universe;
    std::sort(table.masks.begin(), table.masks.end());
    table.masks.erase(std::unique(table.masks.begin(), table.masks.end()), table.masks.end());
  }
  table.values.assign(table.masks.size(), 0.0);
  const int p = d.p();
  parallel_for(table.masks.size(), resolve_threads(config.threads), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) table.values[k] = eval(SubsetId{table.masks[k], p});
  });
  for (double v : table.values) {
    if (std::isinf(v)) ++table.meta.singular_count;
  }
  return table;
}

CriterionTable criterion_table(const Dataset& d, int arm, Variant variant, const CriterionConfig& config) {
  if (variant == Variant::Normal) return criterion_table_prepared(d, arm, variant, config);
  const CopulaResult cop = transform_dataset(d);
  CriterionTable table = criterion_table_prepared(cop.data, arm, variant, config);
  for (std::size_t j = 0; j < cop.coordinates.size(); ++j) {
    if (cop.coordinates[j].pool.degenerate) table.meta.degenerate_pooling.push_back(static_cast<int>(j) + 1);
  }
  return table;
}

}  // namespace adjustkit
