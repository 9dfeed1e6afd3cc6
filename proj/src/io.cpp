#include "adjustkit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "adjustkit/error.hpp"

namespace adjustkit {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r\"");
    const auto e = cell.find_last_not_of(" \t\r\"");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
  double v = 0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw Error(ErrorKind::Schema, "row " + std::to_string(row) + ", column " + column + ": bad value '" + cell + "'");
  return v;
}

std::string fmt(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

Dataset read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Schema, "empty CSV");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_row(line);
  int t_col = -1, y_col = -1;
  std::vector<int> x_cols;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& h = header[c];
    if (h == "T") {
      if (t_col >= 0) throw Error(ErrorKind::Schema, "duplicate T column");
      t_col = static_cast<int>(c);
    } else if (h == "Y") {
      if (y_col >= 0) throw Error(ErrorKind::Schema, "duplicate Y column");
      y_col = static_cast<int>(c);
    } else {
      const std::string expect = "X" + std::to_string(x_cols.size() + 1);
      if (h != expect) throw Error(ErrorKind::Schema, "expected column " + expect + ", found '" + h + "'");
      x_cols.push_back(static_cast<int>(c));
      names.push_back(h);
    }
  }
  if (t_col < 0 || y_col < 0) throw Error(ErrorKind::Schema, "header needs T and Y columns");
  if (x_cols.empty()) throw Error(ErrorKind::Schema, "no predictor columns");
  check_dimension(static_cast<int>(x_cols.size()));

  std::vector<std::vector<double>> xs;
  std::vector<int> t;
  std::vector<double> y;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_row(line);
    if (cells.size() != header.size())
      throw Error(ErrorKind::Schema, "row " + std::to_string(row) + " has " + std::to_string(cells.size()) + " cells");
    const double tv = parse_number(cells[static_cast<std::size_t>(t_col)], row, "T");
    if (tv != 0.0 && tv != 1.0) throw Error(ErrorKind::Schema, "row " + std::to_string(row) + ": T must be 0 or 1");
    t.push_back(static_cast<int>(tv));
    y.push_back(parse_number(cells[static_cast<std::size_t>(y_col)], row, "Y"));
    std::vector<double> xr;
    for (std::size_t j = 0; j < x_cols.size(); ++j)
      xr.push_back(parse_number(cells[static_cast<std::size_t>(x_cols[j])], row, names[j]));
    xs.push_back(std::move(xr));
  }
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(x_cols.size()));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = xs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return Dataset(std::move(x), std::move(t), Eigen::Map<Eigen::VectorXd>(y.data(), n), std::move(names));
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Schema, "cannot read " + path);
  return read_csv(in);
}

void write_csv(std::ostream& out, const Dataset& d) {
  out << "T,Y";
  for (int j = 1; j <= d.p(); ++j) out << ",X" << j;
  out << '\n';
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    out << d.t()[static_cast<std::size_t>(i)] << ',' << fmt(d.y()(i));
    for (Eigen::Index j = 0; j < d.p(); ++j) out << ',' << fmt(d.x()(i, j));
    out << '\n';
  }
}

nlohmann::json index_lists(const std::vector<SubsetId>& sets) {
  auto out = nlohmann::json::array();
  for (auto s : sets) out.push_back(s.indices());
  return out;
}

nlohmann::json collection_json(const AdjustmentCollection& c) {
  nlohmann::json j;
  j["p"] = c.p();
  j["source"] = c.source() == Source::Oracle ? "oracle" : "estimated";
  j["count"] = c.size();
  j["sets"] = index_lists(c.members());
  auto hex = nlohmann::json::array();
  for (auto s : c.members()) hex.push_back(s.to_hex());
  j["masks"] = hex;
  return j;
}

nlohmann::json report_json(const StructureReport& r) {
  nlohmann::json j;
  j["p"] = r.p;
  j["source"] = r.source == Source::Oracle ? "oracle" : "estimated";
  j["count"] = r.size;
  j["locally_minimal"] = index_lists(r.locally_minimal);
  j["intersection_of_minimal"] = r.intersection_of_minimal.indices();
  j["unique_minimal"] = r.unique_minimal ? nlohmann::json(r.unique_minimal->indices()) : nlohmann::json(nullptr);
  j["upward_closed_count"] = r.upward_closed.size();
  j["upward_closed_minimal"] = index_lists(locally_minimal(r.upward_closed));
  j["collider_blocks"] = index_lists(r.collider_blocks);
  j["colliders"] = r.colliders.indices();
  j["refined_colliders"] = r.refined_colliders.indices();
  j["noncolliders"] = r.noncolliders.indices();
  j["flags"] = r.flags;
  return j;
}

nlohmann::json selection_json(const SelectionResult& s, const CriterionTable& table) {
  nlohmann::json j;
  j["t"] = s.arm;
  j["variant"] = to_string(table.variant);
  j["n"] = table.meta.n;
  j["p"] = s.p;
  j["outcome_method"] = to_string(table.meta.outcome_method);
  j["treatment_method"] = to_string(table.meta.treatment_method);
  j["outcome_slices"] = table.meta.outcome_slices;
  j["treatment_slices"] = table.meta.treatment_slices;
  j["tau"] = s.tau;
  j["c0"] = s.c0;
  j["cn"] = s.cn;
  j["subsets_evaluated"] = table.size();
  j["singular_subsets"] = table.meta.singular_count;
  j["outcome_degenerate"] = table.meta.outcome_degenerate;
  j["degenerate_pooling"] = table.meta.degenerate_pooling;
  std::vector<SubsetId> sel;
  auto hex = nlohmann::json::array();
  for (auto m : s.selected) {
    sel.push_back({m, s.p});
    hex.push_back(SubsetId{m, s.p}.to_hex());
  }
  j["selected_count"] = sel.size();
  j["selected"] = index_lists(sel);
  j["selected_masks"] = hex;
  auto ratios = [&](std::size_t from, std::size_t to) {
    auto a = nlohmann::json::array();
    for (std::size_t k = from; k < to; ++k) a.push_back(std::isinf(s.ratios[k]) ? nlohmann::json("inf") : nlohmann::json(s.ratios[k]));
    return a;
  };
  const std::size_t head = std::min<std::size_t>(10, s.ratios.size());
  j["ratios_head"] = ratios(0, head);
  j["ratios_tail"] = ratios(s.ratios.size() - std::min<std::size_t>(10, s.ratios.size()), s.ratios.size());
  j["ratios_near_tau"] = ratios(s.tau >= 3 ? s.tau - 3 : 0, std::min(s.ratios.size(), s.tau + 4));
  return j;
}

void write_table_csv(std::ostream& out, const SelectionResult& s) {
  out << "mask_hex,indices,f_value\n";
  for (std::size_t k = 0; k < s.order.size(); ++k) {
    const SubsetId a{s.order[k], s.p};
    std::string idx;
    for (int i : a.indices()) idx += (idx.empty() ? "" : " ") + std::to_string(i);
    out << a.to_hex() << ',' << idx << ',' << fmt(s.sorted_values[k]) << '\n';
  }
}

void write_scree_csv(std::ostream& out, const SelectionResult& s) {
  out << "k,f_value\n";
  for (std::size_t k = 0; k < s.sorted_values.size(); ++k) out << k + 1 << ',' << fmt(s.sorted_values[k]) << '\n';
}

Hints load_hints(const std::string& path, int p) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Schema, "cannot read " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("hints: ") + e.what());
  }
  auto get = [&](const char* key) {
    if (!j.contains(key)) return SubsetId::empty(p);
    try {
      return SubsetId::from_indices(j.at(key).get<std::vector<int>>(), p);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Schema, std::string("hints: ") + e.what());
    }
  };
  return {get("forks"), get("colliders"), get("noncolliders")};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Schema, "cannot write " + path);
  out << text;
}

}  // namespace adjustkit
