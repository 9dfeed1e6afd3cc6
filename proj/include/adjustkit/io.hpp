#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "adjustkit/collection.hpp"
#include "adjustkit/criterion.hpp"
#include "adjustkit/dataset.hpp"
#include "adjustkit/selection.hpp"
#include "adjustkit/set_analysis.hpp"

namespace adjustkit {

/// CSV with a header: a `T` column (0/1), a `Y` column and predictor columns
/// X1..Xp in that order. Missing or non-numeric cells throw Schema.
Dataset read_csv(std::istream& in);
Dataset load_csv(const std::string& path);
void write_csv(std::ostream& out, const Dataset& d);

/// Sorted index lists, e.g. [[1],[1,2]].
nlohmann::json index_lists(const std::vector<SubsetId>& sets);
nlohmann::json collection_json(const AdjustmentCollection& c);
nlohmann::json report_json(const StructureReport& r);
nlohmann::json selection_json(const SelectionResult& s, const CriterionTable& table);

/// mask_hex,indices,f_value in selection order.
void write_table_csv(std::ostream& out, const SelectionResult& s);
/// k,f_value in selection order (nonincreasing).
void write_scree_csv(std::ostream& out, const SelectionResult& s);

struct Hints {
  SubsetId forks;
  SubsetId colliders;
  SubsetId noncolliders;
};

/// {"forks": [..], "colliders": [..], "noncolliders": [..]}; absent keys are empty.
Hints load_hints(const std::string& path, int p);

void write_text(const std::string& path, const std::string& text);

}  // namespace adjustkit
