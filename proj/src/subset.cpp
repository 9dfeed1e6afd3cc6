#include "adjustkit/subset.hpp"

#include <cstdio>
#include <sstream>

#include "adjustkit/error.hpp"

namespace adjustkit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::EmptyGroup: return "EmptyGroup";
    case ErrorKind::TooFewObservations: return "TooFewObservations";
    case ErrorKind::SingularCovariance: return "SingularCovariance";
    case ErrorKind::SliceTooSmall: return "SliceTooSmall";
    case ErrorKind::SingularBlock: return "SingularBlock";
    case ErrorKind::InvalidMechanism: return "InvalidMechanism";
    case ErrorKind::ContradictoryHints: return "ContradictoryHints";
    case ErrorKind::UnknownModel: return "UnknownModel";
    case ErrorKind::CyclicGraph: return "CyclicGraph";
    case ErrorKind::InvalidGraph: return "InvalidGraph";
    case ErrorKind::InvalidIndex: return "InvalidIndex";
    case ErrorKind::Schema: return "Schema";
    case ErrorKind::Numerical: return "Numerical";
  }
  return "Unknown";
}

void check_dimension(int p) {
  if (p < 1 || p > kMaxDimension) {
    throw Error(ErrorKind::DimensionTooLarge,
                "p = " + std::to_string(p) + " outside 1.." + std::to_string(kMaxDimension));
  }
}

SubsetId SubsetId::from_indices(const std::vector<int>& indices, int p) {
  SubsetId s{0u, p};
  for (int i : indices) {
    if (i < 1 || i > p) {
      throw Error(ErrorKind::InvalidIndex,
                  "index " + std::to_string(i) + " outside 1.." + std::to_string(p));
    }
    s = s.with(i);
  }
  return s;
}

std::vector<int> SubsetId::indices() const {
  std::vector<int> out;
  out.reserve(size());
  for (std::uint32_t m = mask; m != 0; m &= m - 1) out.push_back(std::countr_zero(m) + 1);
  return out;
}

std::vector<int> SubsetId::positions() const {
  std::vector<int> out;
  out.reserve(size());
  for (std::uint32_t m = mask; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

std::string SubsetId::to_string() const {
  std::string out = "{";
  bool first = true;
  for (int i : indices()) {
    if (!first) out += ',';
    out += std::to_string(i);
    first = false;
  }
  return out + "}";
}

std::string SubsetId::to_hex() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%x", mask);
  return buf;
}

SubsetId parse_indices(const std::string& text, int p) {
  std::vector<int> indices;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto b = token.find_first_not_of(" \t{}");
    if (b == std::string::npos) continue;
    const auto e = token.find_last_not_of(" \t{}");
    const std::string core = token.substr(b, e - b + 1);
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(core, &used);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidIndex, "cannot parse index '" + core + "'");
    }
    if (used != core.size()) throw Error(ErrorKind::InvalidIndex, "cannot parse index '" + core + "'");
    indices.push_back(value);
  }
  return SubsetId::from_indices(indices, p);
}

}  // namespace adjustkit
