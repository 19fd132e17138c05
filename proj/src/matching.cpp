#include "ortholoc/matching.hpp"

#include <algorithm>

namespace ortholoc {

MatchMethod match_method_from_string(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "ssd") return MatchMethod::kSsd;
  if (s == "sad") return MatchMethod::kSad;
  if (s == "ncc") return MatchMethod::kNcc;
  if (s == "wncc") return MatchMethod::kWncc;
  throw std::invalid_argument("unknown match method: " + name);
}

std::string to_string(MatchMethod method) {
  switch (method) {
    case MatchMethod::kSsd:
      return "SSD";
    case MatchMethod::kSad:
      return "SAD";
    case MatchMethod::kNcc:
      return "NCC";
    case MatchMethod::kWncc:
      return "WNCC";
  }
  return "?";
}

}  // namespace ortholoc
