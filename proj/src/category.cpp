#include "citeprof/category.hpp"

namespace citeprof {

namespace {
constexpr std::array<std::string_view, kNumCategories> kNames = {
    "PeakInit", "PeakMul", "PeakLate", "MonDec", "MonIncr", "Oth"};
}

std::string_view to_string(Category c) { return kNames[index_of(c)]; }

std::optional<Category> parse_category(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<Category>(i);
  }
  return std::nullopt;
}

}  // namespace citeprof
