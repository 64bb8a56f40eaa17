#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace citeprof {

/// The six citation-profile categories.
enum class Category : std::uint8_t { PeakInit, PeakMul, PeakLate, MonDec, MonIncr, Oth };

inline constexpr std::size_t kNumCategories = 6;

inline constexpr std::array<Category, kNumCategories> kAllCategories = {
    Category::PeakInit, Category::PeakMul, Category::PeakLate,
    Category::MonDec,   Category::MonIncr, Category::Oth};

constexpr std::size_t index_of(Category c) { return static_cast<std::size_t>(c); }

std::string_view to_string(Category c);

/// Case-sensitive lookup of the canonical name ("PeakInit", ...).
std::optional<Category> parse_category(std::string_view name);

/// Dense per-category storage indexed by Category.
template <typename T>
struct PerCategory {
  std::array<T, kNumCategories> values{};

  T& operator[](Category c) { return values[index_of(c)]; }
  const T& operator[](Category c) const { return values[index_of(c)]; }

  bool operator==(const PerCategory&) const = default;
};

}  // namespace citeprof
