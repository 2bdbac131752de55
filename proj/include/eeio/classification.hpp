#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "eeio/errors.hpp"

namespace eeio {

enum class Granularity { coarse, fine, custom };

struct SectorEntry {
  std::string code;
  std::string label;
  std::string region;

  bool operator==(const SectorEntry&) const = default;
};

/// Ordered, region-tagged list of sector/commodity codes. The entry order is
/// the matrix axis order everywhere in the model; two objects may only be
/// combined when their code sequences are identical.
class Classification {
 public:
  Classification() = default;

  Classification(std::vector<SectorEntry> entries, Granularity granularity)
      : entries_(std::move(entries)), granularity_(granularity) {
    if (entries_.empty()) {
      throw Error(ErrorCode::EmptyClassification, "classification has no entries");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      auto [it, inserted] = index_.emplace(entries_[i].code, i);
      if (!inserted) {
        throw Error(ErrorCode::DuplicateCode,
                    "duplicate code '" + entries_[i].code + "'");
      }
    }
  }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const SectorEntry& at(std::size_t i) const { return entries_.at(i); }
  const std::vector<SectorEntry>& entries() const noexcept { return entries_; }
  Granularity granularity() const noexcept { return granularity_; }

  std::optional<std::size_t> index_of(const std::string& code) const {
    auto it = index_.find(code);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const std::string& code) const {
    return index_.contains(code);
  }

  /// True when both classifications list the same codes in the same order.
  bool same_axis(const Classification& other) const {
    if (entries_.size() != other.entries_.size()) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].code != other.entries_[i].code) return false;
    }
    return true;
  }

  bool operator==(const Classification& other) const {
    return entries_ == other.entries_ && granularity_ == other.granularity_;
  }

 private:
  std::vector<SectorEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  Granularity granularity_ = Granularity::custom;
};

}  // namespace eeio
