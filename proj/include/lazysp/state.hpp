#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "lazysp/graph.hpp"

namespace lazysp {

enum class EdgeStatus : std::int8_t { kUnevaluated = -1, kInvalid = 0, kValid = 1 };

class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Evaluation record (E_valid, E_invalid): the MDP state of the search.
class SearchState {
 public:
  SearchState() = default;
  explicit SearchState(std::size_t edge_count);

  std::size_t edge_count() const { return status_.size(); }
  EdgeStatus status(EdgeId e) const { return status_.at(e); }
  bool is_evaluated(EdgeId e) const { return status(e) != EdgeStatus::kUnevaluated; }
  bool is_valid(EdgeId e) const { return status(e) == EdgeStatus::kValid; }
  bool is_invalid(EdgeId e) const { return status(e) == EdgeStatus::kInvalid; }

  const EdgeSet& valid() const { return valid_; }
  const EdgeSet& invalid() const { return invalid_; }
  /// Evaluated edges in the order they were recorded.
  std::span<const EdgeId> evaluated() const { return order_; }
  std::size_t evaluated_count() const { return order_.size(); }

  /// Records an evaluation outcome. Throws ContractError if already evaluated.
  void record(EdgeId e, bool valid);

  /// {-1, 0, 1} per edge: unevaluated, invalid, valid.
  std::vector<int> as_vector() const;

  /// Base-3 encoding of the status vector. Requires edge_count() <= 40.
  std::uint64_t code() const;

  friend bool operator==(const SearchState& a, const SearchState& b) { return a.status_ == b.status_; }

 private:
  std::vector<EdgeStatus> status_;
  EdgeSet valid_;
  EdgeSet invalid_;
  std::vector<EdgeId> order_;
};

}  // namespace lazysp
