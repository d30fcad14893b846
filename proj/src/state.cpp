#include "lazysp/state.hpp"

#include <string>

namespace lazysp {

SearchState::SearchState(std::size_t edge_count)
    : status_(edge_count, EdgeStatus::kUnevaluated), valid_(edge_count), invalid_(edge_count) {}

void SearchState::record(EdgeId e, bool valid) {
  if (e >= status_.size()) throw ContractError("edge " + std::to_string(e) + " out of range");
  if (status_[e] != EdgeStatus::kUnevaluated)
    throw ContractError("edge " + std::to_string(e) + " is already evaluated");
  status_[e] = valid ? EdgeStatus::kValid : EdgeStatus::kInvalid;
  if (valid)
    valid_.insert(e);
  else
    invalid_.insert(e);
  order_.push_back(e);
}

std::vector<int> SearchState::as_vector() const {
  std::vector<int> out;
  out.reserve(status_.size());
  for (EdgeStatus s : status_) out.push_back(static_cast<int>(s));
  return out;
}

std::uint64_t SearchState::code() const {
  if (status_.size() > 40) throw ContractError("state code requires at most 40 edges");
  std::uint64_t c = 0;
  for (auto it = status_.rbegin(); it != status_.rend(); ++it) c = c * 3 + static_cast<std::uint64_t>(static_cast<int>(*it) + 1);
  return c;
}

}  // namespace lazysp
