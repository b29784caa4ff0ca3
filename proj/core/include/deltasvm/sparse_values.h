// Copyright 2026 The deltasvm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DELTASVM_SPARSE_VALUES_H_
#define DELTASVM_SPARSE_VALUES_H_

#include <algorithm>
#include <cstddef>
#include <unordered_map>
#include <utility>
#include <vector>

namespace deltasvm {

// Index -> value map stored as a sorted vector. Used for the small per-row
// and per-column overrides layered on top of cached O(n + d) arrays.
class SparseValues {
 public:
  using Item = std::pair<std::size_t, double>;

  SparseValues() = default;

  static SparseValues FromMap(const std::unordered_map<std::size_t, double>& m) {
    SparseValues out;
    out.items_.assign(m.begin(), m.end());
    std::sort(out.items_.begin(), out.items_.end());
    return out;
  }

  const double* Find(std::size_t index) const {
    auto it = std::lower_bound(
        items_.begin(), items_.end(), index,
        [](const Item& item, std::size_t key) { return item.first < key; });
    if (it == items_.end() || it->first != index) return nullptr;
    return &it->second;
  }

  double ValueOr(std::size_t index, double fallback) const {
    const double* v = Find(index);
    return v ? *v : fallback;
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

 private:
  std::vector<Item> items_;
};

}  // namespace deltasvm

#endif  // DELTASVM_SPARSE_VALUES_H_
