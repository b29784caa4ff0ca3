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

#ifndef DELTASVM_MODIFICATION_H_
#define DELTASVM_MODIFICATION_H_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deltasvm/sparse_data.h"

namespace deltasvm {

struct CellEdit {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;

  friend bool operator==(const CellEdit&, const CellEdit&) = default;
};

// A set of cell edits to X with at most one edit per cell. Edits are kept in
// row-major order, with a second column-major index, so that the edits of a
// single row or column are a contiguous range.
class ModificationSet {
 public:
  ModificationSet() = default;
  // Later edits to the same cell overwrite earlier ones.
  explicit ModificationSet(std::vector<CellEdit> edits);

  std::size_t size() const { return edits_.size(); }
  bool empty() const { return edits_.empty(); }

  // Row-major.
  std::span<const CellEdit> edits() const { return edits_; }

  // Sorted, distinct.
  std::span<const std::size_t> touched_rows() const { return rows_; }
  std::span<const std::size_t> touched_cols() const { return cols_; }

  std::span<const CellEdit> RowEdits(std::size_t i) const;
  // Edits of column j, ordered by row.
  std::vector<CellEdit> ColEdits(std::size_t j) const;
  template <typename Fn>
  void ForEachColEdit(std::size_t j, Fn&& fn) const;

  std::optional<double> Find(std::size_t i, std::size_t j) const;

  // Throws std::out_of_range unless every edit lies inside (n, d).
  void CheckBounds(std::size_t n, std::size_t d) const;

 private:
  std::vector<CellEdit> edits_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> row_begin_;  // parallel to rows_, plus sentinel
  std::vector<std::size_t> cols_;
  std::vector<std::size_t> col_begin_;  // parallel to cols_, plus sentinel
  std::vector<std::size_t> col_order_;  // positions in edits_, column-major
};

template <typename Fn>
void ModificationSet::ForEachColEdit(std::size_t j, Fn&& fn) const {
  auto it = std::lower_bound(cols_.begin(), cols_.end(), j);
  if (it == cols_.end() || *it != j) return;
  const auto slot = static_cast<std::size_t>(it - cols_.begin());
  for (std::size_t k = col_begin_[slot]; k < col_begin_[slot + 1]; ++k) {
    fn(edits_[col_order_[k]]);
  }
}

// X~ as the base dataset plus a delta, without materialization. Holds
// references; both arguments must outlive the view.
class OverlayView {
 public:
  // Throws std::out_of_range if an edit is outside the base dimensions.
  OverlayView(const SparseDataset& base, const ModificationSet& delta);

  const SparseDataset& base() const { return *base_; }
  const ModificationSet& delta() const { return *delta_; }

  std::size_t num_rows() const { return base_->num_rows(); }
  std::size_t num_cols() const { return base_->num_cols(); }
  int label(std::size_t i) const { return base_->label(i); }

  double value(std::size_t i, std::size_t j) const;

  // Visits the nonzeros of row i of X~ in column order as fn(col, value).
  template <typename Fn>
  void ForEachInRow(std::size_t i, Fn&& fn) const;
  // Visits the nonzeros of column j of X~ in row order as fn(row, value).
  template <typename Fn>
  void ForEachInCol(std::size_t j, Fn&& fn) const;

 private:
  const SparseDataset* base_;
  const ModificationSet* delta_;
};

template <typename Fn>
void OverlayView::ForEachInRow(std::size_t i, Fn&& fn) const {
  const auto base = base_->row(i);
  const auto edits = delta_->RowEdits(i);
  std::size_t a = 0, b = 0;
  while (a < base.size() || b < edits.size()) {
    if (b == edits.size() ||
        (a < base.size() && base[a].index < edits[b].col)) {
      fn(base[a].index, base[a].value);
      ++a;
    } else {
      if (a < base.size() && base[a].index == edits[b].col) ++a;
      if (edits[b].value != 0.0) fn(edits[b].col, edits[b].value);
      ++b;
    }
  }
}

template <typename Fn>
void OverlayView::ForEachInCol(std::size_t j, Fn&& fn) const {
  const auto base = base_->col(j);
  const auto edits = delta_->ColEdits(j);
  std::size_t a = 0, b = 0;
  while (a < base.size() || b < edits.size()) {
    if (b == edits.size() ||
        (a < base.size() && base[a].index < edits[b].row)) {
      fn(base[a].index, base[a].value);
      ++a;
    } else {
      if (a < base.size() && base[a].index == edits[b].row) ++a;
      if (edits[b].value != 0.0) fn(edits[b].row, edits[b].value);
      ++b;
    }
  }
}

// Materialized X~. Explicit zeros are dropped. Throws std::out_of_range.
SparseDataset ApplyModifications(const SparseDataset& data,
                                 const ModificationSet& mods);

// JSON array of {"i": int, "j": int, "v": float}.
std::string ModificationsToJson(const ModificationSet& mods);
ModificationSet ModificationsFromJson(const std::string& text);

}  // namespace deltasvm

#endif  // DELTASVM_MODIFICATION_H_
