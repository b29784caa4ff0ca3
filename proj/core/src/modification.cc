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

#include "deltasvm/modification.h"

#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace deltasvm {

ModificationSet::ModificationSet(std::vector<CellEdit> edits) {
  // Stable sort keeps input order among duplicates; the last one wins.
  std::stable_sort(edits.begin(), edits.end(),
                   [](const CellEdit& a, const CellEdit& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });
  for (const CellEdit& e : edits) {
    if (!edits_.empty() && edits_.back().row == e.row &&
        edits_.back().col == e.col) {
      edits_.back().value = e.value;
    } else {
      edits_.push_back(e);
    }
  }

  for (std::size_t k = 0; k < edits_.size(); ++k) {
    if (rows_.empty() || rows_.back() != edits_[k].row) {
      rows_.push_back(edits_[k].row);
      row_begin_.push_back(k);
    }
  }
  row_begin_.push_back(edits_.size());

  col_order_.resize(edits_.size());
  std::iota(col_order_.begin(), col_order_.end(), std::size_t{0});
  std::stable_sort(col_order_.begin(), col_order_.end(),
                   [this](std::size_t a, std::size_t b) {
                     return edits_[a].col < edits_[b].col;
                   });
  for (std::size_t k = 0; k < col_order_.size(); ++k) {
    const std::size_t c = edits_[col_order_[k]].col;
    if (cols_.empty() || cols_.back() != c) {
      cols_.push_back(c);
      col_begin_.push_back(k);
    }
  }
  col_begin_.push_back(edits_.size());
}

std::span<const CellEdit> ModificationSet::RowEdits(std::size_t i) const {
  auto it = std::lower_bound(rows_.begin(), rows_.end(), i);
  if (it == rows_.end() || *it != i) return {};
  const auto slot = static_cast<std::size_t>(it - rows_.begin());
  return std::span<const CellEdit>(edits_).subspan(
      row_begin_[slot], row_begin_[slot + 1] - row_begin_[slot]);
}

std::vector<CellEdit> ModificationSet::ColEdits(std::size_t j) const {
  std::vector<CellEdit> out;
  ForEachColEdit(j, [&](const CellEdit& e) { out.push_back(e); });
  return out;
}

std::optional<double> ModificationSet::Find(std::size_t i,
                                            std::size_t j) const {
  for (const CellEdit& e : RowEdits(i)) {
    if (e.col == j) return e.value;
  }
  return std::nullopt;
}

void ModificationSet::CheckBounds(std::size_t n, std::size_t d) const {
  for (const CellEdit& e : edits_) {
    if (e.row >= n || e.col >= d) {
      throw std::out_of_range("edit (" + std::to_string(e.row) + ", " +
                              std::to_string(e.col) +
                              ") outside a " + std::to_string(n) + "x" +
                              std::to_string(d) + " matrix");
    }
  }
}

OverlayView::OverlayView(const SparseDataset& base,
                         const ModificationSet& delta)
    : base_(&base), delta_(&delta) {
  delta.CheckBounds(base.num_rows(), base.num_cols());
}

double OverlayView::value(std::size_t i, std::size_t j) const {
  if (auto v = delta_->Find(i, j)) return *v;
  return base_->value(i, j);
}

SparseDataset ApplyModifications(const SparseDataset& data,
                                 const ModificationSet& mods) {
  OverlayView view(data, mods);
  std::vector<std::vector<Entry>> rows(data.num_rows());
  std::vector<int> labels(data.labels().begin(), data.labels().end());
  for (std::size_t i = 0; i < data.num_rows(); ++i) {
    if (mods.RowEdits(i).empty()) {
      rows[i] = data.RowCopy(i);
      continue;
    }
    view.ForEachInRow(i, [&](std::size_t j, double v) {
      rows[i].push_back({j, v});
    });
  }
  return SparseDataset::FromRows(data.num_cols(), std::move(rows),
                                 std::move(labels));
}

std::string ModificationsToJson(const ModificationSet& mods) {
  auto arr = nlohmann::json::array();
  for (const CellEdit& e : mods.edits()) {
    arr.push_back({{"i", e.row}, {"j", e.col}, {"v", e.value}});
  }
  return arr.dump();
}

ModificationSet ModificationsFromJson(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  if (!doc.is_array()) {
    throw std::invalid_argument("modification set must be a JSON array");
  }
  std::vector<CellEdit> edits;
  edits.reserve(doc.size());
  for (const auto& item : doc) {
    edits.push_back({item.at("i").get<std::size_t>(),
                     item.at("j").get<std::size_t>(),
                     item.at("v").get<double>()});
  }
  return ModificationSet(std::move(edits));
}

}  // namespace deltasvm
