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

#ifndef DELTASVM_SPARSE_DATA_H_
#define DELTASVM_SPARSE_DATA_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace deltasvm {

// One stored nonzero. In a row view `index` is the column, in a column view
// it is the row.
struct Entry {
  std::size_t index = 0;
  double value = 0.0;

  friend bool operator==(const Entry&, const Entry&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Labeled sparse matrix X with labels y in {-1, +1}, stored twice: row-major
// and column-major. The signed matrix Z = diag(y) X is never materialized;
// use SignedValue() or multiply by label(i).
//
// Immutable after construction.
class SparseDataset {
 public:
  SparseDataset() = default;

  // Validates and takes ownership of the rows. Each row must have strictly
  // increasing column indices below `num_cols`; stored zeros are dropped.
  // Throws std::invalid_argument on violation.
  static SparseDataset FromRows(std::size_t num_cols,
                                std::vector<std::vector<Entry>> rows,
                                std::vector<int> labels);

  std::size_t num_rows() const { return labels_.size(); }
  std::size_t num_cols() const { return num_cols_; }
  std::size_t nnz() const { return row_entries_.size(); }

  std::span<const Entry> row(std::size_t i) const {
    return {row_entries_.data() + row_offsets_[i],
            row_offsets_[i + 1] - row_offsets_[i]};
  }
  std::span<const Entry> col(std::size_t j) const {
    return {col_entries_.data() + col_offsets_[j],
            col_offsets_[j + 1] - col_offsets_[j]};
  }

  int label(std::size_t i) const { return labels_[i]; }
  std::span<const int> labels() const { return labels_; }

  // x_ij, zero when not stored. O(log nnz(row i)).
  double value(std::size_t i, std::size_t j) const;
  // z_ij = y_i x_ij.
  double SignedValue(std::size_t i, std::size_t j) const {
    return labels_[i] * value(i, j);
  }

  // Materializes row i as an owning vector (used by the split and by tests).
  std::vector<Entry> RowCopy(std::size_t i) const {
    auto r = row(i);
    return {r.begin(), r.end()};
  }

  friend bool operator==(const SparseDataset& a, const SparseDataset& b) {
    return a.num_cols_ == b.num_cols_ && a.labels_ == b.labels_ &&
           a.row_offsets_ == b.row_offsets_ && a.row_entries_ == b.row_entries_;
  }

 private:
  void BuildColumns();

  std::size_t num_cols_ = 0;
  std::vector<int> labels_;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<Entry> row_entries_;
  std::vector<std::size_t> col_offsets_{0};
  std::vector<Entry> col_entries_;
};

// Reads "<label> <idx>:<val> ..." lines with 1-based, strictly increasing
// indices. Positive labels map to +1, everything else to -1. Blank lines are
// skipped. Throws ParseError.
SparseDataset ParseLibsvm(std::istream& in);
SparseDataset ParseLibsvmString(const std::string& text);
SparseDataset LoadLibsvmFile(const std::string& path);

// Emits shortest round-trip decimals, so ParseLibsvm(WriteLibsvm(x)) == x.
void WriteLibsvm(std::ostream& out, const SparseDataset& data);
std::string ToLibsvmString(const SparseDataset& data);

// Scales every nonzero row to unit L2 norm.
SparseDataset NormalizeRows(const SparseDataset& data);

// Seeded shuffle, then the first ceil(fraction * n) rows go to the first half.
std::pair<SparseDataset, SparseDataset> SplitTrainTest(
    const SparseDataset& data, double train_fraction, std::uint64_t seed);

// Row subset in the given order.
SparseDataset SelectRows(const SparseDataset& data,
                         std::span<const std::size_t> rows);

}  // namespace deltasvm

#endif  // DELTASVM_SPARSE_DATA_H_
