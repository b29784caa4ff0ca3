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

#include "deltasvm/sparse_data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <random>
#include <sstream>
#include <string_view>

namespace deltasvm {

SparseDataset SparseDataset::FromRows(std::size_t num_cols,
                                      std::vector<std::vector<Entry>> rows,
                                      std::vector<int> labels) {
  if (rows.size() != labels.size()) {
    throw std::invalid_argument("row count and label count differ");
  }
  SparseDataset out;
  out.num_cols_ = num_cols;
  out.labels_ = std::move(labels);
  std::size_t total = 0;
  for (const auto& r : rows) total += r.size();
  out.row_entries_.reserve(total);
  out.row_offsets_.reserve(rows.size() + 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (out.labels_[i] != 1 && out.labels_[i] != -1) {
      throw std::invalid_argument("label of row " + std::to_string(i) +
                                  " is not +1/-1");
    }
    std::size_t prev = 0;
    bool first = true;
    for (const Entry& e : rows[i]) {
      if (e.index >= num_cols) {
        throw std::invalid_argument("column index out of range in row " +
                                    std::to_string(i));
      }
      if (!first && e.index <= prev) {
        throw std::invalid_argument("column indices not increasing in row " +
                                    std::to_string(i));
      }
      first = false;
      prev = e.index;
      if (e.value != 0.0) out.row_entries_.push_back(e);
    }
    out.row_offsets_.push_back(out.row_entries_.size());
  }
  out.BuildColumns();
  return out;
}

void SparseDataset::BuildColumns() {
  std::vector<std::size_t> counts(num_cols_ + 1, 0);
  for (const Entry& e : row_entries_) ++counts[e.index + 1];
  std::partial_sum(counts.begin(), counts.end(), counts.begin());
  col_offsets_ = counts;
  col_entries_.assign(row_entries_.size(), Entry{});
  std::vector<std::size_t> cursor(counts.begin(), counts.end() - 1);
  for (std::size_t i = 0; i + 1 < row_offsets_.size(); ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const Entry& e = row_entries_[k];
      col_entries_[cursor[e.index]++] = Entry{i, e.value};
    }
  }
}

double SparseDataset::value(std::size_t i, std::size_t j) const {
  const auto r = row(i);
  auto it = std::lower_bound(
      r.begin(), r.end(), j,
      [](const Entry& e, std::size_t key) { return e.index < key; });
  if (it != r.end() && it->index == j) return it->value;
  return 0.0;
}

namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' ||
         c == '\f';
}

std::string_view NextToken(std::string_view& rest) {
  std::size_t b = 0;
  while (b < rest.size() && IsSpace(rest[b])) ++b;
  std::size_t e = b;
  while (e < rest.size() && !IsSpace(rest[e])) ++e;
  auto tok = rest.substr(b, e - b);
  rest.remove_prefix(e);
  return tok;
}

bool ParseDouble(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool ParseIndex(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

SparseDataset ParseLibsvm(std::istream& in) {
  std::vector<std::vector<Entry>> rows;
  std::vector<int> labels;
  std::size_t num_cols = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    auto label_tok = NextToken(rest);
    if (label_tok.empty()) continue;
    double label = 0.0;
    if (!ParseDouble(label_tok, label)) {
      throw ParseError(line_no, "bad label '" + std::string(label_tok) + "'");
    }
    std::vector<Entry> row;
    std::size_t prev = 0;
    for (auto tok = NextToken(rest); !tok.empty(); tok = NextToken(rest)) {
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, "expected <idx>:<val>, got '" +
                                      std::string(tok) + "'");
      }
      std::size_t idx = 0;
      double val = 0.0;
      if (!ParseIndex(tok.substr(0, colon), idx) || idx == 0) {
        throw ParseError(line_no, "bad index in '" + std::string(tok) + "'");
      }
      if (!ParseDouble(tok.substr(colon + 1), val)) {
        throw ParseError(line_no, "bad value in '" + std::string(tok) + "'");
      }
      if (idx <= prev) {
        throw ParseError(line_no, "indices must be strictly increasing");
      }
      prev = idx;
      num_cols = std::max(num_cols, idx);
      if (val != 0.0) row.push_back({idx - 1, val});
    }
    rows.push_back(std::move(row));
    labels.push_back(label > 0 ? 1 : -1);
  }
  return SparseDataset::FromRows(num_cols, std::move(rows), std::move(labels));
}

SparseDataset ParseLibsvmString(const std::string& text) {
  std::istringstream in(text);
  return ParseLibsvm(in);
}

SparseDataset LoadLibsvmFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return ParseLibsvm(in);
}

void WriteLibsvm(std::ostream& out, const SparseDataset& data) {
  char buf[64];
  for (std::size_t i = 0; i < data.num_rows(); ++i) {
    out << (data.label(i) > 0 ? "+1" : "-1");
    for (const Entry& e : data.row(i)) {
      auto res = std::to_chars(buf, buf + sizeof(buf), e.value);
      out << ' ' << (e.index + 1) << ':'
          << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

std::string ToLibsvmString(const SparseDataset& data) {
  std::ostringstream out;
  WriteLibsvm(out, data);
  return out.str();
}

SparseDataset NormalizeRows(const SparseDataset& data) {
  std::vector<std::vector<Entry>> rows(data.num_rows());
  std::vector<int> labels(data.labels().begin(), data.labels().end());
  for (std::size_t i = 0; i < data.num_rows(); ++i) {
    rows[i] = data.RowCopy(i);
    double sq = 0.0;
    for (const Entry& e : rows[i]) sq += e.value * e.value;
    if (sq == 0.0) continue;
    const double norm = std::sqrt(sq);
    for (Entry& e : rows[i]) e.value /= norm;
  }
  return SparseDataset::FromRows(data.num_cols(), std::move(rows),
                                 std::move(labels));
}

SparseDataset SelectRows(const SparseDataset& data,
                         std::span<const std::size_t> rows) {
  std::vector<std::vector<Entry>> out_rows;
  std::vector<int> labels;
  out_rows.reserve(rows.size());
  labels.reserve(rows.size());
  for (std::size_t i : rows) {
    out_rows.push_back(data.RowCopy(i));
    labels.push_back(data.label(i));
  }
  return SparseDataset::FromRows(data.num_cols(), std::move(out_rows),
                                 std::move(labels));
}

std::pair<SparseDataset, SparseDataset> SplitTrainTest(
    const SparseDataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must be in (0, 1)");
  }
  const std::size_t n = data.num_rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t k = n; k > 1; --k) {
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    std::swap(order[k - 1], order[pick(rng)]);
  }
  const auto n_train =
      static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(n)));
  std::span<const std::size_t> all(order);
  return {SelectRows(data, all.first(n_train)),
          SelectRows(data, all.subspan(n_train))};
}

}  // namespace deltasvm
