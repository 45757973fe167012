/*
 * Copyright 2026 The groupwise-secagg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GSA_MATRIX_H_
#define GSA_MATRIX_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "gsa/field.h"

namespace gsa {

// Dense row-major matrix over a prime field. Entries are always reduced.
class FieldMatrix {
 public:
  FieldMatrix() : field_(kDefaultModulus) {}
  FieldMatrix(size_t rows, size_t cols, const PrimeField& field)
      : rows_(rows), cols_(cols), field_(field), data_(rows * cols, 0) {}
  FieldMatrix(size_t rows, size_t cols, Residue q)
      : FieldMatrix(rows, cols, PrimeField(q)) {}

  static FieldMatrix Identity(size_t n, const PrimeField& field);
  // Row-major signed entries, reduced into [0, q).
  static FieldMatrix FromSigned(size_t rows, size_t cols,
                                const PrimeField& field,
                                std::initializer_list<int64_t> values);
  static FieldMatrix FromSigned(size_t rows, size_t cols,
                                const PrimeField& field,
                                std::span<const int64_t> values);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  const PrimeField& field() const { return field_; }
  Residue modulus() const { return field_.modulus(); }

  Residue& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  Residue operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  std::span<Residue> Row(size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const Residue> Row(size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const Residue> data() const { return data_; }

  std::vector<Residue> Column(size_t c) const;
  void SetColumn(size_t c, std::span<const Residue> values);
  void SwapRows(size_t a, size_t b);

  FieldMatrix Transpose() const;
  FieldMatrix SelectColumns(std::span<const size_t> columns) const;
  FieldMatrix SelectRows(std::span<const size_t> rows) const;

  friend bool operator==(const FieldMatrix& a, const FieldMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.modulus() == b.modulus() && a.data_ == b.data_;
  }

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  PrimeField field_;
  std::vector<Residue> data_;
};

FieldMatrix Multiply(const FieldMatrix& a, const FieldMatrix& b);
// Stacks matrices with equal column counts (and moduli) vertically.
FieldMatrix VStack(std::span<const FieldMatrix> blocks);
// U-fold block diagonal diag(m, m, ..., m).
FieldMatrix BlockDiagonal(const FieldMatrix& m, size_t copies);
bool IsZero(const FieldMatrix& m);

struct RowEchelon {
  FieldMatrix reduced;
  std::vector<size_t> pivot_columns;
  size_t rank() const { return pivot_columns.size(); }
};

// Gauss-Jordan elimination. Columns are scanned left to right; the pivot of
// each column is the first row at or below the current position holding a
// nonzero entry.
RowEchelon ReducedRowEchelon(FieldMatrix m);

size_t Rank(const FieldMatrix& m);

// Rows span {x : x * m = 0}; (rows(m) - rank(m)) x rows(m), rows independent.
FieldMatrix LeftNullBasis(const FieldMatrix& m);

// x with a * x = b. Throws Error(kSingularMatrix) if a is not invertible.
FieldMatrix SolveSquare(const FieldMatrix& a, const FieldMatrix& b);

FieldMatrix RandomMatrix(size_t rows, size_t cols, Residue q, uint64_t seed);

}  // namespace gsa

#endif  // GSA_MATRIX_H_
