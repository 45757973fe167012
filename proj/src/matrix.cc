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

#include "gsa/matrix.h"

#include <algorithm>
#include <string>

#include "gsa/error.h"
#include "gsa/rng.h"
#include "gsa/simd/kernels.h"

namespace gsa {

FieldMatrix FieldMatrix::Identity(size_t n, const PrimeField& field) {
  FieldMatrix m(n, n, field);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

FieldMatrix FieldMatrix::FromSigned(size_t rows, size_t cols,
                                    const PrimeField& field,
                                    std::initializer_list<int64_t> values) {
  return FromSigned(rows, cols, field,
                    std::span<const int64_t>(values.begin(), values.size()));
}

FieldMatrix FieldMatrix::FromSigned(size_t rows, size_t cols,
                                    const PrimeField& field,
                                    std::span<const int64_t> values) {
  if (values.size() != rows * cols) {
    throw Error(ErrorCode::kInvalidArgument,
                "expected " + std::to_string(rows * cols) + " entries, got " +
                    std::to_string(values.size()));
  }
  FieldMatrix m(rows, cols, field);
  for (size_t i = 0; i < values.size(); ++i) {
    m.data_[i] = field.FromSigned(values[i]);
  }
  return m;
}

std::vector<Residue> FieldMatrix::Column(size_t c) const {
  std::vector<Residue> out(rows_);
  for (size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void FieldMatrix::SetColumn(size_t c, std::span<const Residue> values) {
  for (size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

void FieldMatrix::SwapRows(size_t a, size_t b) {
  if (a == b) return;
  std::swap_ranges(data_.begin() + a * cols_, data_.begin() + (a + 1) * cols_,
                   data_.begin() + b * cols_);
}

FieldMatrix FieldMatrix::Transpose() const {
  FieldMatrix t(cols_, rows_, field_);
  for (size_t r = 0; r < rows_; ++r) {
    for (size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

FieldMatrix FieldMatrix::SelectColumns(std::span<const size_t> columns) const {
  FieldMatrix out(rows_, columns.size(), field_);
  for (size_t r = 0; r < rows_; ++r) {
    for (size_t i = 0; i < columns.size(); ++i) {
      out(r, i) = (*this)(r, columns[i]);
    }
  }
  return out;
}

FieldMatrix FieldMatrix::SelectRows(std::span<const size_t> rows) const {
  FieldMatrix out(rows.size(), cols_, field_);
  for (size_t i = 0; i < rows.size(); ++i) {
    std::copy_n(Row(rows[i]).begin(), cols_, out.Row(i).begin());
  }
  return out;
}

FieldMatrix Multiply(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.cols() != b.rows() || a.modulus() != b.modulus()) {
    throw Error(ErrorCode::kInvalidArgument,
                "multiply: shape " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " by " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  const Residue q = a.modulus();
  FieldMatrix out(a.rows(), b.cols(), a.field());
  for (size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.Row(i);
    for (size_t k = 0; k < a.cols(); ++k) {
      simd::AxpyMod(dst, b.Row(k), a(i, k), q);
    }
  }
  return out;
}

FieldMatrix VStack(std::span<const FieldMatrix> blocks) {
  if (blocks.empty()) return FieldMatrix();
  size_t rows = 0;
  const size_t cols = blocks.front().cols();
  for (const FieldMatrix& b : blocks) {
    if (b.cols() != cols || b.modulus() != blocks.front().modulus()) {
      throw Error(ErrorCode::kInvalidArgument, "vstack: mismatched blocks");
    }
    rows += b.rows();
  }
  FieldMatrix out(rows, cols, blocks.front().field());
  size_t r = 0;
  for (const FieldMatrix& b : blocks) {
    for (size_t i = 0; i < b.rows(); ++i, ++r) {
      std::copy_n(b.Row(i).begin(), cols, out.Row(r).begin());
    }
  }
  return out;
}

FieldMatrix BlockDiagonal(const FieldMatrix& m, size_t copies) {
  FieldMatrix out(m.rows() * copies, m.cols() * copies, m.field());
  for (size_t c = 0; c < copies; ++c) {
    for (size_t r = 0; r < m.rows(); ++r) {
      std::copy_n(m.Row(r).begin(), m.cols(),
                  out.Row(c * m.rows() + r).begin() + c * m.cols());
    }
  }
  return out;
}

bool IsZero(const FieldMatrix& m) {
  return std::all_of(m.data().begin(), m.data().end(),
                     [](Residue v) { return v == 0; });
}

namespace {

// Brings `m` to reduced row echelon form in place, applying the same row
// operations to `companion` when given. Returns the pivot columns.
std::vector<size_t> Eliminate(FieldMatrix& m, FieldMatrix* companion) {
  const PrimeField& f = m.field();
  const Residue q = f.modulus();
  std::vector<size_t> pivots;
  size_t row = 0;
  for (size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    size_t pivot = row;
    while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    m.SwapRows(row, pivot);
    if (companion) companion->SwapRows(row, pivot);

    const Residue inv = f.Inv(m(row, col));
    simd::ScaleMod(m.Row(row), inv, q);
    if (companion) simd::ScaleMod(companion->Row(row), inv, q);

    for (size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      const Residue factor = f.Neg(m(r, col));
      simd::AxpyMod(m.Row(r), m.Row(row), factor, q);
      if (companion) {
        simd::AxpyMod(companion->Row(r), companion->Row(row), factor, q);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

RowEchelon ReducedRowEchelon(FieldMatrix m) {
  std::vector<size_t> pivots = Eliminate(m, nullptr);
  return RowEchelon{std::move(m), std::move(pivots)};
}

size_t Rank(const FieldMatrix& m) {
  if (m.empty()) return 0;
  FieldMatrix work = m;
  return Eliminate(work, nullptr).size();
}

FieldMatrix LeftNullBasis(const FieldMatrix& m) {
  const size_t n = m.rows();
  // x * m = 0  <=>  m^T * x^T = 0: a right null space of the transpose.
  RowEchelon rref = ReducedRowEchelon(m.Transpose());
  std::vector<bool> is_pivot(n, false);
  for (size_t c : rref.pivot_columns) is_pivot[c] = true;

  const PrimeField& f = m.field();
  FieldMatrix basis(n - rref.rank(), n, f);
  size_t out = 0;
  for (size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    basis(out, free) = 1;
    for (size_t i = 0; i < rref.rank(); ++i) {
      basis(out, rref.pivot_columns[i]) = f.Neg(rref.reduced(i, free));
    }
    ++out;
  }
  return basis;
}

FieldMatrix SolveSquare(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != a.rows() ||
      a.modulus() != b.modulus()) {
    throw Error(ErrorCode::kInvalidArgument, "solve: shape mismatch");
  }
  FieldMatrix lhs = a;
  FieldMatrix x = b;
  const size_t rank = Eliminate(lhs, &x).size();
  if (rank < a.rows()) {
    throw Error(ErrorCode::kSingularMatrix,
                "rank " + std::to_string(rank) + " < " +
                    std::to_string(a.rows()));
  }
  return x;
}

FieldMatrix RandomMatrix(size_t rows, size_t cols, Residue q, uint64_t seed) {
  FieldMatrix m(rows, cols, q);
  Rng rng(seed, Stream::kGeneric);
  for (size_t r = 0; r < rows; ++r) rng.Fill(m.Row(r), q);
  return m;
}

}  // namespace gsa
