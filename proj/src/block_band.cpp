#include "aniscat/block_band.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "aniscat/errors.hpp"

namespace aniscat {

namespace {

constexpr int kWindow = kBlockBandwidth + 1;
constexpr int kWidth = 2 * kBlockBandwidth + 1;
constexpr double kSingularRcond = 1e-13;

Eigen::MatrixXcd apply_structured(const StructuredBlock& block,
                                  const FourierBasis& basis,
                                  const Eigen::MatrixXcd& x) {
  Eigen::MatrixXcd out = block.scalar * x;
  if (block.channel.size() != 0) {
    Eigen::MatrixXcd c = basis.to_channel * x;
    c = block.channel.asDiagonal() * c;
    out.noalias() += basis.to_grid * c;
  }
  if (block.grid.size() != 0) {
    out += block.grid.asDiagonal() * x;
  }
  return out;
}

// Block of the elimination window: zero, a multiple of the identity, or dense.
struct WindowBlock {
  enum class Kind { kZero, kScalar, kDense };
  Kind kind = Kind::kZero;
  cplx s{0.0, 0.0};
  Eigen::MatrixXcd d;

  void make_dense(int B) {
    if (kind == Kind::kDense) return;
    d = Eigen::MatrixXcd::Identity(B, B) * s;
    if (kind == Kind::kZero) d.setZero();
    kind = Kind::kDense;
  }

  // this -= L * X with X dense.
  void subtract_product(const WindowBlock& L, const Eigen::MatrixXcd& X) {
    const int B = static_cast<int>(X.rows());
    make_dense(B);
    if (L.kind == Kind::kScalar) {
      d -= L.s * X;
    } else if (L.kind == Kind::kDense) {
      d.noalias() -= L.d * X;
    }
  }
};

}  // namespace

bool StructuredBlock::is_zero() const {
  return scalar == cplx(0.0, 0.0) && channel.size() == 0 && grid.size() == 0;
}

void StructuredBlock::add_channel(const Eigen::VectorXcd& values) {
  if (channel.size() == 0) {
    channel = values;
  } else {
    channel += values;
  }
}

void StructuredBlock::add_grid(const Eigen::VectorXcd& values) {
  if (grid.size() == 0) {
    grid = values;
  } else {
    grid += values;
  }
}

Eigen::MatrixXcd StructuredBlock::dense(const FourierBasis& basis) const {
  const int B = basis.size();
  Eigen::MatrixXcd out;
  if (channel.size() != 0) {
    out = basis.circulant(channel);
  } else {
    out = Eigen::MatrixXcd::Zero(B, B);
  }
  out.diagonal().array() += scalar;
  if (grid.size() != 0) out.diagonal() += grid;
  return out;
}

BlockBandSystem::BlockBandSystem(std::shared_ptr<const FourierBasis> basis,
                                 int rows, int nrhs)
    : basis_(std::move(basis)),
      block_size_(basis_->size()),
      rows_(rows),
      nrhs_(nrhs) {
  if (rows <= 0 || nrhs <= 0) {
    throw Error(ErrorCategory::kInvalidArgument,
                "block-band system needs positive row and rhs counts");
  }
  for (auto& diagonal : diagonals_) diagonal.resize(rows);
  rhs_.resize(rows);
}

bool BlockBandSystem::in_band(int row, int offset) const {
  const int col = row + offset;
  return row >= 0 && row < rows_ && offset >= -kBlockBandwidth &&
         offset <= kBlockBandwidth && col >= 0 && col < rows_;
}

StructuredBlock& BlockBandSystem::block(int row, int offset) {
  if (!in_band(row, offset)) {
    throw Error(ErrorCategory::kInvalidArgument,
                "block (" + std::to_string(row) + ", " +
                    std::to_string(row + offset) + ") outside the band");
  }
  return diagonals_[offset + kBlockBandwidth][row];
}

const StructuredBlock& BlockBandSystem::block(int row, int offset) const {
  if (!in_band(row, offset)) {
    throw Error(ErrorCategory::kInvalidArgument,
                "block (" + std::to_string(row) + ", " +
                    std::to_string(row + offset) + ") outside the band");
  }
  return diagonals_[offset + kBlockBandwidth][row];
}

int BlockBandSystem::occupied_columns(int row) const {
  int count = 0;
  for (int o = -kBlockBandwidth; o <= kBlockBandwidth; ++o) {
    if (in_band(row, o) && !block(row, o).is_zero()) ++count;
  }
  return count;
}

std::vector<Eigen::MatrixXcd> BlockBandSystem::apply(
    const std::vector<Eigen::MatrixXcd>& x) const {
  if (static_cast<int>(x.size()) != rows_) {
    throw Error(ErrorCategory::kInvalidArgument,
                "apply: vector has the wrong number of block rows");
  }
  std::vector<Eigen::MatrixXcd> y(rows_);
  for (int n = 0; n < rows_; ++n) {
    y[n] = Eigen::MatrixXcd::Zero(block_size_, x[n].cols());
    for (int o = -kBlockBandwidth; o <= kBlockBandwidth; ++o) {
      if (!in_band(n, o)) continue;
      const StructuredBlock& b = block(n, o);
      if (b.is_zero()) continue;
      y[n] += apply_structured(b, *basis_, x[n + o]);
    }
  }
  return y;
}

Eigen::MatrixXcd BlockBandSystem::to_dense() const {
  const int B = block_size_;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(rows_ * B, rows_ * B);
  for (int n = 0; n < rows_; ++n) {
    for (int o = -kBlockBandwidth; o <= kBlockBandwidth; ++o) {
      if (!in_band(n, o)) continue;
      const StructuredBlock& b = block(n, o);
      if (b.is_zero()) continue;
      A.block(n * B, (n + o) * B, B, B) = b.dense(*basis_);
    }
  }
  return A;
}

Eigen::MatrixXcd BlockBandSystem::dense_rhs() const {
  const int B = block_size_;
  Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(rows_ * B, nrhs_);
  for (int n = 0; n < rows_; ++n) {
    if (has_rhs(n)) F.block(n * B, 0, B, nrhs_) = rhs_[n];
  }
  return F;
}

BandSolution solve_band_rows(const BlockBandSystem& system, int first_row) {
  const int rows = system.rows();
  const int B = system.block_size();
  const int nrhs = system.nrhs();
  if (first_row < 0 || first_row >= rows) {
    throw Error(ErrorCategory::kInvalidArgument,
                "solve_band_rows: first_row out of range");
  }
  const FourierBasis& basis = system.basis();

  // window[r % kWindow][o + 3] holds block (r, r + o) of the partially
  // eliminated matrix for the rows r = n..n+3 currently in flight.
  std::array<std::array<WindowBlock, kWidth>, kWindow> window;
  std::array<Eigen::MatrixXcd, kWindow> window_rhs;

  auto load_row = [&](int r) {
    auto& slots = window[r % kWindow];
    for (int o = -kBlockBandwidth; o <= kBlockBandwidth; ++o) {
      WindowBlock& w = slots[o + kBlockBandwidth];
      w = WindowBlock{};
      if (!system.in_band(r, o)) continue;
      const StructuredBlock& sb = system.block(r, o);
      if (sb.is_zero()) continue;
      if (sb.is_scalar()) {
        w.kind = WindowBlock::Kind::kScalar;
        w.s = sb.scalar;
      } else {
        w.kind = WindowBlock::Kind::kDense;
        w.d = sb.dense(basis);
      }
    }
    window_rhs[r % kWindow] = system.rhs(r);
  };

  const int kept = rows - first_row;
  std::vector<std::array<Eigen::MatrixXcd, kBlockBandwidth>> upper(kept);
  std::vector<Eigen::MatrixXcd> reduced_rhs(kept);

  for (int r = 0; r < std::min(kWindow, rows); ++r) load_row(r);

  Eigen::MatrixXcd pivot_inverse(B, B);
  std::array<Eigen::MatrixXcd, kBlockBandwidth> X;
  for (int n = 0; n < rows; ++n) {
    auto& pivot_row = window[n % kWindow];
    WindowBlock& P = pivot_row[kBlockBandwidth];
    P.make_dense(B);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(P.d);
    const double rcond = lu.rcond();
    if (!(rcond > kSingularRcond) || !std::isfinite(rcond)) {
      throw Error(ErrorCategory::kNumerical,
                  "numerically singular pivot block at block row " +
                      std::to_string(n) + " (rcond " + std::to_string(rcond) +
                      ")");
    }
    pivot_inverse = lu.inverse();

    for (int k = 1; k <= kBlockBandwidth; ++k) {
      X[k - 1].resize(0, 0);
      if (n + k >= rows) continue;
      const WindowBlock& Uk = pivot_row[kBlockBandwidth + k];
      if (Uk.kind == WindowBlock::Kind::kScalar) {
        X[k - 1] = Uk.s * pivot_inverse;
      } else if (Uk.kind == WindowBlock::Kind::kDense) {
        X[k - 1].noalias() = pivot_inverse * Uk.d;
      }
    }
    Eigen::MatrixXcd y;
    if (window_rhs[n % kWindow].size() != 0) {
      y.noalias() = pivot_inverse * window_rhs[n % kWindow];
    }

    for (int i = 1; i <= kBlockBandwidth && n + i < rows; ++i) {
      auto& target = window[(n + i) % kWindow];
      WindowBlock& L = target[kBlockBandwidth - i];
      if (L.kind == WindowBlock::Kind::kZero) continue;
      for (int k = 1; k <= kBlockBandwidth; ++k) {
        if (X[k - 1].size() == 0) continue;
        target[kBlockBandwidth + k - i].subtract_product(L, X[k - 1]);
      }
      if (y.size() != 0) {
        Eigen::MatrixXcd& r = window_rhs[(n + i) % kWindow];
        if (r.size() == 0) r = Eigen::MatrixXcd::Zero(B, nrhs);
        if (L.kind == WindowBlock::Kind::kScalar) {
          r -= L.s * y;
        } else {
          r.noalias() -= L.d * y;
        }
      }
      L = WindowBlock{};
    }

    if (n >= first_row) {
      upper[n - first_row] = X;
      reduced_rhs[n - first_row] = std::move(y);
    }
    if (n + kWindow < rows) load_row(n + kWindow);
  }

  BandSolution solution;
  solution.first_row = first_row;
  solution.values.resize(kept);
  for (int n = rows - 1; n >= first_row; --n) {
    Eigen::MatrixXcd v = reduced_rhs[n - first_row].size() != 0
                             ? reduced_rhs[n - first_row]
                             : Eigen::MatrixXcd::Zero(B, nrhs);
    for (int k = 1; k <= kBlockBandwidth && n + k < rows; ++k) {
      const Eigen::MatrixXcd& Xk = upper[n - first_row][k - 1];
      if (Xk.size() == 0) continue;
      v.noalias() -= Xk * solution.values[n + k - first_row];
    }
    solution.values[n - first_row] = std::move(v);
  }
  return solution;
}

double relative_residual(const BlockBandSystem& system,
                         const BandSolution& solution) {
  if (solution.first_row != 0) {
    throw Error(ErrorCategory::kInvalidArgument,
                "relative_residual needs a full solution");
  }
  const std::vector<Eigen::MatrixXcd> Ax = system.apply(solution.values);
  double num = 0.0;
  double den = 0.0;
  for (int n = 0; n < system.rows(); ++n) {
    if (system.has_rhs(n)) {
      num += (Ax[n] - system.rhs(n)).squaredNorm();
      den += system.rhs(n).squaredNorm();
    } else {
      num += Ax[n].squaredNorm();
    }
  }
  if (den == 0.0) return std::sqrt(num);
  return std::sqrt(num / den);
}

}  // namespace aniscat
