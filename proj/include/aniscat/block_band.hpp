// Complex block-banded linear systems with block bandwidth 3 and their
// direct solution by block elimination.
//
// Block (n, n+o), o in [-3, 3], is stored in structured form
//   scalar * I + F diag(channel) F^-1 + diag(grid),
// where F is the grid <-> channel transform of the angular mesh. Every block
// produced by the radial discretization has this form, so storage per block
// row is O(B) rather than O(B^2). The solver materializes dense blocks only
// inside its moving elimination window.
#pragma once

#include <array>
#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "aniscat/grids.hpp"

namespace aniscat {

inline constexpr int kBlockBandwidth = 3;

struct StructuredBlock {
  cplx scalar{0.0, 0.0};
  Eigen::VectorXcd channel;  // empty when absent
  Eigen::VectorXcd grid;     // empty when absent

  bool is_zero() const;
  bool is_scalar() const { return channel.size() == 0 && grid.size() == 0; }
  void add_channel(const Eigen::VectorXcd& values);
  void add_grid(const Eigen::VectorXcd& values);
  Eigen::MatrixXcd dense(const FourierBasis& basis) const;
};

class BlockBandSystem {
 public:
  // Block rows 0..rows-1, block size B = basis->size(), nrhs right-hand sides.
  BlockBandSystem(std::shared_ptr<const FourierBasis> basis, int rows,
                  int nrhs);

  int block_size() const { return block_size_; }
  int rows() const { return rows_; }
  int nrhs() const { return nrhs_; }
  const FourierBasis& basis() const { return *basis_; }

  // Offset o = column - row in [-3, 3]; columns outside [0, rows) are invalid.
  StructuredBlock& block(int row, int offset);
  const StructuredBlock& block(int row, int offset) const;
  bool in_band(int row, int offset) const;

  // Right-hand side of a block row as a B x nrhs matrix. An empty matrix
  // means zero.
  Eigen::MatrixXcd& rhs(int row) { return rhs_[row]; }
  const Eigen::MatrixXcd& rhs(int row) const { return rhs_[row]; }
  bool has_rhs(int row) const { return rhs_[row].size() != 0; }

  // A x for x given as per-row B x nrhs blocks.
  std::vector<Eigen::MatrixXcd> apply(
      const std::vector<Eigen::MatrixXcd>& x) const;

  // Expanded dense matrix and right-hand side; intended for small test
  // systems only.
  Eigen::MatrixXcd to_dense() const;
  Eigen::MatrixXcd dense_rhs() const;

  // Number of block columns row `row` touches with a nonzero block.
  int occupied_columns(int row) const;

 private:
  std::shared_ptr<const FourierBasis> basis_;
  int block_size_;
  int rows_;
  int nrhs_;
  // diagonals_[o + 3][row] holds block (row, row + o).
  std::array<std::vector<StructuredBlock>, 2 * kBlockBandwidth + 1> diagonals_;
  std::vector<Eigen::MatrixXcd> rhs_;
};

// Solution rows first_row..rows-1, each a B x nrhs matrix.
struct BandSolution {
  int first_row = 0;
  std::vector<Eigen::MatrixXcd> values;

  const Eigen::MatrixXcd& row(int n) const { return values[n - first_row]; }
};

// Block elimination without interchanges between block rows; each pivot
// block is factored with partial pivoting. Only the elimination data of rows
// >= first_row is kept, so memory is O((rows - first_row) B^2). Throws
// kNumerical with the block-row index on a numerically singular pivot.
BandSolution solve_band_rows(const BlockBandSystem& system, int first_row);

// ||A x - F||_2 / ||F||_2 for a full solution (first_row == 0).
double relative_residual(const BlockBandSystem& system,
                         const BandSolution& solution);

}  // namespace aniscat
