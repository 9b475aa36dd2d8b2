#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "semirfd/graded_index.hpp"

namespace semirfd {

  using Scalar      = std::complex<double>;
  using DenseMatrix = Eigen::MatrixXcd;

  //! One tensor factor of a graded truncation: basis elements of level <= level.
  struct Factor {
    std::shared_ptr<GradedIndex const> index;
    int                                level;
  };

  //! A graded truncation ⊗_i span{e_x : level(x) <= level_i}.
  //!
  //! Tensor bases are ordered with the first factor most significant.
  //! Because each factor's truncation is a prefix of the next level up,
  //! a space embeds into any space with the same factors and levels at
  //! least as large.
  class Space {
   public:
    Space() = default;
    Space(std::shared_ptr<GradedIndex const> index, int level);
    explicit Space(std::vector<Factor> factors);

    std::size_t dim() const noexcept {
      return _dim;
    }
    std::vector<Factor> const& factors() const noexcept {
      return _factors;
    }
    std::size_t factor_dim(std::size_t i) const {
      return _factor_dims.at(i);
    }

    //! Position in the tensor basis from per-factor positions.
    std::size_t join(std::span<std::size_t const> parts) const;
    std::vector<std::size_t> split(std::size_t index) const;

    //! Whether every factor of *this sits inside the matching factor of `larger`.
    bool embeds_into(Space const& larger) const noexcept;
    //! Position of basis vector `index` of *this inside `larger`.
    std::size_t embed(std::size_t index, Space const& larger) const;
    //! Inverse of embed; npos when the basis vector of `larger` lies outside.
    std::size_t locate(std::size_t index_in_larger, Space const& larger) const;

    std::string label(std::size_t index) const;
    std::string describe() const;

    friend bool operator==(Space const& a, Space const& b) noexcept;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

   private:
    std::vector<Factor>      _factors;
    std::vector<std::size_t> _factor_dims;
    std::size_t              _dim = 0;
  };

  Space tensor(Space const& a, Space const& b);

  struct Entry {
    std::size_t row;
    std::size_t col;
    Scalar      value;
  };

  //! An exact linear map between graded truncations, stored as merged
  //! triplets sorted by (col, row). Exact zeros are pruned.
  class SparseOperator {
   public:
    SparseOperator() = default;
    SparseOperator(Space domain, Space codomain, std::vector<Entry> entries);

    static SparseOperator identity(Space const& space);
    static SparseOperator zero(Space domain, Space codomain);

    Space const& domain() const noexcept {
      return _domain;
    }
    Space const& codomain() const noexcept {
      return _codomain;
    }
    std::vector<Entry> const& entries() const noexcept {
      return _entries;
    }
    std::size_t nnz() const noexcept {
      return _entries.size();
    }
    std::size_t rows() const noexcept {
      return _codomain.dim();
    }
    std::size_t cols() const noexcept {
      return _domain.dim();
    }
    Scalar at(std::size_t row, std::size_t col) const;

    SparseOperator adjoint() const;
    SparseOperator scaled(Scalar c) const;
    //! Same map with a larger codomain (the inclusion composed after it).
    SparseOperator extend_codomain(Space const& larger) const;
    //! Compression: Q_cod · A · Q_dom with smaller spaces.
    SparseOperator restrict_to(Space const& domain, Space const& codomain) const;

    std::vector<Scalar> apply(std::span<Scalar const> x) const;
    DenseMatrix         dense() const;

    //! Largest |entry difference|; spaces must agree.
    double max_abs_diff(SparseOperator const& other) const;

    friend bool operator==(SparseOperator const& a, SparseOperator const& b);
    friend SparseOperator operator+(SparseOperator const& a, SparseOperator const& b);

   private:
    Space              _domain;
    Space              _codomain;
    std::vector<Entry> _entries;
  };

  //! A ∘ B; requires B.codomain() == A.domain().
  SparseOperator compose(SparseOperator const& a, SparseOperator const& b);
  //! Kronecker product, first factor most significant on both sides.
  SparseOperator tensor_product(SparseOperator const& a, SparseOperator const& b);

  struct NormOptions {
    //! Dense SVD when rows·cols is below dense_limit².
    std::size_t dense_limit    = 2000;
    double      rel_tol        = 1e-9;
    int         max_iterations = 100000;
  };

  //! Largest singular value.
  double operator_norm(SparseOperator const& a, NormOptions const& opts = {});
  double operator_norm(DenseMatrix const& a);

  //! A coefficient vector over a basis.
  struct VectorInSpace {
    Space               space;
    std::vector<Scalar> coeffs;

    VectorInSpace(Space s) : space(std::move(s)), coeffs(space.dim()) {}
    static VectorInSpace basis(Space s, std::size_t index) {
      VectorInSpace v(std::move(s));
      v.coeffs.at(index) = 1.0;
      return v;
    }
    double norm() const;
  };

  VectorInSpace apply(SparseOperator const& a, VectorInSpace const& v);

}  // namespace semirfd
