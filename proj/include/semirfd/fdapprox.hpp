#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semirfd/enumeration.hpp"
#include "semirfd/sparse_operator.hpp"

namespace semirfd {

  //! Y_F = span{e_r : r ∈ R_p, p ∈ F}, the finite-dimensional subspace that
  //! every λ_s* leaves invariant. Basis sorted by element id.
  class DivisorSubspace {
   public:
    DivisorSubspace(TablePtr table, std::vector<Element> F);

    TablePtr const& table() const noexcept {
      return _table;
    }
    std::vector<Element> const& generators() const noexcept {
      return _F;
    }
    std::vector<Element> const& basis() const noexcept {
      return _basis;
    }
    std::size_t dim() const noexcept {
      return _basis.size();
    }
    //! Longest element in the basis (the depth needed to evaluate π_F).
    int max_length() const noexcept {
      return _max_length;
    }
    bool contains(Element x) const {
      return index_of(x).has_value();
    }
    std::optional<std::size_t> index_of(Element x) const;

   private:
    TablePtr             _table;
    std::vector<Element> _F;
    std::vector<Element> _basis;
    int                  _max_length = 0;
  };

  DivisorSubspace build_Y(TablePtr const& table, std::span<Element const> F);

  //! Matrix of π_F(λ_s) = Q_F λ_s Q_F on Y_F; entries are exactly 0 or 1.
  DenseMatrix pi_F(DivisorSubspace const& Y, Element s);
  //! Matrix of Q_F λ_s* Q_F on Y_F.
  DenseMatrix pi_F_adjoint(DivisorSubspace const& Y, Element s);

  //! Compression of an operator on l^2(P) to Y_F; the operator's domain and
  //! codomain must be single-factor truncations of Y's table containing Y_F.
  DenseMatrix compress(SparseOperator const& a, DivisorSubspace const& Y);

  struct KernelSetResult {
    //! {s : |s| <= level, π_F(λ_s) = 0}, from matrix nullity.
    std::vector<Element> kernel;
    //! ∪_{p∈F} ∪_{r∈R_p} L_r, restricted to |s| <= level.
    std::vector<Element> support;
  };

  //! Computes the kernel set twice, from matrix nullity and from the
  //! divisor-set complement, and throws InvariantFailure if they differ.
  KernelSetResult kernel_set(TablePtr const& table, std::span<Element const> F, int level);

  //! Whether λ_s* maps every basis vector of Y_F into Y_F ∪ {0}, checked on
  //! the ambient truncation of l^2(P). Returns a witness on failure.
  std::optional<std::string> coinvariance_violation(DivisorSubspace const& Y, Element s);

  struct StabilizationCertificate {
    std::vector<Element>     F0;  // {sq}
    std::size_t              families_tested = 0;
    bool                     ok              = true;
    std::vector<std::string> failures;
  };

  //! For every F in `supersets` (each is extended by F0 = {sq} if needed),
  //! verifies π_F(λ_s)e_q = e_{sq} and Q_F λ_s* Q_F = λ_s* Q_F exactly.
  //! F0 itself is always tested.
  StabilizationCertificate stabilization_index(TablePtr const&                  table,
                                               Element                          s,
                                               Element                          q,
                                               std::vector<std::vector<Element>> supersets = {});

}  // namespace semirfd
