#pragma once

#include "semirfd/enumeration.hpp"
#include "semirfd/sparse_operator.hpp"

namespace semirfd {

  //! span{e_p : |p| <= level} inside l^2(P), basis in (length, shortlex) order.
  Space graded_space(TablePtr const& table, int level);

  //! λ_p from level <= `level` into level <= level+|p|, e_q ↦ e_{pq}.
  //! Exact; throws DepthError if the table bound is below level+|p| and
  //! InvariantFailure if the table is not cancellative.
  SparseOperator lambda(TablePtr const& table, Element p, int level);

  //! λ_p* on level <= `level`: e_r ↦ e_q when r = pq, else 0.
  SparseOperator lambda_adjoint(TablePtr const& table, Element p, int level);

}  // namespace semirfd
