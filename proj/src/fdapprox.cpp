#include "semirfd/fdapprox.hpp"

#include <algorithm>
#include <set>

#include "semirfd/error.hpp"
#include "semirfd/linrep.hpp"

namespace semirfd {

  DivisorSubspace::DivisorSubspace(TablePtr table, std::vector<Element> F)
      : _table(std::move(table)), _F(std::move(F)) {
    if (_F.empty()) {
      throw InvalidArgument("F must be nonempty");
    }
    std::set<Element> basis;
    for (Element p : _F) {
      if (p.id >= _table->size()) {
        throw InvalidArgument("element of F lies outside the table");
      }
      for (Element r : _table->right_divisors(p)) {
        basis.insert(r);
      }
    }
    _basis.assign(basis.begin(), basis.end());
    for (Element r : _basis) {
      _max_length = std::max(_max_length, _table->length(r));
    }
  }

  std::optional<std::size_t> DivisorSubspace::index_of(Element x) const {
    auto it = std::lower_bound(_basis.begin(), _basis.end(), x);
    if (it != _basis.end() && *it == x) {
      return static_cast<std::size_t>(it - _basis.begin());
    }
    return std::nullopt;
  }

  DivisorSubspace build_Y(TablePtr const& table, std::span<Element const> F) {
    return DivisorSubspace(table, std::vector<Element>(F.begin(), F.end()));
  }

  DenseMatrix pi_F(DivisorSubspace const& Y, Element s) {
    auto const& table = *Y.table();
    table.require_cancellative();
    auto const  n = static_cast<Eigen::Index>(Y.dim());
    DenseMatrix m = DenseMatrix::Zero(n, n);
    int const   ls = table.length(s);
    for (std::size_t j = 0; j < Y.dim(); ++j) {
      Element const r = Y.basis()[j];
      // |sr| = |s|+|r|; anything longer than Y's longest element is outside Y.
      if (ls + table.length(r) > Y.max_length()) {
        continue;
      }
      if (auto i = Y.index_of(table.multiply(s, r))) {
        m(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(j)) = 1.0;
      }
    }
    return m;
  }

  DenseMatrix pi_F_adjoint(DivisorSubspace const& Y, Element s) {
    auto const& table = *Y.table();
    table.require_cancellative();
    auto const  n = static_cast<Eigen::Index>(Y.dim());
    DenseMatrix m = DenseMatrix::Zero(n, n);
    for (std::size_t j = 0; j < Y.dim(); ++j) {
      if (auto q = table.left_quotient(s, Y.basis()[j])) {
        if (auto i = Y.index_of(*q)) {
          m(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(j)) = 1.0;
        }
      }
    }
    return m;
  }

  DenseMatrix compress(SparseOperator const& a, DivisorSubspace const& Y) {
    for (Space const* sp : {&a.domain(), &a.codomain()}) {
      if (sp->factors().size() != 1 || !sp->factors()[0].index->same_basis(*Y.table())) {
        throw InvalidArgument("compress: operator does not act on l^2 of Y's monoid");
      }
    }
    if (Y.max_length() > a.domain().factors()[0].level
        || Y.max_length() > a.codomain().factors()[0].level) {
      throw DepthError("compress: operator domain does not contain Y_F");
    }
    auto const  n = static_cast<Eigen::Index>(Y.dim());
    DenseMatrix m = DenseMatrix::Zero(n, n);
    for (auto const& e : a.entries()) {
      auto i = Y.index_of(Element{static_cast<std::uint32_t>(e.row)});
      auto j = Y.index_of(Element{static_cast<std::uint32_t>(e.col)});
      if (i && j) {
        m(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(*j)) = e.value;
      }
    }
    return m;
  }

  KernelSetResult kernel_set(TablePtr const& table, std::span<Element const> F, int level) {
    if (level > table->bound()) {
      throw DepthError("kernel_set: level " + std::to_string(level) + " exceeds table bound "
                       + std::to_string(table->bound()));
    }
    DivisorSubspace const Y = build_Y(table, F);
    KernelSetResult       result;

    std::set<Element> support;
    for (Element r : Y.basis()) {
      for (Element q : table->left_divisors(r)) {
        if (table->length(q) <= level) {
          support.insert(q);
        }
      }
    }
    result.support.assign(support.begin(), support.end());

    std::vector<Element> mismatches;
    for (Element s : table->elements_through(level)) {
      bool const zero      = pi_F(Y, s).isZero(0.0);
      bool const predicted = support.count(s) == 0;
      if (zero) {
        result.kernel.push_back(s);
      }
      if (zero != predicted) {
        mismatches.push_back(s);
      }
    }
    if (!mismatches.empty()) {
      std::string w;
      for (Element s : mismatches) {
        w += (w.empty() ? "" : ", ") + table->format(s);
      }
      throw InvariantFailure("kernel set from matrices disagrees with the divisor formula at: "
                             + w);
    }
    return result;
  }

  std::optional<std::string> coinvariance_violation(DivisorSubspace const& Y, Element s) {
    auto const& table = Y.table();
    if (table->length(s) > Y.max_length()) {
      // λ_s* kills everything shorter than s.
      return std::nullopt;
    }
    SparseOperator const adj = lambda_adjoint(table, s, Y.max_length());
    for (auto const& e : adj.entries()) {
      Element const r{static_cast<std::uint32_t>(e.col)};
      Element const t{static_cast<std::uint32_t>(e.row)};
      if (Y.contains(r) && !Y.contains(t)) {
        return "λ_" + table->format(s) + "* e_" + table->format(r) + " = e_" + table->format(t)
               + " leaves Y_F";
      }
    }
    DenseMatrix const ambient = compress(adj, Y);
    if (ambient != pi_F_adjoint(Y, s)) {
      return "compressed λ_" + table->format(s) + "* differs from the ambient adjoint";
    }
    return std::nullopt;
  }

  StabilizationCertificate stabilization_index(TablePtr const&                   table,
                                               Element                           s,
                                               Element                           q,
                                               std::vector<std::vector<Element>> supersets) {
    Element const            sq = table->multiply(s, q);
    StabilizationCertificate cert;
    cert.F0 = {sq};
    supersets.insert(supersets.begin(), cert.F0);
    for (auto& F : supersets) {
      if (std::find(F.begin(), F.end(), sq) == F.end()) {
        F.push_back(sq);
      }
      DivisorSubspace const Y(table, F);
      ++cert.families_tested;
      auto const        qi = Y.index_of(q);
      auto const        ti = Y.index_of(sq);
      DenseMatrix const m  = pi_F(Y, s);
      Eigen::VectorXcd  expected = Eigen::VectorXcd::Zero(m.rows());
      expected(static_cast<Eigen::Index>(*ti)) = 1.0;
      std::string fam;
      for (Element p : F) {
        fam += (fam.empty() ? "" : ",") + table->format(p);
      }
      if (m.col(static_cast<Eigen::Index>(*qi)) != expected) {
        cert.ok = false;
        cert.failures.push_back("F={" + fam + "}: π_F(λ_" + table->format(s) + ")e_"
                                + table->format(q) + " != e_" + table->format(sq));
      }
      if (auto bad = coinvariance_violation(Y, s)) {
        cert.ok = false;
        cert.failures.push_back("F={" + fam + "}: " + *bad);
      }
    }
    return cert;
  }

}  // namespace semirfd
