#include "semirfd/sparse_operator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SVD>

#include "semirfd/error.hpp"

namespace semirfd {

  ////////////////////////////////////////////////////////////////////////
  // Space
  ////////////////////////////////////////////////////////////////////////

  Space::Space(std::shared_ptr<GradedIndex const> index, int level)
      : Space(std::vector<Factor>{Factor{std::move(index), level}}) {}

  Space::Space(std::vector<Factor> factors) : _factors(std::move(factors)), _dim(1) {
    for (auto const& f : _factors) {
      if (!f.index) {
        throw InvalidArgument("space factor without an index");
      }
      if (f.level > f.index->max_level()) {
        throw DepthError("truncation level " + std::to_string(f.level)
                         + " exceeds the index depth " + std::to_string(f.index->max_level()));
      }
      _factor_dims.push_back(f.index->size_through(f.level));
      _dim *= _factor_dims.back();
    }
    if (_factors.empty()) {
      _dim = 0;
    }
  }

  std::size_t Space::join(std::span<std::size_t const> parts) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < _factors.size(); ++i) {
      idx = idx * _factor_dims[i] + parts[i];
    }
    return idx;
  }

  std::vector<std::size_t> Space::split(std::size_t index) const {
    std::vector<std::size_t> parts(_factors.size());
    for (std::size_t i = _factors.size(); i-- > 0;) {
      parts[i] = index % _factor_dims[i];
      index /= _factor_dims[i];
    }
    return parts;
  }

  bool Space::embeds_into(Space const& larger) const noexcept {
    if (_factors.size() != larger._factors.size()) {
      return false;
    }
    for (std::size_t i = 0; i < _factors.size(); ++i) {
      if (!_factors[i].index->same_basis(*larger._factors[i].index)
          || _factors[i].level > larger._factors[i].level) {
        return false;
      }
    }
    return true;
  }

  std::size_t Space::embed(std::size_t index, Space const& larger) const {
    if (_factors.size() == 1) {
      return index;
    }
    auto parts = split(index);
    return larger.join(parts);
  }

  std::size_t Space::locate(std::size_t index_in_larger, Space const& larger) const {
    auto parts = larger.split(index_in_larger);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i] >= _factor_dims[i]) {
        return npos;
      }
    }
    return join(parts);
  }

  std::string Space::label(std::size_t index) const {
    auto        parts = split(index);
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i != 0) {
        out += " ⊗ ";
      }
      out += _factors[i].index->label(parts[i]);
    }
    return out;
  }

  std::string Space::describe() const {
    std::string out;
    for (std::size_t i = 0; i < _factors.size(); ++i) {
      if (i != 0) {
        out += " ⊗ ";
      }
      out += "level<=" + std::to_string(_factors[i].level);
    }
    return out + " (dim " + std::to_string(_dim) + ")";
  }

  bool operator==(Space const& a, Space const& b) noexcept {
    return a.embeds_into(b) && b.embeds_into(a);
  }

  Space tensor(Space const& a, Space const& b) {
    auto factors = a.factors();
    factors.insert(factors.end(), b.factors().begin(), b.factors().end());
    return Space(std::move(factors));
  }

  ////////////////////////////////////////////////////////////////////////
  // SparseOperator
  ////////////////////////////////////////////////////////////////////////

  SparseOperator::SparseOperator(Space domain, Space codomain, std::vector<Entry> entries)
      : _domain(std::move(domain)), _codomain(std::move(codomain)) {
    for (auto const& e : entries) {
      if (e.row >= _codomain.dim() || e.col >= _domain.dim()) {
        throw InvalidArgument("operator entry (" + std::to_string(e.row) + ", "
                              + std::to_string(e.col) + ") outside "
                              + std::to_string(_codomain.dim()) + "x"
                              + std::to_string(_domain.dim()));
      }
    }
    std::sort(entries.begin(), entries.end(), [](Entry const& x, Entry const& y) {
      return x.col != y.col ? x.col < y.col : x.row < y.row;
    });
    for (auto const& e : entries) {
      if (!_entries.empty() && _entries.back().row == e.row && _entries.back().col == e.col) {
        _entries.back().value += e.value;
      } else {
        _entries.push_back(e);
      }
    }
    std::erase_if(_entries, [](Entry const& e) { return e.value == Scalar(0); });
  }

  SparseOperator SparseOperator::identity(Space const& space) {
    std::vector<Entry> entries;
    entries.reserve(space.dim());
    for (std::size_t i = 0; i < space.dim(); ++i) {
      entries.push_back({i, i, 1.0});
    }
    return SparseOperator(space, space, std::move(entries));
  }

  SparseOperator SparseOperator::zero(Space domain, Space codomain) {
    return SparseOperator(std::move(domain), std::move(codomain), {});
  }

  Scalar SparseOperator::at(std::size_t row, std::size_t col) const {
    auto it = std::lower_bound(_entries.begin(), _entries.end(), Entry{row, col, 0.0},
                               [](Entry const& x, Entry const& y) {
                                 return x.col != y.col ? x.col < y.col : x.row < y.row;
                               });
    if (it != _entries.end() && it->row == row && it->col == col) {
      return it->value;
    }
    return 0.0;
  }

  SparseOperator SparseOperator::adjoint() const {
    std::vector<Entry> entries;
    entries.reserve(_entries.size());
    for (auto const& e : _entries) {
      entries.push_back({e.col, e.row, std::conj(e.value)});
    }
    return SparseOperator(_codomain, _domain, std::move(entries));
  }

  SparseOperator SparseOperator::scaled(Scalar c) const {
    auto entries = _entries;
    for (auto& e : entries) {
      e.value *= c;
    }
    return SparseOperator(_domain, _codomain, std::move(entries));
  }

  SparseOperator SparseOperator::extend_codomain(Space const& larger) const {
    if (!_codomain.embeds_into(larger)) {
      throw InvalidArgument("extend_codomain: " + _codomain.describe() + " does not embed into "
                            + larger.describe());
    }
    auto entries = _entries;
    for (auto& e : entries) {
      e.row = _codomain.embed(e.row, larger);
    }
    return SparseOperator(_domain, larger, std::move(entries));
  }

  SparseOperator SparseOperator::restrict_to(Space const& domain, Space const& codomain) const {
    if (!domain.embeds_into(_domain) || !codomain.embeds_into(_codomain)) {
      throw InvalidArgument("restrict_to: target spaces must embed into the operator's spaces");
    }
    std::vector<Entry> entries;
    for (auto const& e : _entries) {
      auto const r = codomain.locate(e.row, _codomain);
      auto const c = domain.locate(e.col, _domain);
      if (r != Space::npos && c != Space::npos) {
        entries.push_back({r, c, e.value});
      }
    }
    return SparseOperator(domain, codomain, std::move(entries));
  }

  std::vector<Scalar> SparseOperator::apply(std::span<Scalar const> x) const {
    if (x.size() != cols()) {
      throw InvalidArgument("apply: vector length does not match the domain");
    }
    std::vector<Scalar> y(rows());
    for (auto const& e : _entries) {
      y[e.row] += e.value * x[e.col];
    }
    return y;
  }

  DenseMatrix SparseOperator::dense() const {
    DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(rows()),
                                      static_cast<Eigen::Index>(cols()));
    for (auto const& e : _entries) {
      m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
    }
    return m;
  }

  double SparseOperator::max_abs_diff(SparseOperator const& other) const {
    if (!(_domain == other._domain) || !(_codomain == other._codomain)) {
      throw InvalidArgument("max_abs_diff: operators act between different spaces");
    }
    double worst = 0.0;
    auto   diff  = *this + other.scaled(-1.0);
    for (auto const& e : diff._entries) {
      worst = std::max(worst, std::abs(e.value));
    }
    return worst;
  }

  bool operator==(SparseOperator const& a, SparseOperator const& b) {
    if (!(a._domain == b._domain) || !(a._codomain == b._codomain)
        || a._entries.size() != b._entries.size()) {
      return false;
    }
    for (std::size_t i = 0; i < a._entries.size(); ++i) {
      auto const& x = a._entries[i];
      auto const& y = b._entries[i];
      if (x.row != y.row || x.col != y.col || x.value != y.value) {
        return false;
      }
    }
    return true;
  }

  SparseOperator operator+(SparseOperator const& a, SparseOperator const& b) {
    if (!(a._domain == b._domain) || !(a._codomain == b._codomain)) {
      throw InvalidArgument("operator sum: spaces differ (" + a._codomain.describe() + " vs "
                            + b._codomain.describe() + ")");
    }
    auto entries = a._entries;
    entries.insert(entries.end(), b._entries.begin(), b._entries.end());
    return SparseOperator(a._domain, a._codomain, std::move(entries));
  }

  SparseOperator compose(SparseOperator const& a, SparseOperator const& b) {
    if (!(b.codomain() == a.domain())) {
      throw InvalidArgument("compose: codomain " + b.codomain().describe()
                            + " does not match domain " + a.domain().describe());
    }
    // a's entries are sorted by column, i.e. by the intermediate index.
    std::vector<std::size_t> col_start(a.cols() + 1, 0);
    for (auto const& e : a.entries()) {
      ++col_start[e.col + 1];
    }
    for (std::size_t k = 0; k < a.cols(); ++k) {
      col_start[k + 1] += col_start[k];
    }
    std::vector<Entry> out;
    for (auto const& eb : b.entries()) {
      for (std::size_t i = col_start[eb.row]; i < col_start[eb.row + 1]; ++i) {
        auto const& ea = a.entries()[i];
        out.push_back({ea.row, eb.col, ea.value * eb.value});
      }
    }
    return SparseOperator(b.domain(), a.codomain(), std::move(out));
  }

  SparseOperator tensor_product(SparseOperator const& a, SparseOperator const& b) {
    Space const        dom = tensor(a.domain(), b.domain());
    Space const        cod = tensor(a.codomain(), b.codomain());
    std::vector<Entry> out;
    out.reserve(a.nnz() * b.nnz());
    for (auto const& x : a.entries()) {
      for (auto const& y : b.entries()) {
        out.push_back({x.row * b.rows() + y.row, x.col * b.cols() + y.col, x.value * y.value});
      }
    }
    return SparseOperator(dom, cod, std::move(out));
  }

  ////////////////////////////////////////////////////////////////////////
  // Norms
  ////////////////////////////////////////////////////////////////////////

  double operator_norm(DenseMatrix const& a) {
    if (a.size() == 0) {
      return 0.0;
    }
    Eigen::BDCSVD<DenseMatrix> svd(a);
    return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()(0);
  }

  namespace {
    double vec_norm(std::vector<Scalar> const& v) {
      double s = 0.0;
      for (auto const& x : v) {
        s += std::norm(x);
      }
      return std::sqrt(s);
    }
  }  // namespace

  double operator_norm(SparseOperator const& a, NormOptions const& opts) {
    if (a.nnz() == 0) {
      return 0.0;
    }
    if (a.rows() * a.cols() < opts.dense_limit * opts.dense_limit) {
      return operator_norm(a.dense());
    }
    // Power iteration on A*A from a fixed pseudo-random start.
    auto const                             adj = a.adjoint();
    std::mt19937_64                        gen(0x5eed);
    std::uniform_real_distribution<double> unif(0.5, 1.5);
    std::vector<Scalar>                    x(a.cols());
    for (auto& v : x) {
      v = unif(gen);
    }
    double nx = vec_norm(x);
    for (auto& v : x) {
      v /= nx;
    }
    double mu       = 0.0;
    double residual = 0.0;
    for (int it = 0; it < opts.max_iterations; ++it) {
      auto   y      = adj.apply(a.apply(x));
      double mu_new = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        mu_new += std::real(std::conj(x[i]) * y[i]);
      }
      double ny = vec_norm(y);
      if (ny == 0.0) {
        return 0.0;
      }
      residual = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        residual += std::norm(y[i] - mu_new * x[i]);
      }
      residual = std::sqrt(residual) / ny;
      bool const settled = std::abs(mu_new - mu) <= opts.rel_tol * mu_new;
      mu                 = mu_new;
      for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = y[i] / ny;
      }
      if (settled && residual <= std::sqrt(opts.rel_tol)) {
        return std::sqrt(mu);
      }
    }
    throw NonConvergence("power iteration did not converge (residual "
                             + std::to_string(residual) + ")",
                         residual);
  }

  double VectorInSpace::norm() const {
    return vec_norm(coeffs);
  }

  VectorInSpace apply(SparseOperator const& a, VectorInSpace const& v) {
    if (!(a.domain() == v.space)) {
      throw InvalidArgument("apply: vector does not live in the operator's domain");
    }
    VectorInSpace out(a.codomain());
    out.coeffs = a.apply(v.coeffs);
    return out;
  }

}  // namespace semirfd
