#include "semirfd/coaction.hpp"

#include <set>

#include "semirfd/error.hpp"
#include "semirfd/linrep.hpp"

namespace semirfd {

  ////////////////////////////////////////////////////////////////////////
  // AlgebraElement
  ////////////////////////////////////////////////////////////////////////

  AlgebraElement::AlgebraElement(TablePtr table, Element p, Scalar c) : _table(std::move(table)) {
    add(p, c);
  }

  Scalar AlgebraElement::coefficient(Element p) const {
    auto it = _coeffs.find(p);
    return it == _coeffs.end() ? Scalar(0) : it->second;
  }

  int AlgebraElement::degree() const {
    int d = 0;
    for (auto const& [p, c] : _coeffs) {
      d = std::max(d, _table->length(p));
    }
    return d;
  }

  AlgebraElement& AlgebraElement::add(Element p, Scalar c) {
    if (p.id >= _table->size()) {
      throw InvalidArgument("algebra element support outside the table");
    }
    auto [it, inserted] = _coeffs.try_emplace(p, c);
    if (!inserted) {
      it->second += c;
    }
    if (it->second == Scalar(0)) {
      _coeffs.erase(it);
    }
    return *this;
  }

  AlgebraElement& AlgebraElement::operator+=(AlgebraElement const& other) {
    if (_table != other._table) {
      throw InvalidArgument("algebra elements over different tables");
    }
    for (auto const& [p, c] : other._coeffs) {
      add(p, c);
    }
    return *this;
  }

  AlgebraElement operator*(AlgebraElement const& a, AlgebraElement const& b) {
    if (a._table != b._table) {
      throw InvalidArgument("algebra elements over different tables");
    }
    AlgebraElement out(a._table);
    for (auto const& [p, c] : a._coeffs) {
      for (auto const& [q, d] : b._coeffs) {
        out.add(a._table->multiply(p, q), c * d);
      }
    }
    return out;
  }

  AlgebraElement operator*(Scalar c, AlgebraElement a) {
    AlgebraElement out(a._table);
    for (auto const& [p, v] : a._coeffs) {
      out.add(p, c * v);
    }
    return out;
  }

  bool operator==(AlgebraElement const& a, AlgebraElement const& b) {
    return a._table == b._table && a._coeffs == b._coeffs;
  }

  std::string AlgebraElement::format() const {
    if (_coeffs.empty()) {
      return "0";
    }
    std::string out;
    for (auto const& [p, c] : _coeffs) {
      if (!out.empty()) {
        out += " + ";
      }
      if (c != Scalar(1)) {
        out += c.imag() == 0 ? std::to_string(c.real())
                             : "(" + std::to_string(c.real()) + "," + std::to_string(c.imag())
                                   + ")";
      }
      out += "λ_" + _table->format(p);
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Coaction on truncations
  ////////////////////////////////////////////////////////////////////////

  SparseOperator regular_operator(AlgebraElement const& a, int level) {
    auto const&    table = a.table();
    Space const    dom   = graded_space(table, level);
    Space const    cod   = graded_space(table, level + a.degree());
    SparseOperator sum   = SparseOperator::zero(dom, cod);
    for (auto const& [p, c] : a.coefficients()) {
      sum = sum + lambda(table, p, level).scaled(c).extend_codomain(cod);
    }
    return sum;
  }

  SparseOperator delta_apply(ControlledMap const& phi, AlgebraElement const& a, int level_p,
                             int level_q) {
    if (a.table() != phi.source()) {
      throw InvalidArgument("delta_apply: element is not over the map's source monoid");
    }
    auto const& P = phi.source();
    auto const& Q = phi.target();
    int         extra_q = 0;
    for (auto const& [p, c] : a.coefficients()) {
      extra_q = std::max(extra_q, Q->length(phi(p)));
    }
    Space const    dom = tensor(graded_space(P, level_p), graded_space(Q, level_q));
    Space const    cod = tensor(graded_space(P, level_p + a.degree()),
                                graded_space(Q, level_q + extra_q));
    SparseOperator sum = SparseOperator::zero(dom, cod);
    for (auto const& [p, c] : a.coefficients()) {
      auto term = tensor_product(lambda(P, p, level_p), lambda(Q, phi(p), level_q));
      sum       = sum + term.scaled(c).extend_codomain(cod);
    }
    return sum;
  }

  SpectralDecomposition spectral_decompose(AlgebraElement const& a, ControlledMap const& phi) {
    if (a.table() != phi.source()) {
      throw InvalidArgument("spectral_decompose: element is not over the map's source monoid");
    }
    SpectralDecomposition parts;
    for (auto const& [p, c] : a.coefficients()) {
      auto [it, inserted] = parts.try_emplace(phi(p), a.table());
      it->second.add(p, c);
    }
    return parts;
  }

  Scalar apply_character(AlgebraElement const& a) {
    Scalar sum = 0.0;
    for (auto const& [p, c] : a.coefficients()) {
      sum += c;
    }
    return sum;
  }

  AlgebraElement character_reconstruct(SpectralDecomposition const& parts, TablePtr const& table) {
    AlgebraElement out(table);
    for (auto const& [q, part] : parts) {
      // χ(λ_q) = 1 on the second leg.
      out += part;
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Fell absorption
  ////////////////////////////////////////////////////////////////////////

  SparseOperator fell_map(ControlledMap const& phi, int level_p, int level_q) {
    auto const& P   = phi.source();
    auto const& Q   = phi.target();
    int const   top = level_q + phi.max_weight() * level_p;
    if (top > Q->bound()) {
      throw DepthError("fell_map: target table bound " + std::to_string(Q->bound())
                       + " below the required " + std::to_string(top));
    }
    Space const        dom = tensor(graded_space(P, level_p), graded_space(Q, level_q));
    Space const        cod = tensor(graded_space(P, level_p), graded_space(Q, top));
    std::size_t const  dq  = dom.factor_dim(1);
    std::vector<Entry> entries;
    entries.reserve(dom.dim());
    for (std::size_t col = 0; col < dom.dim(); ++col) {
      std::size_t const parts[2] = {col / dq, col % dq};
      Element const     p{static_cast<std::uint32_t>(parts[0])};
      Element const     k{static_cast<std::uint32_t>(parts[1])};
      std::size_t const target[2] = {parts[0], Q->multiply(phi(p), k).id};
      entries.push_back({cod.join(target), col, 1.0});
    }
    return SparseOperator(dom, cod, std::move(entries));
  }

  bool FellReport::ok() const {
    if (!isometry) {
      return false;
    }
    for (auto const& c : intertwining) {
      if (!c.ok) {
        return false;
      }
    }
    return true;
  }

  namespace {
    std::string first_difference(SparseOperator const& lhs, SparseOperator const& rhs) {
      auto const diff = lhs + rhs.scaled(-1.0);
      if (diff.nnz() == 0) {
        return {};
      }
      auto const& e = diff.entries().front();
      return "entry (" + lhs.codomain().label(e.row) + ", " + lhs.domain().label(e.col)
             + "): " + std::to_string(std::abs(lhs.at(e.row, e.col))) + " vs "
             + std::to_string(std::abs(rhs.at(e.row, e.col)));
    }
  }  // namespace

  FellReport fell_intertwiner(ControlledMap const& phi, int level_p, int level_q) {
    auto const& P = phi.source();
    auto const& Q = phi.target();
    int const   m = phi.max_weight();
    int const   b = level_q - m * level_p;
    if (b < 0) {
      throw DepthError("fell_intertwiner: L_Q = " + std::to_string(level_q)
                       + " cannot receive images of length up to "
                       + std::to_string(m * level_p));
    }
    FellReport report{fell_map(phi, level_p, b), false, {}};
    auto const gram = compose(report.W.adjoint(), report.W);
    report.isometry = gram == SparseOperator::identity(report.W.domain());

    if (level_p == 0) {
      return report;
    }
    auto const  w_in  = fell_map(phi, level_p - 1, b);
    auto const  id_q  = SparseOperator::identity(graded_space(Q, b));
    auto const& wider = report.W.codomain();
    for (std::size_t i = 0; i < P->presentation().number_of_generators(); ++i) {
      Element const g   = P->generator(i);
      auto const    lhs = compose(report.W, tensor_product(lambda(P, g, level_p - 1), id_q));
      auto const    rhs = compose(tensor_product(lambda(P, g, level_p - 1),
                                                 lambda(Q, phi(g), b + m * (level_p - 1))),
                                  w_in)
                           .extend_codomain(wider);
      bool const ok = lhs == rhs;
      report.intertwining.push_back({g, ok, ok ? std::string() : first_difference(lhs, rhs)});
    }
    return report;
  }

  ////////////////////////////////////////////////////////////////////////
  // Quotient spanning sets
  ////////////////////////////////////////////////////////////////////////

  SpanningSet qf_spanning_set(ControlledMap const& phi, std::span<Element const> F) {
    auto const&       Q = phi.target();
    std::set<Element> targets;
    for (Element q : F) {
      for (Element r : Q->right_divisors(q)) {
        for (Element l : Q->left_divisors(r)) {
          targets.insert(l);
        }
      }
    }
    std::set<Element> found;
    for (Element t : targets) {
      for (Element p : phi.fiber(t)) {
        found.insert(p);
      }
    }
    SpanningSet out;
    out.elements.assign(found.begin(), found.end());
    out.cardinality = out.elements.size();
    return out;
  }

}  // namespace semirfd
