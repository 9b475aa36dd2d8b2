#include "semirfd/funcalg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "json.hpp"
#include "semirfd/error.hpp"

namespace semirfd {

  namespace {
    std::size_t binomial(std::size_t n, std::size_t k) {
      if (k > n) {
        return 0;
      }
      k               = std::min(k, n - k);
      std::size_t out = 1;
      for (std::size_t i = 1; i <= k; ++i) {
        out = out * (n - k + i) / i;
      }
      return out;
    }

    // |α|! / α! accumulated as a product of exact-ish ratios.
    double multinomial(Multidx const& a) {
      double m = 1.0;
      int    s = 0;
      for (int e : a.exponents()) {
        for (int j = 1; j <= e; ++j) {
          ++s;
          m = m * s / j;
        }
      }
      return m;
    }

    void check_unimodular(Scalar zeta) {
      if (std::abs(std::abs(zeta) - 1.0) > 1e-12) {
        throw InvalidArgument("ζ must have modulus 1 (got |ζ| = " + std::to_string(std::abs(zeta))
                              + ")");
      }
    }

    Scalar power(Scalar zeta, int n) {
      Scalar out = 1.0;
      for (int i = 0; i < n; ++i) {
        out *= zeta;
      }
      return out;
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Multidx / MonomialIndex
  ////////////////////////////////////////////////////////////////////////

  Multidx::Multidx(std::vector<int> exponents) : _exps(std::move(exponents)) {
    for (int e : _exps) {
      if (e < 0) {
        throw InvalidArgument("exponents must be nonnegative");
      }
      _degree += e;
    }
  }

  Multidx operator+(Multidx const& a, Multidx const& b) {
    if (a.variables() != b.variables()) {
      throw InvalidArgument("multi-indices with different variable counts");
    }
    std::vector<int> e(a._exps);
    for (std::size_t i = 0; i < e.size(); ++i) {
      e[i] += b._exps[i];
    }
    return Multidx(std::move(e));
  }

  std::strong_ordering operator<=>(Multidx const& a, Multidx const& b) {
    if (auto c = a._degree <=> b._degree; c != 0) {
      return c;
    }
    // Descending lex within a degree.
    return b._exps <=> a._exps;
  }

  MonomialIndex::MonomialIndex(int variables, int max_degree)
      : _d(variables), _max_degree(max_degree) {
    if (variables <= 0) {
      throw InvalidArgument("need at least one variable");
    }
  }

  std::size_t MonomialIndex::size_through(int level) const {
    if (level < 0) {
      return 0;
    }
    return binomial(static_cast<std::size_t>(level + _d), static_cast<std::size_t>(_d));
  }

  std::size_t MonomialIndex::rank(Multidx const& a) const {
    if (static_cast<int>(a.variables()) != _d) {
      throw InvalidArgument("multi-index has the wrong number of variables");
    }
    std::size_t r   = size_through(a.degree() - 1);
    int         rem = a.degree();
    for (int i = 0; i + 1 < _d; ++i) {
      auto const parts = static_cast<std::size_t>(_d - 2 - i);
      for (int v = rem; v > a[i]; --v) {
        r += binomial(static_cast<std::size_t>(rem - v) + parts, parts);
      }
      rem -= a[i];
    }
    return r;
  }

  Multidx MonomialIndex::unrank(std::size_t index) const {
    int n = 0;
    while (size_through(n) <= index) {
      ++n;
    }
    std::size_t      within = index - size_through(n - 1);
    std::vector<int> e(_d, 0);
    int              rem = n;
    for (int i = 0; i + 1 < _d; ++i) {
      auto const parts = static_cast<std::size_t>(_d - 2 - i);
      for (int v = rem; v >= 0; --v) {
        std::size_t const c = binomial(static_cast<std::size_t>(rem - v) + parts, parts);
        if (within < c) {
          e[i] = v;
          break;
        }
        within -= c;
      }
      rem -= e[i];
    }
    e[_d - 1] = rem;
    return Multidx(std::move(e));
  }

  int MonomialIndex::level_of(std::size_t index) const {
    int n = 0;
    while (size_through(n) <= index) {
      ++n;
    }
    return n;
  }

  std::string MonomialIndex::label(std::size_t index) const {
    Multidx const     a = unrank(index);
    std::string       out;
    for (int i = 0; i < _d; ++i) {
      if (a[i] == 0) {
        continue;
      }
      out += _d == 1 ? std::string("z") : "z" + std::to_string(i + 1);
      if (a[i] > 1) {
        out += "^" + std::to_string(a[i]);
      }
    }
    return out.empty() ? "1" : out;
  }

  bool MonomialIndex::same_basis(GradedIndex const& other) const noexcept {
    auto const* m = dynamic_cast<MonomialIndex const*>(&other);
    return m != nullptr && m->_d == _d;
  }

  ////////////////////////////////////////////////////////////////////////
  // Polynomial
  ////////////////////////////////////////////////////////////////////////

  Polynomial::Polynomial(int variables, std::vector<std::pair<Multidx, Scalar>> const& terms)
      : _d(variables) {
    for (auto const& [a, c] : terms) {
      add(a, c);
    }
  }

  Polynomial Polynomial::constant(int variables, Scalar c) {
    Polynomial p(variables);
    p.add(Multidx(std::vector<int>(variables, 0)), c);
    return p;
  }

  Polynomial Polynomial::coordinate(int variables, int i) {
    std::vector<int> e(variables, 0);
    e.at(i) = 1;
    Polynomial p(variables);
    p.add(Multidx(std::move(e)), 1.0);
    return p;
  }

  int Polynomial::degree() const {
    return _terms.empty() ? 0 : _terms.rbegin()->first.degree();
  }

  Scalar Polynomial::coefficient(Multidx const& a) const {
    auto it = _terms.find(a);
    return it == _terms.end() ? Scalar(0) : it->second;
  }

  Scalar Polynomial::evaluate(std::vector<Scalar> const& z) const {
    if (static_cast<int>(z.size()) != _d) {
      throw InvalidArgument("evaluation point has the wrong dimension");
    }
    Scalar sum = 0.0;
    for (auto const& [a, c] : _terms) {
      Scalar m = c;
      for (int i = 0; i < _d; ++i) {
        m *= power(z[i], a[i]);
      }
      sum += m;
    }
    return sum;
  }

  Polynomial& Polynomial::add(Multidx const& a, Scalar c) {
    if (static_cast<int>(a.variables()) != _d) {
      throw InvalidArgument("term has " + std::to_string(a.variables()) + " exponents, expected "
                            + std::to_string(_d));
    }
    auto [it, inserted] = _terms.try_emplace(a, c);
    if (!inserted) {
      it->second += c;
    }
    if (it->second == Scalar(0)) {
      _terms.erase(it);
    }
    return *this;
  }

  Polynomial operator+(Polynomial a, Polynomial const& b) {
    for (auto const& [m, c] : b._terms) {
      a.add(m, c);
    }
    return a;
  }

  Polynomial operator*(Polynomial const& a, Polynomial const& b) {
    if (a._d != b._d) {
      throw InvalidArgument("polynomials in different numbers of variables");
    }
    Polynomial out(a._d);
    for (auto const& [x, c] : a._terms) {
      for (auto const& [y, d] : b._terms) {
        out.add(x + y, c * d);
      }
    }
    return out;
  }

  Polynomial operator*(Scalar c, Polynomial const& a) {
    Polynomial out(a._d);
    for (auto const& [m, v] : a._terms) {
      out.add(m, c * v);
    }
    return out;
  }

  namespace {
    std::string number(double x) {
      std::ostringstream out;
      out << x;
      return out.str();
    }

    std::string coefficient_text(Scalar c) {
      if (c.imag() == 0) {
        return number(c.real());
      }
      if (c.real() == 0) {
        return number(c.imag()) + "i";
      }
      return "(" + number(c.real()) + (c.imag() < 0 ? "-" : "+") + number(std::abs(c.imag()))
             + "i)";
    }
  }  // namespace

  std::string Polynomial::format() const {
    if (_terms.empty()) {
      return "0";
    }
    MonomialIndex const idx(_d);
    std::string         out;
    for (auto const& [a, c] : _terms) {
      std::string const mono = a.degree() == 0 ? std::string() : idx.label(idx.rank(a));
      std::string       term;
      if (mono.empty()) {
        term = coefficient_text(c);
      } else if (c == Scalar(1)) {
        term = mono;
      } else if (c == Scalar(-1)) {
        term = "-" + mono;
      } else {
        term = coefficient_text(c) + mono;
      }
      if (out.empty()) {
        out = term;
      } else if (term.front() == '-') {
        out += " - " + term.substr(1);
      } else {
        out += " + " + term;
      }
    }
    return out;
  }

  Polynomial parse_polynomial(std::string_view json_text, int variables) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(json_text);
    } catch (nlohmann::json::parse_error const& e) {
      throw ParseError(std::string("malformed polynomial: ") + e.what());
    }
    if (!doc.is_array()) {
      throw ParseError("polynomial must be a list of terms");
    }
    Polynomial p(variables);
    for (auto const& t : doc) {
      if (!t.is_object() || !t.contains("exponents") || !t["exponents"].is_array()) {
        throw ParseError("each term needs an \"exponents\" list");
      }
      std::vector<int> e;
      for (auto const& x : t["exponents"]) {
        if (!x.is_number_integer()) {
          throw ParseError("exponents must be integers");
        }
        e.push_back(x.get<int>());
      }
      if (static_cast<int>(e.size()) != variables) {
        throw ParseError("term has " + std::to_string(e.size()) + " exponents, expected "
                         + std::to_string(variables));
      }
      double re = t.value("re", 0.0);
      double im = t.value("im", 0.0);
      try {
        p.add(Multidx(std::move(e)), Scalar(re, im));
      } catch (InvalidArgument const& err) {
        throw ParseError(err.what());
      }
    }
    return p;
  }

  ////////////////////////////////////////////////////////////////////////
  // Kernels
  ////////////////////////////////////////////////////////////////////////

  KernelSpec::KernelSpec(int d, KernelKind kind, std::vector<double> coefficients)
      : _d(d), _kind(kind), _custom(std::move(coefficients)) {
    if (d <= 0) {
      throw InvalidArgument("kernel needs at least one variable");
    }
  }

  KernelSpec KernelSpec::hardy(int d) {
    return KernelSpec(d, KernelKind::hardy, {});
  }
  KernelSpec KernelSpec::drury_arveson(int d) {
    return KernelSpec(d, KernelKind::drury_arveson, {});
  }
  KernelSpec KernelSpec::dirichlet(int d) {
    return KernelSpec(d, KernelKind::dirichlet, {});
  }

  KernelSpec KernelSpec::custom(int d, std::vector<double> coefficients) {
    if (coefficients.empty() || coefficients.front() != 1.0) {
      throw InvalidArgument("kernel coefficients must start with c_0 = 1");
    }
    for (double c : coefficients) {
      if (!(c > 0.0)) {
        throw InvalidArgument("kernel coefficients must be positive");
      }
    }
    return KernelSpec(d, KernelKind::custom, std::move(coefficients));
  }

  KernelSpec KernelSpec::by_name(std::string const& name, int d) {
    if (name == "hardy") {
      return hardy(d);
    } else if (name == "drury_arveson") {
      return drury_arveson(d);
    } else if (name == "dirichlet") {
      return dirichlet(d);
    }
    throw ParseError("unknown kernel \"" + name + "\"");
  }

  std::string KernelSpec::name() const {
    switch (_kind) {
      case KernelKind::hardy:
        return "hardy";
      case KernelKind::drury_arveson:
        return "drury_arveson";
      case KernelKind::dirichlet:
        return "dirichlet";
      case KernelKind::custom:
        return "custom";
    }
    return "custom";
  }

  double KernelSpec::coefficient(int n) const {
    if (n < 0) {
      throw InvalidArgument("negative degree");
    }
    switch (_kind) {
      case KernelKind::hardy: {
        double c = 1.0;
        for (int i = 1; i <= n; ++i) {
          c = c * (i + _d - 1) / i;
        }
        return c;
      }
      case KernelKind::drury_arveson:
        return 1.0;
      case KernelKind::dirichlet:
        return 1.0 / (n + 1);
      case KernelKind::custom:
        if (static_cast<std::size_t>(n) >= _custom.size()) {
          throw DepthError("kernel coefficient c_" + std::to_string(n) + " not supplied");
        }
        return _custom[n];
    }
    return 1.0;
  }

  double monomial_norm(KernelSpec const& k, Multidx const& a) {
    if (static_cast<int>(a.variables()) != k.variables()) {
      throw InvalidArgument("monomial and kernel disagree on the number of variables");
    }
    return std::sqrt(1.0 / (multinomial(a) * k.coefficient(a.degree())));
  }

  GradedFockBasis::GradedFockBasis(KernelSpec kernel, int max_degree)
      : _kernel(std::move(kernel)),
        _max_degree(max_degree),
        _index(std::make_shared<MonomialIndex const>(_kernel.variables())) {
    if (max_degree < 0) {
      throw InvalidArgument("degree bound must be nonnegative");
    }
    std::size_t const n = _index->size_through(max_degree);
    _norms.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      _norms.push_back(monomial_norm(_kernel, _index->unrank(i)));
    }
  }

  Space GradedFockBasis::space(int degree) const {
    if (degree > _max_degree) {
      throw DepthError("degree " + std::to_string(degree) + " beyond the basis bound "
                       + std::to_string(_max_degree));
    }
    return Space(_index, degree);
  }

  ////////////////////////////////////////////////////////////////////////
  // Multiplication operators
  ////////////////////////////////////////////////////////////////////////

  SparseOperator mult_operator(KernelSpec const& k, Polynomial const& phi, int D) {
    if (phi.variables() != k.variables()) {
      throw InvalidArgument("polynomial and kernel disagree on the number of variables");
    }
    if (D < 0) {
      throw InvalidArgument("degree bound must be nonnegative");
    }
    GradedFockBasis const basis(k, D + phi.degree());
    auto const&           idx = *basis.index();
    Space const           dom = basis.space(D);
    Space const           cod = basis.space(D + phi.degree());
    std::vector<Entry>    entries;
    entries.reserve(dom.dim() * phi.terms().size());
    for (std::size_t col = 0; col < dom.dim(); ++col) {
      Multidx const a = idx.unrank(col);
      for (auto const& [b, c] : phi.terms()) {
        std::size_t const row = idx.rank(a + b);
        entries.push_back({row, col, c * (basis.norm(row) / basis.norm(col))});
      }
    }
    return SparseOperator(dom, cod, std::move(entries));
  }

  double multiplier_norm_lower(KernelSpec const& k, Polynomial const& phi, int D,
                               NormOptions const& opts) {
    auto const m = mult_operator(k, phi, D);
    return operator_norm(m.restrict_to(m.domain(), m.domain()), opts);
  }

  SparseOperator circle_operator(int variables, Scalar zeta, int D) {
    check_unimodular(zeta);
    auto const         idx = std::make_shared<MonomialIndex const>(variables);
    Space const        sp(idx, D);
    std::vector<Entry> entries;
    std::vector<Scalar> powers{1.0};
    for (int n = 1; n <= D; ++n) {
      powers.push_back(powers.back() * zeta);
    }
    for (std::size_t i = 0; i < sp.dim(); ++i) {
      entries.push_back({i, i, powers[idx->level_of(i)]});
    }
    return SparseOperator(sp, sp, std::move(entries));
  }

  ////////////////////////////////////////////////////////////////////////
  // Grading
  ////////////////////////////////////////////////////////////////////////

  std::vector<std::pair<int, Polynomial>> homogeneous_decompose(Polynomial const& phi) {
    std::vector<std::pair<int, Polynomial>> out;
    for (auto const& [a, c] : phi.terms()) {
      if (out.empty() || out.back().first != a.degree()) {
        out.emplace_back(a.degree(), Polynomial(phi.variables()));
      }
      out.back().second.add(a, c);
    }
    return out;
  }

  Polynomial circle_action(Polynomial const& phi, Scalar zeta) {
    check_unimodular(zeta);
    Polynomial out(phi.variables());
    for (auto const& [a, c] : phi.terms()) {
      out.add(a, c * power(zeta, a.degree()));
    }
    return out;
  }

  std::size_t homogeneous_dimension(int n, int d) {
    if (n < 0) {
      return 0;
    }
    return binomial(static_cast<std::size_t>(n + d - 1), static_cast<std::size_t>(d - 1));
  }

  NCoaction n_coaction(Polynomial const& phi, std::vector<int> const& F) {
    NCoaction out;
    out.components = homogeneous_decompose(phi);
    if (!F.empty()) {
      int const   top = *std::max_element(F.begin(), F.end());
      std::size_t dim = 0;
      for (int n = 0; n <= top; ++n) {
        dim += homogeneous_dimension(n, phi.variables());
      }
      out.quotient_dimension = dim;
    }
    return out;
  }

}  // namespace semirfd

namespace semirfd {

  namespace {
    class ExpressionReader {
     public:
      explicit ExpressionReader(std::string_view text) : _text(text) {}

      bool done() {
        skip_space();
        return _pos >= _text.size();
      }
      char peek() {
        skip_space();
        return _pos < _text.size() ? _text[_pos] : '\0';
      }
      bool accept(char c) {
        if (peek() == c) {
          ++_pos;
          return true;
        }
        return false;
      }
      bool at_number() {
        char c = peek();
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
      }
      double number() {
        skip_space();
        std::size_t start = _pos;
        while (_pos < _text.size()
               && (std::isdigit(static_cast<unsigned char>(_text[_pos])) || _text[_pos] == '.'
                   || ((_text[_pos] == 'e' || _text[_pos] == 'E') && _pos + 1 < _text.size()
                       && std::isdigit(static_cast<unsigned char>(_text[_pos + 1]))))) {
          ++_pos;
        }
        std::string const digits(_text.substr(start, _pos - start));
        char*             end = nullptr;
        double const      v   = std::strtod(digits.c_str(), &end);
        if (digits.empty() || end != digits.c_str() + digits.size()) {
          fail("bad number '" + digits + "'");
        }
        return v;
      }
      int integer() {
        std::size_t start = _pos;
        while (_pos < _text.size() && std::isdigit(static_cast<unsigned char>(_text[_pos]))) {
          ++_pos;
        }
        if (start == _pos) {
          fail("expected an integer");
        }
        return std::stoi(std::string(_text.substr(start, _pos - start)));
      }
      [[noreturn]] void fail(std::string const& what) const {
        throw ParseError("polynomial expression: " + what + " at offset " + std::to_string(_pos));
      }

     private:
      void skip_space() {
        while (_pos < _text.size() && std::isspace(static_cast<unsigned char>(_text[_pos]))) {
          ++_pos;
        }
      }

      std::string_view _text;
      std::size_t      _pos = 0;
    };

    // Visits every (variable index, exponent) factor; index 0 is plain z.
    template <typename Term>
    void read_expression(std::string_view text, Term&& on_term) {
      ExpressionReader in(text);
      if (in.done()) {
        in.fail("empty expression");
      }
      bool first = true;
      while (!in.done()) {
        double sign = 1.0;
        if (in.accept('-')) {
          sign = -1.0;
        } else if (!in.accept('+') && !first) {
          in.fail("expected + or -");
        }
        first = false;
        Scalar coeff   = sign;
        bool   has_any = false;
        if (in.at_number()) {
          coeff *= in.number();
          has_any = true;
        }
        if (in.accept('i')) {
          coeff *= Scalar(0, 1);
          has_any = true;
        }
        std::vector<std::pair<int, int>> factors;
        while (true) {
          in.accept('*');
          if (!in.accept('z')) {
            break;
          }
          int index = 0;
          if (in.at_number()) {
            index = in.integer();
            if (index == 0) {
              in.fail("variables are numbered from 1");
            }
          }
          int power = 1;
          if (in.accept('^')) {
            power = in.integer();
          }
          factors.emplace_back(index, power);
          has_any = true;
        }
        if (!has_any) {
          in.fail("expected a term");
        }
        on_term(coeff, factors);
      }
    }
  }  // namespace

  int expression_variables(std::string_view text) {
    int d = 1;
    read_expression(text, [&](Scalar, std::vector<std::pair<int, int>> const& factors) {
      for (auto [index, power] : factors) {
        d = std::max(d, index);
      }
    });
    return d;
  }

  Polynomial parse_polynomial_expression(std::string_view text, int variables) {
    Polynomial out(variables);
    read_expression(text, [&](Scalar coeff, std::vector<std::pair<int, int>> const& factors) {
      std::vector<int> e(static_cast<std::size_t>(variables), 0);
      for (auto [index, power] : factors) {
        if (index == 0) {
          if (variables != 1) {
            throw ParseError("polynomial expression: plain z needs one variable, use z1..z"
                             + std::to_string(variables));
          }
          index = 1;
        }
        if (index > variables) {
          throw ParseError("polynomial expression: z" + std::to_string(index)
                           + " exceeds the " + std::to_string(variables) + " variables");
        }
        e[static_cast<std::size_t>(index - 1)] += power;
      }
      out.add(Multidx(std::move(e)), coeff);
    });
    return out;
  }

}  // namespace semirfd
