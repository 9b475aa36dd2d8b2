#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semirfd/graded_index.hpp"
#include "semirfd/sparse_operator.hpp"

namespace semirfd {

  //! Exponent vector α of a monomial z^α.
  class Multidx {
   public:
    Multidx() = default;
    explicit Multidx(std::vector<int> exponents);

    std::size_t variables() const noexcept {
      return _exps.size();
    }
    int degree() const noexcept {
      return _degree;
    }
    int operator[](std::size_t i) const {
      return _exps.at(i);
    }
    std::vector<int> const& exponents() const noexcept {
      return _exps;
    }
    friend Multidx operator+(Multidx const& a, Multidx const& b);
    //! Degree first, then descending lex: for d = 2 the order is
    //! (0,0) (1,0) (0,1) (2,0) (1,1) (0,2) ...
    friend std::strong_ordering operator<=>(Multidx const& a, Multidx const& b);
    friend bool                 operator==(Multidx const& a, Multidx const& b) = default;

   private:
    std::vector<int> _exps;
    int              _degree = 0;
  };

  //! Monomials in d variables graded by total degree, in Multidx order.
  class MonomialIndex final : public GradedIndex {
   public:
    explicit MonomialIndex(int variables, int max_degree = 4096);

    int variables() const noexcept {
      return _d;
    }
    //! C(level + d, d).
    std::size_t size_through(int level) const override;
    int         max_level() const noexcept override {
      return _max_degree;
    }
    int         level_of(std::size_t index) const override;
    std::string label(std::size_t index) const override;
    bool        same_basis(GradedIndex const& other) const noexcept override;

    std::size_t rank(Multidx const& a) const;
    Multidx     unrank(std::size_t index) const;

   private:
    int _d;
    int _max_degree;
  };

  //! Finitely supported Σ c_α z^α with zero coefficients pruned.
  class Polynomial {
   public:
    explicit Polynomial(int variables) : _d(variables) {}
    Polynomial(int variables, std::vector<std::pair<Multidx, Scalar>> const& terms);
    static Polynomial constant(int variables, Scalar c);
    //! z_i (0-based).
    static Polynomial coordinate(int variables, int i);

    int variables() const noexcept {
      return _d;
    }
    std::map<Multidx, Scalar> const& terms() const noexcept {
      return _terms;
    }
    bool is_zero() const noexcept {
      return _terms.empty();
    }
    //! Largest |α| in the support; 0 for the zero polynomial.
    int    degree() const;
    Scalar coefficient(Multidx const& a) const;
    Scalar evaluate(std::vector<Scalar> const& z) const;

    Polynomial& add(Multidx const& a, Scalar c);
    friend Polynomial operator+(Polynomial a, Polynomial const& b);
    friend Polynomial operator*(Polynomial const& a, Polynomial const& b);
    friend Polynomial operator*(Scalar c, Polynomial const& a);
    friend bool       operator==(Polynomial const& a, Polynomial const& b) = default;

    std::string format() const;

   private:
    int                       _d;
    std::map<Multidx, Scalar> _terms;
  };

  //! Parses [{"exponents":[1,0],"re":1.0,"im":0.0}, ...].
  Polynomial parse_polynomial(std::string_view json_text, int variables);

  //! Parses "1 + 2z - 0.5i*z1^2z2": terms of an optional real or imaginary
  //! coefficient times powers of z (d = 1) or z1..zd.
  Polynomial parse_polynomial_expression(std::string_view text, int variables);

  //! Largest variable index mentioned in an expression (1 for plain z).
  int expression_variables(std::string_view text);

  enum class KernelKind { hardy, drury_arveson, dirichlet, custom };

  //! A unitarily invariant kernel K(z,w) = Σ_n c_n ⟨z,w⟩^n with c_0 = 1.
  class KernelSpec {
   public:
    //! Ball Hardy space: c_n = C(n+d-1, n); the unit-disc Hardy space for d = 1.
    static KernelSpec hardy(int d);
    //! c_n = 1.
    static KernelSpec drury_arveson(int d);
    //! c_n = 1/(n+1).
    static KernelSpec dirichlet(int d);
    //! Explicit c_0, c_1, ...; c_0 must be 1 and all entries positive.
    static KernelSpec custom(int d, std::vector<double> coefficients);
    static KernelSpec by_name(std::string const& name, int d);

    int variables() const noexcept {
      return _d;
    }
    KernelKind kind() const noexcept {
      return _kind;
    }
    std::string name() const;
    //! c_n; throws DepthError past the supplied coefficients of a custom kernel.
    double coefficient(int n) const;

   private:
    KernelSpec(int d, KernelKind kind, std::vector<double> coefficients);

    int                 _d;
    KernelKind          _kind;
    std::vector<double> _custom;
  };

  //! ‖z^α‖ = sqrt(α! / (|α|! c_{|α|})).
  double monomial_norm(KernelSpec const& k, Multidx const& a);

  //! The normalized monomial basis ẑ^α = z^α/‖z^α‖, |α| <= D.
  class GradedFockBasis {
   public:
    GradedFockBasis(KernelSpec kernel, int max_degree);

    KernelSpec const& kernel() const noexcept {
      return _kernel;
    }
    int max_degree() const noexcept {
      return _max_degree;
    }
    Space space(int degree) const;
    std::shared_ptr<MonomialIndex const> const& index() const noexcept {
      return _index;
    }
    //! ‖z^α‖ for the basis vector at `index`.
    double norm(std::size_t index) const {
      return _norms.at(index);
    }

   private:
    KernelSpec                           _kernel;
    int                                  _max_degree;
    std::shared_ptr<MonomialIndex const> _index;
    std::vector<double>                  _norms;
  };

  //! M_φ from degree <= D into degree <= D + deg φ in the normalized basis:
  //! ẑ^α ↦ Σ_β c_β (‖z^{α+β}‖/‖z^α‖) ẑ^{α+β}.
  SparseOperator mult_operator(KernelSpec const& k, Polynomial const& phi, int D);

  //! ‖P_D M_φ P_D‖ with P_D the projection onto degree <= D. Nondecreasing
  //! in D and a lower bound for the multiplier norm.
  double multiplier_norm_lower(KernelSpec const& k, Polynomial const& phi, int D,
                               NormOptions const& opts = {});

  //! Γ_ζ on degree <= D: diag(ζ^{|α|}). Throws InvalidArgument if |ζ| != 1.
  SparseOperator circle_operator(int variables, Scalar zeta, int D);

  //! (n, φ_n) for every degree n that occurs, ascending.
  std::vector<std::pair<int, Polynomial>> homogeneous_decompose(Polynomial const& phi);

  //! Γ_ζ(φ)(z) = φ(ζz): the degree-n part scaled by ζ^n.
  Polynomial circle_action(Polynomial const& phi, Scalar zeta);

  struct NCoaction {
    //! δ(φ) = Σ_n φ_n ⊗ λ^ℕ_n, listed as (n, φ_n).
    std::vector<std::pair<int, Polynomial>> components;
    //! dim Σ_{n <= max F} A_n = Σ_{n <= max F} C(n+d-1, d-1), when F was given.
    std::optional<std::size_t> quotient_dimension;
  };

  NCoaction n_coaction(Polynomial const& phi, std::vector<int> const& F = {});

  //! Number of monomials of degree n in d variables.
  std::size_t homogeneous_dimension(int n, int d);

}  // namespace semirfd
