#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "semirfd/controlled_map.hpp"
#include "semirfd/sparse_operator.hpp"

namespace semirfd {

  //! A finite combination Σ c_p λ_p over one monoid table. Zero
  //! coefficients are pruned, so equality is coefficientwise.
  class AlgebraElement {
   public:
    explicit AlgebraElement(TablePtr table) : _table(std::move(table)) {}
    //! The monomial c·λ_p.
    AlgebraElement(TablePtr table, Element p, Scalar c = 1.0);

    TablePtr const& table() const noexcept {
      return _table;
    }
    std::map<Element, Scalar> const& coefficients() const noexcept {
      return _coeffs;
    }
    Scalar coefficient(Element p) const;
    bool   is_zero() const noexcept {
      return _coeffs.empty();
    }
    //! max |p| over the support; 0 for the zero element.
    int degree() const;

    AlgebraElement& add(Element p, Scalar c);
    AlgebraElement& operator+=(AlgebraElement const& other);

    friend AlgebraElement operator+(AlgebraElement a, AlgebraElement const& b) {
      a += b;
      return a;
    }
    //! Formal product (λ_pλ_q = λ_pq); needs |p|+|q| within the table.
    friend AlgebraElement operator*(AlgebraElement const& a, AlgebraElement const& b);
    friend AlgebraElement operator*(Scalar c, AlgebraElement a);
    friend bool operator==(AlgebraElement const& a, AlgebraElement const& b);

    std::string format() const;

   private:
    TablePtr                  _table;
    std::map<Element, Scalar> _coeffs;
  };

  //! Σ c_p λ_p as an operator from level <= `level` to level <= level+deg(a).
  SparseOperator regular_operator(AlgebraElement const& a, int level);

  //! δ(a) = Σ c_p (λ^P_p ⊗ λ^Q_{φ(p)}) from (P <= level_p) ⊗ (Q <= level_q)
  //! into (P <= level_p + deg a) ⊗ (Q <= level_q + max |φ(p)|).
  SparseOperator delta_apply(ControlledMap const& phi, AlgebraElement const& a, int level_p,
                             int level_q);

  //! q ↦ a_q = Σ_{φ(p)=q} c_p λ_p; keys are exactly φ(supp a).
  using SpectralDecomposition = std::map<Element, AlgebraElement>;
  SpectralDecomposition spectral_decompose(AlgebraElement const& a, ControlledMap const& phi);

  //! Character χ(λ_q) = 1 applied to a formal element: Σ_p c_p.
  Scalar apply_character(AlgebraElement const& a);

  //! (id ⊗ χ)∘δ applied symbolically: Σ_q a_q χ(λ_q) = Σ_q a_q.
  AlgebraElement character_reconstruct(SpectralDecomposition const& parts, TablePtr const& table);

  struct IntertwiningCheck {
    Element     generator;
    bool        ok;
    std::string witness;  // first differing entry, empty when ok
  };

  struct FellReport {
    //! e_p ⊗ e_k ↦ e_p ⊗ e_{φ(p)k}, from (P <= L_P) ⊗ (Q <= L_Q - m·L_P)
    //! into (P <= L_P) ⊗ (Q <= L_Q), m the largest generator weight.
    SparseOperator                 W;
    bool                           isometry;
    std::vector<IntertwiningCheck> intertwining;
    bool                           ok() const;
  };

  //! Builds W and checks W*W = I and W(λ_g ⊗ I) = (λ_g ⊗ λ_{φ(g)})W exactly
  //! for every generator g. Throws DepthError if L_Q < m·L_P.
  FellReport fell_intertwiner(ControlledMap const& phi, int level_p, int level_q);

  //! The fell map at arbitrary levels; codomain Q level is level_q + m·level_p.
  SparseOperator fell_map(ControlledMap const& phi, int level_p, int level_q);

  struct SpanningSet {
    std::vector<Element> elements;  // sorted by id, in P
    std::size_t          cardinality = 0;
  };

  //! {p ∈ P : φ(p) ∈ ∪_{q∈F} ∪_{r∈R_q} L_r}, the finite spanning set of
  //! the quotient Q_F. Throws DepthError when a fiber is incomplete.
  SpanningSet qf_spanning_set(ControlledMap const& phi, std::span<Element const> F);

}  // namespace semirfd
