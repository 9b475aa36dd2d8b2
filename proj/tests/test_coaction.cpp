#include <random>

#include "doctest.h"
#include "semirfd/coaction.hpp"
#include "semirfd/controlled_map.hpp"
#include "semirfd/error.hpp"
#include "semirfd/linrep.hpp"

using namespace semirfd;

namespace {
  AlgebraElement random_element(std::mt19937_64& rng, TablePtr const& t, int max_len) {
    auto const pool = t->elements_through(max_len);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int>         c(-4, 4), n(1, 6);
    AlgebraElement                             a(t);
    for (int i = n(rng); i > 0; --i) {
      a.add(pool[pick(rng)], Scalar(c(rng), c(rng)));
    }
    return a;
  }

  SparseOperator widen(SparseOperator const& a, Space const& cod) {
    return a.codomain() == cod ? a : a.extend_codomain(cod);
  }
}  // namespace

TEST_SUITE("coaction") {
  TEST_CASE("algebra elements") {
    auto const     t = enumerate(builtin::free(2), 4);
    Element const  a = t->generator(0), b = t->generator(1);
    AlgebraElement x(t, a, 2.0);
    x.add(b, {0, 1});
    x.add(a, -2.0);
    CHECK(x.coefficients().size() == 1);
    CHECK(x.coefficient(a) == Scalar(0));
    CHECK(x.coefficient(b) == Scalar(0, 1));
    CHECK(x.degree() == 1);
    CHECK(AlgebraElement(t).is_zero());
    CHECK(AlgebraElement(t).degree() == 0);

    AlgebraElement y(t, a);
    y.add(t->identity(), 1.0);
    auto const xy = x * y;
    CHECK(xy.coefficient(t->element("b.a")) == Scalar(0, 1));
    CHECK(xy.coefficient(b) == Scalar(0, 1));
    CHECK((Scalar(2.0) * y).coefficient(a) == Scalar(2.0));
    CHECK(x + y == y + x);
    CHECK_FALSE(x == y);
    CHECK(y.format() == "λ_e + λ_a");

    auto const other = enumerate(builtin::free(2), 4);
    CHECK_THROWS_AS(x + AlgebraElement(other, a), InvalidArgument);
    CHECK_THROWS_AS(AlgebraElement(t, Element{1000}), InvalidArgument);
  }

  TEST_CASE("regular operators are sums of isometries") {
    auto const      t = enumerate(builtin::braid(3), 5);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) {
      auto const a  = random_element(rng, t, 2);
      auto const op = regular_operator(a, 2);
      DenseMatrix expected = DenseMatrix::Zero(static_cast<Eigen::Index>(op.rows()),
                                               static_cast<Eigen::Index>(op.cols()));
      for (auto const& [p, c] : a.coefficients()) {
        expected += c * lambda(t, p, 2).extend_codomain(op.codomain()).dense();
      }
      CHECK(op.dense() == expected);
    }
  }

  TEST_CASE("delta on monomials and products") {
    auto const    b   = enumerate(builtin::braid(3), 4);
    auto const    phi = ControlledMap::length_map(b);
    Element const p   = b->element("s1.s2");
    auto const    d   = delta_apply(phi, AlgebraElement(b, p), 1, 1);
    CHECK(d == tensor_product(lambda(b, p, 1), lambda(phi.target(), phi(p), 1)));

    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
      auto const x   = random_element(rng, b, 1);
      auto const y   = random_element(rng, b, 1);
      auto const dy  = delta_apply(phi, y, 0, 1);
      int const  qy  = dy.codomain().factors()[1].level;
      auto const lhs = compose(delta_apply(phi, x, y.degree(), qy), dy);
      CHECK(lhs == widen(delta_apply(phi, x * y, 0, 1), lhs.codomain()));
      // Linearity.
      auto const sum = delta_apply(phi, x + y, 1, 1);
      auto const sep = widen(delta_apply(phi, x, 1, 1), sum.codomain())
                       + widen(delta_apply(phi, y, 1, 1), sum.codomain());
      CHECK(sum.max_abs_diff(sep) == 0.0);
    }
    auto const other = enumerate(builtin::braid(3), 4);
    CHECK_THROWS_AS(delta_apply(phi, AlgebraElement(other, p), 0, 0), InvalidArgument);
  }

  TEST_CASE("spectral decomposition and character reconstruction") {
    auto const      b   = enumerate(builtin::braid(3), 4);
    auto const      phi = ControlledMap::length_map(b);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
      auto const a     = random_element(rng, b, 4);
      auto const parts = spectral_decompose(a, phi);
      AlgebraElement sum(b);
      std::size_t    terms = 0;
      for (auto const& [q, part] : parts) {
        CHECK(b->length(q) >= 0);
        for (auto const& [p, c] : part.coefficients()) {
          CHECK(phi(p) == q);
          CHECK(a.coefficient(p) == c);
        }
        terms += part.coefficients().size();
        sum += part;
      }
      CHECK(terms == a.coefficients().size());
      CHECK(sum == a);
      CHECK(character_reconstruct(parts, b) == a);
      CHECK(apply_character(a) == apply_character(sum));
    }
  }

  TEST_CASE("Fell absorption intertwiner") {
    auto const b   = enumerate(builtin::braid(3), 4);
    auto const phi = ControlledMap::length_map(b);
    auto const rep = fell_intertwiner(phi, 3, 4);
    CHECK(rep.isometry);
    CHECK(rep.intertwining.size() == 2);
    CHECK(rep.ok());
    // W(e_p ⊗ e_k) = e_p ⊗ e_{φ(p)k}.
    auto const& W  = rep.W;
    auto const& Q  = phi.target();
    std::size_t dq = W.domain().factor_dim(1);
    for (auto const& e : W.entries()) {
      Element const p{static_cast<std::uint32_t>(e.col / dq)};
      Element const k{static_cast<std::uint32_t>(e.col % dq)};
      auto const    parts = W.codomain().split(e.row);
      CHECK(parts[0] == p.id);
      CHECK(parts[1] == Q->multiply(phi(p), k).id);
    }
    CHECK(W.nnz() == W.domain().dim());

    // Without the twist the identity fails: W does not commute with λ_g ⊗ I.
    Element const g   = b->generator(0);
    auto const    lhs = compose(W, tensor_product(lambda(b, g, 2), SparseOperator::identity(
                                                                    graded_space(Q, 1))));
    auto const rhs = widen(compose(tensor_product(lambda(b, g, 2),
                                                  SparseOperator::identity(graded_space(Q, 3))),
                                   fell_map(phi, 2, 1)),
                           lhs.codomain());
    CHECK_FALSE(lhs == rhs);

    auto const f  = enumerate(builtin::free(2), 3);
    auto const ab = ControlledMap::abelianization(f, 4);
    CHECK(fell_intertwiner(ab, 3, 4).ok());
    CHECK(fell_intertwiner(ab, 0, 2).ok());
    CHECK_THROWS_AS(fell_intertwiner(ab, 3, 2), DepthError);

    auto const    n8 = enumerate(builtin::nat(1), 8);
    ControlledMap dbl(b, n8, {{0, 0}, {0, 0}});
    CHECK(fell_intertwiner(dbl, 2, 5).ok());
    CHECK_THROWS_AS(fell_intertwiner(dbl, 3, 5), DepthError);
  }

  TEST_CASE("quotient spanning sets") {
    auto const b   = enumerate(builtin::braid(3), 4);
    auto const phi = ControlledMap::length_map(b);
    auto const& Q  = phi.target();
    std::vector<Element> F2{Q->element("x.x")};
    auto const           s2 = qf_spanning_set(phi, F2);
    CHECK(s2.cardinality == 7);
    CHECK(s2.elements == b->elements_through(2));
    std::vector<Element> F3{Q->element("x.x.x")};
    CHECK(qf_spanning_set(phi, F3).cardinality == 14);
    std::vector<Element> F0{Q->identity()};
    CHECK(qf_spanning_set(phi, F0).cardinality == 1);

    auto const           f  = enumerate(builtin::free(2), 3);
    auto const           ab = ControlledMap::abelianization(f);
    std::vector<Element> Fxy{ab.target()->element("x.y")};
    CHECK(qf_spanning_set(ab, Fxy).cardinality == 5);

    auto const           shallow = enumerate(builtin::braid(3), 2);
    auto const           phi2    = ControlledMap::length_map(shallow, 4);
    std::vector<Element> deep{phi2.target()->element("x.x.x")};
    CHECK_THROWS_AS(qf_spanning_set(phi2, deep), DepthError);
  }
}
