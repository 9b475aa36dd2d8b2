#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "semirfd/controlled_map.hpp"
#include "semirfd/enumeration.hpp"
#include "semirfd/error.hpp"
#include "semirfd/presentation.hpp"

using namespace semirfd;

namespace {
  oracle::Word to_oracle(Word const& w) {
    return {w.begin(), w.end()};
  }

  std::vector<oracle::Rule> rules_of(Presentation const& p) {
    std::vector<oracle::Rule> out;
    for (auto const& r : p.relations()) {
      out.push_back({to_oracle(r.lhs), to_oracle(r.rhs)});
    }
    return out;
  }

  // Path graph a - b - c: a,b and b,c commute.
  Presentation path_raag() {
    return builtin::raag({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  }

  std::set<oracle::Word> words_of(EnumerationTable const& t, std::vector<Element> const& xs) {
    std::set<oracle::Word> out;
    for (Element x : xs) {
      out.insert(to_oracle(t.word(x)));
    }
    return out;
  }
}  // namespace

TEST_SUITE("monoid_core") {
  TEST_CASE("presentation documents parse and validate") {
    auto p = parse_presentation(R"({"generators":["a","b"],"relations":[["a.b","b.a"]]})");
    CHECK(p.number_of_generators() == 2);
    REQUIRE(p.relations().size() == 1);
    CHECK(p.relations()[0].lhs == Word{0, 1});
    CHECK(p.relations()[0].rhs == Word{1, 0});

    CHECK_THROWS_AS(parse_presentation("{\"generators\": [\"a\""), ParseError);
    CHECK_THROWS_AS(parse_presentation(R"({"relations":[]})"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_presentation(R"({"generators":["a","b"],"relations":[["a.c","b.a"]]})"),
        doctest::Contains("unknown generator c"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_presentation(R"({"generators":["a","b"],"relations":[["a.b","a"]]})"),
        doctest::Contains("non-homogeneous relation [a.b, a]"), ParseError);
    CHECK_THROWS_AS(parse_presentation(R"({"generators":["a","a"]})"), ParseError);
    CHECK_THROWS_AS(parse_presentation(R"({"generators":["a.b"]})"), ParseError);
  }

  TEST_CASE("document round trip") {
    auto const p = builtin::braid(4);
    auto const q = parse_presentation(to_document(p));
    CHECK(q.generators() == p.generators());
    REQUIRE(q.relations().size() == p.relations().size());
    for (std::size_t i = 0; i < p.relations().size(); ++i) {
      CHECK(q.relations()[i].lhs == p.relations()[i].lhs);
      CHECK(q.relations()[i].rhs == p.relations()[i].rhs);
    }
  }

  TEST_CASE("word syntax") {
    auto const p = builtin::free(2);
    CHECK(p.parse_word("a.b.a") == Word{0, 1, 0});
    CHECK(p.parse_word("aba") == Word{0, 1, 0});
    CHECK(p.parse_word("e").empty());
    CHECK(p.parse_word("").empty());
    CHECK(p.format_word({}) == "e");
    CHECK(p.format_word({1, 0}) == "b.a");
    CHECK_THROWS_AS(p.parse_word("a.z"), ParseError);
    CHECK_THROWS_AS(p.parse_word("a..b"), ParseError);
    auto const b = builtin::braid(3);
    CHECK(b.parse_word("s2.s1") == Word{1, 0});
    CHECK_THROWS_AS(b.parse_word("s3"), ParseError);
  }

  TEST_CASE("builtins") {
    CHECK(builtin::free(3).generators() == std::vector<std::string>{"a", "b", "c"});
    CHECK(builtin::free(3).relations().empty());
    CHECK(builtin::nat(2).relations().size() == 1);
    CHECK(builtin::nat(4).generators().size() == 4);
    CHECK(builtin::braid(3).generators() == std::vector<std::string>{"s1", "s2"});
    // Far commutation plus two braid relations for n = 4.
    CHECK(builtin::braid(4).relations().size() == 3);
    CHECK(path_raag().relations().size() == 2);
    CHECK_THROWS_AS(builtin::raag({"a"}, {{"a", "a"}}), InvalidArgument);
    CHECK_THROWS_AS(builtin::free(0), InvalidArgument);
    CHECK_THROWS_AS(builtin::braid(1), InvalidArgument);
    CHECK(builtin_presentation("braid(3)").label() == "braid(3)");
    CHECK_THROWS_AS(builtin_presentation("braid"), ParseError);
    CHECK_THROWS_AS(builtin_presentation("heisenberg(3)"), ParseError);
    CHECK_THROWS_AS(builtin_presentation("free(x)"), ParseError);
  }

  TEST_CASE("growth matches closed forms and the rewrite oracle") {
    auto const f = enumerate(builtin::free(2), 6);
    CHECK(f->counts() == std::vector<std::size_t>{1, 2, 4, 8, 16, 32, 64});
    auto const n2 = enumerate(builtin::nat(2), 6);
    CHECK(n2->counts() == std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7});
    auto const n3 = enumerate(builtin::nat(3), 5);
    CHECK(n3->counts() == std::vector<std::size_t>{1, 3, 6, 10, 15, 21});

    auto const b3 = enumerate(builtin::braid(3), 6);
    oracle::Monoid ob(2, oracle::braid3_rules());
    CHECK(b3->counts() == ob.counts(6));
    CHECK(b3->count_at(4) == 12);

    auto const r = enumerate(path_raag(), 5);
    oracle::Monoid orr(3, rules_of(path_raag()));
    CHECK(r->counts() == orr.counts(5));

    auto const b4 = enumerate(builtin::braid(4), 4);
    oracle::Monoid ob4(3, rules_of(builtin::braid(4)));
    CHECK(b4->counts() == ob4.counts(4));
  }

  TEST_CASE("canonical words are the shortlex-minimal representatives") {
    auto const     t = enumerate(builtin::braid(3), 5);
    oracle::Monoid ob(2, oracle::braid3_rules());
    for (int n = 0; n <= 5; ++n) {
      for (auto const& w : oracle::words_of_length(2, n)) {
        Word const lw(w.begin(), w.end());
        CHECK(to_oracle(t->word(t->element(lw))) == ob.normal_form(w));
      }
    }
    Element const x = t->element("s1.s2.s1");
    CHECK(t->format(x) == "s1.s2.s1");
    CHECK(t->representatives(x).size() == 2);
    CHECK(t->element("s2.s1.s2") == x);
  }

  TEST_CASE("ids follow length then shortlex") {
    auto const t = enumerate(builtin::free(2), 3);
    CHECK(t->identity().id == 0);
    CHECK(t->generator(0).id == 1);
    CHECK(t->generator(1).id == 2);
    CHECK(t->format(Element{3}) == "a.a");
    CHECK(t->format(Element{6}) == "b.b");
    CHECK(t->size_through(2) == 7);
    for (std::uint32_t i = 1; i < t->size(); ++i) {
      CHECK(t->length(Element{i - 1}) <= t->length(Element{i}));
    }
    CHECK(t->elements_of_length(2).size() == 4);
    CHECK(t->elements_through(2).size() == 7);
    CHECK_THROWS_AS(t->element("a.a.a.a"), DepthError);
  }

  TEST_CASE("multiplication and quotients") {
    auto const     t = enumerate(builtin::braid(3), 5);
    oracle::Monoid ob(2, oracle::braid3_rules());
    for (Element x : t->elements_through(2)) {
      for (Element y : t->elements_through(3)) {
        Element const xy = t->multiply(x, y);
        CHECK(to_oracle(t->word(xy)) == ob.multiply(to_oracle(t->word(x)), to_oracle(t->word(y))));
        CHECK(t->left_quotient(x, xy) == y);
        CHECK(t->right_quotient(y, xy) == x);
      }
    }
    Element const s1 = t->generator(0), s2 = t->generator(1);
    CHECK_FALSE(t->left_quotient(s1, s2).has_value());
    CHECK_FALSE(t->left_quotient(t->element("s1.s1"), t->element("s2.s1")).has_value());
    CHECK_THROWS_AS(t->multiply(t->element("s1.s1.s1"), t->element("s2.s2.s2")), DepthError);
  }

  TEST_CASE("divisor sets agree with brute-force factorization") {
    for (auto const& pres : {builtin::braid(3), path_raag(), builtin::free(2)}) {
      auto const     t = enumerate(pres, 4);
      oracle::Monoid om(static_cast<std::uint32_t>(pres.number_of_generators()), rules_of(pres));
      for (Element p : t->elements_through(4)) {
        auto const w = to_oracle(t->word(p));
        CHECK(words_of(*t, t->right_divisors(p)) == om.right_divisors(w));
        CHECK(words_of(*t, t->left_divisors(p)) == om.left_divisors(w));
      }
    }
  }

  TEST_CASE("divisor counts: product formula and suffixes") {
    auto const n2 = enumerate(builtin::nat(2), 10);
    for (int a = 0; a <= 5; ++a) {
      for (int b = 0; b <= 5; ++b) {
        Word w(static_cast<std::size_t>(a), 0);
        w.insert(w.end(), static_cast<std::size_t>(b), 1);
        Element const p = n2->element(w);
        CHECK(n2->right_divisors(p).size() == static_cast<std::size_t>((a + 1) * (b + 1)));
        CHECK(n2->left_divisors(p).size() == n2->right_divisors(p).size());
      }
    }
    auto const f = enumerate(builtin::free(2), 6);
    for (Element p : f->elements_through(6)) {
      CHECK(f->right_divisors(p).size() == static_cast<std::size_t>(f->length(p) + 1));
    }
  }

  TEST_CASE("cancellation check") {
    CHECK(enumerate(builtin::braid(3), 5)->cancellation().ok);
    CHECK(enumerate(path_raag(), 4)->cancellation().ok);
    // a.b = a.c breaks left cancellation.
    Presentation bad({"a", "b", "c"}, {{{0, 1}, {0, 2}}});
    auto const   t = enumerate(bad, 3);
    CHECK_FALSE(t->cancellation().ok);
    CHECK_FALSE(t->cancellation().witness.empty());
    CHECK_THROWS_AS(t->require_cancellative(), InvariantFailure);
  }

  TEST_CASE("word cap") {
    CHECK_THROWS_AS(enumerate(builtin::free(3), 12, 1000), ResourceLimit);
    CHECK_NOTHROW(enumerate(builtin::free(3), 5, 1000));
    CHECK_THROWS_AS(enumerate(builtin::free(2), -1), InvalidArgument);
  }

  TEST_CASE("right lcm") {
    auto const b = enumerate(builtin::braid(3), 4);
    auto const r = right_lcm_check(*b, b->generator(0), b->generator(1));
    CHECK(r.verdict == LcmVerdict::lcm);
    REQUIRE(r.lcm.has_value());
    CHECK(b->format(*r.lcm) == "s1.s2.s1");

    auto const n = enumerate(builtin::nat(2), 3);
    auto const rn = right_lcm_check(*n, n->generator(0), n->generator(1));
    CHECK(rn.lcm == n->element("x.y"));
    CHECK(right_lcm_check(*n, n->element("x.x"), n->element("x")).lcm == n->element("x.x"));

    auto const f = enumerate(builtin::free(2), 4);
    auto const rf = right_lcm_check(*f, f->generator(0), f->generator(1));
    CHECK(rf.verdict == LcmVerdict::empty_intersection);
    CHECK(rf.common_multiples.empty());

    // a.x = b.y and a.y = b.x: two incomparable minimal common multiples.
    Presentation two({"a", "b", "x", "y"}, {{{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}});
    auto const   t  = enumerate(two, 3);
    auto const   rt = right_lcm_check(*t, t->generator(0), t->generator(1));
    CHECK(rt.verdict == LcmVerdict::no_unique_minimum);
    CHECK_FALSE(rt.lcm.has_value());
  }

  TEST_CASE("controlled maps") {
    auto const b      = enumerate(builtin::braid(3), 4);
    auto const length = ControlledMap::length_map(b);
    CHECK(length.max_weight() == 1);
    CHECK(length.finite_fibers());
    for (int n = 0; n <= 4; ++n) {
      Element const q = length.target()->element(Word(static_cast<std::size_t>(n), 0));
      CHECK(length.fiber(q).size() == b->count_at(n));
    }
    CHECK_THROWS_AS(ControlledMap::abelianization(b), InvariantFailure);

    auto const n2 = enumerate(builtin::nat(2), 3);
    auto const ab = ControlledMap::abelianization(n2);
    for (Element p : n2->elements_through(3)) {
      CHECK(ab.fiber(ab(p)) == std::vector<Element>{p});
    }

    auto const f  = enumerate(builtin::free(2), 3);
    auto const fa = ControlledMap::abelianization(f);
    CHECK(fa.fiber(fa.target()->element("x.y")).size() == 2);
    CHECK(fa(f->element("a.b.a")) == fa.target()->element("x.x.y"));

    // Doubling map braid(3) -> ℕ: weight 2.
    auto const nat8 = enumerate(builtin::nat(1), 8);
    ControlledMap dbl(b, nat8, {{0, 0}, {0, 0}});
    CHECK(dbl.max_weight() == 2);
    CHECK(dbl(b->element("s1.s2")) == nat8->element(Word(4, 0)));
    CHECK(dbl.fiber(nat8->element(Word(3, 0))).empty());
    CHECK_THROWS_AS(dbl.fiber(nat8->element(Word(10, 0))), DepthError);
    CHECK_THROWS_AS(ControlledMap(b, enumerate(builtin::nat(1), 7), {{0, 0}, {0, 0}}),
                    DepthError);

    // s1 -> x, s2 -> x.x breaks s1s2s1 = s2s1s2.
    CHECK_THROWS_AS(ControlledMap(b, nat8, {{0}, {0, 0}}), InvariantFailure);

    // Weight-zero generator: fibers infinite.
    auto const n1 = enumerate(builtin::nat(1), 4);
    ControlledMap collapse(f, n1, {{0}, {}});
    CHECK_FALSE(collapse.finite_fibers());
    CHECK_THROWS_AS(collapse.fiber(n1->identity()), DepthError);
  }

  TEST_CASE("random products are associative and length-additive") {
    std::mt19937_64 rng(7);
    for (auto const& pres : {builtin::braid(3), builtin::braid(4), path_raag()}) {
      auto const t   = enumerate(pres, 6);
      auto const all = t->elements_through(2);
      std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
      for (int i = 0; i < 200; ++i) {
        Element const x = all[pick(rng)], y = all[pick(rng)], z = all[pick(rng)];
        CHECK(t->multiply(t->multiply(x, y), z) == t->multiply(x, t->multiply(y, z)));
        CHECK(t->length(t->multiply(x, y)) == t->length(x) + t->length(y));
      }
      // Every representative of a class resolves back to it.
      for (Element x : t->elements_through(4)) {
        for (auto const& w : t->representatives(x)) {
          CHECK(t->element(w) == x);
        }
      }
    }
  }
}
