#include "semirfd/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "semirfd/coaction.hpp"
#include "semirfd/controlled_map.hpp"
#include "semirfd/error.hpp"
#include "semirfd/fdapprox.hpp"
#include "semirfd/funcalg.hpp"
#include "semirfd/linrep.hpp"

namespace semirfd {

  using json = nlohmann::ordered_json;

  namespace {

    ////////////////////////////////////////////////////////////////////////
    // Config field readers
    ////////////////////////////////////////////////////////////////////////

    int read_int(json const& j, char const* key, int min) {
      auto const& v = j.at(key);
      if (!v.is_number_integer()) {
        throw ParseError(std::string("\"") + key + "\" must be an integer");
      }
      auto const x = v.get<long long>();
      if (x < min || x > 1'000'000) {
        throw ParseError(std::string("\"") + key + "\" must be at least " + std::to_string(min));
      }
      return static_cast<int>(x);
    }

    double read_double(json const& j, char const* key) {
      auto const& v = j.at(key);
      if (!v.is_number()) {
        throw ParseError(std::string("\"") + key + "\" must be a number");
      }
      return v.get<double>();
    }

    std::string read_file(std::string const& path) {
      std::ifstream in(path);
      if (!in) {
        throw ParseError("cannot read \"" + path + "\"");
      }
      std::ostringstream s;
      s << in.rdbuf();
      return s.str();
    }

    std::set<std::string> const& known_keys() {
      static std::set<std::string> const keys{
          "command", "presentation", "L",          "L_P",        "L_Q",      "D",
          "F",       "families",     "elements",   "lcm",        "map",      "kernel",
          "d",       "phi",          "D_profile",  "zeta_order", "norm_tol", "expect_norm",
          "expect_tol", "samples",   "seed",       "out"};
      return keys;
    }

    ////////////////////////////////////////////////////////////////////////
    // Checks and element serialization
    ////////////////////////////////////////////////////////////////////////

    class Checks {
     public:
      void add(std::string const& name, bool ok, json witness = nullptr) {
        json c     = json::object();
        c["name"]  = name;
        c["status"] = ok ? "pass" : "fail";
        c["witness"] = std::move(witness);
        _list.push_back(std::move(c));
        _all = _all && ok;
      }
      // Records the first failure of a family of checks, or a pass.
      void add_first(std::string const& name, std::optional<std::string> const& failure,
                     json pass_witness = nullptr) {
        if (failure) {
          add(name, false, *failure);
        } else {
          add(name, true, std::move(pass_witness));
        }
      }
      bool all_pass() const noexcept {
        return _all;
      }
      json const& list() const noexcept {
        return _list;
      }

     private:
      json _list = json::array();
      bool _all  = true;
    };

    // Exponent vectors for ℕ^d tables (a bare integer for ℕ), words otherwise.
    json element_json(EnumerationTable const& table, Element x) {
      auto const& pres = table.presentation();
      if (pres.kind() == PresentationKind::commutative) {
        std::vector<int> e(pres.number_of_generators(), 0);
        for (Letter l : table.word(x)) {
          ++e[l];
        }
        if (e.size() == 1) {
          return e[0];
        }
        return e;
      }
      return table.format(x);
    }

    json elements_json(EnumerationTable const& table, std::vector<Element> const& xs) {
      json out = json::array();
      for (Element x : xs) {
        out.push_back(element_json(table, x));
      }
      return out;
    }

    Word spec_word(Presentation const& pres, json const& spec) {
      if (spec.is_string()) {
        return pres.parse_word(spec.get<std::string>());
      }
      if (spec.is_number_integer()) {
        if (pres.number_of_generators() != 1) {
          throw ParseError("integer elements need a single-generator monoid");
        }
        auto const n = spec.get<long long>();
        if (n < 0 || n > 1'000'000) {
          throw ParseError("element power out of range");
        }
        return Word(static_cast<std::size_t>(n), 0);
      }
      if (spec.is_array()) {
        if (spec.size() != pres.number_of_generators()) {
          throw ParseError("exponent list has " + std::to_string(spec.size())
                           + " entries, expected " + std::to_string(pres.number_of_generators()));
        }
        Word w;
        for (std::size_t i = 0; i < spec.size(); ++i) {
          if (!spec[i].is_number_integer() || spec[i].get<long long>() < 0
              || spec[i].get<long long>() > 1'000'000) {
            throw ParseError("exponents must be nonnegative integers");
          }
          w.insert(w.end(), static_cast<std::size_t>(spec[i].get<long long>()),
                   static_cast<Letter>(i));
        }
        return w;
      }
      throw ParseError("element must be a word, an integer or an exponent list");
    }

    std::vector<json> spec_list(json const& j, char const* what) {
      if (!j.is_array()) {
        throw ParseError(std::string("\"") + what + "\" must be a list");
      }
      return std::vector<json>(j.begin(), j.end());
    }

    int max_spec_length(Presentation const& pres, json const& list) {
      int m = 0;
      if (list.is_array()) {
        for (auto const& s : list) {
          m = std::max(m, static_cast<int>(spec_word(pres, s).size()));
        }
      }
      return m;
    }

    std::vector<Element> resolve_all(EnumerationTable const& table, json const& list) {
      std::vector<Element> out;
      for (auto const& s : list) {
        out.push_back(resolve_element(table, s));
      }
      return out;
    }

    struct Context {
      RunConfig const&  cfg;
      RunOptions const& opts;
      NormOptions       norm;
      Checks            checks;
      json              tables = json::object();
    };

    json presentation_json(Presentation const& pres) {
      json out          = json::object();
      out["label"]      = pres.label();
      out["kind"]       = to_string(pres.kind());
      out["generators"] = pres.generators();
      out["relations"]  = pres.relations().size();
      return out;
    }

    ////////////////////////////////////////////////////////////////////////
    // enumerate
    ////////////////////////////////////////////////////////////////////////

    constexpr std::size_t check_budget = 200'000;

    void cancellation_check(Context& ctx, EnumerationTable const& table) {
      auto const& c = table.cancellation();
      ctx.checks.add("cancellative", c.ok, c.ok ? json(nullptr) : json(c.witness));
    }

    void run_enumerate(Context& ctx) {
      auto const pres  = resolve_presentation(ctx.cfg.presentation);
      auto const table = enumerate(pres, *ctx.cfg.L, ctx.opts.max_words);
      int const  L     = table->bound();

      ctx.tables["presentation"] = presentation_json(pres);
      ctx.tables["L"]            = L;
      ctx.tables["counts"]       = table->counts();
      ctx.tables["total"]        = table->size();

      cancellation_check(ctx, *table);

      std::optional<std::string> bad;
      for (Element x : table->elements_through(L)) {
        for (auto const& w : table->representatives(x)) {
          if (table->element(w) != x) {
            bad = "word " + pres.format_word(w) + " does not resolve to its class "
                  + table->format(x);
            break;
          }
        }
        if (bad) {
          break;
        }
      }
      ctx.checks.add_first("representatives_resolve", bad);

      bad.reset();
      Element const e = table->identity();
      for (Element x : table->elements_through(L)) {
        if (table->multiply(e, x) != x || table->multiply(x, e) != x) {
          bad = "e is not a unit for " + table->format(x);
          break;
        }
      }
      ctx.checks.add_first("identity", bad);

      // Products of classes must be independent of the representatives used.
      bad.reset();
      std::size_t pairs = 0;
      for (Element x : table->elements_through(L)) {
        for (Element y : table->elements_through(L - table->length(x))) {
          if (++pairs > check_budget || bad) {
            break;
          }
          Element const xy = table->multiply(x, y);
          if (table->length(xy) != table->length(x) + table->length(y)) {
            bad = "|" + table->format(x) + "·" + table->format(y) + "| is not additive";
            continue;
          }
          for (auto const& w : table->representatives(x)) {
            Word v = w;
            auto const yw = table->word(y);
            v.insert(v.end(), yw.begin(), yw.end());
            if (table->element(v) != xy) {
              bad = "product of " + pres.format_word(w) + " and " + table->format(y)
                    + " depends on the representative";
              break;
            }
          }
        }
      }
      ctx.checks.add_first("multiplication_well_defined", bad);

      bad.reset();
      std::size_t triples = 0;
      for (Element x : table->elements_through(L)) {
        int const lx = table->length(x);
        for (Element y : table->elements_through(L - lx)) {
          int const ly = table->length(y);
          for (Element z : table->elements_through(L - lx - ly)) {
            if (++triples > check_budget || bad) {
              break;
            }
            if (table->multiply(table->multiply(x, y), z)
                != table->multiply(x, table->multiply(y, z))) {
              bad = "(" + table->format(x) + "·" + table->format(y) + ")·" + table->format(z);
            }
          }
        }
      }
      ctx.checks.add_first("associativity", bad);
      ctx.tables["checked"] = {{"pairs", std::min(pairs, check_budget)},
                               {"triples", std::min(triples, check_budget)}};
    }

    ////////////////////////////////////////////////////////////////////////
    // divisors
    ////////////////////////////////////////////////////////////////////////

    char const* to_string(LcmVerdict v) {
      switch (v) {
        case LcmVerdict::lcm: return "lcm";
        case LcmVerdict::empty_intersection: return "empty_intersection";
        case LcmVerdict::no_unique_minimum: return "no_unique_minimum";
      }
      return "?";
    }

    void run_divisors(Context& ctx) {
      auto const pres = resolve_presentation(ctx.cfg.presentation);
      int        L    = ctx.cfg.L.value_or(4);
      L               = std::max({L, max_spec_length(pres, ctx.cfg.elements)});
      if (ctx.cfg.lcm.is_array()) {
        for (auto const& pair : ctx.cfg.lcm) {
          L = std::max(L, max_spec_length(pres, pair));
        }
      }
      auto const table = enumerate(pres, L, ctx.opts.max_words);
      cancellation_check(ctx, *table);

      std::vector<Element> elements = ctx.cfg.elements.is_null()
                                          ? table->elements_through(L)
                                          : resolve_all(*table, ctx.cfg.elements);
      ctx.tables["presentation"] = presentation_json(pres);
      ctx.tables["L"]            = L;

      json                       rows = json::array();
      std::optional<std::string> symmetry, factorization, heredity, formula;
      for (Element p : elements) {
        auto const R = table->right_divisors(p);
        auto const Lp = table->left_divisors(p);
        json row      = json::object();
        row["element"]     = element_json(*table, p);
        row["length"]      = table->length(p);
        row["right_count"] = R.size();
        row["left_count"]  = Lp.size();
        row["right"]       = elements_json(*table, R);
        row["left"]        = elements_json(*table, Lp);
        rows.push_back(std::move(row));

        if (!symmetry && R.size() != Lp.size()) {
          symmetry = "|R| = " + std::to_string(R.size()) + ", |L| = " + std::to_string(Lp.size())
                     + " at " + table->format(p);
        }
        auto has = [](std::vector<Element> const& v, Element x) {
          return std::binary_search(v.begin(), v.end(), x);
        };
        if (!factorization) {
          if (!has(R, p) || !has(R, table->identity()) || !has(Lp, p)
              || !has(Lp, table->identity())) {
            factorization = "e or p missing from its divisor sets at " + table->format(p);
          }
          for (Element r : R) {
            if (!table->right_quotient(r, p)) {
              factorization = table->format(r) + " is listed in R_p but p/r does not exist, p = "
                              + table->format(p);
            }
          }
          for (Element l : Lp) {
            if (!table->left_quotient(l, p)) {
              factorization = table->format(l) + " is listed in L_p but l\\p does not exist, p = "
                              + table->format(p);
            }
          }
        }
        if (!heredity) {
          for (Element r : R) {
            for (Element rr : table->right_divisors(r)) {
              if (!has(R, rr)) {
                heredity = "R_" + table->format(r) + " is not inside R_" + table->format(p);
              }
            }
          }
        }
        if (!formula) {
          if (pres.kind() == PresentationKind::commutative) {
            std::vector<std::size_t> e(pres.number_of_generators(), 0);
            for (Letter l : table->word(p)) {
              ++e[l];
            }
            std::size_t expected = 1;
            for (auto k : e) {
              expected *= k + 1;
            }
            if (R.size() != expected) {
              formula = "|R| = " + std::to_string(R.size()) + " but Π(α_i+1) = "
                        + std::to_string(expected) + " at " + table->format(p);
            }
          } else if (pres.kind() == PresentationKind::free) {
            if (R.size() != static_cast<std::size_t>(table->length(p)) + 1) {
              formula = "|R| = " + std::to_string(R.size()) + " but |w|+1 = "
                        + std::to_string(table->length(p) + 1) + " at " + table->format(p);
            }
          }
        }
      }
      ctx.tables["divisors"] = std::move(rows);
      ctx.checks.add_first("divisor_count_symmetry", symmetry);
      ctx.checks.add_first("divisor_factorization", factorization);
      ctx.checks.add_first("divisor_heredity", heredity);
      if (pres.kind() == PresentationKind::commutative) {
        ctx.checks.add_first("divisor_product_formula", formula);
      } else if (pres.kind() == PresentationKind::free) {
        ctx.checks.add_first("divisor_suffix_count", formula);
      }

      if (ctx.cfg.lcm.is_array()) {
        json lcms = json::array();
        for (auto const& pair : ctx.cfg.lcm) {
          if (!pair.is_array() || pair.size() != 2) {
            throw ParseError("\"lcm\" entries must be pairs");
          }
          Element const p   = resolve_element(*table, pair[0]);
          Element const q   = resolve_element(*table, pair[1]);
          auto const    rep = right_lcm_check(*table, p, q);
          json          row = json::object();
          row["p"]                = element_json(*table, p);
          row["q"]                = element_json(*table, q);
          row["verdict"]          = to_string(rep.verdict);
          row["lcm"]              = rep.lcm ? element_json(*table, *rep.lcm) : json(nullptr);
          row["common_multiples"] = rep.common_multiples.size();
          lcms.push_back(std::move(row));
        }
        ctx.tables["lcm"] = std::move(lcms);
      }
    }

    ////////////////////////////////////////////////////////////////////////
    // fdapprox
    ////////////////////////////////////////////////////////////////////////

    std::optional<std::string> partial_isometry_violation(DenseMatrix const& m) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
          if (m(i, j) != Scalar(0) && m(i, j) != Scalar(1)) {
            return "entry (" + std::to_string(i) + ", " + std::to_string(j) + ") is not 0 or 1";
          }
        }
      }
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (m.row(i).sum().real() > 1) {
          return "row " + std::to_string(i) + " has two nonzero entries";
        }
      }
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (m.col(j).sum().real() > 1) {
          return "column " + std::to_string(j) + " has two nonzero entries";
        }
      }
      return std::nullopt;
    }

    void subsets(std::vector<Element> const& pool, std::size_t max_size, std::size_t start,
                 std::vector<Element>& current, std::vector<std::vector<Element>>& out) {
      if (!current.empty()) {
        out.push_back(current);
        if (out.size() > check_budget) {
          throw ResourceLimit("more than " + std::to_string(check_budget) + " families");
        }
      }
      if (current.size() == max_size) {
        return;
      }
      for (std::size_t i = start; i < pool.size(); ++i) {
        current.push_back(pool[i]);
        subsets(pool, max_size, i + 1, current, out);
        current.pop_back();
      }
    }

    void run_fdapprox(Context& ctx) {
      auto const pres = resolve_presentation(ctx.cfg.presentation);
      int const  L    = ctx.cfg.L.value_or(5);
      int        fam_len = 0;
      std::size_t fam_size = 0;
      if (!ctx.cfg.families.is_null()) {
        if (!ctx.cfg.families.is_object()) {
          throw ParseError("\"families\" must be an object");
        }
        fam_len  = read_int(ctx.cfg.families, "max_length", 0);
        fam_size = static_cast<std::size_t>(read_int(ctx.cfg.families, "max_size", 1));
      }
      int const bound
          = std::max({L, max_spec_length(pres, ctx.cfg.F) + 1, fam_len});
      auto const table = enumerate(pres, bound, ctx.opts.max_words);
      table->require_cancellative();

      auto const F = resolve_all(*table, ctx.cfg.F);
      auto const Y = build_Y(table, F);
      ctx.tables["presentation"] = presentation_json(pres);
      ctx.tables["L"]            = L;
      ctx.tables["F"]            = elements_json(*table, F);
      ctx.tables["Y_dim"]        = Y.dim();
      ctx.tables["Y_basis"]      = elements_json(*table, Y.basis());

      try {
        auto const ks           = kernel_set(table, F, L);
        ctx.tables["kernel_set"] = elements_json(*table, ks.kernel);
        ctx.tables["support"]    = elements_json(*table, ks.support);
        ctx.checks.add("kernel_formula", true);
      } catch (InvariantFailure const& e) {
        ctx.checks.add("kernel_formula", false, e.what());
      }

      auto const                 through_L = table->elements_through(L);
      std::optional<std::string> bad;
      for (Element s : through_L) {
        if (auto v = coinvariance_violation(Y, s)) {
          bad = "s = " + table->format(s) + ": " + *v;
          break;
        }
      }
      ctx.checks.add_first("coinvariance", bad);

      bad.reset();
      std::vector<DenseMatrix> pis;
      for (Element s : through_L) {
        pis.push_back(pi_F(Y, s));
        if (!bad) {
          if (auto v = partial_isometry_violation(pis.back())) {
            bad = "s = " + table->format(s) + ": " + *v;
          }
        }
      }
      ctx.checks.add_first("partial_isometry", bad);

      bad.reset();
      for (Element s : through_L) {
        for (Element t : table->elements_through(L - table->length(s))) {
          if (bad) {
            break;
          }
          Element const st = table->multiply(s, t);
          if (pis[s.id] * pis[t.id] != pis[st.id]) {
            bad = "π(λ_" + table->format(s) + ")π(λ_" + table->format(t) + ") != π(λ_"
                  + table->format(st) + ")";
          }
        }
      }
      ctx.checks.add_first("multiplicativity", bad);

      bad.reset();
      std::size_t certified = 0;
      for (std::size_t g = 0; g < pres.number_of_generators() && !bad; ++g) {
        Element const s = table->generator(g);
        for (Element q : Y.basis()) {
          if (table->length(q) + 1 > table->bound()) {
            continue;
          }
          auto const cert = stabilization_index(table, s, q, {F});
          ++certified;
          if (!cert.ok) {
            bad = "s = " + table->format(s) + ", q = " + table->format(q) + ": "
                  + cert.failures.front();
            break;
          }
        }
      }
      ctx.checks.add_first("stabilization", bad, json{{"pairs", certified}});

      if (fam_size > 0) {
        std::vector<std::vector<Element>> families;
        std::vector<Element>              current;
        subsets(table->elements_through(fam_len), fam_size, 0, current, families);
        std::size_t mismatches = 0;
        json        witness    = nullptr;
        for (auto const& f : families) {
          try {
            kernel_set(table, f, L);
          } catch (InvariantFailure const& e) {
            if (mismatches++ == 0) {
              witness = json{{"F", elements_json(*table, f)}, {"error", e.what()}};
            }
          }
        }
        ctx.tables["families"] = {{"tested", families.size()}, {"mismatches", mismatches}};
        ctx.checks.add("kernel_formula_families", mismatches == 0, std::move(witness));
      }
    }

    ////////////////////////////////////////////////////////////////////////
    // coaction
    ////////////////////////////////////////////////////////////////////////

    ControlledMap build_map(Context& ctx, TablePtr const& source, int L_Q) {
      json const& m = ctx.cfg.map;
      if (m.is_null() || m == "length") {
        return ControlledMap::length_map(source, L_Q);
      }
      if (m == "abelianization") {
        return ControlledMap::abelianization(source, L_Q);
      }
      if (!m.is_object() || !m.contains("target") || !m.contains("images")) {
        throw ParseError("\"map\" must be \"length\", \"abelianization\" or "
                         "{\"target\": ..., \"images\": ...}");
      }
      auto const        target_pres = resolve_presentation(m.at("target"));
      auto const&       gens        = source->presentation().generators();
      std::vector<Word> images(gens.size());
      json const&       im = m.at("images");
      if (im.is_array()) {
        if (im.size() != gens.size()) {
          throw ParseError("\"images\" needs one entry per generator");
        }
        for (std::size_t i = 0; i < gens.size(); ++i) {
          images[i] = spec_word(target_pres, im[i]);
        }
      } else if (im.is_object()) {
        for (std::size_t i = 0; i < gens.size(); ++i) {
          if (!im.contains(gens[i])) {
            throw ParseError("\"images\" lacks generator " + gens[i]);
          }
          images[i] = spec_word(target_pres, im.at(gens[i]));
        }
        if (im.size() != gens.size()) {
          throw ParseError("\"images\" names an unknown generator");
        }
      } else {
        throw ParseError("\"images\" must be a list or an object");
      }
      int m_weight = 0;
      for (auto const& w : images) {
        m_weight = std::max(m_weight, static_cast<int>(w.size()));
      }
      auto target = enumerate(target_pres, std::max(L_Q, m_weight * source->bound()),
                              ctx.opts.max_words);
      return ControlledMap(source, std::move(target), std::move(images), "custom");
    }

    AlgebraElement random_element(std::mt19937_64& rng, TablePtr const& table, int max_length,
                                  int max_terms) {
      auto const pool = table->elements_through(max_length);
      std::uniform_int_distribution<int>         terms(1, max_terms);
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      std::uniform_int_distribution<int>         coeff(-3, 3);
      AlgebraElement                             a(table);
      int const                                  n = terms(rng);
      for (int i = 0; i < n; ++i) {
        Element const p  = pool[pick(rng)];
        double const  re = coeff(rng);
        double const  im = coeff(rng);
        a.add(p, Scalar(re, im));
      }
      return a;
    }

    std::optional<std::string> spectral_violation(AlgebraElement const& a,
                                                  ControlledMap const&  phi) {
      auto const        parts = spectral_decompose(a, phi);
      AlgebraElement    sum(a.table());
      std::set<Element> seen;
      for (auto const& [q, part] : parts) {
        if (part.is_zero()) {
          return "empty spectral part at " + phi.target()->format(q);
        }
        for (auto const& [p, c] : part.coefficients()) {
          if (phi(p) != q) {
            return a.table()->format(p) + " filed under the wrong spectral index";
          }
          if (!seen.insert(p).second) {
            return a.table()->format(p) + " occurs in two spectral parts";
          }
        }
        sum += part;
      }
      if (sum != a) {
        return "Σ a_q != a for a = " + a.format();
      }
      return std::nullopt;
    }

    SparseOperator fit_codomain(SparseOperator const& a, Space const& cod) {
      return a.codomain() == cod ? a : a.extend_codomain(cod);
    }

    void run_coaction(Context& ctx) {
      auto const pres    = resolve_presentation(ctx.cfg.presentation);
      int const  L_P    = ctx.cfg.L_P.value_or(3);
      auto       src    = enumerate(pres, std::max(L_P, 2), ctx.opts.max_words);
      src->require_cancellative();

      // F lives in Q, so its lengths are known only once the target exists;
      // rebuild both tables if F or L_Q reach past the first guess.
      int const  L_Q_req = ctx.cfg.L_Q.value_or(0);
      auto       phi     = build_map(ctx, src, L_Q_req);
      int const  L_Q     = ctx.cfg.L_Q.value_or(phi.max_weight() * L_P + 1);
      int const  need_q
          = ctx.cfg.F.is_null() ? 0 : max_spec_length(phi.target()->presentation(), ctx.cfg.F);
      int const  need_p = phi.finite_fibers() ? need_q / phi.min_weight() : 0;
      if (need_p > src->bound() || std::max(L_Q, need_q) > phi.target()->bound()) {
        src = enumerate(pres, std::max(src->bound(), need_p), ctx.opts.max_words);
        phi = build_map(ctx, src, std::max(L_Q, need_q));
      }
      auto const& Q = phi.target();

      ctx.tables["presentation"] = presentation_json(pres);
      ctx.tables["target"]       = presentation_json(Q->presentation());
      ctx.tables["map"]          = phi.name();
      json images                = json::array();
      for (std::size_t i = 0; i < pres.number_of_generators(); ++i) {
        images.push_back(element_json(*Q, phi.image_of_generator(i)));
      }
      ctx.tables["generator_images"] = std::move(images);
      ctx.tables["L_P"]              = L_P;
      ctx.tables["L_Q"]              = L_Q;
      ctx.checks.add("homomorphism", true, json{{"source_elements", src->size()}});

      auto const fell = fell_intertwiner(phi, L_P, L_Q);
      ctx.tables["fell"] = {{"domain_dim", fell.W.domain().dim()},
                            {"codomain_dim", fell.W.codomain().dim()},
                            {"nnz", fell.W.nnz()}};
      ctx.checks.add("fell_isometry", fell.isometry);
      for (auto const& c : fell.intertwining) {
        ctx.checks.add("fell_intertwining[" + src->format(c.generator) + "]", c.ok,
                       c.ok ? json(nullptr) : json(c.witness));
      }

      std::mt19937_64            rng(ctx.cfg.seed);
      std::optional<std::string> spectral, character;
      for (int i = 0; i < ctx.cfg.samples; ++i) {
        auto const a = random_element(rng, src, L_P, 5);
        if (!spectral) {
          spectral = spectral_violation(a, phi);
        }
        if (!character && character_reconstruct(spectral_decompose(a, phi), src) != a) {
          character = "(id⊗χ)δ(a) != a for a = " + a.format();
        }
      }
      ctx.checks.add_first("spectral_reconstruction", spectral,
                           json{{"samples", ctx.cfg.samples}});
      ctx.checks.add_first("character_reconstruction", character,
                           json{{"samples", ctx.cfg.samples}});

      std::optional<std::string> mult;
      int const                  pairs = std::min(ctx.cfg.samples, 20);
      for (int i = 0; i < pairs && !mult; ++i) {
        auto const a  = random_element(rng, src, 1, 3);
        auto const b  = random_element(rng, src, 1, 3);
        auto const db = delta_apply(phi, b, 0, 0);
        int const  qb = db.codomain().factors()[1].level;
        auto const lhs = compose(delta_apply(phi, a, b.degree(), qb), db);
        auto const rhs = fit_codomain(delta_apply(phi, a * b, 0, 0), lhs.codomain());
        if (lhs != rhs) {
          mult = "δ(a)δ(b) != δ(ab) for a = " + a.format() + ", b = " + b.format();
        }
      }
      ctx.checks.add_first("delta_multiplicative", mult, json{{"pairs", pairs}});

      if (phi.finite_fibers()) {
        json sizes = json::array();
        for (Element q : Q->elements_through(std::min(L_P, Q->bound()))) {
          if (Q->length(q) / phi.min_weight() > src->bound()) {
            continue;
          }
          sizes.push_back({{"q", element_json(*Q, q)}, {"size", phi.fiber(q).size()}});
        }
        ctx.tables["fiber_sizes"] = std::move(sizes);
      }

      if (!ctx.cfg.F.is_null()) {
        auto const F    = resolve_all(*Q, ctx.cfg.F);
        auto const span = qf_spanning_set(phi, F);
        ctx.tables["qf"] = {{"F", elements_json(*Q, F)},
                            {"cardinality", span.cardinality},
                            {"elements", elements_json(*src, span.elements)}};
        // Membership straight from the definition: φ(p) left-divides a right
        // divisor of some q ∈ F.
        std::vector<Element> brute;
        for (Element p : src->elements_through(src->bound())) {
          Element const t   = phi(p);
          bool          hit = false;
          for (Element q : F) {
            for (Element r : Q->elements_through(Q->length(q))) {
              if (Q->right_quotient(r, q) && Q->left_quotient(t, r)) {
                hit = true;
              }
            }
          }
          if (hit) {
            brute.push_back(p);
          }
        }
        bool const same = brute == span.elements;
        ctx.checks.add("qf_spanning_set", same,
                       same ? json{{"cardinality", span.cardinality}}
                            : json{{"expected", brute.size()}, {"found", span.cardinality}});
      }
    }

    ////////////////////////////////////////////////////////////////////////
    // funcalg
    ////////////////////////////////////////////////////////////////////////

    KernelSpec resolve_kernel(json const& k, int d) {
      if (k.is_string()) {
        return KernelSpec::by_name(k.get<std::string>(), d);
      }
      if (k.is_object()) {
        if (k.contains("name")) {
          return KernelSpec::by_name(k.at("name").get<std::string>(), d);
        }
        for (char const* key : {"c", "coefficients"}) {
          if (k.contains(key)) {
            return KernelSpec::custom(d, k.at(key).get<std::vector<double>>());
          }
        }
      }
      throw ParseError("\"kernel\" must be a name or {\"coefficients\": [...]}");
    }

    json scalar_json(Scalar c) {
      if (c.imag() == 0) {
        return c.real();
      }
      return json::array({c.real(), c.imag()});
    }

    void run_funcalg(Context& ctx) {
      json const& phi_spec = ctx.cfg.phi;
      int         d        = 1;
      if (ctx.cfg.variables) {
        d = *ctx.cfg.variables;
      } else if (phi_spec.is_string()) {
        d = expression_variables(phi_spec.get<std::string>());
      } else if (phi_spec.is_array() && !phi_spec.empty() && phi_spec[0].is_object()
                 && phi_spec[0].contains("exponents")) {
        d = static_cast<int>(phi_spec[0]["exponents"].size());
      }
      Polynomial const phi = phi_spec.is_string()
                                 ? parse_polynomial_expression(phi_spec.get<std::string>(), d)
                                 : parse_polynomial(phi_spec.dump(), d);
      KernelSpec const k = resolve_kernel(ctx.cfg.kernel, d);
      int const        D = ctx.cfg.D.value_or(20);

      std::vector<int> profile = ctx.cfg.D_profile;
      if (profile.empty()) {
        for (int x : {D / 20, D / 4, D / 2, D}) {
          if (x >= 1) {
            profile.push_back(x);
          }
        }
      }
      std::sort(profile.begin(), profile.end());
      profile.erase(std::unique(profile.begin(), profile.end()), profile.end());
      if (profile.back() != D) {
        profile.push_back(D);
      }

      ctx.tables["kernel"] = k.name();
      ctx.tables["d"]      = d;
      ctx.tables["phi"]    = phi.format();
      ctx.tables["D"]      = D;

      json                       prof = json::array();
      double                     prev = 0.0, norm = 0.0;
      std::optional<std::string> monotone;
      for (int x : profile) {
        double const n = multiplier_norm_lower(k, phi, x, ctx.norm);
        prof.push_back({{"D", x}, {"norm", n}});
        if (n < prev - ctx.norm.rel_tol * std::max(1.0, prev)) {
          monotone = "norm drops from " + std::to_string(prev) + " to " + std::to_string(n)
                     + " at D = " + std::to_string(x);
        }
        prev = n;
        norm = n;
      }
      ctx.tables["norm_lower"]   = norm;
      ctx.tables["tolerance"]    = ctx.norm.rel_tol;
      ctx.tables["norm_profile"] = std::move(prof);
      ctx.checks.add_first("norm_monotone", monotone);

      auto const decomposition = homogeneous_decompose(phi);
      json       comps         = json::array();
      Polynomial sum(d);
      bool       homogeneous = true;
      for (auto const& [n, part] : decomposition) {
        comps.push_back({{"degree", n}, {"component", part.format()}});
        for (auto const& [a, c] : part.terms()) {
          homogeneous = homogeneous && a.degree() == n;
        }
        sum = sum + part;
      }
      ctx.tables["components"] = std::move(comps);
      ctx.checks.add("homogeneous_decomposition", homogeneous && sum == phi);

      if (ctx.cfg.F.is_array()) {
        std::vector<int> F;
        for (auto const& x : ctx.cfg.F) {
          if (!x.is_number_integer() || x.get<long long>() < 0) {
            throw ParseError("funcalg \"F\" must list nonnegative degrees");
          }
          F.push_back(x.get<int>());
        }
        auto const nc                     = n_coaction(phi, F);
        ctx.tables["quotient_dimension"] = *nc.quotient_dimension;
      }

      int const  Dc    = std::min(D, 8);
      int const  order = ctx.cfg.zeta_order;
      double     worst = 0.0;
      auto const M     = mult_operator(k, phi, Dc);
      for (int j = 0; j < order; ++j) {
        Scalar const zeta = std::polar(1.0, 2 * std::numbers::pi * j / order);
        auto const   g_in = circle_operator(d, zeta, Dc);
        auto const   g_out = circle_operator(d, zeta, Dc + phi.degree());
        auto const   lhs   = compose(g_out.adjoint(), compose(M, g_in));
        auto const   rhs   = mult_operator(k, circle_action(phi, std::conj(zeta)), Dc);
        worst = std::max(worst, lhs.max_abs_diff(fit_codomain(rhs, lhs.codomain())));
      }
      ctx.checks.add("circle_covariance", worst <= 1e-12,
                     json{{"max_abs_diff", worst}, {"D", Dc}, {"roots", order}});

      json norms = json::array();
      GradedFockBasis const basis(k, std::min(D, 3));
      for (std::size_t i = 0; i < basis.index()->size_through(basis.max_degree()); ++i) {
        norms.push_back({{"monomial", basis.index()->label(i)}, {"norm", basis.norm(i)}});
      }
      ctx.tables["monomial_norms"] = std::move(norms);

      if (d == 1 && k.kind() == KernelKind::hardy) {
        // On H^2(𝔻) the multiplier norm is the sup of |φ| on the circle.
        constexpr int grid = 1 << 14;
        double        sup  = 0.0;
        for (int j = 0; j < grid; ++j) {
          Scalar const z = std::polar(1.0, 2 * std::numbers::pi * j / grid);
          sup            = std::max(sup, std::abs(phi.evaluate({z})));
        }
        ctx.tables["sup_norm_grid"] = sup;
        ctx.checks.add("norm_below_sup", norm <= sup + 1e-6 * std::max(1.0, sup),
                       json{{"norm", norm}, {"sup", sup}});
      }
      if (ctx.cfg.expect_norm) {
        double const e = *ctx.cfg.expect_norm;
        ctx.checks.add("expected_norm", std::abs(norm - e) <= ctx.cfg.expect_tol,
                       json{{"norm", norm}, {"expected", e}, {"tolerance", ctx.cfg.expect_tol}});
      }
      (void) scalar_json;
    }

    json error_report(json config, std::string const& what) {
      json report       = json::object();
      report["config"]  = std::move(config);
      json checks       = json::array();
      checks.push_back({{"name", "execution"}, {"status", "fail"}, {"witness", what}});
      report["checks"] = std::move(checks);
      report["tables"] = json::object();
      report["ms"]     = 0.0;
      return report;
    }

  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Public helpers
  ////////////////////////////////////////////////////////////////////////

  Presentation resolve_presentation(json const& spec) {
    if (spec.is_string()) {
      auto const s = spec.get<std::string>();
      if (s.find('(') != std::string::npos) {
        return builtin_presentation(s);
      }
      return parse_presentation(read_file(s));
    }
    if (!spec.is_object()) {
      throw ParseError("\"presentation\" must be a builtin name, a path or an object");
    }
    if (spec.contains("file")) {
      return parse_presentation(read_file(spec.at("file").get<std::string>()));
    }
    if (spec.contains("builtin")) {
      auto const name = spec.at("builtin").get<std::string>();
      if (name == "raag") {
        auto const vertices = spec.at("vertices").get<std::vector<std::string>>();
        std::vector<std::pair<std::string, std::string>> edges;
        for (auto const& e : spec.value("edges", json::array())) {
          auto const pair = e.get<std::vector<std::string>>();
          if (pair.size() != 2) {
            throw ParseError("raag edges must be pairs of vertex names");
          }
          edges.emplace_back(pair[0], pair[1]);
        }
        return builtin::raag(vertices, edges);
      }
      if (!spec.contains("n")) {
        return builtin_presentation(name);
      }
      return builtin_presentation(name + "(" + std::to_string(read_int(spec, "n", 0)) + ")");
    }
    return parse_presentation(spec.dump());
  }

  Element resolve_element(EnumerationTable const& table, json const& spec) {
    return table.element(spec_word(table.presentation(), spec));
  }

  void round_floats(json& j) {
    if (j.is_number_float()) {
      double const v = j.get<double>();
      if (std::isfinite(v)) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        j = std::strtod(buf, nullptr);
      }
    } else if (j.is_structured()) {
      for (auto& x : j) {
        round_floats(x);
      }
    }
  }

  RunConfig parse_config(std::string_view text) {
    json doc;
    try {
      doc = json::parse(text);
    } catch (nlohmann::json::parse_error const& e) {
      throw ParseError(std::string("malformed config: ") + e.what());
    }
    if (!doc.is_object()) {
      throw ParseError("config must be an object");
    }
    for (auto const& [key, value] : doc.items()) {
      if (!known_keys().count(key)) {
        throw ParseError("unknown config key \"" + key + "\"");
      }
    }
    RunConfig cfg;
    cfg.raw = doc;
    try {
      if (!doc.contains("command") || !doc["command"].is_string()) {
        throw ParseError("config needs a \"command\"");
      }
      cfg.command = doc["command"].get<std::string>();
      static std::set<std::string> const commands{"enumerate", "divisors", "fdapprox",
                                                  "coaction", "funcalg"};
      if (!commands.count(cfg.command)) {
        throw ParseError("unknown command \"" + cfg.command + "\"");
      }
      for (auto [key, slot] : {std::pair{"L", &cfg.L}, std::pair{"L_P", &cfg.L_P},
                               std::pair{"L_Q", &cfg.L_Q}, std::pair{"D", &cfg.D}}) {
        if (doc.contains(key)) {
          *slot = read_int(doc, key, 1);
        }
      }
      if (doc.contains("d")) {
        cfg.variables = read_int(doc, "d", 1);
      }
      cfg.presentation = doc.value("presentation", json());
      cfg.F            = doc.value("F", json());
      cfg.families     = doc.value("families", json());
      cfg.elements     = doc.value("elements", json());
      cfg.lcm          = doc.value("lcm", json());
      cfg.map          = doc.value("map", json());
      cfg.kernel       = doc.value("kernel", json());
      cfg.phi          = doc.value("phi", json());
      if (doc.contains("D_profile")) {
        for (auto const& x : spec_list(doc["D_profile"], "D_profile")) {
          if (!x.is_number_integer() || x.get<long long>() < 1) {
            throw ParseError("\"D_profile\" must list positive integers");
          }
          cfg.D_profile.push_back(x.get<int>());
        }
      }
      if (doc.contains("zeta_order")) {
        cfg.zeta_order = read_int(doc, "zeta_order", 1);
      }
      if (doc.contains("norm_tol")) {
        cfg.norm_tol = read_double(doc, "norm_tol");
        if (!(*cfg.norm_tol > 0)) {
          throw ParseError("\"norm_tol\" must be positive");
        }
      }
      if (doc.contains("expect_norm")) {
        cfg.expect_norm = read_double(doc, "expect_norm");
      }
      if (doc.contains("expect_tol")) {
        cfg.expect_tol = read_double(doc, "expect_tol");
      }
      if (doc.contains("samples")) {
        cfg.samples = read_int(doc, "samples", 0);
      }
      if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) {
          throw ParseError("\"seed\" must be a nonnegative integer");
        }
        cfg.seed = doc["seed"].get<std::uint64_t>();
      }
      if (doc.contains("out")) {
        cfg.out = doc["out"].get<std::string>();
      }
    } catch (nlohmann::json::exception const& e) {
      throw ParseError(std::string("bad config field: ") + e.what());
    }

    auto require = [&](char const* key) {
      if (!doc.contains(key)) {
        throw ParseError("command " + cfg.command + " needs \"" + key + "\"");
      }
    };
    if (cfg.command != "funcalg") {
      require("presentation");
    }
    if (cfg.command == "enumerate") {
      require("L");
    } else if (cfg.command == "fdapprox") {
      require("F");
      spec_list(cfg.F, "F");
      if (cfg.F.empty()) {
        throw ParseError("\"F\" must be nonempty");
      }
    } else if (cfg.command == "funcalg") {
      require("kernel");
      require("phi");
    }
    if (cfg.command == "coaction" && !cfg.F.is_null()) {
      spec_list(cfg.F, "F");
    }
    if (!cfg.elements.is_null()) {
      spec_list(cfg.elements, "elements");
    }
    if (!cfg.lcm.is_null()) {
      spec_list(cfg.lcm, "lcm");
    }
    if (auto const& p = cfg.presentation; p.is_object() && p.contains("file")) {
      if (!p["file"].is_string() || !std::filesystem::exists(p["file"].get<std::string>())) {
        throw ParseError("presentation file does not exist");
      }
    }
    return cfg;
  }

  RunResult execute(RunConfig const& config, RunOptions const& opts) {
    auto const start = std::chrono::steady_clock::now();
    Context    ctx{config, opts, NormOptions{}, Checks{}};
    ctx.norm.rel_tol = config.norm_tol.value_or(opts.norm_tol);

    json       report;
    ExitStatus status = ExitStatus::ok;
    try {
      try {
        if (config.command == "enumerate") {
          run_enumerate(ctx);
        } else if (config.command == "divisors") {
          run_divisors(ctx);
        } else if (config.command == "fdapprox") {
          run_fdapprox(ctx);
        } else if (config.command == "coaction") {
          run_coaction(ctx);
        } else if (config.command == "funcalg") {
          run_funcalg(ctx);
        } else {
          throw ParseError("unknown command \"" + config.command + "\"");
        }
      } catch (nlohmann::json::exception const& e) {
        throw ParseError(std::string("bad config field: ") + e.what());
      }
      report           = json::object();
      report["config"] = config.raw;
      report["checks"] = ctx.checks.list();
      report["tables"] = std::move(ctx.tables);
      report["ms"]     = 0.0;
      status = ctx.checks.all_pass() ? ExitStatus::ok : ExitStatus::invariant_failure;
    } catch (ResourceLimit const& e) {
      report = error_report(config.raw, e.what());
      status = ExitStatus::resource_limit;
    } catch (ParseError const& e) {
      report = error_report(config.raw, e.what());
      status = ExitStatus::config_error;
    } catch (InvalidArgument const& e) {
      report = error_report(config.raw, e.what());
      status = ExitStatus::config_error;
    } catch (DepthError const& e) {
      report = error_report(config.raw, e.what());
      status = ExitStatus::config_error;
    } catch (std::exception const& e) {
      report = error_report(config.raw, e.what());
      status = ExitStatus::invariant_failure;
    }
    if (opts.timing) {
      report["ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now()
                                                               - start)
                         .count();
    }
    round_floats(report);
    return {status, report.dump(2) + "\n"};
  }

  RunResult execute(std::string_view config_text, RunOptions const& opts) {
    RunConfig cfg;
    try {
      cfg = parse_config(config_text);
    } catch (ParseError const& e) {
      json echo = json::parse(config_text, nullptr, false);
      if (echo.is_discarded()) {
        echo = std::string(config_text);
      }
      json report = error_report(std::move(echo), e.what());
      round_floats(report);
      return {ExitStatus::config_error, report.dump(2) + "\n"};
    }
    return execute(cfg, opts);
  }

}  // namespace semirfd
