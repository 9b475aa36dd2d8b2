#include "semirfd/presentation.hpp"

#include <charconv>
#include <set>

#include "json.hpp"
#include "semirfd/error.hpp"

namespace semirfd {

  char const* to_string(PresentationKind kind) noexcept {
    switch (kind) {
      case PresentationKind::free:
        return "free";
      case PresentationKind::commutative:
        return "commutative";
      case PresentationKind::raag:
        return "raag";
      case PresentationKind::braid:
        return "braid";
      case PresentationKind::custom:
        return "custom";
    }
    return "custom";
  }

  Presentation::Presentation(std::vector<std::string> generators,
                             std::vector<Relation>    relations,
                             PresentationKind         kind,
                             std::string              label)
      : _generators(std::move(generators)),
        _relations(std::move(relations)),
        _kind(kind),
        _label(std::move(label)) {
    std::set<std::string> seen;
    for (auto const& g : _generators) {
      if (g.empty()) {
        throw ParseError("generator names must be nonempty");
      }
      if (g.find('.') != std::string::npos) {
        throw ParseError("generator name \"" + g + "\" contains '.'");
      }
      if (!seen.insert(g).second) {
        throw ParseError("duplicate generator \"" + g + "\"");
      }
    }
    for (auto const& r : _relations) {
      for (Word const* w : {&r.lhs, &r.rhs}) {
        for (Letter x : *w) {
          if (x >= _generators.size()) {
            throw ParseError("relation uses a letter outside the generator range");
          }
        }
      }
      if (r.lhs.size() != r.rhs.size()) {
        throw ParseError("non-homogeneous relation [" + format_word(r.lhs) + ", "
                         + format_word(r.rhs) + "] (lengths "
                         + std::to_string(r.lhs.size()) + " vs "
                         + std::to_string(r.rhs.size()) + ")");
      }
    }
  }

  Letter Presentation::generator(std::string_view name) const {
    for (std::size_t i = 0; i < _generators.size(); ++i) {
      if (_generators[i] == name) {
        return static_cast<Letter>(i);
      }
    }
    throw ParseError("unknown generator " + std::string(name));
  }

  Word Presentation::parse_word(std::string_view text) const {
    Word result;
    if (text.empty()) {
      return result;
    }
    if (text.find('.') == std::string_view::npos) {
      for (std::size_t i = 0; i < _generators.size(); ++i) {
        if (_generators[i] == text) {
          return {static_cast<Letter>(i)};
        }
      }
      if (text == "e") {
        return result;
      }
      bool single_chars = true;
      for (auto const& g : _generators) {
        single_chars = single_chars && g.size() == 1;
      }
      if (single_chars) {
        for (char c : text) {
          result.push_back(generator(std::string_view(&c, 1)));
        }
        return result;
      }
      throw ParseError("unknown generator " + std::string(text));
    }
    std::size_t start = 0;
    while (true) {
      auto stop = text.find('.', start);
      auto tok  = text.substr(start, stop == std::string_view::npos ? text.npos : stop - start);
      if (tok.empty()) {
        throw ParseError("empty letter in word \"" + std::string(text) + "\"");
      }
      result.push_back(generator(tok));
      if (stop == std::string_view::npos) {
        break;
      }
      start = stop + 1;
    }
    return result;
  }

  std::string Presentation::format_word(Word const& w) const {
    if (w.empty()) {
      return "e";
    }
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i != 0) {
        out += '.';
      }
      out += w[i] < _generators.size() ? _generators[w[i]] : "?";
    }
    return out;
  }

  Presentation parse_presentation(std::string_view text) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (nlohmann::json::parse_error const& e) {
      throw ParseError(std::string("malformed presentation document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("generators") || !doc["generators"].is_array()) {
      throw ParseError("presentation document needs a \"generators\" list");
    }
    std::vector<std::string> gens;
    for (auto const& g : doc["generators"]) {
      if (!g.is_string()) {
        throw ParseError("generator names must be strings");
      }
      gens.push_back(g.get<std::string>());
    }
    // Validate names before parsing relations against them.
    Presentation bare(gens, {});
    std::vector<Relation> rels;
    if (doc.contains("relations")) {
      if (!doc["relations"].is_array()) {
        throw ParseError("\"relations\" must be a list");
      }
      for (auto const& r : doc["relations"]) {
        if (!r.is_array() || r.size() != 2 || !r[0].is_string() || !r[1].is_string()) {
          throw ParseError("each relation must be a two-element list of strings");
        }
        rels.push_back({bare.parse_word(r[0].get<std::string>()),
                        bare.parse_word(r[1].get<std::string>())});
      }
    }
    return Presentation(std::move(gens), std::move(rels));
  }

  std::string to_document(Presentation const& p) {
    nlohmann::ordered_json doc;
    doc["generators"] = p.generators();
    auto rels         = nlohmann::ordered_json::array();
    for (auto const& r : p.relations()) {
      rels.push_back({p.format_word(r.lhs), p.format_word(r.rhs)});
    }
    doc["relations"] = rels;
    return doc.dump();
  }

  namespace builtin {
    Presentation free(int n) {
      if (n <= 0) {
        throw InvalidArgument("free(n) needs n > 0");
      }
      std::vector<std::string> gens;
      for (int i = 0; i < n; ++i) {
        gens.push_back(n <= 26 ? std::string(1, static_cast<char>('a' + i))
                               : "g" + std::to_string(i + 1));
      }
      return Presentation(gens, {}, PresentationKind::free, "free(" + std::to_string(n) + ")");
    }

    Presentation nat(int d) {
      if (d <= 0) {
        throw InvalidArgument("nat(d) needs d > 0");
      }
      std::vector<std::string> gens;
      for (int i = 0; i < d; ++i) {
        gens.push_back(d <= 3 ? std::string(1, "xyz"[i]) : "x" + std::to_string(i + 1));
      }
      std::vector<Relation> rels;
      for (Letter i = 0; i < static_cast<Letter>(d); ++i) {
        for (Letter j = i + 1; j < static_cast<Letter>(d); ++j) {
          rels.push_back({{i, j}, {j, i}});
        }
      }
      return Presentation(gens, rels, PresentationKind::commutative,
                          "nat(" + std::to_string(d) + ")");
    }

    Presentation raag(std::vector<std::string> const&                        vertices,
                      std::vector<std::pair<std::string, std::string>> const& edges) {
      if (vertices.empty()) {
        throw InvalidArgument("raag needs at least one vertex");
      }
      Presentation          bare(vertices, {});
      std::vector<Relation> rels;
      std::set<std::pair<Letter, Letter>> seen;
      for (auto const& [v, w] : edges) {
        Letter i = bare.generator(v);
        Letter j = bare.generator(w);
        if (i == j) {
          throw InvalidArgument("raag graph has a self-loop at " + v);
        }
        if (!seen.insert({std::min(i, j), std::max(i, j)}).second) {
          continue;
        }
        rels.push_back({{i, j}, {j, i}});
      }
      return Presentation(vertices, rels, PresentationKind::raag, "raag");
    }

    Presentation braid(int n) {
      if (n < 2) {
        throw InvalidArgument("braid(n) needs n >= 2");
      }
      std::vector<std::string> gens;
      for (int i = 1; i < n; ++i) {
        gens.push_back("s" + std::to_string(i));
      }
      std::vector<Relation> rels;
      auto const            m = static_cast<Letter>(n - 1);
      for (Letter i = 0; i + 1 < m; ++i) {
        rels.push_back({{i, i + 1, i}, {i + 1, i, i + 1}});
      }
      for (Letter i = 0; i < m; ++i) {
        for (Letter j = i + 2; j < m; ++j) {
          rels.push_back({{i, j}, {j, i}});
        }
      }
      return Presentation(gens, rels, PresentationKind::braid, "braid(" + std::to_string(n) + ")");
    }
  }  // namespace builtin

  Presentation builtin_presentation(std::string_view spec) {
    auto open  = spec.find('(');
    auto close = spec.rfind(')');
    if (open == std::string_view::npos || close != spec.size() - 1 || close <= open + 1) {
      throw ParseError("expected builtin of the form name(n), got \"" + std::string(spec) + "\"");
    }
    auto name = spec.substr(0, open);
    auto arg  = spec.substr(open + 1, close - open - 1);
    int  n    = 0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
    if (ec != std::errc() || ptr != arg.data() + arg.size()) {
      throw ParseError("bad integer parameter in \"" + std::string(spec) + "\"");
    }
    if (name == "free") {
      return builtin::free(n);
    } else if (name == "nat") {
      return builtin::nat(n);
    } else if (name == "braid") {
      return builtin::braid(n);
    }
    throw ParseError("unknown builtin \"" + std::string(name) + "\"");
  }

}  // namespace semirfd
