#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace semirfd {

  // A word is a sequence of generator indices (declaration order).
  using Letter = std::uint32_t;
  using Word   = std::vector<Letter>;

  struct Relation {
    Word lhs;
    Word rhs;
  };

  enum class PresentationKind { free, commutative, raag, braid, custom };

  char const* to_string(PresentationKind kind) noexcept;

  //! A finitely presented homogeneous monoid.
  //!
  //! Every relation has two sides of equal length, so the monoid is graded
  //! by word length and the word problem at a fixed length is a finite
  //! closure computation. Construction rejects anything else.
  class Presentation {
   public:
    Presentation(std::vector<std::string> generators,
                 std::vector<Relation>    relations,
                 PresentationKind         kind  = PresentationKind::custom,
                 std::string              label = {});

    std::size_t number_of_generators() const noexcept {
      return _generators.size();
    }
    std::vector<std::string> const& generators() const noexcept {
      return _generators;
    }
    std::vector<Relation> const& relations() const noexcept {
      return _relations;
    }
    PresentationKind kind() const noexcept {
      return _kind;
    }
    //! Short description such as "braid(3)"; empty for parsed documents.
    std::string const& label() const noexcept {
      return _label;
    }

    //! Index of the generator called `name`; throws ParseError if unknown.
    Letter generator(std::string_view name) const;

    //! Parses "a.b.a". The empty string, and "e" when no generator is
    //! called "e", denote the empty word. If every generator name is a
    //! single character the dots may be omitted ("aba").
    Word parse_word(std::string_view text) const;

    //! Inverse of parse_word; the empty word prints as "e".
    std::string format_word(Word const& w) const;

   private:
    std::vector<std::string> _generators;
    std::vector<Relation>    _relations;
    PresentationKind         _kind;
    std::string              _label;
  };

  //! Reads a presentation document:
  //! {"generators":["a","b"],"relations":[["a.b.a","b.a.b"]]}
  Presentation parse_presentation(std::string_view text);

  //! Serializes to the document format accepted by parse_presentation.
  std::string to_document(Presentation const& p);

  namespace builtin {
    //! Free monoid on n generators a, b, c, ... (g1, g2, ... past 26).
    Presentation free(int n);
    //! ℕ^d: generators x, y, z (x1, ..., xd when d > 3), all commuting.
    Presentation nat(int d);
    //! Right-angled Artin monoid: a commutation relation per edge.
    Presentation raag(std::vector<std::string> const&                        vertices,
                      std::vector<std::pair<std::string, std::string>> const& edges);
    //! Positive braid monoid B_n^+ on s1, ..., s_{n-1}.
    Presentation braid(int n);
  }  // namespace builtin

  //! Parses "free(2)", "nat(1)", "braid(3)".
  Presentation builtin_presentation(std::string_view spec);

}  // namespace semirfd
