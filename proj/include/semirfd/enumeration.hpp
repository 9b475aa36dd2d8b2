#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "semirfd/graded_index.hpp"
#include "semirfd/presentation.hpp"

namespace semirfd {

  //! Handle to an element of an EnumerationTable.
  //!
  //! Ids follow the global (length, shortlex) order, so the elements of
  //! length <= L are exactly the ids below size_through(L) and an id doubles
  //! as the basis index of e_p in every graded truncation of l^2(P).
  struct Element {
    std::uint32_t id = 0;

    friend auto operator<=>(Element, Element) = default;
  };

  inline constexpr std::size_t default_max_words = 1'000'000;

  struct CancellationReport {
    bool        ok = true;
    std::string witness;  // empty when ok
  };

  class EnumerationTable;
  using TablePtr = std::shared_ptr<EnumerationTable const>;

  //! Every element of a homogeneous monoid up to a length bound, with exact
  //! multiplication and divisor queries. Immutable once built.
  class EnumerationTable final : public GradedIndex {
   public:
    //! Use enumerate() instead.
    EnumerationTable(Presentation pres, int bound, std::size_t max_words);

    Presentation const& presentation() const noexcept {
      return _pres;
    }
    int bound() const noexcept {
      return _bound;
    }
    std::size_t size() const noexcept {
      return _length.size();
    }
    //! Element counts for lengths 0..bound.
    std::vector<std::size_t> counts() const;
    std::size_t count_at(int length) const;

    Element identity() const noexcept {
      return Element{0};
    }
    int length(Element x) const {
      return _length.at(x.id);
    }
    //! Shortlex-minimal representative (generator order = declaration order).
    Word word(Element x) const;
    //! Every word in the congruence class of x.
    std::vector<Word> representatives(Element x) const;
    std::string format(Element x) const {
      return _pres.format_word(word(x));
    }

    //! Class of `w`; throws DepthError if |w| exceeds the bound.
    Element element(Word const& w) const;
    Element element(std::string_view text) const {
      return element(_pres.parse_word(text));
    }
    Element generator(std::size_t i) const;
    std::vector<Element> elements_of_length(int length) const;
    std::vector<Element> elements_through(int length) const;

    //! Canonical element of xy; throws DepthError when |x|+|y| > bound.
    Element multiply(Element x, Element y) const;
    //! q with p·q = r, if r ∈ pP (unique by left cancellation).
    std::optional<Element> left_quotient(Element p, Element r) const;
    //! q with q·p = r, if r ∈ Pp.
    std::optional<Element> right_quotient(Element p, Element r) const;

    //! R_p = {r : p = qr for some q}, sorted by id.
    std::vector<Element> right_divisors(Element p) const;
    //! L_p = {q : p = qr for some r}, sorted by id.
    std::vector<Element> left_divisors(Element p) const;

    //! Left and right cancellation on every product inside the table.
    CancellationReport const& cancellation() const noexcept {
      return _cancellation;
    }
    //! Throws InvariantFailure if the table is not cancellative.
    void require_cancellative() const;

    // GradedIndex
    std::size_t size_through(int level) const override;
    int         max_level() const noexcept override {
      return _bound;
    }
    int level_of(std::size_t index) const override {
      return _length.at(index);
    }
    std::string label(std::size_t index) const override {
      return format(Element{static_cast<std::uint32_t>(index)});
    }

   private:
    std::uint64_t code_of(Word const& w) const;
    Word          decode(std::uint64_t code, int length) const;
    void          check_cancellation();

    Presentation                            _pres;
    int                                     _bound;
    std::uint64_t                           _rank;  // number of generators
    std::vector<std::uint64_t>              _power;  // _rank^n
    std::vector<std::size_t>                _offset;  // first id of each length, plus sentinel
    std::vector<std::vector<std::uint32_t>> _class_of;  // per length: word code -> id
    std::vector<std::uint64_t>              _canonical;  // per id: canonical word code
    std::vector<int>                        _length;  // per id
    std::vector<std::size_t>                _member_offset;  // per id, into _members
    std::vector<std::uint64_t>              _members;  // word codes grouped by id
    CancellationReport                      _cancellation;
  };

  //! Congruence classes of all words of length <= bound, by closure under
  //! the relations applied at every position. Throws ResourceLimit when the
  //! total number of words would exceed `max_words`.
  TablePtr enumerate(Presentation const& pres,
                     int                 bound,
                     std::size_t         max_words = default_max_words);

  enum class LcmVerdict { lcm, empty_intersection, no_unique_minimum };

  struct LcmReport {
    LcmVerdict             verdict;
    std::optional<Element> lcm;
    //! pP ∩ qP restricted to the table, sorted by id.
    std::vector<Element> common_multiples;
  };

  //! Least common right multiple of p and q at the scale of the table.
  //! Throws DepthError if the bound cannot contain p and q.
  LcmReport right_lcm_check(EnumerationTable const& table, Element p, Element q);

}  // namespace semirfd

template <>
struct std::hash<semirfd::Element> {
  std::size_t operator()(semirfd::Element x) const noexcept {
    return std::hash<std::uint32_t>()(x.id);
  }
};
