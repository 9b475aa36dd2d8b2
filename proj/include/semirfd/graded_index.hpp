#pragma once

#include <cstddef>
#include <string>

namespace semirfd {

  //! A countable basis graded by a nonnegative level, ordered so that the
  //! elements of level <= L form a prefix of the ordering for every L.
  //!
  //! Monoid tables (graded by word length) and monomial bases (graded by
  //! total degree) both implement this; graded truncations and their
  //! tensor products are built on top of it.
  class GradedIndex {
   public:
    virtual ~GradedIndex() = default;

    //! Number of basis elements of level <= `level`.
    virtual std::size_t size_through(int level) const = 0;
    //! Largest level for which size_through is available.
    virtual int max_level() const noexcept = 0;
    //! Level of the basis element at position `index`.
    virtual int level_of(std::size_t index) const = 0;
    virtual std::string label(std::size_t index) const = 0;
    //! Whether two indices enumerate the same basis in the same order.
    virtual bool same_basis(GradedIndex const& other) const noexcept {
      return this == &other;
    }
  };

}  // namespace semirfd
