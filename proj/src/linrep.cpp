#include "semirfd/linrep.hpp"

#include "semirfd/error.hpp"

namespace semirfd {

  Space graded_space(TablePtr const& table, int level) {
    if (level < 0) {
      throw InvalidArgument("truncation level must be nonnegative");
    }
    if (level > table->bound()) {
      throw DepthError("truncation level " + std::to_string(level) + " exceeds table bound "
                       + std::to_string(table->bound()));
    }
    return Space(table, level);
  }

  SparseOperator lambda(TablePtr const& table, Element p, int level) {
    table->require_cancellative();
    int const lp = table->length(p);
    if (level + lp > table->bound()) {
      throw DepthError("lambda: level " + std::to_string(level) + " + |p| = "
                       + std::to_string(level + lp) + " exceeds table bound "
                       + std::to_string(table->bound()));
    }
    Space const        dom = graded_space(table, level);
    Space const        cod = graded_space(table, level + lp);
    std::vector<Entry> entries;
    entries.reserve(dom.dim());
    for (std::size_t q = 0; q < dom.dim(); ++q) {
      Element const pq = table->multiply(p, Element{static_cast<std::uint32_t>(q)});
      entries.push_back({pq.id, q, 1.0});
    }
    return SparseOperator(dom, cod, std::move(entries));
  }

  SparseOperator lambda_adjoint(TablePtr const& table, Element p, int level) {
    table->require_cancellative();
    Space const        space = graded_space(table, level);
    std::vector<Entry> entries;
    for (std::size_t r = table->size_through(table->length(p) - 1); r < space.dim(); ++r) {
      if (auto q = table->left_quotient(p, Element{static_cast<std::uint32_t>(r)})) {
        entries.push_back({q->id, r, 1.0});
      }
    }
    return SparseOperator(space, space, std::move(entries));
  }

}  // namespace semirfd
