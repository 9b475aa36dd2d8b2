#include "semirfd/enumeration.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "semirfd/error.hpp"

namespace semirfd {

  namespace {
    // Union-find over the words of one fixed length.
    class DisjointSets {
     public:
      explicit DisjointSets(std::size_t n) : _parent(n) {
        std::iota(_parent.begin(), _parent.end(), std::uint64_t(0));
      }
      std::uint64_t find(std::uint64_t x) {
        while (_parent[x] != x) {
          _parent[x] = _parent[_parent[x]];
          x          = _parent[x];
        }
        return x;
      }
      // The smaller code becomes the root, so roots are shortlex minima.
      void unite(std::uint64_t a, std::uint64_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
          return;
        }
        if (b < a) {
          std::swap(a, b);
        }
        _parent[b] = a;
      }

     private:
      std::vector<std::uint64_t> _parent;
    };
  }  // namespace

  EnumerationTable::EnumerationTable(Presentation pres, int bound, std::size_t max_words)
      : _pres(std::move(pres)), _bound(bound), _rank(_pres.number_of_generators()) {
    if (bound < 0) {
      throw InvalidArgument("length bound must be nonnegative");
    }
    // Word counts per length, with the cap checked before anything is allocated.
    _power.assign(1, 1);
    std::size_t total = 1;
    for (int n = 1; n <= bound; ++n) {
      if (_rank != 0 && _power.back() > max_words / _rank) {
        throw ResourceLimit("enumeration to length " + std::to_string(bound)
                            + " exceeds the word cap of " + std::to_string(max_words));
      }
      _power.push_back(_power.back() * _rank);
      total += _power.back();
      if (total > max_words) {
        throw ResourceLimit("enumeration to length " + std::to_string(bound) + " needs "
                            + std::to_string(total) + " words, cap is "
                            + std::to_string(max_words));
      }
    }

    _class_of.resize(bound + 1);
    _offset.push_back(0);
    std::vector<std::vector<std::uint64_t>> member_lists;
    for (int n = 0; n <= bound; ++n) {
      std::uint64_t const words = _power[n];
      DisjointSets        sets(words);
      for (auto const& rel : _pres.relations()) {
        auto const m = static_cast<int>(rel.lhs.size());
        if (m == 0 || m > n) {
          continue;
        }
        std::uint64_t const lhs = code_of(rel.lhs);
        std::uint64_t const rhs = code_of(rel.rhs);
        // Rewrite lhs -> rhs at every position i; the reverse direction is
        // the same edge seen from the other end.
        if (lhs == rhs) {
          continue;
        }
        for (int i = 0; i + m <= n; ++i) {
          std::uint64_t const low  = _power[n - i - m];
          std::uint64_t const high = _power[i];
          for (std::uint64_t prefix = 0; prefix < high; ++prefix) {
            std::uint64_t const base = (prefix * _power[m] + lhs) * low;
            for (std::uint64_t suffix = 0; suffix < low; ++suffix) {
              std::uint64_t const w = base + suffix;
              sets.unite(w, w - lhs * low + rhs * low);
            }
          }
        }
      }
      // Roots are class minima; number them in increasing code order.
      auto& class_of = _class_of[n];
      class_of.assign(words, 0);
      std::vector<std::uint32_t> id_of_root(words, UINT32_MAX);
      for (std::uint64_t w = 0; w < words; ++w) {
        std::uint64_t const r = sets.find(w);
        if (r == w) {
          id_of_root[w] = static_cast<std::uint32_t>(_canonical.size());
          _canonical.push_back(w);
          _length.push_back(n);
          member_lists.emplace_back();
        }
        class_of[w] = id_of_root[r];
        member_lists[class_of[w]].push_back(w);
      }
      _offset.push_back(_canonical.size());
    }
    _member_offset.push_back(0);
    for (auto& list : member_lists) {
      _members.insert(_members.end(), list.begin(), list.end());
      _member_offset.push_back(_members.size());
    }
    check_cancellation();
  }

  std::uint64_t EnumerationTable::code_of(Word const& w) const {
    std::uint64_t code = 0;
    for (Letter x : w) {
      code = code * _rank + x;
    }
    return code;
  }

  Word EnumerationTable::decode(std::uint64_t code, int length) const {
    Word w(length);
    for (int i = length - 1; i >= 0; --i) {
      w[i] = static_cast<Letter>(code % _rank);
      code /= _rank;
    }
    return w;
  }

  std::vector<std::size_t> EnumerationTable::counts() const {
    std::vector<std::size_t> out;
    for (int n = 0; n <= _bound; ++n) {
      out.push_back(_offset[n + 1] - _offset[n]);
    }
    return out;
  }

  std::size_t EnumerationTable::count_at(int length) const {
    if (length < 0 || length > _bound) {
      throw DepthError("length " + std::to_string(length) + " outside table bound "
                       + std::to_string(_bound));
    }
    return _offset[length + 1] - _offset[length];
  }

  std::size_t EnumerationTable::size_through(int level) const {
    if (level < 0) {
      return 0;
    }
    if (level > _bound) {
      throw DepthError("level " + std::to_string(level) + " exceeds table bound "
                       + std::to_string(_bound));
    }
    return _offset[level + 1];
  }

  Word EnumerationTable::word(Element x) const {
    return decode(_canonical.at(x.id), _length.at(x.id));
  }

  std::vector<Word> EnumerationTable::representatives(Element x) const {
    std::vector<Word> out;
    for (std::size_t i = _member_offset.at(x.id); i < _member_offset.at(x.id + 1); ++i) {
      out.push_back(decode(_members[i], _length[x.id]));
    }
    return out;
  }

  Element EnumerationTable::element(Word const& w) const {
    auto const n = static_cast<int>(w.size());
    if (n > _bound) {
      throw DepthError("word of length " + std::to_string(n) + " exceeds table bound "
                       + std::to_string(_bound));
    }
    for (Letter x : w) {
      if (x >= _rank) {
        throw InvalidArgument("letter outside the generator range");
      }
    }
    return Element{_class_of[n][code_of(w)]};
  }

  Element EnumerationTable::generator(std::size_t i) const {
    if (i >= _rank) {
      throw InvalidArgument("no generator with index " + std::to_string(i));
    }
    return element(Word{static_cast<Letter>(i)});
  }

  std::vector<Element> EnumerationTable::elements_of_length(int length) const {
    std::vector<Element> out;
    if (length < 0 || length > _bound) {
      return out;
    }
    for (std::size_t i = _offset[length]; i < _offset[length + 1]; ++i) {
      out.push_back(Element{static_cast<std::uint32_t>(i)});
    }
    return out;
  }

  std::vector<Element> EnumerationTable::elements_through(int length) const {
    std::vector<Element> out;
    std::size_t const    n = size_through(std::min(length, _bound));
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(Element{static_cast<std::uint32_t>(i)});
    }
    return out;
  }

  Element EnumerationTable::multiply(Element x, Element y) const {
    int const lx = length(x);
    int const ly = length(y);
    if (lx + ly > _bound) {
      throw DepthError("product of lengths " + std::to_string(lx) + " and "
                       + std::to_string(ly) + " exceeds table bound " + std::to_string(_bound));
    }
    return Element{_class_of[lx + ly][_canonical[x.id] * _power[ly] + _canonical[y.id]]};
  }

  std::optional<Element> EnumerationTable::left_quotient(Element p, Element r) const {
    int const lp = length(p);
    int const lr = length(r);
    if (lp > lr) {
      return std::nullopt;
    }
    std::uint64_t const split = _power[lr - lp];
    for (std::size_t i = _member_offset[r.id]; i < _member_offset[r.id + 1]; ++i) {
      std::uint64_t const w = _members[i];
      if (_class_of[lp][w / split] == p.id) {
        return Element{_class_of[lr - lp][w % split]};
      }
    }
    return std::nullopt;
  }

  std::optional<Element> EnumerationTable::right_quotient(Element p, Element r) const {
    int const lp = length(p);
    int const lr = length(r);
    if (lp > lr) {
      return std::nullopt;
    }
    std::uint64_t const split = _power[lp];
    for (std::size_t i = _member_offset[r.id]; i < _member_offset[r.id + 1]; ++i) {
      std::uint64_t const w = _members[i];
      if (_class_of[lp][w % split] == p.id) {
        return Element{_class_of[lr - lp][w / split]};
      }
    }
    return std::nullopt;
  }

  std::vector<Element> EnumerationTable::right_divisors(Element p) const {
    int const               lp = length(p);
    std::set<std::uint32_t> found;
    for (std::size_t i = _member_offset[p.id]; i < _member_offset[p.id + 1]; ++i) {
      std::uint64_t const w = _members[i];
      for (int k = 0; k <= lp; ++k) {
        found.insert(_class_of[k][w % _power[k]]);
      }
    }
    std::vector<Element> out;
    for (auto id : found) {
      out.push_back(Element{id});
    }
    return out;
  }

  std::vector<Element> EnumerationTable::left_divisors(Element p) const {
    int const               lp = length(p);
    std::set<std::uint32_t> found;
    for (std::size_t i = _member_offset[p.id]; i < _member_offset[p.id + 1]; ++i) {
      std::uint64_t const w = _members[i];
      for (int k = 0; k <= lp; ++k) {
        found.insert(_class_of[k][w / _power[lp - k]]);
      }
    }
    std::vector<Element> out;
    for (auto id : found) {
      out.push_back(Element{id});
    }
    return out;
  }

  void EnumerationTable::check_cancellation() {
    std::size_t const    n = size();
    std::vector<int64_t> seen(n, -1);
    // Left: y -> xy injective on each length; right: y -> yx likewise.
    for (int side = 0; side < 2; ++side) {
      for (std::uint32_t x = 0; x < n; ++x) {
        int const lx = _length[x];
        for (int m = 0; lx + m <= _bound; ++m) {
          for (std::size_t y = _offset[m]; y < _offset[m + 1]; ++y) {
            Element const yy{static_cast<std::uint32_t>(y)};
            Element const xy = side == 0 ? multiply(Element{x}, yy) : multiply(yy, Element{x});
            if (seen[xy.id] >= 0 && seen[xy.id] != static_cast<int64_t>(y)) {
              Element const other{static_cast<std::uint32_t>(seen[xy.id])};
              _cancellation.ok = false;
              std::string const xs = format(Element{x});
              _cancellation.witness
                  = side == 0 ? xs + "·" + format(other) + " = " + xs + "·" + format(yy)
                              : format(other) + "·" + xs + " = " + format(yy) + "·" + xs;
              return;
            }
            seen[xy.id] = static_cast<int64_t>(y);
          }
          for (std::size_t y = _offset[m]; y < _offset[m + 1]; ++y) {
            Element const yy{static_cast<std::uint32_t>(y)};
            seen[(side == 0 ? multiply(Element{x}, yy) : multiply(yy, Element{x})).id] = -1;
          }
        }
      }
    }
  }

  void EnumerationTable::require_cancellative() const {
    if (!_cancellation.ok) {
      throw InvariantFailure("monoid is not cancellative at this bound: "
                             + _cancellation.witness);
    }
  }

  TablePtr enumerate(Presentation const& pres, int bound, std::size_t max_words) {
    return std::make_shared<EnumerationTable const>(pres, bound, max_words);
  }

  LcmReport right_lcm_check(EnumerationTable const& table, Element p, Element q) {
    int const lp = table.length(p);
    int const lq = table.length(q);
    if (std::max(lp, lq) > table.bound()) {
      throw DepthError("right_lcm_check: bound too small to contain both elements");
    }
    LcmReport report{LcmVerdict::empty_intersection, std::nullopt, {}};
    for (std::uint32_t id = 0; id < table.size(); ++id) {
      Element const m{id};
      if (table.left_quotient(p, m) && table.left_quotient(q, m)) {
        report.common_multiples.push_back(m);
      }
    }
    if (report.common_multiples.empty()) {
      return report;
    }
    std::vector<Element> minimal;
    for (Element c : report.common_multiples) {
      bool divides_all = true;
      for (Element m : report.common_multiples) {
        if (!table.left_quotient(c, m)) {
          divides_all = false;
          break;
        }
      }
      if (divides_all) {
        minimal.push_back(c);
      }
    }
    if (minimal.size() == 1) {
      report.verdict = LcmVerdict::lcm;
      report.lcm     = minimal.front();
    } else {
      report.verdict = LcmVerdict::no_unique_minimum;
    }
    return report;
  }

}  // namespace semirfd
