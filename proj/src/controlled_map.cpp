#include "semirfd/controlled_map.hpp"

#include <algorithm>

#include "semirfd/error.hpp"

namespace semirfd {

  ControlledMap::ControlledMap(TablePtr          source,
                               TablePtr          target,
                               std::vector<Word> generator_images,
                               std::string       name)
      : _source(std::move(source)), _target(std::move(target)), _name(std::move(name)) {
    auto const& pres = _source->presentation();
    if (generator_images.size() != pres.number_of_generators()) {
      throw InvalidArgument("controlled map needs one image per generator of the source");
    }
    for (auto const& w : generator_images) {
      _generator_image.push_back(_target->element(w));
      _weight.push_back(static_cast<int>(w.size()));
    }
    if (!_weight.empty()) {
      _max_weight = *std::max_element(_weight.begin(), _weight.end());
      _min_weight = *std::min_element(_weight.begin(), _weight.end());
    }
    if (_max_weight * _source->bound() > _target->bound()) {
      throw DepthError("target table (bound " + std::to_string(_target->bound())
                       + ") too shallow for images of source length "
                       + std::to_string(_source->bound()));
    }

    auto evaluate = [&](Word const& w) {
      Element acc = _target->identity();
      for (Letter x : w) {
        acc = _target->multiply(acc, _generator_image[x]);
      }
      return acc;
    };
    // Relations inside the table are covered by the representative check
    // below; longer ones cannot affect any element we hold.
    _image.reserve(_source->size());
    for (std::uint32_t id = 0; id < _source->size(); ++id) {
      Element const p{id};
      auto const    reps = _source->representatives(p);
      Element const img  = evaluate(reps.front());
      for (auto const& w : reps) {
        if (evaluate(w) != img) {
          throw InvariantFailure("generator images do not define a homomorphism: "
                                 + pres.format_word(reps.front()) + " ≡ " + pres.format_word(w)
                                 + " but their images differ");
        }
      }
      _image.push_back(img);
    }
  }

  ControlledMap ControlledMap::length_map(TablePtr source, int target_bound) {
    auto target = enumerate(builtin::nat(1), std::max(target_bound, source->bound()));
    std::vector<Word> images(source->presentation().number_of_generators(), Word{0});
    return ControlledMap(std::move(source), std::move(target), std::move(images), "length");
  }

  ControlledMap ControlledMap::abelianization(TablePtr source, int target_bound) {
    auto const k = static_cast<int>(source->presentation().number_of_generators());
    auto target  = enumerate(builtin::nat(k), std::max(target_bound, source->bound()));
    std::vector<Word> images;
    for (int i = 0; i < k; ++i) {
      images.push_back(Word{static_cast<Letter>(i)});
    }
    return ControlledMap(std::move(source), std::move(target), std::move(images),
                         "abelianization");
  }

  std::vector<Element> ControlledMap::fiber(Element q) const {
    int const lq = _target->length(q);
    if (lq == 0) {
      // Weight-zero generators aside, only e maps to e.
      if (!finite_fibers()) {
        throw DepthError("fiber over e is infinite: some generator maps to e");
      }
      return {_source->identity()};
    }
    if (!finite_fibers()) {
      throw DepthError("fibers are infinite: some generator maps to e");
    }
    // Every p in the fiber has min_weight·|p| <= |q|.
    int const needed = lq / _min_weight;
    if (needed > _source->bound()) {
      throw DepthError("fiber over " + _target->format(q) + " needs source length "
                       + std::to_string(needed) + ", table bound is "
                       + std::to_string(_source->bound()));
    }
    std::vector<Element> out;
    for (std::size_t id = 0; id < _source->size_through(needed); ++id) {
      if (_image[id] == q) {
        out.push_back(Element{static_cast<std::uint32_t>(id)});
      }
    }
    return out;
  }

}  // namespace semirfd
