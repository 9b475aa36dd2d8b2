#pragma once

#include <string>
#include <vector>

#include "semirfd/enumeration.hpp"

namespace semirfd {

  //! A monoid homomorphism P -> Q given by generator images.
  //!
  //! Both monoids are homogeneous, so the Q-length of φ(p) is the weighted
  //! length Σ |φ(g_i)| over any representative g_1⋯g_k of p. When every
  //! generator has a non-identity image (positive weight) the fibers are
  //! finite and the map is a (P,Q)-map in the controlled sense; fibers of
  //! maps with weight-zero generators are infinite and fiber() refuses them.
  class ControlledMap {
   public:
    //! Validates that the images respect every relation of P and that the
    //! induced map is well defined on every class in the source table.
    //! The target table must be deep enough to hold φ(p) for every p in
    //! the source table (weighted length <= target bound).
    ControlledMap(TablePtr source, TablePtr target, std::vector<Word> generator_images,
                  std::string name = "custom");

    //! P -> ℕ, every generator to 1. Builds ℕ to `target_bound`, or to the
    //! source bound when negative.
    static ControlledMap length_map(TablePtr source, int target_bound = -1);
    //! P -> ℕ^k, generator i to the i-th unit vector. Builds nat(k) to the
    //! source bound (or `target_bound`); fails for presentations whose
    //! relations do not preserve letter counts.
    static ControlledMap abelianization(TablePtr source, int target_bound = -1);

    TablePtr const& source() const noexcept {
      return _source;
    }
    TablePtr const& target() const noexcept {
      return _target;
    }
    std::string const& name() const noexcept {
      return _name;
    }

    Element operator()(Element p) const {
      return _image.at(p.id);
    }
    Element image_of_generator(std::size_t i) const {
      return _generator_image.at(i);
    }
    //! Q-length of φ(g_i).
    int weight(std::size_t i) const {
      return _weight.at(i);
    }
    int max_weight() const noexcept {
      return _max_weight;
    }
    int min_weight() const noexcept {
      return _min_weight;
    }
    bool finite_fibers() const noexcept {
      return _min_weight > 0;
    }

    //! The complete fiber φ⁻¹(q), sorted by id. Throws DepthError when the
    //! source bound cannot guarantee completeness or fibers are infinite.
    std::vector<Element> fiber(Element q) const;

   private:
    TablePtr             _source;
    TablePtr             _target;
    std::string          _name;
    std::vector<Element> _generator_image;
    std::vector<int>     _weight;
    int                  _max_weight = 0;
    int                  _min_weight = 0;
    std::vector<Element> _image;
  };

}  // namespace semirfd
