#pragma once

#include <cstddef>
#include <vector>

#include "gl_lab/errors.hpp"

namespace gl_lab {

/// Sorted set of row indices into {0, ..., ambient_p - 1}.
class SupportSet {
 public:
  SupportSet() = default;
  /// Indices must be strictly increasing and below ambient_p.
  SupportSet(std::vector<std::size_t> indices, std::size_t ambient_p);

  static SupportSet first(std::size_t s, std::size_t ambient_p);

  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  std::size_t ambient() const { return ambient_p_; }
  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t operator[](std::size_t i) const { return indices_[i]; }

  bool contains(std::size_t index) const;
  std::vector<std::size_t> complement() const;

  bool operator==(const SupportSet& other) const = default;

 private:
  std::vector<std::size_t> indices_;
  std::size_t ambient_p_ = 0;
};

}  // namespace gl_lab
