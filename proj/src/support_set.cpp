#include "gl_lab/support_set.hpp"

#include <algorithm>

namespace gl_lab {

SupportSet::SupportSet(std::vector<std::size_t> indices, std::size_t ambient_p)
    : indices_(std::move(indices)), ambient_p_(ambient_p) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] >= ambient_p_) {
      throw std::invalid_argument("support index exceeds ambient dimension");
    }
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw std::invalid_argument("support indices must strictly increase");
    }
  }
}

SupportSet SupportSet::first(std::size_t s, std::size_t ambient_p) {
  std::vector<std::size_t> idx(s);
  for (std::size_t i = 0; i < s; ++i) idx[i] = i;
  return SupportSet(std::move(idx), ambient_p);
}

bool SupportSet::contains(std::size_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

std::vector<std::size_t> SupportSet::complement() const {
  std::vector<std::size_t> out;
  out.reserve(ambient_p_ - indices_.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < ambient_p_; ++i) {
    if (next < indices_.size() && indices_[next] == i) {
      ++next;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace gl_lab
