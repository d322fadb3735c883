#pragma once

// Point clouds in [0,1]^d, stored flat (row-major, one point per row).

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace advloss {

struct Dataset {
  int dim = 1;
  std::vector<double> flat;  // size = n * dim

  Dataset() = default;
  Dataset(int d, std::vector<double> data) : dim(d), flat(std::move(data)) {
    if (dim < 1) throw std::invalid_argument("dataset dimension must be >= 1");
    if (flat.size() % static_cast<std::size_t>(dim) != 0)
      throw std::invalid_argument("dataset storage not a multiple of dim");
  }

  std::size_t size() const { return flat.size() / static_cast<std::size_t>(dim); }
  bool empty() const { return flat.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {flat.data() + i * static_cast<std::size_t>(dim),
            static_cast<std::size_t>(dim)};
  }

  void push_back(std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(dim))
      throw std::invalid_argument("point dimension mismatch");
    flat.insert(flat.end(), x.begin(), x.end());
  }
};

}  // namespace advloss
