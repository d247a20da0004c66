#pragma once

#include <cstdint>
#include <vector>

namespace fgl {

// Dense row-major double tensor. Shape is dynamic; layers interpret it as
// needed (images are [H][W][C]). Doubles throughout: file formats downcast
// to float32 at the boundary, everything in memory stays 64-bit.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<int> s) : shape(std::move(s)), data(count(shape), 0.0) {}

    static std::size_t count(const std::vector<int>& s)
    {
        std::size_t n = 1;
        for (int d : s) n *= static_cast<std::size_t>(d);
        return s.empty() ? 0 : n;
    }

    std::size_t size() const { return data.size(); }

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    // [H][W][C] accessor for image-shaped tensors.
    double& at(int h, int w, int c)
    {
        return data[(static_cast<std::size_t>(h) * shape[1] + w) * shape[2] + c];
    }
    double at(int h, int w, int c) const
    {
        return data[(static_cast<std::size_t>(h) * shape[1] + w) * shape[2] + c];
    }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

} // namespace fgl
