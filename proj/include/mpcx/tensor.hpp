// SPDX-License-Identifier: Apache-2.0
//
// mpcx: multipath component extraction for idealized MIMO channel sounders
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "mpcx/types.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace mpcx
{
    // Dense row-major 3-axis tensor; the last axis is contiguous.
    template <typename T>
    class Tensor3
    {
    public:
        Tensor3() = default;
        Tensor3(std::size_t d0, std::size_t d1, std::size_t d2, T fill = T{})
            : dims_{d0, d1, d2}, data_(d0 * d1 * d2, fill) {}

        std::size_t dim(std::size_t axis) const { return dims_[axis]; }
        const std::array<std::size_t, 3> &dims() const { return dims_; }
        std::size_t size() const { return data_.size(); }
        bool empty() const { return data_.empty(); }

        std::size_t index(std::size_t i, std::size_t j, std::size_t k) const
        {
            return (i * dims_[1] + j) * dims_[2] + k;
        }

        T &operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[index(i, j, k)]; }
        const T &operator()(std::size_t i, std::size_t j, std::size_t k) const { return data_[index(i, j, k)]; }

        T *data() { return data_.data(); }
        const T *data() const { return data_.data(); }
        std::span<T> values() { return data_; }
        std::span<const T> values() const { return data_; }

        bool same_shape(const Tensor3 &other) const { return dims_ == other.dims_; }
        bool operator==(const Tensor3 &) const = default;

    private:
        std::array<std::size_t, 3> dims_{0, 0, 0};
        std::vector<T> data_;
    };

    using CTensor3 = Tensor3<cplx>;

    // Dense row-major real matrix (PDP maps, cost matrices)
    class RealMatrix
    {
    public:
        RealMatrix() = default;
        RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
            : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

        std::size_t rows() const { return rows_; }
        std::size_t cols() const { return cols_; }
        double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
        double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
        double *data() { return data_.data(); }
        const double *data() const { return data_.data(); }
        std::span<double> values() { return data_; }
        std::span<const double> values() const { return data_; }

        bool operator==(const RealMatrix &) const = default;

    private:
        std::size_t rows_ = 0;
        std::size_t cols_ = 0;
        std::vector<double> data_;
    };

    // Sum of squared magnitudes
    inline double total_power(std::span<const cplx> v)
    {
        double acc = 0.0;
        for (const auto &x : v)
            acc += std::norm(x);
        return acc;
    }
}
