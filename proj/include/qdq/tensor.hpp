#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qdq {

using Complex = std::complex<double>;

/**
 * Dense tensor whose indices carry names.
 *
 * Data is stored row-major with respect to the label order: the last label
 * varies fastest. A tensor with no labels is a scalar holding one element.
 * Tensors are immutable values; every operation returns a new tensor.
 */
class Tensor {
public:
    Tensor(std::vector<std::string> labels, std::vector<std::size_t> dims, std::vector<Complex> data);

    static Tensor scalar(Complex value);

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    const std::vector<Complex>& data() const noexcept { return data_; }

    std::size_t rank() const noexcept { return labels_.size(); }
    std::size_t size() const noexcept { return data_.size(); }

    /// Position of `label` in the label list, or rank() if absent.
    std::size_t find(const std::string& label) const noexcept;
    bool has_label(const std::string& label) const noexcept { return find(label) < rank(); }
    std::size_t dim(const std::string& label) const;

    /// Element at a multi-index given in label order.
    Complex at(std::span<const std::size_t> index) const;

    Tensor scaled(Complex factor) const;
    Tensor conj() const;

    /// Same data with one label renamed.
    Tensor renamed(const std::string& from, const std::string& to) const;

private:
    std::vector<std::string> labels_;
    std::vector<std::size_t> dims_;
    std::vector<Complex> data_;
};

/// Product of dims; 1 for an empty list.
std::size_t element_count(std::span<const std::size_t> dims);

/**
 * Sum over all labels shared by `a` and `b`.
 *
 * Result labels are the free labels of `a` followed by the free labels of
 * `b`, each in their original order. Two matrices sharing one label give the
 * ordinary matrix product; no shared labels give the outer product.
 * Throws InvalidContraction when a shared label has different sizes.
 */
Tensor contract(const Tensor& a, const Tensor& b);

/// Permutes the data so that the layout follows `new_label_order`.
Tensor transpose_relabel(const Tensor& t, std::span<const std::string> new_label_order);
Tensor transpose_relabel(const Tensor& t, std::initializer_list<std::string> new_label_order);

/**
 * Pairwise reduction schedule for a tensor network.
 *
 * Input tensors have ids 0..n-1; step k consumes two live ids and produces
 * id n+k. cost_estimate is the sum of element counts of every intermediate
 * (the final tensor included).
 */
struct ContractionPlan {
    std::vector<std::pair<std::size_t, std::size_t>> steps;
    std::uint64_t cost_estimate = 0;
};

/// Checks that shared labels agree in size and that no label is used by more than two tensors.
void validate_network(std::span<const Tensor> network);

/// Greedy planner: repeatedly contracts the live pair with the smallest result, ties to the lowest id pair.
ContractionPlan plan_contraction(std::span<const Tensor> network);

/// Left-to-right chain ((0,1),(n,2),...) or, when reversed, right-to-left ((n-2,n-1),(n-3,n),...).
ContractionPlan linear_plan(std::span<const Tensor> network, bool reversed = false);

/// Cost of an arbitrary plan; throws InvalidPlan if it is not a valid reduction.
std::uint64_t plan_cost(std::span<const Tensor> network, const ContractionPlan& plan);

/**
 * Executes `plan` over `network`.
 *
 * The result's labels are the network's free labels in order of first
 * appearance across the input list, so any two valid plans yield
 * element-wise comparable tensors.
 */
Tensor contract_network(std::span<const Tensor> network, const ContractionPlan& plan);

}  // namespace qdq
