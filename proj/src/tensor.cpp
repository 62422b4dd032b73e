#include "qdq/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <unordered_map>

#include "qdq/error.hpp"

namespace qdq {

namespace {

using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> strides(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) strides[i - 1] = strides[i] * dims[i];
    return strides;
}

// Shape bookkeeping used by the planner and plan validation.
struct Shape {
    std::vector<std::string> labels;
    std::vector<std::size_t> dims;
};

Shape shape_of(const Tensor& t) { return {t.labels(), t.dims()}; }

Shape contracted_shape(const Shape& a, const Shape& b) {
    Shape out;
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
        if (std::find(b.labels.begin(), b.labels.end(), a.labels[i]) == b.labels.end()) {
            out.labels.push_back(a.labels[i]);
            out.dims.push_back(a.dims[i]);
        }
    }
    for (std::size_t i = 0; i < b.labels.size(); ++i) {
        if (std::find(a.labels.begin(), a.labels.end(), b.labels[i]) == a.labels.end()) {
            out.labels.push_back(b.labels[i]);
            out.dims.push_back(b.dims[i]);
        }
    }
    return out;
}

// Replays a plan over shapes only. Returns the final shape and accumulates cost.
Shape replay(std::span<const Tensor> network, const ContractionPlan& plan, std::uint64_t& cost) {
    if (network.empty()) throw InvalidNetwork("empty tensor network");
    std::map<std::size_t, Shape> live;
    for (std::size_t i = 0; i < network.size(); ++i) live.emplace(i, shape_of(network[i]));
    std::size_t next_id = network.size();
    cost = 0;
    for (const auto& [x, y] : plan.steps) {
        auto ix = live.find(x);
        auto iy = live.find(y);
        if (x == y || ix == live.end() || iy == live.end()) {
            throw InvalidPlan("plan step (" + std::to_string(x) + ", " + std::to_string(y) +
                              ") references an unknown or consumed tensor id");
        }
        Shape result = contracted_shape(ix->second, iy->second);
        cost += element_count(result.dims);
        live.erase(ix);
        live.erase(iy);
        live.emplace(next_id++, std::move(result));
    }
    if (live.size() != 1) {
        throw InvalidPlan("plan leaves " + std::to_string(live.size()) + " tensors uncontracted");
    }
    return live.begin()->second;
}

std::vector<std::string> free_labels_in_order(std::span<const Tensor> network) {
    std::unordered_map<std::string, int> uses;
    for (const auto& t : network)
        for (const auto& l : t.labels()) ++uses[l];
    std::vector<std::string> order;
    for (const auto& t : network)
        for (const auto& l : t.labels())
            if (uses[l] == 1) order.push_back(l);
    return order;
}

}  // namespace

std::size_t element_count(std::span<const std::size_t> dims) {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    return n;
}

Tensor::Tensor(std::vector<std::string> labels, std::vector<std::size_t> dims, std::vector<Complex> data)
    : labels_(std::move(labels)), dims_(std::move(dims)), data_(std::move(data)) {
    if (labels_.size() != dims_.size()) {
        throw InvariantViolation("tensor has " + std::to_string(labels_.size()) + " labels but " +
                                 std::to_string(dims_.size()) + " dims");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (dims_[i] == 0) throw InvariantViolation("tensor index '" + labels_[i] + "' has size 0");
        for (std::size_t j = 0; j < i; ++j) {
            if (labels_[i] == labels_[j]) throw InvariantViolation("duplicate tensor label '" + labels_[i] + "'");
        }
    }
    if (data_.size() != element_count(dims_)) {
        throw InvariantViolation("tensor data length " + std::to_string(data_.size()) +
                                 " does not match product of dims " + std::to_string(element_count(dims_)));
    }
}

Tensor Tensor::scalar(Complex value) { return Tensor({}, {}, {value}); }

std::size_t Tensor::find(const std::string& label) const noexcept {
    return static_cast<std::size_t>(std::find(labels_.begin(), labels_.end(), label) - labels_.begin());
}

std::size_t Tensor::dim(const std::string& label) const {
    auto pos = find(label);
    if (pos == rank()) throw DomainError("tensor has no label '" + label + "'");
    return dims_[pos];
}

Complex Tensor::at(std::span<const std::size_t> index) const {
    if (index.size() != rank()) throw DomainError("multi-index rank mismatch");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
        if (index[i] >= dims_[i]) throw DomainError("multi-index out of range");
        flat = flat * dims_[i] + index[i];
    }
    return data_[flat];
}

Tensor Tensor::scaled(Complex factor) const {
    auto data = data_;
    for (auto& v : data) v *= factor;
    return Tensor(labels_, dims_, std::move(data));
}

Tensor Tensor::conj() const {
    auto data = data_;
    for (auto& v : data) v = std::conj(v);
    return Tensor(labels_, dims_, std::move(data));
}

Tensor Tensor::renamed(const std::string& from, const std::string& to) const {
    auto labels = labels_;
    auto pos = find(from);
    if (pos == rank()) throw DomainError("tensor has no label '" + from + "'");
    labels[pos] = to;
    return Tensor(std::move(labels), dims_, data_);
}

Tensor transpose_relabel(const Tensor& t, std::span<const std::string> new_label_order) {
    const std::size_t r = t.rank();
    if (new_label_order.size() != r) throw DomainError("transpose order is not a permutation of the labels");
    std::vector<std::size_t> perm(r);  // perm[new axis] = old axis
    std::vector<bool> seen(r, false);
    for (std::size_t i = 0; i < r; ++i) {
        auto pos = t.find(new_label_order[i]);
        if (pos == r || seen[pos]) throw DomainError("transpose order is not a permutation of the labels");
        seen[pos] = true;
        perm[i] = pos;
    }

    std::vector<std::size_t> new_dims(r);
    for (std::size_t i = 0; i < r; ++i) new_dims[i] = t.dims()[perm[i]];
    bool identity = true;
    for (std::size_t i = 0; i < r; ++i) identity = identity && perm[i] == i;
    if (identity) return t;

    const auto old_strides = strides_of(t.dims());
    std::vector<std::size_t> gather(r);
    for (std::size_t i = 0; i < r; ++i) gather[i] = old_strides[perm[i]];

    std::vector<Complex> out(t.size());
    std::vector<std::size_t> idx(r, 0);
    std::size_t src = 0;
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        out[flat] = t.data()[src];
        for (std::size_t ax = r; ax-- > 0;) {
            ++idx[ax];
            src += gather[ax];
            if (idx[ax] < new_dims[ax]) break;
            src -= gather[ax] * idx[ax];
            idx[ax] = 0;
        }
    }
    return Tensor(std::vector<std::string>(new_label_order.begin(), new_label_order.end()), std::move(new_dims),
                  std::move(out));
}

Tensor transpose_relabel(const Tensor& t, std::initializer_list<std::string> new_label_order) {
    return transpose_relabel(t, std::span<const std::string>(new_label_order.begin(), new_label_order.size()));
}

Tensor contract(const Tensor& a, const Tensor& b) {
    std::vector<std::string> free_a, shared, free_b;
    std::vector<std::size_t> free_a_dims, free_b_dims;
    std::size_t shared_size = 1;
    for (std::size_t i = 0; i < a.rank(); ++i) {
        const auto& l = a.labels()[i];
        auto pos = b.find(l);
        if (pos < b.rank()) {
            if (b.dims()[pos] != a.dims()[i]) {
                throw InvalidContraction("label '" + l + "' has size " + std::to_string(a.dims()[i]) +
                                         " in one tensor and " + std::to_string(b.dims()[pos]) + " in the other");
            }
            shared.push_back(l);
            shared_size *= a.dims()[i];
        } else {
            free_a.push_back(l);
            free_a_dims.push_back(a.dims()[i]);
        }
    }
    for (std::size_t i = 0; i < b.rank(); ++i) {
        if (!a.has_label(b.labels()[i])) {
            free_b.push_back(b.labels()[i]);
            free_b_dims.push_back(b.dims()[i]);
        }
    }

    std::vector<std::string> a_order = free_a;
    a_order.insert(a_order.end(), shared.begin(), shared.end());
    std::vector<std::string> b_order = shared;
    b_order.insert(b_order.end(), free_b.begin(), free_b.end());
    const Tensor ap = transpose_relabel(a, a_order);
    const Tensor bp = transpose_relabel(b, b_order);

    const auto rows = static_cast<Eigen::Index>(element_count(free_a_dims));
    const auto cols = static_cast<Eigen::Index>(element_count(free_b_dims));
    const auto inner = static_cast<Eigen::Index>(shared_size);
    Eigen::Map<const RowMajorMatrix> lhs(ap.data().data(), rows, inner);
    Eigen::Map<const RowMajorMatrix> rhs(bp.data().data(), inner, cols);

    std::vector<Complex> out(static_cast<std::size_t>(rows * cols));
    Eigen::Map<RowMajorMatrix> result(out.data(), rows, cols);
    result.noalias() = lhs * rhs;

    std::vector<std::string> labels = std::move(free_a);
    labels.insert(labels.end(), free_b.begin(), free_b.end());
    std::vector<std::size_t> dims = std::move(free_a_dims);
    dims.insert(dims.end(), free_b_dims.begin(), free_b_dims.end());
    return Tensor(std::move(labels), std::move(dims), std::move(out));
}

void validate_network(std::span<const Tensor> network) {
    if (network.empty()) throw InvalidNetwork("empty tensor network");
    struct Use {
        std::size_t dim;
        int count;
    };
    std::unordered_map<std::string, Use> uses;
    for (const auto& t : network) {
        for (std::size_t i = 0; i < t.rank(); ++i) {
            auto [it, inserted] = uses.try_emplace(t.labels()[i], Use{t.dims()[i], 0});
            if (it->second.dim != t.dims()[i]) {
                throw InvalidNetwork("label '" + t.labels()[i] + "' has inconsistent sizes across the network");
            }
            if (++it->second.count > 2) {
                throw InvalidNetwork("label '" + t.labels()[i] + "' appears in more than two tensors");
            }
        }
    }
}

ContractionPlan plan_contraction(std::span<const Tensor> network) {
    validate_network(network);
    std::vector<std::pair<std::size_t, Shape>> live;
    for (std::size_t i = 0; i < network.size(); ++i) live.emplace_back(i, shape_of(network[i]));

    ContractionPlan plan;
    std::size_t next_id = network.size();
    while (live.size() > 1) {
        std::size_t best_i = 0, best_j = 1;
        std::pair<std::size_t, std::size_t> best_ids{std::numeric_limits<std::size_t>::max(), 0};
        std::size_t best_size = std::numeric_limits<std::size_t>::max();
        for (std::size_t i = 0; i < live.size(); ++i) {
            for (std::size_t j = i + 1; j < live.size(); ++j) {
                const std::size_t size = element_count(contracted_shape(live[i].second, live[j].second).dims);
                const std::pair<std::size_t, std::size_t> ids{std::min(live[i].first, live[j].first),
                                                         std::max(live[i].first, live[j].first)};
                if (size < best_size || (size == best_size && ids < best_ids)) {
                    best_size = size;
                    best_ids = ids;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        Shape merged = contracted_shape(live[best_i].second, live[best_j].second);
        plan.steps.push_back(best_ids);
        plan.cost_estimate += best_size;
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(best_j));
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(best_i));
        live.emplace_back(next_id++, std::move(merged));
    }
    return plan;
}

ContractionPlan linear_plan(std::span<const Tensor> network, bool reversed) {
    validate_network(network);
    ContractionPlan plan;
    const std::size_t n = network.size();
    if (n < 2) return plan;
    if (!reversed) {
        plan.steps.emplace_back(0, 1);
        for (std::size_t k = 2; k < n; ++k) plan.steps.emplace_back(n + k - 2, k);
    } else {
        plan.steps.emplace_back(n - 2, n - 1);
        for (std::size_t k = 1; k + 1 < n; ++k) plan.steps.emplace_back(n - 2 - k, n + k - 1);
    }
    plan.cost_estimate = plan_cost(network, plan);
    return plan;
}

std::uint64_t plan_cost(std::span<const Tensor> network, const ContractionPlan& plan) {
    std::uint64_t cost = 0;
    replay(network, plan, cost);
    return cost;
}

Tensor contract_network(std::span<const Tensor> network, const ContractionPlan& plan) {
    validate_network(network);
    std::uint64_t cost = 0;
    replay(network, plan, cost);  // validates ids before any arithmetic

    std::map<std::size_t, Tensor> live;
    for (std::size_t i = 0; i < network.size(); ++i) live.emplace(i, network[i]);
    std::size_t next_id = network.size();
    for (const auto& [x, y] : plan.steps) {
        auto ix = live.find(x);
        auto iy = live.find(y);
        Tensor merged = contract(ix->second, iy->second);
        live.erase(ix);
        live.erase(iy);
        live.emplace(next_id++, std::move(merged));
    }
    const auto order = free_labels_in_order(network);
    return transpose_relabel(live.begin()->second, order);
}

}  // namespace qdq
