#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qzk {

// An ordered list of named quantum registers. The first register is the
// most significant factor of the flat index, matching the tensor-product
// convention A (x) B -> index = a * dim(B) + b.
class RegisterLayout {
  public:
    struct Register {
        std::string name;
        std::size_t dim = 0;
    };

    RegisterLayout() = default;
    explicit RegisterLayout(std::vector<Register> regs);

    std::size_t size() const { return regs_.size(); }
    const Register& reg(std::size_t i) const { return regs_[i]; }
    const std::vector<Register>& registers() const { return regs_; }

    std::size_t total_dim() const { return total_; }

    bool has(const std::string& name) const;
    std::size_t index_of(const std::string& name) const; // throws on unknown name
    std::size_t dim_of(const std::string& name) const;

    // Product of the dimensions strictly after register i.
    std::size_t stride(std::size_t i) const { return strides_[i]; }

    // Value of register i inside a flat index.
    std::size_t component(std::size_t flat, std::size_t i) const {
        return (flat / strides_[i]) % regs_[i].dim;
    }

    // Layout over the complement of the given register names, in the
    // original order.
    RegisterLayout without(const std::vector<std::string>& names) const;
    RegisterLayout keep_only(const std::vector<std::string>& names) const;

  private:
    std::vector<Register> regs_;
    std::vector<std::size_t> strides_;
    std::size_t total_ = 1;
};

} // namespace qzk
