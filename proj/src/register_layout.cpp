#include "qzk/register_layout.hpp"

#include <algorithm>

#include "qzk/config.hpp"
#include "qzk/error.hpp"

namespace qzk {

RegisterLayout::RegisterLayout(std::vector<Register> regs) : regs_(std::move(regs)) {
    total_ = 1;
    for (const auto& r : regs_) {
        if (r.dim < 1) throw PreconditionError("register '" + r.name + "' has dimension 0");
        for (const auto& other : regs_) {
            if (&other != &r && other.name == r.name)
                throw PreconditionError("duplicate register name '" + r.name + "'");
        }
        if (total_ > dimension_cap() / r.dim)
            throw DimensionLimitError("register layout exceeds dimension cap");
        total_ *= r.dim;
    }
    ensure_within_cap(total_, "register layout");
    strides_.assign(regs_.size(), 1);
    for (std::size_t i = regs_.size(); i-- > 0;) {
        if (i + 1 < regs_.size()) strides_[i] = strides_[i + 1] * regs_[i + 1].dim;
    }
}

bool RegisterLayout::has(const std::string& name) const {
    return std::any_of(regs_.begin(), regs_.end(),
                       [&](const Register& r) { return r.name == name; });
}

std::size_t RegisterLayout::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < regs_.size(); ++i)
        if (regs_[i].name == name) return i;
    throw PreconditionError("unknown register name '" + name + "'");
}

std::size_t RegisterLayout::dim_of(const std::string& name) const {
    return regs_[index_of(name)].dim;
}

RegisterLayout RegisterLayout::without(const std::vector<std::string>& names) const {
    for (const auto& n : names) (void)index_of(n);
    std::vector<Register> kept;
    for (const auto& r : regs_)
        if (std::find(names.begin(), names.end(), r.name) == names.end()) kept.push_back(r);
    return RegisterLayout(std::move(kept));
}

RegisterLayout RegisterLayout::keep_only(const std::vector<std::string>& names) const {
    for (const auto& n : names) (void)index_of(n);
    std::vector<Register> kept;
    for (const auto& r : regs_)
        if (std::find(names.begin(), names.end(), r.name) != names.end()) kept.push_back(r);
    return RegisterLayout(std::move(kept));
}

} // namespace qzk
