#include "alesupg/problem.hpp"

namespace alesupg {

void ProblemSpec::validate() const {
    if (!(eps > 0.0)) throw ConfigError("problem '" + name + "': eps must be positive");
    if (!b || !div_b || !c || !f || !u0) throw ConfigError("problem '" + name + "': missing coefficient field");
    for (const auto& [tag, cond] : bc) {
        if (cond.kind == BoundaryCondition::Kind::Dirichlet && !cond.value) {
            throw ConfigError("problem '" + name + "': Dirichlet tag " + std::string(to_string(tag)) + " has no value");
        }
    }
    if (!(lower_bound <= upper_bound)) throw ConfigError("problem '" + name + "': lower bound above upper bound");
}

const BoundaryCondition& ProblemSpec::condition(BoundaryTag tag) const {
    static const BoundaryCondition kNeumann = BoundaryCondition::neumann();
    const auto it = bc.find(tag);
    return it == bc.end() ? kNeumann : it->second;
}

}  // namespace alesupg
