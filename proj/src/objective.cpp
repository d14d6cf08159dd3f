#include "proxyopt/objective.hpp"

namespace proxyopt {

Objective Objective::true_function(BenchmarkSpec spec) { return Objective(Kind::TrueFunction, std::move(spec), nullptr); }

Objective Objective::proxy(std::shared_ptr<const MlpModel> model, BenchmarkSpec spec) {
    if (!model) throw Error(ErrorCode::InvalidParameter, "proxy objective needs a model");
    if (model->input_dim() != spec.dim) {
        throw Error(ErrorCode::InvalidDimension, "model expects " + std::to_string(model->input_dim()) +
                                                     " inputs but the benchmark has dimension " + std::to_string(spec.dim));
    }
    return Objective(Kind::Proxy, std::move(spec), std::move(model));
}

double Objective::operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (x.size() != spec_.dim) {
        throw Error(ErrorCode::InvalidDimension,
                    "point has " + std::to_string(x.size()) + " coordinates, objective has " + std::to_string(spec_.dim));
    }
    if (!spec_.contains(x)) throw Error(ErrorCode::OutOfDomain, "point lies outside the objective's bounds");
    if (kind_ == Kind::TrueFunction) return spec_(x);
    return forward(*model_, x);
}

}  // namespace proxyopt
