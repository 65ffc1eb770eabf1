#pragma once

#include <nlohmann/json.hpp>

#include "plgb/spinconn.hpp"

namespace plgb {

struct spec_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FibreData {
    LieBialgebra algebra;
    std::optional<XiTensor> xi;
    // declared covariance level of the Xi data; one-sided data exempts the
    // bicovariance check from the default selection
    bool xi_bicovariant_expected = true;
};

// One loaded geometry: ring, frame, Poisson structure and connection, plus
// the optional fibre/action/bundle/spin blocks. Addresses of members are
// stable for the lifetime of the object (the bundle keeps pointers).
class GeometrySpec {
public:
    static std::unique_ptr<GeometrySpec> load(const std::string& path);
    static std::unique_ptr<GeometrySpec> from_json(const nlohmann::json& j, std::string name);

    GeometrySpec(const GeometrySpec&) = delete;
    GeometrySpec& operator=(const GeometrySpec&) = delete;

    std::string name;
    nlohmann::json source;
    RingPtr ring;
    FramePtr frame;
    PoissonStructure poisson;
    ContravariantConnection connection;
    std::optional<FibreData> fibre;
    std::optional<ActionSpec> action;
    std::optional<FibreData> residual_fibre;
    std::optional<ActionSpec> residual_action;
    std::unique_ptr<BundleData> bundle;
    std::optional<SpinConnectionData> spin;

private:
    GeometrySpec() = default;
};

// Serialises an induced base as a standalone geometry spec (ring, frame,
// poisson, connection, and the residual fibre/action when present).
nlohmann::json emit_induced_spec(const GeometrySpec& total, const InducedBase& ib);

// Rebuilds a one-dimensional-fibre spec with fresh commuting generators
// making alpha a symbolic basic 1-form on the horizontal frame elements.
// Returns the modified source json; load it with GeometrySpec::from_json.
nlohmann::json with_symbolic_alpha(const nlohmann::json& src);

}  // namespace plgb
