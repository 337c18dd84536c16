#pragma once

namespace herglotz {

inline constexpr const char* kVersion = "0.1.0";

// Default tolerances used across the library. Values are part of the
// numerical contract and are echoed by the CLI reproducibility header.
struct Tolerances {
    double hermitian = 1e-12;       // ||A - A*|| acceptance for Hermitian inputs
    double psd_rel = 1e-10;         // min eigenvalue >= -psd_rel * ||W||
    double atom_merge = 1e-10;      // atom locations closer than this are merged
    double quad_rel = 1e-10;        // adaptive quadrature relative tolerance
    double quad_abs = 1e-14;        // adaptive quadrature absolute floor
    double lft_cond = 1e12;         // condition-number guard on LFT denominators
    double ode_rel = 1e-10;         // ODE integrator relative tolerance
    double weyl_accept = 1e-8;      // Weyl ladder acceptance threshold
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

} // namespace herglotz
