#include "qbattery/spin_model.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "qbattery/errors.hpp"

namespace qbattery {

ModelParams ModelParams::uniform(int n_sites, double field_h, double gamma, double j, double delta,
                                 double omega) {
    ModelParams p;
    p.n_sites = n_sites;
    p.field_h = field_h;
    p.anisotropy_gamma = gamma;
    p.charging_omega = omega;
    p.set_uniform_xy(j);
    p.set_uniform_zz(delta);
    return p;
}

void ModelParams::set_uniform_xy(double j) { xy_couplings.assign(n_bonds(), j); }

void ModelParams::set_uniform_zz(double delta) { zz_couplings.assign(n_bonds(), delta); }

void ModelParams::validate() const {
    if (n_sites < 1) {
        throw ValidationError("n_sites must be >= 1, got " + std::to_string(n_sites));
    }
    if (xy_couplings.size() != n_bonds()) {
        throw ValidationError("xy_couplings must have n_sites - 1 = " + std::to_string(n_bonds()) +
                              " entries, got " + std::to_string(xy_couplings.size()));
    }
    if (zz_couplings.size() != n_bonds()) {
        throw ValidationError("zz_couplings must have n_sites - 1 = " + std::to_string(n_bonds()) +
                              " entries, got " + std::to_string(zz_couplings.size()));
    }
    if (!(anisotropy_gamma >= 0.0 && anisotropy_gamma <= 1.0)) {
        throw ValidationError("anisotropy_gamma must lie in [0, 1]");
    }
    if (!(charging_omega > 0.0) || !std::isfinite(charging_omega)) {
        throw ValidationError("charging_omega must be positive");
    }
    if (!std::isfinite(field_h)) {
        throw ValidationError("field_h must be finite");
    }
    for (double v : xy_couplings) {
        if (!std::isfinite(v)) throw ValidationError("xy_couplings must be finite");
    }
    for (double v : zz_couplings) {
        if (!std::isfinite(v)) throw ValidationError("zz_couplings must be finite");
    }
}

void DisorderSpec::validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw ValidationError("disorder sigma must be a non-negative number");
    }
    if (!std::isfinite(mean)) {
        throw ValidationError("disorder mean must be finite");
    }
    if (n_realizations < 1) {
        throw ValidationError("n_realizations must be >= 1");
    }
}

namespace {

void check_size(const ModelParams& params, int max_sites) {
    params.validate();
    if (params.n_sites > max_sites) {
        throw ResourceError("n_sites = " + std::to_string(params.n_sites) +
                            " exceeds the configured maximum of " + std::to_string(max_sites));
    }
}

}  // namespace

Operator build_h0(const ModelParams& params, int max_sites) {
    check_size(params, max_sites);
    const int n = params.n_sites;
    const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n));
    const double g = params.anisotropy_gamma;

    // Bit value 0 is spin up (sz = +1). On a bond, sx sx flips both spins with
    // amplitude 1; sy sy flips both with amplitude -1 on aligned and +1 on
    // anti-aligned pairs. The XY term therefore flips aligned pairs with J g / 2
    // and anti-aligned pairs with J / 2.
    Operator h = Operator::Zero(dim, dim);
    for (Eigen::Index a = 0; a < dim; ++a) {
        double diag = 0.0;
        for (int site = 1; site <= n; ++site) {
            const bool up = ((a >> site_bit(site, n)) & 1) == 0;
            diag += 0.5 * params.field_h * (up ? 1.0 : -1.0);
        }
        for (int bond = 0; bond + 1 < n; ++bond) {
            const int b1 = site_bit(bond + 1, n);
            const int b2 = site_bit(bond + 2, n);
            const bool aligned = ((a >> b1) & 1) == ((a >> b2) & 1);
            diag += 0.25 * params.zz_couplings[bond] * (aligned ? 1.0 : -1.0);

            const double j = params.xy_couplings[bond];
            const double flip_amp = aligned ? 0.5 * j * g : 0.5 * j;
            if (flip_amp != 0.0) {
                const Eigen::Index flipped = a ^ ((Eigen::Index{1} << b1) | (Eigen::Index{1} << b2));
                h(flipped, a) += flip_amp;
            }
        }
        h(a, a) += diag;
    }
    return h;
}

Operator build_charging(const ModelParams& params, int max_sites) {
    check_size(params, max_sites);
    const int n = params.n_sites;
    const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n));
    const double half_omega = 0.5 * params.charging_omega;
    Operator h = Operator::Zero(dim, dim);
    for (Eigen::Index a = 0; a < dim; ++a) {
        for (int site = 1; site <= n; ++site) {
            h(a ^ (Eigen::Index{1} << site_bit(site, n)), a) += half_omega;
        }
    }
    return h;
}

LocalOperator charging_site_factor(const ModelParams& params) {
    return (0.5 * params.charging_omega) * pauli::x();
}

NormalizedHamiltonian normalize(const Operator& h0) {
    const RealVector spectrum = eigenvalues_hermitian(h0);
    const double e_min = spectrum(0);
    const double e_max = spectrum(spectrum.size() - 1);
    const double width = e_max - e_min;
    if (!(width > 1e-12)) {
        throw DegenerateSpectrumError("spectral width " + std::to_string(width) +
                                      " too small to normalize");
    }
    NormalizedHamiltonian out;
    out.e_min = e_min;
    out.e_max = e_max;
    out.matrix = (2.0 / width) * h0;
    out.matrix.diagonal().array() -= (e_max + e_min) / width;
    return out;
}

std::vector<int> parity_sectors(int n_sites) {
    const std::size_t dim = hilbert_dimension(n_sites);
    std::vector<int> out(dim);
    for (std::size_t a = 0; a < dim; ++a) out[a] = std::popcount(static_cast<std::uint64_t>(a)) % 2;
    return out;
}

EigenDecomposition diagonalize_h0(const Operator& h0) {
    const auto sectors = parity_sectors(sites_for_dimension(h0.rows()));
    return eig_hermitian_sectors(h0, sectors);
}

DiagonalizedHamiltonian normalize_and_diagonalize(const Operator& h0) {
    EigenDecomposition eig = diagonalize_h0(h0);
    const double e_min = eig.eigenvalues(0);
    const double e_max = eig.eigenvalues(eig.eigenvalues.size() - 1);
    const double width = e_max - e_min;
    if (!(width > 1e-12)) {
        throw DegenerateSpectrumError("spectral width " + std::to_string(width) +
                                      " too small to normalize");
    }
    DiagonalizedHamiltonian out;
    out.normalized.e_min = e_min;
    out.normalized.e_max = e_max;
    out.normalized.matrix = (2.0 / width) * h0;
    out.normalized.matrix.diagonal().array() -= (e_max + e_min) / width;
    eig.eigenvalues = ((2.0 * eig.eigenvalues.array() - (e_max + e_min)) / width).matrix();
    out.eig = std::move(eig);
    return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ stream);
    return splitmix64(h ^ (counter * 0xd1b54a32d192ed03ULL));
}

// Uniform on the open interval (0, 1).
double to_open_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double counter_gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const double u1 = to_open_unit(counter_hash(seed, stream, 2 * counter));
    const double u2 = to_open_unit(counter_hash(seed, stream, 2 * counter + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

ModelParams sample_realization(const ModelParams& base, const DisorderSpec& spec, std::size_t index) {
    spec.validate();
    if (index >= spec.n_realizations) {
        throw ValidationError("realization index " + std::to_string(index) + " outside [0, " +
                              std::to_string(spec.n_realizations) + ")");
    }
    ModelParams out = base;
    auto& target = spec.target == DisorderTarget::XyCouplings ? out.xy_couplings : out.zz_couplings;
    target.assign(out.n_bonds(), spec.mean);
    if (spec.sigma == 0.0) return out;
    for (std::size_t bond = 0; bond < target.size(); ++bond) {
        target[bond] = spec.mean + spec.sigma * counter_gaussian(spec.master_seed, index, bond);
    }
    return out;
}

}  // namespace qbattery
