#include "rydfloq/dynamics.hpp"

#include "rydfloq/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace rydfloq {

VectorXcd initial_state(InitialKind kind, const SpinBasis& basis, std::string_view bits) {
    const Index dim = basis.dimension();
    const int n = basis.n_sites();
    VectorXcd psi = VectorXcd::Zero(dim);
    switch (kind) {
        case InitialKind::phi0: psi[0] = 1.0; break;
        case InitialKind::all_rydberg: psi[dim - 1] = 1.0; break;
        case InitialKind::custom: psi[basis.parse(bits)] = 1.0; break;
        case InitialKind::phi1: {
            BasisIndex mask = 0;
            int plus_sites = 0;
            for (int j = 0; j < n; j += 2) {
                mask |= BasisIndex{1} << j;
                ++plus_sites;
            }
            const double amp = std::pow(0.5, 0.5 * plus_sites);
            // Enumerate every subset of the |+> sites.
            BasisIndex sub = 0;
            do {
                psi[sub] = amp;
                sub = (sub - mask) & mask;
            } while (sub != 0);
            break;
        }
    }
    return psi;
}

VectorXcd initial_state(std::string_view name, const SpinBasis& basis) {
    if (name == "phi0") return initial_state(InitialKind::phi0, basis);
    if (name == "phi1") return initial_state(InitialKind::phi1, basis);
    if (name == "all_rydberg") return initial_state(InitialKind::all_rydberg, basis);
    return initial_state(InitialKind::custom, basis, name);
}

VectorXd sigma_z_diagonal(const SpinBasis& basis, int site) {
    if (site < 1 || site > basis.n_sites()) throw InvalidArgument("site out of range");
    VectorXd d(basis.dimension());
    for (Index k = 0; k < d.size(); ++k)
        d[k] = SpinBasis::occupied(static_cast<BasisIndex>(k), site - 1) ? 1.0 : -1.0;
    return d;
}

VectorXd total_sz_diagonal(const SpinBasis& basis) {
    const int n = basis.n_sites();
    VectorXd d(basis.dimension());
    for (Index k = 0; k < d.size(); ++k)
        d[k] = (2.0 * SpinBasis::popcount(static_cast<BasisIndex>(k)) - n) / n;
    return d;
}

double sz_expectation(const VectorXcd& psi, const SpinBasis& basis) {
    if (psi.size() != basis.dimension()) throw InvalidArgument("sz_expectation: dimension mismatch");
    return psi.cwiseAbs2().dot(total_sz_diagonal(basis));
}

double site_sz(const VectorXcd& psi, const SpinBasis& basis, int site) {
    if (psi.size() != basis.dimension()) throw InvalidArgument("site_sz: dimension mismatch");
    return psi.cwiseAbs2().dot(sigma_z_diagonal(basis, site));
}

double entanglement_entropy(const VectorXcd& psi, int cut, const SpinBasis& basis) {
    const int n = basis.n_sites();
    if (cut < 1 || cut > n - 1)
        throw InvalidArgument("entanglement_entropy: cut " + std::to_string(cut) + " outside [1, " +
                              std::to_string(n - 1) + "]");
    if (psi.size() != basis.dimension())
        throw InvalidArgument("entanglement_entropy: dimension mismatch");
    const Index da = Index{1} << cut;
    const Index db = Index{1} << (n - cut);
    // Bits 0..cut-1 (the left sites) are the fast index.
    const Eigen::Map<const MatrixXcd> m(psi.data(), da, db);
    const MatrixXcd rho = da <= db ? MatrixXcd(m * m.adjoint()) : MatrixXcd(m.adjoint() * m);
    const auto eig = linalg::hermitian_eigen(rho, false);
    double s = 0.0;
    for (Index i = 0; i < eig.values.size(); ++i) {
        const double l = eig.values[i];
        if (l > 1e-14) s -= l * std::log(l);
    }
    // A pure reduced state gives -(1 - eps) ln(1 - eps), a rounding-level negative.
    return std::max(s, 0.0);
}

double page_value(int n_sites, int cut) {
    if (n_sites < 2 || n_sites % 2 != 0 || cut != n_sites / 2)
        throw InvalidArgument("page_value: only the half-chain cut of an even chain is defined");
    return cut * std::numbers::ln2 - 0.5;
}

double energy_avg(const VectorXcd& psi, const DriveParams& p, const VectorXd& h2_diag) {
    return psi.dot(apply_averaged_hamiltonian(p, h2_diag, psi)).real();
}

VectorXcd apply_sigma_x(const VectorXcd& psi, int site) {
    const Index flip = Index{1} << (site - 1);
    VectorXcd out(psi.size());
    for (Index k = 0; k < psi.size(); ++k) out[k] = psi[k ^ flip];
    return out;
}

VectorXcd apply_sigma_z(const VectorXcd& psi, int site) {
    const Index bit = Index{1} << (site - 1);
    VectorXcd out(psi.size());
    for (Index k = 0; k < psi.size(); ++k) out[k] = (k & bit) ? psi[k] : -psi[k];
    return out;
}

namespace {

void check_times(const std::vector<long>& times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0) throw InvalidArgument("evolve: negative period index");
        if (i > 0 && times[i] <= times[i - 1])
            throw InvalidArgument("evolve: period indices must be strictly ascending");
    }
}

}  // namespace

DenseEvolver::DenseEvolver(MatrixXcd u, int n_sites) : u_(std::move(u)), n_sites_(n_sites) {
    if (u_.rows() != u_.cols() || u_.rows() != (Index{1} << n_sites))
        throw InvalidArgument("DenseEvolver: matrix does not match the chain");
}

void DenseEvolver::evolve(const std::vector<VectorXcd>& initial, const std::vector<long>& times,
                          const Visitor& visit) const {
    check_times(times);
    std::vector<VectorXcd> states = initial;
    for (const auto& s : states)
        if (s.size() != u_.rows()) throw InvalidArgument("DenseEvolver: state dimension mismatch");
    long n = 0;
    VectorXcd tmp;
    for (long t : times) {
        for (; n < t; ++n) {
            for (auto& s : states) {
                tmp.noalias() = u_ * s;
                s.swap(tmp);
            }
        }
        visit(t, states);
    }
}

SpectralEvolver::SpectralEvolver(const DriveParams& p, bool use_parity)
    : params_(p), use_parity_(use_parity), blocks_(SpinBasis(p.n_sites)) {
    p.validate();
}

const FloquetSpectrum& SpectralEvolver::spectrum(Sector s) const {
    if (use_parity_ == (s == Sector::full))
        throw InvalidArgument("SpectralEvolver: sector not used by this evolver");
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(s);
    if (it == cache_.end())
        it = cache_.emplace(s, std::make_shared<const FloquetSpectrum>(floquet_spectrum(params_, s)))
                 .first;
    return *it->second;
}

void SpectralEvolver::evolve(const std::vector<VectorXcd>& initial, const std::vector<long>& times,
                             const Visitor& visit) const {
    check_times(times);
    const auto ninit = static_cast<Index>(initial.size());
    const Index dim = blocks_.dimension();
    for (const auto& s : initial)
        if (s.size() != dim) throw InvalidArgument("SpectralEvolver: state dimension mismatch");

    struct Part {
        Sector sector;
        const FloquetSpectrum* spec;
        MatrixXcd c0;  // eigenbasis coefficients, one column per initial state
    };
    std::vector<Part> parts;
    const std::vector<Sector> sectors =
        use_parity_ ? std::vector<Sector>{Sector::even, Sector::odd} : std::vector<Sector>{Sector::full};
    for (Sector s : sectors) {
        MatrixXcd comp(blocks_.sector_dim(s), ninit);
        for (Index i = 0; i < ninit; ++i) comp.col(i) = blocks_.to_sector(initial[static_cast<std::size_t>(i)], s);
        if (comp.size() == 0 || comp.cwiseAbs().maxCoeff() == 0.0) continue;
        const FloquetSpectrum& spec = spectrum(s);
        parts.push_back({s, &spec, spec.vectors.apply_adjoint(comp)});
    }

    const Index batch = std::max<Index>(1, 256 / std::max<Index>(1, ninit));
    std::vector<VectorXcd> states(static_cast<std::size_t>(ninit));
    for (std::size_t first = 0; first < times.size(); first += static_cast<std::size_t>(batch)) {
        const auto count = static_cast<Index>(std::min<std::size_t>(batch, times.size() - first));
        std::vector<MatrixXcd> psi_parts;
        psi_parts.reserve(parts.size());
        for (const auto& part : parts) {
            const VectorXd& theta = part.spec->phases;
            MatrixXcd c(theta.size(), count * ninit);
            for (Index b = 0; b < count; ++b) {
                const auto t = static_cast<double>(times[first + static_cast<std::size_t>(b)]);
                VectorXcd lam(theta.size());
                for (Index k = 0; k < theta.size(); ++k) lam[k] = std::polar(1.0, -theta[k] * t);
                for (Index i = 0; i < ninit; ++i) c.col(b * ninit + i) = lam.cwiseProduct(part.c0.col(i));
            }
            psi_parts.push_back(part.spec->vectors.apply(c));
        }
        for (Index b = 0; b < count; ++b) {
            for (Index i = 0; i < ninit; ++i) {
                auto& st = states[static_cast<std::size_t>(i)];
                st.setZero(dim);
                for (std::size_t q = 0; q < parts.size(); ++q)
                    blocks_.add_from_sector(psi_parts[q].col(b * ninit + i), parts[q].sector, st);
            }
            visit(times[first + static_cast<std::size_t>(b)], states);
        }
    }
}

std::string Observable::tag(int n_sites) const {
    switch (kind) {
        case ObservableKind::sz: return "sz";
        case ObservableKind::energy_avg: return "energy_avg";
        case ObservableKind::entropy:
            return site == 0 || site == n_sites / 2 ? "entropy_half" : "entropy:" + std::to_string(site);
        case ObservableKind::edge: return "edge";
        case ObservableKind::autocorr: return "autocorr:" + std::to_string(site);
        case ObservableKind::autocorr_global: return "autocorr_global";
        case ObservableKind::norm: return "norm";
    }
    return "?";
}

namespace {

int parse_site_suffix(std::string_view tag, std::size_t colon) {
    const std::string num(tag.substr(colon + 1));
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(num, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (num.empty() || used != num.size())
        throw InvalidArgument("bad site index in observable '" + std::string(tag) + "'");
    return v;
}

}  // namespace

Observable parse_observable(std::string_view tag) {
    if (tag == "sz") return {ObservableKind::sz, 0};
    if (tag == "energy_avg") return {ObservableKind::energy_avg, 0};
    if (tag == "entropy_half") return {ObservableKind::entropy, 0};
    if (tag == "edge") return {ObservableKind::edge, 0};
    if (tag == "autocorr_global") return {ObservableKind::autocorr_global, 0};
    if (tag == "norm") return {ObservableKind::norm, 0};
    const auto colon = tag.find(':');
    if (colon != std::string_view::npos) {
        const auto head = tag.substr(0, colon);
        if (head == "entropy") return {ObservableKind::entropy, parse_site_suffix(tag, colon)};
        if (head == "autocorr") return {ObservableKind::autocorr, parse_site_suffix(tag, colon)};
    }
    throw InvalidArgument("unknown observable '" + std::string(tag) + "'");
}

std::vector<long> sample_times(long n_periods, long stride) {
    if (n_periods < 0) throw InvalidArgument("n_periods must be >= 0");
    if (stride < 1) throw InvalidArgument("stride must be >= 1");
    std::vector<long> t;
    for (long n = 0; n <= n_periods; n += stride) t.push_back(n);
    if (t.back() != n_periods) t.push_back(n_periods);
    return t;
}

std::vector<ObservableSeries> run_dynamics(const Evolver& evolver, const DriveParams& p,
                                           const VectorXcd& psi0, const std::vector<long>& times,
                                           const std::vector<Observable>& observables) {
    const int n = p.n_sites;
    if (evolver.n_sites() != n) throw InvalidArgument("run_dynamics: evolver and parameters disagree");
    const SpinBasis basis(n);
    if (psi0.size() != basis.dimension()) throw InvalidArgument("run_dynamics: state dimension mismatch");

    // The correlators propagate a second vector O psi(0) alongside psi(0).
    std::vector<VectorXcd> inits{psi0};
    std::vector<std::size_t> partner(observables.size(), 0);
    const VectorXd sz_total = total_sz_diagonal(basis);
    for (std::size_t o = 0; o < observables.size(); ++o) {
        const auto& ob = observables[o];
        switch (ob.kind) {
            case ObservableKind::edge:
                inits.push_back(apply_sigma_x(psi0, 1));
                partner[o] = inits.size() - 1;
                break;
            case ObservableKind::autocorr:
                if (ob.site < 1 || ob.site > n) throw InvalidArgument("autocorr: site out of range");
                inits.push_back(apply_sigma_z(psi0, ob.site));
                partner[o] = inits.size() - 1;
                break;
            case ObservableKind::autocorr_global:
                inits.push_back(sz_total.cast<cplx>().cwiseProduct(psi0));
                partner[o] = inits.size() - 1;
                break;
            case ObservableKind::entropy: {
                const int cut = ob.site == 0 ? n / 2 : ob.site;
                if (cut < 1 || cut > n - 1) throw InvalidArgument("entropy: cut out of range");
                break;
            }
            default: break;
        }
    }

    std::vector<ObservableSeries> out(observables.size());
    for (std::size_t o = 0; o < observables.size(); ++o) {
        out[o].tag = observables[o].tag(n);
        out[o].period.reserve(times.size());
        out[o].values.reserve(times.size());
    }
    const VectorXd h2 = build_h2_diagonal(p);

    evolver.evolve(inits, times, [&](long t, const std::vector<VectorXcd>& st) {
        const VectorXcd& psi = st[0];
        for (std::size_t o = 0; o < observables.size(); ++o) {
            const auto& ob = observables[o];
            double v = 0.0;
            switch (ob.kind) {
                case ObservableKind::sz: v = psi.cwiseAbs2().dot(sz_total); break;
                case ObservableKind::energy_avg: v = energy_avg(psi, p, h2); break;
                case ObservableKind::entropy:
                    v = entanglement_entropy(psi, ob.site == 0 ? n / 2 : ob.site, basis);
                    break;
                case ObservableKind::edge: v = std::abs(psi.dot(apply_sigma_x(st[partner[o]], 1))); break;
                case ObservableKind::autocorr:
                    v = psi.dot(apply_sigma_z(st[partner[o]], ob.site)).real();
                    break;
                case ObservableKind::autocorr_global:
                    v = psi.dot(sz_total.cast<cplx>().cwiseProduct(st[partner[o]])).real();
                    break;
                case ObservableKind::norm: v = psi.norm(); break;
            }
            out[o].period.push_back(t);
            out[o].values.push_back(v);
        }
    });
    return out;
}

std::vector<ObservableSeries> stroboscopic_evolve(const MatrixXcd& u, const DriveParams& p,
                                                  const VectorXcd& psi0, long n_periods,
                                                  const std::vector<Observable>& observables) {
    const DenseEvolver ev(u, p.n_sites);
    return run_dynamics(ev, p, psi0, sample_times(n_periods, 1), observables);
}

ObservableSeries edge_correlator(const Evolver& evolver, const VectorXcd& psi0,
                                 const std::vector<long>& times) {
    ObservableSeries s;
    s.tag = "edge";
    evolver.evolve({psi0, apply_sigma_x(psi0, 1)}, times, [&](long t, const std::vector<VectorXcd>& st) {
        s.period.push_back(t);
        s.values.push_back(std::abs(st[0].dot(apply_sigma_x(st[1], 1))));
    });
    return s;
}

ObservableSeries autocorrelation(const Evolver& evolver, const VectorXcd& psi0, int site,
                                 const std::vector<long>& times) {
    if (site < 1 || site > evolver.n_sites()) throw InvalidArgument("autocorrelation: site out of range");
    ObservableSeries s;
    s.tag = "autocorr:" + std::to_string(site);
    evolver.evolve({psi0, apply_sigma_z(psi0, site)}, times,
                   [&](long t, const std::vector<VectorXcd>& st) {
                       s.period.push_back(t);
                       s.values.push_back(st[0].dot(apply_sigma_z(st[1], site)).real());
                   });
    return s;
}

WindowStats window_average(const ObservableSeries& s, long lo, long hi) {
    WindowStats w;
    double sum = 0.0;
    for (std::size_t i = 0; i < s.period.size(); ++i) {
        if (s.period[i] < lo || s.period[i] > hi) continue;
        sum += s.values[i];
        ++w.count;
    }
    if (w.count == 0) throw InvalidArgument("window_average: no samples in [" + std::to_string(lo) +
                                            ", " + std::to_string(hi) + "]");
    w.mean = sum / static_cast<double>(w.count);
    double ss = 0.0;
    for (std::size_t i = 0; i < s.period.size(); ++i)
        if (s.period[i] >= lo && s.period[i] <= hi) ss += (s.values[i] - w.mean) * (s.values[i] - w.mean);
    w.stddev = w.count > 1 ? std::sqrt(ss / static_cast<double>(w.count - 1)) : 0.0;
    return w;
}

double mazur_bound(const MatrixXcd& a, const FloquetSpectrum& spec) {
    if (!spec.has_vectors()) throw InvalidArgument("mazur_bound: spectrum has no eigenvectors");
    if (a.rows() != spec.vectors.rows() || a.cols() != spec.vectors.rows())
        throw InvalidArgument("mazur_bound: operator and eigenvectors have different dimensions");
    double acc = 0.0;
    spec.vectors.for_each_block(256, [&](Index, const MatrixXcd& v) {
        const MatrixXcd av = a * v;
        for (Index c = 0; c < v.cols(); ++c) acc += std::norm(v.col(c).dot(av.col(c)));
    });
    return acc / static_cast<double>(spec.vectors.cols());
}

double mazur_bound(const VectorXd& a_diag, const std::vector<const FloquetSpectrum*>& spectra,
                   const ParityBlocks& blocks) {
    if (a_diag.size() != blocks.dimension()) throw InvalidArgument("mazur_bound: dimension mismatch");
    double acc = 0.0;
    Index total = 0;
    for (const FloquetSpectrum* spec : spectra) {
        if (!spec->has_vectors()) throw InvalidArgument("mazur_bound: spectrum has no eigenvectors");
        const Sector s = spec->sector;
        // A sector vector u has full-space weights |u_i|^2 on a palindrome and
        // |u_i|^2 / 2 on each member of a pair.
        VectorXd abar(blocks.sector_dim(s));
        if (s == Sector::full) {
            abar = a_diag;
        } else {
            for (Index i = 0; i < abar.size(); ++i) {
                const auto& o = blocks.orbit(s, i);
                abar[i] = 0.5 * (a_diag[o.first] + a_diag[o.second]);
            }
        }
        if (abar.size() != spec->vectors.rows()) throw InvalidArgument("mazur_bound: sector mismatch");
        spec->vectors.for_each_block(256, [&](Index, const MatrixXcd& v) {
            const VectorXd e = v.cwiseAbs2().transpose() * abar;
            acc += e.squaredNorm();
        });
        total += spec->vectors.cols();
    }
    if (total == 0) throw InvalidArgument("mazur_bound: no eigenstates");
    return acc / static_cast<double>(total);
}

Projections pca_projections(const VectorXcd& psi, const FloquetSpectrum& spec,
                            const ParityBlocks& blocks) {
    if (!spec.has_vectors()) throw InvalidArgument("pca_projections: spectrum has no eigenvectors");
    if (psi.size() != blocks.dimension()) throw InvalidArgument("pca_projections: dimension mismatch");
    Projections out;
    out.basis_weights = psi.cwiseAbs2();
    const VectorXcd part = blocks.to_sector(psi, spec.sector);
    out.eigen_weights = spec.vectors.apply_adjoint(part).col(0).cwiseAbs2();
    return out;
}

EntropyMap eigenstate_entropy_map(const FloquetSpectrum& spec, const ParityBlocks& blocks) {
    if (!spec.has_vectors()) throw InvalidArgument("eigenstate_entropy_map: spectrum has no eigenvectors");
    const int n = blocks.n_sites();
    const double page = page_value(n, n / 2);
    const SpinBasis basis(n);
    EntropyMap out;
    out.phases = spec.phases;
    out.entropies.resize(spec.size());
    Index low = 0;
    spec.vectors.for_each_block(128, [&](Index first, const MatrixXcd& v) {
        for (Index c = 0; c < v.cols(); ++c) {
            const VectorXcd full = blocks.from_sector(v.col(c), spec.sector);
            const double s = entanglement_entropy(full, n / 2, basis);
            out.entropies[first + c] = s;
            if (s < 0.5 * page) ++low;
        }
    });
    out.low_fraction = static_cast<double>(low) / static_cast<double>(spec.size());
    return out;
}

}  // namespace rydfloq
