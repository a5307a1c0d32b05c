#include "verify/suites.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <sstream>

#include "errors.hpp"
#include "lepage/exponent.hpp"
#include "quad/quadrature.hpp"
#include "quad/special.hpp"
#include "verify/calibrate.hpp"
#include "verify/ecf.hpp"

namespace stablecone {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream id layout. Batch streams live at base + batch index; bases are
// 1000 apart and batches are capped at 500, so streams never collide.
constexpr std::uint64_t kStreamStabilityA = 0;
constexpr std::uint64_t kStreamStabilityB = 1000;
constexpr std::uint64_t kStreamStabilitySum = 2000;
constexpr std::uint64_t kStreamStabilityCal = 2999;
constexpr std::uint64_t kStreamPhi = 3000;
constexpr std::uint64_t kStreamPhiCal = 3999;
constexpr std::uint64_t kStreamHomogeneity = 4000;
constexpr std::uint64_t kStreamCmsSeries = 5000;
constexpr std::uint64_t kStreamCmsExact = 6000;
constexpr std::uint64_t kStreamCmsCal = 6999;
constexpr std::uint64_t kStreamEps = 7000;

void check_suite_config(const SuiteConfig& cfg) {
    if (cfg.batches < 2 || cfg.batches > 500) throw DomainError("batches must lie in [2, 500]");
    if (cfg.n < cfg.batches) throw DomainError("n must be at least the batch count");
    if (!(cfg.truncation_r > 0.0) || !std::isfinite(cfg.truncation_r))
        throw DomainError("truncation level must be positive and finite");
    if (cfg.permutations < 50) throw DomainError("need at least 50 calibration resamples");
    if (!(cfg.level > 0.0 && cfg.level < 0.5)) throw DomainError("level must lie in (0, 0.5)");
}

std::size_t usable_n(const SuiteConfig& cfg) { return (cfg.n / cfg.batches) * cfg.batches; }

double sum_abs_freq(const Character& chi) {
    double s = 0.0;
    for (const auto& t : chi.phase_terms()) s += std::abs(t.freq);
    return s;
}

double sum_sq_freq(const Character& chi) {
    double s = 0.0;
    for (const auto& t : chi.phase_terms()) s += t.freq * t.freq;
    return s;
}

double min_threshold(const Character& chi) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : chi.cutoffs()) m = std::min(m, c.threshold);
    return m;
}

double sum_amplitude(const Character& chi) {
    double s = 0.0;
    for (const auto& t : chi.tents()) s += t.amplitude;
    return s;
}

double sum_decay_weight(const Character& chi) {
    double s = 0.0;
    for (double w : chi.decay_weights()) s += w;
    return s;
}

// rate * integral_{r_eff}^inf gamma^(-mu/alpha) dgamma; NaN unless mu > alpha
double tail_moment(double rate, double r_eff, double alpha, double mu) {
    if (!(mu > alpha)) return kNaN;
    return rate * alpha / (mu - alpha) * std::pow(r_eff, (alpha - mu) / alpha);
}

double operator_contraction_rate(const ConeDescriptor& desc) {
    if (desc.matrix.dim() == 0) return kNaN;
    return sym_part_min_eigenvalue(desc.matrix);
}

// Time reparametrization by `factor` is exact for a character only when
// every grid point the character reads maps onto a grid point that is still
// inside the grid; otherwise the step interpolant substitutes the value at
// the next point down (or clamps at the end) and the scaling identity the
// suites rely on fails by an amount the allowances do not cover.
bool grid_reads_exact(const ConeDescriptor& desc, const Character& chi, double factor) {
    if (desc.scaling != ScalingKind::TimeReparam || factor == 1.0) return true;
    std::vector<std::size_t> reads;
    for (const auto& t : chi.phase_terms()) reads.push_back(t.index);
    for (const auto& c : chi.cutoffs()) reads.push_back(c.index);
    for (std::size_t i = 0; i < chi.decay_weights().size(); ++i)
        if (chi.decay_weights()[i] != 0.0) reads.push_back(i);
    const std::vector<double>& pts = desc.grid->points();
    for (std::size_t idx : reads) {
        const double target = factor * pts.at(idx);
        if (target > pts.back() * (1.0 + Grid::kSnapRel)) return false;
        bool hit = false;
        for (double g : pts)
            if (std::abs(target - g) <= Grid::kSnapRel * std::max(g, 1.0)) {
                hit = true;
                break;
            }
        if (!hit) return false;
    }
    return true;
}

// Envelope |E[1 - chi(t eps)]| <= amp * t^power for t in (0, 1], and = 0
// for t < onset. amp = NaN when no bound is available.
struct Envelope {
    double amp = kNaN;
    double power = 0.0;
    double onset = 0.0;
};

Envelope small_t_envelope(const ConeDescriptor& desc, const SpectralSampler& sp,
                          const Character& chi) {
    Envelope env;
    switch (chi.family()) {
        case Character::Family::Fourier: {
            const double u1 = sum_abs_freq(chi);
            if (desc.scaling == ScalingKind::Multiplicative) {
                if (sp.symmetric && std::isfinite(sp.mean_square)) {
                    env.amp = 0.5 * sp.mean_square * sum_sq_freq(chi);
                    env.power = 2.0;
                } else if (std::isfinite(sp.mean_abs)) {
                    env.amp = u1 * sp.mean_abs;
                    env.power = 1.0;
                }
            } else if (desc.scaling == ScalingKind::OperatorExp) {
                const double mu = operator_contraction_rate(desc);
                if (!(mu > 0.0)) return env;
                if (sp.symmetric && std::isfinite(sp.mean_square)) {
                    env.amp =
                        0.5 * u1 * u1 * static_cast<double>(sp.width) * sp.mean_square;
                    env.power = 2.0 * mu;
                } else if (std::isfinite(sp.mean_norm)) {
                    env.amp = u1 * sp.mean_norm;
                    env.power = mu;
                }
            } else if (desc.scaling == ScalingKind::TimeReparam) {
                if (!std::isfinite(sp.sup_bound) || !desc.grid) return env;
                double s_max = 0.0;
                for (const auto& t : chi.phase_terms())
                    s_max = std::max(s_max, desc.grid->points()[t.index]);
                if (!(s_max > 0.0)) {
                    env.amp = 0.0;
                    return env;
                }
                const double b = u1 * sp.sup_bound;
                env.amp = std::min(2.0, 0.5 * b * b);
                env.power = 0.0;
                env.onset = desc.grid->first_positive() / s_max;
            }
            return env;
        }
        case Character::Family::ExpDecay:
            if (desc.scaling == ScalingKind::Multiplicative && std::isfinite(sp.mean_abs)) {
                env.amp = sum_decay_weight(chi) * sp.mean_abs;
                env.power = 1.0;
            }
            return env;
        case Character::Family::Laplace:
            if (desc.scaling == ScalingKind::WeightScaling && std::isfinite(sp.sup_bound)) {
                env.amp = sum_amplitude(chi) * sp.sup_bound;
                env.power = 1.0;
            }
            return env;
        case Character::Family::Indicator:
            if (desc.op == SemigroupOp::PointwiseMax && std::isfinite(sp.sup_bound) &&
                sp.sup_bound > 0.0) {
                env.amp = 1.0;
                env.power = 0.0;
                env.onset = min_threshold(chi) / sp.sup_bound;
            }
            return env;
    }
    return env;
}

std::string mutation_note(const SuiteConfig& cfg) { return mutation_name(cfg.mutation); }

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

VerificationReport base_report(const char* name, const WiredCone& cone, const SuiteConfig& cfg,
                               std::size_t n) {
    VerificationReport rep;
    rep.name = name;
    rep.cone = cone.spec.kind;
    rep.n = n;
    rep.truncation_r = cfg.truncation_r;
    rep.alpha = cone.spec.alpha;
    rep.master_seed = cfg.master_seed;
    rep.mutation = mutation_note(cfg);
    return rep;
}

void fill_calibrated(VerificationReport& rep, const CalibratedMaxStat& st,
                     const std::vector<Character>& probes, const std::vector<std::size_t>& keep,
                     const std::vector<double>& allow,
                     const std::vector<std::string>& block = {}) {
    rep.passed = st.passed;
    rep.statistic = st.statistic;
    rep.threshold = st.threshold;
    rep.p_value = st.p_value;
    std::vector<std::size_t> pos(probes.size(), keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j) pos[keep[j]] = j;
    for (std::size_t p = 0; p < probes.size(); ++p) {
        ProbeReportRow row;
        row.label = probes[p].label();
        row.allowance = allow[p];
        if (pos[p] == keep.size()) {
            row.excluded = true;
            row.note = (p < block.size() && !block[p].empty()) ? block[p]
                                                               : "no finite truncation allowance";
        } else {
            row.statistic = st.probe_stats[pos[p]];
            row.abs_delta = st.probe_abs_delta[pos[p]];
            row.std_error = st.probe_se[pos[p]];
        }
        rep.probes.push_back(std::move(row));
    }
}

} // namespace

std::string mutation_name(Mutation m) {
    switch (m) {
        case Mutation::None: return "none";
        case Mutation::RadialExponentOne: return "radial_exponent_one";
        case Mutation::RadialAlphaDoubled: return "radial_alpha_doubled";
    }
    throw ContractViolation("unknown mutation");
}

double c_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw DomainError("scale constant is defined for alpha in (0, 2)");
    static std::mutex mu;
    static std::map<double, double> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(alpha);
        if (it != cache.end()) return it->second;
    }
    const double s = 1e-8;
    const double T = 1000.0;
    auto f = [alpha](double t) {
        const double h = std::sin(0.5 * t);
        return alpha * 2.0 * h * h * std::pow(t, -alpha - 1.0);
    };
    QuadConfig qc;
    qc.tol_per_interval = 1e-14;
    qc.max_depth = 60;
    qc.max_evals = 8000000;
    const QuadResult q = integrate_log_sub(f, s, T, qc);
    if (!q.converged) throw ContractViolation("scale constant quadrature did not converge");
    // int_0^s: 1 - cos t <= t^2/2 and >= t^2/2 (1 - s^2/12), so the
    // quadratic approximation is exact to relative s^2/12 ~ 1e-17
    const double lower = alpha * std::pow(s, 2.0 - alpha) / (2.0 * (2.0 - alpha));
    // int_T^inf by four integrations by parts; the dropped remainder is
    // bounded by alpha (alpha+1) (alpha+2) (alpha+3) T^(-alpha-4) <= 1.2e-16
    const double p = alpha + 1.0;
    const double upper = std::pow(T, -alpha) + alpha * std::sin(T) * std::pow(T, -p) -
                         alpha * p * std::cos(T) * std::pow(T, -p - 1.0) -
                         alpha * p * (p + 1.0) * std::sin(T) * std::pow(T, -p - 2.0) +
                         alpha * p * (p + 1.0) * (p + 2.0) * std::cos(T) * std::pow(T, -p - 3.0);
    const double value = q.value + lower + upper;
    {
        std::lock_guard<std::mutex> lock(mu);
        cache.emplace(alpha, value);
    }
    return value;
}

double cms_standard_sample(double alpha, RngStream& rng) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw DomainError("exact stable sampler is defined for alpha in (0, 2)");
    const double u = kPi * (rng.uniform01() - 0.5);
    const double w = std::max(rng.exp1(), 1e-300);
    const double lead = std::sin(alpha * u) / std::pow(std::cos(u), 1.0 / alpha);
    const double rest = std::pow(std::cos((1.0 - alpha) * u) / w, (1.0 - alpha) / alpha);
    return lead * rest;
}

double ecf_truncation_allowance(const ConeDescriptor& desc, const SpectralSampler& spectral,
                                const Character& chi, double alpha, double rate, double r,
                                double value_scale) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("rate must be positive and finite");
    if (!(r > 0.0) || !std::isfinite(r))
        throw DomainError("truncation level must be positive and finite");
    if (!(value_scale > 0.0) || !std::isfinite(value_scale))
        throw DomainError("value scale must be positive and finite");
    const double r_eff = r / rate;
    if (!(r_eff >= 1.0)) return kNaN;
    const double vs = value_scale;
    switch (chi.family()) {
        case Character::Family::Fourier: {
            const double u1 = sum_abs_freq(chi);
            if (desc.scaling == ScalingKind::Multiplicative) {
                if (spectral.symmetric && std::isfinite(spectral.mean_square)) {
                    const double coef = spectral.mean_square * sum_sq_freq(chi) * vs * vs;
                    return std::min(2.0, 0.5 * coef * tail_moment(rate, r_eff, alpha, 2.0));
                }
                if (std::isfinite(spectral.mean_abs))
                    return std::min(2.0, u1 * spectral.mean_abs * vs *
                                             tail_moment(rate, r_eff, alpha, 1.0));
                return kNaN;
            }
            if (desc.scaling == ScalingKind::OperatorExp) {
                const double mu = operator_contraction_rate(desc);
                if (!(mu > 0.0)) return kNaN;
                if (spectral.symmetric && std::isfinite(spectral.mean_square)) {
                    const double coef = u1 * u1 * static_cast<double>(spectral.width) *
                                        spectral.mean_square * vs * vs;
                    return std::min(2.0, 0.5 * coef * tail_moment(rate, r_eff, alpha, 2.0 * mu));
                }
                if (std::isfinite(spectral.mean_norm))
                    return std::min(2.0, u1 * spectral.mean_norm * vs *
                                             tail_moment(rate, r_eff, alpha, mu));
                return kNaN;
            }
            if (desc.scaling == ScalingKind::TimeReparam) {
                if (!std::isfinite(spectral.sup_bound)) return kNaN;
                const double b = u1 * spectral.sup_bound * vs;
                if (spectral.symmetric)
                    return std::min(2.0, 0.5 * b * b * tail_moment(rate, r_eff, alpha, 2.0));
                return std::min(2.0, b * tail_moment(rate, r_eff, alpha, 1.0));
            }
            return kNaN;
        }
        case Character::Family::ExpDecay:
            if (desc.scaling == ScalingKind::Multiplicative && std::isfinite(spectral.mean_abs))
                return std::min(1.0, sum_decay_weight(chi) * spectral.mean_abs * vs *
                                         tail_moment(rate, r_eff, alpha, 1.0));
            return kNaN;
        case Character::Family::Laplace:
            if (desc.scaling == ScalingKind::WeightScaling && std::isfinite(spectral.sup_bound))
                return std::min(1.0, sum_amplitude(chi) * spectral.sup_bound * vs *
                                         tail_moment(rate, r_eff, alpha, 1.0));
            return kNaN;
        case Character::Family::Indicator: {
            if (desc.op != SemigroupOp::PointwiseMax || !std::isfinite(spectral.sup_bound) ||
                !(spectral.sup_bound > 0.0))
                return kNaN;
            const double amin = min_threshold(chi);
            // a tail arrival g > r_eff changes the probe only if its weight
            // g^(-1/alpha) vs sup can reach the smallest threshold
            const double cut = std::pow(amin / (spectral.sup_bound * vs), -alpha);
            const double lam = rate * std::max(0.0, cut - r_eff);
            return -std::expm1(-lam);
        }
    }
    return kNaN;
}

double phi_shift_allowance(const ConeDescriptor& desc, const SpectralSampler& spectral,
                           const Character& chi, double alpha, double a, double r) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("scale must be positive and finite");
    if (!(r > 0.0) || !std::isfinite(r))
        throw DomainError("truncation level must be positive and finite");
    if (a == 1.0) return 0.0;
    const double t1 = std::pow(r, -1.0 / alpha);
    const double hi = std::max(t1, a * t1);
    if (!(hi <= 1.0)) return kNaN;
    const Envelope env = small_t_envelope(desc, spectral, chi);
    if (!std::isfinite(env.amp)) return kNaN;
    if (env.amp == 0.0) return 0.0;
    double lo = std::min(t1, a * t1);
    lo = std::max(lo, env.onset);
    if (!(lo < hi)) return 0.0;
    const double p = env.power - alpha;
    double integral;
    if (std::abs(p) < 1e-12)
        integral = env.amp * alpha * std::log(hi / lo);
    else
        integral = env.amp * alpha / p * (std::pow(hi, p) - std::pow(lo, p));
    return std::pow(a, alpha) * integral;
}

VerificationReport stability_test(const WiredCone& cone, const SuiteConfig& cfg) {
    check_suite_config(cfg);
    const ConeDescriptor& desc = cone.descriptor;
    const double alpha = cone.spec.alpha;
    const double a = cfg.stability_a;
    const double b = cfg.stability_b;
    if (!(a > 0.0 && b > 0.0) || !std::isfinite(a + b))
        throw DomainError("stability weights must be positive and finite");
    const SpectralSampler spectral = make_spectral(desc, cone.spec.spectral);
    const RadialLaw law(alpha);
    const std::size_t nb = usable_n(cfg);
    const std::size_t per = nb / cfg.batches;
    const double sa = std::pow(a, 1.0 / alpha);
    const double sb = std::pow(b, 1.0 / alpha);
    const double sab = std::pow(a + b, 1.0 / alpha);

    EcfAccumulator combined(cone.probes, nb, cfg.batches);
    EcfAccumulator pooled(cone.probes, nb, cfg.batches);
    SeriesOptions opts;
    opts.truncation_r = cfg.truncation_r;
    opts.mutation = cfg.mutation;
    for (std::size_t bt = 0; bt < cfg.batches; ++bt) {
        RngStream r1(cfg.master_seed, kStreamStabilityA + bt);
        RngStream r2(cfg.master_seed, kStreamStabilityB + bt);
        RngStream r3(cfg.master_seed, kStreamStabilitySum + bt);
        for (std::size_t i = 0; i < per; ++i) {
            const SeriesSample x = sample_series(desc, law, spectral, opts, r1);
            const SeriesSample y = sample_series(desc, law, spectral, opts, r2);
            combined.add(add(desc, scale(desc, sa, x.value), scale(desc, sb, y.value)));
            const SeriesSample z = sample_series(desc, law, spectral, opts, r3);
            pooled.add(scale(desc, sab, z.value));
        }
    }

    std::vector<double> allow(cone.probes.size(), kNaN);
    std::vector<std::string> block(cone.probes.size());
    std::vector<std::size_t> keep;
    for (std::size_t p = 0; p < cone.probes.size(); ++p) {
        for (double f : {sa, sb, sab}) {
            if (!grid_reads_exact(desc, cone.probes[p], f)) {
                block[p] = "time reparametrization by " + fmt(f) + " reads off the grid";
                break;
            }
        }
        const double va =
            ecf_truncation_allowance(desc, spectral, cone.probes[p], alpha, a, cfg.truncation_r, 1.0);
        const double vb =
            ecf_truncation_allowance(desc, spectral, cone.probes[p], alpha, b, cfg.truncation_r, 1.0);
        const double vab = ecf_truncation_allowance(desc, spectral, cone.probes[p], alpha, a + b,
                                                    cfg.truncation_r, 1.0);
        allow[p] = va + vb + vab;
        if (std::isfinite(allow[p]) && block[p].empty()) keep.push_back(p);
    }
    if (keep.empty())
        throw DomainError(
            "no usable probe: each lacks a truncation allowance or reads off the grid under "
            "these weights (on dyadic grids pick weights whose combined scale is dyadic)");

    const BatchTable t1 = combined.table();
    const BatchTable t2 = pooled.table();
    BatchTable k1, k2;
    std::vector<double> ka;
    for (std::size_t idx : keep) {
        k1.push_back(t1[idx]);
        k2.push_back(t2[idx]);
        ka.push_back(allow[idx]);
    }
    RngStream cal(cfg.master_seed, kStreamStabilityCal);
    const CalibratedMaxStat st =
        two_sample_calibrated(k1, k2, ka, cfg.level, cfg.permutations, cal);

    VerificationReport rep = base_report("stability", cone, cfg, nb);
    rep.notes = "a=" + fmt(a) + " b=" + fmt(b) + " permutations=" + fmt(double(cfg.permutations));
    fill_calibrated(rep, st, cone.probes, keep, allow, block);
    return rep;
}

VerificationReport phi_homogeneity_test(const WiredCone& cone, const SuiteConfig& cfg) {
    check_suite_config(cfg);
    if (cfg.phi_scales.empty()) throw DomainError("need at least one exponent scale");
    for (double s : cfg.phi_scales)
        if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("exponent scales must be positive");
    const ConeDescriptor& desc = cone.descriptor;
    const double alpha = cone.spec.alpha;
    const SpectralSampler spectral = make_spectral(desc, cone.spec.spectral);
    const RadialLaw law(alpha);
    const std::size_t nb = usable_n(cfg);
    const std::size_t per = nb / cfg.batches;
    const std::size_t n_probes = cone.probes.size();
    const std::size_t n_scales = cfg.phi_scales.size();

    EcfAccumulator base(cone.probes, nb, cfg.batches);
    std::vector<EcfAccumulator> scaled;
    scaled.reserve(n_scales);
    for (std::size_t j = 0; j < n_scales; ++j) scaled.emplace_back(cone.probes, nb, cfg.batches);

    constexpr std::size_t kOrbitStore = 2000;
    std::vector<ConeElement> stored;
    stored.reserve(kOrbitStore);

    SeriesOptions opts;
    opts.truncation_r = cfg.truncation_r;
    opts.mutation = cfg.mutation;
    for (std::size_t bt = 0; bt < cfg.batches; ++bt) {
        RngStream rs(cfg.master_seed, kStreamPhi + bt);
        for (std::size_t i = 0; i < per; ++i) {
            const SeriesSample x = sample_series(desc, law, spectral, opts, rs);
            base.add(x.value);
            for (std::size_t j = 0; j < n_scales; ++j)
                scaled[j].add(scale(desc, cfg.phi_scales[j], x.value));
            if (stored.size() < kOrbitStore) stored.push_back(x.value);
        }
    }

    // exponent estimates need the ecf bounded away from zero along the whole
    // dyadic contraction orbit, otherwise the principal logarithm is
    // untrustworthy; scan t = 2^-20 .. 2^-1 on a stored subsample
    std::vector<double> orbit_min(n_probes, 1.0);
    for (int k = -20; k <= -1; ++k) {
        const double t = std::ldexp(1.0, k);
        std::vector<double> acc(n_probes, 0.0);
        for (const ConeElement& x : stored) {
            const ConeElement sx = scale(desc, t, x);
            for (std::size_t p = 0; p < n_probes; ++p) acc[p] += cone.probes[p].eval(sx).real();
        }
        for (std::size_t p = 0; p < n_probes; ++p)
            orbit_min[p] = std::min(orbit_min[p], acc[p] / double(stored.size()));
    }

    const BatchTable base_table = base.table();
    std::vector<BatchTable> scaled_tables;
    for (auto& acc : scaled) scaled_tables.push_back(acc.table());

    std::vector<std::string> probe_block(n_probes);
    for (std::size_t p = 0; p < n_probes; ++p) {
        const std::complex<double> z0 = base.mean(p);
        if (std::abs(z0) < std::max(5.0 * base.std_error(p), 0.05)) {
            probe_block[p] = "base ecf magnitude too small";
            continue;
        }
        if (orbit_min[p] <= 0.02) {
            probe_block[p] = "ecf not bounded away from zero along the contraction orbit";
            continue;
        }
        for (std::size_t b = 0; b < cfg.batches && probe_block[p].empty(); ++b)
            if (std::abs(base_table[p][b]) < 1e-6) probe_block[p] = "batch ecf vanished";
    }

    auto scale_block = [&](std::size_t j, std::size_t p) -> std::string {
        if (std::abs(scaled[j].mean(p)) < std::max(5.0 * scaled[j].std_error(p), 0.05))
            return "scaled ecf magnitude too small";
        for (std::size_t b = 0; b < cfg.batches; ++b)
            if (std::abs(scaled_tables[j][p][b]) < 1e-6) return "batch ecf vanished";
        return {};
    };

    VerificationReport rep = base_report("phi_homogeneity", cone, cfg, nb);
    {
        std::string sc;
        for (double s : cfg.phi_scales) sc += (sc.empty() ? "" : ",") + fmt(s);
        rep.notes = "scales=" + sc;
    }

    BatchTable rows;
    std::vector<double> row_allow;
    std::vector<std::size_t> row_pos;  // flattened (scale, probe) -> row
    std::vector<ProbeReportRow> probe_rows(n_scales * n_probes);
    row_pos.assign(n_scales * n_probes, std::size_t(-1));
    for (std::size_t j = 0; j < n_scales; ++j) {
        const double s = cfg.phi_scales[j];
        const double sa = std::pow(s, alpha);
        for (std::size_t p = 0; p < n_probes; ++p) {
            ProbeReportRow& row = probe_rows[j * n_probes + p];
            row.label = "s" + fmt(s) + ":" + cone.probes[p].label();
            if (!probe_block[p].empty()) {
                row.excluded = true;
                row.note = probe_block[p];
                continue;
            }
            if (!grid_reads_exact(desc, cone.probes[p], s)) {
                row.excluded = true;
                row.note = "time reparametrization by this scale reads off the grid";
                continue;
            }
            if (const std::string sb = scale_block(j, p); !sb.empty()) {
                row.excluded = true;
                row.note = sb;
                continue;
            }
            const double allowv =
                phi_shift_allowance(desc, spectral, cone.probes[p], alpha, s, cfg.truncation_r);
            row.allowance = allowv;
            if (!std::isfinite(allowv)) {
                row.excluded = true;
                row.note = "no truncation shift bound";
                continue;
            }
            // batch values carry the scatter; the full-sample estimate
            // replaces the batch mean to dodge the log's small-sample bias
            std::vector<std::complex<double>> vals(cfg.batches);
            std::complex<double> bmean(0.0, 0.0);
            for (std::size_t b = 0; b < cfg.batches; ++b) {
                vals[b] = -std::log(scaled_tables[j][p][b]) + sa * std::log(base_table[p][b]);
                bmean += vals[b];
            }
            bmean /= double(cfg.batches);
            const std::complex<double> full =
                -std::log(scaled[j].mean(p)) + sa * std::log(base.mean(p));
            for (auto& v : vals) v += full - bmean;
            row_pos[j * n_probes + p] = rows.size();
            rows.push_back(std::move(vals));
            row_allow.push_back(allowv);
        }
    }
    if (rows.empty()) throw DomainError("no probe/scale pair is usable for the exponent test");

    RngStream cal(cfg.master_seed, kStreamPhiCal);
    const CalibratedMaxStat st =
        bootstrap_calibrated(rows, row_allow, cfg.level, cfg.permutations, cal);
    rep.passed = st.passed;
    rep.statistic = st.statistic;
    rep.threshold = st.threshold;
    rep.p_value = st.p_value;
    for (std::size_t k = 0; k < probe_rows.size(); ++k) {
        if (row_pos[k] != std::size_t(-1)) {
            probe_rows[k].statistic = st.probe_stats[row_pos[k]];
            probe_rows[k].abs_delta = st.probe_abs_delta[row_pos[k]];
            probe_rows[k].std_error = st.probe_se[row_pos[k]];
        }
        rep.probes.push_back(std::move(probe_rows[k]));
    }
    return rep;
}

VerificationReport empirical_homogeneity_test(const WiredCone& cone, const SuiteConfig& cfg) {
    check_suite_config(cfg);
    if (cfg.band_scales.empty()) throw DomainError("need at least one band scale");
    for (double s : cfg.band_scales)
        if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("band scales must be positive");
    const ConeDescriptor& desc = cone.descriptor;
    const double alpha = cone.spec.alpha;
    const SpectralSampler spectral = make_spectral(desc, cone.spec.spectral);
    const RadialLaw law(alpha);

    const bool slow_tau = cone.transversal.kind() == TransversalKind::OrbitNorm ||
                          cone.transversal.kind() == TransversalKind::CharacterBased;
    std::size_t runs = cfg.n;
    std::string cap_note;
    if (slow_tau && runs > 2000) {
        runs = 2000;
        cap_note = " runs capped at 2000 (per-point radial coordinate cost)";
    }

    constexpr std::array<double, 5> kEdges{0.5, 1.0, 2.0, 4.0, 8.0};
    constexpr std::size_t kBands = kEdges.size() - 1;
    auto band_of = [&](double v) -> int {
        if (!(v >= kEdges.front()) || v >= kEdges.back()) return -1;
        for (std::size_t j = 1; j < kEdges.size(); ++j)
            if (v < kEdges[j]) return int(j - 1);
        return -1;
    };

    const double expo = radial_weight_exponent(alpha, cfg.mutation);
    SeriesOptions opts;
    opts.truncation_r = cfg.truncation_r;
    opts.mutation = cfg.mutation;
    opts.keep_points = true;

    std::array<long, kBands> count1{};
    std::vector<std::array<long, kBands>> count2(cfg.band_scales.size());
    for (auto& c : count2) c.fill(0);
    double tau_max = 0.0;

    RngStream rs(cfg.master_seed, kStreamHomogeneity);
    for (std::size_t run = 0; run < runs; ++run) {
        const SeriesSample smp = sample_series(desc, law, spectral, opts, rs);
        for (std::size_t i = 0; i < smp.term_count; ++i) {
            const double tau = cone.transversal.tau(desc, smp.marks[i]);
            tau_max = std::max(tau_max, tau);
            const double rho = std::pow(smp.gammas[i], expo) * tau;
            int j = band_of(rho);
            if (j >= 0) ++count1[std::size_t(j)];
            for (std::size_t k = 0; k < cfg.band_scales.size(); ++k) {
                j = band_of(rho / cfg.band_scales[k]);
                if (j >= 0) ++count2[k][std::size_t(j)];
            }
        }
    }

    double tau_sup = kNaN;
    bool declared = true;
    switch (cone.transversal.kind()) {
        case TransversalKind::VectorNorm:
            if (std::isfinite(spectral.sup_bound))
                tau_sup = std::sqrt(double(spectral.width)) * spectral.sup_bound;
            break;
        case TransversalKind::SupNorm:
            tau_sup = spectral.sup_bound;
            break;
        case TransversalKind::TotalMass:
            tau_sup = spectral.sup_bound;
            break;
        default:
            break;
    }
    if (!std::isfinite(tau_sup)) {
        tau_sup = tau_max * 1.5;
        declared = false;
    }
    // kept arrivals satisfy Gamma <= r, so every surviving point has weight
    // >= r^expo; bands touching rho < r^expo tau_sup may be censored
    const double censor = std::pow(cfg.truncation_r, expo) * tau_sup;

    VerificationReport rep = base_report("empirical_homogeneity", cone, cfg, runs);
    rep.notes = std::string("tau_sup=") + fmt(tau_sup) + (declared ? " (declared)" : " (empirical max x 1.5)") +
                cap_note;

    double max_gap = 0.0;
    std::size_t tested = 0;
    bool all_overlap = true;
    for (std::size_t k = 0; k < cfg.band_scales.size(); ++k) {
        const double s = cfg.band_scales[k];
        const double sa = std::pow(s, alpha);
        for (std::size_t j = 0; j < kBands; ++j) {
            ProbeReportRow row;
            row.label = "s" + fmt(s) + ":band[" + fmt(kEdges[j]) + "," + fmt(kEdges[j + 1]) + ")";
            const double lo_edge = std::min(kEdges[j], s * kEdges[j]);
            if (lo_edge < censor * (1.0 + 1e-9)) {
                row.excluded = true;
                row.note = "band reaches below the truncation censor";
                rep.probes.push_back(std::move(row));
                continue;
            }
            const PoissonInterval i1 = poisson_exact_ci(count1[j], 0.001);
            const PoissonInterval i2 = poisson_exact_ci(count2[k][j], 0.001);
            const double lo2 = sa * i2.lo;
            const double hi2 = sa * i2.hi;
            const double gap = std::max(0.0, std::max(i1.lo - hi2, lo2 - i1.hi));
            row.statistic = gap;
            row.abs_delta = std::abs(double(count1[j]) - sa * double(count2[k][j]));
            row.std_error = std::sqrt(double(count1[j]) + sa * sa * double(count2[k][j]));
            row.note = "n1=" + fmt(double(count1[j])) + " n2=" + fmt(double(count2[k][j]));
            rep.probes.push_back(std::move(row));
            ++tested;
            max_gap = std::max(max_gap, gap);
            if (gap > 0.0) all_overlap = false;
        }
    }
    rep.statistic = max_gap;
    rep.threshold = 0.0;
    rep.p_value = kNaN;
    rep.passed = all_overlap && tested > 0;
    if (tested == 0) rep.notes += " no band clear of the censor";
    return rep;
}

VerificationReport cms_comparison_test(const WiredCone& cone, const SuiteConfig& cfg) {
    check_suite_config(cfg);
    const ConeDescriptor& desc = cone.descriptor;
    if (desc.variant != ConeVariant::Euclidean || desc.dimension != 1 ||
        desc.scaling != ScalingKind::Multiplicative || desc.op != SemigroupOp::VectorSum)
        throw DomainError("distributional comparison needs the one-dimensional line cone");
    if (cone.spec.spectral.kind != "rademacher")
        throw DomainError("distributional comparison requires rademacher marks");
    const double alpha = cone.spec.alpha;
    const SpectralSampler spectral = make_spectral(desc, cone.spec.spectral);
    const RadialLaw law(alpha);
    const std::size_t nb = usable_n(cfg);
    const std::size_t per = nb / cfg.batches;
    const double scale_const = cfg.cms_skip_rescale ? 1.0 : std::pow(c_alpha(alpha), -1.0 / alpha);

    EcfAccumulator series_acc(cone.probes, nb, cfg.batches);
    EcfAccumulator exact_acc(cone.probes, nb, cfg.batches);
    SeriesOptions opts;
    opts.truncation_r = cfg.truncation_r;
    opts.mutation = cfg.mutation;
    for (std::size_t bt = 0; bt < cfg.batches; ++bt) {
        RngStream r1(cfg.master_seed, kStreamCmsSeries + bt);
        RngStream r2(cfg.master_seed, kStreamCmsExact + bt);
        for (std::size_t i = 0; i < per; ++i) {
            const SeriesSample x = sample_series(desc, law, spectral, opts, r1);
            series_acc.add(scale(desc, scale_const, x.value));
            exact_acc.add(ConeElement::euclidean({cms_standard_sample(alpha, r2)}));
        }
    }

    std::vector<double> allow(cone.probes.size(), kNaN);
    std::vector<std::size_t> keep;
    for (std::size_t p = 0; p < cone.probes.size(); ++p) {
        allow[p] = ecf_truncation_allowance(desc, spectral, cone.probes[p], alpha, 1.0,
                                            cfg.truncation_r, scale_const);
        if (std::isfinite(allow[p])) keep.push_back(p);
    }
    if (keep.empty())
        throw DomainError("no probe admits a truncation allowance for this configuration");

    const BatchTable t1 = series_acc.table();
    const BatchTable t2 = exact_acc.table();
    BatchTable k1, k2;
    std::vector<double> ka;
    for (std::size_t idx : keep) {
        k1.push_back(t1[idx]);
        k2.push_back(t2[idx]);
        ka.push_back(allow[idx]);
    }
    RngStream cal(cfg.master_seed, kStreamCmsCal);
    const CalibratedMaxStat st =
        two_sample_calibrated(k1, k2, ka, cfg.level, cfg.permutations, cal);

    VerificationReport rep = base_report("cms_comparison", cone, cfg, nb);
    rep.notes = "scale_const=" + fmt(scale_const) +
                (cfg.cms_skip_rescale ? " (rescale skipped)" : "");
    fill_calibrated(rep, st, cone.probes, keep, allow);
    return rep;
}

VerificationReport eps_integrability_report(const WiredCone& cone, const SuiteConfig& cfg) {
    if (cfg.eps_probe_cap == 0) throw DomainError("need at least one integrability probe");
    const ConeDescriptor& desc = cone.descriptor;
    const SpectralSampler spectral = make_spectral(desc, cone.spec.spectral);
    const RadialLaw law(cone.spec.alpha);
    EpsConditionConfig ec;
    ec.log2_t_max = cfg.eps_log2_t_max;
    ec.samples = cfg.eps_samples;
    ec.batches = cfg.eps_batches;

    const std::size_t count = std::min(cfg.eps_probe_cap, cone.probes.size());
    VerificationReport rep = base_report("eps_integrability", cone, cfg, count);
    std::size_t bad = 0;
    for (std::size_t p = 0; p < count; ++p) {
        RngStream rs(cfg.master_seed, kStreamEps + p);
        const EpsConditionResult res =
            eps_condition_check(desc, law, spectral, cone.probes[p], rs, ec);
        ProbeReportRow row;
        row.label = cone.probes[p].label();
        row.statistic = res.value;
        row.abs_delta = res.slope_low;
        row.std_error = res.std_error;
        row.allowance = res.upper_tail_bound;
        if (res.divergent) {
            row.note = "divergent: small-scale slope " + fmt(res.slope_low) +
                       " <= alpha = " + fmt(cone.spec.alpha);
            ++bad;
        } else if (!res.converged) {
            row.note = "estimate unconverged";
            ++bad;
        } else if (!std::isfinite(res.value)) {
            row.note = "non-finite value";
            ++bad;
        }
        rep.probes.push_back(std::move(row));
    }
    rep.statistic = double(bad);
    rep.threshold = 0.0;
    rep.p_value = kNaN;
    rep.passed = bad == 0;
    rep.notes = "log2_t in [-24," + fmt(cfg.eps_log2_t_max) + "], probes scanned=" + fmt(double(count));
    return rep;
}

std::vector<VerificationReport> run_suite(const WiredCone& cone, const std::string& suite,
                                          const SuiteConfig& cfg) {
    if (suite == "stability") return {stability_test(cone, cfg)};
    if (suite == "phi") return {phi_homogeneity_test(cone, cfg)};
    if (suite == "homogeneity") return {empirical_homogeneity_test(cone, cfg)};
    if (suite == "cms") return {cms_comparison_test(cone, cfg)};
    if (suite == "eps") return {eps_integrability_report(cone, cfg)};
    if (suite == "all") {
        std::vector<VerificationReport> out;
        out.push_back(stability_test(cone, cfg));
        out.push_back(phi_homogeneity_test(cone, cfg));
        out.push_back(empirical_homogeneity_test(cone, cfg));
        const ConeDescriptor& d = cone.descriptor;
        if (d.variant == ConeVariant::Euclidean && d.dimension == 1 &&
            d.scaling == ScalingKind::Multiplicative && d.op == SemigroupOp::VectorSum &&
            cone.spec.spectral.kind == "rademacher" && cone.spec.alpha < 2.0)
            out.push_back(cms_comparison_test(cone, cfg));
        out.push_back(eps_integrability_report(cone, cfg));
        return out;
    }
    throw ContractViolation("unknown suite '" + suite + "'");
}

} // namespace stablecone
