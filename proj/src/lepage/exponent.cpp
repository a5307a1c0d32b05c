#include "lepage/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "core/element.hpp"
#include "errors.hpp"
#include "core/matrix.hpp"

namespace stablecone {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class BankKind { LinearPhase, LinearDecay, StepThreshold, TimePhase, OperatorPhase, Generic };

// Mean of 1 - chi(t * mark) over a fixed bank of marks. Each supported
// (scaling, family) pair reduces a mark to one scalar so the quadrature's
// inner loop is allocation free:
//   LinearPhase    value scaling + fourier:    phase(t x) = t * P
//   LinearDecay    value scaling + exp_decay,
//                  weight scaling + laplace:   exponent(t x) = t * D
//   StepThreshold  value scaling + indicator:  chi(t x) = 1{t < T}
//   TimePhase      time scaling + fourier:     grid lookups per term
//   OperatorPhase  operator scaling + fourier: one matrix exponential per t
// Anything else falls back to scale-then-eval.
class ScaledMeanEvaluator {
public:
    ScaledMeanEvaluator(const ConeDescriptor& desc, const Character& chi,
                        std::vector<ConeElement> marks)
        : desc_(desc), chi_(chi), marks_(std::move(marks)) {
        const bool value_scaled = desc_.scaling == ScalingKind::Multiplicative;
        switch (chi_.family()) {
            case Character::Family::Fourier:
                if (value_scaled)
                    kind_ = BankKind::LinearPhase;
                else if (desc_.scaling == ScalingKind::OperatorExp)
                    kind_ = BankKind::OperatorPhase;
                else if (desc_.scaling == ScalingKind::TimeReparam)
                    kind_ = BankKind::TimePhase;
                break;
            case Character::Family::ExpDecay:
                if (value_scaled) kind_ = BankKind::LinearDecay;
                break;
            case Character::Family::Indicator:
                if (value_scaled) kind_ = BankKind::StepThreshold;
                break;
            case Character::Family::Laplace:
                if (desc_.scaling == ScalingKind::WeightScaling) kind_ = BankKind::LinearDecay;
                break;
        }
        build();
    }

    std::size_t size() const { return marks_.size(); }

    bool real_valued() const { return chi_.family() != Character::Family::Fourier; }

    double mean_one_minus_re(double t, std::size_t lo, std::size_t hi) const {
        double s = 0.0;
        switch (kind_) {
            case BankKind::LinearPhase:
                for (std::size_t i = lo; i < hi; ++i) {
                    const double h = std::sin(0.5 * t * stat_[i]);
                    s += 2.0 * h * h;
                }
                break;
            case BankKind::LinearDecay:
                for (std::size_t i = lo; i < hi; ++i) s -= std::expm1(-t * stat_[i]);
                break;
            case BankKind::StepThreshold:
                for (std::size_t i = lo; i < hi; ++i) s += (t >= stat_[i]) ? 1.0 : 0.0;
                break;
            case BankKind::TimePhase:
                for (std::size_t i = lo; i < hi; ++i) {
                    const double h = std::sin(0.5 * time_phase(t, i));
                    s += 2.0 * h * h;
                }
                break;
            case BankKind::OperatorPhase: {
                prepare_operator_row(t);
                for (std::size_t i = lo; i < hi; ++i) {
                    const double h = std::sin(0.5 * operator_phase(i));
                    s += 2.0 * h * h;
                }
                break;
            }
            case BankKind::Generic:
                for (std::size_t i = lo; i < hi; ++i)
                    s += chi_.one_minus_re(scale(desc_, t, marks_[i]));
                break;
        }
        return s / static_cast<double>(hi - lo);
    }

    // imaginary part of mean(1 - chi(t * mark)); zero for real families
    double mean_one_minus_im(double t, std::size_t lo, std::size_t hi) const {
        if (real_valued()) return 0.0;
        double s = 0.0;
        switch (kind_) {
            case BankKind::LinearPhase:
                for (std::size_t i = lo; i < hi; ++i) s -= std::sin(t * stat_[i]);
                break;
            case BankKind::TimePhase:
                for (std::size_t i = lo; i < hi; ++i) s -= std::sin(time_phase(t, i));
                break;
            case BankKind::OperatorPhase: {
                prepare_operator_row(t);
                for (std::size_t i = lo; i < hi; ++i) s -= std::sin(operator_phase(i));
                break;
            }
            default:
                for (std::size_t i = lo; i < hi; ++i)
                    s -= chi_.eval(scale(desc_, t, marks_[i])).imag();
                break;
        }
        return s / static_cast<double>(hi - lo);
    }

private:
    void build() {
        const std::size_t n = marks_.size();
        switch (kind_) {
            case BankKind::LinearPhase: {
                stat_.resize(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const auto& v = marks_[i].values();
                    double p = 0.0;
                    for (const auto& term : chi_.phase_terms()) {
                        if (term.index >= v.size())
                            throw ContractViolation("fourier term index out of range");
                        p += term.freq * v[term.index];
                    }
                    stat_[i] = p;
                }
                break;
            }
            case BankKind::LinearDecay: {
                stat_.resize(n);
                if (chi_.family() == Character::Family::ExpDecay) {
                    for (std::size_t i = 0; i < n; ++i) stat_[i] = decay_stat(marks_[i]);
                } else {
                    for (std::size_t i = 0; i < n; ++i) stat_[i] = laplace_stat(marks_[i]);
                }
                break;
            }
            case BankKind::StepThreshold: {
                stat_.resize(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const auto& v = marks_[i].values();
                    double thr = kInf;
                    for (const auto& cut : chi_.cutoffs()) {
                        if (cut.index >= v.size())
                            throw ContractViolation("indicator index out of range");
                        if (v[cut.index] > 0.0) thr = std::min(thr, cut.threshold / v[cut.index]);
                    }
                    stat_[i] = thr;
                }
                break;
            }
            case BankKind::OperatorPhase: {
                width_ = desc_.dimension;
                flat_.resize(n * width_);
                for (std::size_t i = 0; i < n; ++i) {
                    const auto& v = marks_[i].values();
                    std::copy(v.begin(), v.end(), flat_.begin() + i * width_);
                }
                row_.resize(width_);
                break;
            }
            default:
                break;
        }
    }

    double decay_stat(const ConeElement& x) const {
        const auto& v = x.values();
        const auto& w = chi_.decay_weights();
        if (w.size() != v.size()) throw ContractViolation("exp-decay weight dimension mismatch");
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (w[i] != 0.0 && v[i] < 0.0)
                throw ContractViolation("exp-decay characters need non-negative elements");
            s += w[i] * v[i];
        }
        return s;
    }

    double laplace_stat(const ConeElement& x) const {
        double s = 0.0;
        for (const auto& atom : x.atoms()) {
            double u = 0.0;
            for (const auto& tent : chi_.tents()) {
                if (tent.center.size() != atom.location.size())
                    throw ContractViolation("tent dimension does not match atom locations");
                double d2 = 0.0;
                for (std::size_t k = 0; k < tent.center.size(); ++k) {
                    const double d = atom.location[k] - tent.center[k];
                    d2 += d * d;
                }
                u += tent.amplitude * std::max(0.0, 1.0 - std::sqrt(d2) / tent.radius);
            }
            s += atom.weight * u;
        }
        return s;
    }

    double time_phase(double t, std::size_t i) const {
        const auto& pts = desc_.grid->points();
        const auto& v = marks_[i].values();
        double p = 0.0;
        for (const auto& term : chi_.phase_terms()) {
            if (term.index >= v.size()) throw ContractViolation("fourier term index out of range");
            p += term.freq * desc_.grid->eval(v, t * pts[term.index]);
        }
        return p;
    }

    void prepare_operator_row(double t) const {
        const SquareMatrix m = expm(desc_.matrix.scaled(std::log(t)));
        std::fill(row_.begin(), row_.end(), 0.0);
        for (const auto& term : chi_.phase_terms()) {
            if (term.index >= width_) throw ContractViolation("fourier term index out of range");
            for (std::size_t j = 0; j < width_; ++j) row_[j] += term.freq * m.at(term.index, j);
        }
    }

    double operator_phase(std::size_t i) const {
        const double* x = flat_.data() + i * width_;
        double p = 0.0;
        for (std::size_t j = 0; j < width_; ++j) p += row_[j] * x[j];
        return p;
    }

    const ConeDescriptor& desc_;
    const Character& chi_;
    std::vector<ConeElement> marks_;
    BankKind kind_ = BankKind::Generic;
    std::vector<double> stat_;
    std::vector<double> flat_;
    std::size_t width_ = 0;
    mutable std::vector<double> row_;
};

std::vector<ConeElement> draw_marks(const SpectralSampler& spectral, RngStream& rng,
                                    std::size_t n) {
    std::vector<ConeElement> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(spectral.draw(rng, nullptr));
    return out;
}

struct BatchStats {
    double mean = 0.0;
    double se = 0.0;
};

BatchStats reduce(const std::vector<double>& vals) {
    BatchStats out;
    const double n = static_cast<double>(vals.size());
    for (double v : vals) out.mean += v;
    out.mean /= n;
    double ss = 0.0;
    for (double v : vals) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / (n * (n - 1.0)));
    return out;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

} // namespace

LaplaceExponentResult truncated_laplace_exponent(const ConeDescriptor& desc, const RadialLaw& law,
                                                 const SpectralSampler& spectral,
                                                 const Character& chi, double r, RngStream& rng,
                                                 const LaplaceExponentConfig& cfg) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw DomainError("truncation level must be strictly positive and finite");
    if (cfg.batches < 2) throw ContractViolation("need at least two batches");
    if (cfg.samples < cfg.batches) throw ContractViolation("need at least one sample per batch");
    const double alpha = law.alpha();
    const double t_lo = std::pow(r, -1.0 / alpha);
    if (!(t_lo < cfg.t_hi))
        throw DomainError("integration window is empty; raise t_hi or the truncation level");

    const std::size_t per_batch = cfg.samples / cfg.batches;
    const std::size_t total = per_batch * cfg.batches;
    ScaledMeanEvaluator bank(desc, chi, draw_marks(spectral, rng, total));

    LaplaceExponentResult out;
    std::vector<double> re_vals(cfg.batches), im_vals(cfg.batches, 0.0);
    for (std::size_t b = 0; b < cfg.batches; ++b) {
        const std::size_t lo = b * per_batch;
        const std::size_t hi = lo + per_batch;
        auto re_f = [&](double t) {
            return alpha * std::pow(t, -alpha - 1.0) * bank.mean_one_minus_re(t, lo, hi);
        };
        const QuadResult qr = integrate_log_sub(re_f, t_lo, cfg.t_hi, cfg.quad);
        re_vals[b] = qr.value;
        out.converged = out.converged && qr.converged;
        if (!bank.real_valued()) {
            auto im_f = [&](double t) {
                return alpha * std::pow(t, -alpha - 1.0) * bank.mean_one_minus_im(t, lo, hi);
            };
            const QuadResult qi = integrate_log_sub(im_f, t_lo, cfg.t_hi, cfg.quad);
            im_vals[b] = qi.value;
            out.converged = out.converged && qi.converged;
        }
    }
    const BatchStats re = reduce(re_vals);
    const BatchStats im = reduce(im_vals);
    out.value = {re.mean, im.mean};
    out.std_error = std::hypot(re.se, im.se);
    out.tail_bound = 2.0 * std::pow(cfg.t_hi, -alpha);
    return out;
}

EpsConditionResult eps_condition_check(const ConeDescriptor& desc, const RadialLaw& law,
                                       const SpectralSampler& spectral, const Character& chi,
                                       RngStream& rng, const EpsConditionConfig& cfg) {
    if (cfg.batches < 2) throw ContractViolation("need at least two batches");
    if (cfg.samples < cfg.batches) throw ContractViolation("need at least one sample per batch");
    if (!(cfg.log2_t_min < cfg.log2_t_max))
        throw ContractViolation("profile window must be non-degenerate");
    const double alpha = law.alpha();

    const std::size_t per_batch = cfg.samples / cfg.batches;
    const std::size_t total = per_batch * cfg.batches;
    ScaledMeanEvaluator bank(desc, chi, draw_marks(spectral, rng, total));

    // pooled quarter-octave profile of G(t) = E[1 - Re chi(t eps)]
    std::vector<double> ks, gs;
    for (double k = cfg.log2_t_min; k <= cfg.log2_t_max + 1e-9; k += 0.25) {
        ks.push_back(k);
        gs.push_back(bank.mean_one_minus_re(std::exp2(k), 0, total));
    }

    auto window_slope = [&](double k_lo, double k_hi) {
        std::vector<double> xs, ys;
        for (std::size_t j = 0; j < ks.size(); ++j)
            if (ks[j] >= k_lo - 1e-9 && ks[j] <= k_hi + 1e-9 && gs[j] > 0.0) {
                xs.push_back(ks[j]);
                ys.push_back(std::log2(gs[j]));
            }
        if (xs.size() < 2) return kNaN;
        return fit_slope(xs, ys);
    };

    EpsConditionResult out;
    out.slope_low = window_slope(cfg.log2_t_min, cfg.log2_t_min + 6.0);
    out.slope_high = window_slope(cfg.log2_t_max - 6.0, cfg.log2_t_max);
    out.upper_tail_bound = 2.0 * std::exp2(-alpha * cfg.log2_t_max);

    // G ~ t^s near 0 makes the integrand t^(s - alpha - 1); the integral
    // diverges at 0 when s <= alpha, flagged with a 0.05 safety margin.
    if (std::isfinite(out.slope_low) && out.slope_low <= alpha + 0.05) {
        out.divergent = true;
        out.value = kInf;
        out.lower_tail = kInf;
        return out;
    }

    const double t_min = std::exp2(cfg.log2_t_min);
    const double t_max = std::exp2(cfg.log2_t_max);
    std::vector<double> vals(cfg.batches);
    for (std::size_t b = 0; b < cfg.batches; ++b) {
        const std::size_t lo = b * per_batch;
        const std::size_t hi = lo + per_batch;
        auto f = [&](double t) {
            return alpha * std::pow(t, -alpha - 1.0) * bank.mean_one_minus_re(t, lo, hi);
        };
        const QuadResult qr = integrate_log_sub(f, t_min, t_max, cfg.quad);
        vals[b] = qr.value;
        out.converged = out.converged && qr.converged;
    }
    const BatchStats st = reduce(vals);

    const double g0 = gs.front();
    if (g0 > 0.0) {
        if (!std::isfinite(out.slope_low)) {
            out.lower_tail = kNaN;
            out.converged = false;
        } else {
            // extend G(t) = g0 (t / t_min)^s below the grid and integrate
            out.lower_tail = g0 * alpha * std::pow(t_min, -alpha) / (out.slope_low - alpha);
        }
    }
    out.value = st.mean + (std::isfinite(out.lower_tail) ? out.lower_tail : 0.0);
    out.std_error = st.se;
    return out;
}

} // namespace stablecone
